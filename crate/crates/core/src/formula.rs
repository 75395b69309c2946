//! The modal formula language.
//!
//! Core formulas are built from exactly four constructors: propositional
//! variables, falsum, implication and box. Everything else (negation,
//! conjunction, disjunction, equivalence, verum, diamond) is an abbreviation
//! that the parser expands and that never occurs in a [`Formula`] value.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

/// A set of formulas, ordered by their printed form.
pub type FormulaSet = BTreeSet<Formula>;

/// A modal propositional formula.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    /// Propositional variable.
    Var(String),
    /// Falsum.
    Bot,
    /// Implication; right-associative in the surface syntax.
    Imp(Box<Formula>, Box<Formula>),
    /// Modal box; binds tighter than implication.
    Box(Box<Formula>),
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Self {
        Formula::Var(name.into())
    }

    pub fn imp(left: Formula, right: Formula) -> Self {
        Formula::Imp(Box::new(left), Box::new(right))
    }

    pub fn boxed(body: Formula) -> Self {
        Formula::Box(Box::new(body))
    }

    /// ~f, expanded as f -> _|_.
    #[allow(clippy::should_implement_trait)]
    pub fn neg(f: Formula) -> Self {
        Self::imp(f, Formula::Bot)
    }

    /// Verum, expanded as _|_ -> _|_.
    pub fn top() -> Self {
        Self::neg(Formula::Bot)
    }

    /// a & b, expanded as ~(a -> ~b).
    pub fn and(left: Formula, right: Formula) -> Self {
        Self::neg(Self::imp(left, Self::neg(right)))
    }

    /// a | b, expanded as ~a -> b.
    pub fn or(left: Formula, right: Formula) -> Self {
        Self::imp(Self::neg(left), right)
    }

    /// a <-> b, expanded as (a -> b) & (b -> a).
    pub fn iff(left: Formula, right: Formula) -> Self {
        Self::and(
            Self::imp(left.clone(), right.clone()),
            Self::imp(right, left),
        )
    }

    /// <>f, expanded as ~[]~f.
    pub fn diamond(body: Formula) -> Self {
        Self::neg(Self::boxed(Self::neg(body)))
    }

    pub fn is_boxed(&self) -> bool {
        matches!(self, Formula::Box(_))
    }

    /// Node count of the syntax tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Bot => 1,
            Formula::Imp(a, b) => 1 + a.size() + b.size(),
            Formula::Box(a) => 1 + a.size(),
        }
    }

    /// The set of all subformulas, including the formula itself.
    pub fn subformulas(&self) -> FormulaSet {
        let mut out = FormulaSet::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas(&self, out: &mut FormulaSet) {
        if out.insert(self.clone()) {
            match self {
                Formula::Imp(a, b) => {
                    a.collect_subformulas(out);
                    b.collect_subformulas(out);
                }
                Formula::Box(a) => a.collect_subformulas(out),
                Formula::Var(_) | Formula::Bot => {}
            }
        }
    }

    /// The boxed members of the subformula set.
    pub fn boxed_subformulas(&self) -> FormulaSet {
        self.subformulas()
            .into_iter()
            .filter(Formula::is_boxed)
            .collect()
    }

    /// Variable names occurring in the formula, sorted.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_variables(&mut out);
        out
    }

    fn collect_variables(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Var(name) => {
                out.insert(name.clone());
            }
            Formula::Bot => {}
            Formula::Imp(a, b) => {
                a.collect_variables(out);
                b.collect_variables(out);
            }
            Formula::Box(a) => a.collect_variables(out),
        }
    }
}

/// Subformula closure of a set of formulas.
pub fn subformula_closure(set: &FormulaSet) -> FormulaSet {
    let mut out = FormulaSet::new();
    for f in set {
        f.collect_subformulas(&mut out);
    }
    out
}

/// Canonical ASCII rendering: `[]` binds tighter than `->`, `->` is
/// right-associative, parentheses only where the precedence requires them.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Var(name) => write!(f, "{name}"),
            Formula::Bot => write!(f, "_|_"),
            Formula::Box(a) => {
                if matches!(**a, Formula::Imp(..)) {
                    write!(f, "[]({a})")
                } else {
                    write!(f, "[]{a}")
                }
            }
            Formula::Imp(a, b) => {
                if matches!(**a, Formula::Imp(..)) {
                    write!(f, "({a}) -> {b}")
                } else {
                    write!(f, "{a} -> {b}")
                }
            }
        }
    }
}

// Formulas are ordered by printed form so that set iteration, branch
// selection, and reduction order are all the same lexicographic order.
// Printing is injective (parsing it back yields the same formula), so this
// ordering is consistent with structural equality.
impl Ord for Formula {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        self.to_string().cmp(&other.to_string())
    }
}

impl PartialOrd for Formula {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

//! Two-level sequents, the inference rules, proof trees, and an independent
//! proof checker.
//!
//! Sequent sides are finite sets, so exchange and contraction are built in;
//! weakening is the only explicit structural rule. The checker validates any
//! tree node by node against the rule schemas, including `cut` — the search
//! module never emits `cut`, which is what makes checking cut-carrying trees
//! against cut-free search results meaningful.

use crate::formula::{Formula, FormulaSet};
use std::fmt;

/// Sequent level. First-level sequents are written `Γ ⇒ Δ`, second-level
/// ones `Γ ⇛ Δ`. The lift rule moves first-level conclusions to the second
/// level and is one-way.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    First,
    Second,
}

impl Level {
    pub fn arrow(self) -> &'static str {
        match self {
            Level::First => "⇒",
            Level::Second => "⇛",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.arrow())
    }
}

/// A sequent: a level tag plus two finite formula sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sequent {
    pub level: Level,
    pub antecedent: FormulaSet,
    pub succedent: FormulaSet,
}

impl Sequent {
    pub fn new(
        level: Level,
        antecedent: impl IntoIterator<Item = Formula>,
        succedent: impl IntoIterator<Item = Formula>,
    ) -> Self {
        Sequent {
            level,
            antecedent: antecedent.into_iter().collect(),
            succedent: succedent.into_iter().collect(),
        }
    }

    pub fn first(
        antecedent: impl IntoIterator<Item = Formula>,
        succedent: impl IntoIterator<Item = Formula>,
    ) -> Self {
        Self::new(Level::First, antecedent, succedent)
    }

    pub fn second(
        antecedent: impl IntoIterator<Item = Formula>,
        succedent: impl IntoIterator<Item = Formula>,
    ) -> Self {
        Self::new(Level::Second, antecedent, succedent)
    }

    /// An initial sequent: the two sides share a formula, or falsum sits on
    /// the left.
    pub fn is_axiom(&self) -> bool {
        self.antecedent.contains(&Formula::Bot)
            || self.antecedent.iter().any(|f| self.succedent.contains(f))
    }

    /// Same sides at the given level.
    pub fn at_level(&self, level: Level) -> Sequent {
        Sequent {
            level,
            antecedent: self.antecedent.clone(),
            succedent: self.succedent.clone(),
        }
    }

    /// All formulas of both sides.
    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.antecedent.iter().chain(self.succedent.iter())
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |side: &FormulaSet| {
            side.iter()
                .map(Formula::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        };
        let ant = join(&self.antecedent);
        let suc = join(&self.succedent);
        match (ant.is_empty(), suc.is_empty()) {
            (true, true) => write!(f, "{}", self.level),
            (true, false) => write!(f, "{} {}", self.level, suc),
            (false, true) => write!(f, "{} {}", ant, self.level),
            (false, false) => write!(f, "{} {} {}", ant, self.level, suc),
        }
    }
}

/// `{φ | □φ ∈ s}`.
pub fn unbox(set: &FormulaSet) -> FormulaSet {
    set.iter()
        .filter_map(|f| match f {
            Formula::Box(body) => Some((**body).clone()),
            _ => None,
        })
        .collect()
}

/// `{□φ | φ ∈ s}`.
pub fn box_set(set: &FormulaSet) -> FormulaSet {
    set.iter().cloned().map(Formula::boxed).collect()
}

/// Inference rules. Principal formulas are carried on the rule so that a
/// tree is checkable without re-deriving which formula was introduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    /// `φ ▸ φ`
    InitId,
    /// `⊥ ▸`
    InitBot,
    /// Carries the cut formula.
    Cut(Formula),
    Weakening,
    /// Principal is the implication on the left.
    ImpL(Formula),
    /// Principal is the implication on the right.
    ImpR(Formula),
    /// Principal is the boxed succedent formula. First level only.
    BoxGL(Formula),
    /// Principal is the boxed antecedent formula. Second level only.
    BoxL(Formula),
    /// Lifts a first-level sequent to the second level, sides unchanged.
    LevelLift,
}

impl Rule {
    pub fn arity(&self) -> usize {
        match self {
            Rule::InitId | Rule::InitBot => 0,
            Rule::Weakening
            | Rule::ImpR(_)
            | Rule::BoxGL(_)
            | Rule::BoxL(_)
            | Rule::LevelLift => 1,
            Rule::Cut(_) | Rule::ImpL(_) => 2,
        }
    }

    /// Stable identifier used in the JSON form.
    pub fn name(&self) -> &'static str {
        match self {
            Rule::InitId => "init",
            Rule::InitBot => "init-bot",
            Rule::Cut(_) => "cut",
            Rule::Weakening => "weakening",
            Rule::ImpL(_) => "imp-l",
            Rule::ImpR(_) => "imp-r",
            Rule::BoxGL(_) => "box-gl",
            Rule::BoxL(_) => "box-l",
            Rule::LevelLift => "level-lift",
        }
    }

    pub fn principal(&self) -> Option<&Formula> {
        match self {
            Rule::Cut(f)
            | Rule::ImpL(f)
            | Rule::ImpR(f)
            | Rule::BoxGL(f)
            | Rule::BoxL(f) => Some(f),
            _ => None,
        }
    }
}

/// A derivation: a conclusion, the rule that ends it, and one subtree per
/// premise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofTree {
    pub conclusion: Sequent,
    pub rule: Rule,
    pub premises: Vec<ProofTree>,
}

impl ProofTree {
    pub fn new(conclusion: Sequent, rule: Rule, premises: Vec<ProofTree>) -> Self {
        ProofTree {
            conclusion,
            rule,
            premises,
        }
    }

    pub fn leaf(conclusion: Sequent, rule: Rule) -> Self {
        Self::new(conclusion, rule, Vec::new())
    }

    /// Number of nodes.
    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(ProofTree::node_count).sum::<usize>()
    }

    pub fn uses_cut(&self) -> bool {
        matches!(self.rule, Rule::Cut(_)) || self.premises.iter().any(ProofTree::uses_cut)
    }

    /// Principal formulas of all `box-l` nodes in the tree.
    pub fn box_l_principals(&self) -> FormulaSet {
        let mut out = FormulaSet::new();
        self.collect_box_l(&mut out);
        out
    }

    fn collect_box_l(&self, out: &mut FormulaSet) {
        if let Rule::BoxL(principal) = &self.rule {
            out.insert(principal.clone());
        }
        for premise in &self.premises {
            premise.collect_box_l(out);
        }
    }
}

/// Where and why a proof tree failed to check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckFailure {
    /// Premise indices from the root to the failing node.
    pub path: Vec<usize>,
    /// Conclusion of the failing node.
    pub conclusion: Sequent,
    pub reason: String,
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "invalid node at path {:?} with conclusion '{}': {}",
            self.path, self.conclusion, self.reason
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckResult {
    Valid,
    Invalid(CheckFailure),
}

impl CheckResult {
    pub fn is_valid(&self) -> bool {
        matches!(self, CheckResult::Valid)
    }
}

/// Check every node of a proof tree against the rule schemas. Returns the
/// first failing node in depth-first, leftmost order.
pub fn check_proof(tree: &ProofTree) -> CheckResult {
    let mut path = Vec::new();
    match check_node(tree, &mut path) {
        None => CheckResult::Valid,
        Some(failure) => CheckResult::Invalid(failure),
    }
}

fn check_node(tree: &ProofTree, path: &mut Vec<usize>) -> Option<CheckFailure> {
    if let Some(reason) = rule_violation(tree) {
        return Some(CheckFailure {
            path: path.clone(),
            conclusion: tree.conclusion.clone(),
            reason,
        });
    }
    for (i, premise) in tree.premises.iter().enumerate() {
        path.push(i);
        if let Some(failure) = check_node(premise, path) {
            return Some(failure);
        }
        path.pop();
    }
    None
}

fn union(set: &FormulaSet, f: &Formula) -> FormulaSet {
    let mut out = set.clone();
    out.insert(f.clone());
    out
}

fn without(set: &FormulaSet, f: &Formula) -> FormulaSet {
    let mut out = set.clone();
    out.remove(f);
    out
}

fn rule_violation(tree: &ProofTree) -> Option<String> {
    let c = &tree.conclusion;
    let rule = &tree.rule;
    if tree.premises.len() != rule.arity() {
        return Some(format!(
            "rule {} expects {} premise(s), found {}",
            rule.name(),
            rule.arity(),
            tree.premises.len()
        ));
    }
    let premise = |i: usize| &tree.premises[i].conclusion;
    match rule {
        Rule::InitId => {
            if c.antecedent.len() == 1 && c.antecedent == c.succedent {
                None
            } else {
                Some("initial sequent must be of the shape φ ▸ φ".into())
            }
        }
        Rule::InitBot => {
            let bot_only = c.antecedent.len() == 1 && c.antecedent.contains(&Formula::Bot);
            if bot_only && c.succedent.is_empty() {
                None
            } else {
                Some("initial sequent must be of the shape ⊥ ▸".into())
            }
        }
        Rule::Weakening => {
            let p = premise(0);
            if p.level != c.level {
                Some("level discipline: weakening keeps the level".into())
            } else if !p.antecedent.is_subset(&c.antecedent) {
                Some("weakening premise antecedent must be a subset".into())
            } else if !p.succedent.is_subset(&c.succedent) {
                Some("weakening premise succedent must be a subset".into())
            } else {
                None
            }
        }
        Rule::Cut(cut_formula) => {
            let (p1, p2) = (premise(0), premise(1));
            if p1.level != c.level || p2.level != c.level {
                Some("level discipline: cut keeps the level".into())
            } else if p1.antecedent != c.antecedent {
                Some("left cut premise must have the conclusion's antecedent".into())
            } else if p1.succedent != union(&c.succedent, cut_formula) {
                Some("left cut premise succedent must add the cut formula".into())
            } else if p2.antecedent != union(&c.antecedent, cut_formula) {
                Some("right cut premise antecedent must add the cut formula".into())
            } else if p2.succedent != c.succedent {
                Some("right cut premise must have the conclusion's succedent".into())
            } else {
                None
            }
        }
        Rule::ImpL(principal) => {
            let Formula::Imp(a, b) = principal else {
                return Some("imp-l principal must be an implication".into());
            };
            let (p1, p2) = (premise(0), premise(1));
            if p1.level != c.level || p2.level != c.level {
                Some("level discipline: imp-l keeps the level".into())
            } else if !c.antecedent.contains(principal) {
                Some("imp-l principal must occur in the conclusion antecedent".into())
            } else if union(&p1.antecedent, principal) != c.antecedent {
                Some("imp-l context antecedent does not match the conclusion".into())
            } else if p1.succedent != union(&c.succedent, a) {
                Some("left imp-l premise succedent must add the implication's antecedent".into())
            } else if p2.antecedent != union(&p1.antecedent, b) {
                Some("right imp-l premise antecedent must add the implication's consequent".into())
            } else if p2.succedent != c.succedent {
                Some("right imp-l premise must have the conclusion's succedent".into())
            } else {
                None
            }
        }
        Rule::ImpR(principal) => {
            let Formula::Imp(a, b) = principal else {
                return Some("imp-r principal must be an implication".into());
            };
            let p = premise(0);
            if p.level != c.level {
                Some("level discipline: imp-r keeps the level".into())
            } else if !c.succedent.contains(principal) {
                Some("imp-r principal must occur in the conclusion succedent".into())
            } else if p.antecedent != union(&c.antecedent, a) {
                Some("imp-r premise antecedent must add the implication's antecedent".into())
            } else if p.succedent != union(&c.succedent, b)
                && p.succedent != union(&without(&c.succedent, principal), b)
            {
                Some("imp-r premise succedent does not match the conclusion".into())
            } else {
                None
            }
        }
        Rule::BoxGL(principal) => {
            let Formula::Box(body) = principal else {
                return Some("box-gl principal must be boxed".into());
            };
            let p = premise(0);
            if c.level != Level::First || p.level != Level::First {
                Some("level discipline: box-gl applies to first-level sequents only".into())
            } else if c.succedent.len() != 1 || !c.succedent.contains(principal) {
                Some("box-gl conclusion succedent must be exactly the boxed principal".into())
            } else if !c.antecedent.iter().all(Formula::is_boxed) {
                Some("box-gl conclusion antecedent must consist of boxed formulas".into())
            } else {
                let gamma = unbox(&c.antecedent);
                let mut want_ant = gamma.clone();
                want_ant.extend(c.antecedent.iter().cloned());
                want_ant.insert(principal.clone());
                if p.antecedent != want_ant {
                    Some("box-gl premise antecedent must be Γ, □Γ, □φ".into())
                } else if p.succedent.len() != 1 || !p.succedent.contains(body) {
                    Some("box-gl premise succedent must be exactly the unboxed principal".into())
                } else {
                    None
                }
            }
        }
        Rule::BoxL(principal) => {
            let Formula::Box(body) = principal else {
                return Some("box-l principal must be boxed".into());
            };
            let p = premise(0);
            if c.level != Level::Second || p.level != Level::Second {
                Some("level discipline: box-l applies to second-level sequents only".into())
            } else if !c.antecedent.contains(principal) {
                Some("box-l principal must occur in the conclusion antecedent".into())
            } else if p.succedent != c.succedent {
                Some("box-l premise must have the conclusion's succedent".into())
            } else if p.antecedent != union(&c.antecedent, body)
                && p.antecedent != union(&without(&c.antecedent, principal), body)
            {
                Some("box-l premise antecedent does not match the conclusion".into())
            } else {
                None
            }
        }
        Rule::LevelLift => {
            let p = premise(0);
            if c.level != Level::Second || p.level != Level::First {
                Some("level discipline: lift goes from first to second level".into())
            } else if p.antecedent != c.antecedent || p.succedent != c.succedent {
                Some("lift keeps both sides unchanged".into())
            } else {
                None
            }
        }
    }
}

/// Rewrites a query about the reflection-closed logic into a plain GL query:
/// the conjunction of all reflection instances `□α -> α` for boxed
/// subformulas `□α` of `f`, implied toward `f`. Conjuncts are ordered by the
/// printed form of the boxed subformula and folded to the right; with no
/// boxed subformulas the formula is returned unchanged.
pub fn reduce_to_gl(f: &Formula) -> Formula {
    let reflections: Vec<Formula> = f
        .boxed_subformulas()
        .into_iter()
        .map(|boxed| {
            let Formula::Box(body) = &boxed else {
                unreachable!("boxed_subformulas returns boxed formulas");
            };
            Formula::imp(boxed.clone(), (**body).clone())
        })
        .collect();
    let Some(last) = reflections.last().cloned() else {
        return f.clone();
    };
    let conjunction = reflections
        .iter()
        .rev()
        .skip(1)
        .fold(last, |acc, r| Formula::and(r.clone(), acc));
    Formula::imp(conjunction, f.clone())
}

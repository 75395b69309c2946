//! Cut-free backward proof search.
//!
//! The search first saturates a sequent under the invertible rules — `(→L)`,
//! `(→R)`, and at the second level `(□L)` — keeping every principal formula
//! in place so that each leaf extends the sequent it came from. A closed leaf
//! is an initial sequent up to weakening. An open first-level leaf is decided
//! by trying `(□GL)` backward on each boxed succedent formula: the premise for
//! `□ψ` is `Γ_□, □Γ_□, □ψ ⇒ ψ`, taken only when `ψ ∉ Γ_□` (otherwise the
//! premise is itself an initial sequent and the branch closes immediately).
//! The boxed antecedent grows strictly with each nested `(□GL)` step, which
//! bounds the recursion by the number of boxed subformulas of the query.
//!
//! A failed search returns the saturated open leaf that defeated it; the
//! countermodel module turns such leaves into worlds.

use crate::calculus::{box_set, unbox, Level, ProofTree, Rule, Sequent};
use crate::formula::{Formula, FormulaSet};
use std::collections::HashMap;

/// Result of a proof search: a checkable cut-free proof, or a saturated
/// unprovable leaf to build a countermodel from.
#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Proved {
        tree: ProofTree,
        /// Principal formulas of all `(□L)` nodes in the tree; empty for
        /// first-level searches.
        box_l_principals: FormulaSet,
    },
    Refuted {
        witness: SaturationWitness,
    },
}

impl SearchOutcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, SearchOutcome::Proved { .. })
    }

    pub fn proof(&self) -> Option<&ProofTree> {
        match self {
            SearchOutcome::Proved { tree, .. } => Some(tree),
            SearchOutcome::Refuted { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<&SaturationWitness> {
        match self {
            SearchOutcome::Refuted { witness } => Some(witness),
            SearchOutcome::Proved { .. } => None,
        }
    }
}

/// A saturated open leaf of a failed search.
///
/// `root` is at the level of the query; `first_level_core` carries the same
/// sides at the first level (for a second-level failure it is the saturated
/// sequent reached after lifting, which is where the countermodel core
/// starts).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturationWitness {
    pub root: Sequent,
    pub first_level_core: Sequent,
}

/// A leaf of the saturation expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatLeaf {
    pub sequent: Sequent,
    /// Closed leaves are initial sequents (up to weakening); open leaves are
    /// saturated non-axioms.
    pub closed: bool,
}

enum SatNode {
    Leaf {
        seq: Sequent,
        closed: bool,
    },
    ImpL {
        seq: Sequent,
        principal: Formula,
        left: Box<SatNode>,
        right: Box<SatNode>,
    },
    ImpR {
        seq: Sequent,
        principal: Formula,
        child: Box<SatNode>,
    },
    BoxL {
        seq: Sequent,
        principal: Formula,
        child: Box<SatNode>,
    },
}

enum Expansion {
    ImpL(Formula),
    ImpR(Formula),
    BoxL(Formula),
}

/// The lexicographically least formula whose saturation condition fails, with
/// the rule that fixes it. Distinct candidates always have distinct printed
/// forms, so the choice is deterministic.
fn next_expansion(seq: &Sequent) -> Option<Expansion> {
    let mut best: Option<Expansion> = None;
    let mut consider = |candidate: Expansion| {
        let principal = match &candidate {
            Expansion::ImpL(f) | Expansion::ImpR(f) | Expansion::BoxL(f) => f,
        };
        let better = match &best {
            None => true,
            Some(Expansion::ImpL(f) | Expansion::ImpR(f) | Expansion::BoxL(f)) => principal < f,
        };
        if better {
            best = Some(candidate);
        }
    };
    for f in &seq.antecedent {
        match f {
            Formula::Imp(a, b) => {
                if !seq.succedent.contains(a) && !seq.antecedent.contains(b) {
                    consider(Expansion::ImpL(f.clone()));
                }
            }
            Formula::Box(body)
                if seq.level == Level::Second && !seq.antecedent.contains(body) =>
            {
                consider(Expansion::BoxL(f.clone()));
            }
            _ => {}
        }
    }
    for f in &seq.succedent {
        if let Formula::Imp(a, b) = f {
            if !(seq.antecedent.contains(a) && seq.succedent.contains(b)) {
                consider(Expansion::ImpR(f.clone()));
            }
        }
    }
    best
}

fn with_added(
    seq: &Sequent,
    ant_extra: Option<&Formula>,
    suc_extra: Option<&Formula>,
) -> Sequent {
    let mut out = seq.clone();
    if let Some(f) = ant_extra {
        out.antecedent.insert(f.clone());
    }
    if let Some(f) = suc_extra {
        out.succedent.insert(f.clone());
    }
    out
}

fn saturate_node(seq: Sequent) -> SatNode {
    if seq.is_axiom() {
        return SatNode::Leaf { seq, closed: true };
    }
    match next_expansion(&seq) {
        None => SatNode::Leaf { seq, closed: false },
        Some(Expansion::ImpL(principal)) => {
            let Formula::Imp(a, b) = &principal else {
                unreachable!()
            };
            let left = saturate_node(with_added(&seq, None, Some(a)));
            let right = saturate_node(with_added(&seq, Some(b), None));
            SatNode::ImpL {
                seq,
                principal,
                left: Box::new(left),
                right: Box::new(right),
            }
        }
        Some(Expansion::ImpR(principal)) => {
            let Formula::Imp(a, b) = &principal else {
                unreachable!()
            };
            let child = saturate_node(with_added(&seq, Some(a), Some(b)));
            SatNode::ImpR {
                seq,
                principal,
                child: Box::new(child),
            }
        }
        Some(Expansion::BoxL(principal)) => {
            let Formula::Box(body) = &principal else {
                unreachable!()
            };
            let child = saturate_node(with_added(&seq, Some(body), None));
            SatNode::BoxL {
                seq,
                principal,
                child: Box::new(child),
            }
        }
    }
}

fn collect_leaves<'a>(node: &'a SatNode, out: &mut Vec<(&'a Sequent, bool)>) {
    match node {
        SatNode::Leaf { seq, closed } => out.push((seq, *closed)),
        SatNode::ImpL { left, right, .. } => {
            collect_leaves(left, out);
            collect_leaves(right, out);
        }
        SatNode::ImpR { child, .. } | SatNode::BoxL { child, .. } => collect_leaves(child, out),
    }
}

/// Exhaustively applies the invertible rules backward and returns the leaves
/// in left-to-right order: `(→L)` branches left (antecedent formula moved to
/// the succedent) before right, formulas are processed in lexicographic
/// printed order, and principals stay in place so every leaf extends the
/// input sequent.
pub fn saturate(seq: &Sequent) -> Vec<SatLeaf> {
    let node = saturate_node(seq.clone());
    let mut raw = Vec::new();
    collect_leaves(&node, &mut raw);
    raw.into_iter()
        .map(|(seq, closed)| SatLeaf {
            sequent: seq.clone(),
            closed,
        })
        .collect()
}

/// Whether the sequent satisfies its level's saturation conditions.
pub fn is_saturated(seq: &Sequent) -> bool {
    next_expansion(seq).is_none()
}

/// An initial sequent, weakened to `seq` when it has extra formulas. Prefers
/// the least shared formula, falling back to falsum on the left.
fn axiom_tree(seq: &Sequent) -> ProofTree {
    let shared = seq
        .antecedent
        .iter()
        .find(|f| seq.succedent.contains(*f))
        .cloned();
    let base = match shared {
        Some(f) => ProofTree::leaf(
            Sequent::new(seq.level, [f.clone()], [f]),
            Rule::InitId,
        ),
        None => {
            debug_assert!(seq.antecedent.contains(&Formula::Bot));
            ProofTree::leaf(Sequent::new(seq.level, [Formula::Bot], []), Rule::InitBot)
        }
    };
    if base.conclusion == *seq {
        base
    } else {
        ProofTree::new(seq.clone(), Rule::Weakening, vec![base])
    }
}

/// The backward `(□GL)` premise for `□ψ` over the antecedent `ant`:
/// `Γ_□, □Γ_□, □ψ ⇒ ψ` with `Γ_□ = unbox(ant)`.
pub fn box_gl_premise(ant: &FormulaSet, boxed: &Formula, body: &Formula) -> Sequent {
    let gamma = unbox(ant);
    let mut premise_ant = box_set(&gamma);
    premise_ant.extend(gamma);
    premise_ant.insert(boxed.clone());
    Sequent::first(premise_ant, [body.clone()])
}

struct Prover {
    memo: HashMap<Sequent, SearchOutcome>,
    /// Nested `(□GL)` recursion depth; bounded by the boxed subformulas of
    /// the query plus one.
    depth: usize,
    depth_bound: usize,
}

impl Prover {
    fn new(query: &Sequent) -> Self {
        let boxed: FormulaSet = query
            .formulas()
            .flat_map(Formula::boxed_subformulas)
            .collect();
        Prover {
            memo: HashMap::new(),
            depth: 0,
            depth_bound: boxed.len() + 1,
        }
    }

    fn prove_first(&mut self, seq: &Sequent) -> SearchOutcome {
        debug_assert_eq!(seq.level, Level::First);
        if let Some(cached) = self.memo.get(seq) {
            return cached.clone();
        }
        let node = saturate_node(seq.clone());
        let mut leaves = Vec::new();
        collect_leaves(&node, &mut leaves);

        let mut open_proofs = Vec::new();
        let mut failed: Vec<&Sequent> = Vec::new();
        for (leaf, closed) in &leaves {
            if *closed {
                continue;
            }
            match self.close_open_leaf(leaf) {
                Some(tree) => open_proofs.push(tree),
                None => failed.push(leaf),
            }
        }

        let outcome = if failed.is_empty() {
            let mut queue = open_proofs.into_iter();
            let tree = assemble(&node, &mut queue);
            debug_assert!(queue.next().is_none());
            SearchOutcome::Proved {
                tree,
                box_l_principals: FormulaSet::new(),
            }
        } else {
            let root = lexicographically_first(&failed).clone();
            SearchOutcome::Refuted {
                witness: SaturationWitness {
                    first_level_core: root.clone(),
                    root,
                },
            }
        };
        self.memo.insert(seq.clone(), outcome.clone());
        outcome
    }

    /// Try each boxed succedent formula of a saturated open first-level leaf.
    fn close_open_leaf(&mut self, leaf: &Sequent) -> Option<ProofTree> {
        let gamma = unbox(&leaf.antecedent);
        for boxed in &leaf.succedent {
            let Formula::Box(body) = boxed else { continue };
            let premise = box_gl_premise(&leaf.antecedent, boxed, body);
            let premise_proof = if gamma.contains(body) {
                // ψ already sits in Γ_□, so the premise is an initial sequent.
                Some(axiom_tree(&premise))
            } else {
                self.depth += 1;
                debug_assert!(
                    self.depth <= self.depth_bound,
                    "(□GL) nesting {} exceeded the bound {}",
                    self.depth,
                    self.depth_bound
                );
                let sub = self.prove_first(&premise);
                self.depth -= 1;
                match sub {
                    SearchOutcome::Proved { tree, .. } => Some(tree),
                    SearchOutcome::Refuted { .. } => None,
                }
            };
            if let Some(premise_proof) = premise_proof {
                let conclusion = Sequent::first(box_set(&gamma), [boxed.clone()]);
                let box_node = ProofTree::new(
                    conclusion,
                    Rule::BoxGL(boxed.clone()),
                    vec![premise_proof],
                );
                let tree = if box_node.conclusion == *leaf {
                    box_node
                } else {
                    ProofTree::new(leaf.clone(), Rule::Weakening, vec![box_node])
                };
                return Some(tree);
            }
        }
        None
    }
}

fn lexicographically_first<'a>(leaves: &[&'a Sequent]) -> &'a Sequent {
    leaves
        .iter()
        .min_by_key(|s| s.to_string())
        .expect("at least one failing leaf")
}

/// Rebuilds the saturation expansion as a proof tree, inserting the prepared
/// subproofs at the open leaves (in leaf order) and initial sequents at the
/// closed ones.
fn assemble(node: &SatNode, open_proofs: &mut dyn Iterator<Item = ProofTree>) -> ProofTree {
    match node {
        SatNode::Leaf { seq, closed: true } => axiom_tree(seq),
        SatNode::Leaf { closed: false, .. } => {
            open_proofs.next().expect("a proof per open leaf")
        }
        SatNode::ImpL {
            seq,
            principal,
            left,
            right,
        } => {
            let l = assemble(left, open_proofs);
            let r = assemble(right, open_proofs);
            ProofTree::new(seq.clone(), Rule::ImpL(principal.clone()), vec![l, r])
        }
        SatNode::ImpR {
            seq,
            principal,
            child,
        } => {
            let c = assemble(child, open_proofs);
            ProofTree::new(seq.clone(), Rule::ImpR(principal.clone()), vec![c])
        }
        SatNode::BoxL {
            seq,
            principal,
            child,
        } => {
            let c = assemble(child, open_proofs);
            ProofTree::new(seq.clone(), Rule::BoxL(principal.clone()), vec![c])
        }
    }
}

/// Decide a first-level sequent. The returned proof is cut-free and passes
/// the checker; a refutation carries the saturated open leaf whose boxed
/// succedent formulas all failed.
pub fn prove_gl(seq: &Sequent) -> SearchOutcome {
    assert_eq!(seq.level, Level::First, "prove_gl takes first-level sequents");
    Prover::new(seq).prove_first(seq)
}

/// Decide a second-level sequent: saturate (including `(□L)`), lift each open
/// leaf to the first level, and decide the lifted sequent there.
pub fn prove_gls(seq: &Sequent) -> SearchOutcome {
    assert_eq!(
        seq.level,
        Level::Second,
        "prove_gls takes second-level sequents"
    );
    let mut prover = Prover::new(seq);
    let node = saturate_node(seq.clone());
    let mut leaves = Vec::new();
    collect_leaves(&node, &mut leaves);

    let mut open_proofs = Vec::new();
    let mut failures: Vec<SaturationWitness> = Vec::new();
    for (leaf, closed) in &leaves {
        if *closed {
            continue;
        }
        let lifted = leaf.at_level(Level::First);
        match prover.prove_first(&lifted) {
            SearchOutcome::Proved { tree, .. } => {
                open_proofs.push(ProofTree::new((*leaf).clone(), Rule::LevelLift, vec![tree]));
            }
            SearchOutcome::Refuted { witness } => {
                failures.push(SaturationWitness {
                    root: (*leaf).clone(),
                    first_level_core: witness.root,
                });
            }
        }
    }

    if let Some(witness) = failures
        .into_iter()
        .min_by_key(|w| w.root.to_string())
    {
        return SearchOutcome::Refuted { witness };
    }
    let mut queue = open_proofs.into_iter();
    let tree = assemble(&node, &mut queue);
    debug_assert!(queue.next().is_none());
    let box_l_principals = tree.box_l_principals();
    SearchOutcome::Proved {
        tree,
        box_l_principals,
    }
}

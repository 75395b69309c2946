//! Explicit countermodels from failed searches.
//!
//! A failed first-level search leaves a saturated open sequent. Its
//! countermodel is built world by world: each world is such a sequent, and
//! for every boxed succedent formula `□ψ` the failed `(□GL)` premise is
//! re-refuted and its witness leaf added as a world where `ψ` is false. Only
//! the worlds reachable from the designated one are generated; the accessibility
//! law between any two collected worlds is
//!
//! ```text
//! (Γ ⇒ Δ) R (Γ' ⇒ Δ')  iff  Γ_□ ⊊ Γ'_□ and Γ_□ ⊆ Γ'
//! ```
//!
//! and a variable is true at `Γ ⇒ Δ` iff it belongs to `Γ`. The expected
//! membership/truth correspondence is not assumed; [`check_truth_lemma`]
//! verifies it by direct model checking.
//!
//! A failed second-level search extends the core with an infinite descending
//! tail of worlds that all see the designated world, its successors, and each
//! other downward, and that share one valuation. The tail is never
//! materialized: truth profiles along it are eventually constant, and
//! [`eval_chain`] computes them with monotone falsification flags.

use crate::calculus::{unbox, Level, Sequent};
use crate::formula::{subformula_closure, Formula, FormulaSet};
use crate::search::{box_gl_premise, is_saturated, prove_gl, SaturationWitness, SearchOutcome};
use crate::semantics::KripkeModel;
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CountermodelError {
    #[error("malformed witness: {0}")]
    MalformedWitness(String),
}

/// A finite GL-model whose worlds are saturated unprovable first-level
/// sequents; world ids in the exported model are the printed sequents.
#[derive(Clone, Debug)]
pub struct CoreModel {
    sequents: Vec<Sequent>,
    designated: usize,
    model: KripkeModel,
}

impl CoreModel {
    pub fn model(&self) -> &KripkeModel {
        &self.model
    }

    pub fn designated_id(&self) -> &str {
        &self.model.worlds[self.designated]
    }

    pub fn designated_sequent(&self) -> &Sequent {
        &self.sequents[self.designated]
    }

    /// (world id, world sequent) pairs in construction order.
    pub fn worlds(&self) -> impl Iterator<Item = (&str, &Sequent)> {
        self.model
            .worlds
            .iter()
            .map(String::as_str)
            .zip(self.sequents.iter())
    }

    /// The plain model JSON (world ids are printed sequents).
    pub fn to_json(&self) -> Value {
        serde_json::to_value(&self.model).expect("model serializes")
    }
}

/// The accessibility law between core worlds.
fn related(a: &Sequent, b: &Sequent) -> bool {
    let a_box = unbox(&a.antecedent);
    let b_box = unbox(&b.antecedent);
    a_box.is_subset(&b_box) && a_box != b_box && a_box.is_subset(&b.antecedent)
}

fn require_open_saturated(seq: &Sequent, role: &str) -> Result<(), CountermodelError> {
    if !is_saturated(seq) {
        return Err(CountermodelError::MalformedWitness(format!(
            "{role} '{seq}' is not saturated"
        )));
    }
    if seq.is_axiom() {
        return Err(CountermodelError::MalformedWitness(format!(
            "{role} '{seq}' is an initial sequent"
        )));
    }
    Ok(())
}

/// Build the finite countermodel generated by a first-level failure witness.
pub fn build_core(witness: &SaturationWitness) -> Result<CoreModel, CountermodelError> {
    let root = witness.first_level_core.clone();
    if root.level != Level::First {
        return Err(CountermodelError::MalformedWitness(
            "core witness must be a first-level sequent".into(),
        ));
    }
    require_open_saturated(&root, "witness root")?;

    let mut sequents = vec![root.clone()];
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    seen.insert(root.to_string(), 0);
    let mut queue = VecDeque::from([0usize]);

    while let Some(i) = queue.pop_front() {
        let world = sequents[i].clone();
        // Children in lexicographic order of the unboxed body.
        let mut bodies: Vec<(Formula, Formula)> = world
            .succedent
            .iter()
            .filter_map(|f| match f {
                Formula::Box(body) => Some(((**body).clone(), f.clone())),
                _ => None,
            })
            .collect();
        bodies.sort();
        for (body, boxed) in bodies {
            let premise = box_gl_premise(&world.antecedent, &boxed, &body);
            match prove_gl(&premise) {
                SearchOutcome::Proved { .. } => {
                    return Err(CountermodelError::MalformedWitness(format!(
                        "world '{world}' has a provable (□GL) premise for {boxed}; \
                         the witness sequent was provable after all"
                    )));
                }
                SearchOutcome::Refuted { witness } => {
                    let child = witness.root;
                    if let std::collections::btree_map::Entry::Vacant(slot) =
                        seen.entry(child.to_string())
                    {
                        slot.insert(sequents.len());
                        sequents.push(child);
                        queue.push_back(sequents.len() - 1);
                    }
                }
            }
        }
    }

    let ids: Vec<String> = sequents.iter().map(Sequent::to_string).collect();
    let mut relation = BTreeSet::new();
    for (i, a) in sequents.iter().enumerate() {
        for (j, b) in sequents.iter().enumerate() {
            if i != j && related(a, b) {
                relation.insert((ids[i].clone(), ids[j].clone()));
            }
        }
    }
    let valuation: BTreeMap<String, BTreeSet<String>> = sequents
        .iter()
        .zip(&ids)
        .map(|(seq, id)| {
            let vars = seq
                .antecedent
                .iter()
                .filter_map(|f| match f {
                    Formula::Var(name) => Some(name.clone()),
                    _ => None,
                })
                .collect();
            (id.clone(), vars)
        })
        .collect();

    Ok(CoreModel {
        sequents,
        designated: 0,
        model: KripkeModel {
            worlds: ids,
            relation,
            valuation,
        },
    })
}

/// Check the membership/truth correspondence on every world: antecedent
/// members evaluate true, succedent members false.
pub fn check_truth_lemma(core: &CoreModel) -> Result<(), String> {
    for (id, seq) in core.worlds() {
        for f in &seq.antecedent {
            if !core.model.eval(id, f).expect("world id from the model") {
                return Err(format!("'{f}' is in the antecedent of '{id}' but false there"));
            }
        }
        for f in &seq.succedent {
            if core.model.eval(id, f).expect("world id from the model") {
                return Err(format!("'{f}' is in the succedent of '{id}' but true there"));
            }
        }
    }
    Ok(())
}

/// A core model extended by an implicit infinite descending tail of worlds.
/// Every tail world sees the designated core world, all of that world's core
/// successors, and every earlier tail world; all tail worlds share one
/// valuation.
#[derive(Clone, Debug)]
pub struct ChainModel {
    core: CoreModel,
    tail_valuation: BTreeSet<String>,
}

impl ChainModel {
    pub fn core(&self) -> &CoreModel {
        &self.core
    }

    pub fn tail_valuation(&self) -> &BTreeSet<String> {
        &self.tail_valuation
    }

    /// `{"core": <model JSON>, "designated": id, "tail_valuation": [...]}`.
    pub fn to_json(&self) -> Value {
        json!({
            "core": self.core.to_json(),
            "designated": self.core.designated_id(),
            "tail_valuation": self.tail_valuation.iter().cloned().collect::<Vec<_>>(),
        })
    }

    /// DOT rendering: the core plus a schematic three-world tail and an
    /// ellipsis node.
    pub fn to_dot(&self) -> String {
        let mut out = self.core.model().to_dot();
        out.truncate(out.rfind('}').unwrap_or(out.len()));
        let vars = self
            .tail_valuation
            .iter()
            .cloned()
            .collect::<Vec<_>>()
            .join(",");
        let designated = format!("\"{}\"", self.core.designated_id().replace('"', "\\\""));
        for i in 1..=3 {
            out.push_str(&format!(
                "  \"tail {i}\" [shape=box, label=\"tail {i}\\n{{{vars}}}\"];\n"
            ));
            out.push_str(&format!("  \"tail {i}\" -> {designated};\n"));
        }
        out.push_str("  \"tail 2\" -> \"tail 1\";\n");
        out.push_str("  \"tail 3\" -> \"tail 1\";\n");
        out.push_str("  \"tail 3\" -> \"tail 2\";\n");
        out.push_str("  \"...\" [shape=none];\n  \"...\" -> \"tail 3\" [style=dashed];\n");
        out.push_str("}\n");
        out
    }
}

/// Build the chain countermodel for a second-level failure witness.
pub fn build_chain(witness: &SaturationWitness) -> Result<ChainModel, CountermodelError> {
    if witness.root.level != Level::Second {
        return Err(CountermodelError::MalformedWitness(
            "chain witness root must be a second-level sequent".into(),
        ));
    }
    require_open_saturated(&witness.root, "witness root")?;
    let flc = &witness.first_level_core;
    let core = build_core(&SaturationWitness {
        root: flc.clone(),
        first_level_core: flc.clone(),
    })?;
    let tail_valuation = flc
        .antecedent
        .iter()
        .filter_map(|f| match f {
            Formula::Var(name) => Some(name.clone()),
            _ => None,
        })
        .collect();
    Ok(ChainModel {
        core,
        tail_valuation,
    })
}

/// Truth of one formula along the tail: the stabilized value, the first index
/// from which the value no longer changes, and the computed prefix of values
/// at tail worlds 1, 2, ….
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailVerdict {
    pub value: bool,
    pub stabilized_at: usize,
    pub history: Vec<bool>,
}

impl TailVerdict {
    /// True at every tail world.
    pub fn always_true(&self) -> bool {
        self.value && self.history.iter().all(|&b| b)
    }

    /// False at every tail world.
    pub fn always_false(&self) -> bool {
        !self.value && self.history.iter().all(|&b| !b)
    }
}

/// Per-formula truth rows at tail worlds 1, 2, … until the whole row vector
/// repeats. Rows are total over the subformula closure of `set`.
fn tail_rows(chain: &ChainModel, set: &FormulaSet) -> (Vec<Formula>, Vec<Vec<bool>>) {
    let closed: Vec<Formula> = subformula_closure(set).into_iter().collect();
    let model = chain.core.model();
    let designated = chain.core.designated_id();
    let scope: Vec<&str> = std::iter::once(designated)
        .chain(model.successors(designated))
        .collect();
    // core_ok[i]: the i-th formula holds at the designated world and all of
    // its core successors — the core part of a box at any tail world.
    let core_ok: Vec<bool> = closed
        .iter()
        .map(|f| {
            scope
                .iter()
                .all(|w| model.eval(w, f).expect("world id from the model"))
        })
        .collect();

    let position: BTreeMap<&Formula, usize> =
        closed.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let mut falsified = vec![false; closed.len()];
    let mut rows: Vec<Vec<bool>> = Vec::new();
    let cap = closed.len() + 2;
    loop {
        let mut row = vec![false; closed.len()];
        // A formula's value depends only on smaller formulas, already filled
        // in this row: iterate in an order where parts precede wholes.
        let mut order: Vec<usize> = (0..closed.len()).collect();
        order.sort_by_key(|&i| closed[i].size());
        for i in order {
            row[i] = match &closed[i] {
                Formula::Var(name) => chain.tail_valuation.contains(name),
                Formula::Bot => false,
                Formula::Imp(a, b) => !row[position[&**a]] || row[position[&**b]],
                Formula::Box(a) => {
                    let ai = position[&**a];
                    core_ok[ai] && !falsified[ai]
                }
            };
        }
        for (i, &v) in row.iter().enumerate() {
            if !v {
                falsified[i] = true;
            }
        }
        let stable = rows.last() == Some(&row);
        rows.push(row);
        if stable || rows.len() >= cap {
            debug_assert!(stable, "tail profiles must stabilize within |SF| + 1 steps");
            break;
        }
    }
    (closed, rows)
}

fn verdict_from_column(rows: &[Vec<bool>], column: usize) -> TailVerdict {
    let history: Vec<bool> = rows.iter().map(|row| row[column]).collect();
    let last = *history.last().expect("at least one row");
    let stabilized_at = history
        .iter()
        .rposition(|&v| v != last)
        .map(|i| i + 2)
        .unwrap_or(1);
    TailVerdict {
        value: last,
        stabilized_at,
        history,
    }
}

/// Truth profile of `f` along the tail, computed over the subformula closure
/// of `set ∪ {f}`. Profiles are eventually constant because a box, once its
/// body has failed at some tail world, stays false at all later ones.
pub fn eval_chain(chain: &ChainModel, set: &FormulaSet, f: &Formula) -> TailVerdict {
    let mut full = set.clone();
    full.insert(f.clone());
    let (closed, rows) = tail_rows(chain, &full);
    let column = closed.iter().position(|g| g == f).expect("f is in its closure");
    verdict_from_column(&rows, column)
}

/// Truth profile of a sequent along the tail (the level tag is ignored).
pub fn eval_chain_sequent(chain: &ChainModel, set: &FormulaSet, seq: &Sequent) -> TailVerdict {
    let mut full = set.clone();
    full.extend(seq.formulas().cloned());
    let (closed, rows) = tail_rows(chain, &full);
    let col = |f: &Formula| closed.iter().position(|g| g == f).expect("member of closure");
    let ant: Vec<usize> = seq.antecedent.iter().map(col).collect();
    let suc: Vec<usize> = seq.succedent.iter().map(col).collect();
    let seq_rows: Vec<Vec<bool>> = rows
        .iter()
        .map(|row| {
            vec![ant.iter().any(|&i| !row[i]) || suc.iter().any(|&i| row[i])]
        })
        .collect();
    verdict_from_column(&seq_rows, 0)
}

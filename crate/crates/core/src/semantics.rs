//! Finite GL-models: transitive irreflexive Kripke frames with a valuation,
//! formula and sequent evaluation, Σ-reflexive worlds, and the C1 check.
//!
//! On finite transitive frames, converse well-foundedness is the same as
//! irreflexivity, so that is what the frame validator enforces. Valuation
//! entries missing for a (world, variable) pair default to false.

use crate::calculus::Sequent;
use crate::formula::{Formula, FormulaSet};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

/// A finite Kripke model. The JSON form lists the variables true at each
/// world: `{"worlds": [...], "relation": [["a","b"], ...],
/// "valuation": {"a": ["p"], ...}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KripkeModel {
    pub worlds: Vec<String>,
    pub relation: BTreeSet<(String, String)>,
    #[serde(default)]
    pub valuation: BTreeMap<String, BTreeSet<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("unknown world id '{0}'")]
    UnknownWorld(String),
}

/// A specific way a model fails to be a GL-model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FrameViolation {
    /// `(w, w)` is in the relation.
    NotIrreflexive(String),
    /// `(a, b)` and `(b, c)` are related but `(a, c)` is not.
    NotTransitive(String, String, String),
    UnknownWorldInRelation(String),
    UnknownWorldInValuation(String),
}

impl fmt::Display for FrameViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrameViolation::NotIrreflexive(w) => {
                write!(f, "not irreflexive: ({w}, {w}) is in the relation")
            }
            FrameViolation::NotTransitive(a, b, c) => write!(
                f,
                "not transitive: ({a}, {b}) and ({b}, {c}) hold but ({a}, {c}) is missing"
            ),
            FrameViolation::UnknownWorldInRelation(w) => {
                write!(f, "relation mentions unknown world '{w}'")
            }
            FrameViolation::UnknownWorldInValuation(w) => {
                write!(f, "valuation mentions unknown world '{w}'")
            }
        }
    }
}

impl KripkeModel {
    pub fn new(
        worlds: impl IntoIterator<Item = impl Into<String>>,
        relation: impl IntoIterator<Item = (impl Into<String>, impl Into<String>)>,
        valuation: impl IntoIterator<Item = (impl Into<String>, impl IntoIterator<Item = impl Into<String>>)>,
    ) -> Self {
        KripkeModel {
            worlds: worlds.into_iter().map(Into::into).collect(),
            relation: relation
                .into_iter()
                .map(|(a, b)| (a.into(), b.into()))
                .collect(),
            valuation: valuation
                .into_iter()
                .map(|(w, vars)| (w.into(), vars.into_iter().map(Into::into).collect()))
                .collect(),
        }
    }

    fn has_world(&self, world: &str) -> bool {
        self.worlds.iter().any(|w| w == world)
    }

    pub fn successors<'a>(&'a self, world: &'a str) -> impl Iterator<Item = &'a str> {
        self.relation
            .iter()
            .filter(move |(a, _)| a == world)
            .map(|(_, b)| b.as_str())
    }

    /// Every way the model fails the GL frame conditions, in a stable order.
    pub fn frame_violations(&self) -> Vec<FrameViolation> {
        let mut out = Vec::new();
        for (a, b) in &self.relation {
            if !self.has_world(a) {
                out.push(FrameViolation::UnknownWorldInRelation(a.clone()));
            }
            if !self.has_world(b) {
                out.push(FrameViolation::UnknownWorldInRelation(b.clone()));
            }
            if a == b {
                out.push(FrameViolation::NotIrreflexive(a.clone()));
            }
        }
        for (a, b) in &self.relation {
            for (b2, c) in &self.relation {
                if b == b2 && !self.relation.contains(&(a.clone(), c.clone())) {
                    out.push(FrameViolation::NotTransitive(a.clone(), b.clone(), c.clone()));
                }
            }
        }
        for w in self.valuation.keys() {
            if !self.has_world(w) {
                out.push(FrameViolation::UnknownWorldInValuation(w.clone()));
            }
        }
        out
    }

    /// True iff the relation is transitive and irreflexive (and mentions only
    /// known worlds). The valuation is total by the default-false rule.
    pub fn is_gl_model(&self) -> bool {
        self.frame_violations().is_empty()
    }

    fn var_value(&self, world: &str, name: &str) -> bool {
        self.valuation
            .get(world)
            .is_some_and(|vars| vars.contains(name))
    }

    /// Standard Kripke evaluation; `□φ` is true iff `φ` holds at every
    /// successor.
    pub fn eval(&self, world: &str, f: &Formula) -> Result<bool, SemanticsError> {
        if !self.has_world(world) {
            return Err(SemanticsError::UnknownWorld(world.to_string()));
        }
        Ok(self.eval_known(world, f))
    }

    fn eval_known(&self, world: &str, f: &Formula) -> bool {
        match f {
            Formula::Var(name) => self.var_value(world, name),
            Formula::Bot => false,
            Formula::Imp(a, b) => !self.eval_known(world, a) || self.eval_known(world, b),
            Formula::Box(body) => self.successors(world).all(|w| self.eval_known(w, body)),
        }
    }

    /// A sequent is true at a world iff some antecedent member is false there
    /// or some succedent member is true; the level tag is ignored.
    pub fn eval_sequent(&self, world: &str, seq: &Sequent) -> Result<bool, SemanticsError> {
        if !self.has_world(world) {
            return Err(SemanticsError::UnknownWorld(world.to_string()));
        }
        Ok(seq.antecedent.iter().any(|f| !self.eval_known(world, f))
            || seq.succedent.iter().any(|f| self.eval_known(world, f)))
    }

    /// Worlds where `□α -> α` holds for every boxed `□α ∈ sigma`. Non-boxed
    /// members of `sigma` are ignored.
    pub fn reflexive_worlds(&self, sigma: &FormulaSet) -> BTreeSet<String> {
        let boxes: Vec<(&Formula, &Formula)> = sigma
            .iter()
            .filter_map(|f| match f {
                Formula::Box(body) => Some((f, &**body)),
                _ => None,
            })
            .collect();
        self.worlds
            .iter()
            .filter(|w| {
                boxes
                    .iter()
                    .all(|(boxed, body)| !self.eval_known(w, boxed) || self.eval_known(w, body))
            })
            .cloned()
            .collect()
    }

    /// GraphViz rendering; node labels carry the true variables.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph model {\n  rankdir=LR;\n");
        for w in &self.worlds {
            let vars = self
                .valuation
                .get(w)
                .map(|vs| vs.iter().cloned().collect::<Vec<_>>().join(","))
                .unwrap_or_default();
            let label = if vars.is_empty() {
                w.clone()
            } else {
                format!("{w}\\n{{{vars}}}")
            };
            out.push_str(&format!(
                "  {} [label=\"{}\"];\n",
                dot_id(w),
                label.replace('"', "\\\"")
            ));
        }
        for (a, b) in &self.relation {
            out.push_str(&format!("  {} -> {};\n", dot_id(a), dot_id(b)));
        }
        out.push_str("}\n");
        out
    }
}

fn dot_id(world: &str) -> String {
    format!("\"{}\"", world.replace('"', "\\\""))
}

/// The C1 check: the sequent is true at every `sigma`-reflexive world.
pub fn check_c1(model: &KripkeModel, sigma: &FormulaSet, seq: &Sequent) -> bool {
    model
        .reflexive_worlds(sigma)
        .iter()
        .all(|w| model.eval_sequent(w, seq).expect("world comes from the model"))
}

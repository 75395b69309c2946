//! Decision procedures, proof objects and countermodels for the provability
//! logics GL and GLS.
//!
//! GL is decided by cut-free backward search in a standard sequent calculus;
//! GLS by a two-level calculus whose second level adds the reflection rule
//! `(□L)` and a one-way lift from the first level. A successful search yields
//! a checkable cut-free proof together with the set Σ of `(□L)` principal
//! formulas; a failed search yields a saturated sequent from which an explicit
//! countermodel is constructed — a finite transitive irreflexive model for GL,
//! and for GLS that model extended by an infinite descending tail of worlds
//! evaluated symbolically.
//!
//! The `semantics` and `enumeration` modules provide the independent oracles:
//! Kripke evaluation, Σ-reflexive worlds, and bounded brute-force countermodel
//! search (parallelized under the `parallel` feature, on by default).

pub mod calculus;
pub mod countermodel;
pub mod enumeration;
pub mod formula;
pub mod generator;
pub mod parser;
pub mod render;
pub mod search;
pub mod semantics;

pub use calculus::{check_proof, reduce_to_gl, unbox, CheckResult, Level, ProofTree, Rule, Sequent};
pub use countermodel::{build_chain, build_core, eval_chain, ChainModel, CoreModel, TailVerdict};
pub use enumeration::refute_by_enumeration;
pub use formula::{Formula, FormulaSet};
pub use parser::{parse, ParseError};
pub use search::{prove_gl, prove_gls, saturate, SaturationWitness, SearchOutcome};
pub use semantics::{check_c1, KripkeModel};

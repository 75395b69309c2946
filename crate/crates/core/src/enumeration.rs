//! Brute-force countermodel search, independent of the prover.
//!
//! Models are enumerated by increasing world count, then relation bitmask,
//! then valuation bitmask, so the first witness is reproducible. Relations
//! are packed into a `u64` with bit `i*n + j` meaning "world `i` sees world
//! `j`"; candidate relation masks are pre-filtered to the transitive
//! irreflexive ones. Valuations pack bit `w*nvars + v`.
//!
//! With the `parallel` feature the scan over (relation, valuation) candidates
//! is split across threads with `find_map_first`, which preserves the
//! sequential answer exactly.

use crate::formula::{Formula, FormulaSet};
use crate::semantics::KripkeModel;
use std::collections::{BTreeMap, BTreeSet};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// A query compiled to a node array (children before parents) for bitmask
/// evaluation over all worlds at once.
struct Compiled {
    nodes: Vec<Node>,
    root: usize,
    /// (box node, body node) pairs the witness world must be reflexive for.
    boxes: Vec<(usize, usize)>,
    vars: Vec<String>,
}

enum Node {
    Var(usize),
    Bot,
    Imp(usize, usize),
    Boxed(usize),
}

/// Compile `f` plus the reflexivity constraints for the boxed members of
/// `sigma`, sharing subformula nodes.
fn compile(f: &Formula, sigma: &FormulaSet) -> Compiled {
    let mut var_names: BTreeSet<String> = f.variables();
    for s in sigma {
        var_names.extend(s.variables());
    }
    let vars: Vec<String> = var_names.into_iter().collect();
    let mut nodes = Vec::new();
    let mut index: BTreeMap<Formula, usize> = BTreeMap::new();
    let root = compile_node(f, &vars, &mut nodes, &mut index);
    let mut boxes = Vec::new();
    for s in sigma {
        if let Formula::Box(body) = s {
            let body_idx = compile_node(body, &vars, &mut nodes, &mut index);
            let box_idx = compile_node(s, &vars, &mut nodes, &mut index);
            boxes.push((box_idx, body_idx));
        }
    }
    Compiled {
        nodes,
        root,
        boxes,
        vars,
    }
}

fn compile_node(
    f: &Formula,
    vars: &[String],
    nodes: &mut Vec<Node>,
    index: &mut BTreeMap<Formula, usize>,
) -> usize {
    if let Some(&i) = index.get(f) {
        return i;
    }
    let node = match f {
        Formula::Var(name) => Node::Var(vars.iter().position(|v| v == name).unwrap()),
        Formula::Bot => Node::Bot,
        Formula::Imp(a, b) => {
            let ia = compile_node(a, vars, nodes, index);
            let ib = compile_node(b, vars, nodes, index);
            Node::Imp(ia, ib)
        }
        Formula::Box(a) => {
            let ia = compile_node(a, vars, nodes, index);
            Node::Boxed(ia)
        }
    };
    let i = nodes.len();
    nodes.push(node);
    index.insert(f.clone(), i);
    i
}

/// Number of packed off-diagonal bits for `n` worlds.
fn packed_bits(n: usize) -> usize {
    n * (n - 1)
}

/// Expand a packed off-diagonal mask (row-major, diagonal skipped) into the
/// `i*n + j` layout.
fn unpack_relation(packed: u64, n: usize) -> u64 {
    let mut full = 0u64;
    let mut bit = 0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if packed >> bit & 1 == 1 {
                full |= 1 << (i * n + j);
            }
            bit += 1;
        }
    }
    full
}

fn row(rel: u64, n: usize, i: usize) -> u64 {
    rel >> (i * n) & ((1 << n) - 1)
}

fn is_transitive(rel: u64, n: usize) -> bool {
    for i in 0..n {
        let ri = row(rel, n, i);
        for j in 0..n {
            // everything j sees, i must see
            if ri >> j & 1 == 1 && row(rel, n, j) & !ri != 0 {
                return false;
            }
        }
    }
    true
}

/// All transitive irreflexive relations on `n` labeled worlds, in ascending
/// packed-bitmask order.
fn strict_relations(n: usize) -> Vec<u64> {
    (0..1u64 << packed_bits(n))
        .map(|packed| unpack_relation(packed, n))
        .filter(|&rel| is_transitive(rel, n))
        .collect()
}

/// Truth mask of each compiled node over the worlds of one candidate model,
/// written into `values` (one `u64` per node, bit `w` = true at world `w`).
fn node_values(compiled: &Compiled, n: usize, rel: u64, val: u64, values: &mut [u64]) {
    let nvars = compiled.vars.len();
    let world_mask = (1u64 << n) - 1;
    for (i, node) in compiled.nodes.iter().enumerate() {
        values[i] = match *node {
            Node::Bot => 0,
            Node::Var(v) => {
                let mut bits = 0u64;
                for w in 0..n {
                    if val >> (w * nvars + v) & 1 == 1 {
                        bits |= 1 << w;
                    }
                }
                bits
            }
            Node::Imp(a, b) => (!values[a] | values[b]) & world_mask,
            Node::Boxed(a) => {
                let mut bits = 0u64;
                for w in 0..n {
                    if row(rel, n, w) & !values[a] == 0 {
                        bits |= 1 << w;
                    }
                }
                bits
            }
        };
    }
}

/// The first world of the candidate model that is reflexive for every
/// constraint pair and falsifies the root, if any.
fn falsifying_world(
    compiled: &Compiled,
    n: usize,
    rel: u64,
    val: u64,
    values: &mut [u64],
) -> Option<usize> {
    let world_mask = (1u64 << n) - 1;
    node_values(compiled, n, rel, val, values);
    let mut reflexive = world_mask;
    for &(boxed, body) in &compiled.boxes {
        reflexive &= !values[boxed] | values[body];
    }
    let hits = reflexive & !values[compiled.root] & world_mask;
    if hits == 0 {
        None
    } else {
        Some(hits.trailing_zeros() as usize)
    }
}

fn world_name(i: usize) -> String {
    format!("w{i}")
}

fn build_model(vars: &[String], n: usize, rel: u64, val: u64) -> KripkeModel {
    let nvars = vars.len();
    let worlds: Vec<String> = (0..n).map(world_name).collect();
    let mut relation = BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            if rel >> (i * n + j) & 1 == 1 {
                relation.insert((world_name(i), world_name(j)));
            }
        }
    }
    let mut valuation = BTreeMap::new();
    for w in 0..n {
        let mut trues = BTreeSet::new();
        for (v, name) in vars.iter().enumerate() {
            if val >> (w * nvars + v) & 1 == 1 {
                trues.insert(name.clone());
            }
        }
        valuation.insert(world_name(w), trues);
    }
    KripkeModel {
        worlds,
        relation,
        valuation,
    }
}

fn check_bounds(nvars: usize, max_worlds: usize) {
    assert!(max_worlds >= 1, "max_worlds must be at least 1");
    assert!(max_worlds <= 8, "max_worlds above 8 is not supported");
    assert!(
        max_worlds * nvars <= 64,
        "valuation space for {max_worlds} worlds x {nvars} variables exceeds 64 bits"
    );
}

/// Scan all valuations of one relation, reusing the caller's scratch buffer.
fn scan_relation(
    compiled: &Compiled,
    n: usize,
    rel: u64,
    val_count: u64,
    values: &mut [u64],
) -> Option<(u64, usize)> {
    (0..val_count).find_map(|val| falsifying_world(compiled, n, rel, val, values).map(|w| (val, w)))
}

fn scan_seq(compiled: &Compiled, max_worlds: usize) -> Option<(KripkeModel, String)> {
    let nvars = compiled.vars.len();
    let mut values = vec![0u64; compiled.nodes.len()];
    for n in 1..=max_worlds {
        let val_count = 1u64 << (n * nvars);
        for rel in strict_relations(n) {
            if let Some((val, w)) = scan_relation(compiled, n, rel, val_count, &mut values) {
                return Some((build_model(&compiled.vars, n, rel, val), world_name(w)));
            }
        }
    }
    None
}

/// One parallel work unit is a whole relation mask, so threads stay coarse
/// and `find_map_first` still returns the first witness in (relation,
/// valuation) order.
#[cfg(feature = "parallel")]
fn scan_par(compiled: &Compiled, max_worlds: usize) -> Option<(KripkeModel, String)> {
    let nvars = compiled.vars.len();
    for n in 1..=max_worlds {
        let relations = strict_relations(n);
        let val_count = 1u64 << (n * nvars);
        let hit = relations.into_par_iter().find_map_first(|rel| {
            let mut values = vec![0u64; compiled.nodes.len()];
            scan_relation(compiled, n, rel, val_count, &mut values)
                .map(|(val, w)| (rel, val, w))
        });
        if let Some((rel, val, w)) = hit {
            return Some((build_model(&compiled.vars, n, rel, val), world_name(w)));
        }
    }
    None
}

/// Search all GL-models with up to `max_worlds` worlds (over the variables of
/// `f`) for a world that is reflexive for every boxed subformula of `f` and
/// falsifies `f`. Returns the first such model and world in enumeration
/// order, or `None` if the bound is exhausted — absence is inconclusive,
/// never a proof.
pub fn refute_by_enumeration_seq(f: &Formula, max_worlds: usize) -> Option<(KripkeModel, String)> {
    let compiled = compile(f, &f.boxed_subformulas());
    check_bounds(compiled.vars.len(), max_worlds);
    scan_seq(&compiled, max_worlds)
}

/// Parallel variant of [`refute_by_enumeration_seq`]; returns exactly the
/// same witness.
#[cfg(feature = "parallel")]
pub fn refute_by_enumeration_par(f: &Formula, max_worlds: usize) -> Option<(KripkeModel, String)> {
    let compiled = compile(f, &f.boxed_subformulas());
    check_bounds(compiled.vars.len(), max_worlds);
    scan_par(&compiled, max_worlds)
}

/// Bounded refutation oracle; parallel when the `parallel` feature is on.
pub fn refute_by_enumeration(f: &Formula, max_worlds: usize) -> Option<(KripkeModel, String)> {
    #[cfg(feature = "parallel")]
    {
        refute_by_enumeration_par(f, max_worlds)
    }
    #[cfg(not(feature = "parallel"))]
    {
        refute_by_enumeration_seq(f, max_worlds)
    }
}

/// Like [`refute_by_enumeration`], but the witness world's reflexivity
/// requirement is the boxed members of a caller-chosen `sigma`; with an empty
/// set this searches for a plain GL countermodel.
pub fn falsify_at_reflexive_world(
    f: &Formula,
    sigma: &FormulaSet,
    max_worlds: usize,
) -> Option<(KripkeModel, String)> {
    let compiled = compile(f, sigma);
    check_bounds(compiled.vars.len(), max_worlds);
    scan_seq(&compiled, max_worlds)
}

/// Iterator over every GL-model with up to `max_worlds` worlds over the given
/// variables, in enumeration order.
pub fn gl_models(vars: Vec<String>, max_worlds: usize) -> impl Iterator<Item = KripkeModel> {
    check_bounds(vars.len(), max_worlds);
    let nvars = vars.len();
    (1..=max_worlds).flat_map(move |n| {
        let vars = vars.clone();
        strict_relations(n).into_iter().flat_map(move |rel| {
            let vars = vars.clone();
            (0..1u64 << (n * nvars)).map(move |val| build_model(&vars, n, rel, val))
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn f(text: &str) -> Formula {
        parse(text).unwrap()
    }

    #[test]
    fn strict_relation_counts_are_the_strict_poset_numbers() {
        // Strict partial orders on n labeled points: 1, 3, 19, 219.
        assert_eq!(strict_relations(1).len(), 1);
        assert_eq!(strict_relations(2).len(), 3);
        assert_eq!(strict_relations(3).len(), 19);
        assert_eq!(strict_relations(4).len(), 219);
    }

    #[test]
    fn reflection_has_no_reflexive_witness() {
        // Any world falsifying []p -> p fails its own reflexivity condition.
        assert_eq!(refute_by_enumeration_seq(&f("[]p -> p"), 3), None);
    }

    #[test]
    fn variable_is_refuted_by_a_single_world() {
        let (model, world) = refute_by_enumeration_seq(&f("p"), 1).unwrap();
        assert_eq!(model.worlds, vec!["w0"]);
        assert!(model.relation.is_empty());
        assert_eq!(world, "w0");
        assert!(!model.eval("w0", &f("p")).unwrap());
    }

    #[test]
    fn boxed_reflection_is_refuted_with_two_worlds() {
        let target = f("[]([]p -> p)");
        let (model, world) = refute_by_enumeration_seq(&target, 2).unwrap();
        assert_eq!(model.worlds.len(), 2);
        assert!(model.is_gl_model());
        assert!(!model.eval(&world, &target).unwrap());
        // The witness world satisfies every reflection instance of the
        // formula's boxed subformulas.
        for boxed in target.boxed_subformulas() {
            let Formula::Box(body) = &boxed else { unreachable!() };
            let instance = Formula::imp(boxed.clone(), (**body).clone());
            assert!(model.eval(&world, &instance).unwrap());
        }
    }

    #[test]
    fn enumerated_models_are_gl_models() {
        let models: Vec<_> = gl_models(vec!["p".into()], 2).collect();
        // 1 world x 2 valuations + 3 relations x 4 valuations.
        assert_eq!(models.len(), 14);
        assert!(models.iter().all(KripkeModel::is_gl_model));
    }

    #[test]
    fn plain_falsification_finds_gl_countermodel() {
        // []p -> p is falsifiable in a GL-model even though no SF-reflexive
        // witness exists.
        let (model, world) =
            falsify_at_reflexive_world(&f("[]p -> p"), &FormulaSet::new(), 3).unwrap();
        assert!(!model.eval(&world, &f("[]p -> p")).unwrap());
        assert_eq!(model.worlds.len(), 1);
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_agrees_with_sequential() {
        for text in ["p -> []p", "[]p -> p", "[](p -> p)", "[]p | ~[]p", "p & ~p"] {
            let formula = f(text);
            assert_eq!(
                refute_by_enumeration_par(&formula, 3),
                refute_by_enumeration_seq(&formula, 3),
                "witness mismatch for {text}"
            );
        }
    }
}

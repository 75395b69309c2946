//! Property tests tying the prover, the checker, the semantics and the
//! countermodels together.

use gls_core::calculus::{box_set, check_proof, reduce_to_gl, unbox, Sequent};
use gls_core::countermodel::{build_chain, build_core, check_truth_lemma, eval_chain, eval_chain_sequent};
use gls_core::enumeration::{gl_models, refute_by_enumeration_seq};
use gls_core::formula::{subformula_closure, Formula, FormulaSet};
use gls_core::parser::parse;
use gls_core::search::{is_saturated, prove_gl, prove_gls, saturate, SearchOutcome};
use gls_core::semantics::{check_c1, KripkeModel};
use proptest::prelude::*;

const VARS: &[&str] = &["p", "q", "r"];

fn formula_strategy(max_depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        1 => Just(Formula::Bot),
        9 => proptest::sample::select(VARS).prop_map(Formula::var),
    ];
    leaf.prop_recursive(max_depth, 64, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            inner.prop_map(Formula::boxed),
        ]
    })
}

fn formula_set_strategy(max_depth: u32, max_len: usize) -> impl Strategy<Value = FormulaSet> {
    proptest::collection::vec(formula_strategy(max_depth), 0..=max_len)
        .prop_map(|v| v.into_iter().collect())
}

/// Transitive irreflexive models arise from closing an upper-triangular edge
/// set over ordered worlds.
#[allow(clippy::needless_range_loop)]
fn model_strategy() -> impl Strategy<Value = KripkeModel> {
    (1usize..=4)
        .prop_flat_map(|n| {
            let edges = proptest::collection::vec(any::<bool>(), n * (n - 1) / 2);
            let vals = proptest::collection::vec(
                proptest::collection::vec(any::<bool>(), VARS.len()),
                n,
            );
            (Just(n), edges, vals)
        })
        .prop_map(|(n, edges, vals)| {
            let mut rel = vec![vec![false; n]; n];
            let mut k = 0;
            for i in 0..n {
                for j in (i + 1)..n {
                    rel[i][j] = edges[k];
                    k += 1;
                }
            }
            for m in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        if rel[i][m] && rel[m][j] {
                            rel[i][j] = true;
                        }
                    }
                }
            }
            let worlds: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
            let mut relation = std::collections::BTreeSet::new();
            for i in 0..n {
                for j in 0..n {
                    if rel[i][j] {
                        relation.insert((format!("w{i}"), format!("w{j}")));
                    }
                }
            }
            let valuation = (0..n)
                .map(|i| {
                    let trues = VARS
                        .iter()
                        .enumerate()
                        .filter(|(v, _)| vals[i][*v])
                        .map(|(_, name)| name.to_string())
                        .collect();
                    (format!("w{i}"), trues)
                })
                .collect();
            KripkeModel {
                worlds,
                relation,
                valuation,
            }
        })
}

fn conjunction(set: &FormulaSet) -> Formula {
    let mut iter = set.iter().cloned();
    let first = iter.next().expect("nonempty");
    iter.fold(first, Formula::and)
}

fn disjunction(set: &FormulaSet) -> Formula {
    let mut iter = set.iter().cloned();
    let first = iter.next().expect("nonempty");
    iter.fold(first, Formula::or)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn print_parse_round_trip(f in formula_strategy(6)) {
        prop_assert_eq!(parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn subformula_count_is_bounded_by_size(f in formula_strategy(6)) {
        prop_assert!(f.subformulas().len() <= f.size());
    }

    #[test]
    fn subformula_closure_is_idempotent(set in formula_set_strategy(4, 3)) {
        let once = subformula_closure(&set);
        prop_assert_eq!(subformula_closure(&once), once.clone());
        prop_assert!(set.is_subset(&once));
    }

    #[test]
    fn unbox_inverts_boxing(set in formula_set_strategy(3, 4)) {
        prop_assert_eq!(unbox(&box_set(&set)), set);
    }

    #[test]
    fn reflexive_worlds_shrink_as_sigma_grows(
        m in model_strategy(),
        small in formula_set_strategy(3, 2),
        extra in formula_set_strategy(3, 2),
    ) {
        let mut large = small.clone();
        large.extend(extra.into_iter());
        let shrunk = m.reflexive_worlds(&large);
        let base = m.reflexive_worlds(&small);
        prop_assert!(shrunk.is_subset(&base));
    }

    #[test]
    fn c1_check_survives_growing_sigma(
        m in model_strategy(),
        sigma in formula_set_strategy(3, 2),
        extra in formula_set_strategy(3, 2),
        ant in formula_set_strategy(3, 2),
        suc in formula_set_strategy(3, 2),
    ) {
        let seq = Sequent::second(ant, suc);
        if check_c1(&m, &sigma, &seq) {
            let mut larger = sigma.clone();
            larger.extend(extra.into_iter());
            prop_assert!(check_c1(&m, &larger, &seq));
        }
    }

    #[test]
    fn sequent_truth_matches_its_formula_reading(
        m in model_strategy(),
        ant in formula_set_strategy(3, 3),
        suc in formula_set_strategy(3, 3),
    ) {
        prop_assume!(!ant.is_empty() && !suc.is_empty());
        let seq = Sequent::first(ant.clone(), suc.clone());
        let formula = Formula::imp(conjunction(&ant), disjunction(&suc));
        for w in &m.worlds {
            prop_assert_eq!(
                m.eval_sequent(w, &seq).unwrap(),
                m.eval(w, &formula).unwrap()
            );
        }
    }

    #[test]
    fn saturation_leaves_extend_the_input_within_its_subformulas(
        ant in formula_set_strategy(3, 2),
        suc in formula_set_strategy(3, 2),
    ) {
        let seq = Sequent::second(ant, suc);
        let mut closure: FormulaSet = seq.formulas().cloned().collect();
        closure = subformula_closure(&closure);
        for leaf in saturate(&seq) {
            prop_assert!(seq.antecedent.is_subset(&leaf.sequent.antecedent));
            prop_assert!(seq.succedent.is_subset(&leaf.sequent.succedent));
            prop_assert!(leaf.sequent.formulas().all(|f| closure.contains(f)));
            if leaf.closed {
                prop_assert!(leaf.sequent.is_axiom());
            } else {
                prop_assert!(is_saturated(&leaf.sequent));
                prop_assert!(!leaf.sequent.is_axiom());
            }
        }
    }

    #[test]
    fn search_proofs_check_and_are_cut_free(f in formula_strategy(4)) {
        if let SearchOutcome::Proved { tree, .. } = prove_gl(&Sequent::first([], [f.clone()])) {
            prop_assert!(check_proof(&tree).is_valid());
            prop_assert!(!tree.uses_cut());
        }
        if let SearchOutcome::Proved { tree, box_l_principals } =
            prove_gls(&Sequent::second([], [f.clone()]))
        {
            prop_assert!(check_proof(&tree).is_valid());
            prop_assert!(!tree.uses_cut());
            prop_assert_eq!(box_l_principals, tree.box_l_principals());
        }
    }

    #[test]
    fn gls_is_conservative_over_gl(f in formula_strategy(4)) {
        if prove_gl(&Sequent::first([], [f.clone()])).is_proved() {
            prop_assert!(prove_gls(&Sequent::second([], [f])).is_proved());
        }
    }

    #[test]
    fn reduction_route_agrees_with_direct_search(f in formula_strategy(4)) {
        let direct = prove_gls(&Sequent::second([], [f.clone()])).is_proved();
        let reduced = prove_gl(&Sequent::first([], [reduce_to_gl(&f)])).is_proved();
        prop_assert_eq!(direct, reduced);
    }

    #[test]
    fn enumeration_never_contradicts_the_prover(f in formula_strategy(3)) {
        if refute_by_enumeration_seq(&f, 2).is_some() {
            prop_assert!(!prove_gls(&Sequent::second([], [f])).is_proved());
        }
    }

    #[test]
    fn emitted_sigma_is_sound_on_small_models(f in formula_strategy(3)) {
        let query = Sequent::second([], [f.clone()]);
        if let SearchOutcome::Proved { box_l_principals, .. } = prove_gls(&query) {
            let vars: Vec<String> = f.variables().into_iter().collect();
            for m in gl_models(vars, 2) {
                prop_assert!(
                    check_c1(&m, &box_l_principals, &query),
                    "{} false at a Σ-reflexive world of {:?}", f, m
                );
            }
        }
    }

    #[test]
    fn gl_refutations_carry_valid_core_models(f in formula_strategy(4)) {
        let query = Sequent::first([], [f.clone()]);
        if let SearchOutcome::Refuted { witness } = prove_gl(&query) {
            let core = build_core(&witness).unwrap();
            prop_assert!(core.model().is_gl_model());
            prop_assert!(check_truth_lemma(&core).is_ok());
            prop_assert!(!core
                .model()
                .eval_sequent(core.designated_id(), &query)
                .unwrap());
        }
    }

    #[test]
    fn gls_refutations_carry_valid_chain_models(f in formula_strategy(4)) {
        let query = Sequent::second([], [f.clone()]);
        if let SearchOutcome::Refuted { witness } = prove_gls(&query) {
            let chain = build_chain(&witness).unwrap();
            prop_assert!(chain.core().model().is_gl_model());
            prop_assert!(check_truth_lemma(chain.core()).is_ok());
            let closure = f.subformulas();
            let verdict = eval_chain_sequent(&chain, &closure, &query);
            prop_assert!(verdict.always_false());
            // Reflection instances over the query's boxed subformulas all
            // stabilize to true along the tail.
            for boxed in f.boxed_subformulas() {
                let Formula::Box(body) = &boxed else { unreachable!() };
                let instance = Formula::imp(boxed.clone(), (**body).clone());
                let v = eval_chain(&chain, &closure, &instance);
                prop_assert!(v.value, "{} did not stabilize true", instance);
                prop_assert!(v.stabilized_at <= closure.len() + 1);
            }
        }
    }
}

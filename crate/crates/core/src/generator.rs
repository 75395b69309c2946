//! Random formulas for cross-checking, reproducible from a seed.
//!
//! Construction is chosen uniformly among variable, implication and box,
//! except that falsum carries only 5% weight (refutations would otherwise be
//! dominated by trivially false formulas). The depth budget decays by one per
//! operator; at depth zero only a leaf is drawn. Variables are `p1 ..
//! p<num_vars>`.

use crate::formula::Formula;
use rand::Rng;

const BOT_WEIGHT: f64 = 0.05;

fn leaf(rng: &mut impl Rng, num_vars: usize) -> Formula {
    if rng.gen::<f64>() < BOT_WEIGHT {
        Formula::Bot
    } else {
        Formula::var(format!("p{}", rng.gen_range(1..=num_vars)))
    }
}

/// One random formula with at most `max_depth` nested operators over
/// `num_vars` variables.
pub fn random_formula(rng: &mut impl Rng, max_depth: usize, num_vars: usize) -> Formula {
    assert!(num_vars >= 1, "need at least one variable");
    if max_depth == 0 {
        return leaf(rng, num_vars);
    }
    let roll = rng.gen::<f64>();
    if roll < BOT_WEIGHT {
        Formula::Bot
    } else if roll < BOT_WEIGHT + (1.0 - BOT_WEIGHT) / 3.0 {
        Formula::var(format!("p{}", rng.gen_range(1..=num_vars)))
    } else if roll < BOT_WEIGHT + 2.0 * (1.0 - BOT_WEIGHT) / 3.0 {
        Formula::imp(
            random_formula(rng, max_depth - 1, num_vars),
            random_formula(rng, max_depth - 1, num_vars),
        )
    } else {
        Formula::boxed(random_formula(rng, max_depth - 1, num_vars))
    }
}

/// The standard seeded generator for reproducible runs.
pub fn seeded_rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

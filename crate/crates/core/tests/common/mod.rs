#![allow(dead_code)]

use fuzzyeq_core::economy::{closed_form_equilibrium, Economy};
use fuzzyeq_core::{FuzzyNumber, Level};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn trapezoid() -> impl Strategy<Value = [f64; 4]> {
    prop::array::uniform4(-10.0..10.0f64).prop_map(|mut v| {
        v.sort_by(f64::total_cmp);
        v
    })
}

/// Ladders with 2 to 5 levels on random α grids.
pub fn fuzzy_number() -> impl Strategy<Value = FuzzyNumber> {
    let step = (0.01..0.99f64, 0.0..3.0f64, 0.0..3.0f64);
    (-10.0..10.0f64, 0.0..2.0f64, prop::collection::vec(step, 1..=4)).prop_map(|(centre, width, steps)| {
        let mut alphas: Vec<f64> = steps.iter().skip(1).map(|s| s.0).collect();
        alphas.sort_by(|a, b| b.total_cmp(a));
        alphas.dedup();
        alphas.push(0.0);
        // Walk down from the core, widening the cut at every level.
        let mut levels = vec![Level { alpha: 1.0, lower: centre, upper: centre + width }];
        for (alpha, s) in alphas.into_iter().zip(&steps) {
            let prev = levels.last().unwrap();
            levels.push(Level { alpha, lower: prev.lower - s.1, upper: prev.upper + s.2 });
        }
        levels.reverse();
        FuzzyNumber::from_levels(levels).unwrap()
    })
}

pub fn nonzero_scalar() -> impl Strategy<Value = f64> {
    prop_oneof![-5.0..-1e-3f64, 1e-3..5.0f64]
}

/// Expected value by midpoint quadrature on `n` cells per ladder segment,
/// reading cuts through `alpha_cut` only.
pub fn quadrature_expectation(f: &FuzzyNumber, n: usize) -> f64 {
    let alphas: Vec<f64> = f.levels().iter().map(|l| l.alpha).collect();
    let mut total = 0.0;
    for w in alphas.windows(2) {
        let h = (w[1] - w[0]) / n as f64;
        for k in 0..n {
            let (lo, hi) = f.alpha_cut(w[0] + (k as f64 + 0.5) * h).unwrap();
            total += h * (lo + hi) / 2.0;
        }
    }
    total
}

pub fn scale(f: &FuzzyNumber) -> f64 {
    let (lo, hi) = f.support();
    1.0 + lo.abs().max(hi.abs())
}

/// Draws a two-good, `agents`-agent economy of the example family whose
/// equilibrium is interior for every agent.
pub fn interior_instance(rng: &mut ChaCha8Rng, agents: usize) -> (Vec<[f64; 2]>, Vec<[f64; 2]>, Economy) {
    loop {
        let w: Vec<[f64; 2]> = (0..agents).map(|_| [rng.gen_range(0.2..4.0), rng.gen_range(0.2..4.0)]).collect();
        let b: Vec<[f64; 2]> =
            w.iter().map(|wi| [-(wi[0] + rng.gen_range(0.2..5.0)), -(wi[1] + rng.gen_range(0.2..5.0))]).collect();
        let c: Vec<f64> = (0..agents).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let econ = Economy::example_form(w.clone(), b.clone(), c).unwrap();
        if closed_form_equilibrium(&econ).is_ok() {
            return (w, b, econ);
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seeded counterpart of [`fuzzy_number`].
pub fn random_ladder(rng: &mut ChaCha8Rng) -> FuzzyNumber {
    let extra = rng.gen_range(0..=3);
    let mut alphas: Vec<f64> = (0..extra).map(|_| rng.gen_range(0.01..0.99)).collect();
    alphas.sort_by(|a, b| b.total_cmp(a));
    alphas.dedup();
    alphas.push(0.0);
    let centre = rng.gen_range(-10.0..10.0);
    let mut levels = vec![Level { alpha: 1.0, lower: centre, upper: centre + rng.gen_range(0.0..2.0) }];
    for alpha in alphas {
        let prev = *levels.last().unwrap();
        levels.push(Level { alpha, lower: prev.lower - rng.gen_range(0.0..3.0), upper: prev.upper + rng.gen_range(0.0..3.0) });
    }
    levels.reverse();
    FuzzyNumber::from_levels(levels).unwrap()
}

pub fn random_trapezoid(rng: &mut ChaCha8Rng) -> [f64; 4] {
    let mut v = [0.0; 4].map(|_: f64| rng.gen_range(-10.0..10.0));
    v.sort_by(f64::total_cmp);
    v
}

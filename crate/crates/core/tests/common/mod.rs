#![allow(dead_code)]

use mmqss::Parameters;
use proptest::prelude::*;
use rand::Rng;

/// Parameter set with α ∈ (0.05, 0.95) and ε_SS ∈ (1e-3, 0.3), spread over
/// several decades of rate constants.
pub fn random_params(rng: &mut impl Rng) -> Parameters {
    let k1 = 10f64.powf(rng.gen_range(-1.0..1.0));
    let k_m = 10f64.powf(rng.gen_range(1.0..3.0));
    let eps_ss = 10f64.powf(rng.gen_range(-3.0..0.3f64.log10()));
    let beta = 10f64.powf(rng.gen_range(-2.0..2.0));
    let alpha = rng.gen_range(0.05..0.95);
    let omega = 10f64.powf(rng.gen_range(0.0..2.0));
    from_qualifiers(k1, k_m, eps_ss, beta, alpha, omega)
}

pub fn from_qualifiers(k1: f64, k_m: f64, eps_ss: f64, beta: f64, alpha: f64, omega: f64) -> Parameters {
    let e_t = eps_ss * k_m;
    let k_m1 = k1 * k_m / (1.0 + beta);
    let k2 = beta * k_m1;
    Parameters::new(alpha * k2 * e_t, e_t, k1, k2, k_m1, omega).unwrap()
}

pub fn random_sets(n: usize, seed: u64) -> Vec<Parameters> {
    let mut rng = mmqss::rng::stream(seed);
    (0..n).map(|_| random_params(&mut rng)).collect()
}

pub fn params_strategy() -> impl Strategy<Value = Parameters> {
    (-1.0..1.0f64, 1.0..3.0f64, -3.0..-0.523f64, -2.0..2.0f64, 0.05..0.95f64, 0.0..2.0f64).prop_map(
        |(lk1, lkm, leps, lbeta, alpha, lomega)| {
            from_qualifiers(
                10f64.powf(lk1),
                10f64.powf(lkm),
                10f64.powf(leps),
                10f64.powf(lbeta),
                alpha,
                10f64.powf(lomega),
            )
        },
    )
}

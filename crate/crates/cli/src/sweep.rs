//! Accuracy of the stochastic sQSSA as a function of `beta = k2 / k-1`.
//!
//! Each sweep point uses Ω = 1, ten enzyme molecules, `k1 = 1`,
//! `K_M = 1000` (so `eps_ss = 0.01`) and `k0 = v/2`, with
//! `k2 = 1000 β/(1+β)` and `k-1 = 1000/(1+β)`.

use std::io::{self, Write};

use mmqss::rng::hash64;
use mmqss::ssa::{self, MomentEstimate, StationaryOptions};
use mmqss::{lna, Parameters};
use rayon::prelude::*;

use crate::error::{CliError, CliResult};

pub const DEFAULT_BETAS: [f64; 5] = [0.01, 0.1, 1.0, 10.0, 100.0];
pub const DEFAULT_BUDGET: u64 = 10_000_000;
pub const QUICK_BUDGET: u64 = 1_000_000;
pub const QUICK_REPLICAS: usize = 1_000;

pub const CSV_HEADER: &str = "beta,mu_full,se_mu_full,sigma_full_ssa,sigma_red_ssa,sigma_full_lna,sigma_red_lna,discrepancy_eq14,seed";

/// Parameters of the sweep point at `beta`.
pub fn construction(beta: f64) -> mmqss::Result<Parameters> {
    let k_m = 1000.0;
    let e_t = 10.0;
    let k2 = k_m * beta / (1.0 + beta);
    let k_m1 = k_m / (1.0 + beta);
    Parameters::new(0.5 * k2 * e_t, e_t, 1.0, k2, k_m1, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Estimator {
    /// One long trajectory per network with this total event budget.
    LongRun { budget: u64 },
    /// Independent replicas, each observed once after burn-in.
    Replicas { replicas: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub betas: Vec<f64>,
    pub estimator: Estimator,
    pub seed: u64,
    pub workers: usize,
    pub options: StationaryOptions,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            betas: DEFAULT_BETAS.to_vec(),
            estimator: Estimator::LongRun {
                budget: DEFAULT_BUDGET,
            },
            seed: 0,
            workers: 1,
            options: StationaryOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub beta: f64,
    /// Seed of this point; the networks use `hash64(seed, 0)` (full) and
    /// `hash64(seed, 1)` (reduced).
    pub seed: u64,
    pub full: MomentEstimate,
    pub reduced: MomentEstimate,
    pub sigma2_full_lna: f64,
    pub sigma2_red_lna: f64,
    pub lna_discrepancy: f64,
}

impl SweepRow {
    /// `(σ²_red - σ²_full) / σ²_full` from the simulated variances.
    pub fn measured_discrepancy(&self) -> f64 {
        (self.reduced.variance - self.full.variance) / self.full.variance
    }

    /// Delta-method standard error of [`Self::measured_discrepancy`].
    pub fn measured_discrepancy_se(&self) -> f64 {
        let vf = self.full.variance;
        let vr = self.reduced.variance;
        let a = self.reduced.std_error_variance / vf;
        let b = vr * self.full.std_error_variance / (vf * vf);
        (a * a + b * b).sqrt()
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.beta,
            self.full.mean,
            self.full.std_error_mean,
            self.full.std,
            self.reduced.std,
            self.sigma2_full_lna.sqrt(),
            self.sigma2_red_lna.sqrt(),
            self.lna_discrepancy,
            self.seed
        )
    }
}

fn run_point(index: usize, beta: f64, config: &SweepConfig) -> mmqss::Result<SweepRow> {
    let params = construction(beta)?;
    let seed = hash64(config.seed, index as u64);
    let full_net = ssa::build_full_network(&params)?;
    let red_net = ssa::build_reduced_network(&params)?;
    let estimate = |net: &ssa::ReactionNetwork, s: u64| match config.estimator {
        Estimator::LongRun { budget } => {
            ssa::stationary_moments(net, &params, budget, s, &config.options)
        }
        Estimator::Replicas { replicas } => {
            ssa::ensemble_moments(net, &params, replicas, s, &config.options)
        }
    };
    Ok(SweepRow {
        beta,
        seed,
        full: estimate(&full_net, hash64(seed, 0))?,
        reduced: estimate(&red_net, hash64(seed, 1))?,
        sigma2_full_lna: lna::sigma2_full(&params)?,
        sigma2_red_lna: lna::sigma2_red(&params)?,
        lna_discrepancy: lna::discrepancy(&params)?,
    })
}

/// Runs every sweep point, up to `workers` at a time. Rows come back in
/// grid order whatever the completion order.
pub fn run_sweep(config: &SweepConfig) -> CliResult<Vec<SweepRow>> {
    if config.betas.is_empty() {
        return Err(CliError::Usage("sweep grid is empty".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.max(1))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot build worker pool: {e}")))?;
    let rows: Vec<mmqss::Result<SweepRow>> = pool.install(|| {
        config
            .betas
            .par_iter()
            .enumerate()
            .map(|(i, &beta)| run_point(i, beta, config))
            .collect()
    });
    rows.into_iter()
        .map(|r| r.map_err(CliError::from))
        .collect()
}

pub fn write_csv<W: Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.csv_line())?;
    }
    Ok(())
}

//! Command implementations. Each returns the bytes it would write, so the
//! binary and the tests share one code path.

use std::io::Write;

use mmqss::deterministic::{integrate, State2, VectorFieldKind};
use mmqss::fenichel::{factorization_for, projector_at, reduced_field, Tfpv};
use mmqss::lna::LnaResult;
use mmqss::model::{classify_regime, derive, DerivedConstants, RegimeReport};
use mmqss::ssa::{self, CountState, StationaryOptions};
use mmqss::{Parameters, Thresholds};
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::sweep::{self, Estimator, SweepConfig};

pub const DEFAULT_SEED: u64 = 0;

#[derive(Serialize)]
struct QualifierOutput<'a> {
    params: &'a Parameters,
    #[serde(flatten)]
    derived: DerivedConstants,
    discrepancy: f64,
    nearest_tfpv: mmqss::model::NearestTfpv,
    classification: mmqss::model::Classification,
}

/// Derived constants, qualifiers and regime classification as one JSON
/// object.
pub fn cmd_qualifiers(params: &Parameters, thresholds: &Thresholds) -> CliResult<Vec<u8>> {
    let derived = derive(params)?;
    let report: RegimeReport = classify_regime(params, thresholds)?;
    let discrepancy = report
        .qualifiers
        .discrepancy
        .ok_or(mmqss::Error::NoStationaryPoint {
            alpha: derived.alpha,
        })?;
    let out = QualifierOutput {
        params,
        derived,
        discrepancy,
        nearest_tfpv: report.nearest_tfpv,
        classification: report.classification,
    };
    let mut bytes = serde_json::to_vec(&out).expect("qualifiers serialize");
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn cmd_lna(params: &Parameters) -> CliResult<Vec<u8>> {
    let mut bytes = LnaResult::evaluate(params)?.to_json().into_bytes();
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn cmd_sweep_beta(config: &SweepConfig) -> CliResult<Vec<u8>> {
    let rows = sweep::run_sweep(config)?;
    let mut out = Vec::new();
    sweep::write_csv(&rows, &mut out)?;
    Ok(out)
}

/// Sweep settings from a config file (flags already merged in).
pub fn sweep_config(config: &ExperimentConfig) -> SweepConfig {
    let estimator = match config.replicas {
        Some(replicas) => Estimator::Replicas { replicas },
        None => Estimator::LongRun {
            budget: config.budget.unwrap_or(if config.quick {
                sweep::QUICK_BUDGET
            } else {
                sweep::DEFAULT_BUDGET
            }),
        },
    };
    SweepConfig {
        betas: config
            .betas
            .clone()
            .unwrap_or_else(|| sweep::DEFAULT_BETAS.to_vec()),
        estimator,
        seed: config.seed.unwrap_or(DEFAULT_SEED),
        workers: config.workers.unwrap_or(1),
        options: stationary_options(config),
    }
}

fn stationary_options(config: &ExperimentConfig) -> StationaryOptions {
    let mut options = StationaryOptions::default();
    if let Some(b) = config.burn_in_relaxations {
        options.burn_in_relaxations = b;
    }
    options
}

fn network_for(name: &str, params: &Parameters) -> CliResult<ssa::ReactionNetwork> {
    match name {
        "full" => Ok(ssa::build_full_network(params)?),
        "reduced" => Ok(ssa::build_reduced_network(params)?),
        other => Err(CliError::Usage(format!(
            "unknown network `{other}` (expected full or reduced)"
        ))),
    }
}

/// What `simulate` should produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimulateMode {
    /// Sampled trajectory as CSV.
    Trajectory,
    /// Long-run stationary moments as JSON.
    Moments,
    /// Replica-ensemble stationary moments as JSON.
    Replicas,
}

pub fn cmd_simulate(
    params: &Parameters,
    config: &ExperimentConfig,
    mode: SimulateMode,
) -> CliResult<Vec<u8>> {
    let network = network_for(config.network.as_deref().unwrap_or("full"), params)?;
    let seed = config.seed.unwrap_or(DEFAULT_SEED);
    let options = stationary_options(config);
    let mut out = Vec::new();
    match mode {
        SimulateMode::Trajectory => {
            let initial = match config.initial_counts {
                Some([n_s, n_c]) => CountState {
                    n_s,
                    n_c,
                    n_p: 0,
                    e_total: network.e_total,
                },
                None => CountState {
                    e_total: network.e_total,
                    ..Default::default()
                },
            };
            let t_end = config.t_end.unwrap_or(1.0);
            let traj = ssa::simulate(&network, initial, t_end, seed, config.sample_interval)?;
            if traj.stop == ssa::StopReason::Absorbed {
                eprintln!("absorbing state reached at t = {}", traj.stop_time);
            }
            traj.write_csv(&mut out)?;
        }
        SimulateMode::Moments => {
            let budget = config.budget.unwrap_or(if config.quick {
                sweep::QUICK_BUDGET
            } else {
                sweep::DEFAULT_BUDGET
            });
            let est = ssa::stationary_moments(&network, params, budget, seed, &options)?;
            writeln!(out, "{}", est.to_json())?;
        }
        SimulateMode::Replicas => {
            let replicas = config.replicas.unwrap_or(sweep::QUICK_REPLICAS);
            let est = ssa::ensemble_moments(&network, params, replicas, seed, &options)?;
            writeln!(out, "{}", est.to_json())?;
        }
    }
    Ok(out)
}

pub fn cmd_ode(params: &Parameters, config: &ExperimentConfig) -> CliResult<Vec<u8>> {
    let kind: VectorFieldKind = config
        .kind
        .as_deref()
        .unwrap_or("full_mass_action")
        .parse()?;
    let initial = config.initial.unwrap_or_default();
    let t_c = 1.0 / (params.k_m1 + params.k2);
    let t_s = 1.0 / (params.k1 * params.e_t);
    let step = config.step.unwrap_or(t_c / 10.0);
    let t_end = config.t_end.unwrap_or(200.0 * t_s);
    let traj = integrate(kind, initial, t_end, step, params)?;
    if traj.clamped > 0 {
        eprintln!("clamped {} negative concentrations to zero", traj.clamped);
    }
    let mut out = Vec::new();
    traj.write_csv(&mut out, config.product)?;
    Ok(out)
}

#[derive(Serialize)]
struct ProjectionOutput {
    tfpv: Tfpv,
    s: f64,
    c: f64,
    pi: [[f64; 2]; 2],
    dfp: f64,
    dfp_eigenvalues: [f64; 1],
    attracting: bool,
    reduced_field: [f64; 2],
}

/// Projector, `DfP` eigenvalues and reduced field at each requested point.
/// Points are substrate values for `pi1`/`pi3` and complex values on the
/// branch `s = 0` for `reverse_closed`.
pub fn cmd_project(params: &Parameters, config: &ExperimentConfig) -> CliResult<Vec<u8>> {
    let tfpv: Tfpv = config.tfpv.as_deref().unwrap_or("pi1").parse()?;
    let mut fact = factorization_for(tfpv, params)?;
    if let Some(delta) = config.delta {
        fact = fact.with_delta(delta)?;
    }
    let fp = mmqss::model::fixed_point(params).ok();
    let points = config.points.clone().unwrap_or_else(|| match tfpv {
        Tfpv::ReverseClosed => vec![0.0, 0.5 * (params.e_t - fact.delta)],
        _ => vec![0.0, params.k_m(), fp.map_or(params.k_m(), |f| f.gamma)],
    });
    let results = points
        .iter()
        .map(|&x| {
            let z: State2 = fact.manifold_point(x);
            let proj = projector_at(&fact, z)?;
            let r = reduced_field(&fact, z)?;
            let m = proj.pi_matrix;
            Ok(ProjectionOutput {
                tfpv,
                s: z.s,
                c: z.c,
                pi: [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]],
                dfp: proj.dfp,
                dfp_eigenvalues: proj.nontrivial_eigenvalues,
                attracting: proj.attracting,
                reduced_field: [r[0], r[1]],
            })
        })
        .collect::<mmqss::Result<Vec<_>>>()?;
    let mut bytes = serde_json::to_vec(&results).expect("projection serializes");
    bytes.push(b'\n');
    Ok(bytes)
}

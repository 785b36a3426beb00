//! Command-line front end: parameter ingestion, experiment execution and
//! CSV/JSON emission.

pub mod commands;
pub mod config;
pub mod error;
pub mod sweep;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::SimulateMode;
use crate::config::{ExperimentConfig, ParamOverrides};
use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "mmqss", version, about = "Open Michaelis-Menten QSS laboratory")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// JSON experiment configuration; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file (default: standard output).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Reduced budgets for quick checks.
    #[arg(long, global = true)]
    pub quick: bool,
    #[arg(long, global = true)]
    pub k0: Option<f64>,
    /// Total enzyme concentration.
    #[arg(long = "et", global = true)]
    pub e_t: Option<f64>,
    #[arg(long, global = true)]
    pub k1: Option<f64>,
    #[arg(long, global = true)]
    pub k2: Option<f64>,
    /// Dissociation rate constant k-1.
    #[arg(long = "km1", global = true)]
    pub k_m1: Option<f64>,
    #[arg(long, global = true)]
    pub omega: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Derived constants, dimensionless qualifiers and regime (JSON).
    Qualifiers {
        /// Single cutoff for every qualifier.
        #[arg(long)]
        cutoff: Option<f64>,
    },
    /// Stationary moments of both networks across a beta grid (CSV).
    SweepBeta {
        /// Comma-separated beta values.
        #[arg(long, value_delimiter = ',')]
        betas: Option<Vec<f64>>,
        /// Events per network and point.
        #[arg(long)]
        budget: Option<u64>,
        /// Use the replica-ensemble estimator with this many replicas.
        #[arg(long)]
        replicas: Option<usize>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Gillespie simulation: trajectory CSV or stationary-moment JSON.
    Simulate {
        /// full or reduced.
        #[arg(long)]
        network: Option<String>,
        #[arg(long)]
        t_end: Option<f64>,
        /// Record on a regular grid instead of at every event.
        #[arg(long)]
        sample_interval: Option<f64>,
        /// Initial `n_S,n_C` (default 0,0).
        #[arg(long, value_delimiter = ',', num_args = 2)]
        initial: Option<Vec<u64>>,
        /// Emit long-run stationary moments instead of a trajectory.
        #[arg(long, conflicts_with = "replicas")]
        moments: bool,
        #[arg(long)]
        budget: Option<u64>,
        /// Emit replica-ensemble moments with this many replicas.
        #[arg(long)]
        replicas: Option<usize>,
    },
    /// Fixed-step RK4 integration of a vector field (CSV).
    Ode {
        /// full_mass_action, sqssa, linear_sqssa, qea, qea_special,
        /// reverse_closed or zero_enzyme.
        #[arg(long)]
        kind: Option<String>,
        #[arg(long)]
        s0: Option<f64>,
        #[arg(long)]
        c0: Option<f64>,
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long)]
        step: Option<f64>,
        /// Also integrate the product and emit a `p` column.
        #[arg(long)]
        product: bool,
    },
    /// Linear-noise stationary variances (JSON).
    Lna,
    /// Oblique projector and reduced field on a critical manifold (JSON).
    Project {
        /// pi1, pi3 or reverse_closed.
        #[arg(long)]
        tfpv: Option<String>,
        /// Comma-separated manifold coordinates.
        #[arg(long, value_delimiter = ',')]
        points: Option<Vec<f64>>,
        #[arg(long)]
        delta: Option<f64>,
    },
}

impl CommonArgs {
    fn overrides(&self) -> ParamOverrides {
        ParamOverrides {
            k0: self.k0,
            e_t: self.e_t,
            k1: self.k1,
            k2: self.k2,
            k_m1: self.k_m1,
            omega: self.omega,
        }
    }
}

/// Merges flags into the configuration and runs the command, returning the
/// output bytes and the destination path.
pub fn execute(cli: Cli) -> CliResult<(Vec<u8>, Option<PathBuf>)> {
    let common = &cli.common;
    let mut config = match &common.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if common.seed.is_some() {
        config.seed = common.seed;
    }
    if common.out.is_some() {
        config.out = common.out.clone();
    }
    config.quick |= common.quick;
    let overrides = common.overrides();

    let bytes = match cli.command {
        Command::Qualifiers { cutoff } => {
            let mut thresholds = config.thresholds.unwrap_or_default();
            if let Some(c) = cutoff {
                thresholds = mmqss::Thresholds {
                    eps_ss: c,
                    alpha: c,
                    beta: c,
                    lambda: c,
                };
            }
            let params = overrides.resolve_with(&config)?;
            commands::cmd_qualifiers(&params, &thresholds)?
        }
        Command::SweepBeta {
            betas,
            budget,
            replicas,
            workers,
        } => {
            config.betas = betas.or(config.betas);
            config.budget = budget.or(config.budget);
            config.replicas = replicas.or(config.replicas);
            config.workers = workers.or(config.workers);
            if config.quick && config.budget.is_none() && config.replicas.is_none() {
                config.budget = Some(sweep::QUICK_BUDGET);
            }
            config.validate()?;
            commands::cmd_sweep_beta(&commands::sweep_config(&config))?
        }
        Command::Simulate {
            network,
            t_end,
            sample_interval,
            initial,
            moments,
            budget,
            replicas,
        } => {
            config.network = network.or(config.network);
            config.t_end = t_end.or(config.t_end);
            config.sample_interval = sample_interval.or(config.sample_interval);
            if let Some(v) = initial {
                config.initial_counts = Some([v[0], v[1]]);
            }
            config.budget = budget.or(config.budget);
            config.replicas = replicas.or(config.replicas);
            config.validate()?;
            let mode = if moments {
                SimulateMode::Moments
            } else if config.replicas.is_some() {
                SimulateMode::Replicas
            } else {
                SimulateMode::Trajectory
            };
            let params = overrides.resolve_with(&config)?;
            commands::cmd_simulate(&params, &config, mode)?
        }
        Command::Ode {
            kind,
            s0,
            c0,
            t_end,
            step,
            product,
        } => {
            config.kind = kind.or(config.kind);
            let mut initial = config.initial.unwrap_or_default();
            initial.s = s0.unwrap_or(initial.s);
            initial.c = c0.unwrap_or(initial.c);
            config.initial = Some(initial);
            config.t_end = t_end.or(config.t_end);
            config.step = step.or(config.step);
            config.product |= product;
            let params = overrides.resolve_with(&config)?;
            commands::cmd_ode(&params, &config)?
        }
        Command::Lna => commands::cmd_lna(&overrides.resolve_with(&config)?)?,
        Command::Project {
            tfpv,
            points,
            delta,
        } => {
            config.tfpv = tfpv.or(config.tfpv);
            config.points = points.or(config.points);
            config.delta = delta.or(config.delta);
            config.validate()?;
            let params = overrides.resolve_with(&config)?;
            commands::cmd_project(&params, &config)?
        }
    };
    Ok((bytes, config.out))
}

/// Entry point shared by the binary: returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return err.exit_code();
        }
    };
    match execute(cli).and_then(|(bytes, out)| emit(&bytes, out)) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

fn emit(bytes: &[u8], out: Option<PathBuf>) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(&path, bytes).map_err(CliError::from),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush().map_err(CliError::from)
        }
    }
}

//! Exact stochastic simulation (Gillespie direct method) of the full
//! master equation and of the reduced stochastic sQSSA, and stationary
//! moment estimation.

use std::io::{self, Write};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::deterministic::{jacobian, State2};
use crate::error::{Error, Result};
use crate::model::{fixed_point, Parameters};
use crate::rng::{self, hash64};

/// Copy numbers. Free enzyme is implicit as `e_total - n_c`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
pub struct CountState {
    pub n_s: u64,
    pub n_c: u64,
    pub n_p: u64,
    pub e_total: u64,
}

impl CountState {
    pub fn validate(&self) -> Result<()> {
        if self.n_c > self.e_total {
            return Err(Error::InvalidState(format!(
                "n_C = {} exceeds E_T = {}",
                self.n_c, self.e_total
            )));
        }
        Ok(())
    }

    pub fn free_enzyme(&self) -> u64 {
        self.e_total - self.n_c
    }
}

/// `round(eT * omega)`; logs a warning when the product is not integral.
pub fn enzyme_copies(params: &Parameters) -> Result<u64> {
    let exact = params.e_t * params.omega;
    let rounded = exact.round();
    if (exact - rounded).abs() > 1e-9 {
        log::warn!("eT * omega = {exact} is not an integer; using {rounded} enzyme molecules");
    }
    if rounded < 1.0 {
        return Err(Error::InvalidParameter {
            name: "eT",
            value: params.e_t,
            reason: "eT * omega must round to at least one enzyme molecule",
        });
    }
    Ok(rounded as u64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Propensity {
    /// Constant rate.
    Constant(f64),
    /// `rate * n_s * (E_T - n_c)`.
    Binding(f64),
    /// `rate * n_c`.
    Complex(f64),
    /// `vmax * n_s / (k_half + n_s)`, all in copy numbers.
    Saturating { vmax: f64, k_half: f64 },
}

impl Propensity {
    #[inline]
    pub fn eval(&self, x: &CountState) -> f64 {
        match *self {
            Self::Constant(rate) => rate,
            Self::Binding(rate) => rate * x.n_s as f64 * x.free_enzyme() as f64,
            Self::Complex(rate) => rate * x.n_c as f64,
            Self::Saturating { vmax, k_half } => {
                let n = x.n_s as f64;
                vmax * n / (k_half + n)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reaction {
    pub name: &'static str,
    /// Change in `(n_s, n_c, n_p)`.
    pub change: [i64; 3],
    pub propensity: Propensity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NetworkLabel {
    Full,
    Reduced,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReactionNetwork {
    pub label: NetworkLabel,
    pub reactions: Vec<Reaction>,
    pub e_total: u64,
}

impl ReactionNetwork {
    pub fn propensities(&self, x: &CountState) -> Vec<f64> {
        self.reactions.iter().map(|r| r.propensity.eval(x)).collect()
    }

    /// Index of the reaction that removes substrate from the system for
    /// good (catalysis or consumption).
    pub fn outflow_reaction(&self) -> usize {
        self.reactions.len() - 1
    }
}

/// Four elementary reactions: influx, binding, unbinding, catalysis.
pub fn build_full_network(params: &Parameters) -> Result<ReactionNetwork> {
    params.validate()?;
    let e_total = enzyme_copies(params)?;
    Ok(ReactionNetwork {
        label: NetworkLabel::Full,
        e_total,
        reactions: vec![
            Reaction {
                name: "influx",
                change: [1, 0, 0],
                propensity: Propensity::Constant(params.omega * params.k0),
            },
            Reaction {
                name: "binding",
                change: [-1, 1, 0],
                propensity: Propensity::Binding(params.k1 / params.omega),
            },
            Reaction {
                name: "unbinding",
                change: [1, -1, 0],
                propensity: Propensity::Complex(params.k_m1),
            },
            Reaction {
                name: "catalysis",
                change: [0, -1, 1],
                propensity: Propensity::Complex(params.k2),
            },
        ],
    })
}

/// Influx plus substrate consumption with the non-elementary propensity
/// `k2 eT n_S / (K_M + n_S / omega)`.
pub fn build_reduced_network(params: &Parameters) -> Result<ReactionNetwork> {
    params.validate()?;
    let e_total = enzyme_copies(params)?;
    Ok(ReactionNetwork {
        label: NetworkLabel::Reduced,
        e_total,
        reactions: vec![
            Reaction {
                name: "influx",
                change: [1, 0, 0],
                propensity: Propensity::Constant(params.omega * params.k0),
            },
            Reaction {
                name: "consumption",
                change: [-1, 0, 1],
                propensity: Propensity::Saturating {
                    vmax: params.v() * params.omega,
                    k_half: params.k_m() * params.omega,
                },
            },
        ],
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Step {
    Fired { reaction: usize, time: f64 },
    /// Every propensity is zero; the state can never change again.
    Absorbed { time: f64 },
}

/// Direct-method SSA over one trajectory.
pub struct Simulator<'a> {
    network: &'a ReactionNetwork,
    state: CountState,
    time: f64,
    rng: rng::Stream,
    props: Vec<f64>,
}

impl<'a> Simulator<'a> {
    pub fn new(network: &'a ReactionNetwork, initial: CountState, seed: u64) -> Result<Self> {
        initial.validate()?;
        if initial.e_total != network.e_total {
            return Err(Error::InvalidState(format!(
                "initial E_T = {} but the network has {}",
                initial.e_total, network.e_total
            )));
        }
        Ok(Self {
            network,
            state: initial,
            time: 0.0,
            rng: rng::stream(seed),
            props: vec![0.0; network.reactions.len()],
        })
    }

    pub fn state(&self) -> CountState {
        self.state
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// Draws the next waiting time and reaction. The state and clock are
    /// only advanced if the event happens at or before `horizon`; otherwise
    /// the clock is moved to `horizon` and `None` is returned.
    pub fn step_until(&mut self, horizon: f64) -> Option<Step> {
        let mut total = 0.0;
        for (a, r) in self.props.iter_mut().zip(&self.network.reactions) {
            *a = r.propensity.eval(&self.state);
            total += *a;
        }
        if total <= 0.0 {
            return Some(Step::Absorbed { time: self.time });
        }
        // u in (0, 1]
        let u: f64 = 1.0 - self.rng.gen::<f64>();
        let dt = -u.ln() / total;
        let t_next = self.time + dt;
        let pick = self.rng.gen::<f64>() * total;
        if t_next > horizon {
            self.time = horizon;
            return None;
        }
        let mut acc = 0.0;
        let mut reaction = self.props.len() - 1;
        for (i, a) in self.props.iter().enumerate() {
            acc += a;
            if pick < acc {
                reaction = i;
                break;
            }
        }
        // guard against rounding in the cumulative sum landing on a zero
        // propensity channel
        while self.props[reaction] <= 0.0 {
            reaction -= 1;
        }
        self.apply(reaction);
        self.time = t_next;
        Some(Step::Fired {
            reaction,
            time: t_next,
        })
    }

    /// Fires the next event with no time horizon.
    pub fn step(&mut self) -> Step {
        self.step_until(f64::INFINITY)
            .expect("an infinite horizon is never reached")
    }

    fn apply(&mut self, reaction: usize) {
        let [ds, dc, dp] = self.network.reactions[reaction].change;
        let x = &mut self.state;
        x.n_s = x.n_s.checked_add_signed(ds).expect("n_S stays non-negative");
        x.n_c = x.n_c.checked_add_signed(dc).expect("n_C stays non-negative");
        x.n_p = x.n_p.checked_add_signed(dp).expect("n_P stays non-negative");
        debug_assert!(x.n_c <= x.e_total);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Completed,
    Absorbed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledTrajectory {
    /// `(t, state)`; the initial state, then either every event or every
    /// sampling instant, then the state at the stopping time.
    pub samples: Vec<(f64, CountState)>,
    pub events: u64,
    pub stop: StopReason,
    pub stop_time: f64,
}

impl SampledTrajectory {
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "t,n_S,n_C,n_P")?;
        for (t, x) in &self.samples {
            writeln!(out, "{t:.16e},{},{},{}", x.n_s, x.n_c, x.n_p)?;
        }
        Ok(())
    }
}

/// Runs one trajectory to `t_end`. With `sample_interval = None` every event
/// is recorded; otherwise the state is recorded on the grid
/// `0, Δ, 2Δ, … ≤ t_end`.
pub fn simulate(
    network: &ReactionNetwork,
    initial: CountState,
    t_end: f64,
    seed: u64,
    sample_interval: Option<f64>,
) -> Result<SampledTrajectory> {
    if !(t_end.is_finite() && t_end >= 0.0) {
        return Err(Error::InvalidState(format!("t_end must be non-negative, got {t_end}")));
    }
    if let Some(dt) = sample_interval {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidState(format!("sample interval must be positive, got {dt}")));
        }
    }
    let mut sim = Simulator::new(network, initial, seed)?;
    let mut samples = vec![(0.0, initial)];
    let mut events = 0;
    let mut next_sample = 1usize;
    loop {
        let before = sim.state();
        match sim.step_until(t_end) {
            Some(Step::Fired { time, .. }) => {
                events += 1;
                match sample_interval {
                    None => samples.push((time, sim.state())),
                    Some(dt) => {
                        while next_sample as f64 * dt < time {
                            samples.push((next_sample as f64 * dt, before));
                            next_sample += 1;
                        }
                    }
                }
            }
            Some(Step::Absorbed { time }) => {
                log::info!("absorbing state reached at t = {time}");
                if let Some(dt) = sample_interval {
                    while next_sample as f64 * dt <= t_end {
                        samples.push((next_sample as f64 * dt, before));
                        next_sample += 1;
                    }
                }
                return Ok(SampledTrajectory {
                    samples,
                    events,
                    stop: StopReason::Absorbed,
                    stop_time: time,
                });
            }
            None => {
                if let Some(dt) = sample_interval {
                    while next_sample as f64 * dt <= t_end {
                        samples.push((next_sample as f64 * dt, before));
                        next_sample += 1;
                    }
                } else {
                    samples.push((t_end, before));
                }
                return Ok(SampledTrajectory {
                    samples,
                    events,
                    stop: StopReason::Completed,
                    stop_time: t_end,
                });
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryOptions {
    /// Burn-in length in units of the slow relaxation time `1/|λ_slow|`.
    pub burn_in_relaxations: f64,
    pub batches: usize,
}

impl Default for StationaryOptions {
    fn default() -> Self {
        Self {
            burn_in_relaxations: 20.0,
            batches: 32,
        }
    }
}

/// Stationary statistics of `n_S`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentEstimate {
    pub mean: f64,
    pub variance: f64,
    pub std: f64,
    #[serde(rename = "se_mean")]
    pub std_error_mean: f64,
    #[serde(rename = "se_variance")]
    pub std_error_variance: f64,
    pub events: u64,
    pub burn_in: f64,
    pub seed: u64,
    /// Observed (post burn-in) time; the total over all replicas in
    /// replica mode.
    #[serde(skip)]
    pub observed_time: f64,
    /// Post burn-in firings per reaction channel.
    #[serde(skip)]
    pub firings: Vec<u64>,
    /// Batch-means standard error of each channel's firing rate.
    #[serde(skip)]
    pub std_error_rates: Vec<f64>,
}

impl MomentEstimate {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("moment estimate serializes")
    }

    /// Mean firing rate of each channel after burn-in.
    pub fn rates(&self) -> Vec<f64> {
        self.firings
            .iter()
            .map(|&n| n as f64 / self.observed_time)
            .collect()
    }
}

/// Slowest eigenvalue (smallest |Re|) of the full Jacobian at the fixed point.
pub fn slow_eigenvalue(params: &Parameters) -> Result<f64> {
    let fp = fixed_point(params)?;
    let j = jacobian(State2::new(fp.gamma, fp.nu), params);
    let tr = j.trace();
    let det = j.determinant();
    let disc = tr * tr - 4.0 * det;
    if disc >= 0.0 {
        // both real; the slow one is the root closer to zero, computed
        // without cancellation
        let b = -tr;
        let q = -0.5 * (b + b.signum() * disc.sqrt());
        let (a, b) = (q, det / q);
        Ok(if a.abs() < b.abs() { a } else { b })
    } else {
        Ok(tr / 2.0)
    }
}

/// Burn-in time `burn_in_relaxations / |λ_slow|`.
pub fn burn_in_time(params: &Parameters, options: &StationaryOptions) -> Result<f64> {
    Ok(options.burn_in_relaxations / slow_eigenvalue(params)?.abs())
}

/// Count state at the rounded deterministic fixed point.
pub fn fixed_point_counts(params: &Parameters, network: &ReactionNetwork) -> Result<CountState> {
    let fp = fixed_point(params)?;
    let n_c = match network.label {
        NetworkLabel::Full => ((fp.nu * params.omega).round() as u64).min(network.e_total),
        NetworkLabel::Reduced => 0,
    };
    Ok(CountState {
        n_s: (fp.gamma * params.omega).round() as u64,
        n_c,
        n_p: 0,
        e_total: network.e_total,
    })
}

#[derive(Debug, Clone, Copy, Default)]
struct Batch {
    time: f64,
    // time-weighted sums of (n_S - shift) and its square
    sum: f64,
    sum_sq: f64,
}

/// Time-averaged stationary mean and variance of `n_S` from one long
/// trajectory.
///
/// Starts at the rounded fixed point, discards `burn_in_time`, then spends
/// the rest of `budget` (total events, burn-in included) accumulating
/// holding-time-weighted moments. Standard errors come from
/// `options.batches` batches of equal event count.
pub fn stationary_moments(
    network: &ReactionNetwork,
    params: &Parameters,
    budget: u64,
    seed: u64,
    options: &StationaryOptions,
) -> Result<MomentEstimate> {
    if options.batches < 2 {
        return Err(Error::InvalidState("at least two batches are required".into()));
    }
    let burn_in = burn_in_time(params, options)?;
    let initial = fixed_point_counts(params, network)?;
    let mut sim = Simulator::new(network, initial, seed)?;

    let mut events = 0u64;
    loop {
        if events >= budget {
            return Err(Error::InsufficientBudget { budget, burn_in });
        }
        match sim.step_until(burn_in) {
            Some(Step::Fired { .. }) => events += 1,
            Some(Step::Absorbed { time }) => return Err(Error::Absorbing { time }),
            None => break,
        }
    }

    let remaining = budget - events;
    let n_batches = options.batches as u64;
    if remaining < 10 * n_batches {
        return Err(Error::InsufficientBudget { budget, burn_in });
    }
    let shift = initial.n_s as f64;
    let n_channels = network.reactions.len();
    let mut batches = vec![Batch::default(); options.batches];
    let mut batch_firings = vec![vec![0u64; n_channels]; options.batches];

    for k in 0..remaining {
        let b = (k * n_batches / remaining) as usize;
        let x = sim.state().n_s as f64 - shift;
        let t0 = sim.time();
        match sim.step() {
            Step::Fired { reaction, time } => {
                let dt = time - t0;
                let batch = &mut batches[b];
                batch.time += dt;
                batch.sum += dt * x;
                batch.sum_sq += dt * x * x;
                batch_firings[b][reaction] += 1;
            }
            Step::Absorbed { time } => return Err(Error::Absorbing { time }),
        }
    }
    events += remaining;

    let total_time: f64 = batches.iter().map(|b| b.time).sum();
    let total_sum: f64 = batches.iter().map(|b| b.sum).sum();
    let total_sq: f64 = batches.iter().map(|b| b.sum_sq).sum();
    let mean_shifted = total_sum / total_time;
    let variance = (total_sq / total_time - mean_shifted * mean_shifted).max(0.0);

    let batch_means: Vec<f64> = batches.iter().map(|b| b.sum / b.time).collect();
    // batch variances about the overall mean
    let batch_vars: Vec<f64> = batches
        .iter()
        .map(|b| {
            (b.sum_sq - 2.0 * mean_shifted * b.sum + mean_shifted * mean_shifted * b.time) / b.time
        })
        .collect();
    let firings: Vec<u64> = (0..n_channels)
        .map(|r| batch_firings.iter().map(|f| f[r]).sum())
        .collect();
    let std_error_rates = (0..n_channels)
        .map(|r| {
            let rates: Vec<f64> = batch_firings
                .iter()
                .zip(&batches)
                .map(|(f, b)| f[r] as f64 / b.time)
                .collect();
            standard_error(&rates)
        })
        .collect();

    Ok(MomentEstimate {
        mean: shift + mean_shifted,
        variance,
        std: variance.sqrt(),
        std_error_mean: standard_error(&batch_means),
        std_error_variance: standard_error(&batch_vars),
        events,
        burn_in,
        seed,
        observed_time: total_time,
        firings,
        std_error_rates,
    })
}

/// Standard error of the mean of `values`.
fn standard_error(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss: f64 = values.iter().map(|x| (x - mean).powi(2)).sum();
    (ss / (n - 1.0) / n).sqrt()
}

/// Ensemble estimator: `replicas` independent trajectories, each started at
/// the rounded fixed point and observed once after `burn_in_time`. Replica
/// `r` uses seed `hash64(master_seed, r)`; results are combined in replica
/// order, so the estimate does not depend on the thread count.
pub fn ensemble_moments(
    network: &ReactionNetwork,
    params: &Parameters,
    replicas: usize,
    master_seed: u64,
    options: &StationaryOptions,
) -> Result<MomentEstimate> {
    if replicas < 2 {
        return Err(Error::InvalidState("at least two replicas are required".into()));
    }
    let burn_in = burn_in_time(params, options)?;
    let initial = fixed_point_counts(params, network)?;
    let outcomes: Vec<Result<(u64, u64)>> = (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let mut sim = Simulator::new(network, initial, hash64(master_seed, r))?;
            let mut events = 0u64;
            loop {
                match sim.step_until(burn_in) {
                    Some(Step::Fired { .. }) => events += 1,
                    Some(Step::Absorbed { time }) => return Err(Error::Absorbing { time }),
                    None => return Ok((sim.state().n_s, events)),
                }
            }
        })
        .collect();
    let mut values = Vec::with_capacity(replicas);
    let mut events = 0;
    for outcome in outcomes {
        let (n_s, e) = outcome?;
        values.push(n_s as f64);
        events += e;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let centred: Vec<f64> = values.iter().map(|x| x - mean).collect();
    let m2 = centred.iter().map(|d| d * d).sum::<f64>() / n;
    let m4 = centred.iter().map(|d| d.powi(4)).sum::<f64>() / n;
    let variance = m2 * n / (n - 1.0);
    Ok(MomentEstimate {
        mean,
        variance,
        std: variance.sqrt(),
        std_error_mean: (variance / n).sqrt(),
        std_error_variance: ((m4 - m2 * m2).max(0.0) / n).sqrt(),
        events,
        burn_in,
        seed: master_seed,
        observed_time: 0.0,
        firings: Vec::new(),
        std_error_rates: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::reference_set;

    fn counts(n_s: u64, n_c: u64, e_total: u64) -> CountState {
        CountState {
            n_s,
            n_c,
            n_p: 0,
            e_total,
        }
    }

    #[test]
    fn full_network_propensities() {
        let p = reference_set();
        let net = build_full_network(&p).unwrap();
        assert_eq!(net.e_total, 10);
        assert_eq!(net.propensities(&counts(0, 0, 10)), vec![2500.0, 0.0, 0.0, 0.0]);
        let a = net.propensities(&counts(1000, 5, 10));
        assert_eq!(a, vec![2500.0, 5000.0, 2500.0, 2500.0]);
        let drift: f64 = net
            .reactions
            .iter()
            .zip(&a)
            .map(|(r, a)| r.change[0] as f64 * a)
            .sum();
        assert_eq!(drift, 0.0);
        assert_eq!(net.propensities(&counts(1000, 10, 10))[1], 0.0);
    }

    #[test]
    fn reduced_network_propensities() {
        let p = reference_set();
        let net = build_reduced_network(&p).unwrap();
        assert_eq!(net.propensities(&counts(0, 0, 10))[1], 0.0);
        assert_eq!(net.propensities(&counts(1000, 0, 10)), vec![2500.0, 2500.0]);
        let far = net.propensities(&counts(1_000_000_000_000, 0, 10))[1];
        assert!((far - p.v() * p.omega).abs() / (p.v() * p.omega) < 1e-8);
    }

    #[test]
    fn reduced_propensity_scales_with_volume() {
        let p = Parameters::new(2500.0, 10.0, 1.0, 500.0, 500.0, 10.0).unwrap();
        let net = build_reduced_network(&p).unwrap();
        // k2 eT n / (K_M + n/Ω) at n = 10_000
        let expect = 500.0 * 10.0 * 10_000.0 / (1000.0 + 1000.0);
        assert!((net.propensities(&counts(10_000, 0, 100))[1] - expect).abs() < 1e-9);
    }

    #[test]
    fn non_integral_enzyme_count_rounds() {
        let p = Parameters::new(1.0, 10.3, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(enzyme_copies(&p).unwrap(), 10);
        let p = Parameters::new(1.0, 0.2, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert!(enzyme_copies(&p).is_err());
    }

    #[test]
    fn closed_empty_system_is_absorbing() {
        let p = Parameters::new(0.0, 10.0, 1.0, 500.0, 500.0, 1.0).unwrap();
        let net = build_full_network(&p).unwrap();
        let traj = simulate(&net, counts(0, 0, 10), 5.0, 1, None).unwrap();
        assert_eq!(traj.stop, StopReason::Absorbed);
        assert_eq!(traj.events, 0);
        assert_eq!(traj.stop_time, 0.0);
    }

    #[test]
    fn closed_system_drains_then_absorbs() {
        let p = Parameters::new(0.0, 10.0, 1.0, 50.0, 5.0, 1.0).unwrap();
        let net = build_full_network(&p).unwrap();
        let traj = simulate(&net, counts(40, 3, 10), 1e6, 9, None).unwrap();
        assert_eq!(traj.stop, StopReason::Absorbed);
        let (_, last) = *traj.samples.last().unwrap();
        assert_eq!((last.n_s, last.n_c, last.n_p), (0, 0, 43));
    }

    #[test]
    fn sampled_grid() {
        let p = reference_set();
        let net = build_reduced_network(&p).unwrap();
        let traj = simulate(&net, counts(1000, 0, 10), 1.0, 3, Some(0.25)).unwrap();
        let times: Vec<f64> = traj.samples.iter().map(|s| s.0).collect();
        assert_eq!(times, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(traj.stop, StopReason::Completed);
    }

    #[test]
    fn invalid_initial_state() {
        let p = reference_set();
        let net = build_full_network(&p).unwrap();
        assert!(simulate(&net, counts(0, 11, 10), 1.0, 0, None).is_err());
        assert!(simulate(&net, counts(0, 1, 12), 1.0, 0, None).is_err());
    }

    #[test]
    fn slow_eigenvalue_reference() {
        // J = [[-5, 1500], [5, -2000]]: λ² + 2005 λ + 2500 = 0
        let lam = slow_eigenvalue(&reference_set()).unwrap();
        let naive = (-2005.0 + (2005.0f64 * 2005.0 - 10000.0).sqrt()) / 2.0;
        assert!((lam - naive).abs() < 1e-9 * naive.abs());
        assert!((lam * lam + 2005.0 * lam + 2500.0).abs() < 1e-9);
    }

    #[test]
    fn insufficient_budget() {
        let p = reference_set();
        let net = build_full_network(&p).unwrap();
        let err = stationary_moments(&net, &p, 1000, 1, &StationaryOptions::default());
        assert!(matches!(err, Err(Error::InsufficientBudget { budget: 1000, .. })));
    }

    #[test]
    fn moments_json_keys() {
        let est = MomentEstimate {
            mean: 1.0,
            variance: 4.0,
            std: 2.0,
            std_error_mean: 0.1,
            std_error_variance: 0.2,
            events: 10,
            burn_in: 3.0,
            seed: 5,
            observed_time: 1.0,
            firings: vec![1],
            std_error_rates: vec![0.0],
        };
        assert_eq!(
            est.to_json(),
            r#"{"mean":1.0,"variance":4.0,"std":2.0,"se_mean":0.1,"se_variance":0.2,"events":10,"burn_in":3.0,"seed":5}"#
        );
    }

    #[test]
    fn stationary_run_is_deterministic() {
        let p = reference_set();
        let net = build_reduced_network(&p).unwrap();
        let opts = StationaryOptions {
            burn_in_relaxations: 2.0,
            batches: 8,
        };
        let a = stationary_moments(&net, &p, 50_000, 11, &opts).unwrap();
        let b = stationary_moments(&net, &p, 50_000, 11, &opts).unwrap();
        assert_eq!(a, b);
        let c = stationary_moments(&net, &p, 50_000, 12, &opts).unwrap();
        assert_ne!(a.mean, c.mean);
    }
}

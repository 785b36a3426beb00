//! Mass-action vector field, its reductions, and a fixed-step RK4 integrator.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Parameters;

/// Concentrations of substrate, complex and (optionally tracked) product.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct State2 {
    pub s: f64,
    pub c: f64,
    #[serde(default)]
    pub p: f64,
}

impl State2 {
    pub fn new(s: f64, c: f64) -> Self {
        Self { s, c, p: 0.0 }
    }

    fn axpy(self, h: f64, d: State2) -> State2 {
        State2 {
            s: self.s + h * d.s,
            c: self.c + h * d.c,
            p: self.p + h * d.p,
        }
    }

    fn is_finite(&self) -> bool {
        self.s.is_finite() && self.c.is_finite() && self.p.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VectorFieldKind {
    /// Two-dimensional mass-action system.
    FullMassAction,
    /// Standard QSSA, `s' = k0 - v s / (K_M + s)`.
    Sqssa,
    /// Small-s limit of the sQSSA, `s' = k0 - v s / K_M`.
    LinearSqssa,
    /// Quasi-equilibrium approximation (small k0 and k2).
    Qea,
    /// `s' = k0 - v s / (K_S + s)`, the QEA when `eps_ss` and `beta` are small.
    QeaSpecial,
    /// Reverse QSSA of the closed reaction, `(s', c') = (0, -k2 c)`.
    ReverseClosed,
    /// Mass action with `eT = 0`.
    ZeroEnzyme,
}

impl VectorFieldKind {
    pub const ALL: [VectorFieldKind; 7] = [
        Self::FullMassAction,
        Self::Sqssa,
        Self::LinearSqssa,
        Self::Qea,
        Self::QeaSpecial,
        Self::ReverseClosed,
        Self::ZeroEnzyme,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::FullMassAction => "full_mass_action",
            Self::Sqssa => "sqssa",
            Self::LinearSqssa => "linear_sqssa",
            Self::Qea => "qea",
            Self::QeaSpecial => "qea_special",
            Self::ReverseClosed => "reverse_closed",
            Self::ZeroEnzyme => "zero_enzyme",
        }
    }

    /// One-dimensional reductions in `s`; `c` is slaved to a manifold.
    pub fn is_reduced(self) -> bool {
        matches!(
            self,
            Self::Sqssa | Self::LinearSqssa | Self::Qea | Self::QeaSpecial
        )
    }

    /// Complex concentration implied by a one-dimensional reduction.
    pub fn slaved_complex(self, s: f64, params: &Parameters) -> Option<f64> {
        match self {
            Self::Sqssa => Some(qss_manifold(s, params)),
            Self::LinearSqssa => Some(params.e_t * s / params.k_m()),
            Self::Qea | Self::QeaSpecial => Some(qea_manifold(s, params)),
            _ => None,
        }
    }
}

impl fmt::Display for VectorFieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for VectorFieldKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .or(match s {
                "full" => Some(Self::FullMassAction),
                _ => None,
            })
            .ok_or_else(|| Error::UnknownTag(s.to_owned()))
    }
}

/// Raw mass-action right-hand side with unchecked rate constants, so that
/// Tikhonov-Fenichel parameter values (zeros) can be evaluated as well.
pub(crate) fn mass_action(
    s: f64,
    c: f64,
    k0: f64,
    e_t: f64,
    k1: f64,
    k2: f64,
    k_m1: f64,
) -> (f64, f64) {
    let binding = k1 * (e_t - c) * s;
    (k0 - binding + k_m1 * c, binding - (k_m1 + k2) * c)
}

/// Time derivative of `state` under the chosen field. For the
/// one-dimensional reductions the `c` component is 0; the `p` component is
/// always `k2 * c` with `c` taken from the slaved manifold where relevant.
pub fn eval_vf(kind: VectorFieldKind, state: State2, params: &Parameters) -> State2 {
    let State2 { s, c, .. } = state;
    let Parameters {
        k0,
        e_t,
        k1,
        k2,
        k_m1,
        ..
    } = *params;
    let v = params.v();
    let (ds, dc) = match kind {
        VectorFieldKind::FullMassAction => mass_action(s, c, k0, e_t, k1, k2, k_m1),
        VectorFieldKind::ZeroEnzyme => mass_action(s, c, k0, 0.0, k1, k2, k_m1),
        VectorFieldKind::ReverseClosed => (0.0, -k2 * c),
        VectorFieldKind::Sqssa => (k0 - v * s / (params.k_m() + s), 0.0),
        VectorFieldKind::LinearSqssa => (k0 - v * s / params.k_m(), 0.0),
        VectorFieldKind::QeaSpecial => (k0 - v * s / (params.k_s() + s), 0.0),
        VectorFieldKind::Qea => {
            let b = k_m1 + k1 * s;
            (b * (k0 * b - k2 * k1 * e_t * s) / (k1 * k_m1 * e_t + b * b), 0.0)
        }
    };
    let c_eff = kind.slaved_complex(s, params).unwrap_or(c);
    State2 {
        s: ds,
        c: dc,
        p: k2 * c_eff,
    }
}

/// The c-nullcline `eT s / (K_M + s)`.
pub fn qss_manifold(s: f64, params: &Parameters) -> f64 {
    params.e_t * s / (params.k_m() + s)
}

/// Critical manifold of the QEA, `eT s / (K_S + s)`.
pub fn qea_manifold(s: f64, params: &Parameters) -> f64 {
    params.e_t * s / (params.k_s() + s)
}

/// Jacobian of the full field with respect to `(s, c)`.
pub fn jacobian(state: State2, params: &Parameters) -> Matrix2<f64> {
    let free = params.k1 * (params.e_t - state.c);
    let back = params.k1 * state.s + params.k_m1;
    Matrix2::new(-free, back, free, -back - params.k2)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<State2>,
    pub kind: VectorFieldKind,
    pub step: f64,
    /// Number of times a negative concentration was clamped to zero.
    pub clamped: usize,
}

impl Trajectory {
    pub fn last(&self) -> Option<(f64, State2)> {
        Some((*self.times.last()?, *self.states.last()?))
    }

    /// Writes `t,s,c[,p]` rows with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W, with_product: bool) -> io::Result<()> {
        if with_product {
            writeln!(out, "t,s,c,p")?;
        } else {
            writeln!(out, "t,s,c")?;
        }
        for (t, x) in self.times.iter().zip(&self.states) {
            if with_product {
                writeln!(out, "{t:.16e},{:.16e},{:.16e},{:.16e}", x.s, x.c, x.p)?;
            } else {
                writeln!(out, "{t:.16e},{:.16e},{:.16e}", x.s, x.c)?;
            }
        }
        Ok(())
    }
}

fn clamp(state: &mut State2, clamped: &mut usize) {
    for x in [&mut state.s, &mut state.c] {
        if *x < 0.0 {
            *x = 0.0;
            *clamped += 1;
        }
    }
}

/// Classical fourth-order Runge-Kutta with fixed `step`, sampled at every
/// step. The final step is shortened to land exactly on `t_end`.
pub fn integrate(
    kind: VectorFieldKind,
    initial: State2,
    t_end: f64,
    step: f64,
    params: &Parameters,
) -> Result<Trajectory> {
    params.validate()?;
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidState(format!("step must be positive, got {step}")));
    }
    if !(t_end.is_finite() && t_end >= 0.0) {
        return Err(Error::InvalidState(format!("t_end must be non-negative, got {t_end}")));
    }
    if !initial.is_finite() || initial.s < 0.0 || initial.c < 0.0 {
        return Err(Error::InvalidState(format!("{initial:?}")));
    }
    if kind == VectorFieldKind::FullMassAction {
        let limit = 0.1 / (params.k_m1 + params.k2);
        if step > limit * (1.0 + 1e-12) {
            return Err(Error::StepTooLarge { step, limit });
        }
    }

    let slave = |mut x: State2| {
        if let Some(c) = kind.slaved_complex(x.s, params) {
            x.c = c;
        }
        x
    };
    let f = |x: State2| eval_vf(kind, x, params);

    // a ratio within rounding of an integer is that integer, so no
    // zero-length step is appended
    let ratio = t_end / step;
    let n_steps = if (ratio - ratio.round()).abs() <= 1e-9 * ratio.max(1.0) {
        ratio.round()
    } else {
        ratio.ceil()
    } as usize;
    let mut times = Vec::with_capacity(n_steps + 1);
    let mut states = Vec::with_capacity(n_steps + 1);
    let mut clamped = 0;
    let mut x = slave(initial);
    times.push(0.0);
    states.push(x);

    for i in 0..n_steps {
        let t0 = i as f64 * step;
        let t1 = if i + 1 == n_steps {
            t_end
        } else {
            ((i + 1) as f64 * step).min(t_end)
        };
        let h = t1 - t0;
        let k1 = f(x);
        let k2 = f(x.axpy(h / 2.0, k1));
        let k3 = f(x.axpy(h / 2.0, k2));
        let k4 = f(x.axpy(h, k3));
        x = State2 {
            s: x.s + h / 6.0 * (k1.s + 2.0 * k2.s + 2.0 * k3.s + k4.s),
            c: x.c + h / 6.0 * (k1.c + 2.0 * k2.c + 2.0 * k3.c + k4.c),
            p: x.p + h / 6.0 * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p),
        };
        if !x.is_finite() {
            return Err(Error::Divergence { time: t1 });
        }
        clamp(&mut x, &mut clamped);
        x = slave(x);
        times.push(t1);
        states.push(x);
    }

    Ok(Trajectory {
        times,
        states,
        kind,
        step,
        clamped,
    })
}

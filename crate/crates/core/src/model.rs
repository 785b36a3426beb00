//! Rate constants, derived constants and dimensionless qualifiers for the
//! open Michaelis-Menten mechanism
//!
//! ```text
//!   ∅ --k0--> S,   S + E <--k1 / k-1--> C --k2--> E + P
//! ```
//!
//! All quantities here are in concentration units. Conversion to copy
//! numbers happens in [`crate::ssa`] through the volume `omega`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rate constants of the open mechanism plus the system volume.
///
/// Serialized as a JSON object with keys `k0, eT, k1, k2, km1, omega`.
/// Deserialization validates, so a parsed value always satisfies the
/// invariants below.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParameters")]
pub struct Parameters {
    /// Substrate influx rate. Zero gives the closed reaction.
    pub k0: f64,
    /// Total enzyme concentration.
    #[serde(rename = "eT")]
    pub e_t: f64,
    /// Binding rate constant.
    pub k1: f64,
    /// Catalytic rate constant.
    pub k2: f64,
    /// Dissociation rate constant (k₋₁).
    #[serde(rename = "km1")]
    pub k_m1: f64,
    /// Volume: copy number per unit concentration.
    pub omega: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParameters {
    k0: f64,
    #[serde(rename = "eT")]
    e_t: f64,
    k1: f64,
    k2: f64,
    km1: f64,
    omega: f64,
}

impl TryFrom<RawParameters> for Parameters {
    type Error = Error;

    fn try_from(raw: RawParameters) -> Result<Self> {
        Parameters::new(raw.k0, raw.e_t, raw.k1, raw.k2, raw.km1, raw.omega)
    }
}

fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and strictly positive",
        })
    }
}

impl Parameters {
    pub fn new(k0: f64, e_t: f64, k1: f64, k2: f64, k_m1: f64, omega: f64) -> Result<Self> {
        let params = Self {
            k0,
            e_t,
            k1,
            k2,
            k_m1,
            omega,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k0.is_finite() && self.k0 >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "k0",
                value: self.k0,
                reason: "must be finite and non-negative",
            });
        }
        require_positive("eT", self.e_t)?;
        require_positive("k1", self.k1)?;
        require_positive("k2", self.k2)?;
        require_positive("km1", self.k_m1)?;
        require_positive("omega", self.omega)
    }

    /// Parses and validates the JSON object form.
    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Michaelis constant `(k-1 + k2) / k1`.
    pub fn k_m(&self) -> f64 {
        (self.k_m1 + self.k2) / self.k1
    }

    /// Dissociation constant `k-1 / k1`.
    pub fn k_s(&self) -> f64 {
        self.k_m1 / self.k1
    }

    /// Limiting rate `k2 * eT`.
    pub fn v(&self) -> f64 {
        self.k2 * self.e_t
    }

    pub fn alpha(&self) -> f64 {
        self.k0 / self.v()
    }

    /// Same parameters with every rate constant multiplied by `factor`.
    /// Concentrations and volume are unchanged.
    pub fn with_rates_scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.k0 * factor,
            self.e_t,
            self.k1 * factor,
            self.k2 * factor,
            self.k_m1 * factor,
            self.omega,
        )
    }
}

/// Every derived constant and dimensionless qualifier in one place.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedConstants {
    #[serde(rename = "K_M")]
    pub k_m: f64,
    #[serde(rename = "K_S")]
    pub k_s: f64,
    pub v: f64,
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub eps_ss: f64,
    /// `(eT - nu) / (K_M + gamma)`; absent when `alpha >= 1`.
    pub eps: Option<f64>,
    pub t_c: f64,
    pub t_s: f64,
}

pub fn derive(params: &Parameters) -> Result<DerivedConstants> {
    params.validate()?;
    let k_m = params.k_m();
    let v = params.v();
    let alpha = params.k0 / v;
    let beta = params.k2 / params.k_m1;
    let eps = if alpha < 1.0 {
        let gamma = alpha * k_m / (1.0 - alpha);
        let nu = alpha * params.e_t;
        Some((params.e_t - nu) / (k_m + gamma))
    } else {
        None
    };
    Ok(DerivedConstants {
        k_m,
        k_s: params.k_s(),
        v,
        alpha,
        beta,
        lambda: params.k0 / (params.k_m1 * params.e_t),
        eps_ss: params.e_t / k_m,
        eps,
        t_c: 1.0 / (params.k_m1 + params.k2),
        t_s: 1.0 / (params.k1 * params.e_t),
    })
}

/// Deterministic stationary point `(gamma, nu)` in concentrations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FixedPoint {
    pub gamma: f64,
    pub nu: f64,
}

pub fn fixed_point(params: &Parameters) -> Result<FixedPoint> {
    params.validate()?;
    let alpha = params.alpha();
    if alpha >= 1.0 {
        return Err(Error::NoStationaryPoint { alpha });
    }
    Ok(FixedPoint {
        gamma: alpha * params.k_m() / (1.0 - alpha),
        nu: alpha * params.e_t,
    })
}

/// Cutoffs below which a qualifier counts as "small".
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Thresholds {
    pub eps_ss: f64,
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            eps_ss: 0.1,
            alpha: 0.1,
            beta: 0.1,
            lambda: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NearestTfpv {
    Pi1Sqssa,
    Pi3Qea,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    SingularPerturbationSqssa,
    SingularPerturbationQea,
    NearInvarianceOnly,
    NoReduction,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::SingularPerturbationSqssa => "singular_perturbation_sqssa",
            Self::SingularPerturbationQea => "singular_perturbation_qea",
            Self::NearInvarianceOnly => "near_invariance_only",
            Self::NoReduction => "no_reduction",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Qualifiers {
    pub eps_ss: f64,
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    /// Relative LNA variance error of the stochastic sQSSA; absent when
    /// `alpha >= 1`.
    pub discrepancy: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeReport {
    pub qualifiers: Qualifiers,
    pub nearest_tfpv: NearestTfpv,
    pub classification: Classification,
}

/// `(1 - alpha) alpha beta / (1 + beta (1 - alpha (1 - alpha)))`.
pub(crate) fn discrepancy_formula(alpha: f64, beta: f64) -> f64 {
    (1.0 - alpha) * alpha * beta / (1.0 + beta * (1.0 - alpha * (1.0 - alpha)))
}

/// Places a parameter set relative to the sQSSA (π₁) and QEA (π₃)
/// Tikhonov-Fenichel parameter values.
///
/// When both `alpha` and `beta` are small the two reductions coincide and
/// the sQSSA is reported.
pub fn classify_regime(params: &Parameters, thresholds: &Thresholds) -> Result<RegimeReport> {
    let d = derive(params)?;
    let qualifiers = Qualifiers {
        eps_ss: d.eps_ss,
        alpha: d.alpha,
        beta: d.beta,
        lambda: d.lambda,
        discrepancy: (d.alpha < 1.0).then(|| discrepancy_formula(d.alpha, d.beta)),
    };
    let eps_small = d.eps_ss <= thresholds.eps_ss;
    let alpha_small = d.alpha <= thresholds.alpha;
    let beta_small = d.beta <= thresholds.beta;
    let (nearest_tfpv, classification) = match (eps_small, alpha_small, beta_small) {
        (true, true, _) => (NearestTfpv::Pi1Sqssa, Classification::SingularPerturbationSqssa),
        (true, false, true) => (NearestTfpv::Pi3Qea, Classification::SingularPerturbationQea),
        (true, false, false) => (NearestTfpv::None, Classification::NearInvarianceOnly),
        (false, ..) => (NearestTfpv::None, Classification::NoReduction),
    };
    Ok(RegimeReport {
        qualifiers,
        nearest_tfpv,
        classification,
    })
}

impl FromStr for Parameters {
    type Err = serde_json::Error;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Self::from_json(s)
    }
}

/// The reference parameter set used throughout the tests: Ω = 1, ten enzyme
/// molecules, `k1 = 1`, `K_M = 1000`, `k0 = v/2`, `k2 = k-1 = 500`.
pub fn reference_set() -> Parameters {
    Parameters::new(2500.0, 10.0, 1.0, 500.0, 500.0, 1.0).expect("valid reference parameters")
}

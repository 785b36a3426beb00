//! Linear-noise stationary variances of the substrate copy number.
//!
//! Variances are in count units (variance of `n_S`). Use
//! [`LnaResult::in_concentration_units`] for the variance of `s = n_S / Ω`.

use nalgebra::{Matrix2, Matrix3, Vector3};
use serde::Serialize;

use crate::deterministic::{jacobian, State2};
use crate::error::{Error, Result};
use crate::model::{derive, discrepancy_formula, fixed_point, Parameters};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LnaResult {
    pub sigma2_full: f64,
    pub sigma2_red: f64,
    #[serde(rename = "sigma2_lyapunov")]
    pub sigma2_full_lyapunov: f64,
    pub discrepancy: f64,
}

impl LnaResult {
    pub fn evaluate(params: &Parameters) -> Result<Self> {
        Ok(Self {
            sigma2_full: sigma2_full(params)?,
            sigma2_red: sigma2_red(params)?,
            sigma2_full_lyapunov: lyapunov_cross_check(params)?,
            discrepancy: discrepancy(params)?,
        })
    }

    pub fn in_concentration_units(&self, params: &Parameters) -> Self {
        let scale = params.omega * params.omega;
        Self {
            sigma2_full: self.sigma2_full / scale,
            sigma2_red: self.sigma2_red / scale,
            sigma2_full_lyapunov: self.sigma2_full_lyapunov / scale,
            discrepancy: self.discrepancy,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("LNA result serializes")
    }
}

/// `Ωγ (1 + (γ/K_M) ((K_S+γ)/(K_M+γ)) / (1+ε))` with the ε term optional.
fn full_closed_form(params: &Parameters, with_eps: bool) -> Result<f64> {
    let fp = fixed_point(params)?;
    let d = derive(params)?;
    let gamma = fp.gamma;
    let eps = if with_eps { d.eps.unwrap_or(0.0) } else { 0.0 };
    let bracket = 1.0 + gamma / d.k_m * ((d.k_s + gamma) / (d.k_m + gamma)) / (1.0 + eps);
    Ok(params.omega * gamma * bracket)
}

/// Stationary variance of `n_S` under the full master equation.
pub fn sigma2_full(params: &Parameters) -> Result<f64> {
    full_closed_form(params, true)
}

/// Same closed form with `ε := 0`.
pub fn sigma2_full_eps0(params: &Parameters) -> Result<f64> {
    full_closed_form(params, false)
}

/// Stationary variance of `n_S` under the reduced (sQSSA) master equation.
pub fn sigma2_red(params: &Parameters) -> Result<f64> {
    let fp = fixed_point(params)?;
    let gamma = fp.gamma;
    Ok(params.omega * gamma * (1.0 + gamma / params.k_m()))
}

/// Diffusion matrix `Σ_r ν_r ν_rᵀ a_r` of the four elementary reactions at
/// the fixed point, in count units.
pub fn diffusion_matrix(params: &Parameters) -> Result<Matrix2<f64>> {
    let fp = fixed_point(params)?;
    let omega = params.omega;
    let influx = omega * params.k0;
    let binding = omega * params.k1 * fp.gamma * (params.e_t - fp.nu);
    let unbinding = omega * params.k_m1 * fp.nu;
    let catalysis = omega * params.k2 * fp.nu;
    let exchange = binding + unbinding;
    Ok(Matrix2::new(
        influx + exchange,
        -exchange,
        -exchange,
        exchange + catalysis,
    ))
}

/// Solves `J Σ + Σ Jᵀ + D = 0` for the symmetric 2×2 covariance.
pub fn stationary_covariance(j: &Matrix2<f64>, d: &Matrix2<f64>) -> Result<Matrix2<f64>> {
    // unknowns (Σ11, Σ12, Σ22)
    let a = Matrix3::new(
        2.0 * j[(0, 0)],
        2.0 * j[(0, 1)],
        0.0,
        j[(1, 0)],
        j[(0, 0)] + j[(1, 1)],
        j[(0, 1)],
        0.0,
        2.0 * j[(1, 0)],
        2.0 * j[(1, 1)],
    );
    let rhs = -Vector3::new(d[(0, 0)], d[(0, 1)], d[(1, 1)]);
    let scale = a.abs().max();
    if !(a.determinant().abs() > 1e-14 * scale.powi(3)) {
        return Err(Error::SingularLyapunov);
    }
    let x = a.lu().solve(&rhs).ok_or(Error::SingularLyapunov)?;
    Ok(Matrix2::new(x[0], x[1], x[1], x[2]))
}

/// Full 2×2 stationary LNA covariance of `(n_S, n_C)`.
pub fn lyapunov_covariance(params: &Parameters) -> Result<Matrix2<f64>> {
    let fp = fixed_point(params)?;
    let j = jacobian(State2::new(fp.gamma, fp.nu), params);
    if !(j.trace() < 0.0 && j.determinant() > 0.0) {
        return Err(Error::SingularLyapunov);
    }
    stationary_covariance(&j, &diffusion_matrix(params)?)
}

/// `Σ_SS` from the numerical Lyapunov solve.
pub fn lyapunov_cross_check(params: &Parameters) -> Result<f64> {
    Ok(lyapunov_covariance(params)?[(0, 0)])
}

/// Relative LNA variance error of the reduced description,
/// `(1-α)αβ / (1 + β(1 - α(1-α)))`.
pub fn discrepancy(params: &Parameters) -> Result<f64> {
    let d = derive(params)?;
    if d.alpha >= 1.0 {
        return Err(Error::NoStationaryPoint { alpha: d.alpha });
    }
    Ok(discrepancy_formula(d.alpha, d.beta))
}

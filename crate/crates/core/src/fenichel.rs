//! Slow-manifold projection for the catalogued Tikhonov-Fenichel parameter
//! values of the Michaelis-Menten mechanism.
//!
//! Near a TFPV the field is written `z' = w(z) + ε G(z, ε)` with the
//! unperturbed part factored as `w = P f`. The zero set of `f` is the
//! critical manifold M, and the oblique projector
//!
//! ```text
//!   Π = I - P (Df P)⁻¹ Df
//! ```
//!
//! maps onto the tangent space of M along the fast fibres. The leading-order
//! reduced flow is `z' = Π G(z, 0)`.
//!
//! Each factorization here has a one-dimensional fast direction (`n = 2`,
//! `k = 1`), so `P` is a column, `Df` a row and `Df P` a scalar.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix2, RowVector2, Vector2};
use serde::{Deserialize, Serialize};

use crate::deterministic::{mass_action, State2};
use crate::error::{Error, Result};
use crate::model::Parameters;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tfpv {
    /// `[k0 eT k1 k2 k-1] = [0 0 k1 k2 k-1]`, critical manifold `c = 0`.
    Pi1,
    /// `[0 eT k1 0 k-1]`, critical manifold `c = eT s / (K_S + s)`.
    Pi3,
    /// Closed reaction at `[eT k1 0 0]`, critical set `{c = eT} ∪ {s = 0}`.
    ReverseClosed,
}

impl Tfpv {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Pi1 => "pi1",
            Self::Pi3 => "pi3",
            Self::ReverseClosed => "reverse_closed",
        }
    }
}

impl fmt::Display for Tfpv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Tfpv {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pi1" => Ok(Self::Pi1),
            "pi3" => Ok(Self::Pi3),
            "reverse_closed" => Ok(Self::ReverseClosed),
            other => Err(Error::UnknownTag(other.to_owned())),
        }
    }
}

/// `w = P f` together with the perturbation `G`, at fixed parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Factorization {
    pub tfpv: Tfpv,
    pub params: Parameters,
    /// Width of the excluded neighbourhood of `c = eT` on the reverse-QSSA
    /// branch `{s = 0}`.
    pub delta: f64,
}

pub fn factorization_for(tfpv: Tfpv, params: &Parameters) -> Result<Factorization> {
    params.validate()?;
    Ok(Factorization {
        tfpv,
        params: *params,
        delta: 0.05 * params.e_t,
    })
}

impl Factorization {
    pub fn with_delta(mut self, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < self.params.e_t) {
            return Err(Error::InvalidParameter {
                name: "delta",
                value: delta,
                reason: "must lie in (0, eT)",
            });
        }
        self.delta = delta;
        Ok(self)
    }

    /// Column spanning the fast directions.
    pub fn p(&self, z: State2) -> Vector2<f64> {
        let Parameters { e_t, k1, k2, k_m1, .. } = self.params;
        match self.tfpv {
            Tfpv::Pi1 => Vector2::new(k1 * z.s + k_m1, -k1 * z.s - k_m1 - k2),
            Tfpv::Pi3 => Vector2::new(1.0, -1.0),
            Tfpv::ReverseClosed => Vector2::new(-1.0, 1.0) * (k1 * (e_t - z.c)),
        }
    }

    /// Scalar whose zero set is the critical manifold.
    pub fn f(&self, z: State2) -> f64 {
        let Parameters { e_t, k1, k_m1, .. } = self.params;
        match self.tfpv {
            Tfpv::Pi1 => z.c,
            Tfpv::Pi3 => k_m1 * z.c - k1 * (e_t - z.c) * z.s,
            Tfpv::ReverseClosed => z.s,
        }
    }

    pub fn df(&self, z: State2) -> RowVector2<f64> {
        let Parameters { e_t, k1, k_m1, .. } = self.params;
        match self.tfpv {
            Tfpv::Pi1 => RowVector2::new(0.0, 1.0),
            Tfpv::Pi3 => RowVector2::new(-k1 * (e_t - z.c), k_m1 + k1 * z.s),
            Tfpv::ReverseClosed => RowVector2::new(1.0, 0.0),
        }
    }

    /// Perturbation at `ε = 0`, with the small parameters at their actual
    /// values (`ε x* = x`).
    pub fn g(&self, z: State2) -> Vector2<f64> {
        let Parameters { k0, e_t, k1, k2, k_m1, .. } = self.params;
        match self.tfpv {
            // eT, k0 small
            Tfpv::Pi1 => Vector2::new(k0 - k1 * e_t * z.s, k1 * e_t * z.s),
            // k0, k2 small
            Tfpv::Pi3 => Vector2::new(k0, -k2 * z.c),
            // k-1, k2 small; k0 = 0 (closed reaction)
            Tfpv::ReverseClosed => Vector2::new(k_m1 * z.c, -(k_m1 + k2) * z.c),
        }
    }

    /// Unperturbed field, evaluated from mass action at the TFPV rather than
    /// through `P f`.
    pub fn w(&self, z: State2) -> Vector2<f64> {
        let Parameters { e_t, k1, k2, k_m1, .. } = self.params;
        let (ds, dc) = match self.tfpv {
            Tfpv::Pi1 => mass_action(z.s, z.c, 0.0, 0.0, k1, k2, k_m1),
            Tfpv::Pi3 => mass_action(z.s, z.c, 0.0, e_t, k1, 0.0, k_m1),
            Tfpv::ReverseClosed => mass_action(z.s, z.c, 0.0, e_t, k1, 0.0, 0.0),
        };
        Vector2::new(ds, dc)
    }

    /// The mass-action field this factorization perturbs from: the open
    /// system for π₁ and π₃, the closed one (`k0 = 0`) for the reverse QSSA.
    pub fn target_field(&self, z: State2) -> Vector2<f64> {
        let Parameters { k0, e_t, k1, k2, k_m1, .. } = self.params;
        let influx = match self.tfpv {
            Tfpv::ReverseClosed => 0.0,
            _ => k0,
        };
        let (ds, dc) = mass_action(z.s, z.c, influx, e_t, k1, k2, k_m1);
        Vector2::new(ds, dc)
    }

    /// Point on the critical manifold. For π₁ and π₃ the coordinate is `s`;
    /// for the reverse QSSA it is `c` on the branch `s = 0`.
    pub fn manifold_point(&self, coordinate: f64) -> State2 {
        let Parameters { e_t, k_m1, k1, .. } = self.params;
        match self.tfpv {
            Tfpv::Pi1 => State2::new(coordinate, 0.0),
            Tfpv::Pi3 => State2::new(coordinate, e_t * coordinate / (k_m1 / k1 + coordinate)),
            Tfpv::ReverseClosed => State2::new(0.0, coordinate),
        }
    }

    /// `|f| <= 1e-9 (k-1 + k2) eT`.
    pub fn manifold_tolerance(&self) -> f64 {
        1e-9 * (self.params.k_m1 + self.params.k2) * self.params.e_t
    }

    pub fn on_manifold(&self, z: State2) -> Result<()> {
        let residual = self.f(z).abs();
        let tolerance = self.manifold_tolerance();
        if !(residual <= tolerance) {
            return Err(Error::OffManifold {
                residual,
                tolerance,
            });
        }
        if self.tfpv == Tfpv::ReverseClosed {
            let upper = self.params.e_t - self.delta;
            if !(z.c >= 0.0 && z.c <= upper) {
                return Err(Error::InvalidState(format!(
                    "c = {} outside the compact branch [0, {upper}]",
                    z.c
                )));
            }
        } else if z.s < 0.0 {
            return Err(Error::InvalidState(format!("s = {} is negative", z.s)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionData {
    pub point: State2,
    pub pi_matrix: Matrix2<f64>,
    /// `Df P`, a 1×1 matrix here.
    pub dfp: f64,
    pub nontrivial_eigenvalues: [f64; 1],
    /// All nontrivial eigenvalues have negative real part.
    pub attracting: bool,
}

impl ProjectionData {
    pub fn rank(&self) -> usize {
        let sv = self.pi_matrix.singular_values();
        let cutoff = 1e-10 * sv.max();
        sv.iter().filter(|&&x| x > cutoff).count()
    }
}

pub fn projector_at(fact: &Factorization, point: State2) -> Result<ProjectionData> {
    fact.on_manifold(point)?;
    let p = fact.p(point);
    let df = fact.df(point);
    let dfp = (df * p)[(0, 0)];
    let Parameters { e_t, k1, k2, k_m1, .. } = fact.params;
    let scale = k1 * e_t + k1 * point.s.abs() + k_m1 + k2;
    let threshold = 1e-12 * scale;
    if !(dfp.abs() >= threshold) {
        return Err(Error::LossOfHyperbolicity {
            det: dfp,
            threshold,
        });
    }
    let pi_matrix = Matrix2::identity() - p * df / dfp;
    Ok(ProjectionData {
        point,
        pi_matrix,
        dfp,
        nontrivial_eigenvalues: [dfp],
        attracting: dfp < 0.0,
    })
}

/// `Π G(z, 0)` at a point of the critical manifold.
pub fn reduced_field(fact: &Factorization, point: State2) -> Result<Vector2<f64>> {
    let proj = projector_at(fact, point)?;
    Ok(proj.pi_matrix * fact.g(point))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deterministic::{eval_vf, VectorFieldKind};
    use crate::model::reference_set;
    use approx::assert_relative_eq;

    #[test]
    fn pi1_reference_projector() {
        let fact = factorization_for(Tfpv::Pi1, &reference_set()).unwrap();
        let z = State2::new(1000.0, 0.0);
        assert_eq!(fact.f(z), 0.0);
        assert_eq!(fact.w(z), Vector2::zeros());
        let proj = projector_at(&fact, z).unwrap();
        assert_eq!(proj.dfp, -2000.0);
        assert_eq!(1.0 / proj.dfp, -1.0 / 2000.0);
        assert_relative_eq!(proj.pi_matrix, Matrix2::new(1.0, 0.75, 0.0, 0.0), epsilon = 1e-15);
        assert!(proj.attracting);
        assert_eq!(proj.rank(), 1);
        assert_eq!(proj.pi_matrix * fact.p(z), Vector2::zeros());
    }

    #[test]
    fn pi1_reduced_field_is_sqssa() {
        let p = reference_set();
        let fact = factorization_for(Tfpv::Pi1, &p).unwrap();
        let r = reduced_field(&fact, State2::new(500.0, 0.0)).unwrap();
        assert_relative_eq!(r[0], 833.333_333_333_333_3, max_relative = 1e-13);
        assert_eq!(r[1], 0.0);
        let sq = eval_vf(VectorFieldKind::Sqssa, State2::new(500.0, 0.0), &p);
        assert_relative_eq!(r[0], sq.s, max_relative = 1e-13);
        let r = reduced_field(&fact, State2::new(1000.0, 0.0)).unwrap();
        assert!(r[0].abs() < 1e-12 && r[1] == 0.0);
    }

    #[test]
    fn pi3_on_manifold_and_matches_qea() {
        let p = reference_set();
        let fact = factorization_for(Tfpv::Pi3, &p).unwrap();
        for s in [0.0, 1.0, 250.0, 1000.0, 7000.0] {
            let z = fact.manifold_point(s);
            assert!(fact.f(z).abs() <= fact.manifold_tolerance());
            let r = reduced_field(&fact, z).unwrap();
            let qea = eval_vf(VectorFieldKind::Qea, z, &p).s;
            assert!((r[0] - qea).abs() <= 1e-12 * qea.abs().max(1e-9), "{s}: {r} vs {qea}");
            // tangent to c = eT s/(K_S + s)
            let slope = p.e_t * p.k_s() / (p.k_s() + s).powi(2);
            assert!((r[1] - slope * r[0]).abs() <= 1e-10 * r[1].abs().max(1e-9));
        }
    }

    #[test]
    fn reverse_closed_recovers_reverse_qssa() {
        let p = reference_set();
        let fact = factorization_for(Tfpv::ReverseClosed, &p).unwrap();
        for c in [0.0, 1.0, 4.5, 9.5] {
            let z = fact.manifold_point(c);
            let r = reduced_field(&fact, z).unwrap();
            assert_eq!(r[0], 0.0);
            assert_relative_eq!(r[1], -p.k2 * c, max_relative = 1e-14);
            let rev = eval_vf(VectorFieldKind::ReverseClosed, z, &p);
            assert_relative_eq!(r[1], rev.c, max_relative = 1e-14);
        }
        // outside the compact branch
        assert!(projector_at(&fact, State2::new(0.0, 9.9)).is_err());
        // on S1 = {c = eT} but not on the branch s = 0
        assert!(matches!(
            projector_at(&fact, State2::new(3.0, 10.0)),
            Err(Error::OffManifold { .. })
        ));
    }

    #[test]
    fn off_manifold_is_rejected() {
        let fact = factorization_for(Tfpv::Pi1, &reference_set()).unwrap();
        assert!(matches!(
            projector_at(&fact, State2::new(10.0, 1.0)),
            Err(Error::OffManifold { .. })
        ));
    }

    #[test]
    fn delta_must_be_inside_enzyme_range() {
        let fact = factorization_for(Tfpv::ReverseClosed, &reference_set()).unwrap();
        assert!(fact.with_delta(0.0).is_err());
        assert!(fact.with_delta(10.0).is_err());
        assert_eq!(fact.with_delta(1.0).unwrap().delta, 1.0);
    }

    #[test]
    fn tags() {
        for t in [Tfpv::Pi1, Tfpv::Pi3, Tfpv::ReverseClosed] {
            assert_eq!(t.as_str().parse::<Tfpv>().unwrap(), t);
        }
        assert!(matches!("pi2".parse::<Tfpv>(), Err(Error::UnknownTag(_))));
    }
}

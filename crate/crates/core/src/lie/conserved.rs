use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{dot, hamiltonian, norm3, vector_field, Inertia, ModelParams, MomentumState};
use crate::{Error, Result};

/// Extra integrals available in the classical special cases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseIntegral {
    /// `a = 0`: `‖H‖²`.
    Euler,
    /// `c1 = c2`, `a1 = a2 = 0`: `H3`.
    Lagrange,
    /// `c1 = c2 = c3`: `H·a`.
    Spherical,
    /// Axial limit with `a3 = 0`: `|w − k a|²`.
    AxialModulus,
}

impl CaseIntegral {
    pub fn detect(params: &ModelParams) -> Option<Self> {
        let [a1, a2, a3] = params.a;
        match params.inertia {
            _ if a1 == 0.0 && a2 == 0.0 && a3 == 0.0 => Some(CaseIntegral::Euler),
            Inertia::AxialLimit if a3 == 0.0 => Some(CaseIntegral::AxialModulus),
            Inertia::Finite(c) if c[0] == c[1] && c[1] == c[2] => Some(CaseIntegral::Spherical),
            Inertia::Finite(c) if c[0] == c[1] && a1 == 0.0 && a2 == 0.0 => Some(CaseIntegral::Lagrange),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CaseIntegral::Euler => "H_sq",
            CaseIntegral::Lagrange => "H3",
            CaseIntegral::Spherical => "H_dot_a",
            CaseIntegral::AxialModulus => "w_minus_ka_sq",
        }
    }

    pub fn evaluate(self, p: &MomentumState, params: &ModelParams) -> f64 {
        match self {
            CaseIntegral::Euler => dot(p.big_h, p.big_h),
            CaseIntegral::Lagrange => p.big_h[2],
            CaseIntegral::Spherical => dot(p.big_h, params.a),
            CaseIntegral::AxialModulus => {
                let k = params.k.as_f64();
                (p.h[0] - k * params.a[0]).powi(2) + (p.h[1] - k * params.a[1]).powi(2)
            }
        }
    }

    fn scale(self, p: &MomentumState, params: &ModelParams) -> f64 {
        match self {
            CaseIntegral::Euler => dot(p.big_h, p.big_h),
            CaseIntegral::Lagrange => p.big_h[2].abs(),
            CaseIntegral::Spherical => norm3(p.big_h) * norm3(params.a),
            CaseIntegral::AxialModulus => {
                let k = params.k.as_f64().abs();
                (p.h[0].hypot(p.h[1]) + k * params.a[0].hypot(params.a[1])).powi(2)
            }
        }
    }
}

/// Conserved quantities at one state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConservedRecord {
    pub h: f64,
    pub k2: f64,
    pub k3: f64,
    /// `|q|²`, present in the Kowalewski case only.
    pub k4sq: Option<f64>,
    /// `R ĥ` for `k = 0` when a frame is integrated.
    pub f: Option<[f64; 3]>,
    pub case_integral: Option<(CaseIntegral, f64)>,
}

/// Magnitudes of the terms entering each quantity; drifts are measured
/// relative to these.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConservedScales {
    pub h: f64,
    pub k2: f64,
    pub k3: f64,
    pub k4sq: f64,
    pub f: f64,
    pub case_integral: f64,
}

impl ConservedScales {
    pub fn at(p: &MomentumState, params: &ModelParams) -> Self {
        let om = params.omega(&p.big_h);
        let kin: f64 = (0..3).map(|i| (p.big_h[i] * om[i]).abs()).sum::<f64>() * 0.5;
        let pot: f64 = (0..3).map(|i| (params.a[i] * p.h[i]).abs()).sum();
        let nh = norm3(p.h);
        let nbig = norm3(p.big_h);
        let k4 = match params.finite_inertia() {
            Some(c) if params.is_kowalewski() => {
                let z = 0.5 * p.big_h[0].hypot(p.big_h[1]);
                let a = params.a[0].hypot(params.a[1]);
                let w = p.h[0].hypot(p.h[1]);
                (z * z + c[2] * a * (w + c[2] * a)).powi(2)
            }
            _ => 0.0,
        };
        ConservedScales {
            h: kin + pot,
            k2: nh * nh + params.k.as_f64().abs() * nbig * nbig,
            k3: nh * nbig,
            k4sq: k4,
            f: nh,
            case_integral: CaseIntegral::detect(params).map_or(0.0, |c| c.scale(p, params)),
        }
    }

    pub fn max(self, other: Self) -> Self {
        ConservedScales {
            h: self.h.max(other.h),
            k2: self.k2.max(other.k2),
            k3: self.k3.max(other.k3),
            k4sq: self.k4sq.max(other.k4sq),
            f: self.f.max(other.f),
            case_integral: self.case_integral.max(other.case_integral),
        }
    }
}

/// `H`, the Casimirs `K2 = ‖h‖² + k‖H‖²`, `K3 = h·H`, and `K4² = |q|²` in the
/// Kowalewski case.
pub fn conserved_quantities(p: &MomentumState, params: &ModelParams) -> ConservedRecord {
    let k = params.k.as_f64();
    ConservedRecord {
        h: hamiltonian(p, params),
        k2: dot(p.h, p.h) + k * dot(p.big_h, p.big_h),
        k3: dot(p.h, p.big_h),
        k4sq: kowalewski_q(p, params).ok().map(|q| q.norm_sqr()),
        f: None,
        case_integral: CaseIntegral::detect(params).map(|c| (c, c.evaluate(p, params))),
    }
}

fn q_parts(p: &MomentumState, params: &ModelParams) -> Result<(f64, Complex64, Complex64, Complex64)> {
    if !params.is_kowalewski() {
        return Err(Error::NotKowalewski);
    }
    let c3 = params.finite_inertia().ok_or(Error::NotKowalewski)?[2];
    let z = Complex64::new(p.big_h[0], p.big_h[1]) * 0.5;
    let w = Complex64::new(p.h[0], p.h[1]);
    Ok((c3, z, w, params.forcing()))
}

/// `q = z² − c3 a (w − c3 k a)` with `z = ½(H1 + iH2)`, `w = h1 + ih2`,
/// `a = a1 + ia2`; `c3 = 1` gives `q = z² − a(w − ka)`.
pub fn kowalewski_q(p: &MomentumState, params: &ModelParams) -> Result<Complex64> {
    let (c3, z, w, a) = q_parts(p, params)?;
    let k = params.k.as_f64();
    Ok(z * z - a * c3 * (w - a * (c3 * k)))
}

/// `|dq/dt − (−i H3/c3) q| / (1 + |q|)` with `dq/dt` from the chain rule
/// through [`vector_field`].
pub fn kowalewski_q_derivative_check(p: &MomentumState, params: &ModelParams) -> Result<f64> {
    let (c3, z, _, a) = q_parts(p, params)?;
    let q = kowalewski_q(p, params)?;
    let dp = vector_field(p, params);
    let dz = Complex64::new(dp.big_h[0], dp.big_h[1]) * 0.5;
    let dw = Complex64::new(dp.h[0], dp.h[1]);
    let chain = z * dz * 2.0 - a * c3 * dw;
    let expected = -Complex64::i() * (p.big_h[2] / c3) * q;
    Ok((chain - expected).norm() / (1.0 + q.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::Curvature;

    #[test]
    fn casimir_example() {
        let params = ModelParams::new([1.0; 3], [0.0, 0.0, 1.0], Curvature::Elliptic).unwrap();
        let p = MomentumState::new([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]);
        let rec = conserved_quantities(&p, &params);
        assert_eq!((rec.k2, rec.k3), (2.0, 0.0));
        assert!(rec.k4sq.is_none());
    }

    #[test]
    fn q_cancels() {
        let params = ModelParams::kowalewski(1.0, 0.0, Curvature::Flat).unwrap();
        let p = MomentumState::new([1.0, 0.0, 0.0], [2.0, 0.0, 0.0]);
        assert_eq!(conserved_quantities(&p, &params).k4sq, Some(0.0));
    }
}

//! Lie-algebra data, the Hamiltonian vector field, conserved quantities,
//! frame reconstruction and adaptive integration.
//!
//! States are points `(h, H)` of the dual of a six-dimensional Lie algebra
//! with basis `B1, B2, B3, A1, A2, A3`; `h_i = p(B_i)`, `H_i = p(A_i)`.
//! The curvature `k` picks the group: `0` for E3, `1` for SO(4), `-1` for
//! SO(1,3).

mod algebra;
mod conserved;
mod field;
mod frame;
mod ode;
mod trajectory;

use std::fmt;
use std::ops::Neg;

use num_complex::Complex64;
use num_traits::Num;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use algebra::{
    basis_matrices, bracket, bracket_table_mismatches, lax_generator, lax_matrix, lax_residual, table_entry,
    BasisElement,
};
pub use conserved::{
    conserved_quantities, kowalewski_q, kowalewski_q_derivative_check, CaseIntegral, ConservedRecord, ConservedScales,
};
pub use field::{
    hamiltonian, limiting_m0_field, pendulum_angle, pendulum_energy, vector_field, vector_field_commutator,
};
pub use frame::{euclidean_right_integrals, frame_generator, GroupElement};
pub use ode::{DormandPrince, StepStats, Tolerances};
pub use trajectory::{integrate, DriftSummary, IntegrateOptions, Trajectory};

/// Arithmetic needed to evaluate the polynomial vector field over either the
/// real or the complexified phase space.
pub trait Scalar: Copy + Num + Neg<Output = Self> + From<f64> + fmt::Debug + Send + Sync + 'static {}

impl<T> Scalar for T where T: Copy + Num + Neg<Output = T> + From<f64> + fmt::Debug + Send + Sync + 'static {}

pub(crate) fn dot<T: Scalar>(u: [T; 3], v: [T; 3]) -> T {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

pub(crate) fn norm3(u: [f64; 3]) -> f64 {
    dot(u, u).sqrt()
}

/// Curvature of the symmetric space `G/K`: `R³`, `S³` or `H³`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i64", try_from = "i64")]
pub enum Curvature {
    Hyperbolic,
    Flat,
    Elliptic,
}

impl Curvature {
    pub const ALL: [Curvature; 3] = [Curvature::Hyperbolic, Curvature::Flat, Curvature::Elliptic];

    pub fn from_i64(k: i64) -> Result<Self> {
        match k {
            -1 => Ok(Curvature::Hyperbolic),
            0 => Ok(Curvature::Flat),
            1 => Ok(Curvature::Elliptic),
            other => Err(Error::InvalidCurvature(other)),
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Curvature::Hyperbolic => -1,
            Curvature::Flat => 0,
            Curvature::Elliptic => 1,
        }
    }

    pub fn as_f64(self) -> f64 {
        self.value() as f64
    }
}

impl From<Curvature> for i64 {
    fn from(k: Curvature) -> i64 {
        k.value()
    }
}

impl TryFrom<i64> for Curvature {
    type Error = Error;
    fn try_from(k: i64) -> Result<Self> {
        Curvature::from_i64(k)
    }
}

impl fmt::Display for Curvature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Inertia coefficients, with the two limiting regimes kept as explicit modes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Inertia {
    Finite([f64; 3]),
    /// `c1 = c2 → ∞`, `c3 = 1`: kinetic part `½ H3²`.
    AxialLimit,
    /// `c3 → ∞`, `c1 = c2 = 1`: kinetic part `½ (H1² + H2²)`.
    TransverseLimit,
}

/// Constants of the Hamiltonian and the curvature selector.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub inertia: Inertia,
    pub a: [f64; 3],
    pub k: Curvature,
}

impl ModelParams {
    pub fn new(c: [f64; 3], a: [f64; 3], k: Curvature) -> Result<Self> {
        if c.iter().any(|ci| !(ci.is_finite() && *ci > 0.0)) {
            return Err(Error::InvalidParams(format!("inertia coefficients must be finite and positive, got {c:?}")));
        }
        Self::limit(Inertia::Finite(c), a, k)
    }

    pub fn limit(inertia: Inertia, a: [f64; 3], k: Curvature) -> Result<Self> {
        if a.iter().any(|ai| !ai.is_finite()) {
            return Err(Error::InvalidParams(format!("non-finite forcing {a:?}")));
        }
        Ok(ModelParams { inertia, a, k })
    }

    /// `c = (2, 2, 1)`, `a = (a1, a2, 0)`.
    pub fn kowalewski(a1: f64, a2: f64, k: Curvature) -> Result<Self> {
        Self::new([2.0, 2.0, 1.0], [a1, a2, 0.0], k)
    }

    /// Angular velocity `Ω` for the given angular momentum.
    pub fn omega<T: Scalar>(&self, big_h: &[T; 3]) -> [T; 3] {
        match self.inertia {
            Inertia::Finite(c) => [big_h[0] / T::from(c[0]), big_h[1] / T::from(c[1]), big_h[2] / T::from(c[2])],
            Inertia::AxialLimit => [T::zero(), T::zero(), big_h[2]],
            Inertia::TransverseLimit => [big_h[0], big_h[1], T::zero()],
        }
    }

    pub fn finite_inertia(&self) -> Option<[f64; 3]> {
        match self.inertia {
            Inertia::Finite(c) => Some(c),
            _ => None,
        }
    }

    /// `c1 = c2 = 2 c3` and `a3 = 0`.
    pub fn is_kowalewski(&self) -> bool {
        match self.inertia {
            Inertia::Finite(c) => {
                let tol = 1e-12 * c[2];
                (c[0] - c[1]).abs() <= tol && (c[0] - 2.0 * c[2]).abs() <= 2.0 * tol && self.a[2] == 0.0
            }
            _ => false,
        }
    }

    /// The forcing as the complex number `a1 + i a2`.
    pub fn forcing(&self) -> Complex64 {
        Complex64::new(self.a[0], self.a[1])
    }
}

/// A point `(h, H)` of the dual Lie algebra.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentumState<T = f64> {
    pub h: [T; 3],
    pub big_h: [T; 3],
}

impl<T: Scalar> MomentumState<T> {
    pub fn new(h: [T; 3], big_h: [T; 3]) -> Self {
        MomentumState { h, big_h }
    }

    pub fn zero() -> Self {
        MomentumState { h: [T::zero(); 3], big_h: [T::zero(); 3] }
    }

    /// `[h1, h2, h3, H1, H2, H3]`.
    pub fn to_array(&self) -> [T; 6] {
        [self.h[0], self.h[1], self.h[2], self.big_h[0], self.big_h[1], self.big_h[2]]
    }

    pub fn from_slice(v: &[T]) -> Self {
        MomentumState { h: [v[0], v[1], v[2]], big_h: [v[3], v[4], v[5]] }
    }
}

impl MomentumState<f64> {
    /// Entries drawn from `N(0, scale²)`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Self {
        let mut v = [0.0; 6];
        for x in v.iter_mut() {
            let z: f64 = rng.sample(StandardNormal);
            *x = scale * z;
        }
        MomentumState::from_slice(&v)
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|x| x.is_finite())
    }

    pub fn complexify(&self) -> MomentumState<Complex64> {
        MomentumState { h: self.h.map(Complex64::from), big_h: self.big_h.map(Complex64::from) }
    }
}

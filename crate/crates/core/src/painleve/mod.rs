//! Laurent-series analysis of the complexified system in complex time.
//!
//! With `c1 = c2 = c/m`, `c3 = c`, `a = (a1, 0, a3)` the system reads
//! `K' = K × Ω(K) + P × a`, `P' = P × Ω(K) + k K × a` with
//! `Ω(K) = (m K1/c, m K2/c, K3/c)`. Solutions are sought as
//! `K = t⁻¹ Σ K_n tⁿ`, `P = t⁻² Σ P_n tⁿ`; stage `n` is a linear system whose
//! singular values of `n` (resonances) carry the free constants.

mod field;
mod leading;
mod recursion;
mod series;
mod spectrum;

use serde::{Deserialize, Serialize};

use crate::lie::Curvature;
use crate::{Error, Result};

pub use field::{determinant, ExactComplex, Field, StageMatrix, StageSolve};
pub use leading::{
    leading_order_residual, leading_order_solutions, leading_order_solutions_with, Family, LeadingOrder,
};
pub use recursion::{
    cascaded_blocks, delta_closed_form, explicit_stage_check, explicit_stages, recursion_stage, stage_matrix,
    stage_residual, stage_rhs, RecursionStage, Stage, STAGE_TOL,
};
pub use series::{
    laurent_expand, series_residual, slope_report, FreeConstants, InvariantSeries, LaurentSolution, SlopeReport,
};
pub use spectrum::{
    classify, resonance_spectrum, BranchSpectrum, Classification, MeromorphicClass, Resonance, ResonanceSpectrum,
    SpectrumOptions,
};

/// Ratio parameters of the axisymmetric case, with `a2 = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioParams {
    /// `c3 / c1 = c3 / c2`.
    pub m: f64,
    /// `c3`.
    pub c: f64,
    pub a1: f64,
    pub a3: f64,
    pub k: Curvature,
}

impl RatioParams {
    pub fn new(m: f64, c: f64, a1: f64, a3: f64, k: Curvature) -> Result<Self> {
        if ![m, c, a1, a3].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidParams("ratio parameters must be finite".into()));
        }
        if m < 0.0 || c <= 0.0 {
            return Err(Error::InvalidParams(format!("need m >= 0 and c > 0, got m = {m}, c = {c}")));
        }
        Ok(RatioParams { m, c, a1, a3, k })
    }

    /// `c = 1`, `m = ½`, `a3 = 0`.
    pub fn kowalewski(a1: f64, k: Curvature) -> Self {
        RatioParams { m: 0.5, c: 1.0, a1, a3: 0.0, k }
    }

    pub(crate) fn omega<F: Field>(&self, v: &[F; 3]) -> [F; 3] {
        let mc = F::from_f64(self.m) / F::from_f64(self.c);
        let ic = F::one() / F::from_f64(self.c);
        [mc.clone() * v[0].clone(), mc * v[1].clone(), ic * v[2].clone()]
    }

    pub(crate) fn forcing<F: Field>(&self) -> [F; 3] {
        [F::from_f64(self.a1), F::zero(), F::from_f64(self.a3)]
    }
}

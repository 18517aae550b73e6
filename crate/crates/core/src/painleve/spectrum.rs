use std::fmt;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::field::Field;
use super::leading::{leading_order_solutions, Family};
use super::recursion::{delta_closed_form, recursion_stage, Stage};
use super::RatioParams;
use crate::Result;

/// Number of free constants of a general solution.
pub const FULL_FAMILY: usize = 6;

/// Options for [`resonance_spectrum`].
#[derive(Clone, Copy, Debug)]
pub struct SpectrumOptions {
    /// Stages solved beyond the last positive-integer root of `Δ`.
    pub min_order: usize,
    /// Upper bound on the stages solved.
    pub max_order: usize,
    pub seed: u64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions { min_order: 8, max_order: 64, seed: 0 }
    }
}

/// A singular stage.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Resonance {
    pub n: usize,
    pub kernel_dim: usize,
    pub consistent: bool,
    pub residual: f64,
}

/// Resonances and free-constant count of one leading-order branch.
#[derive(Clone, Debug, Serialize)]
pub struct BranchSpectrum {
    pub family: Family,
    pub epsilon: i8,
    /// Free constants at stage 0: 2 for the one-parameter `q0` family (the
    /// parameter and its `ε` pairing), else 0.
    pub stage0: usize,
    pub resonances: Vec<Resonance>,
    /// First stage whose right-hand side is off the range.
    pub obstruction: Option<usize>,
    pub free_constants: usize,
    pub bracket_nondegenerate: bool,
}

impl BranchSpectrum {
    pub fn label(&self) -> String {
        format!("{}{}", self.family.label(), if self.epsilon > 0 { '+' } else { '-' })
    }

    /// `n:dim` pairs joined by `;`, with `!` marking an obstructed stage.
    pub fn resonance_list(&self) -> String {
        self.resonances
            .iter()
            .map(|r| format!("{}:{}{}", r.n, r.kernel_dim, if r.consistent { "" } else { "!" }))
            .collect::<Vec<_>>()
            .join(";")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ResonanceSpectrum {
    pub params: RatioParams,
    pub branches: Vec<BranchSpectrum>,
}

impl ResonanceSpectrum {
    /// Largest free-constant count over unobstructed branches.
    pub fn best_free_constants(&self) -> usize {
        self.branches.iter().filter(|b| b.obstruction.is_none()).map(|b| b.free_constants).max().unwrap_or(0)
    }
}

fn last_integer_root(params: &RatioParams, family: Family, epsilon: i8, max_order: usize) -> usize {
    (1..=max_order)
        .filter(|&n| {
            let nf = n as f64;
            let d = delta_closed_form(nf, params, family, epsilon);
            d.norm() <= 1e-9 * (1.0 + nf.powi(6))
        })
        .max()
        .unwrap_or(0)
}

/// Solve each branch through its resonances, recording kernel dimensions
/// from the assembled stage matrices.
pub fn resonance_spectrum(params: &RatioParams, opts: &SpectrumOptions) -> Result<ResonanceSpectrum> {
    let mut branches = Vec::new();
    for (bi, lo) in leading_order_solutions(params)?.into_iter().enumerate() {
        let order = last_integer_root(params, lo.family, lo.epsilon, opts.max_order).max(opts.min_order);
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(bi as u64));
        let mut next = || Complex64::draw(&mut rng);
        let mut stages: Vec<Stage> = vec![Stage::from(&lo)];
        let mut resonances = Vec::new();
        let mut obstruction = None;
        for n in 1..=order {
            let st = recursion_stage(n, params, &lo, &stages, &mut next)?;
            if st.kernel_dim > 0 || !st.consistent {
                resonances.push(Resonance {
                    n,
                    kernel_dim: st.kernel_dim,
                    consistent: st.consistent,
                    residual: st.consistency_residual,
                });
            }
            if !st.consistent {
                obstruction = Some(n);
                break;
            }
            stages.push(st.solution);
        }
        let stage0 = if lo.free_q0 { 2 } else { 0 };
        let free_constants = stage0 + resonances.iter().filter(|r| r.consistent).map(|r| r.kernel_dim).sum::<usize>();
        branches.push(BranchSpectrum {
            family: lo.family,
            epsilon: lo.epsilon,
            stage0,
            resonances,
            obstruction,
            free_constants,
            bracket_nondegenerate: lo.bracket_nondegenerate(params),
        });
    }
    Ok(ResonanceSpectrum { params: *params, branches })
}

/// Parameter classes admitting a full family of meromorphic solutions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MeromorphicClass {
    /// `a = 0`.
    Euler,
    /// `a1 = a2 = 0`.
    Lagrange,
    /// `m = 1`.
    Spherical,
    /// `m = ½`, `a3 = 0`.
    Kowalewski,
    NonMeromorphic {
        free_constants: usize,
        deficit: usize,
    },
}

impl MeromorphicClass {
    pub fn is_meromorphic(&self) -> bool {
        !matches!(self, MeromorphicClass::NonMeromorphic { .. })
    }
}

impl fmt::Display for MeromorphicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeromorphicClass::Euler => write!(f, "euler"),
            MeromorphicClass::Lagrange => write!(f, "lagrange"),
            MeromorphicClass::Spherical => write!(f, "spherical"),
            MeromorphicClass::Kowalewski => write!(f, "kowalewski"),
            MeromorphicClass::NonMeromorphic { .. } => write!(f, "non-meromorphic"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub class: MeromorphicClass,
    /// Present when the Laurent analysis was run.
    pub spectrum: Option<ResonanceSpectrum>,
}

/// The special cases are read off the parameters; otherwise the class is
/// Kowalewski exactly when some branch carries six free constants.
pub fn classify(params: &RatioParams, opts: &SpectrumOptions) -> Result<Classification> {
    let class = if params.a1 == 0.0 && params.a3 == 0.0 {
        Some(MeromorphicClass::Euler)
    } else if params.a1 == 0.0 {
        Some(MeromorphicClass::Lagrange)
    } else if params.m == 1.0 {
        Some(MeromorphicClass::Spherical)
    } else {
        None
    };
    if let Some(class) = class {
        return Ok(Classification { class, spectrum: None });
    }
    let spectrum = resonance_spectrum(params, opts)?;
    let best = spectrum.best_free_constants();
    let class = if best >= FULL_FAMILY {
        MeromorphicClass::Kowalewski
    } else {
        MeromorphicClass::NonMeromorphic { free_constants: best, deficit: FULL_FAMILY - best }
    };
    Ok(Classification { class, spectrum: Some(spectrum) })
}

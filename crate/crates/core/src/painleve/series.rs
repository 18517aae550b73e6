use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::field::{add3, cross, dot, max_magnitude, scale3, sub3, zero3, Field};
use super::leading::LeadingOrder;
use super::recursion::{recursion_stage, Stage};
use super::RatioParams;
use crate::{Error, Result};

/// Where the values of free constants come from.
#[derive(Clone, Debug)]
pub enum FreeConstants<F> {
    Seeded(u64),
    /// Consumed in stage order.
    Values(Vec<F>),
}

/// `K(t) = t⁻¹ Σ K_n tⁿ`, `P(t) = t⁻² Σ P_n tⁿ` truncated at `n = order`.
#[derive(Clone, Debug)]
pub struct LaurentSolution<F = Complex64> {
    pub params: RatioParams,
    pub leading: LeadingOrder<F>,
    pub order: usize,
    pub stages: Vec<Stage<F>>,
    /// `(n, kernel dimension)` for every singular stage.
    pub resonances: Vec<(usize, usize)>,
    pub free_values: Vec<F>,
}

/// Laurent coefficients of `H = ½ K·Ω(K) + a·P`, `G = P·P + k K·K` and
/// `J = P·K` from the lowest order up to the constant term.
#[derive(Clone, Debug)]
pub struct InvariantSeries<F> {
    /// Orders `−2..=0`.
    pub h: Vec<F>,
    /// Orders `−4..=0`.
    pub g: Vec<F>,
    /// Orders `−3..=0`.
    pub j: Vec<F>,
}

impl<F: Field> InvariantSeries<F> {
    /// Largest negative-order coefficient; zero when the series respects the
    /// order relations.
    pub fn negative_order_defect(&self) -> f64 {
        let neg = |v: &[F]| max_magnitude(&v[..v.len() - 1]);
        neg(&self.h).max(neg(&self.g)).max(neg(&self.j))
    }

    /// Constant terms `[H, G, J]`.
    pub fn values(&self) -> [F; 3] {
        [self.h.last().unwrap().clone(), self.g.last().unwrap().clone(), self.j.last().unwrap().clone()]
    }
}

/// Residual decay of a truncated series.
#[derive(Clone, Debug)]
pub struct SlopeReport {
    pub times: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Least-squares slope of `log r` against `log t`.
    pub slope: f64,
}

impl<F: Field> LaurentSolution<F> {
    /// `(K, P, K', P')` at `t`.
    pub fn eval(&self, t: &F) -> ([F; 3], [F; 3], [F; 3], [F; 3]) {
        let mut k = zero3::<F>();
        let mut p = zero3::<F>();
        let mut dk = zero3::<F>();
        let mut dp = zero3::<F>();
        let inv = F::one() / t.clone();
        // t^(n-3), starting from n = 0.
        let mut pow = inv.clone() * inv.clone() * inv;
        for (n, s) in self.stages.iter().enumerate() {
            let nf = F::from_f64(n as f64);
            let tn2 = pow.clone() * t.clone();
            let tn1 = tn2.clone() * t.clone();
            k = add3(&k, &scale3(&tn1, &s.k));
            p = add3(&p, &scale3(&tn2, &s.p));
            dk = add3(&dk, &scale3(&((nf.clone() - F::one()) * tn2), &s.k));
            dp = add3(&dp, &scale3(&((nf - F::from_f64(2.0)) * pow.clone()), &s.p));
            pow = pow * t.clone();
        }
        (k, p, dk, dp)
    }

    /// Max-norm of the equations of motion at `t`.
    pub fn residual(&self, t: &F) -> f64 {
        let (k, p, dk, dp) = self.eval(t);
        let a = self.params.forcing::<F>();
        let om = self.params.omega(&k);
        let rk = sub3(&dk, &add3(&cross(&k, &om), &cross(&p, &a)));
        let kk = F::from_f64(self.params.k.as_f64());
        let rp = sub3(&dp, &add3(&cross(&p, &om), &scale3(&kk, &cross(&k, &a))));
        max_magnitude(&rk).max(max_magnitude(&rp))
    }

    /// Invariants from series products; needs `order ≥ 4`.
    pub fn invariants(&self) -> Result<InvariantSeries<F>> {
        if self.order < 4 {
            return Err(Error::InvalidParams("invariant orders need a truncation order of at least 4".into()));
        }
        let s = &self.stages;
        let a = self.params.forcing::<F>();
        let kk = F::from_f64(self.params.k.as_f64());
        let half = F::from_f64(0.5);
        let conv = |idx: usize, f: &dyn Fn(&Stage<F>, &Stage<F>) -> F| {
            (0..=idx).fold(F::zero(), |acc, i| acc + f(&s[i], &s[idx - i]))
        };
        let h = (0..=2)
            .map(|idx| half.clone() * conv(idx, &|x, y| dot(&x.k, &self.params.omega(&y.k))) + dot(&a, &s[idx].p))
            .collect();
        let g = (0..=4)
            .map(|idx| {
                let pp = conv(idx, &|x, y| dot(&x.p, &y.p));
                let kkv = if idx >= 2 { conv(idx - 2, &|x, y| dot(&x.k, &y.k)) } else { F::zero() };
                pp + kk.clone() * kkv
            })
            .collect();
        let j = (0..=3).map(|idx| conv(idx, &|x, y| dot(&x.p, &y.k))).collect();
        Ok(InvariantSeries { h, g, j })
    }
}

/// Run the recursion through `order` starting from `lo`.
pub fn laurent_expand<F: Field>(
    params: &RatioParams,
    lo: &LeadingOrder<F>,
    free: &FreeConstants<F>,
    order: usize,
) -> Result<LaurentSolution<F>> {
    let mut rng = ChaCha8Rng::seed_from_u64(match free {
        FreeConstants::Seeded(seed) => *seed,
        FreeConstants::Values(_) => 0,
    });
    let mut used = 0usize;
    let mut next = || {
        used += 1;
        match free {
            FreeConstants::Seeded(_) => F::draw(&mut rng),
            FreeConstants::Values(v) => v.get(used - 1).cloned().unwrap_or_else(F::zero),
        }
    };
    let mut stages = vec![Stage::from(lo)];
    let mut resonances = Vec::new();
    let mut free_values = Vec::new();
    for n in 1..=order {
        let st = recursion_stage(n, params, lo, &stages, &mut next)?;
        if !st.consistent {
            return Err(Error::Obstruction { n, residual: st.consistency_residual });
        }
        if st.kernel_dim > 0 {
            resonances.push((n, st.kernel_dim));
        }
        free_values.extend(st.free_values);
        stages.push(st.solution);
    }
    if let FreeConstants::Values(v) = free {
        if used > v.len() {
            return Err(Error::InvalidParams(format!("{used} free constants needed, {} given", v.len())));
        }
    }
    Ok(LaurentSolution { params: *params, leading: lo.clone(), order, stages, resonances, free_values })
}

/// Residual at each sample time.
pub fn series_residual<F: Field>(sol: &LaurentSolution<F>, times: &[F]) -> Vec<f64> {
    times.iter().map(|t| sol.residual(t)).collect()
}

/// Log–log slope of the residual against `t`.
pub fn slope_report<F: Field>(sol: &LaurentSolution<F>, times: &[F]) -> SlopeReport {
    let residuals = series_residual(sol, times);
    let ts: Vec<f64> = times.iter().map(Field::magnitude).collect();
    let xs: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = residuals.iter().map(|r| r.max(f64::MIN_POSITIVE).ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    SlopeReport { times: ts, residuals, slope: sxy / sxx }
}

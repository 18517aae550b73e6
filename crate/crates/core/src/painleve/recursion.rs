use num_complex::Complex64;

use super::field::{add3, cross, max_magnitude, scale3, sub3, zero3, Field, StageMatrix};
use super::leading::{Family, LeadingOrder};
use super::RatioParams;
use crate::{Error, Result};

/// Relative threshold for singular values and right-hand-side consistency.
pub const STAGE_TOL: f64 = 1e-9;

/// Coefficients `(K_n, P_n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Stage<F = Complex64> {
    pub k: [F; 3],
    pub p: [F; 3],
}

impl<F: Field> Stage<F> {
    pub fn zero() -> Self {
        Stage { k: zero3(), p: zero3() }
    }

    pub fn from_vector(v: &[F; 6]) -> Self {
        Stage { k: [v[0].clone(), v[1].clone(), v[2].clone()], p: [v[3].clone(), v[4].clone(), v[5].clone()] }
    }

    pub fn to_vector(&self) -> [F; 6] {
        [
            self.k[0].clone(),
            self.k[1].clone(),
            self.k[2].clone(),
            self.p[0].clone(),
            self.p[1].clone(),
            self.p[2].clone(),
        ]
    }
}

impl<F: Field> From<&LeadingOrder<F>> for Stage<F> {
    fn from(lo: &LeadingOrder<F>) -> Self {
        Stage { k: lo.k.clone(), p: lo.p.clone() }
    }
}

/// One solved stage of the recursion.
#[derive(Clone, Debug)]
pub struct RecursionStage<F = Complex64> {
    pub n: usize,
    pub matrix: StageMatrix<F>,
    pub rhs: [F; 6],
    pub solution: Stage<F>,
    pub kernel_dim: usize,
    pub consistency_residual: f64,
    pub consistent: bool,
    /// Values given to the kernel directions.
    pub free_values: Vec<F>,
}

fn apply<F: Field>(n: &F, params: &RatioParams, lo: &LeadingOrder<F>, x: &Stage<F>) -> [F; 6] {
    let a = params.forcing::<F>();
    let om0 = params.omega(&lo.k);
    let omn = params.omega(&x.k);
    let one = F::one();
    let two = F::from_f64(2.0);
    let ek = sub3(
        &sub3(&sub3(&scale3(&(n.clone() - one), &x.k), &cross(&x.k, &om0)), &cross(&lo.k, &omn)),
        &cross(&x.p, &a),
    );
    let ep = sub3(&sub3(&scale3(&(n.clone() - two), &x.p), &cross(&x.p, &om0)), &cross(&lo.p, &omn));
    [ek[0].clone(), ek[1].clone(), ek[2].clone(), ep[0].clone(), ep[1].clone(), ep[2].clone()]
}

/// The linear operator of stage `n` on `(K_n, P_n)`; `n` may be any scalar.
pub fn stage_matrix<F: Field>(n: &F, params: &RatioParams, lo: &LeadingOrder<F>) -> StageMatrix<F> {
    let mut out: StageMatrix<F> = std::array::from_fn(|_| std::array::from_fn(|_| F::zero()));
    for j in 0..6 {
        let mut e: [F; 6] = std::array::from_fn(|_| F::zero());
        e[j] = F::one();
        let col = apply(n, params, lo, &Stage::from_vector(&e));
        for (r, v) in col.into_iter().enumerate() {
            out[r][j] = v;
        }
    }
    out
}

/// The two diagonal 3×3 blocks over `(p, r, g)` and `(q, f, h)` when `r0 = 0`.
pub fn cascaded_blocks<F: Field>(
    n: &F,
    params: &RatioParams,
    lo: &LeadingOrder<F>,
) -> Option<([[F; 3]; 3], [[F; 3]; 3])> {
    if lo.family != Family::A {
        return None;
    }
    let m = stage_matrix(n, params, lo);
    let block = |idx: [usize; 3]| std::array::from_fn(|r| std::array::from_fn(|c| m[idx[r]][idx[c]].clone()));
    Some((block([0, 2, 4]), block([1, 3, 5])))
}

/// Right-hand side of stage `n` from stages `0..n`, and the magnitude of the
/// summed terms.
pub fn stage_rhs<F: Field>(n: usize, params: &RatioParams, stages: &[Stage<F>]) -> ([F; 6], f64) {
    let a = params.forcing::<F>();
    let mut rk = zero3::<F>();
    let mut rp = zero3::<F>();
    let mut scale = 0.0f64;
    for i in 1..n {
        let tk = cross(&stages[i].k, &params.omega(&stages[n - i].k));
        let tp = cross(&stages[n - i].p, &params.omega(&stages[i].k));
        scale = scale.max(max_magnitude(&tk)).max(max_magnitude(&tp));
        rk = add3(&rk, &tk);
        rp = add3(&rp, &tp);
    }
    if n >= 2 {
        let tp = scale3(&F::from_f64(params.k.as_f64()), &cross(&stages[n - 2].k, &a));
        scale = scale.max(max_magnitude(&tp));
        rp = add3(&rp, &tp);
    }
    ([rk[0].clone(), rk[1].clone(), rk[2].clone(), rp[0].clone(), rp[1].clone(), rp[2].clone()], scale)
}

/// Max-norm of `M_n x_n − b_n` relative to `1 +` the scale of `b_n`.
pub fn stage_residual<F: Field>(n: usize, params: &RatioParams, lo: &LeadingOrder<F>, stages: &[Stage<F>]) -> f64 {
    let (b, scale) = stage_rhs(n, params, stages);
    let lhs = apply(&F::from_f64(n as f64), params, lo, &stages[n]);
    let d: Vec<F> = lhs.iter().zip(b.iter()).map(|(l, r)| l.clone() - r.clone()).collect();
    max_magnitude(&d) / (1.0 + scale)
}

/// Assemble and solve stage `n` given `prev = [stage 0, …, stage n−1]`.
/// Kernel directions are weighted by values taken from `free`. An
/// inconsistent singular stage is returned with `consistent = false`.
pub fn recursion_stage<F: Field>(
    n: usize,
    params: &RatioParams,
    lo: &LeadingOrder<F>,
    prev: &[Stage<F>],
    free: &mut dyn FnMut() -> F,
) -> Result<RecursionStage<F>> {
    if n == 0 || prev.len() != n {
        return Err(Error::InvalidParams(format!("stage {n} needs stages 0..{n}, got {}", prev.len())));
    }
    let matrix = stage_matrix(&F::from_f64(n as f64), params, lo);
    let (rhs, scale) = stage_rhs(n, params, prev);
    let solve = F::solve_stage(&matrix, &rhs, scale, STAGE_TOL);
    let consistent = solve.consistency_residual <= STAGE_TOL;
    let mut x = solve.particular.clone();
    let mut free_values = Vec::new();
    for v in &solve.kernel {
        let w = free();
        for (xi, vi) in x.iter_mut().zip(v.iter()) {
            *xi = xi.clone() + w.clone() * vi.clone();
        }
        free_values.push(w);
    }
    Ok(RecursionStage {
        n,
        matrix,
        rhs,
        solution: Stage::from_vector(&x),
        kernel_dim: solve.kernel.len(),
        consistency_residual: solve.consistency_residual,
        consistent,
        free_values,
    })
}

/// Closed-form stage determinant. Family (a) factors as `Δ1 Δ2` with
/// `Δ2 = (n+1)(n−2)(n−4)`, `Δ1 = (n−3)(a1((n²−n+2)m − 2) − iε a3 m n(n−1)) / (m(a1 − iε a3))`;
/// family (b) gives `(n+1)(n−2)(n−3)(n−4)(n+1−2m)(n−2+2m)`.
pub fn delta_closed_form(n: f64, params: &RatioParams, family: Family, epsilon: i8) -> Complex64 {
    let m = params.m;
    match family {
        Family::A => {
            let ie = Complex64::new(0.0, epsilon as f64);
            let d2 = (n + 1.0) * (n - 2.0) * (n - 4.0);
            let num = params.a1 * ((n * n - n + 2.0) * m - 2.0) - ie * params.a3 * m * n * (n - 1.0);
            let d1 = (n - 3.0) * num / (m * (params.a1 - ie * params.a3));
            d1 * d2
        }
        Family::B => {
            Complex64::from((n + 1.0) * (n - 2.0) * (n - 3.0) * (n - 4.0) * (n + 1.0 - 2.0 * m) * (n - 2.0 + 2.0 * m))
        }
    }
}

/// Closed-form stages `0..=4` of family (a) at `a3 = 0` in terms of the free
/// constants `q2, g3, q4`, for the Kowalewski case with `c = 1`.
pub fn explicit_stages<F: Field>(
    params: &RatioParams,
    epsilon: i8,
    q2: F,
    g3: F,
    q4: F,
) -> Result<(LeadingOrder<F>, Vec<Stage<F>>)> {
    if params.a3 != 0.0 {
        return Err(Error::InvalidParams("the explicit stage solutions need a3 = 0".into()));
    }
    let lo = super::leading_order_solutions_with(params, F::one())?
        .into_iter()
        .find(|lo| lo.family == Family::A && lo.epsilon == epsilon)
        .ok_or_else(|| Error::NoLeadingOrder("family (a) needs m != 0".into()))?;
    let f = F::from_f64;
    let (m, a1, k) = (f(params.m), f(params.a1), f(params.k.as_f64()));
    let ie = F::i() * f(epsilon as f64);
    let two = f(2.0);
    let s2 = Stage {
        k: [F::zero(), q2.clone(), F::zero()],
        p: [
            ie.clone() / a1.clone() * q2.clone() + k.clone() / m.clone() * a1.clone(),
            F::zero(),
            q2.clone() / a1.clone(),
        ],
    };
    let h3 = -(k * a1.clone() * q2.clone()) / f(4.0);
    let s3 = Stage {
        k: [
            ie.clone() * (m.clone() - F::one()) / (two.clone() * m.clone()) * a1.clone() * g3.clone(),
            a1.clone() / two.clone() * h3.clone(),
            -(a1.clone() / two.clone() * g3.clone()),
        ],
        p: [-(ie.clone() * h3.clone()), g3, h3],
    };
    let s4 = Stage {
        k: [F::zero(), q4.clone(), F::zero()],
        p: [
            -(m / (two.clone() * a1.clone()) * q2.clone() * q2) - two * ie / a1.clone() * q4.clone(),
            F::zero(),
            f(3.0) * q4 / a1,
        ],
    };
    let stages = vec![Stage::from(&lo), Stage::zero(), s2, s3, s4];
    Ok((lo, stages))
}

/// Largest recursion residual of the explicit stage solutions over `n = 1..=4`.
pub fn explicit_stage_check<F: Field>(params: &RatioParams, epsilon: i8, q2: F, g3: F, q4: F) -> Result<f64> {
    let (lo, stages) = explicit_stages(params, epsilon, q2, g3, q4)?;
    Ok((1..=4).map(|n| stage_residual(n, params, &lo, &stages)).fold(0.0, f64::max))
}

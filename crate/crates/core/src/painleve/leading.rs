use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::{add3, cross, max_magnitude, scale3, Field};
use super::RatioParams;
use crate::{Error, Result};

/// Leading-order family: `(a)` has `r0 = 0`, `(b)` has `h0 = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
}

impl Family {
    pub fn label(self) -> &'static str {
        match self {
            Family::A => "a",
            Family::B => "b",
        }
    }
}

/// `K0 = (p0, q0, r0)`, `P0 = (f0, g0, h0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LeadingOrder<F = Complex64> {
    pub family: Family,
    pub epsilon: i8,
    pub k: [F; 3],
    pub p: [F; 3],
    /// `q0` is a free constant (family (b) with `2m − 1 = 0`, `a3 = 0`).
    pub free_q0: bool,
}

impl<F: Field> LeadingOrder<F> {
    /// `ε` label and family, e.g. `b+`.
    pub fn branch(&self) -> String {
        format!("{}{}", self.family.label(), if self.epsilon > 0 { '+' } else { '-' })
    }

    /// `P0 × Ω(K0) ≠ 0`, the standing assumption behind the pole orders `(1, 2)`.
    pub fn bracket_nondegenerate(&self, params: &RatioParams) -> bool {
        let b = cross(&self.p, &params.omega(&self.k));
        max_magnitude(&b) > 0.0
    }

    /// `f0² + g0² + h0²`.
    pub fn null_defect(&self) -> F {
        self.p.iter().fold(F::zero(), |acc, x| acc + x.clone() * x.clone())
    }
}

/// Both families for both `ε`, over complex doubles; a free `q0` is set to 1.
pub fn leading_order_solutions(params: &RatioParams) -> Result<Vec<LeadingOrder<Complex64>>> {
    leading_order_solutions_with(params, Complex64::new(1.0, 0.0))
}

/// Both families for both `ε`; `q0` is used when it is a free constant.
pub fn leading_order_solutions_with<F: Field>(params: &RatioParams, q0: F) -> Result<Vec<LeadingOrder<F>>> {
    if params.m == 1.0 {
        return Err(Error::NoLeadingOrder("m = 1 is the spherical case".into()));
    }
    if params.a1 == 0.0 {
        return Err(Error::NoLeadingOrder("a1 = 0 is the Lagrange case".into()));
    }
    let f = F::from_f64;
    let (m, c, a1, a3) = (f(params.m), f(params.c), f(params.a1), f(params.a3));
    let two = f(2.0);
    let mut out = Vec::new();
    for epsilon in [1i8, -1] {
        let ie = F::i() * f(epsilon as f64);
        if params.m != 0.0 {
            let h0 = two.clone() * c.clone() / (m.clone() * (a3.clone() + ie.clone() * a1.clone()));
            let q0 = two.clone() * ie.clone() * c.clone() / m.clone();
            out.push(LeadingOrder {
                family: Family::A,
                epsilon,
                k: [F::zero(), q0, F::zero()],
                p: [ie.clone() * h0.clone(), F::zero(), h0],
                free_q0: false,
            });
        }
        let denom = two.clone() * m.clone() - F::one();
        let (q, free_q0) = if params.m == 0.5 {
            if params.a3 != 0.0 {
                continue;
            }
            (q0.clone(), true)
        } else {
            (two.clone() * a3.clone() * c.clone() / (a1.clone() * denom), false)
        };
        let f0 = two.clone() * c.clone() / a1.clone();
        out.push(LeadingOrder {
            family: Family::B,
            epsilon,
            k: [-(ie.clone() * q.clone()), q, two.clone() * ie.clone() * c.clone()],
            p: [f0.clone(), ie * f0, F::zero()],
            free_q0,
        });
    }
    Ok(out)
}

/// Max-norm of `K0 + K0 × Ω(K0) + P0 × a` and `2 P0 + P0 × Ω(K0)`.
pub fn leading_order_residual<F: Field>(lo: &LeadingOrder<F>, params: &RatioParams) -> f64 {
    let om = params.omega(&lo.k);
    let a = params.forcing::<F>();
    let rk = add3(&add3(&lo.k, &cross(&lo.k, &om)), &cross(&lo.p, &a));
    let rp = add3(&scale3(&F::from_f64(2.0), &lo.p), &cross(&lo.p, &om));
    max_magnitude(&rk).max(max_magnitude(&rp))
}

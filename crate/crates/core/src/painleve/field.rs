use std::fmt::Debug;
use std::ops::Neg;

use nalgebra::{Matrix6, Vector6};
use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive, Zero};
use rand::Rng;

/// Gaussian rationals, used where roundoff would hide the quantity measured.
pub type ExactComplex = Complex<BigRational>;

/// A 6×6 stage matrix acting on `(K_n, P_n)`.
pub type StageMatrix<F> = [[F; 6]; 6];

/// Solution set of one recursion stage: `particular + span(kernel)`.
#[derive(Clone, Debug)]
pub struct StageSolve<F> {
    pub particular: [F; 6],
    pub kernel: Vec<[F; 6]>,
    /// Distance of the right-hand side from the range, relative to its scale.
    pub consistency_residual: f64,
}

/// Scalars over which the Laurent recursion is carried out.
pub trait Field: Clone + PartialEq + Debug + Num + Neg<Output = Self> + Send + Sync {
    /// Exact conversion of a finite double.
    fn from_f64(x: f64) -> Self;
    fn i() -> Self;
    fn magnitude(&self) -> f64;
    /// A random free-constant value.
    fn draw<R: Rng + ?Sized>(rng: &mut R) -> Self;
    /// Solve `M x = b`, returning the kernel when `M` is singular. `scale` is
    /// the magnitude of the terms summed into `b`.
    fn solve_stage(m: &StageMatrix<Self>, b: &[Self; 6], scale: f64, tol: f64) -> StageSolve<Self>;
}

impl Field for Complex64 {
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }

    fn i() -> Self {
        Complex64::i()
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn draw<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    }

    fn solve_stage(m: &StageMatrix<Self>, b: &[Self; 6], scale: f64, tol: f64) -> StageSolve<Self> {
        let mat = Matrix6::from_fn(|r, c| m[r][c]);
        let rhs = Vector6::from_fn(|r, _| b[r]);
        let svd = mat.svd(true, true);
        let u = svd.u.expect("u requested");
        let v_t = svd.v_t.expect("v_t requested");
        let smax = svd.singular_values.max();
        let threshold = tol * smax.max(f64::MIN_POSITIVE);
        let mut x = Vector6::<Complex64>::zeros();
        let mut kernel = Vec::new();
        for j in 0..6 {
            let sigma = svd.singular_values[j];
            let v = v_t.row(j).adjoint();
            if sigma > threshold {
                let coeff = u.column(j).dotc(&rhs) / sigma;
                x += v * coeff;
            } else {
                kernel.push(std::array::from_fn(|r| v[r]));
            }
        }
        let defect = (mat * x - rhs).camax();
        let denom = scale.max(rhs.camax()).max(smax * x.camax());
        let consistency_residual = if defect == 0.0 { 0.0 } else { defect / denom };
        StageSolve { particular: std::array::from_fn(|r| x[r]), kernel, consistency_residual }
    }
}

impl Field for ExactComplex {
    fn from_f64(x: f64) -> Self {
        Complex::new(BigRational::from_float(x).expect("finite parameter"), BigRational::zero())
    }

    fn i() -> Self {
        Complex::i()
    }

    fn magnitude(&self) -> f64 {
        let re = self.re.to_f64().unwrap_or(f64::INFINITY);
        let im = self.im.to_f64().unwrap_or(f64::INFINITY);
        re.hypot(im)
    }

    fn draw<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut part = || {
            let num: i64 = rng.random_range(-9..=9);
            let den: i64 = rng.random_range(1..=9);
            BigRational::new(BigInt::from(num), BigInt::from(den))
        };
        Complex::new(part(), part())
    }

    fn solve_stage(m: &StageMatrix<Self>, b: &[Self; 6], _scale: f64, _tol: f64) -> StageSolve<Self> {
        let mut rows: Vec<Vec<Self>> = (0..6)
            .map(|r| {
                let mut row = m[r].to_vec();
                row.push(b[r].clone());
                row
            })
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..6 {
            let Some(p) = (r..6).find(|&i| !rows[i][col].is_zero()) else { continue };
            rows.swap(r, p);
            let inv = Self::one() / rows[r][col].clone();
            for v in rows[r].iter_mut() {
                *v = v.clone() * inv.clone();
            }
            for i in 0..6 {
                if i != r && !rows[i][col].is_zero() {
                    let f = rows[i][col].clone();
                    for j in 0..7 {
                        let d = f.clone() * rows[r][j].clone();
                        rows[i][j] = rows[i][j].clone() - d;
                    }
                }
            }
            pivots.push(col);
            r += 1;
        }
        let inconsistent = rows[r..].iter().any(|row| !row[6].is_zero());
        let mut particular: [Self; 6] = std::array::from_fn(|_| Self::zero());
        for (i, &col) in pivots.iter().enumerate() {
            particular[col] = rows[i][6].clone();
        }
        let kernel = (0..6)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v: [Self; 6] = std::array::from_fn(|_| Self::zero());
                v[free] = Self::one();
                for (i, &col) in pivots.iter().enumerate() {
                    v[col] = -rows[i][free].clone();
                }
                v
            })
            .collect();
        StageSolve { particular, kernel, consistency_residual: if inconsistent { 1.0 } else { 0.0 } }
    }
}

pub(crate) fn cross<F: Field>(u: &[F; 3], v: &[F; 3]) -> [F; 3] {
    [
        u[1].clone() * v[2].clone() - u[2].clone() * v[1].clone(),
        u[2].clone() * v[0].clone() - u[0].clone() * v[2].clone(),
        u[0].clone() * v[1].clone() - u[1].clone() * v[0].clone(),
    ]
}

pub(crate) fn dot<F: Field>(u: &[F; 3], v: &[F; 3]) -> F {
    u[0].clone() * v[0].clone() + u[1].clone() * v[1].clone() + u[2].clone() * v[2].clone()
}

pub(crate) fn add3<F: Field>(u: &[F; 3], v: &[F; 3]) -> [F; 3] {
    std::array::from_fn(|i| u[i].clone() + v[i].clone())
}

pub(crate) fn sub3<F: Field>(u: &[F; 3], v: &[F; 3]) -> [F; 3] {
    std::array::from_fn(|i| u[i].clone() - v[i].clone())
}

pub(crate) fn scale3<F: Field>(s: &F, u: &[F; 3]) -> [F; 3] {
    std::array::from_fn(|i| s.clone() * u[i].clone())
}

pub(crate) fn zero3<F: Field>() -> [F; 3] {
    std::array::from_fn(|_| F::zero())
}

pub(crate) fn max_magnitude<F: Field>(v: &[F]) -> f64 {
    v.iter().map(Field::magnitude).fold(0.0, f64::max)
}

/// Determinant by cofactor expansion along the first row.
pub fn determinant<F: Field>(m: &StageMatrix<F>) -> F {
    fn minor<F: Field>(m: &StageMatrix<F>, rows: &[usize], cols: &[usize]) -> F {
        if rows.len() == 1 {
            return m[rows[0]][cols[0]].clone();
        }
        let mut acc = F::zero();
        for (j, &c) in cols.iter().enumerate() {
            let entry = &m[rows[0]][c];
            if entry.is_zero() {
                continue;
            }
            let sub: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = entry.clone() * minor(m, &rows[1..], &sub);
            acc = if j % 2 == 0 { acc + term } else { acc - term };
        }
        acc
    }
    minor(m, &[0, 1, 2, 3, 4, 5], &[0, 1, 2, 3, 4, 5])
}

use nalgebra::Matrix4;

use super::{Curvature, ModelParams, MomentumState};
use crate::{Error, Result};

/// A basis element of the Lie algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisElement {
    B(usize),
    A(usize),
}

impl BasisElement {
    /// Order `B1, B2, B3, A1, A2, A3`.
    pub const ALL: [BasisElement; 6] = [
        BasisElement::B(1),
        BasisElement::B(2),
        BasisElement::B(3),
        BasisElement::A(1),
        BasisElement::A(2),
        BasisElement::A(3),
    ];

    pub fn index(self) -> usize {
        match self {
            BasisElement::B(i) => i - 1,
            BasisElement::A(i) => i + 2,
        }
    }
}

impl std::fmt::Display for BasisElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BasisElement::B(i) => write!(f, "B{i}"),
            BasisElement::A(i) => write!(f, "A{i}"),
        }
    }
}

/// The six 4×4 integer matrices `B1, B2, B3, A1, A2, A3`.
pub fn basis_matrices(k: Curvature) -> [Matrix4<i64>; 6] {
    let k = k.value();
    let mut out = [Matrix4::<i64>::zeros(); 6];
    for i in 0..3 {
        out[i][(0, i + 1)] = -k;
        out[i][(i + 1, 0)] = 1;
    }
    out[3][(2, 3)] = -1;
    out[3][(3, 2)] = 1;
    out[4][(1, 3)] = 1;
    out[4][(3, 1)] = -1;
    out[5][(1, 2)] = -1;
    out[5][(2, 1)] = 1;
    out
}

/// The bracket `[M, N] = NM − MN`.
pub fn bracket<T>(m: &Matrix4<T>, n: &Matrix4<T>) -> Matrix4<T>
where
    T: nalgebra::Scalar
        + num_traits::Zero
        + num_traits::One
        + nalgebra::ClosedAddAssign
        + nalgebra::ClosedSubAssign
        + nalgebra::ClosedMulAssign,
{
    n * m - m * n
}

/// Entry of the bracket table as coefficients over `B1, B2, B3, A1, A2, A3`.
///
/// Rotations close among themselves, rotations act on translations as on
/// vectors, and two translations bracket to `-k` times a rotation.
pub fn table_entry(k: Curvature, lhs: BasisElement, rhs: BasisElement) -> [i64; 6] {
    let k = k.value();
    let mut out = [0i64; 6];
    // Levi-Civita: e_i × e_j = ε_ijl e_l; the table is [X_i, Y_j] = -ε_ijl Z_l.
    let eps = |i: usize, j: usize| -> Option<(usize, i64)> {
        match (i, j) {
            (1, 2) => Some((3, 1)),
            (2, 3) => Some((1, 1)),
            (3, 1) => Some((2, 1)),
            (2, 1) => Some((3, -1)),
            (3, 2) => Some((1, -1)),
            (1, 3) => Some((2, -1)),
            _ => None,
        }
    };
    match (lhs, rhs) {
        (BasisElement::A(i), BasisElement::A(j)) => {
            if let Some((l, s)) = eps(i, j) {
                out[BasisElement::A(l).index()] = -s;
            }
        }
        (BasisElement::A(i), BasisElement::B(j)) | (BasisElement::B(i), BasisElement::A(j)) => {
            if let Some((l, s)) = eps(i, j) {
                out[BasisElement::B(l).index()] = -s;
            }
        }
        (BasisElement::B(i), BasisElement::B(j)) => {
            if let Some((l, s)) = eps(i, j) {
                out[BasisElement::A(l).index()] = -s * k;
            }
        }
    }
    out
}

/// Pairs whose matrix bracket differs from the table; empty when the basis
/// realizes the algebra exactly.
pub fn bracket_table_mismatches(k: Curvature) -> Vec<(BasisElement, BasisElement)> {
    let basis = basis_matrices(k);
    let mut bad = Vec::new();
    for lhs in BasisElement::ALL {
        for rhs in BasisElement::ALL {
            let got = bracket(&basis[lhs.index()], &basis[rhs.index()]);
            let coeffs = table_entry(k, lhs, rhs);
            let mut want = Matrix4::<i64>::zeros();
            for (c, b) in coeffs.iter().zip(basis.iter()) {
                want += b * *c;
            }
            if got != want {
                bad.push((lhs, rhs));
            }
        }
    }
    bad
}

/// The matrix `U` identified with `p` through the trace form.
pub fn lax_matrix(p: &MomentumState, k: Curvature) -> Matrix4<f64> {
    let k = k.as_f64();
    let [h1, h2, h3] = p.h;
    let [m1, m2, m3] = p.big_h;
    Matrix4::new(0.0, h1, h2, h3, -k * h1, 0.0, m3, -m2, -k * h2, -m3, 0.0, m1, -k * h3, m2, -m1, 0.0)
}

/// The differential `dH_p = Σ a_i B_i + Ω_i A_i` as a 4×4 matrix.
pub fn lax_generator(p: &MomentumState, params: &ModelParams) -> Matrix4<f64> {
    let basis = basis_matrices(params.k);
    let om = params.omega(&p.big_h);
    let mut out = Matrix4::<f64>::zeros();
    for i in 0..3 {
        out += basis[i].cast::<f64>() * params.a[i];
        out += basis[i + 3].cast::<f64>() * om[i];
    }
    out
}

/// Max-norm of `dU/dt − [dH_p, U]`, relative to `1 + |U| |dH_p|`.
pub fn lax_residual(p: &MomentumState, params: &ModelParams) -> Result<f64> {
    if params.k == Curvature::Flat {
        return Err(Error::Curvature { expected: "k = ±1", got: 0 });
    }
    let dp = super::vector_field(p, params);
    let du = lax_matrix(&dp, params.k);
    let u = lax_matrix(p, params.k);
    let dh = lax_generator(p, params);
    let rhs = bracket(&dh, &u);
    let scale = 1.0 + u.amax() * dh.amax();
    Ok((du - rhs).amax() / scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_translations_commute() {
        let b = basis_matrices(Curvature::Flat);
        assert_eq!(bracket(&b[0], &b[1]), Matrix4::zeros());
    }

    #[test]
    fn elliptic_translation_bracket() {
        let b = basis_matrices(Curvature::Elliptic);
        assert_eq!(bracket(&b[0], &b[1]), -b[5]);
    }

    #[test]
    fn table_is_antisymmetric() {
        for k in Curvature::ALL {
            for x in BasisElement::ALL {
                for y in BasisElement::ALL {
                    let xy = table_entry(k, x, y);
                    let yx = table_entry(k, y, x);
                    assert!(xy.iter().zip(yx.iter()).all(|(a, b)| a == &-b));
                }
            }
        }
    }
}

use nalgebra::{Matrix3, Matrix4, Vector3, Vector4};
use serde::{Deserialize, Serialize};

use super::{lax_generator, Curvature, ModelParams, MomentumState};
use crate::{Error, Result};

/// An element of E3 (`k = 0`), SO(4) (`k = 1`) or SO(1,3) (`k = -1`) in the
/// 4×4 representation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    pub g: Matrix4<f64>,
    pub k: Curvature,
}

fn lorentz_j() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(-1.0, 1.0, 1.0, 1.0))
}

impl GroupElement {
    pub fn identity(k: Curvature) -> Self {
        GroupElement { g: Matrix4::identity(), k }
    }

    /// Wraps `g` after checking the group constraint to `tol`.
    pub fn new(g: Matrix4<f64>, k: Curvature, tol: f64) -> Result<Self> {
        let out = GroupElement { g, k };
        let defect = out.constraint_defect();
        if !(defect <= tol) {
            return Err(Error::InvalidParams(format!("matrix is not in the group for k = {k} (defect {defect:e})")));
        }
        Ok(out)
    }

    /// Max-norm violation of `gᵀg = I`, `gᵀJg = J`, or (for `k = 0`)
    /// `g[0] = e1ᵀ` together with orthogonality of the rotation block.
    pub fn constraint_defect(&self) -> f64 {
        match self.k {
            Curvature::Elliptic => (self.g.transpose() * self.g - Matrix4::identity()).amax(),
            Curvature::Hyperbolic => {
                let j = lorentz_j();
                (self.g.transpose() * j * self.g - j).amax()
            }
            Curvature::Flat => {
                let r = self.rotation_block();
                let row = (self.g.row(0) - Matrix4::<f64>::identity().row(0)).amax();
                row.max((r.transpose() * r - Matrix3::identity()).amax())
            }
        }
    }

    /// Newton–Schulz steps `g ← g (3I − M)/2` toward the group, with `M` the
    /// metric Gram matrix.
    pub fn project(&mut self) {
        for _ in 0..4 {
            if self.constraint_defect() < 1e-15 {
                break;
            }
            match self.k {
                Curvature::Elliptic => {
                    let m = self.g.transpose() * self.g;
                    self.g = self.g * (Matrix4::identity() * 3.0 - m) * 0.5;
                }
                Curvature::Hyperbolic => {
                    let j = lorentz_j();
                    let m = j * self.g.transpose() * j * self.g;
                    self.g = self.g * (Matrix4::identity() * 3.0 - m) * 0.5;
                }
                Curvature::Flat => {
                    let r = self.rotation_block();
                    let r = r * (Matrix3::identity() * 3.0 - r.transpose() * r) * 0.5;
                    self.g.fixed_view_mut::<3, 3>(1, 1).copy_from(&r);
                    self.g.set_row(0, &Matrix4::<f64>::identity().row(0));
                }
            }
        }
    }

    /// The elastic curve point `g e1`.
    pub fn elastic_point(&self) -> Vector4<f64> {
        self.g.column(0).into_owned()
    }

    /// The lower-right 3×3 block.
    pub fn rotation_block(&self) -> Matrix3<f64> {
        self.g.fixed_view::<3, 3>(1, 1).into_owned()
    }
}

/// Right-hand side of `dg/dt = g dH_p`.
pub fn frame_generator(g: &Matrix4<f64>, p: &MomentumState, params: &ModelParams) -> Matrix4<f64> {
    g * lax_generator(p, params)
}

/// `F = R ĥ` for `k = 0`; `F1² + F2² + F3² = ‖ĥ‖²`.
pub fn euclidean_right_integrals(p: &MomentumState, g: &GroupElement) -> Result<[f64; 3]> {
    if g.k != Curvature::Flat {
        return Err(Error::Curvature { expected: "k = 0", got: g.k.value() });
    }
    let f = g.rotation_block() * Vector3::from(p.h);
    Ok([f[0], f[1], f[2]])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_frame_gives_h() {
        let p = MomentumState::new([1.0, -2.0, 0.5], [0.0; 3]);
        let f = euclidean_right_integrals(&p, &GroupElement::identity(Curvature::Flat)).unwrap();
        assert_eq!(f, p.h);
    }

    #[test]
    fn projection_repairs_perturbation() {
        for k in Curvature::ALL {
            let mut g = GroupElement::identity(k);
            g.g[(1, 2)] += 1e-6;
            g.g[(0, 1)] += if k == Curvature::Flat { 0.0 } else { 1e-6 };
            g.project();
            assert!(g.constraint_defect() < 1e-14, "k = {k}");
        }
    }
}

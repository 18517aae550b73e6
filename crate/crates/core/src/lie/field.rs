use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use super::{dot, Inertia, ModelParams, MomentumState, Scalar};
use crate::{Error, Result};

/// `½ H·Ω + a·h`; for finite inertia this is `½ Σ H_i²/c_i + a·h`.
pub fn hamiltonian<T: Scalar>(p: &MomentumState<T>, params: &ModelParams) -> T {
    let om = params.omega(&p.big_h);
    let a = params.a.map(T::from);
    T::from(0.5) * dot(p.big_h, om) + dot(a, p.h)
}

/// Time derivative of `(h, H)`:
/// `dH/dt = H × Ω + h × a`, `dh/dt = h × Ω + k H × a`.
pub fn vector_field<T: Scalar>(p: &MomentumState<T>, params: &ModelParams) -> MomentumState<T> {
    let om = params.omega(&p.big_h);
    let a = params.a.map(T::from);
    let k = T::from(params.k.as_f64());
    let [hh1, hh2, hh3] = p.big_h;
    let [h1, h2, h3] = p.h;
    let [o1, o2, o3] = om;
    let [a1, a2, a3] = a;
    let big_h = [
        hh2 * o3 - hh3 * o2 + h2 * a3 - h3 * a2,
        hh3 * o1 - hh1 * o3 + h3 * a1 - h1 * a3,
        hh1 * o2 - hh2 * o1 + h1 * a2 - h2 * a1,
    ];
    let h = [
        h2 * o3 - h3 * o2 + k * (hh2 * a3 - hh3 * a2),
        h3 * o1 - h1 * o3 + k * (hh3 * a1 - hh1 * a3),
        h1 * o2 - h2 * o1 + k * (hh1 * a2 - hh2 * a1),
    ];
    MomentumState { h, big_h }
}

fn hat(v: [f64; 3]) -> Matrix3<f64> {
    Vector3::from(v).cross_matrix()
}

fn vee(m: &Matrix3<f64>) -> [f64; 3] {
    [m[(2, 1)], m[(0, 2)], m[(1, 0)]]
}

/// The same field assembled from commutators of antisymmetric 3×3 matrices,
/// `dĤ = [Ω̂, Ĥ] + [â, ĥ]`, `dĥ = [Ω̂, ĥ] + k [â, Ĥ]`, with `[M, N] = NM − MN`.
pub fn vector_field_commutator(p: &MomentumState, params: &ModelParams) -> MomentumState {
    let br = |m: &Matrix3<f64>, n: &Matrix3<f64>| n * m - m * n;
    let om = hat(params.omega(&p.big_h));
    let a = hat(params.a);
    let hh = hat(p.big_h);
    let h = hat(p.h);
    let d_big_h = br(&om, &hh) + br(&a, &h);
    let d_h = br(&om, &h) + br(&a, &hh) * params.k.as_f64();
    MomentumState { h: vee(&d_h), big_h: vee(&d_big_h) }
}

/// The `m = 0` limiting system: `Ω = (0, 0, H3)` with `a3 = 0`.
pub fn limiting_m0_field(p: &MomentumState, params: &ModelParams) -> Result<MomentumState> {
    check_m0(params)?;
    Ok(vector_field(p, params))
}

fn check_m0(params: &ModelParams) -> Result<()> {
    if params.inertia != Inertia::AxialLimit {
        return Err(Error::WrongMode { expected: "axial-limit (m = 0)" });
    }
    if params.a[2] != 0.0 {
        return Err(Error::InvalidParams("the m = 0 system needs a3 = 0".into()));
    }
    Ok(())
}

/// Polar form `w − k a = R e^{iθ}` of the `m = 0` system, returned as `(R, θ)`.
/// `R` is conserved and `dθ/dt = −H3`.
pub fn pendulum_angle(p: &MomentumState, params: &ModelParams) -> Result<(f64, f64)> {
    check_m0(params)?;
    let w = Complex64::new(p.h[0], p.h[1]);
    let u = w - params.forcing() * params.k.as_f64();
    Ok((u.norm(), u.arg()))
}

/// Right-hand side of the pendulum relation
/// `½ θ̇² = H − k|a|² − R (a1 cos θ + a2 sin θ)`.
pub fn pendulum_energy(energy: f64, radius: f64, theta: f64, params: &ModelParams) -> f64 {
    let [a1, a2, _] = params.a;
    let k = params.k.as_f64();
    energy - k * (a1 * a1 + a2 * a2) - radius * (a1 * theta.cos() + a2 * theta.sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::Curvature;

    #[test]
    fn spec_energy_value() {
        let params = ModelParams::kowalewski(1.0, 0.0, Curvature::Flat).unwrap();
        let p = MomentumState::new([1.0, 0.0, 0.0], [2.0, 0.0, 0.0]);
        assert_eq!(hamiltonian(&p, &params), 2.0);
    }

    #[test]
    fn parallel_momentum_is_fixed() {
        let params = ModelParams::new([1.0, 2.0, 3.0], [0.0; 3], Curvature::Elliptic).unwrap();
        let p = MomentumState::new([0.0; 3], [1.5, 0.0, 0.0]);
        assert_eq!(vector_field(&p, &params), MomentumState::zero());
    }
}

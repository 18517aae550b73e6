//! The `c1 = c2 → ∞` limit: `|w − ka|` is conserved and the polar angle
//! obeys a pendulum equation.

use kowalewski::lie::{
    hamiltonian, integrate, pendulum_angle, pendulum_energy, Curvature, Inertia, IntegrateOptions, ModelParams,
    MomentumState,
};

/// Largest pendulum residual `|½ θ̇² − (H − k|a|² − R(a1 cos θ + a2 sin θ))|`.
pub fn run_example() -> f64 {
    let p0 = MomentumState::new([0.6, -0.2, 0.3], [0.1, 0.4, 0.9]);
    let mut worst = 0.0f64;
    for k in Curvature::ALL {
        let params = ModelParams::limit(Inertia::AxialLimit, [0.8, 0.6, 0.0], k).unwrap();
        let traj = integrate(&p0, &params, (0.0, 10.0), &IntegrateOptions::default(), None).unwrap();
        let (r0, _) = pendulum_angle(&p0, &params).unwrap();
        let energy = hamiltonian(&p0, &params);
        let mut radius_drift = 0.0f64;
        let mut residual = 0.0f64;
        for p in &traj.states {
            let (r, theta) = pendulum_angle(p, &params).unwrap();
            radius_drift = radius_drift.max((r - r0).abs());
            let lhs = 0.5 * p.big_h[2] * p.big_h[2];
            residual = residual.max((lhs - pendulum_energy(energy, r, theta, &params)).abs());
        }
        println!("k={k:>2}  R={r0:.6}  R drift {radius_drift:.1e}  pendulum residual {residual:.1e}");
        worst = worst.max(residual);
    }
    worst
}

fn main() {
    run_example();
}

//! Separating variables along Kowalewski trajectories and the quintic
//! quadrature they satisfy.

use kowalewski::lie::{integrate, Curvature, IntegrateOptions, ModelParams, MomentumState};
use kowalewski::quadrature::{quadrature_residual, QuadratureOptions};

/// Largest quadrature residual over the three curvatures.
pub fn run_example() -> f64 {
    let p0 = MomentumState::new([0.3, -0.5, 0.4], [0.8, 0.2, -0.7]);
    let opts = IntegrateOptions { sample_dt: 0.001, ..IntegrateOptions::default() };
    let mut worst = 0.0f64;
    for k in Curvature::ALL {
        let params = ModelParams::kowalewski(1.0, 0.0, k).unwrap();
        let traj = integrate(&p0, &params, (0.0, 5.0), &opts, None).unwrap();
        let rep = quadrature_residual(&traj, &QuadratureOptions::default()).unwrap();
        let c = rep.constants;
        println!("k={k:>2}  k1={:.4} k2={:.4} g2={:.4} g3={:.4}", c.k1, c.k2, c.g2, c.g3);
        println!(
            "       residuals {:.1e} {:.1e} sum {:.1e}  ρ per segment {:?}  seams {}  excluded {}/{}",
            rep.max_residual_sq[0],
            rep.max_residual_sq[1],
            rep.max_residual_sum,
            rep.rho,
            rep.seam_count,
            rep.excluded_samples,
            rep.excluded_samples + rep.evaluated_samples
        );
        worst = worst.max(rep.max_residual());
    }
    worst
}

fn main() {
    println!("worst {:.2e}", run_example());
}

//! Integrate the classical cases on all three groups and report how well the
//! conserved quantities hold.

use kowalewski::lie::{integrate, Curvature, IntegrateOptions, ModelParams, MomentumState};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Largest relative drift over every case and curvature.
pub fn run_example() -> f64 {
    let cases: [(&str, [f64; 3], [f64; 3]); 4] = [
        ("euler", [1.0, 2.0, 3.0], [0.0, 0.0, 0.0]),
        ("lagrange", [2.0, 2.0, 1.0], [0.0, 0.0, 1.0]),
        ("spherical", [1.0, 1.0, 1.0], [0.6, 0.3, 0.8]),
        ("kowalewski", [2.0, 2.0, 1.0], [1.0, 0.0, 0.0]),
    ];
    let mut worst = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (name, c, a) in cases {
        for k in Curvature::ALL {
            let params = ModelParams::new(c, a, k).unwrap();
            let p0 = MomentumState::random(&mut rng, 0.8);
            let traj = integrate(&p0, &params, (0.0, 10.0), &IntegrateOptions::default(), None).unwrap();
            let drift = traj.drift();
            println!("{name:>10} k={k:>2}  steps={:>5}  max drift {:.2e}", traj.stats.accepted, drift.max());
            for (q, d) in &drift.drifts {
                println!("{:>14} {d:.2e}", q);
            }
            worst = worst.max(drift.max());
        }
    }
    worst
}

fn main() {
    let worst = run_example();
    println!("worst drift {worst:.2e}");
}

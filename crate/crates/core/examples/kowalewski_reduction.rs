//! Rescale a Kowalewski trajectory and check the relations that cut out its
//! invariant variety.

use kowalewski::lie::{integrate, Curvature, IntegrateOptions, ModelParams, MomentumState};
use kowalewski::reduction::{quartic_p, K2Convention, ReductionReport, Rescaling};

/// Largest residual over the variety, extremal-curve, ζ and recovery relations.
pub fn run_example() -> f64 {
    let p0 = MomentumState::new([0.3, -0.5, 0.4], [0.8, 0.2, -0.7]);
    let mut worst = 0.0f64;
    for k in Curvature::ALL {
        let params = ModelParams::kowalewski(0.8, 0.6, k).unwrap();
        let traj = integrate(&p0, &params, (0.0, 10.0), &IntegrateOptions::default(), None).unwrap();
        let rep = ReductionReport::from_trajectory(&traj, K2Convention::Derived).unwrap();
        let c = rep.constants;
        let p = quartic_p(&Rescaling::new(&params, K2Convention::Derived).unwrap().constants(&p0));
        println!(
            "k={k:>2}  H={:.4} K2={:.4} K3={:.4} K4²={:.4}  g2={:.4} g3={:.4}",
            c.h,
            c.k2,
            c.k3,
            c.k4sq,
            p.weierstrass().g2.re,
            p.weierstrass().g3.re
        );
        println!(
            "       variety {:.1e}  ode {:.1e}  zeta {:.1e}  recovery {:.1e}  q-root {:.1e}",
            rep.variety.max, rep.extremal_ode.max, rep.zeta.max, rep.recovery.max, rep.q_physical.max
        );
        worst = worst.max(rep.variety.max).max(rep.extremal_ode.max).max(rep.zeta.max).max(rep.recovery.max);
    }
    worst
}

fn main() {
    println!("worst {:.2e}", run_example());
}

//! Reconstruct the moving frame `g(t)` and the elastic curve `g(t) e1`.

use kowalewski::lie::{
    euclidean_right_integrals, integrate, Curvature, GroupElement, IntegrateOptions, ModelParams, MomentumState,
};

pub struct FrameSummary {
    pub max_defect: f64,
    /// Drift of `F = R ĥ` on E3.
    pub f_drift: f64,
    /// `max |F1² + F2² + F3² − ‖ĥ‖²|` on E3.
    pub f_norm_error: f64,
}

pub fn run_example() -> FrameSummary {
    let p0 = MomentumState::new([0.4, -0.3, 0.2], [0.5, 0.9, -0.6]);
    let mut max_defect = 0.0f64;
    let mut f_drift = 0.0;
    let mut f_norm_error = 0.0f64;
    for k in Curvature::ALL {
        let params = ModelParams::kowalewski(1.0, 0.0, k).unwrap();
        let g0 = GroupElement::identity(k);
        let traj = integrate(&p0, &params, (0.0, 5.0), &IntegrateOptions::default(), Some(&g0)).unwrap();
        let defect = traj.max_frame_defect().unwrap();
        max_defect = max_defect.max(defect);
        let curve = traj.elastic_curve().unwrap();
        let end = curve.last().unwrap();
        println!(
            "k={k:>2}  frame defect {defect:.2e}  curve end ({:.4}, {:.4}, {:.4}, {:.4})",
            end[0], end[1], end[2], end[3]
        );
        if k == Curvature::Flat {
            f_drift = ["F1", "F2", "F3"].iter().map(|n| traj.drift().get(n).unwrap()).fold(0.0, f64::max);
            for (p, g) in traj.states.iter().zip(traj.frames.as_ref().unwrap()) {
                let f = euclidean_right_integrals(p, g).unwrap();
                let lhs: f64 = f.iter().map(|x| x * x).sum();
                let rhs: f64 = p.h.iter().map(|x| x * x).sum();
                f_norm_error = f_norm_error.max((lhs - rhs).abs());
            }
            println!("       F drift {f_drift:.2e}  |F|² − |h|² {f_norm_error:.2e}");
        }
    }
    FrameSummary { max_defect, f_drift, f_norm_error }
}

fn main() {
    run_example();
}

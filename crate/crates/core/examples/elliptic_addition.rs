//! Euler's solutions and Weil's addition on the lemniscatic quartic.

use kowalewski::elliptic::{
    differential_relations_check, euler_solution_check, gamma_points, theta_reconstruction, weil_add, weil_sub,
    GammaPoint, QuarticCurve, QuarticPoint,
};
use kowalewski::Complex64;

/// Largest closure residual of the addition maps.
pub fn run_example() -> f64 {
    let curve = QuarticCurve::lemniscate();
    let w = curve.weierstrass();
    println!("P(x) = 1 − x⁴  g2 = {}  g3 = {}", w.g2, w.g3);

    let m = QuarticPoint::principal(&curve, Complex64::new(0.3, 0.2));
    let n = QuarticPoint::principal(&curve, Complex64::new(-0.4, 0.5));
    let [tp, tm] = theta_reconstruction(&curve, &m, &n).unwrap();
    println!("θ± = {tp:.6}, {tm:.6}");

    let (o, o2) = gamma_points(&curve, &m, &n).unwrap();
    let mut closure = 0.0f64;
    for (g, name) in [(o, "O"), (o2, "O′")] {
        let a = weil_add(&curve, &g, &m).unwrap();
        let s = weil_sub(&curve, &g, &m).unwrap();
        closure = closure.max(a.residual(&curve)).max(s.residual(&curve));
        println!("{name}: on Γ to {:.1e}; M + {name} = {:.6}", g.residual(&w), a.x);
    }
    let back = weil_add(&curve, &o, &m).unwrap();
    println!("M + O recovers N to {:.1e}", (back.x - n.x).norm());

    let rep = differential_relations_check(&curve, &m, &n, 1e-3).unwrap();
    println!(
        "differential relations: max error {:.1e}, h-halving ratios {:?}",
        rep.max_error(),
        rep.ratios.map(|r| (r * 100.0).round() / 100.0)
    );

    let euler = euler_solution_check(&curve, Complex64::new(0.7, -0.1), Complex64::new(0.2, 0.3)).unwrap();
    for b in &euler.branches {
        println!("Euler branch σ={:+}: slope error {:.1e}", b.sigma, b.sqrt_ratio_residual);
    }
    let xi = GammaPoint::principal(&w, Complex64::new(0.5, 0.25));
    println!("2(ξ + C) with ξ = 0.5+0.25i: θ = {}", curve.theta_of_xi(xi.finite().unwrap().0));
    closure
}

fn main() {
    println!("closure {:.2e}", run_example());
}

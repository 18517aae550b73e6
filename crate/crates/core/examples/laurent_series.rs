//! Truncated Laurent series in exact Gaussian-rational arithmetic: residual
//! decay near the pole and the constants of motion read off the series.

use kowalewski::lie::Curvature;
use kowalewski::painleve::{
    laurent_expand, leading_order_solutions_with, slope_report, ExactComplex, Family, Field, FreeConstants, RatioParams,
};
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;

fn rational(n: i64, d: i64) -> ExactComplex {
    Complex::new(BigRational::new(BigInt::from(n), BigInt::from(d)), BigRational::from_integer(BigInt::from(0)))
}

/// Log–log residual slope of the order-8 series.
pub fn run_example() -> f64 {
    let p = RatioParams::kowalewski(1.0, Curvature::Elliptic);
    let q0 = rational(2, 3) + ExactComplex::i() * rational(-1, 4);
    let lo = leading_order_solutions_with(&p, q0).unwrap().into_iter().find(|lo| lo.family == Family::B).unwrap();
    let sol = laurent_expand(&p, &lo, &FreeConstants::Seeded(11), 8).unwrap();
    println!("branch {} resonances {:?}", lo.branch(), sol.resonances);
    let times: Vec<ExactComplex> = [1000, 500, 200, 100, 50, 20, 10].iter().map(|&d| rational(1, d)).collect();
    let rep = slope_report(&sol, &times);
    for (t, r) in rep.times.iter().zip(&rep.residuals) {
        println!("t = {t:<6} residual {r:.3e}");
    }
    println!("slope {:.3}", rep.slope);
    let inv = sol.invariants().unwrap();
    let [h, g, j] = inv.values();
    println!(
        "H = {:.6}  G = {:.6}  J = {:.6}  (negative orders vanish: {})",
        h.magnitude(),
        g.magnitude(),
        j.magnitude(),
        inv.negative_order_defect() == 0.0
    );
    rep.slope
}

fn main() {
    run_example();
}

use kowalewski::elliptic::*;
use kowalewski::Complex64;
use proptest::prelude::*;

fn cplx() -> impl Strategy<Value = Complex64> {
    (-1.5f64..1.5, -1.5f64..1.5).prop_map(|(re, im)| Complex64::new(re, im))
}

fn quartic() -> impl Strategy<Value = QuarticCurve> {
    prop::array::uniform5(cplx()).prop_filter_map("nonzero", |c| QuarticCurve::new(c).ok())
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn lemniscate_p_theta() {
    let q = QuarticCurve::lemniscate();
    for t in [c(0.5, 0.0), c(-1.0, 2.0), c(0.3, -0.4)] {
        assert!((q.p_theta(t) - (t * t * t * 2.0 + t * 2.0)).norm() < 1e-14);
    }
}

#[test]
fn lemniscate_q_diag() {
    let q = QuarticCurve::lemniscate();
    let x = c(0.7, -0.2);
    assert!((q.q_diag(x) + x * x * 4.0).norm() < 1e-14);
    assert!((q.q_diag_from_derivatives(x) + x * x * 4.0).norm() < 1e-14);
}

#[test]
fn constant_quartic_has_trivial_invariants() {
    let q = QuarticCurve::from_real([2.5, 0.0, 0.0, 0.0, 0.0]).unwrap();
    let w = q.weierstrass();
    assert_eq!((w.g2, w.g3), (c(0.0, 0.0), c(0.0, 0.0)));
}

#[test]
fn theta_zero_pencil_is_companion() {
    let q = QuarticCurve::new([c(1.0, 0.2), c(-0.3, 0.1), c(0.4, 0.0), c(0.2, -0.5), c(0.9, 0.3)]).unwrap();
    let fam = q.theta_family(c(0.0, 0.0));
    let (x, y) = (c(0.3, 0.4), c(-1.2, 0.1));
    assert_eq!(fam.phi(x, y), q.r_hat(x, y));
}

#[test]
fn lemniscate_euler_slope() {
    let q = QuarticCurve::lemniscate();
    let rep = euler_solution_check(&q, c(1.0, 0.0), c(0.3, 0.0)).unwrap();
    assert!(!rep.coincident);
    for b in &rep.branches {
        assert!(b.sqrt_ratio_residual <= 1e-8, "{b:?}");
        assert!((b.rho.norm() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn root_of_p_gives_coincident_branches() {
    // p(θ) = 2θ³ + 2θ vanishes at θ = i for the lemniscate.
    let q = QuarticCurve::lemniscate();
    let rep = euler_solution_check(&q, c(0.0, 1.0), c(0.3, 0.2)).unwrap();
    assert!(rep.coincident);
    assert!((rep.branches[0].y - rep.branches[1].y).norm() < 1e-6);
}

#[test]
fn b_theta_constant_term_is_pinned() {
    // At x = 0, b_θ(0) = 2Bθ + 2(AD − 3BC).
    let q = QuarticCurve::new([c(1.0, 0.5), c(0.7, -0.2), c(0.3, 0.3), c(-0.4, 0.8), c(1.1, 0.0)]).unwrap();
    let t = c(0.6, -0.9);
    let want = q.b * t * 2.0 + (q.a * q.d - q.b * q.c * 3.0) * 2.0;
    assert!((q.theta_family(t).b(c(0.0, 0.0)) - want).norm() < 1e-14);
}

#[test]
fn weil_rejects_infinity_and_two_torsion() {
    let q = QuarticCurve::lemniscate();
    let m = QuarticPoint::principal(&q, c(0.2, 0.1));
    assert!(weil_add(&q, &GammaPoint::Infinity, &m).is_err());
    let torsion = GammaPoint::Finite { xi: c(0.0, 0.0), eta: c(0.0, 0.0) };
    assert!(weil_sub(&q, &torsion, &m).is_err());
}

#[test]
fn coincident_points_are_flagged() {
    let q = QuarticCurve::lemniscate();
    let m = QuarticPoint::principal(&q, c(0.2, 0.1));
    assert!(differential_relations_check(&q, &m, &m, 1e-3).is_err());
}

#[test]
fn theta_minus_tends_to_limit() {
    let q = QuarticCurve::new([c(1.0, 0.5), c(0.7, -0.2), c(0.3, 0.3), c(-0.4, 0.8), c(1.1, 0.0)]).unwrap();
    let m = QuarticPoint::principal(&q, c(0.4, -0.3));
    let n = m.moved_to(&q, m.x + c(1e-7, 0.0));
    let th = theta_reconstruction(&q, &m, &n).unwrap();
    let want = theta_limit(&q, m.x);
    assert!((th[1] - want).norm() <= 1e-6 * (1.0 + want.norm()));
}

proptest! {
    #[test]
    fn companion_identity(q in quartic(), x in cplx(), y in cplx()) {
        prop_assert!(q.companion_residual(x, y) <= 1e-10);
    }

    #[test]
    fn forms_are_symmetric(q in quartic(), t in cplx(), x in cplx(), y in cplx()) {
        let fam = q.theta_family(t);
        prop_assert!(relative_residual(q.r(x, y), q.r(y, x)) < 1e-13);
        prop_assert!(relative_residual(q.r_hat(x, y), q.r_hat(y, x)) < 1e-13);
        prop_assert!(relative_residual(fam.phi(x, y), fam.phi(y, x)) < 1e-13);
    }

    #[test]
    fn pencil_coefficients(q in quartic(), t in cplx(), x in cplx(), y in cplx()) {
        let fam = q.theta_family(t);
        let poly = fam.a(x) * y * y + fam.b(x) * y * 2.0 + fam.c(x);
        prop_assert!(relative_residual(poly, fam.phi(x, y)) <= 1e-12);
        prop_assert!(fam.pencil_residual(x, y) <= 1e-10);
    }

    #[test]
    fn discriminant_factorizes(q in quartic(), t in cplx(), x in cplx()) {
        prop_assert!(q.theta_family(t).discriminant_residual(x) <= 1e-10);
    }

    #[test]
    fn weierstrass_consistency(q in quartic(), xi in cplx()) {
        let w = q.weierstrass();
        let lhs = q.p_theta(q.theta_of_xi(xi));
        prop_assert!(relative_residual(lhs, w.rhs(xi) * 4.0) <= 1e-10);
    }

    #[test]
    fn euler_slopes_on_random_quartics(q in quartic(), t in cplx(), x0 in cplx()) {
        if let Ok(rep) = euler_solution_check(&q, t, x0) {
            prop_assume!(!rep.coincident);
            for b in &rep.branches {
                prop_assert!(b.sqrt_ratio_residual <= 1e-8, "{b:?}");
            }
        }
    }

    #[test]
    fn q_diag_two_ways(q in quartic(), x in cplx()) {
        prop_assert!(relative_residual(q.q_diag(x), q.q_diag_from_derivatives(x)) <= 1e-11);
    }

    #[test]
    fn weil_closure_and_round_trip(q in quartic(), xi in cplx(), x in cplx()) {
        let w = q.weierstrass();
        let p = GammaPoint::principal(&w, xi);
        let m = QuarticPoint::principal(&q, x);
        let t0 = q.theta_of_xi(xi);
        if let (Ok(n1), Ok(n2)) = (weil_add(&q, &p, &m), weil_sub(&q, &p, &m)) {
            prop_assert!(n1.residual(&q) <= 1e-9);
            prop_assert!(n2.residual(&q) <= 1e-9);
            let scale = 1.0 + t0.norm();
            if let Ok(th) = theta_reconstruction(&q, &m, &n1) {
                prop_assert!((th[0] - t0).norm() <= 1e-7 * scale);
            }
            if let Ok(th) = theta_reconstruction(&q, &m, &n2) {
                prop_assert!((th[1] - t0).norm() <= 1e-7 * scale);
            }
        }
    }

    #[test]
    fn theta_reconstruction_annihilates_pencil(q in quartic(), a in cplx(), b in cplx()) {
        let m = QuarticPoint::principal(&q, a);
        let n = QuarticPoint::principal(&q, b);
        prop_assume!((a - b).norm() > 1e-2);
        for t in theta_reconstruction(&q, &m, &n).unwrap() {
            let fam = q.theta_family(t);
            let scale = (a - b).norm_sqr() * t.norm_sqr() + q.r(a, b).norm() * t.norm() + q.r_hat(a, b).norm();
            prop_assert!(fam.phi(a, b).norm() <= 1e-10 * (1.0 + scale));
        }
    }
}

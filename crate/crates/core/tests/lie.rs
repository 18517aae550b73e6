use kowalewski::lie::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn state() -> impl Strategy<Value = MomentumState> {
    prop::array::uniform6(-3.0f64..3.0).prop_map(|v| MomentumState::from_slice(&v))
}

fn curvature() -> impl Strategy<Value = Curvature> {
    prop::sample::select(Curvature::ALL.to_vec())
}

fn generic_params() -> impl Strategy<Value = ModelParams> {
    (prop::array::uniform3(0.3f64..3.0), prop::array::uniform3(-2.0f64..2.0), curvature())
        .prop_map(|(c, a, k)| ModelParams::new(c, a, k).unwrap())
}

#[test]
fn bracket_table_all_curvatures() {
    for k in Curvature::ALL {
        assert!(bracket_table_mismatches(k).is_empty(), "k = {k}");
    }
}

#[test]
fn elliptic_b1_b2_is_minus_a3() {
    let b = basis_matrices(Curvature::Elliptic);
    assert_eq!(bracket(&b[0], &b[1]), -b[5]);
    assert_eq!(table_entry(Curvature::Elliptic, BasisElement::B(1), BasisElement::B(2)), [0, 0, 0, 0, 0, -1]);
}

#[test]
fn rotation_self_bracket_vanishes() {
    for k in Curvature::ALL {
        let b = basis_matrices(k);
        assert_eq!(bracket(&b[3], &b[3]), nalgebra::Matrix4::zeros());
    }
}

#[test]
fn kowalewski_field_example() {
    let params = ModelParams::kowalewski(1.0, 0.0, Curvature::Flat).unwrap();
    let p = MomentumState::new([0.0, 0.0, 1.0], [0.0; 3]);
    let d = vector_field(&p, &params);
    assert_eq!(d.big_h, [0.0, 1.0, 0.0]);
    assert_eq!(vector_field_commutator(&p, &params), d);
}

#[test]
fn zero_state_is_stationary() {
    let params = ModelParams::kowalewski(1.0, 0.0, Curvature::Elliptic).unwrap();
    let traj = integrate(&MomentumState::zero(), &params, (0.0, 1.0), &IntegrateOptions::default(), None).unwrap();
    assert!(traj.states.iter().all(|s| *s == MomentumState::zero()));
}

#[test]
fn euler_case_conserves_momentum_norm() {
    let params = ModelParams::new([1.0, 2.0, 3.0], [0.0; 3], Curvature::Elliptic).unwrap();
    let p0 = MomentumState::new([0.3, -0.2, 0.5], [1.0, 0.4, -0.7]);
    let traj = integrate(&p0, &params, (0.0, 20.0), &IntegrateOptions::default(), None).unwrap();
    assert!(traj.drift().get("H_sq").unwrap() < 1e-8);
}

#[test]
fn spherical_case_conserves_h_dot_a() {
    let params = ModelParams::new([1.5; 3], [0.3, -0.5, 0.8], Curvature::Hyperbolic).unwrap();
    let p0 = MomentumState::new([0.3, -0.2, 0.5], [1.0, 0.4, -0.7]);
    let traj = integrate(&p0, &params, (0.0, 20.0), &IntegrateOptions::default(), None).unwrap();
    assert!(traj.drift().get("H_dot_a").unwrap() < 1e-8);
}

#[test]
fn frame_constraint_holds_for_each_curvature() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in Curvature::ALL {
        let params = ModelParams::kowalewski(1.0, 0.0, k).unwrap();
        let p0 = MomentumState::random(&mut rng, 0.7);
        let traj = integrate(&p0, &params, (0.0, 20.0), &IntegrateOptions::default(), Some(&GroupElement::identity(k)))
            .unwrap();
        assert!(traj.max_frame_defect().unwrap() < 1e-7, "k = {k}");
    }
}

#[test]
fn m0_zero_modulus_is_preserved() {
    let params = ModelParams::limit(Inertia::AxialLimit, [0.7, 0.4, 0.0], Curvature::Elliptic).unwrap();
    let p = MomentumState::new([0.7, 0.4, 0.3], [0.2, -0.1, 0.9]);
    let d = limiting_m0_field(&p, &params).unwrap();
    assert!(d.h[0].abs() < 1e-15 && d.h[1].abs() < 1e-15);
}

#[test]
fn m0_field_rejects_finite_inertia() {
    let params = ModelParams::kowalewski(1.0, 0.0, Curvature::Flat).unwrap();
    assert!(limiting_m0_field(&MomentumState::zero(), &params).is_err());
}

#[test]
fn lax_rejects_flat() {
    let params = ModelParams::kowalewski(1.0, 0.0, Curvature::Flat).unwrap();
    assert!(lax_residual(&MomentumState::zero(), &params).is_err());
}

#[test]
fn csv_has_header_and_rows() {
    let params = ModelParams::kowalewski(1.0, 0.0, Curvature::Flat).unwrap();
    let p0 = MomentumState::new([0.1, 0.2, 0.3], [0.4, 0.5, 0.6]);
    let traj = integrate(
        &p0,
        &params,
        (0.0, 0.1),
        &IntegrateOptions { sample_dt: 0.05, ..Default::default() },
        Some(&GroupElement::identity(Curvature::Flat)),
    )
    .unwrap();
    let csv = traj.to_csv();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].ends_with("H,K2,K3,K4sq,F1,F2,F3"));
    let cols = lines[0].split(',').count();
    assert!(lines[1..].iter().all(|l| l.split(',').count() == cols));
}

proptest! {
    #[test]
    fn commutator_form_matches(p in state(), params in generic_params()) {
        let a = vector_field(&p, &params).to_array();
        let b = vector_field_commutator(&p, &params).to_array();
        for (x, y) in a.iter().zip(b.iter()) {
            prop_assert!((x - y).abs() <= 1e-13 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn hamiltonian_matches_term_sum(p in state(), params in generic_params()) {
        let c = params.finite_inertia().unwrap();
        let mut want = 0.0;
        for i in 0..3 {
            want += 0.5 * p.big_h[i] * p.big_h[i] / c[i] + params.a[i] * p.h[i];
        }
        let got = hamiltonian(&p, &params);
        prop_assert!((got - want).abs() <= 1e-15 * (1.0 + want.abs()) * 8.0);
    }

    #[test]
    fn lax_identity(p in state(), params in generic_params()) {
        prop_assume!(params.k != Curvature::Flat);
        prop_assert!(lax_residual(&p, &params).unwrap() <= 1e-12);
    }

    #[test]
    fn q_derivative(p in state(), k in curvature(), a1 in -2.0f64..2.0, a2 in -2.0f64..2.0) {
        let params = ModelParams::kowalewski(a1, a2, k).unwrap();
        prop_assert!(kowalewski_q_derivative_check(&p, &params).unwrap() <= 1e-12);
    }

    #[test]
    fn scaled_kowalewski_q(p in state(), k in curvature(), c3 in 0.3f64..3.0) {
        let params = ModelParams::new([2.0 * c3, 2.0 * c3, c3], [0.8, -0.3, 0.0], k).unwrap();
        prop_assert!(kowalewski_q_derivative_check(&p, &params).unwrap() <= 1e-12);
    }

    #[test]
    fn euclidean_integrals_norm(p in state(), angles in prop::array::uniform3(-3.0f64..3.0)) {
        let r = nalgebra::Rotation3::from_euler_angles(angles[0], angles[1], angles[2]);
        let mut g = nalgebra::Matrix4::identity();
        g.fixed_view_mut::<3, 3>(1, 1).copy_from(r.matrix());
        let g = GroupElement::new(g, Curvature::Flat, 1e-12).unwrap();
        let f = euclidean_right_integrals(&p, &g).unwrap();
        let lhs = f[0] * f[0] + f[1] * f[1] + f[2] * f[2];
        let rhs = p.h[0] * p.h[0] + p.h[1] * p.h[1] + p.h[2] * p.h[2];
        prop_assert!((lhs - rhs).abs() <= 1e-13 * (1.0 + rhs));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn kowalewski_integrals_conserved(seed in any::<u64>(), k in curvature()) {
        let params = ModelParams::kowalewski(1.0, 0.0, k).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p0 = MomentumState::random(&mut rng, 1.0);
        let traj = integrate(&p0, &params, (0.0, 20.0), &IntegrateOptions::default(), None).unwrap();
        prop_assert!(traj.drift().max() <= 1e-7, "{:?}", traj.drift());
    }
}

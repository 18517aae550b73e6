#[path = "../examples/elliptic_addition.rs"]
#[allow(dead_code)]
mod elliptic_addition;
#[path = "../examples/frame_reconstruction.rs"]
#[allow(dead_code)]
mod frame_reconstruction;
#[path = "../examples/heavy_top_simulation.rs"]
#[allow(dead_code)]
mod heavy_top_simulation;
#[path = "../examples/hyperelliptic_quadrature.rs"]
#[allow(dead_code)]
mod hyperelliptic_quadrature;
#[path = "../examples/kowalewski_reduction.rs"]
#[allow(dead_code)]
mod kowalewski_reduction;
#[path = "../examples/laurent_series.rs"]
#[allow(dead_code)]
mod laurent_series;
#[path = "../examples/m0_pendulum.rs"]
#[allow(dead_code)]
mod m0_pendulum;
#[path = "../examples/painleve_classification.rs"]
#[allow(dead_code)]
mod painleve_classification;

#[test]
fn heavy_top_simulation_conserves() {
    assert!(heavy_top_simulation::run_example() <= 1e-7);
}

#[test]
fn frame_reconstruction_stays_on_group() {
    let s = frame_reconstruction::run_example();
    assert!(s.max_defect <= 1e-10);
    assert!(s.f_drift <= 1e-6);
    assert!(s.f_norm_error <= 1e-12);
}

#[test]
fn kowalewski_reduction_relations() {
    assert!(kowalewski_reduction::run_example() <= 1e-6);
}

#[test]
fn elliptic_addition_closes() {
    assert!(elliptic_addition::run_example() <= 1e-9);
}

#[test]
fn hyperelliptic_quadrature_holds() {
    assert!(hyperelliptic_quadrature::run_example() <= 1e-5);
}

#[test]
fn painleve_classification_finds_one_kowalewski_point() {
    assert_eq!(painleve_classification::run_example(), 1);
}

#[test]
fn laurent_series_slope() {
    assert!(laurent_series::run_example() >= 5.0);
}

#[test]
fn m0_pendulum_residual() {
    assert!(m0_pendulum::run_example() <= 1e-8);
}

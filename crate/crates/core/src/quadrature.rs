//! Separating variables `ξ1, ξ2` for the Kowalewski case and the quintic
//! quadrature `(dξ_i/dτ)² (ξ1 − ξ2)² = U(ξ_i)`.
//!
//! `ξ_i = (R0 + (−1)^i uv)/(2(x − x̄)²) + H/6 − k/2` with `u = √P(x)` and
//! `v = ū`, so `uv = |P(x)|` on real trajectories.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::elliptic::{gamma_points, QuarticPoint};
use crate::lie::{Curvature, Trajectory};
use crate::reduction::{form_r0, quartic_p, K2Convention, ReducedConstants, ReducedState, Rescaling};
use crate::{Error, Result};

/// Constants of the quintic `U(ξ) = −(4ξ³ − g2 ξ − g3)(ξ − k1)(ξ − k2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConstants {
    /// `H/6 − k/2 + K4/2`.
    pub k1: f64,
    /// `H/6 − k/2 − K4/2`.
    pub k2: f64,
    pub g2: f64,
    pub g3: f64,
}

impl QuadratureConstants {
    pub fn new(consts: &ReducedConstants) -> Self {
        let w = quartic_p(consts).weierstrass();
        let base = consts.h / 6.0 - consts.k.as_f64() / 2.0;
        let half = consts.k4sq.sqrt() / 2.0;
        QuadratureConstants { k1: base + half, k2: base - half, g2: w.g2.re, g3: w.g3.re }
    }

    pub fn quintic(&self) -> QuinticU {
        // −(4ξ³ − g2 ξ − g3) · (ξ² − (k1 + k2) ξ + k1 k2), lowest degree first.
        let cubic = [self.g3, self.g2, 0.0, -4.0];
        let quad = [self.k1 * self.k2, -(self.k1 + self.k2), 1.0];
        let mut coeffs = [0.0; 6];
        for (i, a) in cubic.iter().enumerate() {
            for (j, b) in quad.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        QuinticU { coeffs }
    }

    /// `U` evaluated from its factors.
    pub fn u_factored(&self, xi: f64) -> f64 {
        -(4.0 * xi * xi * xi - self.g2 * xi - self.g3) * (xi - self.k1) * (xi - self.k2)
    }
}

/// `U` as a degree-5 polynomial, coefficients from the constant term up.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuinticU {
    pub coeffs: [f64; 6],
}

impl QuinticU {
    pub fn eval(&self, xi: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * xi + c)
    }
}

/// The separating variables at one state with the matching points of `Γ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct XiPair {
    pub xi1: f64,
    pub xi2: f64,
    pub eta1: Complex64,
    pub eta2: Complex64,
    /// `uv = |P(x)|` for the branch used.
    pub uv: f64,
}

/// `ξ_i` with `uv` replaced by `sign · |P(x)|`; `sign = −1` swaps `ξ1` and `ξ2`.
pub fn xi_with_branch(s: &ReducedState, consts: &ReducedConstants, sign: f64) -> Result<XiPair> {
    let x = s.x;
    if x.im.abs() <= 1e-12 * (1.0 + x.re.abs()) {
        return Err(Error::Coalescence);
    }
    let curve = quartic_p(consts);
    let xb = x.conj();
    let d2 = ((x - xb) * (x - xb)).re;
    let r0 = form_r0(x, xb, consts).re;
    let u = curve.eval(x).sqrt() * sign.signum();
    let uv = (u * u.conj()).re * sign.signum();
    let shift = consts.h / 6.0 - consts.k.as_f64() / 2.0;
    let xi1 = (r0 - uv) / (2.0 * d2) + shift;
    let xi2 = (r0 + uv) / (2.0 * d2) + shift;
    let m = QuarticPoint { x, u };
    let n = QuarticPoint { x: xb, u: u.conj() };
    let (eta1, eta2) = match gamma_points(&curve, &m, &n) {
        Ok((o, o2)) => (
            o2.finite().map_or(Complex64::new(f64::NAN, 0.0), |p| p.1),
            o.finite().map_or(Complex64::new(f64::NAN, 0.0), |p| p.1),
        ),
        Err(_) => (Complex64::new(f64::NAN, 0.0), Complex64::new(f64::NAN, 0.0)),
    };
    Ok(XiPair { xi1, xi2, eta1, eta2, uv })
}

/// `ξ1, ξ2` with `uv = |P(x)|`; `ξ2 − ξ1 = uv/(x − x̄)²`.
pub fn xi_from_state(s: &ReducedState, consts: &ReducedConstants) -> Result<XiPair> {
    xi_with_branch(s, consts, 1.0)
}

/// The classical variables `s_i = (R0 ∓ √(P(x)P(x̄)))/(2(x − x̄)²) + ℓ1/2`
/// with `ℓ1 = H/3`, defined for `k = 0`.
pub fn classical_s_variables(s: &ReducedState, consts: &ReducedConstants) -> Result<[f64; 2]> {
    if consts.k != Curvature::Flat {
        return Err(Error::Curvature { expected: "k = 0", got: consts.k.value() });
    }
    let x = s.x;
    if x.im.abs() <= 1e-12 * (1.0 + x.re.abs()) {
        return Err(Error::Coalescence);
    }
    let curve = quartic_p(consts);
    let xb = x.conj();
    let d2 = ((x - xb) * (x - xb)).re;
    let root = (curve.eval(x) * curve.eval(xb)).sqrt().re;
    let r0 = form_r0(x, xb, consts).re;
    let l1 = consts.h / 3.0;
    Ok([(r0 - root) / (2.0 * d2) + l1 / 2.0, (r0 + root) / (2.0 * d2) + l1 / 2.0])
}

/// Settings for [`quadrature_residual`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureOptions {
    /// Samples with `|Im x| <` this are excluded (`ξ1 → ξ2` there).
    pub coalescence_window: f64,
    pub convention: K2Convention,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions { coalescence_window: 0.1, convention: K2Convention::Derived }
    }
}

/// Residuals of the quintic quadrature along one trajectory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureReport {
    pub constants: QuadratureConstants,
    /// `max |ξ̇_i² (ξ1 − ξ2)² − U(ξ_i)| / (1 + |U| + |ξ̇_i² (ξ1 − ξ2)²|)`.
    pub max_residual_sq: [f64; 2],
    /// `max |ξ̇1/√U(ξ1) + ρ ξ̇2/√U(ξ2)|` scaled by `|√U(ξ1) √U(ξ2)| |ξ1 − ξ2|`
    /// and divided by `1 +` the two scaled terms.
    pub max_residual_sum: f64,
    /// The best `ρ` for each segment between coalescence windows.
    pub rho: Vec<i8>,
    /// Sign changes of the continued `√U(ξ_i)` (turning points).
    pub seam_count: usize,
    /// Runs of samples dropped for coalescence.
    pub excluded_windows: usize,
    pub excluded_samples: usize,
    pub evaluated_samples: usize,
}

impl QuadratureReport {
    pub fn max_residual(&self) -> f64 {
        self.max_residual_sq[0].max(self.max_residual_sq[1]).max(self.max_residual_sum)
    }
}

fn uniform_step(times: &[f64]) -> Result<f64> {
    if times.len() < 2 {
        return Err(Error::InvalidParams("trajectory needs at least two samples".into()));
    }
    let dt = times[1] - times[0];
    for w in times.windows(2) {
        if ((w[1] - w[0]) - dt).abs() > 1e-9 * dt {
            return Err(Error::InvalidParams("quadrature needs a uniform sample grid".into()));
        }
    }
    Ok(dt)
}

/// Splits `0..n` into maximal runs where `keep` holds.
fn runs(keep: &[bool]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, k) in keep.iter().enumerate() {
        match (k, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                out.push((s, i));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, keep.len()));
    }
    out
}

/// Checks `(dξ_i/dτ)² (ξ1 − ξ2)² = U(ξ_i)` and the differential sum along a
/// Kowalewski trajectory sampled on a uniform grid. Derivatives use the
/// centered five-point stencil inside each coalescence-free segment.
pub fn quadrature_residual(traj: &Trajectory, opts: &QuadratureOptions) -> Result<QuadratureReport> {
    let dt = uniform_step(&traj.times)?;
    let r = Rescaling::new(&traj.params, opts.convention)?;
    let consts = r.constants(&traj.states[0]);
    let qc = QuadratureConstants::new(&consts);
    let quintic = qc.quintic();
    let dtau = dt / r.time_scale();
    let states: Vec<ReducedState> = traj.states.iter().map(|p| r.state(p)).collect();
    let keep: Vec<bool> = states.iter().map(|s| s.x.im.abs() >= opts.coalescence_window).collect();
    let segments = runs(&keep);
    let mut report = QuadratureReport {
        constants: qc,
        max_residual_sq: [0.0; 2],
        max_residual_sum: 0.0,
        rho: Vec::new(),
        seam_count: 0,
        excluded_windows: runs(&keep.iter().map(|k| !k).collect::<Vec<_>>()).len(),
        excluded_samples: keep.iter().filter(|k| !**k).count(),
        evaluated_samples: 0,
    };
    for (lo, hi) in segments {
        if hi - lo < 5 {
            continue;
        }
        let xis: Vec<[f64; 2]> =
            states[lo..hi].iter().map(|s| xi_from_state(s, &consts).map(|p| [p.xi1, p.xi2])).collect::<Result<_>>()?;
        let n = xis.len();
        let mut dxi = vec![[0.0; 2]; n];
        for j in 2..n - 2 {
            for i in 0..2 {
                dxi[j][i] = (xis[j - 2][i] - 8.0 * xis[j - 1][i] + 8.0 * xis[j + 1][i] - xis[j + 2][i]) / (12.0 * dtau);
            }
        }
        // Continue √U(ξ_i) through turning points by linear extrapolation.
        let mut roots = vec![[Complex64::new(0.0, 0.0); 2]; n];
        for i in 0..2 {
            for j in 0..n {
                let c = Complex64::from(quintic.eval(xis[j][i])).sqrt();
                roots[j][i] = if j < 2 {
                    c
                } else {
                    let guess = roots[j - 1][i] * 2.0 - roots[j - 2][i];
                    if (c - guess).norm() <= (c + guess).norm() {
                        c
                    } else {
                        -c
                    }
                };
                if j >= 1 && roots[j][i].re * roots[j - 1][i].re < 0.0 {
                    report.seam_count += 1;
                }
            }
        }
        let mut sums = [0.0f64; 2];
        for j in 2..n - 2 {
            report.evaluated_samples += 1;
            let gap = xis[j][0] - xis[j][1];
            for i in 0..2 {
                let lhs = dxi[j][i] * dxi[j][i] * gap * gap;
                let u = quintic.eval(xis[j][i]);
                let res = (lhs - u).abs() / (1.0 + u.abs() + lhs.abs());
                report.max_residual_sq[i] = report.max_residual_sq[i].max(res);
            }
            // ξ̇1/√U1 + ρ ξ̇2/√U2, multiplied through by √U1 √U2 |ξ1 − ξ2|.
            let a = roots[j][1] * dxi[j][0] * gap;
            let b = roots[j][0] * dxi[j][1] * gap;
            for (k, rho) in [1.0, -1.0].iter().enumerate() {
                let res = (a + b * *rho).norm() / (1.0 + a.norm() + b.norm());
                sums[k] = sums[k].max(res);
            }
        }
        let (rho, best) = if sums[0] <= sums[1] { (1, sums[0]) } else { (-1, sums[1]) };
        report.rho.push(rho);
        report.max_residual_sum = report.max_residual_sum.max(best);
    }
    Ok(report)
}

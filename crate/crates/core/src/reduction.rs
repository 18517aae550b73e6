//! Rescaled Kowalewski coordinates and the relations cutting out the
//! invariant variety.
//!
//! For `c = (2, 2, 1)`, `a3 = 0` and `a = a1 + i a2 ≠ 0`, set `x = z/a`,
//! `y = w/a`, `x3 = H3/|a|`, `y3 = h3/|a|` and `τ = |a| t`. The rescaled
//! system has `a = 1`, and `q = x² − y + k` satisfies `K4² = q q̄`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::elliptic::QuarticCurve;
use crate::lie::{Curvature, ModelParams, MomentumState, Trajectory};
use crate::{Error, Result};

/// A point `(x, y, x3, y3)` of the rescaled phase space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedState {
    pub x: Complex64,
    pub y: Complex64,
    pub x3: f64,
    pub y3: f64,
}

impl ReducedState {
    /// `q = x² − y + k`.
    pub fn q(&self, k: Curvature) -> Complex64 {
        self.x * self.x - self.y + k.as_f64()
    }

    /// `σ(x, y, x3, y3) = (x̄, ȳ, −x3, −y3)`.
    pub fn involution(&self) -> Self {
        ReducedState { x: self.x.conj(), y: self.y.conj(), x3: -self.x3, y3: -self.y3 }
    }
}

/// Which reading of `K̃2` to use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum K2Convention {
    /// `K2 − kH̃ − K4²`.
    MinusK4Sq,
    /// `K2 − kH̃ − k²`.
    MinusKSq,
    /// `K2 − kH̃ − k² − K4²`: the only one under which the variety relations
    /// hold for `k ≠ 0`.
    #[default]
    Derived,
}

/// The integrals in rescaled coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedConstants {
    pub h: f64,
    pub k2: f64,
    pub k3: f64,
    pub k4sq: f64,
    pub k: Curvature,
    pub convention: K2Convention,
}

impl ReducedConstants {
    /// `H = |x|² + x3²/2 + Re y`, `K2 = |y|² + y3² + k(4|x|² + x3²)`,
    /// `K3 = 2 Re(x ȳ) + x3 y3`, `K4² = |q|²`.
    pub fn from_state(s: &ReducedState, k: Curvature, convention: K2Convention) -> Self {
        let kf = k.as_f64();
        ReducedConstants {
            h: s.x.norm_sqr() + 0.5 * s.x3 * s.x3 + s.y.re,
            k2: s.y.norm_sqr() + s.y3 * s.y3 + kf * (4.0 * s.x.norm_sqr() + s.x3 * s.x3),
            k3: 2.0 * (s.x * s.y.conj()).re + s.x3 * s.y3,
            k4sq: s.q(k).norm_sqr(),
            k,
            convention,
        }
    }

    pub fn with_convention(self, convention: K2Convention) -> Self {
        ReducedConstants { convention, ..self }
    }

    /// `H̃ = 2H − 2k`.
    pub fn h_tilde(&self) -> f64 {
        2.0 * self.h - 2.0 * self.k.as_f64()
    }

    pub fn k2_tilde(&self) -> f64 {
        let k = self.k.as_f64();
        let base = self.k2 - k * self.h_tilde();
        match self.convention {
            K2Convention::MinusK4Sq => base - self.k4sq,
            K2Convention::MinusKSq => base - k * k,
            K2Convention::Derived => base - k * k - self.k4sq,
        }
    }

    /// `θ = H − k`, the member of the pencil attached to the variety.
    pub fn theta(&self) -> Complex64 {
        Complex64::from(self.h - self.k.as_f64())
    }
}

/// The map from original to rescaled coordinates for fixed parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rescaling {
    pub a: Complex64,
    pub k: Curvature,
    pub convention: K2Convention,
}

impl Rescaling {
    pub fn new(params: &ModelParams, convention: K2Convention) -> Result<Self> {
        match params.finite_inertia() {
            Some(c) if c == [2.0, 2.0, 1.0] && params.a[2] == 0.0 => {}
            _ => return Err(Error::NotKowalewski),
        }
        let a = params.forcing();
        if a.norm() == 0.0 {
            return Err(Error::Degenerate("a = 0 cannot be rescaled".into()));
        }
        Ok(Rescaling { a, k: params.k, convention })
    }

    /// `dt/dτ = 1/|a|`.
    pub fn time_scale(&self) -> f64 {
        1.0 / self.a.norm()
    }

    pub fn state(&self, p: &MomentumState) -> ReducedState {
        let m = self.a.norm();
        let z = Complex64::new(p.big_h[0], p.big_h[1]) * 0.5;
        let w = Complex64::new(p.h[0], p.h[1]);
        ReducedState { x: z / self.a, y: w / self.a, x3: p.big_h[2] / m, y3: p.h[2] / m }
    }

    pub fn unscale(&self, s: &ReducedState) -> MomentumState {
        let m = self.a.norm();
        let z = s.x * self.a;
        let w = s.y * self.a;
        MomentumState::new([w.re, w.im, s.y3 * m], [2.0 * z.re, 2.0 * z.im, s.x3 * m])
    }

    pub fn constants(&self, p: &MomentumState) -> ReducedConstants {
        ReducedConstants::from_state(&self.state(p), self.k, self.convention)
    }

    /// Factors `f` with `original = f · reduced` for `(H, K2, K3, K4²)`:
    /// `|a|²` for the first three and `|a|⁴` for `K4²`.
    pub fn constant_factors(&self) -> [f64; 4] {
        let m2 = self.a.norm_sqr();
        [m2, m2, m2, m2 * m2]
    }
}

/// Rescaled state and constants of `p`, using the default `K̃2` convention.
pub fn rescale(p: &MomentumState, params: &ModelParams) -> Result<(ReducedState, ReducedConstants)> {
    let r = Rescaling::new(params, K2Convention::default())?;
    Ok((r.state(p), r.constants(p)))
}

/// The rescaled field, as derivatives with respect to `τ`:
/// `x' = −(i/2)(x3 x − y3)`, `y' = i(y3 x − x3 y + k x3)`,
/// `x3' = −Im y`, `y3' = Im(x ȳ) + 2k Im x̄`.
pub fn reduced_field(s: &ReducedState, k: Curvature) -> ReducedState {
    let i = Complex64::i();
    let kf = k.as_f64();
    ReducedState {
        x: -i * 0.5 * (s.x * s.x3 - s.y3),
        y: i * (s.x * s.y3 - s.y * s.x3 + kf * s.x3),
        x3: -s.y.im,
        y3: (s.x * s.y.conj()).im + 2.0 * kf * s.x.conj().im,
    }
}

/// `P(x) = K̃2 − 2K3 x + 2H x² − x⁴`, i.e. `A = K̃2`, `B = −K3/2`, `C = H/3`,
/// `D = 0`, `E = −1`.
pub fn quartic_p(consts: &ReducedConstants) -> QuarticCurve {
    QuarticCurve::from_real([consts.k2_tilde(), -0.5 * consts.k3, consts.h / 3.0, 0.0, -1.0])
        .expect("leading coefficient is -1")
}

/// `R0 = R − (H − k)(x − y)²`; `R0(x, x) = P(x)`.
pub fn form_r0(x: Complex64, y: Complex64, consts: &ReducedConstants) -> Complex64 {
    quartic_p(consts).theta_family(consts.theta()).r_theta(x, y)
}

/// `R1 = Φ_{H−k}`; `R0² + (x − y)² R1 = P(x) P(y)`.
pub fn form_r1(x: Complex64, y: Complex64, consts: &ReducedConstants) -> Complex64 {
    quartic_p(consts).theta_family(consts.theta()).phi(x, y)
}

/// Simplified closed forms of `R1` that differ from [`form_r1`], kept for
/// comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedFormR1 {
    /// With `−H̃ x² y²`.
    LinearH,
    /// With `−H̃² x² y²`.
    SquaredH,
}

impl ClosedFormR1 {
    pub fn eval(self, x: Complex64, y: Complex64, consts: &ReducedConstants) -> Complex64 {
        let ht = consts.h_tilde();
        let k2t = consts.k2_tilde();
        let (k2, k3, k) = (consts.k2, consts.k3, consts.k.as_f64());
        let top = match self {
            ClosedFormR1::LinearH => ht,
            ClosedFormR1::SquaredH => ht * ht,
        };
        let s = x + y;
        let d = x - y;
        Complex64::from(ht * k2t - k3 * k3)
            + s * (2.0 * k3 * k)
            + (x * x + y * y) * (2.0 * ht * k - 3.0 * k2)
            + x * y * s * (2.0 * k3)
            - x * x * y * y * top
            + d * d * (ht * k - 2.0 * k2)
    }

    /// Coefficients `c[i][j]` of `x^i y^j` in `closed form − R1`.
    pub fn discrepancy(self, consts: &ReducedConstants) -> [[f64; 3]; 3] {
        let f = |x: f64, y: f64| {
            let (x, y) = (Complex64::from(x), Complex64::from(y));
            (self.eval(x, y, consts) - form_r1(x, y, consts)).re
        };
        // Lagrange interpolation on {-1, 0, 1}²: rows of the inverse Vandermonde.
        let nodes = [-1.0, 0.0, 1.0];
        let inv = [[0.0, 1.0, 0.0], [-0.5, 0.0, 0.5], [0.5, -1.0, 0.5]];
        let vals: Vec<Vec<f64>> = nodes.iter().map(|&x| nodes.iter().map(|&y| f(x, y)).collect()).collect();
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, c) in row.iter_mut().enumerate() {
                let mut acc = 0.0;
                for a in 0..3 {
                    for b in 0..3 {
                        acc += inv[i][a] * inv[j][b] * vals[a][b];
                    }
                }
                *c = if acc.abs() < 1e-12 { 0.0 } else { acc };
            }
        }
        out
    }
}

fn rel(value: Complex64, terms: &[Complex64]) -> f64 {
    value.norm() / (1.0 + terms.iter().map(|t| t.norm()).sum::<f64>())
}

/// `P(x) q̄ + P(x̄) q + R1(x, x̄) + K4² (x − x̄)²`, scale-relative.
pub fn variety_residual(s: &ReducedState, consts: &ReducedConstants) -> f64 {
    let p = quartic_p(consts);
    let (x, xb) = (s.x, s.x.conj());
    let q = s.q(consts.k);
    let d = x - xb;
    let terms = [p.eval(x) * q.conj(), p.eval(xb) * q, form_r1(x, xb, consts), d * d * consts.k4sq];
    rel(terms.iter().sum(), &terms)
}

/// Roots of `P(x̄) q² + (R1(x, x̄) + K4²(x − x̄)²) q + K4² P(x) = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QRoots {
    pub roots: [Complex64; 2],
    /// `P(x̄) = 0`: only `roots[0]` is meaningful (the linear solution).
    pub degenerate: bool,
}

impl QRoots {
    /// The root consistent with the state's own `x3`, `y3` through
    /// `(x3 x − y3)² = P(x) + q (x − x̄)²`.
    ///
    /// For real constants `|P(x)| = |P(x̄)|`, so both roots have modulus `K4`
    /// and `q q̄ = K4²` cannot separate them: over one `x` they belong to two
    /// distinct real points of the variety.
    pub fn physical(&self, s: &ReducedState, consts: &ReducedConstants) -> Complex64 {
        if self.degenerate {
            return self.roots[0];
        }
        let zeta = s.x * s.x3 - s.y3;
        let d = s.x - s.x.conj();
        let lhs = zeta * zeta - quartic_p(consts).eval(s.x);
        let miss = |q: Complex64| (lhs - q * d * d).norm();
        if miss(self.roots[0]) <= miss(self.roots[1]) {
            self.roots[0]
        } else {
            self.roots[1]
        }
    }

    /// Distance from `q` to the nearer root.
    pub fn distance(&self, q: Complex64) -> f64 {
        let d0 = (self.roots[0] - q).norm();
        if self.degenerate {
            d0
        } else {
            d0.min((self.roots[1] - q).norm())
        }
    }
}

pub fn solve_q(x: Complex64, consts: &ReducedConstants) -> Result<QRoots> {
    let p = quartic_p(consts);
    let xb = x.conj();
    let d = x - xb;
    let alpha = p.eval(xb);
    let beta = form_r1(x, xb, consts) + d * d * consts.k4sq;
    let gamma = p.eval(x) * consts.k4sq;
    let zero = Complex64::new(0.0, 0.0);
    if alpha.norm() <= 1e-14 * (1.0 + beta.norm() + gamma.norm()) {
        if beta.norm() == 0.0 {
            return Err(Error::Degenerate("q-equation vanishes identically".into()));
        }
        return Ok(QRoots { roots: [-gamma / beta, zero], degenerate: true });
    }
    let sq = (beta * beta - alpha * gamma * 4.0).sqrt();
    let sq = if (beta.conj() * sq).re >= 0.0 { sq } else { -sq };
    let big = -(beta + sq) / (alpha * 2.0);
    let small = if big.norm() == 0.0 { zero } else { gamma / (alpha * big) };
    Ok(QRoots { roots: [big, small], degenerate: false })
}

/// `−4 (dx/dτ)² − P(x) − q (x − x̄)²`, scale-relative.
pub fn extremal_ode_residual(s: &ReducedState, consts: &ReducedConstants, dxdt: Complex64) -> f64 {
    let p = quartic_p(consts);
    let d = s.x - s.x.conj();
    let terms = [dxdt * dxdt * -4.0, -p.eval(s.x), -s.q(consts.k) * d * d];
    rel(terms.iter().sum(), &terms)
}

/// `ζ ζ̄ − R0(x, x̄)` with `ζ = x3 x − y3`, scale-relative.
pub fn zeta_residual(s: &ReducedState, consts: &ReducedConstants) -> f64 {
    let zeta = s.x * s.x3 - s.y3;
    let zz = Complex64::from(zeta.norm_sqr());
    let r0 = form_r0(s.x, s.x.conj(), consts);
    rel(zz - r0, &[zz, r0])
}

fn recover_squares(x: Complex64, q: Complex64, consts: &ReducedConstants) -> (f64, f64) {
    let xx = x.norm_sqr();
    let x3sq = consts.h_tilde() - (2.0 * x.re).powi(2) + 2.0 * q.re;
    let y3sq = consts.k2_tilde() - xx * xx + 2.0 * (x * x * q.conj()).re - 2.0 * consts.k.as_f64() * xx;
    (x3sq, y3sq)
}

/// `x3² = H̃ − (x + x̄)² + (q + q̄)` and
/// `y3² = K̃2 − x² x̄² + x² q̄ + x̄² q − 2k x x̄`, from `x` and `q` alone.
pub fn recover_x3_y3(s: &ReducedState, consts: &ReducedConstants) -> (f64, f64) {
    recover_squares(s.x, s.q(consts.k), consts)
}

/// Largest scale-relative mismatch between the recovered squares and the
/// squares of the state's own `x3`, `y3`.
pub fn recovery_residual(s: &ReducedState, consts: &ReducedConstants) -> f64 {
    let (x3sq, y3sq) = recover_x3_y3(s, consts);
    let x = s.x;
    let q = s.q(consts.k);
    let sx = 1.0 + consts.h_tilde().abs() + (2.0 * x.re).powi(2) + 2.0 * q.norm() + s.x3 * s.x3;
    let sy = 1.0
        + consts.k2_tilde().abs()
        + x.norm_sqr().powi(2)
        + 2.0 * (x * x * q).norm()
        + 2.0 * x.norm_sqr()
        + s.y3 * s.y3;
    ((x3sq - s.x3 * s.x3).abs() / sx).max((y3sq - s.y3 * s.y3).abs() / sy)
}

fn product_relation_value(x: Complex64, q: Complex64, consts: &ReducedConstants, x3sq: f64, y3sq: f64) -> f64 {
    let k = consts.k.as_f64();
    let parts = [consts.k3, -(x.norm_sqr() + k) * 2.0 * x.re, 2.0 * (x * q.conj()).re];
    let lhs: f64 = parts.iter().sum::<f64>().powi(2);
    let scale = parts.iter().map(|p| p.abs()).sum::<f64>().powi(2) + (x3sq * y3sq).abs();
    (lhs - x3sq * y3sq).abs() / (1.0 + scale)
}

/// `(K3 − (x x̄ + k)(x + x̄) + (x q̄ + x̄ q))² − x3² y3²` at the recovered
/// squares, scale-relative.
pub fn product_relation_residual(s: &ReducedState, consts: &ReducedConstants) -> f64 {
    let (x3sq, y3sq) = recover_x3_y3(s, consts);
    product_relation_value(s.x, s.q(consts.k), consts, x3sq, y3sq)
}

/// Maximum and mean of a residual over samples.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ResidualStats {
    pub max: f64,
    pub mean: f64,
    pub samples: usize,
}

impl ResidualStats {
    pub fn from_values(values: impl IntoIterator<Item = f64>) -> Self {
        let mut out = ResidualStats::default();
        let mut sum = 0.0;
        for v in values {
            out.max = out.max.max(v);
            sum += v;
            out.samples += 1;
        }
        if out.samples > 0 {
            out.mean = sum / out.samples as f64;
        }
        out
    }
}

/// Residuals of the variety relations along a trajectory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub convention: K2Convention,
    pub constants: ReducedConstants,
    pub variety: ResidualStats,
    pub extremal_ode: ResidualStats,
    pub zeta: ResidualStats,
    pub recovery: ResidualStats,
    pub product_relation: ResidualStats,
    /// Distance from `q` to the nearer root of [`solve_q`], over `1 + |q|`.
    pub q_root: ResidualStats,
    /// `|q − q_phys| / (1 + |q|)` for the root chosen by [`QRoots::physical`].
    pub q_physical: ResidualStats,
}

impl ReductionReport {
    /// Every sample is evaluated against the constants of the first sample,
    /// so a state that leaves the invariant variety shows up as a residual.
    pub fn from_trajectory(traj: &Trajectory, convention: K2Convention) -> Result<Self> {
        let r = Rescaling::new(&traj.params, convention)?;
        let first = traj.states.first().ok_or_else(|| Error::InvalidParams("empty trajectory".into()))?;
        let mut cols: [Vec<f64>; 6] = Default::default();
        let mut physical = Vec::new();
        let consts = r.constants(first);
        for p in &traj.states {
            let c = &consts;
            let s = r.state(p);
            let dx = reduced_field(&s, r.k).x;
            cols[0].push(variety_residual(&s, c));
            cols[1].push(extremal_ode_residual(&s, c, dx));
            cols[2].push(zeta_residual(&s, c));
            cols[3].push(recovery_residual(&s, c));
            cols[4].push(product_relation_residual(&s, c));
            if let Ok(roots) = solve_q(s.x, c) {
                let q = s.q(r.k);
                let d = roots.distance(q) / (1.0 + q.norm());
                cols[5].push(d);
                physical.push((roots.physical(&s, c) - q).norm() / (1.0 + q.norm()));
            }
        }
        let [a, b, c, d, e, f] = cols.map(ResidualStats::from_values);
        Ok(ReductionReport {
            convention,
            constants: consts,
            variety: a,
            extremal_ode: b,
            zeta: c,
            recovery: d,
            product_relation: e,
            q_physical: ResidualStats::from_values(physical),
            q_root: f,
        })
    }
}

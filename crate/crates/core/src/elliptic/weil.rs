use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{relative_residual, QuarticCurve, WeierstrassCurve};
use crate::{Error, Result};

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Ridders' extrapolated central difference of `f` at `0`, starting from
/// step `h`.
fn ridders(f: impl Fn(f64) -> Complex64, h: f64) -> Complex64 {
    const SHRINK: f64 = 1.4;
    const ROUNDS: usize = 12;
    let central = |h: f64| (f(h) - f(-h)) / (2.0 * h);
    let mut table = vec![vec![central(h)]];
    let mut best = table[0][0];
    let mut err = f64::INFINITY;
    let mut h = h;
    for i in 1..ROUNDS {
        h /= SHRINK;
        let mut row = vec![central(h)];
        let mut fac = SHRINK * SHRINK;
        for j in 1..=i {
            let next = (row[j - 1] * fac - table[i - 1][j - 1]) / (fac - 1.0);
            let e = (next - row[j - 1]).norm().max((next - table[i - 1][j - 1]).norm());
            if e <= err {
                err = e;
                best = next;
            }
            row.push(next);
            fac *= SHRINK * SHRINK;
        }
        let stalled = (row[i] - table[i - 1][i - 1]).norm() >= 2.0 * err;
        table.push(row);
        if stalled {
            break;
        }
    }
    best
}

/// Square root of `z` on the branch nearest `reference`.
fn sqrt_near(z: Complex64, reference: Complex64) -> Complex64 {
    let r = z.sqrt();
    if (r - reference).norm() <= (r + reference).norm() {
        r
    } else {
        -r
    }
}

/// A point `(x, u)` of `C: u² = P(x)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuarticPoint {
    pub x: Complex64,
    pub u: Complex64,
}

impl QuarticPoint {
    /// The point over `x` on the principal branch of `√P`.
    pub fn principal(curve: &QuarticCurve, x: Complex64) -> Self {
        QuarticPoint { x, u: curve.eval(x).sqrt() }
    }

    /// The point over `x` whose `u` continues this point's branch.
    pub fn moved_to(&self, curve: &QuarticCurve, x: Complex64) -> Self {
        QuarticPoint { x, u: sqrt_near(curve.eval(x), self.u) }
    }

    /// `|u² − P(x)| / (1 + |P(x)|)`.
    pub fn residual(&self, curve: &QuarticCurve) -> f64 {
        relative_residual(self.u * self.u, curve.eval(self.x))
    }
}

/// A point of `Γ: η² = 4ξ³ − g2 ξ − g3`, including the point at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaPoint {
    Finite { xi: Complex64, eta: Complex64 },
    Infinity,
}

impl GammaPoint {
    /// The point over `ξ` on the principal branch of `η`.
    pub fn principal(curve: &WeierstrassCurve, xi: Complex64) -> Self {
        GammaPoint::Finite { xi, eta: curve.rhs(xi).sqrt() }
    }

    /// `|η² − (4ξ³ − g2 ξ − g3)| / (1 + |4ξ³ − g2 ξ − g3|)`; zero at infinity.
    pub fn residual(&self, curve: &WeierstrassCurve) -> f64 {
        match *self {
            GammaPoint::Finite { xi, eta } => relative_residual(eta * eta, curve.rhs(xi)),
            GammaPoint::Infinity => 0.0,
        }
    }

    /// `(ξ, −η)`.
    pub fn neg(&self) -> Self {
        match *self {
            GammaPoint::Finite { xi, eta } => GammaPoint::Finite { xi, eta: -eta },
            GammaPoint::Infinity => GammaPoint::Infinity,
        }
    }

    pub fn finite(&self) -> Option<(Complex64, Complex64)> {
        match *self {
            GammaPoint::Finite { xi, eta } => Some((xi, eta)),
            GammaPoint::Infinity => None,
        }
    }
}

fn tiny(z: Complex64, scale: f64) -> bool {
    z.norm() <= 1e-13 * (1.0 + scale)
}

fn weil_map(curve: &QuarticCurve, p: &GammaPoint, m: &QuarticPoint, sign: f64) -> Result<QuarticPoint> {
    let (xi, eta) = p.finite().ok_or_else(|| Error::Degenerate("Weil map at the point at infinity".into()))?;
    if tiny(eta, xi.norm()) {
        return Err(Error::Degenerate("Weil map at a 2-torsion point (η = 0)".into()));
    }
    let fam = curve.theta_family(curve.theta_of_xi(xi));
    let ax = fam.a(m.x);
    let bx = fam.b(m.x);
    if tiny(ax, bx.norm()) {
        return Err(Error::Degenerate("a_θ(x) = 0".into()));
    }
    let y = (-bx + eta * m.u * (2.0 * sign)) / ax;
    let v = -(m.x * fam.a(y) + fam.b(y)) / (eta * 2.0);
    Ok(QuarticPoint { x: y, u: v })
}

/// `y = (−b_θ(x) + 2ηu)/a_θ(x)`, `v = −(x a_θ(y) + b_θ(y))/(2η)` with
/// `θ = 2(ξ + C)`; carries `dx/u` to `dy/v`.
pub fn weil_add(curve: &QuarticCurve, p: &GammaPoint, m: &QuarticPoint) -> Result<QuarticPoint> {
    weil_map(curve, p, m, 1.0)
}

/// As [`weil_add`] with `−2ηu`; carries `dx/u` to `−dy/v`.
pub fn weil_sub(curve: &QuarticCurve, p: &GammaPoint, m: &QuarticPoint) -> Result<QuarticPoint> {
    weil_map(curve, p, m, -1.0)
}

/// The two roots `θ = (R(a, b) ± u_a u_b)/(a − b)²` of `Φ_θ(a, b) = 0`,
/// returned as `[θ₊, θ₋]`.
pub fn theta_reconstruction(curve: &QuarticCurve, m: &QuarticPoint, n: &QuarticPoint) -> Result<[Complex64; 2]> {
    let d = m.x - n.x;
    if tiny(d, m.x.norm().max(n.x.norm())) {
        return Err(Error::Degenerate("coincident abscissae".into()));
    }
    let d2 = d * d;
    let r = curve.r(m.x, n.x);
    let uv = m.u * n.u;
    let rh = curve.r_hat(m.x, n.x);
    // The product of the roots is −R̂/(a−b)²; divide by the larger root to avoid cancellation.
    if (r + uv).norm() >= (r - uv).norm() {
        Ok([(r + uv) / d2, -rh / (r + uv)])
    } else {
        Ok([-rh / (r - uv), (r - uv) / d2])
    }
}

/// `lim θ₋ = −R̂(x, x)/(2P(x))` as `N → M`.
pub fn theta_limit(curve: &QuarticCurve, x: Complex64) -> Complex64 {
    -curve.q_diag(x) / (curve.eval(x) * 2.0)
}

/// The points `O = N − M` (from `θ₊`) and `O′ = N + M` (from `θ₋`) of `Γ`,
/// with `ξ = θ/2 − C` and `η = −(x a_θ(y) + b_θ(y))/(2v)`.
pub fn gamma_points(curve: &QuarticCurve, m: &QuarticPoint, n: &QuarticPoint) -> Result<(GammaPoint, GammaPoint)> {
    if tiny(n.u, n.x.norm()) {
        return Err(Error::Degenerate("v = 0".into()));
    }
    let thetas = theta_reconstruction(curve, m, n)?;
    let pt = |theta: Complex64| {
        let fam = curve.theta_family(theta);
        let eta = -(m.x * fam.a(n.x) + fam.b(n.x)) / (n.u * 2.0);
        GammaPoint::Finite { xi: curve.xi_of_theta(theta), eta }
    };
    Ok((pt(thetas[0]), pt(thetas[1])))
}

/// Finite-difference errors of `∂ξ/∂x = −η/u`, `∂ξ/∂y = η/v`,
/// `∂ξ′/∂x = η′/u`, `∂ξ′/∂y = η′/v` at step `h` and `h/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DifferentialReport {
    pub h: f64,
    pub errors: [f64; 4],
    pub errors_half: [f64; 4],
    /// `errors / errors_half`, near 4 for a second-order quotient.
    pub ratios: [f64; 4],
}

impl DifferentialReport {
    pub fn max_error(&self) -> f64 {
        self.errors.iter().copied().fold(0.0, f64::max)
    }

    pub fn ratios_within(&self, lo: f64, hi: f64) -> bool {
        self.ratios.iter().all(|r| (lo..=hi).contains(r))
    }
}

fn xi_pair(curve: &QuarticCurve, m: &QuarticPoint, n: &QuarticPoint) -> Result<[Complex64; 2]> {
    let (o, o2) = gamma_points(curve, m, n)?;
    let xi = |g: GammaPoint| g.finite().map(|(xi, _)| xi).unwrap_or(zero());
    Ok([xi(o), xi(o2)])
}

fn fd_errors(curve: &QuarticCurve, m: &QuarticPoint, n: &QuarticPoint, h: f64) -> Result<[f64; 4]> {
    let (o, o2) = gamma_points(curve, m, n)?;
    let (_, eta) = o.finite().unwrap();
    let (_, eta2) = o2.finite().unwrap();
    let hc = Complex64::new(h, 0.0);
    let dx = {
        let p = xi_pair(curve, &m.moved_to(curve, m.x + hc), n)?;
        let q = xi_pair(curve, &m.moved_to(curve, m.x - hc), n)?;
        [(p[0] - q[0]) / (2.0 * h), (p[1] - q[1]) / (2.0 * h)]
    };
    let dy = {
        let p = xi_pair(curve, m, &n.moved_to(curve, n.x + hc))?;
        let q = xi_pair(curve, m, &n.moved_to(curve, n.x - hc))?;
        [(p[0] - q[0]) / (2.0 * h), (p[1] - q[1]) / (2.0 * h)]
    };
    let want = [-eta / m.u, eta / n.u, eta2 / m.u, eta2 / n.u];
    let got = [dx[0], dy[0], dx[1], dy[1]];
    Ok(std::array::from_fn(|i| relative_residual(got[i], want[i])))
}

/// Checks the differential relations `dξ/η = −dx/u + dy/v` and
/// `dξ′/η′ = dx/u + dy/v` for `O = N − M`, `O′ = N + M` by central
/// differences along `C`, at step `h` and `h/2`.
pub fn differential_relations_check(
    curve: &QuarticCurve,
    m: &QuarticPoint,
    n: &QuarticPoint,
    h: f64,
) -> Result<DifferentialReport> {
    if tiny(m.x - n.x, m.x.norm()) {
        return Err(Error::Degenerate("M = N puts O at infinity".into()));
    }
    let errors = fd_errors(curve, m, n, h)?;
    let errors_half = fd_errors(curve, m, n, h / 2.0)?;
    Ok(DifferentialReport { h, errors, errors_half, ratios: std::array::from_fn(|i| errors[i] / errors_half[i]) })
}

/// One branch `σ` of Euler's solution `y(x)` of `Φ_θ(x, y) = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EulerBranch {
    pub sigma: f64,
    pub y: Complex64,
    /// `(x a_θ(y) + b_θ(y)) / √G_θ(y)`, equal to `±1`.
    pub rho: Complex64,
    pub slope_fd: Complex64,
    /// `−(x a_θ(y) + b_θ(y)) / (σ √G_θ(x))` from implicit differentiation.
    pub slope_implicit: Complex64,
    pub implicit_residual: f64,
    /// `min_± |dy/dx ∓ √(P(y)/P(x))|`, scale-relative.
    pub sqrt_ratio_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EulerReport {
    pub theta: Complex64,
    pub x0: Complex64,
    /// `G_θ(x0) = 0`: the two branches coincide and slopes are not evaluated.
    pub coincident: bool,
    pub branches: Vec<EulerBranch>,
}

/// Euler's solutions `y = (−b_θ(x) + σ√G_θ(x))/a_θ(x)` near `x0`, with the
/// slope checked by an extrapolated central difference against `dy/dx = ∓√(P(y)/P(x))`.
pub fn euler_solution_check(curve: &QuarticCurve, theta: Complex64, x0: Complex64) -> Result<EulerReport> {
    let fam = curve.theta_family(theta);
    let a0 = fam.a(x0);
    let b0 = fam.b(x0);
    if tiny(a0, b0.norm()) {
        return Err(Error::Degenerate("a_θ(x0) = 0".into()));
    }
    let g0 = fam.discriminant(x0);
    let root0 = g0.sqrt();
    let coincident = tiny(g0, b0.norm_sqr());
    let h = 1e-3 * x0.norm().max(1.0);
    let mut branches = Vec::with_capacity(2);
    for sigma in [1.0, -1.0] {
        let y_at = |x: Complex64| {
            let r = sqrt_near(fam.discriminant(x), root0);
            (-fam.b(x) + r * sigma) / fam.a(x)
        };
        let y = y_at(x0);
        let num = x0 * fam.a(y) + fam.b(y);
        let (slope_fd, slope_implicit, rho) = if coincident {
            let nan = Complex64::new(f64::NAN, f64::NAN);
            (nan, nan, nan)
        } else {
            let fd = ridders(|d| y_at(x0 + d), h);
            (fd, -num / (root0 * sigma), num / fam.discriminant(y).sqrt())
        };
        let ratio = (curve.eval(y) / curve.eval(x0)).sqrt();
        let sqrt_ratio_residual = relative_residual(slope_fd, ratio).min(relative_residual(slope_fd, -ratio));
        branches.push(EulerBranch {
            sigma,
            y,
            rho,
            slope_fd,
            slope_implicit,
            implicit_residual: relative_residual(slope_fd, slope_implicit),
            sqrt_ratio_residual,
        });
    }
    Ok(EulerReport { theta, x0, coincident, branches })
}

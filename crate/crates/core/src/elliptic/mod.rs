//! Biquadratic forms attached to a quartic `P(x) = A + 4Bx + 6Cx² + 4Dx³ + Ex⁴`,
//! the discriminant factorization of the pencil `Φ_θ`, the Weierstrass
//! invariants, Euler's solutions of `dx/√P(x) ± dy/√P(y) = 0` and Weil's
//! addition maps between `C: u² = P(x)` and `Γ: η² = 4ξ³ − g2 ξ − g3`.
//!
//! All evaluators are polynomial in the coefficients, so degenerate quartics
//! (`E = 0`) are handled by the same code.

mod weil;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use weil::{
    differential_relations_check, euler_solution_check, gamma_points, theta_limit, theta_reconstruction, weil_add,
    weil_sub, DifferentialReport, EulerBranch, EulerReport, GammaPoint, QuarticPoint,
};

/// Residual normalization `|lhs − rhs| / (1 + |rhs|)`.
pub fn relative_residual(lhs: Complex64, rhs: Complex64) -> f64 {
    (lhs - rhs).norm() / (1.0 + rhs.norm())
}

/// Coefficients `(A, B, C, D, E)` of `P(x) = A + 4Bx + 6Cx² + 4Dx³ + Ex⁴`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuarticCurve {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    pub e: Complex64,
}

impl QuarticCurve {
    pub fn new(coeffs: [Complex64; 5]) -> Result<Self> {
        if coeffs.iter().all(|c| *c == Complex64::new(0.0, 0.0)) {
            return Err(Error::InvalidParams("all quartic coefficients vanish".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParams("non-finite quartic coefficient".into()));
        }
        let [a, b, c, d, e] = coeffs;
        Ok(QuarticCurve { a, b, c, d, e })
    }

    pub fn from_real(coeffs: [f64; 5]) -> Result<Self> {
        Self::new(coeffs.map(Complex64::from))
    }

    /// `P(x) = 1 − x⁴`.
    pub fn lemniscate() -> Self {
        Self::from_real([1.0, 0.0, 0.0, 0.0, -1.0]).unwrap()
    }

    pub fn coefficients(&self) -> [Complex64; 5] {
        [self.a, self.b, self.c, self.d, self.e]
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.a + x * (self.b * 4.0 + x * (self.c * 6.0 + x * (self.d * 4.0 + x * self.e)))
    }

    pub fn derivative(&self, x: Complex64) -> Complex64 {
        self.b * 4.0 + x * (self.c * 12.0 + x * (self.d * 12.0 + x * self.e * 4.0))
    }

    /// `R(x, y) = A + 2B(x+y) + 3C(x²+y²) + 2Dxy(x+y) + Ex²y²`, the
    /// symmetric biquadratic form with `R(x, x) = P(x)`.
    pub fn r(&self, x: Complex64, y: Complex64) -> Complex64 {
        let s = x + y;
        let p = x * y;
        self.a + self.b * 2.0 * s + self.c * 3.0 * (x * x + y * y) + self.d * 2.0 * p * s + self.e * p * p
    }

    /// The companion form with `R² + (x − y)² R̂ = P(x) P(y)`.
    pub fn r_hat(&self, x: Complex64, y: Complex64) -> Complex64 {
        let (a, b, c, d, e) = (self.a, self.b, self.c, self.d, self.e);
        let s = x + y;
        let p = x * y;
        let diff = x - y;
        -b * b * 4.0
            + (a * d - b * c * 3.0) * 4.0 * s
            + (a * e + b * d * 2.0 - c * c * 9.0) * 2.0 * (x * x + y * y)
            + (b * e - c * d * 3.0) * 4.0 * p * s
            - d * d * 4.0 * p * p
            - (a * e + b * d * 4.0 - c * c * 9.0) * diff * diff
    }

    /// `|R² + (x−y)² R̂ − P(x)P(y)| / (1 + |P(x)P(y)|)`.
    pub fn companion_residual(&self, x: Complex64, y: Complex64) -> f64 {
        let r = self.r(x, y);
        let d = x - y;
        relative_residual(r * r + d * d * self.r_hat(x, y), self.eval(x) * self.eval(y))
    }

    /// `Q(x) = R̂(x, x)`.
    pub fn q_diag(&self, x: Complex64) -> Complex64 {
        self.r_hat(x, x)
    }

    /// `Q(x) = P(x) ∂²R/∂x∂y(x, x) − ¼ P′(x)²`.
    pub fn q_diag_from_derivatives(&self, x: Complex64) -> Complex64 {
        let rxy = self.d * 8.0 * x + self.e * 4.0 * x * x;
        let dp = self.derivative(x);
        self.eval(x) * rxy - dp * dp * 0.25
    }

    pub fn theta_family(&self, theta: Complex64) -> ThetaFamily {
        ThetaFamily { curve: *self, theta }
    }

    /// `p(θ) = 2θ(θ − 3C)² + 2θ(4BD − AE) + 4B²E + 4AD² − 24BCD`.
    pub fn p_theta(&self, theta: Complex64) -> Complex64 {
        let (a, b, c, d, e) = (self.a, self.b, self.c, self.d, self.e);
        let t3 = theta - c * 3.0;
        theta * 2.0 * t3 * t3 + theta * 2.0 * (b * d * 4.0 - a * e) + b * b * e * 4.0 + a * d * d * 4.0
            - b * c * d * 24.0
    }

    /// Coefficients of `p(θ)` from the constant term up.
    pub fn p_theta_coefficients(&self) -> [Complex64; 4] {
        let (a, b, c, d, e) = (self.a, self.b, self.c, self.d, self.e);
        [
            b * b * e * 4.0 + a * d * d * 4.0 - b * c * d * 24.0,
            c * c * 18.0 + b * d * 8.0 - a * e * 2.0,
            -c * 12.0,
            Complex64::new(2.0, 0.0),
        ]
    }

    pub fn weierstrass(&self) -> WeierstrassCurve {
        let (a, b, c, d, e) = (self.a, self.b, self.c, self.d, self.e);
        WeierstrassCurve {
            g2: a * e - b * d * 4.0 + c * c * 3.0,
            g3: a * c * e + b * c * d * 2.0 - a * d * d - b * b * e - c * c * c,
        }
    }

    /// `θ = 2(ξ + C)`.
    pub fn theta_of_xi(&self, xi: Complex64) -> Complex64 {
        (xi + self.c) * 2.0
    }

    /// `ξ = θ/2 − C`.
    pub fn xi_of_theta(&self, theta: Complex64) -> Complex64 {
        theta * 0.5 - self.c
    }

    /// Largest absolute coefficient, used to scale residuals.
    pub fn scale(&self) -> f64 {
        self.coefficients().iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// The pencil `Φ_θ(x, y) = −(x−y)²θ² + 2R(x,y)θ + R̂(x,y)` at a fixed `θ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaFamily {
    pub curve: QuarticCurve,
    pub theta: Complex64,
}

impl ThetaFamily {
    /// `R_θ = R − θ(x−y)²`; `R_θ² + (x−y)² Φ_θ = P(x)P(y)`.
    pub fn r_theta(&self, x: Complex64, y: Complex64) -> Complex64 {
        let d = x - y;
        self.curve.r(x, y) - self.theta * d * d
    }

    pub fn phi(&self, x: Complex64, y: Complex64) -> Complex64 {
        let d = x - y;
        let t = self.theta;
        -d * d * t * t + self.curve.r(x, y) * t * 2.0 + self.curve.r_hat(x, y)
    }

    /// `|R_θ² + (x−y)²Φ_θ − P(x)P(y)| / (1 + |P(x)P(y)|)`.
    pub fn pencil_residual(&self, x: Complex64, y: Complex64) -> f64 {
        let r = self.r_theta(x, y);
        let d = x - y;
        relative_residual(r * r + d * d * self.phi(x, y), self.curve.eval(x) * self.curve.eval(y))
    }

    /// Coefficient of `y²` in `Φ_θ(x, y)`.
    pub fn a(&self, x: Complex64) -> Complex64 {
        let QuarticCurve { a, b, c, d, e } = self.curve;
        let t = self.theta;
        let t3 = t - c * 3.0;
        (e * t * 2.0 - d * d * 4.0) * x * x + (d * t * 4.0 + (b * e - c * d * 3.0) * 4.0) * x + a * e - t3 * t3
    }

    /// Half the coefficient of `y` in `Φ_θ(x, y)`.
    pub fn b(&self, x: Complex64) -> Complex64 {
        let QuarticCurve { a, b, c, d, e } = self.curve;
        let t = self.theta;
        (d * t * 2.0 + (b * e - c * d * 3.0) * 2.0) * x * x
            + (t * t - c * c * 9.0 + a * e + b * d * 4.0) * x
            + b * t * 2.0
            + (a * d - b * c * 3.0) * 2.0
    }

    /// Constant coefficient of `Φ_θ(x, y)` in `y`.
    pub fn c(&self, x: Complex64) -> Complex64 {
        let QuarticCurve { a, b, c, d, e } = self.curve;
        let t = self.theta;
        let t3 = t - c * 3.0;
        (a * e - t3 * t3) * x * x + (b * t * 4.0 + (a * d - b * c * 3.0) * 4.0) * x + a * t * 2.0 - b * b * 4.0
    }

    /// Discriminant `G_θ(x) = b_θ(x)² − a_θ(x) c_θ(x)`.
    pub fn discriminant(&self, x: Complex64) -> Complex64 {
        let b = self.b(x);
        b * b - self.a(x) * self.c(x)
    }

    pub fn p(&self) -> Complex64 {
        self.curve.p_theta(self.theta)
    }

    /// `|G_θ(x) − p(θ)P(x)| / (1 + |p(θ)P(x)|)`.
    pub fn discriminant_residual(&self, x: Complex64) -> f64 {
        relative_residual(self.discriminant(x), self.p() * self.curve.eval(x))
    }
}

/// `Γ: η² = 4ξ³ − g2 ξ − g3`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeierstrassCurve {
    pub g2: Complex64,
    pub g3: Complex64,
}

impl WeierstrassCurve {
    pub fn rhs(&self, xi: Complex64) -> Complex64 {
        xi * xi * xi * 4.0 - self.g2 * xi - self.g3
    }
}

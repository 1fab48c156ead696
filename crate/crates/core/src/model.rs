//! Coefficients of the GMR diffusion and its Feynman–Kac operator.
//!
//! The process is `dX = k(α − X)X dt + σX dW` and the value function
//! solves `u_t = ½σ²x²u_xx + kx(α − x)u_x + λx²u` on `x > 0`.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};

/// Relative tolerance for `λ = k²/(2σ²)` in [`ModelParams::symmetric_case`].
pub const SYMMETRIC_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Reversion speed.
    pub k: f64,
    /// Long-run level.
    pub alpha: f64,
    /// Volatility.
    pub sigma: f64,
    /// Coefficient of the potential `c(x) = λx²`.
    pub lambda: f64,
}

impl ModelParams {
    pub fn new(k: f64, alpha: f64, sigma: f64, lambda: f64) -> Result<Self> {
        let p = ModelParams {
            k,
            alpha,
            sigma,
            lambda,
        };
        p.validate()?;
        Ok(p)
    }

    /// The six-dimensional symmetry case: `α = 0`, `λ = k²/(2σ²)`.
    pub fn symmetric(k: f64, sigma: f64) -> Result<Self> {
        Self::new(k, 0.0, sigma, k * k / (2.0 * sigma * sigma))
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("k", self.k),
            ("alpha", self.alpha),
            ("sigma", self.sigma),
            ("lambda", self.lambda),
        ] {
            ensure_finite(name, v)?;
        }
        if self.k <= 0.0 {
            return Err(Error::Domain(format!("k>0 required, got {}", self.k)));
        }
        if self.sigma <= 0.0 {
            return Err(Error::Domain(format!(
                "sigma>0 required, got {}",
                self.sigma
            )));
        }
        if self.alpha < 0.0 {
            return Err(Error::Domain(format!(
                "alpha>=0 required, got {}",
                self.alpha
            )));
        }
        Ok(())
    }

    pub fn symmetric_lambda(&self) -> f64 {
        self.k * self.k / (2.0 * self.sigma * self.sigma)
    }

    pub fn symmetric_case(&self) -> bool {
        let target = self.symmetric_lambda();
        self.alpha == 0.0 && (self.lambda - target).abs() <= SYMMETRIC_RTOL * target
    }

    pub fn require_symmetric(&self) -> Result<()> {
        self.validate()?;
        if self.symmetric_case() {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "symmetric case alpha=0, lambda=k^2/(2 sigma^2) required (alpha={}, lambda={}, k^2/(2 sigma^2)={})",
                self.alpha,
                self.lambda,
                self.symmetric_lambda()
            )))
        }
    }

    /// `k/σ²`, the exponent rate shared by every invariant solution.
    pub fn kappa(&self) -> f64 {
        self.k / (self.sigma * self.sigma)
    }

    /// Potential `c(x) = λx²`.
    pub fn potential(&self, x: f64) -> f64 {
        self.lambda * x * x
    }

    /// Drift of the SDE in `x`.
    pub fn drift(&self, x: f64) -> f64 {
        self.k * (self.alpha - x) * x
    }
}

/// A point `(t, x, u)` of the jet space the symmetry groups act on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PdePoint {
    pub t: f64,
    pub x: f64,
    pub u: f64,
}

impl PdePoint {
    pub fn new(t: f64, x: f64, u: f64) -> Result<Self> {
        ensure_finite("t", t)?;
        ensure_finite("x", x)?;
        ensure_finite("u", u)?;
        if x <= 0.0 {
            return Err(Error::Domain(format!("x>0 required, got x={x}")));
        }
        Ok(PdePoint { t, x, u })
    }
}

/// Value and first/second partial derivatives of a function `u(t, x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Derivs {
    pub u: f64,
    pub u_t: f64,
    pub u_x: f64,
    pub u_xx: f64,
}

/// `½σ²x²u_xx + kx(α−x)u_x + λx²u − u_t`; zero on exact solutions.
pub fn pde_operator(p: &ModelParams, d: &Derivs, x: f64) -> Result<f64> {
    for (name, v) in [
        ("u", d.u),
        ("u_t", d.u_t),
        ("u_x", d.u_x),
        ("u_xx", d.u_xx),
        ("x", x),
    ] {
        ensure_finite(name, v)?;
    }
    if x <= 0.0 {
        return Err(Error::Domain(format!("x>0 required, got x={x}")));
    }
    let s2 = p.sigma * p.sigma;
    Ok(0.5 * s2 * x * x * d.u_xx + p.drift(x) * d.u_x + p.potential(x) * d.u - d.u_t)
}

/// Coefficients of the operator in `y = ln x`: `u_t = a·u_yy + b(y)·u_y + c(y)·u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogCoeffs {
    params: ModelParams,
}

impl LogCoeffs {
    /// Coefficients without the `k > 0` requirement of [`ModelParams`], so
    /// the pure diffusion limit `k = λ = 0` can be solved numerically.
    pub fn from_raw(k: f64, alpha: f64, sigma: f64, lambda: f64) -> Result<Self> {
        for (name, v) in [("k", k), ("alpha", alpha), ("sigma", sigma), ("lambda", lambda)] {
            ensure_finite(name, v)?;
        }
        if sigma <= 0.0 {
            return Err(Error::Domain(format!("sigma>0 required, got {sigma}")));
        }
        Ok(LogCoeffs {
            params: ModelParams {
                k,
                alpha,
                sigma,
                lambda,
            },
        })
    }

    pub fn diffusion(&self) -> f64 {
        0.5 * self.params.sigma * self.params.sigma
    }

    pub fn advection(&self, y: f64) -> f64 {
        let p = &self.params;
        p.k * (p.alpha - y.exp()) - 0.5 * p.sigma * p.sigma
    }

    pub fn reaction(&self, y: f64) -> f64 {
        self.params.lambda * (2.0 * y).exp()
    }

    /// `(a, b(y), c(y))`.
    pub fn at(&self, y: f64) -> (f64, f64, f64) {
        (self.diffusion(), self.advection(y), self.reaction(y))
    }

    /// `a·u_yy + b·u_y + c·u − u_t` given log-coordinate derivatives.
    pub fn residual(&self, y: f64, u: f64, u_t: f64, u_y: f64, u_yy: f64) -> f64 {
        let (a, b, c) = self.at(y);
        a * u_yy + b * u_y + c * u - u_t
    }
}

/// Change of variables `y = ln x` used by the finite-difference solver.
///
/// Unlike the symmetry machinery this does not require the symmetric case.
pub fn to_log_coords(p: &ModelParams) -> LogCoeffs {
    LogCoeffs { params: *p }
}

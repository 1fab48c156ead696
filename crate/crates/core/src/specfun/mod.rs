//! Special functions pinned by their defining ODE and their values at 0.
//!
//! Airy and parabolic cylinder functions are propagated with exact Taylor
//! recurrences ([`crate::ode::TaylorLinear`]). Dominant branches are
//! integrated outward from 0. Recessive branches are integrated inward from
//! a far point and rescaled to the known data at 0, so the unwanted
//! solution decays along the integration path.

mod airy;
mod gamma;
mod pcf;

use serde::{Deserialize, Serialize};

pub use airy::{airy, Airy, AIRY_WINDOW};
pub use gamma::{cospi, gamma, gauss_integral, ln_gamma_complex, rgamma, sinpi};
pub use pcf::{pcf_u_v, pcf_w, PcfUV, PcfW, PCF_A_WINDOW, PCF_X_WINDOW};

/// A value with an a posteriori error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpecFunResult {
    pub value: f64,
    pub est_error: f64,
}

use crate::ode::ScaledState;

/// Rescale a trajectory so that its state at 0 best matches `(f0, df0)` in
/// the least-squares sense, and return the rescaled value and derivative at
/// the point where `at` was recorded, plus the relative mismatch at 0.
pub(crate) fn normalize_at_zero(at: &ScaledState, zero: &ScaledState, f0: f64, df0: f64) -> (f64, f64, f64) {
    let den = zero.y * zero.y + zero.dy * zero.dy;
    let alpha = (zero.y * f0 + zero.dy * df0) / den;
    let my = alpha * zero.y;
    let mdy = alpha * zero.dy;
    let mismatch = ((my - f0).powi(2) + (mdy - df0).powi(2)).sqrt() / (f0 * f0 + df0 * df0).sqrt();
    // fold alpha into the exponent so extreme scales neither overflow nor underflow early
    let s = alpha.signum() * (at.ln_scale - zero.ln_scale + alpha.abs().ln()).exp();
    (at.y * s, at.dy * s, mismatch)
}

use serde::{Deserialize, Serialize};

use super::gamma::gamma;
use super::normalize_at_zero;
use crate::error::{Error, Result};
use crate::ode::{Quadratic, ScaledState, TaylorLinear};

/// Accuracy window `|x| ≤ AIRY_WINDOW`.
pub const AIRY_WINDOW: f64 = 30.0;

/// `Ai, Ai', Bi, Bi'` at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Airy {
    pub ai: f64,
    pub aip: f64,
    pub bi: f64,
    pub bip: f64,
    /// Relative error estimate from the Wronskian defect and the rescaling mismatch.
    pub est_error: f64,
}

pub(crate) struct AiryInit {
    pub ai0: f64,
    pub aip0: f64,
    pub bi0: f64,
    pub bip0: f64,
}

pub(crate) fn airy_init() -> AiryInit {
    let g23 = gamma(2.0 / 3.0).expect("finite");
    let g13 = gamma(1.0 / 3.0).expect("finite");
    AiryInit {
        ai0: 3f64.powf(-2.0 / 3.0) / g23,
        aip0: -(3f64.powf(-1.0 / 3.0)) / g13,
        bi0: 3f64.powf(-1.0 / 6.0) / g23,
        bip0: 3f64.powf(1.0 / 6.0) / g13,
    }
}

fn stepper() -> TaylorLinear {
    TaylorLinear::new(Quadratic {
        c0: 0.0,
        c1: 1.0,
        c2: 0.0,
    })
}

/// Solution of `f'' = x·f` with data `(f0, df0)` at 0, integrated outward.
pub(crate) fn airy_forward(x: f64, f0: f64, df0: f64) -> (f64, f64) {
    stepper().propagate(ScaledState::new(0.0, f0, df0), x).unscaled()
}

/// `Ai` for `x > 0` by inward integration from a far point.
fn ai_recessive(x: f64, init: &AiryInit) -> (f64, f64, f64) {
    let far = (x.powf(1.5) + 30.0).powf(2.0 / 3.0);
    let tl = stepper();
    let start = ScaledState::new(far, 1.0, -far.sqrt());
    let at = tl.propagate(start, x);
    let zero = tl.propagate(at, 0.0);
    normalize_at_zero(&at, &zero, init.ai0, init.aip0)
}

/// Airy functions `Ai, Bi` and their derivatives for `|x| ≤ 30`.
pub fn airy(x: f64) -> Result<Airy> {
    if !x.is_finite() {
        return Err(Error::NonFinite(format!("airy argument {x}")));
    }
    if x.abs() > AIRY_WINDOW {
        return Err(Error::OutOfWindow {
            func: "airy",
            detail: format!("|x|<={AIRY_WINDOW} required, got x={x}"),
        });
    }
    let init = airy_init();
    let (bi, bip) = airy_forward(x, init.bi0, init.bip0);
    let (ai, aip, mismatch) = if x > 0.0 {
        ai_recessive(x, &init)
    } else {
        let (a, ap) = airy_forward(x, init.ai0, init.aip0);
        (a, ap, 0.0)
    };
    let wr = ai * bip - aip * bi;
    let defect = (wr * std::f64::consts::PI - 1.0).abs();
    Ok(Airy {
        ai,
        aip,
        bi,
        bip,
        est_error: defect.max(mismatch).max(f64::EPSILON),
    })
}

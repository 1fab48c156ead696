//! Parabolic cylinder functions.
//!
//! `U(a,x)`, `V(a,x)` solve `f'' = (x²/4 + a)f` and `W(a,±x)` solve
//! `f'' = (a − x²/4)f`, all with the standard handbook normalization fixed
//! through their values at `x = 0`:
//!
//! ```text
//! U(a,0)  = √π / (2^{a/2+1/4} Γ(3/4 + a/2))
//! U'(a,0) = −√π / (2^{a/2−1/4} Γ(1/4 + a/2))
//! V(a,0)  = 2^{a/2+1/4} sin(π(3/4 − a/2)) / Γ(3/4 − a/2)
//! V'(a,0) = 2^{a/2+3/4} sin(π(1/4 − a/2)) / Γ(1/4 − a/2)
//! W(a,0)  = 2^{−3/4} |Γ(1/4 + ia/2) / Γ(3/4 + ia/2)|^{1/2}
//! W'(a,0) = −2^{−1/4} |Γ(3/4 + ia/2) / Γ(1/4 + ia/2)|^{1/2}
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gamma::{cospi, ln_gamma_complex, rgamma, sinpi};
use super::normalize_at_zero;
use crate::error::{Error, Result};
use crate::ode::{Quadratic, ScaledState, TaylorLinear};

/// Parameter window `|a| ≤ PCF_A_WINDOW`.
pub const PCF_A_WINDOW: f64 = 10.0;
/// Argument window `|x| ≤ PCF_X_WINDOW`.
pub const PCF_X_WINDOW: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PcfUV {
    pub u: f64,
    pub up: f64,
    pub v: f64,
    pub vp: f64,
    pub est_error: f64,
}

/// `W(a,x)`, `W'(a,x)`, `W(a,−x)` and `W'(a,−x)`; primes are derivatives
/// with respect to the argument.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PcfW {
    pub w: f64,
    pub wp: f64,
    pub wm: f64,
    pub wmp: f64,
    pub est_error: f64,
}

fn check_window(func: &'static str, a: f64, x: f64) -> Result<()> {
    if !a.is_finite() || !x.is_finite() {
        return Err(Error::NonFinite(format!("{func}(a={a}, x={x})")));
    }
    if a.abs() > PCF_A_WINDOW || x.abs() > PCF_X_WINDOW {
        return Err(Error::OutOfWindow {
            func,
            detail: format!("|a|<={PCF_A_WINDOW}, |x|<={PCF_X_WINDOW} required, got a={a}, x={x}"),
        });
    }
    Ok(())
}

fn uv_stepper(a: f64) -> TaylorLinear {
    TaylorLinear::new(Quadratic {
        c0: a,
        c1: 0.0,
        c2: 0.25,
    })
}

fn w_stepper(a: f64) -> TaylorLinear {
    TaylorLinear::new(Quadratic {
        c0: a,
        c1: 0.0,
        c2: -0.25,
    })
}

pub(crate) fn uv_init(a: f64) -> (f64, f64, f64, f64) {
    let sp = PI.sqrt();
    let u0 = sp * 2f64.powf(-(a / 2.0 + 0.25)) * rgamma(0.75 + a / 2.0);
    let up0 = -sp * 2f64.powf(-(a / 2.0 - 0.25)) * rgamma(0.25 + a / 2.0);
    let v0 = 2f64.powf(a / 2.0 + 0.25) * sinpi(0.75 - a / 2.0) * rgamma(0.75 - a / 2.0);
    let vp0 = 2f64.powf(a / 2.0 + 0.75) * sinpi(0.25 - a / 2.0) * rgamma(0.25 - a / 2.0);
    (u0, up0, v0, vp0)
}

/// `U, U', V, V'` for `x ≥ 0`.
fn uv_nonneg(a: f64, x: f64) -> (f64, f64, f64, f64, f64) {
    let (u0, up0, v0, vp0) = uv_init(a);
    let tl = uv_stepper(a);
    let turn = 2.0 * (-a).max(0.0).sqrt();
    let far = x.max(turn) + 10.0;
    let q_far = far * far / 4.0 + a;
    let start = ScaledState::new(far, 1.0, -q_far.sqrt());
    let at = tl.propagate(start, x);
    let zero = tl.propagate(at, 0.0);
    let (u, up, mismatch) = normalize_at_zero(&at, &zero, u0, up0);
    let (v, vp) = tl.propagate(ScaledState::new(0.0, v0, vp0), x).unscaled();
    (u, up, v, vp, mismatch)
}

/// Parabolic cylinder functions `U(a,x)`, `V(a,x)` and their
/// `x`-derivatives for `|a| ≤ 10`, `|x| ≤ 30`.
pub fn pcf_u_v(a: f64, x: f64) -> Result<PcfUV> {
    check_window("pcf_u_v", a, x)?;
    let (u, up, v, vp, mismatch) = uv_nonneg(a, x.abs());
    let (u, up, v, vp) = if x >= 0.0 {
        (u, up, v, vp)
    } else {
        let s = sinpi(a);
        let cu = PI * rgamma(0.5 + a);
        let cv = cospi(a) * rgamma(0.5 - a);
        let um = -s * u + cu * v;
        let vm = cv * u + s * v;
        // d/dx of f(−x) flips the sign of the derivative
        let ump = -(-s * up + cu * vp);
        let vmp = -(cv * up + s * vp);
        (um, ump, vm, vmp)
    };
    for (n, val) in [("U", u), ("U'", up), ("V", v), ("V'", vp)] {
        if !val.is_finite() {
            return Err(Error::NonFinite(format!("{n}(a={a}, x={x}) overflowed")));
        }
    }
    let wr = u * vp - up * v;
    let defect = (wr / (2.0 / PI).sqrt() - 1.0).abs();
    Ok(PcfUV {
        u,
        up,
        v,
        vp,
        est_error: defect.max(mismatch).max(f64::EPSILON),
    })
}

pub(crate) fn w_init(a: f64) -> (f64, f64) {
    let lg1 = ln_gamma_complex(Complex64::new(0.25, a / 2.0)).expect("Re>0");
    let lg3 = ln_gamma_complex(Complex64::new(0.75, a / 2.0)).expect("Re>0");
    let d = (lg1.re - lg3.re) / 2.0;
    (2f64.powf(-0.75) * d.exp(), -(2f64.powf(-0.25)) * (-d).exp())
}

/// Large-`x` expansion of `W(a,x)` and its derivative.
pub(crate) fn w_asymptotic(a: f64, x: f64) -> (f64, f64) {
    let epa = (PI * a).exp();
    let k = 1.0 / ((1.0 + epa * epa).sqrt() + epa);
    let phi2 = ln_gamma_complex(Complex64::new(0.5, a)).expect("Re>0").im;
    let omega = x * x / 4.0 - a * x.ln() + PI / 4.0 + phi2 / 2.0;
    let domega = x / 2.0 - a / x;

    let z = Complex64::new(0.5, a);
    let mut poch = Complex64::new(1.0, 0.0);
    let mut s1 = 1.0;
    let mut s2 = 0.0;
    let mut ds1 = 0.0;
    let mut ds2 = 0.0;
    let mut fact = 1.0;
    let mut prev = f64::INFINITY;
    let two_x2 = 2.0 * x * x;
    let mut pow = 1.0;
    for m in 1..60usize {
        let r = 2 * m;
        poch *= z + (r - 2) as f64;
        poch *= z + (r - 1) as f64;
        fact *= m as f64;
        pow *= two_x2;
        let d = fact * pow;
        let (u, v) = (poch.re, poch.im);
        let (t1, t2) = match m % 4 {
            1 => (v, -u),
            2 => (-u, -v),
            3 => (-v, u),
            _ => (u, v),
        };
        let (t1, t2) = (t1 / d, t2 / d);
        let mag = t1.abs().max(t2.abs());
        if mag > prev {
            break;
        }
        s1 += t1;
        s2 += t2;
        let dfac = -(r as f64) / x;
        ds1 += dfac * t1;
        ds2 += dfac * t2;
        prev = mag;
        if mag < 1e-18 {
            break;
        }
    }
    let (so, co) = omega.sin_cos();
    let amp = (2.0 * k).sqrt();
    let xs = x.sqrt();
    let core = s1 * co - s2 * so;
    let dcore = ds1 * co - ds2 * so - domega * (s1 * so + s2 * co);
    let w = amp * core / xs;
    let wp = amp * (-0.5 * core / (x * xs) + dcore / xs);
    (w, wp)
}

/// `W(a,x), W'(a,x)` for `x ≥ 0`, plus the rescaling mismatch.
fn w_plus(a: f64, x: f64, w0: f64, wp0: f64) -> (f64, f64, f64) {
    let tl = w_stepper(a);
    if a <= 1.5 {
        let (w, wp) = tl.propagate(ScaledState::new(0.0, w0, wp0), x).unscaled();
        return (w, wp, 0.0);
    }
    let far = x.max(2.0 * a.sqrt()) + 25.0;
    let (wf, wpf) = w_asymptotic(a, far);
    let at = tl.propagate(ScaledState::new(far, wf, wpf), x);
    let zero = tl.propagate(at, 0.0);
    normalize_at_zero(&at, &zero, w0, wp0)
}

/// `W(a,±x)` and their argument-derivatives for `|a| ≤ 10`, `|x| ≤ 30`.
pub fn pcf_w(a: f64, x: f64) -> Result<PcfW> {
    check_window("pcf_w", a, x)?;
    let ax = x.abs();
    let (w0, wp0) = w_init(a);
    let (p, pp, mismatch) = w_plus(a, ax, w0, wp0);
    // g(s) = W(a,−s) solves the same equation with data (W(a,0), −W'(a,0))
    let (g, gp) = w_stepper(a)
        .propagate(ScaledState::new(0.0, w0, -wp0), ax)
        .unscaled();
    let (m, mp) = (g, -gp);
    let (w, wp, wm, wmp) = if x >= 0.0 { (p, pp, m, mp) } else { (m, mp, p, pp) };
    // Wronskian of x ↦ W(a,x) and x ↦ W(a,−x) is 1
    let wr = w * (-wmp) - wp * wm;
    let defect = (wr - 1.0).abs();
    Ok(PcfW {
        w,
        wp,
        wm,
        wmp,
        est_error: defect.max(mismatch).max(f64::EPSILON),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        if b == 0.0 {
            a.abs()
        } else {
            (a - b).abs() / b.abs()
        }
    }

    // (a, x, U, U', V, V') at 40 digits
    const UV: &[(f64, f64, f64, f64, f64, f64)] = &[
        (0.5, 1.3, 0.370_217_449_190_332_46, -0.414_764_912_353_124_4, 1.217_389_299_438_960_2, 0.791_303_044_635_324_1),
        (0.5, 0.0, 1.253_314_137_315_500_3, -1.0, 0.797_884_560_802_865_4, 0.0),
        (4.5, 1.0, 0.018_068_029_682_007_397, -0.039_937_215_974_924_95, 10.245_040_556_536_148, 21.514_585_168_725_91),
        (4.5, 2.0, 0.001_822_181_358_302_656_3, -0.004_360_081_086_034_403_5, 93.261_629_422_053_57, 214.718_635_181_007_05),
        (-3.7, 5.0, 0.286_171_897_300_110_6, -0.513_617_445_315_405_4, 0.906_710_555_078_944_8, 1.160_778_556_513_334_5),
        (2.5, 8.0, 2.013_035_825_596_948e-10, -8.765_443_989_658_976e-10, 460_855_875.343_574_4, 1_956_864_947.612_716),
        (-0.5, -2.0, 0.367_879_441_171_442_3, 0.367_879_441_171_442_3, -1.388_054_201_038_436_2, 0.780_820_901_800_018_9),
        (1.2, -3.0, 55.741_628_221_891_94, -97.154_218_948_186_07, -9.472_454_730_133_232, 16.524_218_161_018_85),
        (-6.3, 3.0, -6.272_360_261_057_779, 24.784_257_509_073_4, -0.025_149_709_992_952_344, -0.027_831_257_260_975_4),
        (10.0, 1.5, 4.846_527_238_931_737e-6, -1.584_448_626_803_308_7e-5, 25_315.455_459_601_62, 81_867.728_136_747_36),
        (-10.0, 12.0, 3.079_062_649_476_997e-6, -1.587_444_429_053_216_2e-5, 25_415.822_771_645_48, 128_098.237_359_131_44),
        (0.7, 25.0, 2.904_329_537_774_32e-70, -3.644_304_051_158_592_5e-69, 1.096_440_716_390_368_3e68, 1.371_429_175_521_303_7e69),
        (-2.5, -4.0, 0.274_734_583_331_012_7, 0.402_944_055_552_151_97, -1.218_554_345_187_601_6, 1.116_988_357_714_467),
        (3.0, -6.0, 566_962.473_394_986_4, -1_927_798.554_255_570_9, 2.032_031_478_590_442_8e-7, 7.163_610_383_381_863e-7),
        (-1.0, 0.0, 0.581_368_317_019_118_6, 0.608_140_107_128_760_1, -0.656_003_897_333_752_9, 0.686_212_627_559_326_2),
    ];

    // (a, x, W(a,x), W'(a,x), W(a,−x), W'(a,−x)) at 60+ digits
    const W: &[(f64, f64, f64, f64, f64, f64)] = &[
        (1.0, 0.7, 0.397_030_562_811_533_76, -0.316_668_565_791_538_2, 1.431_064_846_936_482_9, -1.377_291_318_566_600_5),
        (1.0, 0.0, 0.731_481_090_245_430_7, -0.683_544_669_394_306_7, 0.731_481_090_245_430_7, -0.683_544_669_394_306_7),
        (3.0, 4.0, 0.003_023_106_019_465_936_6, -0.006_799_315_693_377_804, 126.569_170_219_604_56, -46.116_892_272_493_12),
        (-2.0, 5.0, -0.218_735_891_671_058_35, 1.589_396_602_624_851_5, -0.548_176_181_242_657_2, 0.588_520_882_007_988_1),
        (8.0, 10.0, 1.042_310_990_162_177_5e-6, 2.491_816_881_442_573_8e-6, -102_377.499_867_091_92, -714_656.205_855_983_9),
        (0.3, 20.0, 0.084_417_964_832_116_45, 1.077_774_145_572_900_3, -0.575_426_486_184_188_1, -4.499_281_773_354_497),
        (5.5, 2.0, 0.005_243_997_651_141_697, -0.010_758_914_943_128_159, 45.189_282_967_370_43, -97.981_040_876_562_35),
        (-7.0, -9.0, 0.404_429_844_778_485_9, 0.890_067_122_555_313_8, -0.167_295_944_065_588_13, -2.104_432_675_873_682_7),
        (10.0, 30.0, -2.536_639_853_108_163_6e-8, 1.682_563_317_817_936e-7, -1_007_862.489_526_356, 32_737_038.076_347_664),
        (2.0, -15.0, 10.546_970_023_325_61, -42.687_323_804_263_65, 0.005_457_499_225_467_394, -0.072_725_527_967_234_95),
    ];

    #[test]
    fn uv_matches_high_precision_table() {
        for &(a, x, u, up, v, vp) in UV {
            let r = pcf_u_v(a, x).unwrap();
            let tol = 1e-8;
            assert!(rel(r.u, u) < tol, "U({a},{x}) = {} vs {u}", r.u);
            assert!(rel(r.up, up) < tol, "U'({a},{x}) = {} vs {up}", r.up);
            assert!(rel(r.v, v) < tol, "V({a},{x}) = {} vs {v}", r.v);
            if vp == 0.0 {
                assert!(r.vp.abs() < 1e-14);
            } else {
                assert!(rel(r.vp, vp) < tol, "V'({a},{x}) = {} vs {vp}", r.vp);
            }
        }
    }

    #[test]
    fn w_matches_high_precision_table() {
        for &(a, x, w, wp, wm, wmp) in W {
            let r = pcf_w(a, x).unwrap();
            let tol = 1e-7;
            assert!(rel(r.w, w) < tol, "W({a},{x}) = {} vs {w}", r.w);
            assert!(rel(r.wp, wp) < tol, "W'({a},{x}) = {} vs {wp}", r.wp);
            assert!(rel(r.wm, wm) < tol, "W({a},-{x}) = {} vs {wm}", r.wm);
            assert!(rel(r.wmp, wmp) < tol, "W'({a},-{x}) = {} vs {wmp}", r.wmp);
        }
    }

    #[test]
    fn w_asymptotic_far_value() {
        let (w, _) = w_asymptotic(10.0, 40.0);
        assert!(rel(w, 2.314_153_698_957_69e-8) < 1e-12);
    }

    #[test]
    fn closed_form_special_cases() {
        // U(−½, x) = exp(−x²/4)
        for x in [-3.0, -0.4, 0.0, 1.1, 6.0] {
            let r = pcf_u_v(-0.5, x).unwrap();
            let e = (-x * x / 4.0).exp();
            assert!(rel(r.u, e) < 1e-12, "x={x}");
            assert!(rel(r.up, -x / 2.0 * e) < 1e-11 || x == 0.0);
        }
    }

    #[test]
    fn uv_wronskian() {
        for (a, x) in [(0.5, 1.3), (-4.0, 2.0), (7.0, -1.0)] {
            let r = pcf_u_v(a, x).unwrap();
            assert!(rel(r.u * r.vp - r.up * r.v, (2.0 / PI).sqrt()) < 1e-9);
        }
    }

    #[test]
    fn windows_enforced() {
        assert!(matches!(pcf_u_v(10.5, 0.0), Err(Error::OutOfWindow { .. })));
        assert!(matches!(pcf_u_v(1.0, -31.0), Err(Error::OutOfWindow { .. })));
        assert!(matches!(pcf_w(-11.0, 0.0), Err(Error::OutOfWindow { .. })));
    }
}

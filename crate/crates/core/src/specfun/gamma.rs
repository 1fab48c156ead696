use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `sin(πx)`, exactly zero at the integers.
pub fn sinpi(x: f64) -> f64 {
    let r = x - 2.0 * (0.5 * x).round();
    if r == 0.0 || r.abs() == 1.0 {
        return 0.0;
    }
    if r > 0.5 {
        (PI * (1.0 - r)).sin()
    } else if r < -0.5 {
        (PI * (-1.0 - r)).sin()
    } else {
        (PI * r).sin()
    }
}

/// `cos(πx)`, exactly zero at the half-integers.
pub fn cospi(x: f64) -> f64 {
    sinpi(x + 0.5)
}

fn is_pole(z: f64) -> bool {
    z <= 0.0 && z == z.round()
}

fn lanczos_pos(z: f64) -> f64 {
    // z >= 0.5
    let z = z - 1.0;
    let mut a = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * a
}

/// Euler's Gamma function on the real line.
pub fn gamma(z: f64) -> Result<f64> {
    if !z.is_finite() {
        return Err(Error::NonFinite(format!("gamma argument {z}")));
    }
    if is_pole(z) {
        return Err(Error::Pole(z));
    }
    if z < 0.5 {
        Ok(PI / (sinpi(z) * lanczos_pos(1.0 - z)))
    } else if z > 171.7 {
        Err(Error::OutOfWindow {
            func: "gamma",
            detail: format!("overflow for z={z}"),
        })
    } else {
        Ok(lanczos_pos(z))
    }
}

/// `1/Γ(z)`, an entire function: zero at the poles of Gamma.
pub fn rgamma(z: f64) -> f64 {
    if is_pole(z) {
        return 0.0;
    }
    if z < 0.5 {
        sinpi(z) * lanczos_pos(1.0 - z) / PI
    } else if z > 171.7 {
        0.0
    } else {
        1.0 / lanczos_pos(z)
    }
}

// B_{2n} / (2n(2n-1)) for n = 1..8
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Complex log-Gamma for `Re z > 0`, on the branch continuous from the
/// positive real axis.
pub fn ln_gamma_complex(z: Complex64) -> Result<Complex64> {
    if !(z.re > 0.0) || !z.im.is_finite() {
        return Err(Error::Domain(format!(
            "ln_gamma_complex requires Re z > 0, got {z}"
        )));
    }
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < 15.0 || w.re < 15.0 {
        shift += w.ln();
        w += 1.0;
    }
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        series += c * p;
        p *= inv2;
    }
    Ok((w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + series - shift)
}

/// `∫₀^y exp(−s²/(2σ²)) ds = σ√(π/2)·erf(y/(σ√2))`.
pub fn gauss_integral(y: f64, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::Domain(format!("sigma>0 required, got {sigma}")));
    }
    if y.is_nan() {
        return Err(Error::NonFinite(format!("y = {y}")));
    }
    Ok(sigma * (PI / 2.0).sqrt() * libm::erf(y / (sigma * std::f64::consts::SQRT_2)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn gamma_known_values() {
        assert!(rel(gamma(0.5).unwrap(), PI.sqrt()) < 1e-14);
        assert!(rel(gamma(1.0).unwrap(), 1.0) < 1e-14);
        assert!(rel(gamma(2.0 / 3.0).unwrap(), 1.354_117_939_426_400_4) < 1e-13);
        assert!(rel(gamma(0.1).unwrap(), 9.513_507_698_668_731_8) < 1e-13);
        assert!(rel(gamma(30.0).unwrap(), 8.841_761_993_739_701_9e30) < 1e-12);
        assert!(rel(gamma(-1.5).unwrap(), 2.363_271_801_207_354_7) < 1e-13);
        assert!(rel(gamma(7.3).unwrap(), 1_271.423_633_663_909_3) < 1e-13);
    }

    #[test]
    fn gamma_poles() {
        for z in [0.0, -1.0, -2.0, -7.0] {
            assert!(matches!(gamma(z), Err(Error::Pole(_))));
            assert_eq!(rgamma(z), 0.0);
        }
    }

    #[test]
    fn trig_pi_exact_zeros() {
        assert_eq!(sinpi(3.0), 0.0);
        assert_eq!(sinpi(-4.0), 0.0);
        assert_eq!(cospi(2.5), 0.0);
        assert!((sinpi(0.5) - 1.0).abs() < 1e-16);
        assert!((sinpi(-1.25) - (-1.25 * PI).sin()).abs() < 1e-15);
        assert!((cospi(0.3) - (0.3 * PI).cos()).abs() < 1e-15);
    }

    #[test]
    fn complex_ln_gamma_matches_real() {
        for x in [0.25, 0.75, 1.0, 3.5, 12.0] {
            let c = ln_gamma_complex(Complex64::new(x, 0.0)).unwrap();
            assert!((c.re - gamma(x).unwrap().ln()).abs() < 1e-13);
            assert_eq!(c.im, 0.0);
        }
    }

    #[test]
    fn complex_ln_gamma_modulus_identity() {
        // |Γ(½+iy)|² = π/cosh(πy)
        for y in [0.3, 1.0, 5.0] {
            let c = ln_gamma_complex(Complex64::new(0.5, y)).unwrap();
            let expect = 0.5 * (PI / (PI * y).cosh()).ln();
            assert!((c.re - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn gauss_integral_values() {
        assert_eq!(gauss_integral(0.0, 2.0).unwrap(), 0.0);
        assert!(rel(gauss_integral(1.0, 1.0).unwrap(), 0.855_624_391_892_148_8) < 1e-13);
        assert!(rel(gauss_integral(-1.7, 2.0).unwrap(), -1.515_695_235_777_380_2) < 1e-13);
        assert!(rel(gauss_integral(40.0, 1.0).unwrap(), (PI / 2.0).sqrt()) < 1e-15);
        assert!(gauss_integral(1.0, 0.0).is_err());
    }
}

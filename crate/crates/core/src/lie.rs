//! The six-dimensional symmetry algebra of the symmetric-case equation.
//!
//! Basis (with `ξ = ln x`, `κ = k/σ²`):
//!
//! ```text
//! V1 = ∂t
//! V2 = t∂t + ½xξ∂x + (½κxξ + ¼ξ − σ²t/8)u∂u
//! V3 = t²∂t + txξ∂x + (κtxξ − ξ²/(2σ²) + ½tξ − σ²t²/8 − ½t)u∂u
//! V4 = x∂x + κxu∂u
//! V5 = tx∂x + (κtx − ξ/σ² + ½t)u∂u
//! V6 = u∂u
//! ```
//!
//! Nonzero brackets (`s = σ²`):
//! `[V1,V2] = V1 − s/8 V6`, `[V1,V3] = 2V2 − ½V6`, `[V1,V5] = V4 + ½V6`,
//! `[V2,V3] = V3`, `[V2,V4] = −½V4 − ¼V6`, `[V2,V5] = ½V5`,
//! `[V3,V4] = −V5`, `[V4,V5] = −V6/s`.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::ode::dopri45;

pub type Vec6 = [f64; 6];

/// Ordered list of `(generator index 1..=6, ε)` adjoint maps.
pub type GroupWord = Vec<(u8, f64)>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgebraElement {
    pub a: Vec6,
    pub sigma: f64,
}

fn e(i: usize) -> Vec6 {
    let mut v = [0.0; 6];
    v[i - 1] = 1.0;
    v
}

fn axpy(acc: &mut Vec6, c: f64, v: &Vec6) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a += c * b;
    }
}

fn norm_inf(v: &Vec6) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `[V_i, V_j]` in coordinates, 1-based indices.
pub fn basis_bracket(i: usize, j: usize, sigma: f64) -> Vec6 {
    let s2 = sigma * sigma;
    let (lo, hi, sign) = if i <= j { (i, j, 1.0) } else { (j, i, -1.0) };
    let mut v = [0.0; 6];
    match (lo, hi) {
        (1, 2) => {
            v[0] = 1.0;
            v[5] = -s2 / 8.0;
        }
        (1, 3) => {
            v[1] = 2.0;
            v[5] = -0.5;
        }
        (1, 5) => {
            v[3] = 1.0;
            v[5] = 0.5;
        }
        (2, 3) => v[2] = 1.0,
        (2, 4) => {
            v[3] = -0.5;
            v[5] = -0.25;
        }
        (2, 5) => v[4] = 0.5,
        (3, 4) => v[4] = -1.0,
        (4, 5) => v[5] = -1.0 / s2,
        _ => {}
    }
    v.iter_mut().for_each(|c| *c *= sign);
    v
}

/// `Ad(exp(εV_i)) V_j` in closed form.
pub fn adjoint_basis(i: usize, eps: f64, j: usize, sigma: f64) -> Vec6 {
    let s2 = sigma * sigma;
    let mut v = e(j);
    match (i, j) {
        (1, 2) => {
            v[0] = -eps;
            v[5] = eps * s2 / 8.0;
        }
        (1, 3) => {
            v[0] = eps * eps;
            v[1] = -2.0 * eps;
            v[5] = (4.0 * eps - s2 * eps * eps) / 8.0;
        }
        (1, 5) => {
            v[3] = -eps;
            v[5] = -0.5 * eps;
        }
        (2, 1) => {
            let ee = eps.exp();
            v[0] = ee;
            v[5] = s2 / 8.0 * (1.0 - ee);
        }
        (2, 3) => v[2] = (-eps).exp(),
        (2, 4) => {
            let eh = (0.5 * eps).exp();
            v[3] = eh;
            v[5] = 0.5 * (eh - 1.0);
        }
        (2, 5) => v[4] = (-0.5 * eps).exp(),
        (3, 1) => {
            v[1] = 2.0 * eps;
            v[2] = eps * eps;
            v[5] = -0.5 * eps;
        }
        (3, 2) => v[2] = eps,
        (3, 4) => v[4] = eps,
        (4, 2) => {
            v[3] = -0.5 * eps;
            v[5] = -0.25 * eps;
        }
        (4, 3) => {
            v[4] = -eps;
            v[5] = -eps * eps / (2.0 * s2);
        }
        (4, 5) => v[5] = eps / s2,
        (5, 1) => {
            v[3] = eps;
            v[5] = 0.5 * eps - eps * eps / (2.0 * s2);
        }
        (5, 2) => v[4] = 0.5 * eps,
        (5, 4) => v[5] = -eps / s2,
        _ => {}
    }
    v
}

fn check_index(i: usize) -> Result<()> {
    if (1..=6).contains(&i) {
        Ok(())
    } else {
        Err(Error::Invalid(format!("generator index must be in 1..=6, got {i}")))
    }
}

impl AlgebraElement {
    pub fn new(a: Vec6, sigma: f64) -> Result<Self> {
        for (n, v) in a.iter().enumerate() {
            ensure_finite(&format!("a{}", n + 1), *v)?;
        }
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::Domain(format!("sigma>0 required, got {sigma}")));
        }
        Ok(AlgebraElement { a, sigma })
    }

    pub fn basis(i: usize, sigma: f64) -> Result<Self> {
        check_index(i)?;
        Self::new(e(i), sigma)
    }

    pub fn norm_inf(&self) -> f64 {
        norm_inf(&self.a)
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|&c| c == 0.0)
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut a = self.a;
        a.iter_mut().for_each(|v| *v *= c);
        AlgebraElement { a, sigma: self.sigma }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_sigma(self, other)?;
        let mut a = self.a;
        axpy(&mut a, 1.0, &other.a);
        Ok(AlgebraElement { a, sigma: self.sigma })
    }
}

fn same_sigma(x: &AlgebraElement, y: &AlgebraElement) -> Result<()> {
    if x.sigma == y.sigma {
        Ok(())
    } else {
        Err(Error::SigmaMismatch(x.sigma, y.sigma))
    }
}

/// Lie bracket, summed over `i < j` with weights `x_i y_j − x_j y_i` so that
/// `[X, Y] = −[Y, X]` holds exactly in floating point.
pub fn commutator(x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
    same_sigma(x, y)?;
    let mut out = [0.0; 6];
    for i in 1..=6 {
        for j in i + 1..=6 {
            let c = x.a[i - 1] * y.a[j - 1] - x.a[j - 1] * y.a[i - 1];
            if c != 0.0 {
                axpy(&mut out, c, &basis_bracket(i, j, x.sigma));
            }
        }
    }
    Ok(AlgebraElement {
        a: out,
        sigma: x.sigma,
    })
}

/// `Ad(exp(εV_i)) Y` from the closed-form table.
pub fn adjoint(i: usize, eps: f64, y: &AlgebraElement) -> Result<AlgebraElement> {
    check_index(i)?;
    ensure_finite("eps", eps)?;
    let mut out = [0.0; 6];
    for j in 1..=6 {
        let c = y.a[j - 1];
        if c != 0.0 {
            axpy(&mut out, c, &adjoint_basis(i, eps, j, y.sigma));
        }
    }
    Ok(AlgebraElement {
        a: out,
        sigma: y.sigma,
    })
}

/// `Ad(exp(εV_i)) Y` by integrating `dZ/dε = −[V_i, Z]`; a test oracle for
/// [`adjoint`].
pub fn adjoint_flow(i: usize, eps: f64, y: &AlgebraElement) -> Result<AlgebraElement> {
    check_index(i)?;
    let sigma = y.sigma;
    let out = dopri45(
        |_e, z, dz| {
            dz.iter_mut().for_each(|v| *v = 0.0);
            for (j, &zj) in z.iter().enumerate() {
                if zj != 0.0 {
                    let b = basis_bracket(i, j + 1, sigma);
                    for m in 0..6 {
                        dz[m] -= zj * b[m];
                    }
                }
            }
            Ok(())
        },
        0.0,
        &y.a,
        eps,
        1e-13,
        1e-15,
    )?;
    let mut a = [0.0; 6];
    a.copy_from_slice(&out);
    Ok(AlgebraElement { a, sigma })
}

/// Apply a word left to right: the first entry acts first.
pub fn apply_word(word: &[(u8, f64)], x: &AlgebraElement) -> Result<AlgebraElement> {
    word.iter()
        .try_fold(*x, |acc, &(i, eps)| adjoint(i as usize, eps, &acc))
}

/// `a2² − 4a1a3`, constant on adjoint orbits.
pub fn eta(x: &AlgebraElement) -> f64 {
    x.a[1] * x.a[1] - 4.0 * x.a[0] * x.a[2]
}

/// Largest `‖[X,[Y,Z]] + [Y,[Z,X]] + [Z,[X,Y]]‖∞` over the sample.
pub fn jacobi_check(sample: &[(AlgebraElement, AlgebraElement, AlgebraElement)]) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::Invalid("jacobi_check needs a nonempty sample".into()));
    }
    let mut worst: f64 = 0.0;
    for (x, y, z) in sample {
        let t1 = commutator(x, &commutator(y, z)?)?;
        let t2 = commutator(y, &commutator(z, x)?)?;
        let t3 = commutator(z, &commutator(x, y)?)?;
        let s = t1.add(&t2)?.add(&t3)?;
        worst = worst.max(s.norm_inf());
    }
    Ok(worst)
}

/// Classes of the optimal system of one-dimensional subalgebras.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RepClass {
    #[serde(rename = "V2_aV6")]
    V2aV6,
    #[serde(rename = "V1pV3_aV6")]
    V1pV3aV6,
    V1pV5,
    V1mV5,
    #[serde(rename = "V1_aV6")]
    V1aV6,
    V4,
    V6,
}

impl RepClass {
    pub const ALL: [RepClass; 7] = [
        RepClass::V2aV6,
        RepClass::V1pV3aV6,
        RepClass::V1pV5,
        RepClass::V1mV5,
        RepClass::V1aV6,
        RepClass::V4,
        RepClass::V6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RepClass::V2aV6 => "V2_aV6",
            RepClass::V1pV3aV6 => "V1pV3_aV6",
            RepClass::V1pV5 => "V1pV5",
            RepClass::V1mV5 => "V1mV5",
            RepClass::V1aV6 => "V1_aV6",
            RepClass::V4 => "V4",
            RepClass::V6 => "V6",
        }
    }

    pub fn has_parameter(self) -> bool {
        matches!(self, RepClass::V2aV6 | RepClass::V1pV3aV6 | RepClass::V1aV6)
    }

    /// Canonical representative, `a` ignored for parameter-free classes.
    pub fn representative(self, a: f64) -> Vec6 {
        let mut v = [0.0; 6];
        match self {
            RepClass::V2aV6 => {
                v[1] = 1.0;
                v[5] = a;
            }
            RepClass::V1pV3aV6 => {
                v[0] = 1.0;
                v[2] = 1.0;
                v[5] = a;
            }
            RepClass::V1pV5 => {
                v[0] = 1.0;
                v[4] = 1.0;
            }
            RepClass::V1mV5 => {
                v[0] = 1.0;
                v[4] = -1.0;
            }
            RepClass::V1aV6 => {
                v[0] = 1.0;
                v[5] = a;
            }
            RepClass::V4 => v[3] = 1.0,
            RepClass::V6 => v[5] = 1.0,
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimalRep {
    pub rep_class: RepClass,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub a: Option<f64>,
    pub scale: f64,
    pub word: GroupWord,
}

impl OptimalRep {
    pub fn representative(&self) -> Vec6 {
        self.rep_class.representative(self.a.unwrap_or(0.0))
    }

    /// `‖replay(word, X) − scale·rep‖∞ / max(1, ‖replay‖∞)`.
    pub fn replay_error(&self, x: &AlgebraElement) -> Result<f64> {
        let r = apply_word(&self.word, x)?;
        let rep = self.representative();
        let mut d: f64 = 0.0;
        for m in 0..6 {
            d = d.max((r.a[m] - self.scale * rep[m]).abs());
        }
        Ok(d / r.norm_inf().max(1.0))
    }
}

struct Reducer {
    v: AlgebraElement,
    word: GroupWord,
}

impl Reducer {
    fn apply(&mut self, i: u8, eps: f64) {
        if eps != 0.0 && eps.is_finite() {
            self.v = adjoint(i as usize, eps, &self.v).expect("valid index");
            self.word.push((i, eps));
        }
    }
    fn c(&self, i: usize) -> f64 {
        self.v.a[i - 1]
    }
}

/// Reduce `X` to a multiple of one representative of the optimal system.
///
/// The sign split on `η` uses `|η| ≤ 1e-10·(1 + ‖X‖²)` for the `η = 0`
/// branch. For `η > 0` the conjugating `V3` parameter is the root that
/// makes the `V2` coefficient `+√η`, so `a` is canonical; when `a1` is
/// too small for that root to be well conditioned a unit `V1` shift is
/// applied first.
pub fn classify(x: &AlgebraElement) -> Result<OptimalRep> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    let s2 = x.sigma * x.sigma;
    let n = x.norm_inf();
    let et = eta(x);
    let tol = 1e-10 * (1.0 + n * n);
    let mut r = Reducer {
        v: *x,
        word: Vec::new(),
    };

    if et > tol {
        let root = et.sqrt();
        let (a1, a2, a3) = (r.c(1), r.c(2), r.c(3));
        if a2 < 0.0 && a1.abs() < 1e-3 * (root - a2) {
            r.apply(1, if a3 >= 0.0 { 1.0 } else { -1.0 });
        }
        let (a1, a2, a3) = (r.c(1), r.c(2), r.c(3));
        let beta = if a2 >= 0.0 {
            -2.0 * a3 / (a2 + root)
        } else {
            (root - a2) / (2.0 * a1)
        };
        r.apply(3, beta);
        r.apply(1, r.c(1) / r.c(2));
        r.apply(4, 2.0 * r.c(4) / r.c(2));
        r.apply(5, -2.0 * r.c(5) / r.c(2));
        let scale = r.c(2);
        return Ok(OptimalRep {
            rep_class: RepClass::V2aV6,
            a: Some(r.c(6) / scale),
            scale,
            word: r.word,
        });
    }

    if et < -tol {
        r.apply(1, r.c(2) / (2.0 * r.c(3)));
        r.apply(2, 0.5 * (r.c(3) / r.c(1)).ln());
        let c = r.c(1);
        r.apply(4, r.c(5) / c);
        r.apply(5, -r.c(4) / c);
        return Ok(OptimalRep {
            rep_class: RepClass::V1pV3aV6,
            a: Some(r.c(6) / c),
            scale: c,
            word: r.word,
        });
    }

    let z = 1e-10 * n;
    if r.c(1).abs().max(r.c(2).abs()).max(r.c(3).abs()) > z {
        if r.c(1).abs() < r.c(3).abs() {
            r.apply(1, r.c(2) / (2.0 * r.c(3)) + 1.0);
        }
        r.apply(3, -r.c(2) / (2.0 * r.c(1)));
        let c = r.c(1);
        let (v4, v5) = (r.c(4), r.c(5));
        if v5.abs() > 1e-10 * c.abs().max(v5.abs()).max(v4.abs()) {
            r.apply(2, (2.0 / 3.0) * (v5 / c).abs().ln());
            let c = r.c(1);
            let s = (r.c(5) / c).signum();
            r.apply(1, r.c(4) / r.c(5));
            r.apply(4, -s2 * r.c(6) / r.c(5));
            return Ok(OptimalRep {
                rep_class: if s > 0.0 {
                    RepClass::V1pV5
                } else {
                    RepClass::V1mV5
                },
                a: None,
                scale: c,
                word: r.word,
            });
        }
        r.apply(5, -r.c(4) / c);
        return Ok(OptimalRep {
            rep_class: RepClass::V1aV6,
            a: Some(r.c(6) / c),
            scale: c,
            word: r.word,
        });
    }

    if r.c(4).abs() <= z && r.c(5).abs() > z {
        r.apply(1, 1.0);
    }
    if r.c(4).abs() > z {
        let c = r.c(4);
        r.apply(3, -r.c(5) / c);
        r.apply(5, s2 * r.c(6) / c);
        return Ok(OptimalRep {
            rep_class: RepClass::V4,
            a: None,
            scale: c,
            word: r.word,
        });
    }
    Ok(OptimalRep {
        rep_class: RepClass::V6,
        a: None,
        scale: r.c(6),
        word: r.word,
    })
}

//! Closed-form invariant solutions of the symmetric-case equation.
//!
//! With `κ = k/σ²` and `ξ = ln x`, every family except the two trivial
//! ones has the form
//!
//! ```text
//! u = x^{1/2} · exp(κx − σ²t/8) · h(t, ξ),     h_t = (σ²/2) h_ξξ,
//! ```
//!
//! and `h = exp(φ(t,ξ)) · F(z(t,ξ))` with `φ` quadratic and `z` affine in
//! `ξ`. Derivatives are assembled from hand-derived partials of `φ`, `z`
//! and the profile `F`, so the PDE residual is an independent check.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::model::{Derivs, ModelParams};
use crate::specfun::{airy, gauss_integral, pcf_u_v, pcf_w, PCF_A_WINDOW};

/// Smallest admissible time for families singular at `t = 0`.
pub const T_MIN: f64 = 1e-6;
/// Tolerance on `σ² + 8a` for the degenerate branch of the `V1 + aV6` family.
pub const EXP_ZERO_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyId {
    /// `(c1 + c2 x) e^{κx}`, time independent.
    Inv1,
    /// Error-function profile in `y = ln x / √t`.
    Inv2,
    /// Heat kernel times `c1 + c2 ln x / t`.
    Inv3,
    /// `c e^{κx}`.
    #[serde(rename = "Inv4_exp")]
    Inv4Exp,
    /// `c` times the heat kernel.
    Inv5,
    /// Parabolic cylinder `U, V` profile, scaling weight `t^a`.
    PcfUV,
    /// Parabolic cylinder `W` profile in `s = ln x / √(1+t²)`.
    PcfW,
    /// Airy profile in `ln x − t²/2`.
    AiryPlus,
    /// Airy profile in `−ln x − t²/2`.
    AiryMinus,
    /// `e^{at}` separable solution, `σ² + 8a > 0`.
    #[serde(rename = "ExpAt_pos")]
    ExpAtPos,
    /// `e^{at}` separable solution, `σ² + 8a = 0`.
    #[serde(rename = "ExpAt_zero")]
    ExpAtZero,
    /// `e^{at}` separable solution, `σ² + 8a < 0`.
    #[serde(rename = "ExpAt_neg")]
    ExpAtNeg,
}

impl FamilyId {
    pub const ALL: [FamilyId; 12] = [
        FamilyId::Inv1,
        FamilyId::Inv2,
        FamilyId::Inv3,
        FamilyId::Inv4Exp,
        FamilyId::Inv5,
        FamilyId::PcfUV,
        FamilyId::PcfW,
        FamilyId::AiryPlus,
        FamilyId::AiryMinus,
        FamilyId::ExpAtPos,
        FamilyId::ExpAtZero,
        FamilyId::ExpAtNeg,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::Inv1 => "Inv1",
            FamilyId::Inv2 => "Inv2",
            FamilyId::Inv3 => "Inv3",
            FamilyId::Inv4Exp => "Inv4_exp",
            FamilyId::Inv5 => "Inv5",
            FamilyId::PcfUV => "PcfUV",
            FamilyId::PcfW => "PcfW",
            FamilyId::AiryPlus => "AiryPlus",
            FamilyId::AiryMinus => "AiryMinus",
            FamilyId::ExpAtPos => "ExpAt_pos",
            FamilyId::ExpAtZero => "ExpAt_zero",
            FamilyId::ExpAtNeg => "ExpAt_neg",
        }
    }

    /// Whether the family is singular at `t = 0` and needs `t ≥ T_MIN`.
    pub fn needs_positive_time(self) -> bool {
        matches!(
            self,
            FamilyId::Inv2 | FamilyId::Inv3 | FamilyId::Inv5 | FamilyId::PcfUV
        )
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FamilyId::ALL
            .iter()
            .copied()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Invalid(format!("unknown family '{s}'")))
    }
}

/// A member of one of the invariant-solution families.
///
/// Single-constant families (`Inv4_exp`, `Inv5`) read `c1` as `c`; JSON
/// also accepts the key `"c"`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolutionFamily {
    pub family: FamilyId,
    #[serde(alias = "c")]
    pub c1: f64,
    #[serde(default)]
    pub c2: f64,
    #[serde(default)]
    pub a: f64,
    pub params: ModelParams,
}

/// Anything that can be evaluated as a function `u(t, x)`.
pub trait Solution: Send + Sync {
    fn eval(&self, t: f64, x: f64) -> Result<f64>;

    /// Closed-form `(u, u_t, u_x, u_xx)` if available.
    fn derivs(&self, _t: f64, _x: f64) -> Option<Result<Derivs>> {
        None
    }
}

/// `h = e^φ F(z)` with partials of `φ` and `z` and the profile jet.
struct HeatJet {
    phi: f64,
    phi_t: f64,
    phi_xi: f64,
    phi_xixi: f64,
    z_t: f64,
    z_xi: f64,
    f: f64,
    fp: f64,
    fpp: f64,
}

struct HJet {
    h: f64,
    h_t: f64,
    h_xi: f64,
    h_xixi: f64,
}

impl HeatJet {
    fn assemble(&self) -> HJet {
        let e = self.phi.exp();
        HJet {
            h: e * self.f,
            h_t: e * (self.phi_t * self.f + self.fp * self.z_t),
            h_xi: e * (self.phi_xi * self.f + self.fp * self.z_xi),
            h_xixi: e
                * ((self.phi_xixi + self.phi_xi * self.phi_xi) * self.f
                    + 2.0 * self.phi_xi * self.z_xi * self.fp
                    + self.z_xi * self.z_xi * self.fpp),
        }
    }
}

impl SolutionFamily {
    pub fn new(family: FamilyId, c1: f64, c2: f64, a: f64, params: ModelParams) -> Result<Self> {
        let f = SolutionFamily {
            family,
            c1,
            c2,
            a,
            params,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: SolutionFamily = serde_json::from_str(s)?;
        f.validate()?;
        Ok(f)
    }

    /// `σ² + 8a`, the discriminant of the `V1 + aV6` reduction.
    pub fn discriminant(&self) -> f64 {
        self.params.sigma * self.params.sigma + 8.0 * self.a
    }

    /// Parameter of the parabolic cylinder `W` profile, `(σ² + 8a)/8`.
    pub fn w_order(&self) -> f64 {
        self.discriminant() / 8.0
    }

    pub fn validate(&self) -> Result<()> {
        self.params.require_symmetric()?;
        for (n, v) in [("c1", self.c1), ("c2", self.c2), ("a", self.a)] {
            ensure_finite(n, v)?;
        }
        let d = self.discriminant();
        match self.family {
            FamilyId::ExpAtPos if d <= 0.0 => Err(Error::Domain(format!(
                "ExpAt_pos requires sigma^2+8a>0, got {d}"
            ))),
            FamilyId::ExpAtZero if d.abs() > EXP_ZERO_TOL => Err(Error::Domain(format!(
                "ExpAt_zero requires |sigma^2+8a|<={EXP_ZERO_TOL}, got {d}"
            ))),
            FamilyId::ExpAtNeg if d >= 0.0 => Err(Error::Domain(format!(
                "ExpAt_neg requires sigma^2+8a<0, got {d}"
            ))),
            FamilyId::PcfUV if (2.0 * self.a + 0.5).abs() > PCF_A_WINDOW => {
                Err(Error::OutOfWindow {
                    func: "PcfUV",
                    detail: format!("|2a+1/2|<={PCF_A_WINDOW} required, got a={}", self.a),
                })
            }
            FamilyId::PcfW if self.w_order().abs() > PCF_A_WINDOW => Err(Error::OutOfWindow {
                func: "PcfW",
                detail: format!(
                    "|(sigma^2+8a)/8|<={PCF_A_WINDOW} required, got {}",
                    self.w_order()
                ),
            }),
            _ => Ok(()),
        }
    }

    fn check_point(&self, t: f64, x: f64) -> Result<()> {
        ensure_finite("t", t)?;
        ensure_finite("x", x)?;
        if x <= 0.0 {
            return Err(Error::Domain(format!("x>0 required, got x={x}")));
        }
        if self.family.needs_positive_time() && t < T_MIN {
            return Err(Error::Domain(format!(
                "{} requires t>={T_MIN} (t>0), got t={t}",
                self.family
            )));
        }
        Ok(())
    }

    fn heat_jet(&self, t: f64, xi: f64) -> Result<HeatJet> {
        let s = self.params.sigma;
        let s2 = s * s;
        let (c1, c2, a) = (self.c1, self.c2, self.a);
        let jet = match self.family {
            FamilyId::Inv2 => {
                let rt = t.sqrt();
                let y = xi / rt;
                let g = gauss_integral(y, s)?;
                let gp = (-y * y / (2.0 * s2)).exp();
                HeatJet {
                    phi: 0.0,
                    phi_t: 0.0,
                    phi_xi: 0.0,
                    phi_xixi: 0.0,
                    z_t: -y / (2.0 * t),
                    z_xi: 1.0 / rt,
                    f: c1 * g + c2,
                    fp: c1 * gp,
                    fpp: -c1 * y / s2 * gp,
                }
            }
            FamilyId::Inv3 | FamilyId::Inv5 => {
                let c2 = if self.family == FamilyId::Inv5 { 0.0 } else { c2 };
                let z = xi / t;
                HeatJet {
                    phi: -0.5 * t.ln() - xi * xi / (2.0 * s2 * t),
                    phi_t: -0.5 / t + xi * xi / (2.0 * s2 * t * t),
                    phi_xi: -xi / (s2 * t),
                    phi_xixi: -1.0 / (s2 * t),
                    z_t: -z / t,
                    z_xi: 1.0 / t,
                    f: c1 + c2 * z,
                    fp: c2,
                    fpp: 0.0,
                }
            }
            FamilyId::PcfUV => {
                let p = 2.0 * a + 0.5;
                let rt = t.sqrt();
                let z = xi / (s * rt);
                let r = pcf_u_v(p, z)?;
                let f = c1 * r.u + c2 * r.v;
                HeatJet {
                    phi: a * t.ln() - xi * xi / (4.0 * s2 * t),
                    phi_t: a / t + xi * xi / (4.0 * s2 * t * t),
                    phi_xi: -xi / (2.0 * s2 * t),
                    phi_xixi: -1.0 / (2.0 * s2 * t),
                    z_t: -z / (2.0 * t),
                    z_xi: 1.0 / (s * rt),
                    f,
                    fp: c1 * r.up + c2 * r.vp,
                    fpp: (z * z / 4.0 + p) * f,
                }
            }
            FamilyId::PcfW => {
                let b = self.w_order();
                let q = 1.0 + t * t;
                let z = std::f64::consts::SQRT_2 * xi / (s * q.sqrt());
                let r = pcf_w(b, z)?;
                let f = c1 * r.w + c2 * r.wm;
                HeatJet {
                    phi: -0.25 * q.ln() + b * t.atan() - t * xi * xi / (2.0 * s2 * q),
                    phi_t: -t / (2.0 * q) + b / q - xi * xi / (2.0 * s2) * (1.0 - t * t) / (q * q),
                    phi_xi: -t * xi / (s2 * q),
                    phi_xixi: -t / (s2 * q),
                    z_t: -z * t / q,
                    z_xi: std::f64::consts::SQRT_2 / (s * q.sqrt()),
                    f,
                    fp: c1 * r.wp - c2 * r.wmp,
                    fpp: (b - z * z / 4.0) * f,
                }
            }
            FamilyId::AiryPlus | FamilyId::AiryMinus => {
                let sg = if self.family == FamilyId::AiryPlus { 1.0 } else { -1.0 };
                let c = (4.0 * s).powf(-4.0 / 3.0);
                let z = c * (s2 * s2 - 8.0 * sg * xi + 4.0 * t * t);
                let r = airy(z)?;
                let f = c1 * r.ai + c2 * r.bi;
                HeatJet {
                    phi: t * t * t / (3.0 * s2) - sg * t * xi / s2 + s2 * t / 8.0,
                    phi_t: t * t / s2 - sg * xi / s2 + s2 / 8.0,
                    phi_xi: -sg * t / s2,
                    phi_xixi: 0.0,
                    z_t: 8.0 * c * t,
                    z_xi: -8.0 * sg * c,
                    f,
                    fp: c1 * r.aip + c2 * r.bip,
                    fpp: z * f,
                }
            }
            FamilyId::ExpAtPos | FamilyId::ExpAtZero | FamilyId::ExpAtNeg => {
                let d = self.discriminant();
                let (f, fp, fpp) = match self.family {
                    FamilyId::ExpAtPos => {
                        let mu = d.sqrt() / (2.0 * s);
                        let (ep, em) = ((mu * xi).exp(), (-mu * xi).exp());
                        let f = c1 * ep + c2 * em;
                        (f, mu * (c1 * ep - c2 * em), mu * mu * f)
                    }
                    FamilyId::ExpAtZero => (c1 + c2 * xi, c2, 0.0),
                    _ => {
                        let nu = (-d).sqrt() / (2.0 * s);
                        let (sn, cs) = (nu * xi).sin_cos();
                        let f = c1 * cs + c2 * sn;
                        (f, nu * (c2 * cs - c1 * sn), -nu * nu * f)
                    }
                };
                let r = a + s2 / 8.0;
                HeatJet {
                    phi: r * t,
                    phi_t: r,
                    phi_xi: 0.0,
                    phi_xixi: 0.0,
                    z_t: 0.0,
                    z_xi: 1.0,
                    f,
                    fp,
                    fpp,
                }
            }
            FamilyId::Inv1 | FamilyId::Inv4Exp => unreachable!("not a heat-type family"),
        };
        Ok(jet)
    }

    /// `w = u·e^{−κx}` and its partials.
    fn w_jet(&self, t: f64, x: f64) -> Result<(f64, f64, f64, f64)> {
        match self.family {
            FamilyId::Inv1 => Ok((self.c1 + self.c2 * x, 0.0, self.c2, 0.0)),
            FamilyId::Inv4Exp => Ok((self.c1, 0.0, 0.0, 0.0)),
            _ => {
                let s2 = self.params.sigma * self.params.sigma;
                let xi = x.ln();
                let hj = self.heat_jet(t, xi)?.assemble();
                let e = (-s2 * t / 8.0).exp();
                let rx = x.sqrt();
                Ok((
                    rx * e * hj.h,
                    rx * e * (hj.h_t - s2 * hj.h / 8.0),
                    e / rx * (0.5 * hj.h + hj.h_xi),
                    e / (x * rx) * (-0.25 * hj.h + hj.h_xixi),
                ))
            }
        }
    }

    /// Closed-form value `u(t, x)`.
    pub fn eval(&self, t: f64, x: f64) -> Result<f64> {
        Ok(self.eval_derivs(t, x)?.u)
    }

    /// Closed-form `(u, u_t, u_x, u_xx)`.
    pub fn eval_derivs(&self, t: f64, x: f64) -> Result<Derivs> {
        self.check_point(t, x)?;
        let kap = self.params.kappa();
        let (w, w_t, w_x, w_xx) = self.w_jet(t, x)?;
        let e = (kap * x).exp();
        let d = Derivs {
            u: e * w,
            u_t: e * w_t,
            u_x: e * (w_x + kap * w),
            u_xx: e * (w_xx + 2.0 * kap * w_x + kap * kap * w),
        };
        for (n, v) in [("u", d.u), ("u_t", d.u_t), ("u_x", d.u_x), ("u_xx", d.u_xx)] {
            if !v.is_finite() {
                return Err(Error::NonFinite(format!(
                    "{n} of {} at (t={t}, x={x})",
                    self.family
                )));
            }
        }
        Ok(d)
    }

    /// Profile of the reduced ODE as a function of the similarity variable.
    fn profile(&self, v: f64) -> Result<f64> {
        let p = &self.params;
        let s = p.sigma;
        let s2 = s * s;
        let kap = p.kappa();
        let (c1, c2, a) = (self.c1, self.c2, self.a);
        Ok(match self.family {
            FamilyId::Inv1 => (c1 + c2 * v) * (kap * v).exp(),
            FamilyId::Inv4Exp => c1,
            FamilyId::Inv2 => c1 * gauss_integral(v, s)? + c2,
            FamilyId::Inv3 => c1 * v.sqrt() + c2 * v * v.sqrt(),
            FamilyId::Inv5 => c1 * v.powf(-0.5) * (-s2 * v / 8.0).exp(),
            FamilyId::PcfUV => {
                let r = pcf_u_v(2.0 * a + 0.5, v / s)?;
                (-v * v / (4.0 * s2)).exp() * (c1 * r.u + c2 * r.v)
            }
            FamilyId::PcfW => {
                let r = pcf_w(self.w_order(), std::f64::consts::SQRT_2 * v / s)?;
                c1 * r.w + c2 * r.wm
            }
            FamilyId::AiryPlus | FamilyId::AiryMinus => {
                let r = airy((4.0 * s).powf(-4.0 / 3.0) * (s2 * s2 - 8.0 * v))?;
                (0.5 * v).exp() * (c1 * r.ai + c2 * r.bi)
            }
            FamilyId::ExpAtPos | FamilyId::ExpAtZero | FamilyId::ExpAtNeg => {
                let xi = v.ln();
                let d = self.discriminant();
                let g = match self.family {
                    FamilyId::ExpAtPos => {
                        let mu = d.sqrt() / (2.0 * s);
                        c1 * (mu * xi).exp() + c2 * (-mu * xi).exp()
                    }
                    FamilyId::ExpAtZero => c1 + c2 * xi,
                    _ => {
                        let nu = (-d).sqrt() / (2.0 * s);
                        c1 * (nu * xi).cos() + c2 * (nu * xi).sin()
                    }
                };
                v.sqrt() * (kap * v).exp() * g
            }
        })
    }

    /// Residual of the family's reduced ODE at similarity variable `v`,
    /// with profile derivatives from 5-point central differences.
    ///
    /// Variables: `x` for `Inv1` and the `e^{at}` families, `y = ln x/√t`
    /// for `Inv2` and `PcfUV`, `z = ln x/t > 0` for `Inv3`, `t > 0` for
    /// `Inv5`, `s = ln x/√(1+t²)` for `PcfW`, `±ln x − t²/2` for the Airy
    /// families. `Inv4_exp` has no reduction and returns 0.
    pub fn reduced_ode_residual(&self, v: f64) -> Result<f64> {
        ensure_finite("similarity variable", v)?;
        let needs_pos = matches!(
            self.family,
            FamilyId::Inv1
                | FamilyId::Inv3
                | FamilyId::Inv5
                | FamilyId::ExpAtPos
                | FamilyId::ExpAtZero
                | FamilyId::ExpAtNeg
        );
        if self.family == FamilyId::Inv4Exp {
            return Ok(0.0);
        }
        let h = 1e-3 * v.abs().max(1.0);
        if needs_pos && v - 2.0 * h <= 0.0 {
            return Err(Error::Domain(format!(
                "{} reduced equation needs similarity variable >0 (got {v})",
                self.family
            )));
        }
        let fm2 = self.profile(v - 2.0 * h)?;
        let fm1 = self.profile(v - h)?;
        let f0 = self.profile(v)?;
        let fp1 = self.profile(v + h)?;
        let fp2 = self.profile(v + 2.0 * h)?;
        let d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
        let d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
        let p = &self.params;
        let (k, s2, a) = (p.k, p.sigma * p.sigma, self.a);
        Ok(match self.family {
            FamilyId::Inv1 => s2 * d2 - 2.0 * k * d1 + k * k / s2 * f0,
            FamilyId::Inv2 => s2 * d2 + v * d1,
            FamilyId::Inv3 => v * v * d2 - v * d1 + 0.75 * f0,
            FamilyId::Inv5 => d1 + (s2 / 8.0 + 0.5 / v) * f0,
            FamilyId::PcfUV => s2 * d2 + v * d1 - 2.0 * a * f0,
            FamilyId::PcfW => s2 * d2 + (v * v / s2 - (s2 + 8.0 * a) / 4.0) * f0,
            FamilyId::AiryPlus | FamilyId::AiryMinus => s2 * d2 - s2 * d1 + 2.0 / s2 * v * f0,
            FamilyId::ExpAtPos | FamilyId::ExpAtZero | FamilyId::ExpAtNeg => {
                s2 * v * v * d2 - 2.0 * k * v * v * d1 + k * k / s2 * v * v * f0 - 2.0 * a * f0
            }
            FamilyId::Inv4Exp => 0.0,
        })
    }
}

impl Solution for SolutionFamily {
    fn eval(&self, t: f64, x: f64) -> Result<f64> {
        SolutionFamily::eval(self, t, x)
    }

    fn derivs(&self, t: f64, x: f64) -> Option<Result<Derivs>> {
        Some(self.eval_derivs(t, x))
    }
}

/// One representative of every family, at `k = σ = 1` unless noted, used by
/// the catalog-wide checks.
pub fn catalog(params: ModelParams) -> Result<Vec<SolutionFamily>> {
    let s2 = params.sigma * params.sigma;
    let mk = |f, c1, c2, a| SolutionFamily::new(f, c1, c2, a, params);
    Ok(vec![
        mk(FamilyId::Inv1, 1.0, 0.5, 0.0)?,
        mk(FamilyId::Inv2, 2.0, -1.0, 0.0)?,
        mk(FamilyId::Inv3, 2.0, -1.0, 0.0)?,
        mk(FamilyId::Inv4Exp, 1.5, 0.0, 0.0)?,
        mk(FamilyId::Inv5, 1.0, 0.0, 0.0)?,
        mk(FamilyId::PcfUV, 2.0, 1.0, 0.7)?,
        mk(FamilyId::PcfW, 1.0, 0.5, 0.3)?,
        mk(FamilyId::AiryPlus, -1.0, 1.0, 0.0)?,
        mk(FamilyId::AiryMinus, 2.0, 1.0, 0.0)?,
        mk(FamilyId::ExpAtPos, 2.0, 2.0, 1.0)?,
        mk(FamilyId::ExpAtZero, 2.0, 2.0, -s2 / 8.0)?,
        mk(FamilyId::ExpAtNeg, 2.0, 2.0, -0.7 * s2)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::pde_operator;

    fn p11() -> ModelParams {
        ModelParams::symmetric(1.0, 1.0).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn inv1_value_and_slope() {
        let f = SolutionFamily::new(FamilyId::Inv1, 1.0, 0.0, 0.0, p11()).unwrap();
        assert!(rel(f.eval(3.0, 1.0).unwrap(), std::f64::consts::E) < 1e-15);
        let g = SolutionFamily::new(FamilyId::Inv1, 0.0, 1.0, 0.0, p11()).unwrap();
        let d = g.eval_derivs(0.5, 1.0).unwrap();
        assert!(rel(d.u_x, 2.0 * std::f64::consts::E) < 1e-15);
    }

    #[test]
    fn exp_zero_branch_value() {
        let p = ModelParams::symmetric(1.0, 2.0).unwrap();
        let f = SolutionFamily::new(FamilyId::ExpAtZero, 2.0, 7.0, -0.5, p).unwrap();
        let expect = 2.0 * (0.25f64 - 0.5).exp();
        assert!(rel(f.eval(1.0, 1.0).unwrap(), expect) < 1e-14);
    }

    #[test]
    fn pcf_uv_figure_four_value() {
        let f = SolutionFamily::new(FamilyId::PcfUV, 2.0, 1.0, 2.0, p11()).unwrap();
        let u = f.eval(1.0, std::f64::consts::E).unwrap();
        assert!(rel(u, 176.548_661_113_720_1) < 1e-8, "{u}");
    }

    #[test]
    fn every_family_solves_the_pde() {
        for sigma in [0.7, 1.0, 2.0] {
            let p = ModelParams::symmetric(1.0, sigma).unwrap();
            for f in catalog(p).unwrap() {
                for &t in &[0.2, 0.9, 2.0] {
                    for &y in &[-1.5, -0.3, 0.4, 1.5] {
                        let x = f64::exp(y);
                        let d = f.eval_derivs(t, x).unwrap();
                        let r = pde_operator(&p, &d, x).unwrap();
                        assert!(
                            r.abs() <= 1e-9 * (1.0 + d.u.abs()),
                            "{} sigma={sigma} t={t} y={y}: residual {r}, u={}",
                            f.family,
                            d.u
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let p = ModelParams::symmetric(1.0, 2.0).unwrap();
        let f = SolutionFamily::new(FamilyId::AiryPlus, -1.0, 1.0, 0.0, p).unwrap();
        let (t, x) = (1.0, 2.0);
        let d = f.eval_derivs(t, x).unwrap();
        let h = 1e-3;
        let five = |g: &dyn Fn(f64) -> f64, v: f64| {
            (g(v - 2.0 * h) - 8.0 * g(v - h) + 8.0 * g(v + h) - g(v + 2.0 * h)) / (12.0 * h)
        };
        let ut = five(&|s| f.eval(s, x).unwrap(), t);
        let ux = five(&|s| f.eval(t, s).unwrap(), x);
        let uxx = five(&|s| f.eval_derivs(t, s).unwrap().u_x, x);
        assert!(rel(ut, d.u_t) < 1e-6);
        assert!(rel(ux, d.u_x) < 1e-6);
        assert!(rel(uxx, d.u_xx) < 1e-6);
    }

    #[test]
    fn reduced_equations_vanish_on_profiles() {
        let p = p11();
        let f = SolutionFamily::new(FamilyId::Inv2, 0.0, 1.0, 0.0, p).unwrap();
        assert_eq!(f.reduced_ode_residual(0.3).unwrap(), 0.0);
        let f = SolutionFamily::new(FamilyId::PcfUV, 2.0, 1.0, 2.0, p).unwrap();
        assert!(f.reduced_ode_residual(0.5).unwrap().abs() < 1e-6);
        let p2 = ModelParams::symmetric(1.0, 2.0).unwrap();
        let f = SolutionFamily::new(FamilyId::AiryPlus, -1.0, 1.0, 0.0, p2).unwrap();
        assert!(f.reduced_ode_residual(-1.0).unwrap().abs() < 1e-6);
        for f in catalog(p).unwrap() {
            let v = match f.family {
                FamilyId::Inv1
                | FamilyId::Inv3
                | FamilyId::Inv5
                | FamilyId::ExpAtPos
                | FamilyId::ExpAtZero
                | FamilyId::ExpAtNeg => 1.7,
                _ => 0.6,
            };
            let r = f.reduced_ode_residual(v).unwrap();
            assert!(r.abs() < 1e-6, "{}: {r}", f.family);
        }
    }

    #[test]
    fn single_constant_families_agree_with_inv1() {
        let p = p11();
        let a = SolutionFamily::new(FamilyId::Inv4Exp, 1.3, 0.0, 0.0, p).unwrap();
        let b = SolutionFamily::new(FamilyId::Inv1, 1.3, 0.0, 0.0, p).unwrap();
        for x in [0.2, 1.0, 4.0] {
            assert_eq!(a.eval(0.3, x).unwrap(), b.eval(0.3, x).unwrap());
        }
    }

    #[test]
    fn exp_branches_join_continuously() {
        let sigma = 2.0;
        let p = ModelParams::symmetric(1.0, sigma).unwrap();
        let (cc1, cc2) = (2.0, 2.0);
        let zero = SolutionFamily::new(FamilyId::ExpAtZero, cc1, cc2, -0.5, p).unwrap();
        let d = 1e-6;
        let a = (d - sigma * sigma) / 8.0;
        let mu = d.sqrt() / (2.0 * sigma);
        let pos = SolutionFamily::new(
            FamilyId::ExpAtPos,
            0.5 * (cc1 + cc2 / mu),
            0.5 * (cc1 - cc2 / mu),
            a,
            p,
        )
        .unwrap();
        for x in [0.5, 1.0, 3.0] {
            let u0 = zero.eval(1.0, x).unwrap();
            let u1 = pos.eval(1.0, x).unwrap();
            assert!(rel(u1, u0) < 1e-3);
        }
    }

    #[test]
    fn domain_errors_name_the_constraint() {
        let p = p11();
        let f = SolutionFamily::new(FamilyId::Inv1, 1.0, 0.0, 0.0, p).unwrap();
        let e = f.eval(1.0, -1.0).unwrap_err().to_string();
        assert!(e.contains("x>0"), "{e}");
        let g = SolutionFamily::new(FamilyId::Inv3, 1.0, 0.0, 0.0, p).unwrap();
        assert!(g.eval(0.0, 1.0).unwrap_err().to_string().contains("t>"));
        assert!(SolutionFamily::new(FamilyId::ExpAtNeg, 1.0, 0.0, 1.0, p).is_err());
        let bad = ModelParams { lambda: 0.3, ..p };
        assert!(SolutionFamily::new(FamilyId::Inv1, 1.0, 0.0, 0.0, bad).is_err());
    }

    #[test]
    fn json_shape() {
        let s = r#"{"family":"Inv4_exp","c":2.0,"params":{"k":1.0,"alpha":0.0,"sigma":1.0,"lambda":0.5}}"#;
        let f = SolutionFamily::from_json(s).unwrap();
        assert_eq!(f.family, FamilyId::Inv4Exp);
        assert_eq!(f.c1, 2.0);
        let out = serde_json::to_string(&f).unwrap();
        assert!(out.contains(r#""family":"Inv4_exp""#));
        assert_eq!("expat_NEG".parse::<FamilyId>().unwrap(), FamilyId::ExpAtNeg);
    }
}

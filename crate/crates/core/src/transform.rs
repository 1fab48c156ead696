//! One-parameter point symmetry groups and their action on solutions.
//!
//! Each map sends `(t, x, u)` to `(t̃, x̃, u·M(t, x))`. With `ξ = ln x` and
//! `κ = k/σ²`:
//!
//! ```text
//! G1: t̃ = t + ε
//! G2: t̃ = e^ε t,  ξ̃ = e^{ε/2} ξ,  ln M = κ(x̃ − x) + ½(e^{ε/2} − 1)ξ − σ²t(e^ε − 1)/8
//! G3: t̃ = t/τ,    ξ̃ = ξ/τ,        ln M = κ(x̃ − x) − (εt/τ)(ξ²/(2σ²t) − ½ξ + σ²t/8) + ½ ln τ,  τ = 1 − εt
//! G4: x̃ = e^ε x,                  ln M = κx(e^ε − 1)
//! G5: x̃ = e^{εt} x,               ln M = κx(e^{εt} − 1) − ε²t/(2σ²) − εξ/σ² + εt/2
//! G6: ln M = ε
//! ```
//!
//! The `G3` factor is the one generated by the flow of `V3`. The variant
//! with the opposite sign on the `εt/τ` bracket is available as
//! [`G3Form::Printed`] for comparison; it does not map solutions to
//! solutions.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::model::{Derivs, ModelParams, PdePoint};
use crate::ode::dopri45;
use crate::solutions::Solution;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointMap {
    /// Generator index 1..=6.
    pub g: u8,
    pub eps: f64,
}

/// Which `u`-factor to use for `G3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum G3Form {
    /// Consistent with the flow of `V3`.
    #[default]
    Flow,
    /// Opposite sign on the `εt/τ` bracket.
    Printed,
}

/// `ln M` and its partials in `(t, ξ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct LogFactor {
    l: f64,
    l_t: f64,
    l_xi: f64,
    l_xixi: f64,
}

/// Inverse of the `(t, x)` part: `t = T(t̃)`, `ξ = A(t̃)ξ̃ + B(t̃)`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Preimage {
    t: f64,
    xi: f64,
    dt: f64,
    a: f64,
    dxi_dt: f64,
}

impl PointMap {
    pub fn new(g: u8, eps: f64) -> Result<Self> {
        if !(1..=6).contains(&g) {
            return Err(Error::Invalid(format!(
                "generator index must be in 1..=6, got {g}"
            )));
        }
        ensure_finite("eps", eps)?;
        Ok(PointMap { g, eps })
    }

    fn validate(&self) -> Result<()> {
        PointMap::new(self.g, self.eps).map(|_| ())
    }

    fn log_factor(&self, p: &ModelParams, t: f64, xi: f64, form: G3Form) -> Result<LogFactor> {
        let eps = self.eps;
        let kap = p.kappa();
        let s2 = p.sigma * p.sigma;
        let x = xi.exp();
        Ok(match self.g {
            1 => LogFactor {
                l: 0.0,
                l_t: 0.0,
                l_xi: 0.0,
                l_xixi: 0.0,
            },
            2 => {
                let eh = (0.5 * eps).exp();
                let xt = (eh * xi).exp();
                LogFactor {
                    l: kap * (xt - x) + 0.5 * (eh - 1.0) * xi - s2 * t * eps.exp_m1() / 8.0,
                    l_t: -s2 * eps.exp_m1() / 8.0,
                    l_xi: kap * (eh * xt - x) + 0.5 * (eh - 1.0),
                    l_xixi: kap * (eh * eh * xt - x),
                }
            }
            3 => {
                let tau = 1.0 - eps * t;
                if tau <= 0.0 {
                    return Err(Error::ProjectiveSingularity(tau));
                }
                let sg = match form {
                    G3Form::Flow => -1.0,
                    G3Form::Printed => 1.0,
                };
                let xt = (xi / tau).exp();
                let tau2 = tau * tau;
                // (εt/τ)(ξ²/(2σ²t) − ½ξ + σ²t/8) written without dividing by t
                let br = eps * xi * xi / (2.0 * s2 * tau) - eps * t * xi / (2.0 * tau)
                    + eps * s2 * t * t / (8.0 * tau);
                let br_t = eps * eps * xi * xi / (2.0 * s2 * tau2) - eps * xi / (2.0 * tau2)
                    + eps * s2 * t * (2.0 - eps * t) / (8.0 * tau2);
                let br_xi = eps * xi / (s2 * tau) - eps * t / (2.0 * tau);
                let br_xixi = eps / (s2 * tau);
                LogFactor {
                    l: kap * (xt - x) + sg * br + 0.5 * tau.ln(),
                    l_t: kap * xt * xi * eps / tau2 + sg * br_t - 0.5 * eps / tau,
                    l_xi: kap * (xt / tau - x) + sg * br_xi,
                    l_xixi: kap * (xt / tau2 - x) + sg * br_xixi,
                }
            }
            4 => {
                let c = kap * x * eps.exp_m1();
                LogFactor {
                    l: c,
                    l_t: 0.0,
                    l_xi: c,
                    l_xixi: c,
                }
            }
            5 => {
                let em = (eps * t).exp_m1();
                let c = kap * x * em;
                LogFactor {
                    l: c - eps * eps * t / (2.0 * s2) - eps * xi / s2 + eps * t / 2.0,
                    l_t: kap * x * eps * (eps * t).exp() - eps * eps / (2.0 * s2) + eps / 2.0,
                    l_xi: c - eps / s2,
                    l_xixi: c,
                }
            }
            _ => LogFactor {
                l: eps,
                l_t: 0.0,
                l_xi: 0.0,
                l_xixi: 0.0,
            },
        })
    }

    /// Image of `(t, ξ)`.
    fn forward(&self, t: f64, xi: f64) -> Result<(f64, f64)> {
        let eps = self.eps;
        Ok(match self.g {
            1 => (t + eps, xi),
            2 => (eps.exp() * t, (0.5 * eps).exp() * xi),
            3 => {
                let tau = 1.0 - eps * t;
                if tau <= 0.0 {
                    return Err(Error::ProjectiveSingularity(tau));
                }
                (t / tau, xi / tau)
            }
            4 => (t, xi + eps),
            5 => (t, xi + eps * t),
            _ => (t, xi),
        })
    }

    fn inverse(&self, tt: f64, xit: f64) -> Result<Preimage> {
        let eps = self.eps;
        let id = Preimage {
            t: tt,
            xi: xit,
            dt: 1.0,
            a: 1.0,
            dxi_dt: 0.0,
        };
        Ok(match self.g {
            1 => Preimage { t: tt - eps, ..id },
            2 => {
                let a = (-0.5 * eps).exp();
                Preimage {
                    t: tt * (-eps).exp(),
                    xi: a * xit,
                    dt: (-eps).exp(),
                    a,
                    dxi_dt: 0.0,
                }
            }
            3 => {
                let d = 1.0 + eps * tt;
                if d <= 0.0 {
                    // the preimage would need 1 − εt ≤ 0
                    return Err(Error::ProjectiveSingularity(d));
                }
                Preimage {
                    t: tt / d,
                    xi: xit / d,
                    dt: 1.0 / (d * d),
                    a: 1.0 / d,
                    dxi_dt: -eps * xit / (d * d),
                }
            }
            4 => Preimage {
                xi: xit - eps,
                ..id
            },
            5 => Preimage {
                xi: xit - eps * tt,
                dxi_dt: -eps,
                ..id
            },
            _ => id,
        })
    }
}

fn check_point(p: &PdePoint) -> Result<()> {
    PdePoint::new(p.t, p.x, p.u).map(|_| ())
}

/// Closed-form image of a point.
pub fn apply_point(params: &ModelParams, m: &PointMap, p: &PdePoint) -> Result<PdePoint> {
    apply_point_with(params, m, p, G3Form::Flow)
}

/// [`apply_point`] with an explicit choice of `G3` factor.
pub fn apply_point_with(
    params: &ModelParams,
    m: &PointMap,
    p: &PdePoint,
    form: G3Form,
) -> Result<PdePoint> {
    params.require_symmetric()?;
    m.validate()?;
    check_point(p)?;
    let xi = p.x.ln();
    let (tt, xit) = m.forward(p.t, xi)?;
    let lf = m.log_factor(params, p.t, xi, form)?;
    let out = PdePoint {
        t: tt,
        x: xit.exp(),
        u: p.u * lf.l.exp(),
    };
    if !out.x.is_finite() || !out.u.is_finite() || out.x <= 0.0 {
        return Err(Error::NonFinite(format!(
            "G{} image of (t={}, x={}, u={}) overflowed",
            m.g, p.t, p.x, p.u
        )));
    }
    Ok(out)
}

/// Coefficients `(τ, ξ, φ/u)` of the generator `V_i` at `(t, x)`.
pub fn generator_coefficients(params: &ModelParams, i: u8, t: f64, x: f64) -> Result<(f64, f64, f64)> {
    let kap = params.kappa();
    let s2 = params.sigma * params.sigma;
    let l = x.ln();
    Ok(match i {
        1 => (1.0, 0.0, 0.0),
        2 => (
            t,
            0.5 * x * l,
            0.5 * kap * x * l + 0.25 * l - s2 * t / 8.0,
        ),
        3 => (
            t * t,
            t * x * l,
            kap * t * x * l - l * l / (2.0 * s2) + 0.5 * t * l - s2 * t * t / 8.0 - 0.5 * t,
        ),
        4 => (0.0, x, kap * x),
        5 => (0.0, t * x, kap * t * x - l / s2 + 0.5 * t),
        6 => (0.0, 0.0, 1.0),
        _ => {
            return Err(Error::Invalid(format!(
                "generator index must be in 1..=6, got {i}"
            )))
        }
    })
}

/// Image of a point by integrating the generator's flow; an independent
/// oracle for [`apply_point`].
pub fn flow_point(params: &ModelParams, i: u8, eps: f64, p: &PdePoint) -> Result<PdePoint> {
    params.require_symmetric()?;
    PointMap::new(i, eps)?;
    check_point(p)?;
    // state (t, ln x, ln(u/u0))
    let y = dopri45(
        |_e, y, dy| {
            let x = y[1].exp();
            if !x.is_finite() || x <= 0.0 {
                return Err(Error::Domain(format!(
                    "flow of V{i} left the domain x>0 (ln x = {})",
                    y[1]
                )));
            }
            let (tau, xi, phi) = generator_coefficients(params, i, y[0], x)?;
            dy[0] = tau;
            dy[1] = xi / x;
            dy[2] = phi;
            Ok(())
        },
        0.0,
        &[p.t, p.x.ln(), 0.0],
        eps,
        1e-13,
        1e-14,
    )?;
    let out = PdePoint {
        t: y[0],
        x: y[1].exp(),
        u: p.u * y[2].exp(),
    };
    if !out.t.is_finite() || !out.x.is_finite() || !out.u.is_finite() {
        return Err(Error::NonFinite(format!("flow of V{i} overflowed")));
    }
    Ok(out)
}

/// The pullback `(g·f)(t̃, x̃) = M(t, x)·f(t, x)` with `(t̃, x̃) = g(t, x)`.
pub struct Transformed<S> {
    pub map: PointMap,
    pub params: ModelParams,
    pub form: G3Form,
    pub inner: S,
}

/// Transform a solution by a point map.
pub fn apply_to_solution<S: Solution>(params: &ModelParams, m: &PointMap, f: S) -> Result<Transformed<S>> {
    params.require_symmetric()?;
    m.validate()?;
    Ok(Transformed {
        map: *m,
        params: *params,
        form: G3Form::Flow,
        inner: f,
    })
}

impl<S: Solution> Transformed<S> {
    pub fn with_form(mut self, form: G3Form) -> Self {
        self.form = form;
        self
    }

    fn preimage(&self, t: f64, x: f64) -> Result<(Preimage, LogFactor)> {
        ensure_finite("t", t)?;
        ensure_finite("x", x)?;
        if x <= 0.0 {
            return Err(Error::Domain(format!("x>0 required, got x={x}")));
        }
        let pre = self.map.inverse(t, x.ln())?;
        let lf = self.map.log_factor(&self.params, pre.t, pre.xi, self.form)?;
        Ok((pre, lf))
    }
}

impl<S: Solution> Solution for Transformed<S> {
    fn eval(&self, t: f64, x: f64) -> Result<f64> {
        let (pre, lf) = self.preimage(t, x)?;
        let u = self.inner.eval(pre.t, pre.xi.exp())? * lf.l.exp();
        ensure_finite("transformed u", u)
    }

    fn derivs(&self, t: f64, x: f64) -> Option<Result<Derivs>> {
        let compute = || -> Option<Result<Derivs>> {
            let (pre, lf) = match self.preimage(t, x) {
                Ok(v) => v,
                Err(e) => return Some(Err(e)),
            };
            let xs = pre.xi.exp();
            let d = match self.inner.derivs(pre.t, xs)? {
                Ok(d) => d,
                Err(e) => return Some(Err(e)),
            };
            // inner partials in (t, ξ)
            let f_xi = xs * d.u_x;
            let f_xixi = xs * xs * d.u_xx + xs * d.u_x;
            let em = lf.l.exp();
            let g = em * d.u;
            let g_xi = pre.a * em * (lf.l_xi * d.u + f_xi);
            let g_xixi = pre.a
                * pre.a
                * em
                * ((lf.l_xixi + lf.l_xi * lf.l_xi) * d.u + 2.0 * lf.l_xi * f_xi + f_xixi);
            let g_t = em
                * ((lf.l_t * pre.dt + lf.l_xi * pre.dxi_dt) * d.u
                    + d.u_t * pre.dt
                    + f_xi * pre.dxi_dt);
            let out = Derivs {
                u: g,
                u_t: g_t,
                u_x: g_xi / x,
                u_xx: (g_xixi - g_xi) / (x * x),
            };
            for v in [out.u, out.u_t, out.u_x, out.u_xx] {
                if !v.is_finite() {
                    return Some(Err(Error::NonFinite(format!(
                        "derivatives of G{}-transformed solution at (t={t}, x={x})",
                        self.map.g
                    ))));
                }
            }
            Some(Ok(out))
        };
        compute()
    }
}

/// `f + ε·g`, the superposition symmetry of a linear equation.
pub struct Superposition<F, G> {
    pub f: F,
    pub g: G,
    pub eps: f64,
}

pub fn superpose<F: Solution, G: Solution>(f: F, g: G, eps: f64) -> Superposition<F, G> {
    Superposition { f, g, eps }
}

impl<F: Solution, G: Solution> Solution for Superposition<F, G> {
    fn eval(&self, t: f64, x: f64) -> Result<f64> {
        if self.eps == 0.0 {
            return self.f.eval(t, x);
        }
        Ok(self.f.eval(t, x)? + self.eps * self.g.eval(t, x)?)
    }

    fn derivs(&self, t: f64, x: f64) -> Option<Result<Derivs>> {
        let a = self.f.derivs(t, x)?;
        if self.eps == 0.0 {
            return Some(a);
        }
        let b = self.g.derivs(t, x)?;
        Some(a.and_then(|a| {
            b.map(|b| Derivs {
                u: a.u + self.eps * b.u,
                u_t: a.u_t + self.eps * b.u_t,
                u_x: a.u_x + self.eps * b.u_x,
                u_xx: a.u_xx + self.eps * b.u_xx,
            })
        }))
    }
}

impl<T: Solution + ?Sized> Solution for Box<T> {
    fn eval(&self, t: f64, x: f64) -> Result<f64> {
        (**self).eval(t, x)
    }
    fn derivs(&self, t: f64, x: f64) -> Option<Result<Derivs>> {
        (**self).derivs(t, x)
    }
}

impl<T: Solution + ?Sized> Solution for &T {
    fn eval(&self, t: f64, x: f64) -> Result<f64> {
        (**self).eval(t, x)
    }
    fn derivs(&self, t: f64, x: f64) -> Option<Result<Derivs>> {
        (**self).derivs(t, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::pde_operator;
    use crate::solutions::{FamilyId, SolutionFamily};

    fn p11() -> ModelParams {
        ModelParams::symmetric(1.0, 1.0).unwrap()
    }

    fn pt(t: f64, x: f64, u: f64) -> PdePoint {
        PdePoint::new(t, x, u).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn simple_point_images() {
        let p = p11();
        let r = apply_point(&p, &PointMap::new(1, 0.5).unwrap(), &pt(1.0, 2.0, 3.0)).unwrap();
        assert_eq!((r.t, r.x, r.u), (1.5, 2.0, 3.0));
        let r = apply_point(&p, &PointMap::new(6, 2f64.ln()).unwrap(), &pt(1.0, 2.0, 3.0)).unwrap();
        assert!((r.u - 6.0).abs() < 1e-14);
        let r = apply_point(&p, &PointMap::new(4, 1.0).unwrap(), &pt(1.0, 1.0, 1.0)).unwrap();
        let e = std::f64::consts::E;
        assert_eq!(r.t, 1.0);
        assert!(rel(r.x, e) < 1e-15);
        assert!(rel(r.u, (e - 1.0).exp()) < 1e-15);
    }

    #[test]
    fn projective_singularity_reported() {
        let m = PointMap::new(3, 1.0).unwrap();
        let e = apply_point(&p11(), &m, &pt(1.0, 2.0, 1.0)).unwrap_err();
        assert!(e.to_string().contains("finite-time singularity"));
    }

    #[test]
    fn flow_agrees_with_closed_forms() {
        let p = ModelParams::symmetric(0.8, 1.3).unwrap();
        for g in 1..=6u8 {
            for eps in [-0.4, 0.3] {
                let m = PointMap::new(g, eps).unwrap();
                let q = pt(0.9, 1.7, 1.2);
                let a = apply_point(&p, &m, &q).unwrap();
                let b = flow_point(&p, g, eps, &q).unwrap();
                assert!(rel(b.t, a.t) < 1e-8 || (a.t - b.t).abs() < 1e-12, "G{g}");
                assert!(rel(b.x, a.x) < 1e-8, "G{g}");
                assert!(rel(b.u, a.u) < 1e-8, "G{g}: {} vs {}", b.u, a.u);
            }
        }
    }

    #[test]
    fn printed_g3_factor_disagrees_with_flow() {
        let p = p11();
        let q = pt(1.0, 2.0, 1.0);
        let m = PointMap::new(3, 0.3).unwrap();
        let printed = apply_point_with(&p, &m, &q, G3Form::Printed).unwrap();
        let flow = flow_point(&p, 3, 0.3, &q).unwrap();
        let fixed = apply_point(&p, &m, &q).unwrap();
        assert!(rel(fixed.u, flow.u) < 1e-8);
        assert!(rel(printed.u, flow.u) > 1e-3);
    }

    #[test]
    fn group_law() {
        let p = p11();
        for g in 1..=6u8 {
            let q = pt(0.5, 1.4, 2.0);
            let a = PointMap::new(g, 0.2).unwrap();
            let b = PointMap::new(g, 0.35).unwrap();
            let ab = PointMap::new(g, 0.55).unwrap();
            let two = apply_point(&p, &a, &apply_point(&p, &b, &q).unwrap()).unwrap();
            let one = apply_point(&p, &ab, &q).unwrap();
            assert!(rel(two.t, one.t) < 1e-10 && rel(two.x, one.x) < 1e-10 && rel(two.u, one.u) < 1e-10, "G{g}");
            let z = apply_point(&p, &PointMap::new(g, 0.0).unwrap(), &q).unwrap();
            assert_eq!(z, q);
        }
    }

    #[test]
    fn transformed_solutions_solve_the_pde() {
        let p = p11();
        let f = SolutionFamily::new(FamilyId::Inv3, 2.0, -1.0, 0.0, p).unwrap();
        for g in 1..=6u8 {
            let m = PointMap::new(g, 0.25).unwrap();
            let tf = apply_to_solution(&p, &m, f).unwrap();
            for (t, x) in [(0.6, 0.8), (1.1, 2.0)] {
                let d = tf.derivs(t, x).unwrap().unwrap();
                assert_eq!(d.u, tf.eval(t, x).unwrap());
                let r = pde_operator(&p, &d, x).unwrap();
                assert!(r.abs() < 1e-9 * (1.0 + d.u.abs()), "G{g}: {r}");
            }
        }
    }

    #[test]
    fn printed_g3_breaks_solutions() {
        let p = p11();
        let f = SolutionFamily::new(FamilyId::Inv1, 1.0, 1.0, 0.0, p).unwrap();
        let m = PointMap::new(3, 0.3).unwrap();
        let tf = apply_to_solution(&p, &m, f).unwrap().with_form(G3Form::Printed);
        let d = tf.derivs(0.8, 1.9).unwrap().unwrap();
        let r = pde_operator(&p, &d, 1.9).unwrap();
        assert!(r.abs() > 1e-3 * (1.0 + d.u.abs()));
    }

    #[test]
    fn v4_invariant_solution_is_fixed_by_g4() {
        let p = p11();
        let f = SolutionFamily::new(FamilyId::Inv1, 1.0, 0.0, 0.0, p).unwrap();
        let tf = apply_to_solution(&p, &PointMap::new(4, 0.7).unwrap(), f).unwrap();
        for x in [0.3, 1.0, 2.5] {
            assert!(rel(tf.eval(1.0, x).unwrap(), f.eval(1.0, x).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn superposition_is_linear() {
        let p = p11();
        let f = SolutionFamily::new(FamilyId::Inv1, 1.0, 0.0, 0.0, p).unwrap();
        let g = SolutionFamily::new(FamilyId::Inv5, 1.0, 0.0, 0.0, p).unwrap();
        let s0 = superpose(f, g, 0.0);
        assert_eq!(s0.eval(1.0, 2.0).unwrap(), f.eval(1.0, 2.0).unwrap());
        let s2 = superpose(f, f, 1.0);
        assert_eq!(s2.eval(1.0, 2.0).unwrap(), 2.0 * f.eval(1.0, 2.0).unwrap());
        let s = superpose(f, g, 0.7);
        let d = s.derivs(0.9, 1.3).unwrap().unwrap();
        assert!(pde_operator(&p, &d, 1.3).unwrap().abs() < 1e-10 * (1.0 + d.u.abs()));
    }
}

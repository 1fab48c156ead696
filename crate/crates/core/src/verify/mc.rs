use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::model::ModelParams;
use crate::solutions::Solution;

/// Paths whose log-state leaves `|Y| ≤ 50` abort the estimate.
const Y_LIMIT: f64 = 50.0;
/// Upper bound on `Δ·λ·x0²`; beyond it the weight `e^{∫λX²}` is too heavy-tailed.
pub const MC_GUARD: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub n_paths: usize,
    pub n_steps: usize,
    /// Horizon `Δ`.
    pub horizon: f64,
    pub seed: u64,
    #[serde(default)]
    pub antithetic: bool,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            n_paths: 200_000,
            n_steps: 100,
            horizon: 0.05,
            seed: 42,
            antithetic: false,
        }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_paths < 1000 {
            return Err(Error::Invalid(format!("n_paths>=1000 required, got {}", self.n_paths)));
        }
        if self.n_steps < 50 {
            return Err(Error::Invalid(format!("n_steps>=50 required, got {}", self.n_steps)));
        }
        ensure_finite("horizon", self.horizon)?;
        if self.horizon <= 0.0 {
            return Err(Error::Invalid(format!("horizon>0 required, got {}", self.horizon)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub value: f64,
    /// Standard error from the sample variance of the per-item estimator.
    pub std_error: f64,
    /// Independent samples: paths, or pairs when antithetic.
    pub n_effective: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SemigroupReport {
    pub t0: f64,
    pub horizon: f64,
    pub x0: f64,
    pub closed_form: f64,
    pub mc: McEstimate,
    /// `(mc − closed_form) / std_error`; 0 when both agree exactly with zero spread.
    pub z: f64,
}

/// One Euler–Maruyama path of `Y = ln X`; returns `∫λX² ds` by the
/// trapezoid rule and `X_Δ`. `sign` flips the Brownian increments.
fn path(p: &ModelParams, y0: f64, dt: f64, noise: &[f64], sign: f64) -> Result<(f64, f64)> {
    let sq = dt.sqrt();
    let s2 = p.sigma * p.sigma;
    let mut y = y0;
    let mut x = y.exp();
    let mut integral = 0.0;
    for &z in noise {
        let drift = p.k * (p.alpha - x) - 0.5 * s2;
        y += drift * dt + p.sigma * sq * sign * z;
        if !(y.abs() <= Y_LIMIT) {
            return Err(Error::Divergence(format!("path reached ln X = {y}")));
        }
        let xn = y.exp();
        integral += 0.5 * dt * p.lambda * (x * x + xn * xn);
        x = xn;
    }
    Ok((integral, x))
}

/// `E[e^{∫₀^Δ λX_s² ds} g(X_Δ)]` with `X_0 = x0`.
///
/// Path `i` draws from its own ChaCha8 stream `(seed, i)`, and the sum is
/// taken in path order, so the result does not depend on thread scheduling.
pub fn mc_feynman_kac<G>(p: &ModelParams, g: G, x0: f64, cfg: &McConfig) -> Result<McEstimate>
where
    G: Fn(f64) -> Result<f64> + Sync,
{
    p.validate()?;
    cfg.validate()?;
    ensure_finite("x0", x0)?;
    if x0 <= 0.0 {
        return Err(Error::Domain(format!("x>0 required, got x0={x0}")));
    }
    let guard = cfg.horizon * p.lambda.abs() * x0 * x0;
    if guard > MC_GUARD {
        return Err(Error::Divergence(format!(
            "Δ·λ·x0² = {guard} exceeds {MC_GUARD}"
        )));
    }
    let dt = cfg.horizon / cfg.n_steps as f64;
    let y0 = x0.ln();
    let items = if cfg.antithetic { cfg.n_paths / 2 } else { cfg.n_paths };
    let weight = |integral: f64, x: f64| -> Result<f64> {
        let v = integral.exp() * g(x)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Divergence(format!("weight overflow (∫λX² = {integral})")))
        }
    };
    let samples: Vec<f64> = (0..items)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(i as u64);
            let noise: Vec<f64> = (0..cfg.n_steps).map(|_| rng.sample(StandardNormal)).collect();
            let (ia, xa) = path(p, y0, dt, &noise, 1.0)?;
            let va = weight(ia, xa)?;
            if cfg.antithetic {
                let (ib, xb) = path(p, y0, dt, &noise, -1.0)?;
                Ok(0.5 * (va + weight(ib, xb)?))
            } else {
                Ok(va)
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    Ok(McEstimate {
        value: mean,
        std_error: (var / n).sqrt(),
        n_effective: samples.len(),
    })
}

/// Compare `f(t0 + Δ, x0)` with the Feynman–Kac expectation propagating
/// `f(t0, ·)` over the horizon `Δ = cfg.horizon`.
pub fn mc_semigroup_check<S: Solution + ?Sized>(
    p: &ModelParams,
    f: &S,
    t0: f64,
    x0: f64,
    cfg: &McConfig,
) -> Result<SemigroupReport> {
    ensure_finite("t0", t0)?;
    let closed_form = f.eval(t0 + cfg.horizon, x0)?;
    let mc = mc_feynman_kac(p, |x| f.eval(t0, x), x0, cfg)?;
    let diff = mc.value - closed_form;
    let z = if mc.std_error > 0.0 {
        diff / mc.std_error
    } else if diff.abs() <= 1e-12 * (1.0 + closed_form.abs()) {
        0.0
    } else {
        diff.signum() * f64::INFINITY
    };
    Ok(SemigroupReport {
        t0,
        horizon: cfg.horizon,
        x0,
        closed_form,
        mc,
        z,
    })
}

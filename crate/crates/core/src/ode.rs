//! ODE integrators.
//!
//! [`TaylorLinear`] propagates `y'' = q(x)·y` for quadratic `q` with exact
//! Taylor recurrences; it is the engine behind the Airy and parabolic
//! cylinder functions. [`dopri45`] is a general adaptive Dormand–Prince
//! integrator used as an independent oracle for group flows.

use crate::error::{Error, Result};

/// Coefficients of `q(x) = c0 + c1·x + c2·x²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadratic {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
}

impl Quadratic {
    pub fn eval(&self, x: f64) -> f64 {
        self.c0 + x * (self.c1 + x * self.c2)
    }
}

/// State of a linear second-order solution with an external log scale:
/// the represented pair is `(y, dy)·exp(ln_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledState {
    pub x: f64,
    pub y: f64,
    pub dy: f64,
    pub ln_scale: f64,
}

impl ScaledState {
    pub fn new(x: f64, y: f64, dy: f64) -> Self {
        ScaledState {
            x,
            y,
            dy,
            ln_scale: 0.0,
        }
    }

    fn renormalize(&mut self) {
        let m = self.y.abs().max(self.dy.abs());
        if m > 1e100 || (m < 1e-100 && m > 0.0) {
            let l = m.ln();
            self.y /= m;
            self.dy /= m;
            self.ln_scale += l;
        }
    }

    /// Unscaled `(y, dy)`; may overflow to infinity.
    pub fn unscaled(&self) -> (f64, f64) {
        let s = self.ln_scale.exp();
        (self.y * s, self.dy * s)
    }
}

const TERM_TOL: f64 = 1e-18;
const MAX_TERMS: usize = 400;

/// Taylor-series propagator for `y'' = q(x)·y`.
#[derive(Debug, Clone, Copy)]
pub struct TaylorLinear {
    pub q: Quadratic,
    /// Step-size safety factor relative to the local oscillation/growth scale.
    pub step_factor: f64,
}

impl TaylorLinear {
    pub fn new(q: Quadratic) -> Self {
        TaylorLinear {
            q,
            step_factor: 1.0,
        }
    }

    fn step_len(&self, x: f64) -> f64 {
        let q0 = self.q.eval(x).abs();
        let q1 = (self.q.c1 + 2.0 * self.q.c2 * x).abs();
        let q2 = self.q.c2.abs();
        let rate = q0.sqrt() + q1.cbrt() + q2.sqrt().sqrt();
        (self.step_factor / (rate + 0.25)).min(1.0)
    }

    /// One Taylor step of signed length `h` from `s`.
    pub fn step(&self, s: &ScaledState, h: f64) -> ScaledState {
        let x = s.x;
        let q0 = self.q.eval(x);
        let q1 = self.q.c1 + 2.0 * self.q.c2 * x;
        let q2 = self.q.c2;
        let h2 = h * h;
        // d[n] = c_n·h^n, with (n+2)(n+1)c_{n+2} = q0·c_n + q1·c_{n-1} + q2·c_{n-2}
        let mut d: Vec<f64> = Vec::with_capacity(64);
        d.push(s.y);
        d.push(s.dy * h);
        let mut y = d[0] + d[1];
        let mut dyh = d[1];
        let scale = s.y.abs() + (s.dy * h).abs();
        let mut small_run = 0;
        for m in 0..MAX_TERMS {
            let dm1 = if m >= 1 { d[m - 1] } else { 0.0 };
            let dm2 = if m >= 2 { d[m - 2] } else { 0.0 };
            let next = h2 * (q0 * d[m] + q1 * h * dm1 + q2 * h2 * dm2)
                / (((m + 2) * (m + 1)) as f64);
            d.push(next);
            y += next;
            dyh += (m + 2) as f64 * next;
            if next.abs() <= TERM_TOL * (scale + y.abs()) {
                small_run += 1;
                if small_run >= 3 {
                    break;
                }
            } else {
                small_run = 0;
            }
        }
        let mut out = ScaledState {
            x: x + h,
            y,
            dy: dyh / h,
            ln_scale: s.ln_scale,
        };
        out.renormalize();
        out
    }

    /// Propagate from `s` to abscissa `x1` in either direction.
    pub fn propagate(&self, s: ScaledState, x1: f64) -> ScaledState {
        let mut cur = s;
        let dir = if x1 >= s.x { 1.0 } else { -1.0 };
        while (x1 - cur.x) * dir > 0.0 {
            let rem = (x1 - cur.x).abs();
            let h = self.step_len(cur.x).min(rem);
            cur = if h >= rem {
                let mut nxt = self.step(&cur, dir * rem);
                nxt.x = x1;
                nxt
            } else {
                self.step(&cur, dir * h)
            };
        }
        cur
    }
}

/// Dormand–Prince 5(4) integration of `y' = f(t, y)` from `t0` to `t1`.
pub fn dopri45<F>(f: F, t0: f64, y0: &[f64], t1: f64, rtol: f64, atol: f64) -> Result<Vec<f64>>
where
    F: Fn(f64, &[f64], &mut [f64]) -> Result<()>,
{
    const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [
            19372.0 / 6561.0,
            -25360.0 / 2187.0,
            64448.0 / 6561.0,
            -212.0 / 729.0,
            0.0,
            0.0,
        ],
        [
            9017.0 / 3168.0,
            -355.0 / 33.0,
            46732.0 / 5247.0,
            49.0 / 176.0,
            -5103.0 / 18656.0,
            0.0,
        ],
        [
            35.0 / 384.0,
            0.0,
            500.0 / 1113.0,
            125.0 / 192.0,
            -2187.0 / 6784.0,
            11.0 / 84.0,
        ],
    ];
    const B5: [f64; 7] = [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
        0.0,
    ];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];

    let n = y0.len();
    let mut y = y0.to_vec();
    if t1 == t0 {
        return Ok(y);
    }
    let span = t1 - t0;
    let dir = span.signum();
    let mut t = t0;
    let mut h = dir * (span.abs() * 1e-3).max(1e-12);
    let mut k = vec![vec![0.0; n]; 7];
    let mut tmp = vec![0.0; n];
    let mut steps = 0usize;
    while (t1 - t) * dir > 0.0 {
        steps += 1;
        if steps > 1_000_000 {
            return Err(Error::Numerical("dopri45: step budget exhausted".into()));
        }
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }
        f(t, &y, &mut k[0])?;
        for s in 1..7 {
            for i in 0..n {
                let mut acc = y[i];
                for (j, kj) in k.iter().enumerate().take(s) {
                    acc += h * A[s][j] * kj[i];
                }
                tmp[i] = acc;
            }
            let (_, tail) = k.split_at_mut(s);
            f(t + C[s] * h, &tmp, &mut tail[0])?;
        }
        let mut err: f64 = 0.0;
        let mut y5 = vec![0.0; n];
        for i in 0..n {
            let mut s5 = 0.0;
            let mut s4 = 0.0;
            for s in 0..7 {
                s5 += B5[s] * k[s][i];
                s4 += B4[s] * k[s][i];
            }
            y5[i] = y[i] + h * s5;
            let sc = atol + rtol * y[i].abs().max(y5[i].abs());
            err = err.max((h * (s5 - s4)).abs() / sc);
        }
        if !err.is_finite() {
            return Err(Error::Numerical(format!("dopri45: non-finite state at t={t}")));
        }
        if err <= 1.0 {
            t += h;
            y = y5;
        }
        let fac = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= fac;
        if h.abs() < 1e-14 * (1.0 + t.abs()) {
            return Err(Error::Numerical(format!("dopri45: step size underflow at t={t}")));
        }
    }
    Ok(y)
}

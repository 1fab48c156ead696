use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::Grid;
use crate::error::{Error, Result};
use crate::model::{to_log_coords, LogCoeffs, ModelParams};
use crate::solutions::Solution;

/// Values on a [`Grid`], row-major in `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Surface {
    pub grid: Grid,
    /// `values[i * n_y + j]` is `u(t_i, y_j)`.
    pub values: Vec<f64>,
}

impl Surface {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.n_y + j]
    }

    /// CSV with header `t,y,u`, sorted by `(t, y)`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t,y,u")?;
        for i in 0..self.grid.n_t {
            for j in 0..self.grid.n_y {
                writeln!(w, "{},{},{}", self.grid.t(i), self.grid.y(j), self.at(i, j))?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let f = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(f))
    }
}

/// Solve `u_t = a·u_yy + b(y)·u_y + c(y)·u` by Crank–Nicolson from
/// `initial` (values at `t_min`) with Dirichlet data `lower`/`upper` on the
/// `y_min`/`y_max` rows.
pub fn cn_solve(c: &LogCoeffs, g: &Grid, initial: &[f64], lower: &[f64], upper: &[f64]) -> Result<Surface> {
    g.validate()?;
    let (nt, ny) = (g.n_t, g.n_y);
    if initial.len() != ny || lower.len() != nt || upper.len() != nt {
        return Err(Error::Invalid(format!(
            "expected {ny} initial and {nt} boundary values, got {}, {}, {}",
            initial.len(),
            lower.len(),
            upper.len()
        )));
    }
    for (a, b, which) in [(initial[0], lower[0], "lower"), (initial[ny - 1], upper[0], "upper")] {
        if (a - b).abs() > 1e-9 * (1.0 + a.abs()) {
            return Err(Error::Invalid(format!(
                "initial and {which} boundary data disagree at the corner ({a} vs {b})"
            )));
        }
    }
    if initial.iter().chain(lower).chain(upper).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("initial or boundary data".into()));
    }

    let dt = g.dt();
    let dy = g.dy();
    let mut lo = vec![0.0; ny];
    let mut di = vec![0.0; ny];
    let mut up = vec![0.0; ny];
    for j in 1..ny - 1 {
        let (a, b, cc) = c.at(g.y(j));
        lo[j] = a / (dy * dy) - b / (2.0 * dy);
        di[j] = -2.0 * a / (dy * dy) + cc;
        up[j] = a / (dy * dy) + b / (2.0 * dy);
    }

    let mut values = Vec::with_capacity(nt * ny);
    values.extend_from_slice(initial);
    let mut u = initial.to_vec();
    let m = ny - 2;
    let mut sub = vec![0.0; m];
    let mut diag = vec![0.0; m];
    let mut sup = vec![0.0; m];
    let mut rhs = vec![0.0; m];
    for n in 1..nt {
        for k in 0..m {
            let j = k + 1;
            sub[k] = -0.5 * dt * lo[j];
            diag[k] = 1.0 - 0.5 * dt * di[j];
            sup[k] = -0.5 * dt * up[j];
            rhs[k] = u[j] + 0.5 * dt * (lo[j] * u[j - 1] + di[j] * u[j] + up[j] * u[j + 1]);
        }
        rhs[0] -= sub[0] * lower[n];
        rhs[m - 1] -= sup[m - 1] * upper[n];
        let inner = thomas(&sub, &diag, &sup, &rhs)?;
        u[0] = lower[n];
        u[ny - 1] = upper[n];
        u[1..ny - 1].copy_from_slice(&inner);
        values.extend_from_slice(&u);
    }
    Ok(Surface { grid: *g, values })
}

/// Tridiagonal solve; `sub[0]` and `sup[m-1]` are ignored.
fn thomas(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let m = diag.len();
    let mut c = vec![0.0; m];
    let mut d = vec![0.0; m];
    let mut piv = diag[0];
    for k in 0..m {
        if k > 0 {
            piv = diag[k] - sub[k] * c[k - 1];
        }
        if piv.abs() < 1e-300 || !piv.is_finite() {
            return Err(Error::Numerical(format!(
                "tridiagonal solve broke down at row {k} (degenerate grid?)"
            )));
        }
        c[k] = sup[k] / piv;
        d[k] = if k == 0 {
            rhs[0] / piv
        } else {
            (rhs[k] - sub[k] * d[k - 1]) / piv
        };
    }
    let mut x = d;
    for k in (0..m - 1).rev() {
        x[k] -= c[k] * x[k + 1];
    }
    Ok(x)
}

/// Error of [`cn_solve`] against a reference solution that also supplies
/// the initial and boundary data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CnReport {
    pub grid: Grid,
    pub max_error: f64,
    /// `max |u_h − u| / (1 + |u|)`.
    pub max_normalized_error: f64,
}

/// Two grids a factor 2 apart and the observed order `log2(e_h / e_{h/2})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderReport {
    pub coarse: CnReport,
    pub fine: CnReport,
    pub ratio: f64,
    pub order: f64,
}

fn trace<S: Solution + ?Sized>(f: &S, g: &Grid) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(g.n_t * g.n_y);
    for i in 0..g.n_t {
        for j in 0..g.n_y {
            out.push(f.eval(g.t(i), g.y(j).exp())?);
        }
    }
    Ok(out)
}

/// Manufactured-boundary run: data from `f`, error against `f`.
pub fn cn_manufactured<S: Solution + ?Sized>(c: &LogCoeffs, g: &Grid, f: &S) -> Result<CnReport> {
    g.validate()?;
    let exact = trace(f, g)?;
    let ny = g.n_y;
    let lower: Vec<f64> = (0..g.n_t).map(|i| exact[i * ny]).collect();
    let upper: Vec<f64> = (0..g.n_t).map(|i| exact[i * ny + ny - 1]).collect();
    let s = cn_solve(c, g, &exact[..ny], &lower, &upper)?;
    let mut max_error = 0.0f64;
    let mut max_norm = 0.0f64;
    for (a, e) in s.values.iter().zip(&exact) {
        let d = (a - e).abs();
        max_error = max_error.max(d);
        max_norm = max_norm.max(d / (1.0 + e.abs()));
    }
    if !max_error.is_finite() {
        return Err(Error::NonFinite("Crank–Nicolson surface".into()));
    }
    Ok(CnReport {
        grid: *g,
        max_error,
        max_normalized_error: max_norm,
    })
}

/// Observed convergence order on `g` and its 2× refinement.
pub fn cn_order<S: Solution + ?Sized>(p: &ModelParams, g: &Grid, f: &S) -> Result<OrderReport> {
    let c = to_log_coords(p);
    let coarse = cn_manufactured(&c, g, f)?;
    let fine = cn_manufactured(&c, &g.refined(), f)?;
    let ratio = coarse.max_error / fine.max_error;
    Ok(OrderReport {
        order: ratio.log2(),
        ratio,
        coarse,
        fine,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solutions::{FamilyId, SolutionFamily};

    /// Drifting Gaussian solving `u_t = a·u_yy + b·u_y` in `y`.
    struct Heat {
        a: f64,
        b: f64,
        t0: f64,
    }
    impl Solution for Heat {
        fn eval(&self, t: f64, x: f64) -> Result<f64> {
            let z = x.ln() + self.b * t;
            let s = 4.0 * self.a * (t + self.t0);
            Ok((-z * z / s).exp() / (std::f64::consts::PI * s).sqrt())
        }
    }

    #[test]
    fn pure_diffusion_matches_gaussian() {
        let sigma = 2.0;
        let c = LogCoeffs::from_raw(0.0, 0.0, sigma, 0.0).unwrap();
        assert_eq!(c.at(0.3), (2.0, -2.0, 0.0));
        let f = Heat {
            a: 2.0,
            b: -2.0,
            t0: 1.0,
        };
        let g = Grid::new(0.0, 0.5, -8.0, 8.0, 201, 401).unwrap();
        let r = cn_manufactured(&c, &g, &f).unwrap();
        assert!(r.max_error < 1e-5, "{}", r.max_error);
    }

    #[test]
    fn inv1_second_order() {
        let p = ModelParams::symmetric(1.0, 1.0).unwrap();
        let f = SolutionFamily::new(FamilyId::Inv1, 1.0, 0.0, 0.0, p).unwrap();
        let g = Grid::new(0.2, 1.0, -1.0, 1.0, 50, 50).unwrap();
        let o = cn_order(&p, &g, &f).unwrap();
        assert!((o.order - 2.0).abs() < 0.3, "order {}", o.order);
        assert!(o.fine.max_error < o.coarse.max_error);
    }

    #[test]
    fn corner_mismatch_rejected() {
        let p = ModelParams::symmetric(1.0, 1.0).unwrap();
        let g = Grid::new(0.0, 1.0, -1.0, 1.0, 8, 8).unwrap();
        let init = vec![1.0; 8];
        let mut lo = vec![1.0; 8];
        lo[0] = 2.0;
        assert!(cn_solve(&to_log_coords(&p), &g, &init, &lo, &vec![1.0; 8]).is_err());
    }

    #[test]
    fn csv_header_and_rows() {
        let p = ModelParams::symmetric(1.0, 1.0).unwrap();
        let g = Grid::new(0.0, 1.0, -1.0, 1.0, 8, 9).unwrap();
        let s = cn_solve(&to_log_coords(&p), &g, &[1.0; 9], &[1.0; 8], &[1.0; 8]).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,y,u\n"));
        assert_eq!(text.lines().count(), 1 + 72);
    }
}

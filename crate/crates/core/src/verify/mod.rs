//! Independent checks of solutions: pointwise residuals on a grid, a
//! Crank–Nicolson solver in `y = ln x`, and a Monte Carlo Feynman–Kac
//! semigroup test.

mod cn;
mod mc;
mod residual;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};

pub use cn::{cn_manufactured, cn_order, cn_solve, CnReport, OrderReport, Surface};
pub use mc::{mc_feynman_kac, mc_semigroup_check, McConfig, McEstimate, SemigroupReport};
pub use residual::{residual_grid, residual_grid_fd, residual_on_domain, ResidualMode, ResidualReport};

/// Uniform tensor grid in `(t, y)` with `y = ln x`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub t_min: f64,
    pub t_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub n_t: usize,
    pub n_y: usize,
}

impl Default for Grid {
    /// `t ∈ [0.2, 2]`, `y ∈ [−1.5, 1.5]`, 50×50.
    fn default() -> Self {
        Grid {
            t_min: 0.2,
            t_max: 2.0,
            y_min: -1.5,
            y_max: 1.5,
            n_t: 50,
            n_y: 50,
        }
    }
}

impl Grid {
    pub fn new(t_min: f64, t_max: f64, y_min: f64, y_max: f64, n_t: usize, n_y: usize) -> Result<Self> {
        let g = Grid {
            t_min,
            t_max,
            y_min,
            y_max,
            n_t,
            n_y,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        for (n, v) in [
            ("t_min", self.t_min),
            ("t_max", self.t_max),
            ("y_min", self.y_min),
            ("y_max", self.y_max),
        ] {
            ensure_finite(n, v)?;
        }
        if self.n_t < 8 || self.n_y < 8 {
            return Err(Error::Invalid(format!(
                "grid needs at least 8 points per axis, got {}x{}",
                self.n_t, self.n_y
            )));
        }
        if self.t_max <= self.t_min || self.y_max <= self.y_min {
            return Err(Error::Invalid("grid ranges must be increasing".into()));
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        (self.t_max - self.t_min) / (self.n_t - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y_max - self.y_min) / (self.n_y - 1) as f64
    }

    pub fn t(&self, i: usize) -> f64 {
        if i + 1 == self.n_t {
            self.t_max
        } else {
            self.t_min + i as f64 * self.dt()
        }
    }

    pub fn y(&self, j: usize) -> f64 {
        if j + 1 == self.n_y {
            self.y_max
        } else {
            self.y_min + j as f64 * self.dy()
        }
    }

    /// Same ranges with spacing halved in both directions.
    pub fn refined(&self) -> Grid {
        Grid {
            n_t: 2 * self.n_t - 1,
            n_y: 2 * self.n_y - 1,
            ..*self
        }
    }
}

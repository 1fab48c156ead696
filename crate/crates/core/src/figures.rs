//! Parameter sets and sampling grids for the published solution surfaces.
//!
//! | figure | family      | parameters                       | subfigure a/b/c |
//! |--------|-------------|----------------------------------|-----------------|
//! | 1      | `Inv2`      | k = 0.5, c1 = 2, c2 = −1         | σ = 1, 2, 3     |
//! | 2      | `Inv3`      | k = 1, c1 = 2, c2 = −1           | σ = 1, 2, 3     |
//! | 3      | `Inv5`      | k = 1, c = 1                     | σ = 1, 2, 3     |
//! | 4      | `PcfUV`     | k = 1, a = 2, c1 = 2, c2 = 1     | σ = 1, 2, 3     |
//! | 5      | `AiryPlus`  | k = 1, c1 = −1, c2 = 1           | σ = 1, 2, 3     |
//! | 6      | `AiryMinus` | k = 1, c1 = 2, c2 = 1            | σ = 1, 2, 3     |
//! | 7      | `ExpAt_*`   | k = 1, σ = 2, c1 = c2 = 2        | a = 1, −0.5, −2.8 |
//!
//! Figure 3 has a second reading, [`Parameterization::Text`], with the
//! two-constant family `Inv3`, `c1 = 2`, `c2 = −1`.
//!
//! Surfaces are sampled on `t ∈ [0.1, 5] × x ∈ [1, 5]` with 60 points per
//! axis unless overridden.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::solutions::{FamilyId, SolutionFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parameterization {
    /// Constants listed with the plotted surface.
    #[default]
    Caption,
    /// Figure 3 only: the constants used in the accompanying discussion.
    Text,
}

/// Uniform sampling grid in `(t, x)`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FigureGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub n_t: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub n_x: usize,
}

impl Default for FigureGrid {
    fn default() -> Self {
        FigureGrid {
            t_min: 0.1,
            t_max: 5.0,
            n_t: 60,
            x_min: 1.0,
            x_max: 5.0,
            n_x: 60,
        }
    }
}

fn lin(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if n == 1 {
        lo
    } else if i + 1 == n {
        hi
    } else {
        lo + (hi - lo) * i as f64 / (n - 1) as f64
    }
}

impl FigureGrid {
    pub fn validate(&self) -> Result<()> {
        if self.n_t == 0 || self.n_x == 0 {
            return Err(Error::Invalid("figure grid needs at least one point per axis".into()));
        }
        if !(self.t_min <= self.t_max && self.x_min <= self.x_max) {
            return Err(Error::Invalid("figure grid ranges must be increasing".into()));
        }
        if !(self.x_min > 0.0) {
            return Err(Error::Domain(format!("x>0 required, got x_min={}", self.x_min)));
        }
        Ok(())
    }

    pub fn t(&self, i: usize) -> f64 {
        lin(self.t_min, self.t_max, self.n_t, i)
    }

    pub fn x(&self, j: usize) -> f64 {
        lin(self.x_min, self.x_max, self.n_x, j)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FigureSpec {
    pub figure_id: u8,
    /// `'a'`, `'b'` or `'c'`.
    pub subfigure: char,
    #[serde(default)]
    pub parameterization: Parameterization,
    #[serde(default)]
    pub grid: FigureGrid,
}

/// One sampled surface, sorted by `(t, x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureData {
    pub family: SolutionFamily,
    pub grid: FigureGrid,
    /// `u[i * n_x + j] = u(t_i, x_j)`.
    pub u: Vec<f64>,
}

impl FigureSpec {
    pub fn new(figure_id: u8, subfigure: char) -> Result<Self> {
        let s = FigureSpec {
            figure_id,
            subfigure,
            parameterization: Parameterization::Caption,
            grid: FigureGrid::default(),
        };
        s.family()?;
        Ok(s)
    }

    fn sub_index(&self) -> Result<usize> {
        match self.subfigure.to_ascii_lowercase() {
            'a' => Ok(0),
            'b' => Ok(1),
            'c' => Ok(2),
            s => Err(Error::Invalid(format!("subfigure must be a, b or c, got {s:?}"))),
        }
    }

    /// The plotted solution.
    pub fn family(&self) -> Result<SolutionFamily> {
        let sub = self.sub_index()?;
        let sigma = [1.0, 2.0, 3.0][sub];
        let mk = |id, k: f64, sigma: f64, c1, c2, a| {
            SolutionFamily::new(id, c1, c2, a, ModelParams::symmetric(k, sigma)?)
        };
        if self.parameterization == Parameterization::Text && self.figure_id != 3 {
            return Err(Error::Invalid(format!(
                "figure {} has a single parameterization",
                self.figure_id
            )));
        }
        match self.figure_id {
            1 => mk(FamilyId::Inv2, 0.5, sigma, 2.0, -1.0, 0.0),
            2 => mk(FamilyId::Inv3, 1.0, sigma, 2.0, -1.0, 0.0),
            3 => match self.parameterization {
                Parameterization::Caption => mk(FamilyId::Inv5, 1.0, sigma, 1.0, 0.0, 0.0),
                Parameterization::Text => mk(FamilyId::Inv3, 1.0, sigma, 2.0, -1.0, 0.0),
            },
            4 => mk(FamilyId::PcfUV, 1.0, sigma, 2.0, 1.0, 2.0),
            5 => mk(FamilyId::AiryPlus, 1.0, sigma, -1.0, 1.0, 0.0),
            6 => mk(FamilyId::AiryMinus, 1.0, sigma, 2.0, 1.0, 0.0),
            7 => {
                let (id, a) = [
                    (FamilyId::ExpAtPos, 1.0),
                    (FamilyId::ExpAtZero, -0.5),
                    (FamilyId::ExpAtNeg, -2.8),
                ][sub];
                mk(id, 1.0, 2.0, 2.0, 2.0, a)
            }
            n => Err(Error::Invalid(format!("figure id must be in 1..=7, got {n}"))),
        }
    }

    pub fn compute(&self) -> Result<FigureData> {
        self.grid.validate()?;
        let family = self.family()?;
        let g = self.grid;
        let mut u = Vec::with_capacity(g.n_t * g.n_x);
        for i in 0..g.n_t {
            for j in 0..g.n_x {
                u.push(family.eval(g.t(i), g.x(j))?);
            }
        }
        Ok(FigureData { family, grid: g, u })
    }
}

impl FigureData {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.u[i * self.grid.n_x + j]
    }

    /// CSV with header `t,x,u`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t,x,u")?;
        for i in 0..self.grid.n_t {
            for j in 0..self.grid.n_x {
                writeln!(w, "{},{},{}", self.grid.t(i), self.grid.x(j), self.at(i, j))?;
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

//! Geometric mean-reversion Feynman–Kac equation
//! `u_t = ½σ²x²u_xx + kx(α − x)u_x + λx²u`: its six-dimensional point
//! symmetry algebra, optimal-system classification, closed-form invariant

pub mod error;
pub mod figures;
pub mod lie;
pub mod model;
pub mod ode;
pub mod solutions;
pub mod specfun;
pub mod transform;
pub mod verify;

pub use error::{Error, Result};
pub use model::{pde_operator, to_log_coords, Derivs, ModelParams, PdePoint};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A point or parameter lies outside the domain of the requested object.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("gamma function pole at z = {0}")]
    Pole(f64),

    /// Argument outside the window where the special function accuracy is guaranteed.
    #[error("{func}: argument outside accuracy window ({detail})")]
    OutOfWindow { func: &'static str, detail: String },

    #[error("sigma mismatch between algebra elements ({0} vs {1})")]
    SigmaMismatch(f64, f64),

    #[error("the zero element generates no subalgebra")]
    ZeroElement,

    #[error("finite-time singularity of projective map (1 - eps*t = {0})")]
    ProjectiveSingularity(f64),

    #[error("functional divergence; shrink Δ ({0})")]
    Divergence(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(format!("{name} = {v}")))
    }
}

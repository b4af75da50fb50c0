use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{what} = {got} exceeds the cap of {cap}")]
    CapExceeded { what: &'static str, got: usize, cap: usize },

    #[error("degree {degree} exceeds the configured cap {cap}")]
    DegreeOverflow { degree: usize, cap: usize },

    #[error("missing cycle-index variable x[{0}]")]
    MissingVariable(usize),

    #[error("quadrature did not converge: achieved error {achieved:.3e}, requested {requested:.3e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("precision budget exceeded: requested {requested} digits, allowed {min}..={max}")]
    Precision { requested: u32, min: u32, max: u32 },

    /// An identity that must hold by construction failed. This is a bug, not bad input.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

impl Error {
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Inconsistency(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

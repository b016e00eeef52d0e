use thiserror::Error;

/// Failures reported by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(&'static str),

    #[error("index {index} outside the admissible range {lo}..={hi}")]
    Range { index: usize, lo: usize, hi: usize },

    #[error("circle sample count {samples} too small: need a power of two >= {required}")]
    Resolution { samples: usize, required: usize },

    #[error("frame with n_max={n_max} covers degrees < {covered}, series has degree {degree}")]
    Coverage {
        degree: usize,
        n_max: usize,
        covered: usize,
    },

    #[error("precondition violated at index {index}: {reason}")]
    Precondition { index: usize, reason: &'static str },

    #[error("non-finite value encountered: {0}")]
    NonFinite(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

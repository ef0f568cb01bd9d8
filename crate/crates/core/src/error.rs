use thiserror::Error;

use crate::solver::Diagnostic;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("fractional order alpha must lie in (0, 1], got {0}")]
    InvalidAlpha(f64),
    #[error("base point t0 must be finite and non-negative, got {0}")]
    InvalidBasePoint(f64),
    #[error("a series needs at least one coefficient")]
    EmptySeries,
    #[error("series are not algebra-compatible: (alpha, t0) = ({0}, {1}) vs ({2}, {3})")]
    Incompatible(f64, f64, f64, f64),
    #[error("{what} = {value} is not an integer multiple of alpha on the transform grid")]
    NotRepresentable { what: &'static str, value: f64 },
    #[error("t = {t} lies outside the domain (t0 = {t0})")]
    Domain { t: f64, t0: f64 },
    #[error("series of length {len} is too short; need at least {needed}")]
    TooShort { len: usize, needed: usize },
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("problem failed validation: {}", summarize(.0))]
    Invalid(Vec<Diagnostic>),
    #[error("internal contract violation: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

fn summarize(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

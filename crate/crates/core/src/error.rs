use thiserror::Error;

/// Failure modes shared by every stage of the solver pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("matrix is singular to working precision: |pivot {index}| = {magnitude:e} <= {threshold:e}")]
    SingularMatrix {
        index: usize,
        magnitude: f64,
        threshold: f64,
    },

    #[error("collocation system for m = {m}, ell = {ell} is ill-posed (pivot {index} vanished)")]
    IllPosedDiscretization { m: usize, ell: usize, index: usize },

    #[error("invalid weight exponents alpha = {alpha}, beta = {beta}: need alpha > -1, beta > -1, alpha + beta + 1 >= 0")]
    InvalidExponent { alpha: f64, beta: f64 },

    #[error("{what} = {value} is outside its domain {domain}")]
    DomainViolation {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("{op} produced a non-finite matrix entry")]
    NonFiniteMatrix { op: &'static str },

    #[error("non-finite value from {what} at t = {t}, s = {s}")]
    NonFiniteEvaluation { what: &'static str, t: f64, s: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_unit_interval(what: &'static str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::DomainViolation {
            what,
            value: x,
            domain: "[0, 1]",
        })
    }
}

use thiserror::Error;

use crate::multigraded::{Degree, Side, Surface};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("the zero polynomial has no roots")]
    ZeroPolynomial,

    #[error("surface mismatch: {0:?} vs {1:?}")]
    SurfaceMismatch(Surface, Surface),

    #[error("side mismatch: expected {expected:?}, found {found:?}")]
    SideMismatch { expected: Side, found: Side },

    #[error("exponent {exp:?} does not have degree {degree}")]
    WrongDegree { exp: [u32; 4], degree: Degree },

    #[error("point {0} lies in the irrelevant locus")]
    IrrelevantPoint(String),

    #[error("points {0} and {1} coincide on the surface")]
    DuplicatePoint(usize, usize),

    #[error("apolarity tests disagree: kernel measure {kernel:e}, span measure {span:e}")]
    ApolarityInconsistent { kernel: f64, span: f64 },

    #[error("degenerate binary form at k = {k}: repeated factor {factor}")]
    NotSquareFree { k: usize, factor: String },

    #[error("form is not general: {check} has dimension {found}, expected {expected}")]
    NotGeneral {
        check: String,
        expected: usize,
        found: usize,
    },

    #[error("all {restarts} restarts exhausted, best residual {best_residual:e}")]
    Exhausted { restarts: usize, best_residual: f64 },

    #[error("degenerate sample: {0}")]
    Degenerate(String),

    #[error("points in special position: {0}")]
    SpecialPosition(String),

    #[error("inconsistent linear system: {0}")]
    Inconsistent(String),

    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse {
        line: usize,
        column: usize,
        msg: String,
    },

    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

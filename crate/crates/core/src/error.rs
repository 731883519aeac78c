use alloc::string::String;
use core::fmt;

use crate::geometry::{Basis, Position};

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Normalizing a vector of zero length.
    ZeroVectorNormalization,
    /// A radial coordinate (`s` or `r`) was negative.
    NegativeRadial { coordinate: &'static str, value: f64 },
    /// Polar angle outside `[0, π]`.
    PolarAngleOutOfRange(f64),
    /// A position-dependent unit vector requested where no direction exists.
    SingularBasis { basis: Basis, at: Position },
    /// Field evaluated on top of a point source or a source sample.
    FieldSingularity { at: Position },
    /// A field could not be evaluated (for instance an expression divided by zero).
    Evaluation { at: Option<Position>, message: String },
    /// Shape constructor received inputs that do not describe a domain.
    Degenerate(&'static str),
    /// Parameter limits out of order.
    InvalidLimits { lo: f64, hi: f64 },
    /// Finite-difference steps must be positive.
    InvalidStep(f64),
}

impl Error {
    /// Attaches the sample position to an evaluation error that lacks one.
    pub fn at_position(self, p: Position) -> Self {
        match self {
            Error::Evaluation { at: None, message } => Error::Evaluation { at: Some(p), message },
            other => other,
        }
    }

    pub fn evaluation(message: impl Into<String>) -> Self {
        Error::Evaluation { at: None, message: message.into() }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroVectorNormalization => write!(f, "zero-vector normalization"),
            Error::NegativeRadial { coordinate, value } => {
                write!(f, "negative radial coordinate {coordinate} = {value}")
            }
            Error::PolarAngleOutOfRange(theta) => {
                write!(f, "polar angle {theta} outside [0, pi]")
            }
            Error::SingularBasis { basis, at } => {
                write!(f, "basis undefined on singular locus: {basis:?} at {at}")
            }
            Error::FieldSingularity { at } => write!(f, "field singularity at {at}"),
            Error::Evaluation { at: Some(p), message } => {
                write!(f, "field evaluation failed at {p}: {message}")
            }
            Error::Evaluation { at: None, message } => {
                write!(f, "field evaluation failed: {message}")
            }
            Error::Degenerate(what) => write!(f, "degenerate shape: {what}"),
            Error::InvalidLimits { lo, hi } => {
                write!(f, "parameter limits out of order: {lo} > {hi}")
            }
            Error::InvalidStep(d) => write!(f, "finite-difference step must be positive, got {d}"),
        }
    }
}

impl core::error::Error for Error {}

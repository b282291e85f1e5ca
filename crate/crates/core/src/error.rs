use thiserror::Error;

use crate::bounds::EquationTag;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite complex value ({re}, {im})")]
    NonFinite { re: f64, im: f64 },

    #[error("point with modulus {modulus} is not inside the open unit disk")]
    NotInDisk { modulus: f64 },

    #[error("point with modulus {modulus} lies outside the closed unit disk")]
    OutsideClosedDisk { modulus: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("map does not fix the origin (|f(0)| = {modulus}); use the general boundary bound")]
    OriginNotFixed { modulus: f64 },

    #[error("k-th order bounds need a pure Blaschke product without post-composition")]
    PostShiftPresent,

    #[error("boundary point is not mapped to the circle (|f(b)| = {modulus})")]
    NotOnBoundary { modulus: f64 },

    #[error("invalid arc [{start}, {end}]")]
    InvalidArc { start: f64, end: f64 },

    #[error("adaptive quadrature exceeded {panels} panels without meeting tolerance")]
    QuadratureDiverged { panels: usize },

    #[error("{equation} observed slack {slack:e} below -{tolerance:e}: {details}")]
    Falsified {
        equation: EquationTag,
        slack: f64,
        tolerance: f64,
        details: String,
    },

    #[error("operation does not support {equation}")]
    UnsupportedEquation { equation: EquationTag },

    #[error("serialization: {0}")]
    Serialization(String),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Serialization(err.to_string())
    }
}

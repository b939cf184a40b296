use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point ({x}, {y}) is not strictly inside the unit disk (margin 1e-9)")]
    OutsideDisk { x: f64, y: f64 },
    #[error("half-plane point ({re}, {im}) must have a positive imaginary part")]
    NotInUpperHalfPlane { re: f64, im: f64 },
    #[error("arccosh argument {0} is below 1")]
    ArccoshDomain(f64),
    #[error("coincident points")]
    CoincidentPoints,
    #[error("input is empty")]
    EmptyInput,
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
    #[error("expected {expected} weights, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("non-finite coordinate")]
    NonFinite,
}

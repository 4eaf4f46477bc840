use crate::rational::Rational;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("evaluation at a pole: z = {at}")]
    Pole { at: Rational },
    #[error("gcd of two zero polynomials is undefined")]
    ZeroGcd,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular (determinant is identically zero)")]
    Singular,
    #[error("n must be at least 3 (got {0})")]
    DimensionTooSmall(usize),
    #[error("expected {expected} points z_1..z_(n-1), got {got}")]
    PointCount { expected: usize, got: usize },
    #[error("points must be pairwise distinct (indices {0},{1})")]
    RepeatedPoints(usize, usize),
    #[error("rho must be +1 or -1 (got {0})")]
    InvalidRho(i64),
    #[error("this construction requires rho = -1")]
    RequiresRhoMinus,
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("missing series coefficient G_{0}")]
    MissingCoefficient(i64),
    #[error("recurrence step for G_{index} is unsolvable")]
    Obstruction { index: i64 },
    #[error("closed form divides by n - 3 and is undefined for n = {0}")]
    ClosedFormUndefined(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

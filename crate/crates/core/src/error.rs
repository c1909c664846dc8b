use thiserror::Error;

/// Errors raised by construction and verification operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Grading order below 2; order-k supersymmetry is undefined for k < 2.
    #[error("grading order k = {k} is invalid (need k >= 2)")]
    InvalidOrder { k: usize },

    /// Truncation level too small to leave an interior subspace.
    #[error("truncation n_max = {n_max} too small for k = {k} (need n_max >= 2k)")]
    TruncationTooSmall { k: usize, n_max: usize },

    /// A structure-function value under a square root came out negative.
    #[error("structure function F_{s}({n}) = {value} is negative; ladder entry undefined")]
    NegativeStructureFunction { s: usize, n: usize, value: f64 },

    /// Linear gap parameters outside the admissible cases.
    #[error("linear gap parameters a = {a}, b = {b} are inadmissible")]
    InadmissibleLinear { a: f64, b: f64 },

    /// Finite-spectrum cutoff -b/a landed on an integer: the top gap vanishes.
    #[error("degenerate cutoff: -b/a = {ratio} is integral for a = {a}, b = {b}")]
    DegenerateCutoff { a: f64, b: f64, ratio: f64 },

    /// A gap list of the wrong length for the grading order.
    #[error("gap list has {got} entries but the grading order is {expected}")]
    GapArity { expected: usize, got: usize },

    /// Potential evaluated outside its domain.
    #[error("x = {x} is outside the domain of the {family} potential")]
    PotentialDomain { family: &'static str, x: f64 },

    /// Out-of-range model parameter.
    #[error("invalid parameter: {what}")]
    InvalidParameter { what: String },

    /// Discretization grid rejected.
    #[error("invalid grid: {what}")]
    InvalidGrid { what: String },

    /// More eigenvalues requested than the grid can resolve.
    #[error("requested {count} eigenvalues but the grid resolves at most {max}")]
    CountTooLarge { count: usize, max: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

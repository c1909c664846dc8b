//! Small helpers over dense complex matrices.
//!
//! Everything in this crate is desk-scale (dimension at most a few hundred),
//! so dense storage and plain products are the right tool.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// Largest entry modulus; the residual norm used throughout.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// [A, B] = AB - BA.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Identity of the given side.
pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// Diagonal complex matrix from real entries.
pub fn diag_real(entries: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        entries.len(),
        entries.iter().map(|&x| Complex64::new(x, 0.0)),
    ))
}

/// P M P for a diagonal 0/1 projector P.
pub fn sandwich(p: &CMatrix, m: &CMatrix) -> CMatrix {
    p * m * p
}

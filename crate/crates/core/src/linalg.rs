use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{GaborError, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Singular values at or below `RANK_TOL·σ_max` count as zero.
pub const RANK_TOL: f64 = 1e-10;

const EIGEN_MAX_ITER: usize = 10_000;

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    if m.nrows() != m.ncols() {
        return Err(GaborError::Shape(format!(
            "eigenvalues need a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let eig = nalgebra::SymmetricEigen::try_new(m.clone(), f64::EPSILON, EIGEN_MAX_ITER)
        .ok_or_else(|| {
            GaborError::Numeric(format!(
                "Hermitian eigensolver did not converge ({}x{}, max |entry| {:.3e}, asymmetry {:.3e})",
                m.nrows(),
                m.ncols(),
                m.iter().map(|v| v.norm()).fold(0.0, f64::max),
                hermitian_defect(m)
            ))
        })?;
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.total_cmp(b));
    Ok(vals)
}

/// `max |M − M^*|`.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn numerical_rank(singular: &[f64], rel_tol: f64) -> usize {
    let smax = singular.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    singular.iter().filter(|&&s| s > rel_tol * smax).count()
}

/// Spectral-norm distance `‖M − I‖` for Hermitian `M`, from its eigenvalues.
pub fn distance_to_identity(eigenvalues: &[f64]) -> f64 {
    eigenvalues
        .iter()
        .map(|l| (l - 1.0).abs())
        .fold(0.0, f64::max)
}

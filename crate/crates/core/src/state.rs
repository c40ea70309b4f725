//! Density-matrix validation and the initial states used by the worked
//! examples.

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{diag_real, hermitian_eigenvalues, matrix_unit, CMatrix};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DensityError {
    #[error("state must be a square matrix of size {expected}, got {rows}x{cols}")]
    Shape {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("state is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("state trace is {0}, expected 1")]
    Trace(f64),
    #[error("state is not positive semidefinite (eigenvalue {0:.3e})")]
    NotPositive(f64),
}

/// Checks ρ = ρ†, Tr ρ = 1 and ρ ⪰ 0, each within `tol`.
pub fn check_density_matrix(rho: &CMatrix, tol: f64) -> Result<(), DensityError> {
    if !rho.is_square() {
        return Err(DensityError::Shape {
            expected: rho.nrows(),
            rows: rho.nrows(),
            cols: rho.ncols(),
        });
    }
    let asym = (rho - rho.adjoint()).camax();
    if asym > tol {
        return Err(DensityError::NotHermitian(asym));
    }
    let trace = rho.trace();
    if (trace.re - 1.0).abs() > tol || trace.im.abs() > tol {
        return Err(DensityError::Trace(trace.re));
    }
    let min = hermitian_eigenvalues(rho)[0];
    if min < -tol {
        return Err(DensityError::NotPositive(min));
    }
    Ok(())
}

pub fn diagonal(p: &[f64]) -> CMatrix {
    diag_real(p)
}

/// |k⟩⟨k| with 1-based `k`.
pub fn pure(d: usize, k: usize) -> CMatrix {
    matrix_unit(d, k - 1, k - 1)
}

pub fn maximally_mixed(d: usize) -> CMatrix {
    CMatrix::identity(d, d).unscale(d as f64)
}

/// Equal-weight superposition of levels `i` and `j` (1-based) with
/// ρ_ij = ½e^{−iφ}, ρ_ji = ½e^{iφ}.
pub fn phase_pair(d: usize, i: usize, j: usize, phi: f64) -> CMatrix {
    let mut rho = CMatrix::zeros(d, d);
    rho[(i - 1, i - 1)] = Complex64::new(0.5, 0.0);
    rho[(j - 1, j - 1)] = Complex64::new(0.5, 0.0);
    rho[(i - 1, j - 1)] = Complex64::from_polar(0.5, -phi);
    rho[(j - 1, i - 1)] = Complex64::from_polar(0.5, phi);
    rho
}

/// Three-level superposition over levels 1..3 of a 4-level system with
/// relative phases φ₁₂ and φ₁₃: σ_kl = ⅓e^{−i(φ_k−φ_l)} with φ₁ = 0,
/// φ₂ = −φ₁₂, φ₃ = −φ₁₃ (so σ₁₂ = ⅓e^{−iφ₁₂}, σ₁₃ = ⅓e^{−iφ₁₃}).
pub fn phase_triple(phi12: f64, phi13: f64) -> CMatrix {
    let phase = [0.0, -phi12, -phi13];
    let mut rho = CMatrix::zeros(4, 4);
    for k in 0..3 {
        for l in 0..3 {
            rho[(k, l)] = Complex64::from_polar(1.0 / 3.0, -(phase[k] - phase[l]));
        }
    }
    rho
}

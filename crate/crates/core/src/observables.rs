//! Populations, purity, von Neumann entropy and coherences along a
//! trajectory.

use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{hermitian_part, CMatrix};
use crate::solver::Trajectory;

/// Eigenvalues down to −EIGEN_SLACK are treated as rounding noise.
pub const EIGEN_SLACK: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ObservableError {
    #[error("coherence index ({i}, {j}) out of range for dimension {dim}")]
    IndexOutOfRange { i: usize, j: usize, dim: usize },
    #[error("not a state: eigenvalue {min:.3e}, eigenvalue sum {sum}")]
    NotAState { min: f64, sum: f64 },
}

/// Eigenvalues of (ρ + ρ†)/2, clamped at zero and renormalized.
pub fn spectrum(rho: &CMatrix) -> Result<Vec<f64>, ObservableError> {
    let raw: Vec<f64> = SymmetricEigen::new(hermitian_part(rho))
        .eigenvalues
        .iter()
        .copied()
        .collect();
    let min = raw.iter().copied().fold(f64::INFINITY, f64::min);
    let sum: f64 = raw.iter().sum();
    if min < -EIGEN_SLACK || (sum - 1.0).abs() > EIGEN_SLACK {
        return Err(ObservableError::NotAState { min, sum });
    }
    let clamped: Vec<f64> = raw.iter().map(|l| l.clamp(0.0, 1.0)).collect();
    let total: f64 = clamped.iter().sum();
    Ok(clamped.into_iter().map(|l| l / total).collect())
}

fn purity_of(spectrum: &[f64]) -> f64 {
    spectrum.iter().map(|l| l * l).sum()
}

fn entropy_of(spectrum: &[f64]) -> f64 {
    spectrum
        .iter()
        .filter(|l| **l > 0.0)
        .fold(0.0, |s, l| s - l * l.ln())
}

/// Tr ρ² (from the spectrum).
pub fn state_purity(rho: &CMatrix) -> Result<f64, ObservableError> {
    Ok(purity_of(&spectrum(rho)?))
}

/// −Σ λ ln λ with 0 ln 0 = 0.
pub fn state_entropy(rho: &CMatrix) -> Result<f64, ObservableError> {
    Ok(entropy_of(&spectrum(rho)?))
}

/// pᵢ(t) = Re ρᵢᵢ(t); one row per grid point.
pub fn populations(tr: &Trajectory) -> Vec<Vec<f64>> {
    tr.states
        .iter()
        .map(|s| s.diagonal().iter().map(|z| z.re).collect())
        .collect()
}

pub fn purity(tr: &Trajectory) -> Result<Vec<f64>, ObservableError> {
    tr.states.iter().map(state_purity).collect()
}

pub fn entropy(tr: &Trajectory) -> Result<Vec<f64>, ObservableError> {
    tr.states.iter().map(state_entropy).collect()
}

/// ρᵢⱼ(t) with 1-based indices.
pub fn coherence(tr: &Trajectory, i: usize, j: usize) -> Result<Vec<Complex64>, ObservableError> {
    let dim = tr.dim();
    if i == 0 || j == 0 || i > dim || j > dim {
        return Err(ObservableError::IndexOutOfRange { i, j, dim });
    }
    Ok(tr.states.iter().map(|s| s[(i - 1, j - 1)]).collect())
}

/// Everything the CSV writer needs, one entry per grid point. Purity and
/// entropy are `None` where the state is not a density matrix (possible
/// only for inadmissible closed-form runs).
#[derive(Debug, Clone)]
pub struct ObservableSeries {
    pub grid: Vec<f64>,
    pub populations: Vec<Vec<f64>>,
    pub purity: Vec<Option<f64>>,
    pub entropy: Vec<Option<f64>>,
    pub coherences: Vec<((usize, usize), Vec<Complex64>)>,
}

impl ObservableSeries {
    pub fn from_trajectory(
        tr: &Trajectory,
        pairs: &[(usize, usize)],
    ) -> Result<Self, ObservableError> {
        let spectra: Vec<Option<Vec<f64>>> = tr.states.iter().map(|s| spectrum(s).ok()).collect();
        let coherences = pairs
            .iter()
            .map(|&(i, j)| Ok(((i, j), coherence(tr, i, j)?)))
            .collect::<Result<_, ObservableError>>()?;
        Ok(ObservableSeries {
            grid: tr.grid.clone(),
            populations: populations(tr),
            purity: spectra
                .iter()
                .map(|s| s.as_deref().map(purity_of))
                .collect(),
            entropy: spectra
                .iter()
                .map(|s| s.as_deref().map(entropy_of))
                .collect(),
            coherences,
        })
    }

    /// Grid indices where purity/entropy were undefined.
    pub fn invalid_rows(&self) -> Vec<usize> {
        self.purity
            .iter()
            .enumerate()
            .filter(|(_, p)| p.is_none())
            .map(|(k, _)| k)
            .collect()
    }
}

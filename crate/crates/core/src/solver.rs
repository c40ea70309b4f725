//! Closed-form propagation vec ρ(t) = exp(B(t)) vec ρ₀, an independent
//! Dormand–Prince oracle for vec ρ̇ = L(t) vec ρ, and the comparison tools
//! that tie the two together.

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{self, expm, singular_values, unvec, CMatrix, CVector, LinalgError};
use crate::model::{GeneratorDecomposition, ModelError};

/// Default local error tolerance of the oracle.
pub const ORACLE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("time grid must start at 0 and increase strictly")]
    InvalidGrid,
    #[error("trajectories are sampled on different grids")]
    GridMismatch,
    #[error("step size underflow at t = {t}")]
    StepSizeUnderflow { t: f64 },
    #[error("non-finite values at t = {t}")]
    NonFinite { t: f64 },
    #[error("initial state has shape {rows}x{cols}, model dimension is {dim}")]
    Shape {
        rows: usize,
        cols: usize,
        dim: usize,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    OdeOracle,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::ClosedForm => "closed-form",
            Method::OdeOracle => "ode-oracle",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub grid: Vec<f64>,
    pub states: Vec<CMatrix>,
    pub method: Method,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states.first().map_or(0, |s| s.nrows())
    }

    /// max |Tr ρ(tᵢ) − 1|.
    pub fn max_trace_error(&self) -> f64 {
        self.states
            .iter()
            .map(|s| (s.trace() - Complex64::new(1.0, 0.0)).norm())
            .fold(0.0, f64::max)
    }

    /// max ‖ρ(tᵢ) − ρ(tᵢ)†‖ (largest entry).
    pub fn max_hermiticity_error(&self) -> f64 {
        self.states
            .iter()
            .map(|s| (s - s.adjoint()).camax())
            .fold(0.0, f64::max)
    }

    /// Smallest eigenvalue over all states.
    pub fn min_eigenvalue(&self) -> f64 {
        self.states
            .iter()
            .map(|s| linalg::hermitian_eigenvalues(s)[0])
            .fold(f64::INFINITY, f64::min)
    }
}

/// 0, t_max/steps, …, t_max (steps + 1 points).
pub fn uniform_grid(t_max: f64, steps: usize) -> Vec<f64> {
    let steps = steps.max(1);
    (0..=steps)
        .map(|k| t_max * k as f64 / steps as f64)
        .collect()
}

fn check_grid(grid: &[f64]) -> Result<(), SolverError> {
    let starts_at_zero = grid.first() == Some(&0.0);
    let increasing = grid.windows(2).all(|w| w[1] > w[0]);
    if starts_at_zero && increasing && grid.iter().all(|t| t.is_finite()) {
        Ok(())
    } else {
        Err(SolverError::InvalidGrid)
    }
}

fn check_shape(g: &GeneratorDecomposition, rho0: &CMatrix) -> Result<(), SolverError> {
    let d = g.dim();
    if rho0.shape() != (d, d) {
        return Err(SolverError::Shape {
            rows: rho0.nrows(),
            cols: rho0.ncols(),
            dim: d,
        });
    }
    Ok(())
}

/// exp(B(t)) α.
pub fn closed_form_vector(
    g: &GeneratorDecomposition,
    alpha: &CVector,
    t: f64,
) -> Result<CVector, SolverError> {
    let y = expm(&g.integral_at(t)?)? * alpha;
    if y.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(y)
    } else {
        Err(SolverError::NonFinite { t })
    }
}

/// ρ(tᵢ) = unvec(exp(B(tᵢ)) vec ρ₀). Admissibility of ρ₀ is the caller's
/// business; outside M the result is well defined but not a solution.
pub fn propagate_closed_form(
    g: &GeneratorDecomposition,
    rho0: &CMatrix,
    grid: &[f64],
) -> Result<Trajectory, SolverError> {
    check_grid(grid)?;
    check_shape(g, rho0)?;
    let alpha = linalg::vec(rho0);
    let states = grid
        .iter()
        .map(|&t| Ok(unvec(&closed_form_vector(g, &alpha, t)?, g.dim())?))
        .collect::<Result<_, SolverError>>()?;
    Ok(Trajectory {
        grid: grid.to_vec(),
        states,
        method: Method::ClosedForm,
    })
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// 5th-order weights minus embedded 4th-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;

struct Dopri<'a> {
    g: &'a GeneratorDecomposition,
    tol: f64,
}

impl Dopri<'_> {
    fn rhs(&self, t: f64, y: &CVector) -> Result<CVector, SolverError> {
        Ok(self.g.generator_at(t)? * y)
    }

    /// One trial step. Returns (y_new, f(t+h, y_new), scaled error norm).
    fn trial(
        &self,
        t: f64,
        h: f64,
        y: &CVector,
        f0: &CVector,
    ) -> Result<(CVector, CVector, f64), SolverError> {
        let mut k: Vec<CVector> = Vec::with_capacity(7);
        k.push(f0.clone());
        for stage in 1..7 {
            let mut ys = y.clone();
            for (j, kj) in k.iter().enumerate() {
                let a = A[stage][j];
                if a != 0.0 {
                    ys.axpy(Complex64::new(h * a, 0.0), kj, Complex64::new(1.0, 0.0));
                }
            }
            if stage == 6 {
                // A[6] holds the 5th-order weights: ys is the new solution
                let f_new = self.rhs(t + h, &ys)?;
                k.push(f_new.clone());
                let mut err = CVector::zeros(y.len());
                for (e, kj) in E.iter().zip(&k) {
                    if *e != 0.0 {
                        err.axpy(Complex64::new(h * e, 0.0), kj, Complex64::new(1.0, 0.0));
                    }
                }
                let norm = (err
                    .iter()
                    .zip(y.iter().zip(ys.iter()))
                    .map(|(e, (a, b))| {
                        let scale = self.tol + self.tol * a.norm().max(b.norm());
                        (e.norm() / scale).powi(2)
                    })
                    .sum::<f64>()
                    / y.len() as f64)
                    .sqrt();
                return Ok((ys, f_new, norm));
            }
            k.push(self.rhs(t + C[stage] * h, &ys)?);
        }
        unreachable!("the tableau has seven stages")
    }
}

/// Adaptive Dormand–Prince 5(4) integration of vec ρ̇ = L(t) vec ρ with
/// mixed absolute/relative local error tolerance `tol`. Steps are clipped
/// so that every grid point is hit exactly. Uses only L(t): no matrix
/// exponentials and no commutativity assumptions.
pub fn ode_oracle(
    g: &GeneratorDecomposition,
    rho0: &CMatrix,
    grid: &[f64],
    tol: f64,
) -> Result<Trajectory, SolverError> {
    check_grid(grid)?;
    check_shape(g, rho0)?;
    let solver = Dopri { g, tol };
    let mut y = linalg::vec(rho0);
    let mut t = 0.0;
    let mut f = solver.rhs(t, &y)?;
    let span = grid.last().copied().unwrap_or(0.0).max(1.0);
    let mut h = 1e-3 * span;
    let mut states = vec![rho0.clone()];
    for &target in &grid[1..] {
        while t < target {
            let remaining = target - t;
            let clipped = h >= remaining;
            let step = if clipped { remaining } else { h };
            if step < 1e-14 * t.abs().max(1.0) {
                return Err(SolverError::StepSizeUnderflow { t });
            }
            let (y_new, f_new, err) = solver.trial(t, step, &y, &f)?;
            if !err.is_finite() {
                return Err(SolverError::NonFinite { t });
            }
            let factor = if err == 0.0 {
                MAX_FACTOR
            } else {
                (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
            };
            if err <= 1.0 {
                t = if clipped { target } else { t + step };
                y = y_new;
                f = f_new;
                // a clipped step says nothing about how large h may grow
                if !clipped {
                    h = step * factor;
                }
            } else {
                h = step * factor.min(1.0);
            }
        }
        states.push(unvec(&y, g.dim())?);
    }
    Ok(Trajectory {
        grid: grid.to_vec(),
        states,
        method: Method::OdeOracle,
    })
}

/// max over the grid of ‖d/dt[exp(B(t))α] − L(t) exp(B(t))α‖ / ‖α‖. The
/// derivative is a central difference with h = 1e−5·Δt (one-sided second
/// order where t − h < 0).
pub fn fedorov_residual(
    g: &GeneratorDecomposition,
    alpha: &CVector,
    grid: &[f64],
) -> Result<f64, SolverError> {
    check_grid(grid)?;
    if !alpha.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Err(SolverError::NonFinite { t: 0.0 });
    }
    let norm = alpha.norm();
    if norm == 0.0 {
        return Ok(0.0);
    }
    let dt = if grid.len() > 1 {
        grid[grid.len() - 1] / (grid.len() - 1) as f64
    } else {
        1.0
    };
    let h = 1e-5 * dt;
    let y = |t: f64| closed_form_vector(g, alpha, t);
    let mut worst = 0.0f64;
    for &t in grid {
        let derivative = if t - h >= 0.0 {
            (y(t + h)? - y(t - h)?).unscale(2.0 * h)
        } else {
            (y(t + h)?.scale(4.0) - y(t + 2.0 * h)? - y(t)?.scale(3.0)).unscale(2.0 * h)
        };
        let r = (derivative - g.generator_at(t)? * y(t)?).norm() / norm;
        if !r.is_finite() {
            return Err(SolverError::NonFinite { t });
        }
        worst = worst.max(r);
    }
    Ok(worst)
}

/// ½‖ρ − σ‖₁.
pub fn trace_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    0.5 * singular_values(&(a - b)).iter().sum::<f64>()
}

/// Largest trace distance between corresponding states.
pub fn compare(a: &Trajectory, b: &Trajectory) -> Result<f64, SolverError> {
    let same_grid = a.grid.len() == b.grid.len()
        && a.grid
            .iter()
            .zip(&b.grid)
            .all(|(x, y)| (x - y).abs() <= 1e-12 * x.abs().max(1.0));
    if !same_grid || a.dim() != b.dim() {
        return Err(SolverError::GridMismatch);
    }
    Ok(a.states
        .iter()
        .zip(&b.states)
        .map(|(x, y)| trace_distance(x, y))
        .fold(0.0, f64::max))
}

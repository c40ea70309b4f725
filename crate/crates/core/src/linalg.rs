//! Dense complex linear algebra: Kronecker products, column-stacking
//! vectorization, commutators, the matrix exponential, numerical kernels and
//! minimal-polynomial degrees.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use thiserror::Error;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Default relative rank threshold.
pub const DEFAULT_REL_TOL: f64 = 1e-10;

/// Below this largest singular value a matrix is treated as zero.
pub const ABS_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("non-finite entries in {0}")]
    NonFinite(&'static str),
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Matrix unit |i⟩⟨j| (0-based indices).
pub fn matrix_unit(d: usize, i: usize, j: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d, d);
    m[(i, j)] = Complex64::new(1.0, 0.0);
    m
}

pub fn diag_real(values: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_iterator(
        values.len(),
        values.iter().map(|v| Complex64::new(*v, 0.0)),
    ))
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Stacks the columns of `m` into one vector.
pub fn vec(m: &CMatrix) -> CVector {
    // nalgebra storage is column-major already
    CVector::from_column_slice(m.as_slice())
}

pub fn unvec(v: &CVector, d: usize) -> Result<CMatrix, LinalgError> {
    if v.len() != d * d {
        return Err(LinalgError::DimensionMismatch(format!(
            "vector of length {} cannot be reshaped to {d}x{d}",
            v.len()
        )));
    }
    Ok(CMatrix::from_column_slice(d, d, v.as_slice()))
}

fn require_square_pair(a: &CMatrix, b: &CMatrix) -> Result<(), LinalgError> {
    if !a.is_square() || a.shape() != b.shape() {
        return Err(LinalgError::DimensionMismatch(format!(
            "commutator needs equal square matrices, got {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    Ok(())
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> Result<CMatrix, LinalgError> {
    require_square_pair(a, b)?;
    Ok(a * b - b * a)
}

/// Maximum absolute column sum.
pub fn norm1(a: &CMatrix) -> f64 {
    a.column_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn frobenius(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()).scale(0.5)
}

/// Eigenvalues of the Hermitian part of `a`, ascending.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    let mut values: Vec<f64> = SymmetricEigen::new(hermitian_part(a))
        .eigenvalues
        .iter()
        .copied()
        .collect();
    values.sort_by(f64::total_cmp);
    values
}

/// Singular values, descending.
pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = a.clone().singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

// Padé coefficients b_0..b_m of the [m/m] approximant to exp.
const PADE3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const PADE9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
// 1-norm bounds below which the degree-m approximant is accurate to unit
// roundoff (Higham 2005).
#[allow(clippy::excessive_precision)]
const THETA: [(f64, &[f64]); 4] = [
    (1.495585217958292e-2, &PADE3),
    (2.539398330063230e-1, &PADE5),
    (9.504178996162932e-1, &PADE7),
    (2.097847961257068e0, &PADE9),
];
const THETA13: f64 = 5.371920351148152e0;

fn pade_quotient(u: CMatrix, v: CMatrix) -> Result<CMatrix, LinalgError> {
    let numerator = &v + &u;
    (v - u)
        .lu()
        .solve(&numerator)
        .ok_or(LinalgError::NonFinite("Padé denominator"))
}

/// Matrix exponential by scaling and squaring with Padé approximants of
/// degree 3, 5, 7, 9 or 13.
pub fn expm(a: &CMatrix) -> Result<CMatrix, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::DimensionMismatch(format!(
            "expm needs a square matrix, got {:?}",
            a.shape()
        )));
    }
    if !is_finite(a) {
        return Err(LinalgError::NonFinite("expm argument"));
    }
    let n = a.nrows();
    let ident = CMatrix::identity(n, n);
    let norm = norm1(a);

    for (theta, b) in THETA {
        if norm <= theta {
            let a2 = a * a;
            let mut odd = ident.scale(b[1]);
            let mut even = ident.scale(b[0]);
            let mut power = ident.clone();
            for k in 1..b.len() / 2 {
                power = &power * &a2;
                odd += power.scale(b[2 * k + 1]);
                even += power.scale(b[2 * k]);
            }
            let r = pade_quotient(a * odd, even)?;
            return finite_or(r);
        }
    }

    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let a = a.scale(0.5f64.powi(s));
    let b = &PADE13;
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let u_inner = &a6 * (a6.scale(b[13]) + a4.scale(b[11]) + a2.scale(b[9]))
        + a6.scale(b[7])
        + a4.scale(b[5])
        + a2.scale(b[3])
        + ident.scale(b[1]);
    let u = &a * u_inner;
    let v = &a6 * (a6.scale(b[12]) + a4.scale(b[10]) + a2.scale(b[8]))
        + a6.scale(b[6])
        + a4.scale(b[4])
        + a2.scale(b[2])
        + ident.scale(b[0]);
    let mut r = pade_quotient(u, v)?;
    for _ in 0..s {
        r = &r * &r;
    }
    finite_or(r)
}

fn finite_or(m: CMatrix) -> Result<CMatrix, LinalgError> {
    if is_finite(&m) {
        Ok(m)
    } else {
        Err(LinalgError::NonFinite("expm result"))
    }
}

/// Orthonormal basis of a subspace of ℂ^μ, stored as the columns of a μ×r
/// matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    basis: CMatrix,
}

impl SubspaceBasis {
    pub fn new(basis: CMatrix) -> Self {
        SubspaceBasis { basis }
    }

    pub fn full(ambient: usize) -> Self {
        SubspaceBasis {
            basis: CMatrix::identity(ambient, ambient),
        }
    }

    pub fn ambient(&self) -> usize {
        self.basis.nrows()
    }

    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.ambient()
    }

    pub fn vectors(&self) -> impl Iterator<Item = CVector> + '_ {
        self.basis.column_iter().map(|c| c.into_owned())
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.basis
    }

    /// Orthogonal projector ΠΠ†.
    pub fn projector(&self) -> CMatrix {
        &self.basis * self.basis.adjoint()
    }

    /// Norm of the component of `v` orthogonal to the subspace.
    pub fn distance(&self, v: &CVector) -> f64 {
        let inside = &self.basis * (self.basis.adjoint() * v);
        (v - inside).norm()
    }

    /// Coordinates e_k (0-based) that span the orthogonal complement, when
    /// the complement is exactly a set of coordinate axes within `tol`.
    /// Returns `None` for any other complement.
    pub fn excluded_coordinates(&self, tol: f64) -> Option<Vec<usize>> {
        let mu = self.ambient();
        let complement = CMatrix::identity(mu, mu) - self.projector();
        let mut excluded = Vec::new();
        for i in 0..mu {
            for j in 0..mu {
                let z = complement[(i, j)];
                if i == j {
                    if (z.re - 1.0).abs() <= tol && z.im.abs() <= tol {
                        excluded.push(i);
                    } else if z.norm() > tol {
                        return None;
                    }
                } else if z.norm() > tol {
                    return None;
                }
            }
        }
        (excluded.len() + self.rank() == mu).then_some(excluded)
    }
}

/// Numerical kernel of a square matrix: right singular vectors whose
/// singular values are at most `rel_tol·σ_max`. A matrix with
/// σ_max ≤ [`ABS_FLOOR`] has the whole space as kernel.
pub fn null_space(a: &CMatrix, rel_tol: f64) -> Result<SubspaceBasis, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::DimensionMismatch(format!(
            "null_space needs a square matrix, got {:?}",
            a.shape()
        )));
    }
    if !is_finite(a) {
        return Err(LinalgError::NonFinite("null_space argument"));
    }
    let mu = a.ncols();
    let svd = a.clone().svd(false, true);
    let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    if sigma_max <= ABS_FLOOR {
        return Ok(SubspaceBasis::full(mu));
    }
    let v_t = svd.v_t.ok_or(LinalgError::NonFinite("SVD"))?;
    let threshold = rel_tol * sigma_max;
    let columns: Vec<CVector> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= threshold)
        .map(|(k, _)| v_t.row(k).adjoint())
        .collect();
    // a thin SVD of a square matrix is complete, so no vectors are missing
    Ok(SubspaceBasis::new(if columns.is_empty() {
        CMatrix::zeros(mu, 0)
    } else {
        CMatrix::from_columns(&columns)
    }))
}

/// Degree of the minimal polynomial: the smallest m for which vec(A^m) lies
/// in the span of vec(A⁰), …, vec(A^{m−1}). Each power is normalized before
/// the rank test, so the answer does not depend on the scale of `a`. The
/// rank test thresholds the singular values of the stacked power vectors
/// (square roots of the Gram eigenvalues) at `rel_tol·σ_max`.
pub fn minimal_poly_degree(a: &CMatrix, rel_tol: f64) -> Result<usize, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::DimensionMismatch(format!(
            "minimal_poly_degree needs a square matrix, got {:?}",
            a.shape()
        )));
    }
    if !is_finite(a) {
        return Err(LinalgError::NonFinite("minimal_poly_degree argument"));
    }
    let n = a.nrows();
    let mut columns: Vec<CVector> = Vec::with_capacity(n + 1);
    let mut power = CMatrix::identity(n, n);
    for m in 0..=n {
        let norm = frobenius(&power);
        if !norm.is_finite() {
            return Err(LinalgError::NonFinite("matrix power"));
        }
        if norm == 0.0 {
            return Ok(m);
        }
        columns.push(vec(&power.unscale(norm)));
        let stacked = CMatrix::from_columns(&columns);
        let s = singular_values(&stacked);
        if s[s.len() - 1] <= rel_tol * s[0] {
            return Ok(m);
        }
        // keep the running power normalized; only directions matter
        power = (&power * a).unscale(norm);
    }
    // Cayley–Hamilton bounds the degree by n
    Ok(n)
}

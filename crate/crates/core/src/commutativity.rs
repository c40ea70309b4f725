//! Solvability criteria for vec ρ̇ = L(t) vec ρ.
//!
//! * functional commutativity: [L(t), L(s)] = 0 for all t, s;
//! * integral commutativity: [L(t), B(t)] = 0 with B(t) = ∫₀ᵗ L;
//! * partial commutativity: the subspace M of vectors α with
//!   [L(t), Bⁿ(t)] α = 0 for every n, on which exp(B(t)) α solves the
//!   equation exactly.
//!
//! M is computed as the kernel of Σ_t Σ_n Cₙ(t)†Cₙ(t), Cₙ = [L(t), Bⁿ(t)]:
//! the kernel of a sum of Gram operators is the intersection of the
//! individual kernels. Times are sampled, so the result is re-verified on a
//! denser grid.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::{
    self, commutator, frobenius, minimal_poly_degree, null_space, CMatrix, CVector, LinalgError,
    SubspaceBasis,
};
use crate::model::{GeneratorDecomposition, ModelError};
use crate::state::{check_density_matrix, DensityError};

/// Relative tolerance of the commutator tests.
pub const DEFAULT_COMMUTATOR_TOL: f64 = 1e-10;

/// Bound on ‖[L(t), Bⁿ(t)] b‖ / ‖Bⁿ(t)‖, relative to max(1, ‖L(t)‖).
pub const RESIDUAL_TOL: f64 = 1e-8;

/// Factor by which the verification grid is denser than the sample set.
pub const VERIFY_DENSITY: usize = 10;

const STRUCTURED_TIMES: [f64; 7] = [0.1, 0.5, 1.0, 2.0, std::f64::consts::PI, 5.0, 8.0];
const RANDOM_TIMES: usize = 5;
const SAMPLE_SEED: u64 = 42;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CommutativityError {
    #[error("need at least {need} distinct positive sample times, got {got}")]
    TooFewTimes { need: usize, got: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("not a density matrix: {0}")]
    NotADensityMatrix(#[from] DensityError),
}

/// Seven structured points {0.1, 0.5, 1, 2, π, 5, 8} and five seeded
/// uniform draws from [0.1, 8], all multiplied by `time_scale` (typically
/// 1/ω). Sorted ascending.
pub fn default_sample_times(time_scale: f64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let mut times: Vec<f64> = STRUCTURED_TIMES.to_vec();
    times.extend((0..RANDOM_TIMES).map(|_| rng.gen_range(0.1..8.0)));
    for t in &mut times {
        *t *= time_scale;
    }
    times.sort_by(f64::total_cmp);
    times
}

fn commutes(a: &CMatrix, b: &CMatrix, tol: f64) -> Result<bool, LinalgError> {
    let scale = (frobenius(a) * frobenius(b)).max(1.0);
    Ok(frobenius(&commutator(a, b)?) <= tol * scale)
}

/// Outcome of the functional-commutativity test, with its two halves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FunctionalCheck {
    /// The constant components (drift and one matrix per distinct rate)
    /// pairwise commute.
    pub components: bool,
    /// L(tᵢ) and L(tⱼ) commute for all sampled pairs.
    pub sampled: bool,
}

impl FunctionalCheck {
    pub fn holds(&self) -> bool {
        self.components && self.sampled
    }
}

/// Groups parts with structurally equal rates and folds constant-rate
/// parts into the drift, so distinct components multiply distinct
/// functions of time.
fn constant_components(g: &GeneratorDecomposition) -> Vec<CMatrix> {
    let mut drift = g.drift().clone();
    let mut groups: Vec<(&crate::expr::RateExpr, CMatrix)> = Vec::new();
    for part in g.parts() {
        if let Some(c) = part.rate.as_constant() {
            drift += part.matrix.scale(c);
            continue;
        }
        match groups.iter_mut().find(|(rate, _)| **rate == part.rate) {
            Some((_, m)) => *m += &part.matrix,
            None => groups.push((&part.rate, part.matrix.clone())),
        }
    }
    std::iter::once(drift)
        .chain(groups.into_iter().map(|(_, m)| m))
        .collect()
}

pub fn functional_check(
    g: &GeneratorDecomposition,
    times: &[f64],
    tol: f64,
) -> Result<FunctionalCheck, CommutativityError> {
    if times.len() < 2 {
        return Err(CommutativityError::TooFewTimes {
            need: 2,
            got: times.len(),
        });
    }
    let comps = constant_components(g);
    let mut components = true;
    for (i, a) in comps.iter().enumerate() {
        for b in &comps[i + 1..] {
            components &= commutes(a, b, tol)?;
        }
    }
    let generators: Vec<CMatrix> = times
        .iter()
        .map(|t| g.generator_at(*t))
        .collect::<Result<_, _>>()?;
    let mut sampled = true;
    for (i, a) in generators.iter().enumerate() {
        for b in &generators[i + 1..] {
            sampled &= commutes(a, b, tol)?;
        }
    }
    Ok(FunctionalCheck {
        components,
        sampled,
    })
}

/// [L(t), L(s)] = 0, judged from the constant components and sampled pairs.
pub fn functional_commutativity(
    g: &GeneratorDecomposition,
    times: &[f64],
    tol: f64,
) -> Result<bool, CommutativityError> {
    Ok(functional_check(g, times, tol)?.holds())
}

/// [L(t), B(t)] = 0 at every sampled t.
pub fn integral_commutativity(
    g: &GeneratorDecomposition,
    times: &[f64],
    tol: f64,
) -> Result<bool, CommutativityError> {
    for &t in times {
        if !commutes(&g.generator_at(t)?, &g.integral_at(t)?, tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Powers B¹..B^cap, each paired with its Frobenius norm.
fn powers(b: &CMatrix, cap: usize) -> Vec<(CMatrix, f64)> {
    let mut out = Vec::with_capacity(cap);
    let mut p = b.clone();
    for _ in 0..cap {
        let norm = frobenius(&p);
        let next = &p * b;
        out.push((p, norm));
        p = next;
    }
    out
}

/// Γ(t) = Σ_{n=1}^{cap} Cₙ†Cₙ with Cₙ = [L(t), Bⁿ(t)] / ‖Bⁿ(t)‖.
pub fn gamma_operator(
    g: &GeneratorDecomposition,
    t: f64,
    power_cap: usize,
) -> Result<CMatrix, CommutativityError> {
    let l = g.generator_at(t)?;
    let b = g.integral_at(t)?;
    let mu = g.mu();
    let mut gamma = CMatrix::zeros(mu, mu);
    for (bn, norm) in powers(&b, power_cap.max(1)) {
        if norm == 0.0 {
            continue;
        }
        let cn = commutator(&l, &bn)?.unscale(norm);
        gamma += cn.adjoint() * &cn;
    }
    if !linalg::is_finite(&gamma) {
        return Err(LinalgError::NonFinite("gamma operator").into());
    }
    Ok(gamma)
}

fn distinct_positive(times: &[f64]) -> usize {
    let mut v: Vec<f64> = times.iter().copied().filter(|t| *t > 0.0).collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v.len()
}

fn median(times: &[f64]) -> f64 {
    let mut v = times.to_vec();
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

/// min(μ−1, deg_min B(t₀) − 1) at the median sample time t₀, at least 1.
pub fn power_cap(
    g: &GeneratorDecomposition,
    times: &[f64],
    rel_tol: f64,
) -> Result<usize, CommutativityError> {
    let b0 = g.integral_at(median(times))?;
    let degree = minimal_poly_degree(&b0, rel_tol)?;
    Ok(degree.saturating_sub(1).min(g.mu() - 1).max(1))
}

/// M(L) as the numerical kernel of Σ_t Γ(t), together with the power cap
/// that was used.
pub fn partial_subspace_with_cap(
    g: &GeneratorDecomposition,
    times: &[f64],
    rel_tol: f64,
) -> Result<(SubspaceBasis, usize), CommutativityError> {
    let got = distinct_positive(times);
    if got < 3 {
        return Err(CommutativityError::TooFewTimes { need: 3, got });
    }
    let cap = power_cap(g, times, rel_tol)?;
    let mu = g.mu();
    let mut total = CMatrix::zeros(mu, mu);
    // fixed summation order: ascending time as given
    for &t in times.iter().filter(|t| **t > 0.0) {
        total += gamma_operator(g, t, cap)?;
    }
    Ok((null_space(&total, rel_tol)?, cap))
}

pub fn partial_subspace(
    g: &GeneratorDecomposition,
    times: &[f64],
    rel_tol: f64,
) -> Result<SubspaceBasis, CommutativityError> {
    Ok(partial_subspace_with_cap(g, times, rel_tol)?.0)
}

/// ρ₀ is a density matrix (within `tol`) whose vectorization lies in `s`.
pub fn admissible(rho0: &CMatrix, s: &SubspaceBasis, tol: f64) -> Result<bool, CommutativityError> {
    check_density_matrix(rho0, tol)?;
    if rho0.nrows() * rho0.ncols() != s.ambient() {
        return Err(LinalgError::DimensionMismatch(format!(
            "state of size {}x{} against a subspace of C^{}",
            rho0.nrows(),
            rho0.ncols(),
            s.ambient()
        ))
        .into());
    }
    Ok(s.distance(&linalg::vec(rho0)) <= tol)
}

/// Largest ‖[L(t), Bⁿ(t)] b‖ / ‖Bⁿ(t)‖ over `times`, n ≤ `cap` and the
/// basis vectors, together with whether each value stayed below
/// [`RESIDUAL_TOL`]·max(1, ‖L(t)‖).
pub fn commutator_residual(
    g: &GeneratorDecomposition,
    basis: &SubspaceBasis,
    times: &[f64],
    cap: usize,
) -> Result<(f64, bool), CommutativityError> {
    let mut worst = 0.0f64;
    let mut ok = true;
    if basis.rank() == 0 {
        return Ok((worst, ok));
    }
    let vectors: Vec<CVector> = basis.vectors().collect();
    for &t in times {
        let l = g.generator_at(t)?;
        let scale = frobenius(&l).max(1.0);
        for (bn, norm) in powers(&g.integral_at(t)?, cap.max(1)) {
            if norm == 0.0 {
                continue;
            }
            let cn = commutator(&l, &bn)?;
            for v in &vectors {
                let r = (&cn * v).norm() / norm;
                worst = worst.max(r);
                ok &= r <= RESIDUAL_TOL * scale;
            }
        }
    }
    Ok((worst, ok))
}

/// Evenly spaced grid with `VERIFY_DENSITY` times as many points as
/// `times`, spanning their positive range.
pub fn verification_grid(times: &[f64]) -> Vec<f64> {
    let positive: Vec<f64> = times.iter().copied().filter(|t| *t > 0.0).collect();
    let lo = positive.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = positive.iter().copied().fold(0.0, f64::max);
    let n = (VERIFY_DENSITY * times.len()).max(2);
    (0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
        .collect()
}

/// "33" for (3, 3); "3,12" once an index has two digits.
pub fn entry_label(i: usize, j: usize) -> String {
    if i < 10 && j < 10 {
        format!("{i}{j}")
    } else {
        format!("{i},{j}")
    }
}

#[derive(Debug, Clone)]
pub struct CommutativityReport {
    pub functional: bool,
    pub functional_detail: FunctionalCheck,
    pub integral: bool,
    pub partial_rank: usize,
    pub subspace: SubspaceBasis,
    pub power_cap: usize,
    pub sample_times: Vec<f64>,
    pub residual_max: f64,
    /// Residual stayed below tolerance on the dense verification grid.
    pub verified: bool,
    /// Level count d of the underlying model.
    pub dim: usize,
}

impl CommutativityReport {
    pub fn is_full(&self) -> bool {
        self.subspace.is_full()
    }

    /// Vectorized coordinates (1-based, column-major) spanning the
    /// complement of M, when that complement is coordinate-aligned.
    pub fn excluded_coordinates(&self) -> Option<Vec<usize>> {
        self.subspace
            .excluded_coordinates(1e-8)
            .map(|v| v.into_iter().map(|k| k + 1).collect())
    }

    /// Matrix entries (i, j), 1-based, that must vanish for a state to lie
    /// in M. `None` when M is not cut out by vanishing entries.
    pub fn vanishing_entries(&self) -> Option<Vec<(usize, usize)>> {
        let d = self.dim;
        self.excluded_coordinates().map(|ks| {
            ks.into_iter()
                .map(|k| ((k - 1) % d + 1, (k - 1) / d + 1))
                .collect()
        })
    }

    /// Human-readable description of M: "full", "ρ_33 = 0", or a basis
    /// dimension when no coordinate pattern is found.
    pub fn characterization(&self) -> String {
        if self.is_full() {
            return "full".into();
        }
        match self.vanishing_entries() {
            Some(entries) if !entries.is_empty() => entries
                .iter()
                .map(|(i, j)| format!("ρ_{} = 0", entry_label(*i, *j)))
                .collect::<Vec<_>>()
                .join(", "),
            _ => format!("general subspace of dimension {}", self.partial_rank),
        }
    }
}

impl fmt::Display for CommutativityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let yes = |b: bool| if b { "yes" } else { "no" };
        writeln!(f, "functional: {}", yes(self.functional))?;
        writeln!(f, "integral: {}", yes(self.integral))?;
        if self.is_full() {
            writeln!(f, "M: full (dim {})", self.partial_rank)?;
        } else {
            writeln!(
                f,
                "M: dim {}; admissible states satisfy {}",
                self.partial_rank,
                self.characterization()
            )?;
        }
        writeln!(f, "power cap: {}", self.power_cap)?;
        write!(
            f,
            "residual max: {:.3e} ({})",
            self.residual_max,
            if self.verified {
                "verified"
            } else {
                "NOT verified"
            }
        )
    }
}

/// Runs the three criteria and verifies the subspace on a grid ten times
/// denser than `times`.
pub fn classify(
    g: &GeneratorDecomposition,
    times: &[f64],
    rel_tol: f64,
) -> Result<CommutativityReport, CommutativityError> {
    let functional_detail = functional_check(g, times, DEFAULT_COMMUTATOR_TOL)?;
    let integral = integral_commutativity(g, times, DEFAULT_COMMUTATOR_TOL)?;
    let (subspace, cap) = partial_subspace_with_cap(g, times, rel_tol)?;
    let (residual_max, verified) =
        commutator_residual(g, &subspace, &verification_grid(times), cap)?;
    Ok(CommutativityReport {
        functional: functional_detail.holds(),
        functional_detail,
        integral,
        partial_rank: subspace.rank(),
        subspace,
        power_cap: cap,
        sample_times: times.to_vec(),
        residual_max,
        verified,
        dim: g.dim(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::RateExpr;
    use crate::linalg::{c, diag_real, hermitian_eigenvalues, matrix_unit, DEFAULT_REL_TOL};
    use crate::model::{assemble, builtin, Jump, LindbladModel};
    use crate::state;
    use std::collections::BTreeMap;

    fn generator(name: &str, params: &[(&str, &str)]) -> GeneratorDecomposition {
        let p: BTreeMap<String, String> = params
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        assemble(&builtin(name, &p).unwrap()).unwrap()
    }

    fn times() -> Vec<f64> {
        default_sample_times(1.0)
    }

    #[test]
    fn default_times_are_deterministic_and_positive() {
        let a = default_sample_times(1.0);
        assert_eq!(a, default_sample_times(1.0));
        assert_eq!(a.len(), 12);
        assert!(a.iter().all(|t| *t >= 0.1 && *t <= 8.0));
        let half = default_sample_times(0.5);
        assert!(a
            .iter()
            .zip(&half)
            .all(|(x, y)| (x * 0.5 - y).abs() < 1e-15));
    }

    #[test]
    fn v3_is_functionally_and_integrally_commutative() {
        let g = generator("v3", &[("e1", "1"), ("e3", "2")]);
        assert!(functional_commutativity(&g, &times(), DEFAULT_COMMUTATOR_TOL).unwrap());
        assert!(integral_commutativity(&g, &times(), DEFAULT_COMMUTATOR_TOL).unwrap());
    }

    #[test]
    fn cascade3_fails_both_criteria() {
        let g = generator("cascade3", &[]);
        let check = functional_check(&g, &times(), DEFAULT_COMMUTATOR_TOL).unwrap();
        assert!(!check.components && !check.sampled);
        assert!(!integral_commutativity(&g, &times(), DEFAULT_COMMUTATOR_TOL).unwrap());
    }

    #[test]
    fn single_channel_model_commutes() {
        let m = LindbladModel::new(
            diag_real(&[0.0, 1.0]),
            vec![Jump::transition(2, 2, 1, RateExpr::sin(RateExpr::T).powi(2)).unwrap()],
        )
        .unwrap();
        let g = assemble(&m).unwrap();
        assert!(functional_commutativity(&g, &times(), DEFAULT_COMMUTATOR_TOL).unwrap());
    }

    #[test]
    fn constant_rates_commute_with_integral() {
        let m = LindbladModel::new(
            diag_real(&[-1.0, 0.0, 1.0]),
            vec![
                Jump::transition(3, 3, 2, RateExpr::Num(0.4)).unwrap(),
                Jump::transition(3, 2, 1, RateExpr::Num(1.3)).unwrap(),
            ],
        )
        .unwrap();
        let g = assemble(&m).unwrap();
        assert!(integral_commutativity(&g, &times(), DEFAULT_COMMUTATOR_TOL).unwrap());
        assert!(functional_commutativity(&g, &times(), DEFAULT_COMMUTATOR_TOL).unwrap());
    }

    #[test]
    fn equal_rates_are_grouped_before_component_check() {
        // Two non-commuting dissipators sharing one rate: L(t) = L_H + γ(t)(A + B)
        // is a one-function family, hence functionally commutative.
        let rate = RateExpr::sin(RateExpr::T).powi(2);
        let m = LindbladModel::new(
            CMatrix::zeros(3, 3),
            vec![
                Jump::transition(3, 3, 2, rate.clone()).unwrap(),
                Jump::transition(3, 2, 1, rate).unwrap(),
            ],
        )
        .unwrap();
        let g = assemble(&m).unwrap();
        assert!(functional_check(&g, &times(), DEFAULT_COMMUTATOR_TOL)
            .unwrap()
            .holds());
    }

    #[test]
    fn gamma_vanishes_for_commuting_generator() {
        let g = generator("v3", &[("e1", "1"), ("e3", "2")]);
        let gamma = gamma_operator(&g, 1.3, 8).unwrap();
        assert!(gamma.camax() < 1e-25);
    }

    fn significant_entries(gamma: &CMatrix) -> Vec<(usize, usize)> {
        let scale = gamma.camax();
        let mut out = Vec::new();
        for i in 0..gamma.nrows() {
            for j in 0..gamma.ncols() {
                if gamma[(i, j)].norm() > 1e-10 * scale {
                    out.push((i + 1, j + 1));
                }
            }
        }
        out
    }

    #[test]
    fn cascade3_gamma_is_supported_on_entry_9_9() {
        let g = generator("cascade3", &[]);
        for t in [0.7, 1.9, 4.4] {
            let gamma = gamma_operator(&g, t, 8).unwrap();
            assert!(gamma.camax() > 1e-6);
            assert_eq!(significant_entries(&gamma), vec![(9, 9)]);
        }
    }

    #[test]
    fn lambda3_gamma_is_supported_on_entry_5_5() {
        for (f1, f2) in [
            ("sin(t)^2", "cos(t)^2"),
            ("t", "exp(-t)"),
            ("1 + sin(2*t)", "t^2"),
        ] {
            let g = generator(
                "lambda3",
                &[("f1", f1), ("f2", f2), ("e1", "0.8"), ("e3", "1.7")],
            );
            for t in [0.7, 1.9, 4.4] {
                let gamma = gamma_operator(&g, t, 8).unwrap();
                assert_eq!(significant_entries(&gamma), vec![(5, 5)], "{f1}, {f2}");
            }
        }
    }

    #[test]
    fn gamma_is_hermitian_psd() {
        for name in ["cascade3", "lambda3", "cascade4"] {
            let g = generator(name, &[]);
            let gamma = gamma_operator(&g, 2.3, 6).unwrap();
            assert!((&gamma - gamma.adjoint()).camax() <= 1e-12 * gamma.camax());
            let min = hermitian_eigenvalues(&gamma)[0];
            assert!(min >= -1e-12 * frobenius(&gamma), "{name}: {min}");
        }
    }

    #[test]
    fn partial_subspaces_of_worked_systems() {
        let cases = [
            ("v3", 9, vec![]),
            ("cascade3", 8, vec![9]),
            ("lambda3", 8, vec![5]),
            ("cascade4", 15, vec![16]),
        ];
        for (name, rank, excluded) in cases {
            let g = generator(name, &[]);
            let s = partial_subspace(&g, &times(), DEFAULT_REL_TOL).unwrap();
            assert_eq!(s.rank(), rank, "{name}");
            let got: Vec<usize> = s
                .excluded_coordinates(1e-8)
                .unwrap()
                .iter()
                .map(|k| k + 1)
                .collect();
            assert_eq!(got, excluded, "{name}");
        }
    }

    #[test]
    fn partial_subspace_needs_three_times() {
        let g = generator("cascade3", &[]);
        assert!(matches!(
            partial_subspace(&g, &[1.0, 2.0, 2.0, 0.0], DEFAULT_REL_TOL),
            Err(CommutativityError::TooFewTimes { need: 3, got: 2 })
        ));
    }

    #[test]
    fn more_times_never_increase_rank() {
        let g = generator("cascade3", &[]);
        let all = times();
        let mut prev = usize::MAX;
        for k in 3..=all.len() {
            let r = partial_subspace(&g, &all[..k], DEFAULT_REL_TOL)
                .unwrap()
                .rank();
            assert!(r <= prev);
            prev = r;
        }
    }

    #[test]
    fn admissibility_of_initial_states() {
        let g = generator("cascade3", &[]);
        let s = partial_subspace(&g, &times(), DEFAULT_REL_TOL).unwrap();
        assert!(admissible(&state::diagonal(&[0.3, 0.7, 0.0]), &s, 1e-9).unwrap());
        assert!(!admissible(&state::pure(3, 3), &s, 1e-9).unwrap());
        assert!(admissible(&state::phase_pair(3, 1, 2, 0.4), &s, 1e-9).unwrap());

        let g = generator("lambda3", &[]);
        let s = partial_subspace(&g, &times(), DEFAULT_REL_TOL).unwrap();
        assert!(admissible(&state::phase_pair(3, 1, 3, 1.2), &s, 1e-9).unwrap());

        let bad = diag_real(&[0.5, 0.7, 0.0]);
        assert!(matches!(
            admissible(&bad, &s, 1e-9),
            Err(CommutativityError::NotADensityMatrix(DensityError::Trace(
                _
            )))
        ));
        let mut off = matrix_unit(3, 0, 0);
        off[(0, 1)] = c(0.2, 0.0);
        assert!(admissible(&off, &s, 1e-9).is_err());
    }

    #[test]
    fn classify_reports() {
        let r = classify(&generator("v3", &[]), &times(), DEFAULT_REL_TOL).unwrap();
        assert!(r.functional && r.integral && r.partial_rank == 9 && r.verified);
        assert_eq!(r.characterization(), "full");
        assert!(r.to_string().contains("M: full (dim 9)"));

        let r = classify(&generator("cascade3", &[]), &times(), DEFAULT_REL_TOL).unwrap();
        assert!(!r.functional && !r.integral);
        assert_eq!(r.partial_rank, 8);
        assert_eq!(r.vanishing_entries(), Some(vec![(3, 3)]));
        assert!(r.verified, "residual {}", r.residual_max);
        assert!(r
            .to_string()
            .contains("M: dim 8; admissible states satisfy ρ_33 = 0"));

        let r = classify(&generator("lambda3", &[]), &times(), DEFAULT_REL_TOL).unwrap();
        assert_eq!(
            (r.functional, r.integral, r.partial_rank),
            (false, false, 8)
        );
        assert_eq!(r.excluded_coordinates(), Some(vec![5]));
        assert!(r.verified);
    }

    #[test]
    fn report_invariant_chain() {
        for name in ["v3", "cascade3", "lambda3", "cascade4"] {
            let r = classify(&generator(name, &[]), &times(), DEFAULT_REL_TOL).unwrap();
            if r.functional {
                assert!(r.integral, "{name}");
            }
            if r.integral {
                assert_eq!(r.partial_rank, r.subspace.ambient(), "{name}");
            }
        }
    }
}

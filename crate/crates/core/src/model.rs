//! Lindblad models with constant jump operators and time-dependent rates,
//! and their vectorized generator
//!
//! ```text
//! L(t) = i(Hᵀ⊗1 − 1⊗H) + Σ_k γ_k(t) (V̄_k⊗V_k − ½ 1⊗V_k†V_k − ½ V_kᵀV̄_k⊗1)
//! ```
//!
//! kept in decomposed form so that B(t) = ∫₀ᵗ L follows from scalar
//! antiderivatives of the rates.

use std::collections::BTreeMap;

use num_complex::Complex64;
use thiserror::Error;

use crate::expr::{antiderivative, parse_rate_expr, Antiderivative, ExprError, RateExpr};
use crate::linalg::{self, diag_real, kron, matrix_unit, CMatrix};

/// Tolerance of the Hermiticity check on Hamiltonians.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: [&str; 4] = ["v3", "cascade3", "lambda3", "cascade4"];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("unknown model `{0}` (expected one of v3, cascade3, lambda3, cascade4)")]
    UnknownModel(String),
    #[error("unknown parameter `{param}` for model `{model}`")]
    UnknownParameter { model: String, param: String },
    #[error("parameter `{0}` must be a constant")]
    NonConstantParameter(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("level {level} out of range 1..={dim}")]
    LevelOutOfRange { level: usize, dim: usize },
    #[error("Hamiltonian is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("rate of jump {jump} is negative at t = {t}")]
    NegativeRate { jump: usize, t: f64 },
    #[error("non-finite generator at t = {0}")]
    NonFinite(f64),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// One dissipation channel: a constant jump operator and its rate γ(t).
#[derive(Debug, Clone, PartialEq)]
pub struct Jump {
    pub operator: CMatrix,
    pub rate: RateExpr,
    /// `(from, to)` levels, 1-based, when the operator is |to⟩⟨from|.
    pub transition: Option<(usize, usize)>,
}

impl Jump {
    /// E_{to,from} = |to⟩⟨from|, levels 1-based.
    pub fn transition(
        d: usize,
        from: usize,
        to: usize,
        rate: RateExpr,
    ) -> Result<Self, ModelError> {
        for level in [from, to] {
            if level == 0 || level > d {
                return Err(ModelError::LevelOutOfRange { level, dim: d });
            }
        }
        Ok(Jump {
            operator: matrix_unit(d, to - 1, from - 1),
            rate,
            transition: Some((from, to)),
        })
    }

    pub fn matrix(operator: CMatrix, rate: RateExpr) -> Self {
        Jump {
            operator,
            rate,
            transition: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LindbladModel {
    hamiltonian: CMatrix,
    jumps: Vec<Jump>,
    params: BTreeMap<String, f64>,
}

impl LindbladModel {
    pub fn new(hamiltonian: CMatrix, jumps: Vec<Jump>) -> Result<Self, ModelError> {
        let d = hamiltonian.nrows();
        if !hamiltonian.is_square() || d < 2 {
            return Err(ModelError::DimensionMismatch(format!(
                "Hamiltonian must be square with at least 2 levels, got {:?}",
                hamiltonian.shape()
            )));
        }
        if !linalg::is_finite(&hamiltonian) {
            return Err(ModelError::NonFinite(0.0));
        }
        let deviation = (&hamiltonian - hamiltonian.adjoint()).camax();
        if deviation > HERMITIAN_TOL {
            return Err(ModelError::NotHermitian(deviation));
        }
        for (k, jump) in jumps.iter().enumerate() {
            if jump.operator.shape() != (d, d) {
                return Err(ModelError::DimensionMismatch(format!(
                    "jump {k} has shape {:?}, expected {d}x{d}",
                    jump.operator.shape()
                )));
            }
        }
        Ok(LindbladModel {
            hamiltonian,
            jumps,
            params: BTreeMap::new(),
        })
    }

    pub fn with_params(mut self, params: BTreeMap<String, f64>) -> Self {
        self.params = params;
        self
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.nrows()
    }

    pub fn hamiltonian(&self) -> &CMatrix {
        &self.hamiltonian
    }

    pub fn jumps(&self) -> &[Jump] {
        &self.jumps
    }

    /// Numeric parameters the rates were built from (informational).
    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    /// Samples every rate on `[0, t_max]` and rejects negative values.
    pub fn check_nonnegative_rates(&self, t_max: f64, samples: usize) -> Result<(), ModelError> {
        for (k, jump) in self.jumps.iter().enumerate() {
            for i in 0..=samples {
                let t = t_max * i as f64 / samples as f64;
                if jump.rate.eval(t)? < -1e-12 {
                    return Err(ModelError::NegativeRate { jump: k, t });
                }
            }
        }
        Ok(())
    }
}

/// i(Hᵀ⊗1 − 1⊗H), the vectorized −i[H, ·].
pub fn drift_matrix(h: &CMatrix) -> CMatrix {
    let d = h.nrows();
    let ident = CMatrix::identity(d, d);
    (kron(&h.transpose(), &ident) - kron(&ident, h)) * Complex64::i()
}

/// V̄⊗V − ½ 1⊗V†V − ½ VᵀV̄⊗1, the vectorized V·V† − ½{V†V, ·}.
pub fn dissipator_matrix(v: &CMatrix) -> CMatrix {
    let d = v.nrows();
    let ident = CMatrix::identity(d, d);
    let vdv = v.adjoint() * v;
    kron(&v.conjugate(), v)
        - kron(&ident, &vdv).scale(0.5)
        - kron(&vdv.transpose(), &ident).scale(0.5)
}

#[derive(Debug, Clone)]
pub struct GeneratorPart {
    pub matrix: CMatrix,
    pub rate: RateExpr,
    pub integral: Antiderivative,
}

/// L(t) = L_H + Σ_k γ_k(t) L^(k) together with B(t) = t·L_H + Σ_k Γ_k(t) L^(k).
#[derive(Debug, Clone)]
pub struct GeneratorDecomposition {
    dim: usize,
    drift: CMatrix,
    parts: Vec<GeneratorPart>,
}

impl GeneratorDecomposition {
    pub fn from_parts(dim: usize, drift: CMatrix, parts: Vec<GeneratorPart>) -> Self {
        GeneratorDecomposition { dim, drift, parts }
    }

    /// Level count d.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Vectorized dimension μ = d².
    pub fn mu(&self) -> usize {
        self.dim * self.dim
    }

    pub fn drift(&self) -> &CMatrix {
        &self.drift
    }

    pub fn parts(&self) -> &[GeneratorPart] {
        &self.parts
    }

    fn combine(&self, drift_weight: f64, weights: &[f64], t: f64) -> Result<CMatrix, ModelError> {
        let mut out = self.drift.scale(drift_weight);
        for (part, w) in self.parts.iter().zip(weights) {
            out += part.matrix.scale(*w);
        }
        if linalg::is_finite(&out) {
            Ok(out)
        } else {
            Err(ModelError::NonFinite(t))
        }
    }

    pub fn rates_at(&self, t: f64) -> Result<Vec<f64>, ModelError> {
        Ok(self
            .parts
            .iter()
            .map(|p| p.rate.eval(t))
            .collect::<Result<_, _>>()?)
    }

    pub fn integrated_rates_at(&self, t: f64) -> Result<Vec<f64>, ModelError> {
        Ok(self
            .parts
            .iter()
            .map(|p| p.integral.value(t))
            .collect::<Result<_, _>>()?)
    }

    /// L(t).
    pub fn generator_at(&self, t: f64) -> Result<CMatrix, ModelError> {
        let rates = self.rates_at(t)?;
        self.combine(1.0, &rates, t)
    }

    /// B(t) = ∫₀ᵗ L(τ) dτ, from the scalar antiderivatives.
    pub fn integral_at(&self, t: f64) -> Result<CMatrix, ModelError> {
        let integrals = self.integrated_rates_at(t)?;
        self.combine(t, &integrals, t)
    }
}

pub fn assemble(model: &LindbladModel) -> Result<GeneratorDecomposition, ModelError> {
    let parts = model
        .jumps
        .iter()
        .map(|jump| GeneratorPart {
            matrix: dissipator_matrix(&jump.operator),
            rate: jump.rate.clone(),
            integral: antiderivative(&jump.rate),
        })
        .collect();
    Ok(GeneratorDecomposition {
        dim: model.dim(),
        drift: drift_matrix(&model.hamiltonian),
        parts,
    })
}

struct BuiltinSpec {
    numeric: &'static [(&'static str, f64)],
    rates: &'static [(&'static str, &'static str)],
}

fn builtin_spec(name: &str) -> Option<BuiltinSpec> {
    Some(match name {
        "v3" => BuiltinSpec {
            numeric: &[("w", 1.0), ("e1", 1.0), ("e3", 1.0)],
            rates: &[],
        },
        "cascade3" => BuiltinSpec {
            numeric: &[("w", 1.0), ("e", 1.0)],
            rates: &[],
        },
        "lambda3" => BuiltinSpec {
            numeric: &[("w", 1.0), ("e1", 1.0), ("e3", 1.0)],
            rates: &[("f1", "sin(w*t)^2"), ("f2", "cos(w*t)^2")],
        },
        "cascade4" => BuiltinSpec {
            numeric: &[("w", 1.0), ("e1", 1.0), ("e2", 1.0)],
            rates: &[],
        },
        _ => return None,
    })
}

/// One of the four worked systems, with every parameter defaulting to 1:
///
/// * `v3`: H = diag(e1, 0, e3); |2⟩⟨1| at sin²(wt), |2⟩⟨3| at cos²(wt).
/// * `cascade3`: H = diag(−e, 0, e); |2⟩⟨3| at sin²(wt), |1⟩⟨2| at cos²(wt).
/// * `lambda3`: H = diag(−e1, 0, −e3); |1⟩⟨2| at f1(t), |3⟩⟨2| at f2(t).
///   f1 and f2 are rate expressions (defaults sin²(wt), cos²(wt)).
/// * `cascade4`: H = diag(−e2, −e1, e1, e2); |3⟩⟨4| at exp(−wt), then
///   |2⟩⟨3| and |1⟩⟨2| both at sin²(3wt).
///
/// Parameter values are rate-expression text; numeric ones must fold to a
/// constant.
pub fn builtin(name: &str, params: &BTreeMap<String, String>) -> Result<LindbladModel, ModelError> {
    let spec = builtin_spec(name).ok_or_else(|| ModelError::UnknownModel(name.to_string()))?;
    for key in params.keys() {
        let known =
            spec.numeric.iter().any(|(n, _)| n == key) || spec.rates.iter().any(|(n, _)| n == key);
        if !known {
            return Err(ModelError::UnknownParameter {
                model: name.to_string(),
                param: key.clone(),
            });
        }
    }

    let mut numeric = BTreeMap::new();
    for (key, default) in spec.numeric {
        let value = match params.get(*key) {
            Some(text) => parse_rate_expr(text, &Default::default())?
                .as_constant()
                .ok_or_else(|| ModelError::NonConstantParameter(key.to_string()))?,
            None => *default,
        };
        numeric.insert(key.to_string(), value);
    }
    let bound: std::collections::HashMap<String, f64> =
        numeric.iter().map(|(k, v)| (k.clone(), *v)).collect();
    let rate = |text: &str| parse_rate_expr(text, &bound);
    let p = |key: &str| numeric[key];

    let model = match name {
        "v3" => LindbladModel::new(
            diag_real(&[p("e1"), 0.0, p("e3")]),
            vec![
                Jump::transition(3, 1, 2, rate("sin(w*t)^2")?)?,
                Jump::transition(3, 3, 2, rate("cos(w*t)^2")?)?,
            ],
        )?,
        "cascade3" => LindbladModel::new(
            diag_real(&[-p("e"), 0.0, p("e")]),
            vec![
                Jump::transition(3, 3, 2, rate("sin(w*t)^2")?)?,
                Jump::transition(3, 2, 1, rate("cos(w*t)^2")?)?,
            ],
        )?,
        "lambda3" => {
            let text = |key: &str| {
                params
                    .get(key)
                    .map(String::as_str)
                    .or_else(|| spec.rates.iter().find(|(n, _)| *n == key).map(|(_, d)| *d))
                    .expect("rate parameter has a default")
            };
            LindbladModel::new(
                diag_real(&[-p("e1"), 0.0, -p("e3")]),
                vec![
                    Jump::transition(3, 2, 1, rate(text("f1"))?)?,
                    Jump::transition(3, 2, 3, rate(text("f2"))?)?,
                ],
            )?
        }
        "cascade4" => LindbladModel::new(
            diag_real(&[-p("e2"), -p("e1"), p("e1"), p("e2")]),
            vec![
                Jump::transition(4, 4, 3, rate("exp(-w*t)")?)?,
                Jump::transition(4, 3, 2, rate("sin(3*w*t)^2")?)?,
                Jump::transition(4, 2, 1, rate("sin(3*w*t)^2")?)?,
            ],
        )?,
        _ => unreachable!("checked by builtin_spec"),
    };
    model.check_nonnegative_rates(20.0, 2000)?;
    Ok(model.with_params(numeric))
}

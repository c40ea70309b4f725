//! JSON model files.
//!
//! ```json
//! {
//!   "dimension": 3,
//!   "hamiltonian": {"diagonal": [-1.0, 0.0, 1.0]},
//!   "jumps": [
//!     {"from": 3, "to": 2, "rate": "sin(w*t)^2"},
//!     {"matrix": [[[0,0],[1,0],[0,0]], ...], "rate": "0.5"}
//!   ],
//!   "params": {"w": 1.0},
//!   "initial_state": {"diagonal": [0.5, 0.5, 0.0]}
//! }
//! ```
//!
//! Complex entries are `[re, im]` pairs, rows listed top to bottom. Levels
//! are 1-based.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{parse_rate_expr, ExprError};
use crate::linalg::{diag_real, CMatrix};
use crate::model::{Jump, LindbladModel, ModelError};

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("invalid model file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{what} has {got} entries, expected {expected}")]
    Size {
        what: String,
        got: usize,
        expected: usize,
    },
    #[error("rate of jump {jump}: {source}")]
    Rate { jump: usize, source: ExprError },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixSpec {
    Diagonal { diagonal: Vec<f64> },
    Matrix { matrix: Vec<Vec<[f64; 2]>> },
}

impl MatrixSpec {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let is_real_diagonal = m.iter().enumerate().all(|(k, z)| {
            let (i, j) = (k % m.nrows(), k / m.nrows());
            z.im == 0.0 && (i == j || z.re == 0.0)
        });
        if is_real_diagonal && m.is_square() {
            MatrixSpec::Diagonal {
                diagonal: m.diagonal().iter().map(|z| z.re).collect(),
            }
        } else {
            MatrixSpec::Matrix {
                matrix: m
                    .row_iter()
                    .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
                    .collect(),
            }
        }
    }

    pub fn to_matrix(&self, d: usize, what: &str) -> Result<CMatrix, ModelFileError> {
        let size = |got: usize| ModelFileError::Size {
            what: what.to_string(),
            got,
            expected: d,
        };
        match self {
            MatrixSpec::Diagonal { diagonal } => {
                if diagonal.len() != d {
                    return Err(size(diagonal.len()));
                }
                Ok(diag_real(diagonal))
            }
            MatrixSpec::Matrix { matrix } => {
                if matrix.len() != d {
                    return Err(size(matrix.len()));
                }
                if let Some(row) = matrix.iter().find(|r| r.len() != d) {
                    return Err(ModelFileError::Size {
                        what: format!("a row of {what}"),
                        got: row.len(),
                        expected: d,
                    });
                }
                Ok(CMatrix::from_fn(d, d, |i, j| {
                    Complex64::new(matrix[i][j][0], matrix[i][j][1])
                }))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RateSpec {
    Number(f64),
    Text(String),
}

impl RateSpec {
    fn text(&self) -> String {
        match self {
            RateSpec::Number(x) => format!("{x:?}"),
            RateSpec::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JumpSpec {
    Transition {
        from: usize,
        to: usize,
        rate: RateSpec,
    },
    Matrix {
        matrix: Vec<Vec<[f64; 2]>>,
        rate: RateSpec,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub dimension: usize,
    pub hamiltonian: MatrixSpec,
    #[serde(default)]
    pub jumps: Vec<JumpSpec>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_state: Option<MatrixSpec>,
}

impl ModelFile {
    pub fn from_json(text: &str) -> Result<Self, ModelFileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model files always serialize");
        s.push('\n');
        s
    }

    /// Exports a model; rates are written with parameters already
    /// substituted, `params` is kept for reference.
    pub fn from_model(model: &LindbladModel) -> Self {
        let d = model.dim();
        let jumps = model
            .jumps()
            .iter()
            .map(|jump| {
                let rate = RateSpec::Text(jump.rate.to_string());
                match jump.transition {
                    Some((from, to)) => JumpSpec::Transition { from, to, rate },
                    None => JumpSpec::Matrix {
                        matrix: match MatrixSpec::from_matrix(&jump.operator) {
                            MatrixSpec::Matrix { matrix } => matrix,
                            MatrixSpec::Diagonal { diagonal } => (0..d)
                                .map(|i| {
                                    (0..d)
                                        .map(|j| [if i == j { diagonal[i] } else { 0.0 }, 0.0])
                                        .collect()
                                })
                                .collect(),
                        },
                        rate,
                    },
                }
            })
            .collect();
        ModelFile {
            dimension: d,
            hamiltonian: MatrixSpec::from_matrix(model.hamiltonian()),
            jumps,
            params: model.params().clone(),
            initial_state: None,
        }
    }

    /// Builds the model, binding rate parameters from `params` overlaid
    /// with `overrides`. Rates are checked for negativity on [0, 20].
    pub fn to_model(
        &self,
        overrides: &BTreeMap<String, f64>,
    ) -> Result<LindbladModel, ModelFileError> {
        let d = self.dimension;
        let mut params = self.params.clone();
        params.extend(overrides.iter().map(|(k, v)| (k.clone(), *v)));
        let bound: HashMap<String, f64> = params.iter().map(|(k, v)| (k.clone(), *v)).collect();
        let h = self.hamiltonian.to_matrix(d, "hamiltonian")?;
        let mut jumps = Vec::with_capacity(self.jumps.len());
        for (k, spec) in self.jumps.iter().enumerate() {
            let (JumpSpec::Transition { rate, .. } | JumpSpec::Matrix { rate, .. }) = spec;
            let expr = parse_rate_expr(&rate.text(), &bound)
                .map_err(|source| ModelFileError::Rate { jump: k, source })?;
            jumps.push(match spec {
                JumpSpec::Transition { from, to, .. } => Jump::transition(d, *from, *to, expr)?,
                JumpSpec::Matrix { matrix, .. } => {
                    let op = MatrixSpec::Matrix {
                        matrix: matrix.clone(),
                    };
                    Jump::matrix(op.to_matrix(d, &format!("jump {k}"))?, expr)
                }
            });
        }
        let model = LindbladModel::new(h, jumps)?;
        model.check_nonnegative_rates(20.0, 2000)?;
        Ok(model.with_params(params))
    }

    pub fn initial_state(&self) -> Result<Option<CMatrix>, ModelFileError> {
        self.initial_state
            .as_ref()
            .map(|s| s.to_matrix(self.dimension, "initial_state"))
            .transpose()
    }
}

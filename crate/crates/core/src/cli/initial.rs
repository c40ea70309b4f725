//! `--rho0` specifications.

use std::collections::HashMap;

use crate::cli::modelfile::MatrixSpec;
use crate::expr::parse_rate_expr;
use crate::linalg::CMatrix;
use crate::state;

pub const RHO0_FORMS: &str =
    "diag:a,b,..  pure:k  mixed  phase:i,j,phi  phase3:phi12,phi13  file:path";

fn number(text: &str) -> Result<f64, String> {
    parse_rate_expr(text, &HashMap::new())
        .ok()
        .and_then(|e| e.as_constant())
        .ok_or_else(|| format!("`{text}` is not a number"))
}

fn numbers(text: &str) -> Result<Vec<f64>, String> {
    text.split(',').map(|s| number(s.trim())).collect()
}

fn level(text: &str, d: usize) -> Result<usize, String> {
    match text.trim().parse::<usize>() {
        Ok(k) if (1..=d).contains(&k) => Ok(k),
        _ => Err(format!("level `{text}` is not in 1..={d}")),
    }
}

/// Builds a d×d initial state. The result is not validated as a density
/// matrix here.
pub fn parse_rho0(spec: &str, d: usize) -> Result<CMatrix, String> {
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    match kind {
        "diag" => {
            let p = numbers(rest)?;
            if p.len() != d {
                return Err(format!("diag: needs {d} entries, got {}", p.len()));
            }
            Ok(state::diagonal(&p))
        }
        "pure" => Ok(state::pure(d, level(rest, d)?)),
        "mixed" => Ok(state::maximally_mixed(d)),
        "phase" => {
            let parts: Vec<&str> = rest.split(',').collect();
            let [i, j, phi] = parts[..] else {
                return Err("phase: expects i,j,phi".into());
            };
            let (i, j) = (level(i, d)?, level(j, d)?);
            if i == j {
                return Err("phase: needs two different levels".into());
            }
            Ok(state::phase_pair(d, i, j, number(phi.trim())?))
        }
        "phase3" => {
            let phases = numbers(rest)?;
            match (d, phases.as_slice()) {
                (4, &[p12, p13]) => Ok(state::phase_triple(p12, p13)),
                (4, _) => Err("phase3: expects phi12,phi13".into()),
                _ => Err(format!("phase3: needs a 4-level model, this one has {d}")),
            }
        }
        "file" => {
            let text = std::fs::read_to_string(rest).map_err(|e| format!("{rest}: {e}"))?;
            let spec: MatrixSpec =
                serde_json::from_str(&text).map_err(|e| format!("{rest}: {e}"))?;
            spec.to_matrix(d, "initial state")
                .map_err(|e| e.to_string())
        }
        _ => Err(format!(
            "unknown initial state `{spec}`; forms: {RHO0_FORMS}"
        )),
    }
}

//! The `lindblad-pc` command line: `classify`, `solve` and `verify`.
//!
//! Exit codes: 0 success, 2 bad input, 3 numerical failure, 4 inadmissible
//! initial state, 5 verification failed.

pub mod csv;
pub mod initial;
pub mod modelfile;

use std::collections::{BTreeMap, HashMap};
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::commutativity::{
    self, classify, default_sample_times, entry_label, CommutativityError, CommutativityReport,
};
use crate::expr::parse_rate_expr;
use crate::linalg::{self, CMatrix, LinalgError, SubspaceBasis, DEFAULT_REL_TOL};
use crate::model::{
    assemble, builtin, GeneratorDecomposition, LindbladModel, ModelError, BUILTIN_NAMES,
};
use crate::observables::{ObservableError, ObservableSeries};
use crate::solver::{
    compare, fedorov_residual, ode_oracle, propagate_closed_form, uniform_grid, SolverError,
    ORACLE_TOL,
};
use crate::state::DensityError;
use modelfile::{ModelFile, ModelFileError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_INADMISSIBLE: i32 = 4;
pub const EXIT_VERIFY_FAILED: i32 = 5;

/// Tolerance for the density-matrix and membership tests on ρ₀.
pub const ADMISSIBLE_TOL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(
    name = "lindblad-pc",
    version,
    about = "Closed-form Lindblad dynamics under partial commutativity"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report functional, integral and partial commutativity.
    Classify(ClassifyArgs),
    /// Propagate an initial state in closed form and write a CSV trajectory.
    Solve(SolveArgs),
    /// Compare the closed form with the ODE oracle.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// JSON model file.
    #[arg(required_unless_present = "builtin", conflicts_with = "builtin")]
    pub model: Option<PathBuf>,
    /// Built-in model.
    #[arg(long, value_parser = BUILTIN_NAMES)]
    pub builtin: Option<String>,
    /// Parameters as name=value, comma separated or repeated.
    #[arg(long = "params", value_name = "NAME=VALUE")]
    pub params: Vec<String>,
    /// Also write the loaded model as a JSON model file.
    #[arg(long, value_name = "PATH")]
    pub emit_model: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Relative rank tolerance for the subspace computation.
    #[arg(long, default_value_t = DEFAULT_REL_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Initial state: diag:a,b,.. | pure:k | mixed | phase:i,j,phi |
    /// phase3:phi12,phi13 | file:path. Defaults to the model file's
    /// initial_state.
    #[arg(long)]
    pub rho0: Option<String>,
    #[arg(long, default_value_t = 20.0)]
    pub t_max: f64,
    /// Number of time steps; the grid has steps + 1 points.
    #[arg(long, default_value_t = 400)]
    pub steps: usize,
    /// Proceed even if the initial state is outside M.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub run: RunArgs,
    /// Coherences to include, as i,j pairs (repeat or separate with ';').
    #[arg(long, value_name = "I,J")]
    pub coherences: Vec<String>,
    /// Output CSV path (stdout if omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub run: RunArgs,
    /// Pass threshold for trace distance and Fedorov residual.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Local error tolerance of the ODE oracle.
    #[arg(long, default_value_t = ORACLE_TOL)]
    pub oracle_tol: f64,
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Numeric(String),
    Inadmissible(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Numeric(_) => EXIT_NUMERIC,
            CliError::Inadmissible(_) => EXIT_INADMISSIBLE,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Numeric(m) | CliError::Inadmissible(m) => m,
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::NonFinite(_) => CliError::Numeric(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<ModelFileError> for CliError {
    fn from(e: ModelFileError) -> Self {
        match e {
            ModelFileError::Model(m) => m.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<LinalgError> for CliError {
    fn from(e: LinalgError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<CommutativityError> for CliError {
    fn from(e: CommutativityError) -> Self {
        match e {
            CommutativityError::Model(m) => m.into(),
            CommutativityError::NotADensityMatrix(d) => {
                CliError::Inadmissible(format!("initial state is not a density matrix: {d}"))
            }
            other => CliError::Numeric(other.to_string()),
        }
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::Model(m) => m.into(),
            SolverError::InvalidGrid | SolverError::Shape { .. } => CliError::Input(e.to_string()),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

impl From<ObservableError> for CliError {
    fn from(e: ObservableError) -> Self {
        CliError::Input(e.to_string())
    }
}

/// Splits `a=1,b=sin(t)^2` at top-level commas.
fn split_params(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (k, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&text[start..k]);
                start = k + 1;
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out.into_iter()
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect()
}

pub fn parse_params(values: &[String]) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for value in values {
        for item in split_params(value) {
            let (key, val) = item
                .split_once('=')
                .ok_or_else(|| CliError::Input(format!("parameter `{item}` is not NAME=VALUE")))?;
            out.insert(key.trim().to_string(), val.trim().to_string());
        }
    }
    Ok(out)
}

pub struct LoadedModel {
    pub model: LindbladModel,
    pub initial: Option<CMatrix>,
}

pub fn load_model(args: &ModelArgs) -> Result<LoadedModel, CliError> {
    let params = parse_params(&args.params)?;
    let loaded = match (&args.builtin, &args.model) {
        (Some(name), _) => LoadedModel {
            model: builtin(name, &params)?,
            initial: None,
        },
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            let file = ModelFile::from_json(&text)?;
            let mut overrides = BTreeMap::new();
            for (key, value) in &params {
                let x = parse_rate_expr(value, &HashMap::new())
                    .ok()
                    .and_then(|e| e.as_constant())
                    .ok_or_else(|| {
                        CliError::Input(format!("parameter `{key}` must be a number"))
                    })?;
                overrides.insert(key.clone(), x);
            }
            LoadedModel {
                model: file.to_model(&overrides)?,
                initial: file.initial_state()?,
            }
        }
        (None, None) => return Err(CliError::Input("give a model file or --builtin".into())),
    };
    if let Some(path) = &args.emit_model {
        let mut file = ModelFile::from_model(&loaded.model);
        file.initial_state = loaded
            .initial
            .as_ref()
            .map(modelfile::MatrixSpec::from_matrix);
        std::fs::write(path, file.to_json())
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    }
    Ok(loaded)
}

/// 1/w when the model has a positive frequency parameter `w`.
pub fn time_scale(model: &LindbladModel) -> f64 {
    match model.params().get("w") {
        Some(w) if w.is_finite() && *w > 0.0 => 1.0 / w,
        _ => 1.0,
    }
}

#[derive(Serialize)]
struct ReportJson<'a> {
    functional: bool,
    integral: bool,
    partial_rank: usize,
    ambient_dim: usize,
    excluded_coordinates: Option<Vec<usize>>,
    characterization: String,
    power_cap: usize,
    residual_max: f64,
    verified: bool,
    sample_times: &'a [f64],
}

fn report_json(r: &CommutativityReport) -> String {
    let json = ReportJson {
        functional: r.functional,
        integral: r.integral,
        partial_rank: r.partial_rank,
        ambient_dim: r.subspace.ambient(),
        excluded_coordinates: r.excluded_coordinates(),
        characterization: r.characterization(),
        power_cap: r.power_cap,
        residual_max: r.residual_max,
        verified: r.verified,
        sample_times: &r.sample_times,
    };
    serde_json::to_string_pretty(&json).expect("report serializes")
}

fn cmd_classify(
    args: &ClassifyArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let loaded = load_model(&args.model)?;
    let g = assemble(&loaded.model)?;
    let report = classify(
        &g,
        &default_sample_times(time_scale(&loaded.model)),
        args.tol,
    )?;
    if !report.verified {
        let _ = writeln!(
            err,
            "warning: subspace failed verification on the dense grid"
        );
    }
    let text = if args.json {
        report_json(&report)
    } else {
        report.to_string()
    };
    writeln!(out, "{text}").map_err(|e| CliError::Input(e.to_string()))
}

/// Why `rho0` lies outside `s`: the offending entries when M is cut out
/// by vanishing entries, otherwise the distance.
fn inadmissibility_reason(rho0: &CMatrix, s: &SubspaceBasis, d: usize) -> String {
    let distance = s.distance(&linalg::vec(rho0));
    if let Some(coords) = s.excluded_coordinates(1e-8) {
        let offending: Vec<String> = coords
            .iter()
            .map(|k| (k % d, k / d))
            .filter(|(i, j)| rho0[(*i, *j)].norm() > ADMISSIBLE_TOL)
            .map(|(i, j)| {
                let label = entry_label(i + 1, j + 1);
                format!("ρ_{label} = {:.6} ≠ 0", rho0[(i, j)].norm())
            })
            .collect();
        if !offending.is_empty() {
            return offending.join(", ");
        }
    }
    format!("distance from M is {distance:.3e}")
}

struct Prepared {
    g: GeneratorDecomposition,
    rho0: CMatrix,
    grid: Vec<f64>,
}

fn prepare(model: &ModelArgs, run: &RunArgs, err: &mut dyn Write) -> Result<Prepared, CliError> {
    if !(run.t_max.is_finite() && run.t_max > 0.0) || run.steps == 0 {
        return Err(CliError::Input(
            "--t-max must be positive and --steps at least 1".into(),
        ));
    }
    let loaded = load_model(model)?;
    let d = loaded.model.dim();
    let rho0 = match (&run.rho0, loaded.initial) {
        (Some(spec), _) => initial::parse_rho0(spec, d).map_err(CliError::Input)?,
        (None, Some(rho)) => rho,
        (None, None) => return Err(CliError::Input("no initial state: pass --rho0".into())),
    };
    let g = assemble(&loaded.model)?;
    let times = default_sample_times(time_scale(&loaded.model));
    let s = commutativity::partial_subspace(&g, &times, DEFAULT_REL_TOL)?;
    let ok = match commutativity::admissible(&rho0, &s, ADMISSIBLE_TOL) {
        Ok(ok) => ok,
        Err(CommutativityError::NotADensityMatrix(e @ DensityError::Shape { .. })) => {
            return Err(CliError::Input(e.to_string()))
        }
        Err(e) => return Err(e.into()),
    };
    if !ok {
        let reason = inadmissibility_reason(&rho0, &s, d);
        if !run.force {
            return Err(CliError::Inadmissible(format!(
                "initial state is outside the partial-commutativity subspace: {reason} (use --force to propagate anyway)"
            )));
        }
        let _ = writeln!(
            err,
            "warning: initial state is outside the partial-commutativity subspace ({reason}); the closed form is not a solution"
        );
    }
    Ok(Prepared {
        g,
        rho0,
        grid: uniform_grid(run.t_max, run.steps),
    })
}

fn parse_pairs(values: &[String]) -> Result<Vec<(usize, usize)>, CliError> {
    let mut out = Vec::new();
    for value in values {
        for item in value.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let pair = item
                .split_once(',')
                .and_then(|(i, j)| Some((i.trim().parse().ok()?, j.trim().parse().ok()?)));
            out.push(
                pair.ok_or_else(|| CliError::Input(format!("coherence `{item}` is not i,j")))?,
            );
        }
    }
    Ok(out)
}

fn cmd_solve(args: &SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let pairs = parse_pairs(&args.coherences)?;
    let p = prepare(&args.model, &args.run, err)?;
    let tr = propagate_closed_form(&p.g, &p.rho0, &p.grid)?;
    let series = ObservableSeries::from_trajectory(&tr, &pairs)?;
    let invalid = series.invalid_rows();
    if !invalid.is_empty() {
        let _ = writeln!(
            err,
            "warning: {} rows are not density matrices; purity and entropy written as NaN",
            invalid.len()
        );
    }
    let io = |e: std::io::Error| CliError::Input(e.to_string());
    match &args.out {
        Some(path) => {
            let mut buf = Vec::new();
            csv::write_csv(&series, &mut buf).map_err(io)?;
            std::fs::write(path, buf)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
        }
        None => csv::write_csv(&series, out).map_err(io),
    }
}

fn cmd_verify(
    args: &VerifyArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<bool, CliError> {
    let p = prepare(&args.model, &args.run, err)?;
    let closed = propagate_closed_form(&p.g, &p.rho0, &p.grid)?;
    let oracle = ode_oracle(&p.g, &p.rho0, &p.grid, args.oracle_tol)?;
    let distance = compare(&closed, &oracle)?;
    let residual = fedorov_residual(&p.g, &linalg::vec(&p.rho0), &p.grid)?;
    let pass = distance <= args.tol && residual <= args.tol;
    let report = format!(
        "max trace distance: {distance:.3e}\nfedorov residual: {residual:.3e}\nresult: {} (tol {:.1e})",
        if pass { "pass" } else { "FAIL" },
        args.tol
    );
    writeln!(out, "{report}").map_err(|e| CliError::Input(e.to_string()))?;
    Ok(pass)
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
                return EXIT_INPUT;
            }
            let _ = write!(out, "{text}");
            return EXIT_OK;
        }
    };
    let result = match &cli.command {
        Command::Classify(a) => cmd_classify(a, out, err).map(|_| EXIT_OK),
        Command::Solve(a) => cmd_solve(a, out, err).map(|_| EXIT_OK),
        Command::Verify(a) => {
            cmd_verify(a, out, err).map(|pass| if pass { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("lindblad-pc").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn params_split_at_top_level_commas() {
        let p = parse_params(&["f1=sin(t)^2,f2=exp(-t)".into(), "w = 2".into()]).unwrap();
        assert_eq!(p["f1"], "sin(t)^2");
        assert_eq!(p["f2"], "exp(-t)");
        assert_eq!(p["w"], "2");
        assert!(parse_params(&["w".into()]).is_err());
    }

    #[test]
    fn coherence_pairs() {
        assert_eq!(
            parse_pairs(&["1,3;2,3".into(), "1,2".into()]).unwrap(),
            vec![(1, 3), (2, 3), (1, 2)]
        );
        assert!(parse_pairs(&["13".into()]).is_err());
    }

    #[test]
    fn classify_text() {
        let (code, out, _) = call(&["classify", "--builtin", "v3"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("functional: yes"));
        assert!(out.contains("integral: yes"));
        assert!(out.contains("M: full (dim 9)"));

        let (_, out, _) = call(&["classify", "--builtin", "cascade4"]);
        assert!(
            out.contains("M: dim 15; admissible states satisfy ρ_44 = 0"),
            "{out}"
        );
    }

    #[test]
    fn classify_json() {
        let (code, out, _) = call(&["classify", "--builtin", "lambda3", "--json"]);
        assert_eq!(code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["partial_rank"], 8);
        assert_eq!(v["excluded_coordinates"], serde_json::json!([5]));
        assert_eq!(v["functional"], false);
    }

    #[test]
    fn input_errors_exit_2() {
        assert_eq!(call(&["classify"]).0, EXIT_INPUT);
        assert_eq!(call(&["classify", "--builtin", "v4"]).0, EXIT_INPUT);
        assert_eq!(
            call(&["classify", "--builtin", "v3", "--params", "q=1"]).0,
            EXIT_INPUT
        );
        assert_eq!(
            call(&["classify", "--builtin", "v3", "--params", "w=t"]).0,
            EXIT_INPUT
        );
        assert_eq!(call(&["classify", "/nonexistent/model.json"]).0, EXIT_INPUT);
        assert_eq!(
            call(&["solve", "--builtin", "v3", "--rho0", "diag:1,0"]).0,
            EXIT_INPUT
        );
        assert_eq!(call(&["solve", "--builtin", "v3"]).0, EXIT_INPUT);
        assert_eq!(call(&["bogus"]).0, EXIT_INPUT);
    }

    #[test]
    fn help_exits_0() {
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("classify"));
    }

    #[test]
    fn inadmissible_solve_exits_4() {
        let (code, _, err) = call(&["solve", "--builtin", "cascade3", "--rho0", "diag:0,0,1"]);
        assert_eq!(code, EXIT_INADMISSIBLE);
        assert!(err.contains("ρ_33"), "{err}");
        let (code, _, err) = call(&["solve", "--builtin", "cascade3", "--rho0", "diag:0.5,0.6,0"]);
        assert_eq!(code, EXIT_INADMISSIBLE);
        assert!(err.contains("not a density matrix"));
    }

    #[test]
    fn forced_solve_warns() {
        let (code, out, err) = call(&[
            "solve",
            "--builtin",
            "cascade3",
            "--rho0",
            "pure:3",
            "--force",
            "--steps",
            "10",
            "--t-max",
            "2",
        ]);
        assert_eq!(code, EXIT_OK);
        assert!(err.contains("warning"));
        assert_eq!(out.lines().count(), 12);
    }

    #[test]
    fn solve_writes_csv() {
        let (code, out, _) = call(&[
            "solve",
            "--builtin",
            "cascade3",
            "--rho0",
            "diag:0,1,0",
            "--steps",
            "20",
            "--coherences",
            "1,2",
        ]);
        assert_eq!(code, EXIT_OK);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "t,p_1,p_2,p_3,purity,entropy,re_12,im_12");
        assert_eq!(lines.len(), 22);
        let last: Vec<f64> = lines[21].split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(last[0], 20.0);
        let xi = (-(40.0 + 40f64.sin()) / 4.0).exp();
        assert!((last[2] - xi).abs() < 1e-10);
    }

    #[test]
    fn verify_passes_and_fails() {
        let (code, out, _) = call(&[
            "verify",
            "--builtin",
            "v3",
            "--rho0",
            "diag:0.5,0,0.5",
            "--steps",
            "100",
        ]);
        assert_eq!(code, EXIT_OK, "{out}");
        assert!(out.contains("result: pass"));
        let (code, out, _) = call(&[
            "verify",
            "--builtin",
            "cascade3",
            "--rho0",
            "diag:0,0,1",
            "--force",
            "--t-max",
            "5",
            "--steps",
            "50",
        ]);
        assert_eq!(code, EXIT_VERIFY_FAILED, "{out}");
    }
}

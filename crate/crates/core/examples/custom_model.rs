//! A model built in code: a ladder whose top transition is pulsed
//! and whose lower transition runs at a constant rate. The
//! example classifies it, round-trips it through a JSON model file and
//! writes a CSV trajectory.
//!
//!     cargo run --example custom_model -- out.csv

use std::collections::BTreeMap;

use lindblad_pc::cli::csv::write_csv;
use lindblad_pc::cli::modelfile::ModelFile;
use lindblad_pc::commutativity::{classify, default_sample_times};
use lindblad_pc::expr::RateExpr;
use lindblad_pc::linalg::{diag_real, DEFAULT_REL_TOL};
use lindblad_pc::model::{assemble, Jump, LindbladModel};
use lindblad_pc::observables::ObservableSeries;
use lindblad_pc::solver::{propagate_closed_form, uniform_grid};
use lindblad_pc::state;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let pulse = RateExpr::exp(RateExpr::t().neg()).mul(RateExpr::sin(RateExpr::t()).powi(2));
    let model = LindbladModel::new(
        diag_real(&[0.0, 0.4, 1.3]),
        vec![
            Jump::transition(3, 3, 2, pulse)?,
            Jump::transition(3, 2, 1, RateExpr::num(0.2))?,
        ],
    )?;

    let json = ModelFile::from_model(&model).to_json();
    println!("{json}");
    let model = ModelFile::from_json(&json)?.to_model(&BTreeMap::new())?;

    let g = assemble(&model)?;
    let report = classify(&g, &default_sample_times(1.0), DEFAULT_REL_TOL)?;
    println!("{report}\n");

    let tr = propagate_closed_form(
        &g,
        &state::phase_pair(3, 1, 2, 0.5),
        &uniform_grid(10.0, 100),
    )?;
    let series = ObservableSeries::from_trajectory(&tr, &[(1, 2)])?;
    match std::env::args().nth(1) {
        Some(path) => {
            let mut file = std::fs::File::create(&path)?;
            write_csv(&series, &mut file)?;
            println!("wrote {path}");
        }
        None => write_csv(&series, &mut std::io::stdout().lock())?,
    }
    Ok(())
}

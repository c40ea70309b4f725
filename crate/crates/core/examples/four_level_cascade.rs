//! Four-level cascade 4 → 3 → 2 → 1 with states confined to levels 1..3.

use std::collections::BTreeMap;

use lindblad_pc::commutativity::{classify, default_sample_times};
use lindblad_pc::linalg::DEFAULT_REL_TOL;
use lindblad_pc::model::{assemble, builtin};
use lindblad_pc::observables::{coherence, populations};
use lindblad_pc::solver::{propagate_closed_form, uniform_grid};
use lindblad_pc::state;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = assemble(&builtin("cascade4", &BTreeMap::new())?)?;
    let report = classify(&g, &default_sample_times(1.0), DEFAULT_REL_TOL)?;
    println!("{report}\n");

    let grid = uniform_grid(8.0, 8);
    let tr = propagate_closed_form(
        &g,
        &state::diagonal(&[0.0, 1.0 / 3.0, 2.0 / 3.0, 0.0]),
        &grid,
    )?;
    for (t, p) in grid.iter().zip(populations(&tr)) {
        let s = t / 2.0 - (6.0 * t).sin() / 12.0;
        println!(
            "t = {t:.0}  p = [{:.5}, {:.5}, {:.5}, {:.1e}]  p3 exact = {:.5}",
            p[0],
            p[1],
            p[2],
            p[3],
            2.0 / 3.0 * (-s).exp()
        );
    }

    let tr = propagate_closed_form(&g, &state::phase_triple(0.6, 2.3), &grid)?;
    for (i, j) in [(2, 1), (3, 1), (3, 2)] {
        let last = *coherence(&tr, i, j)?.last().unwrap();
        println!("sigma{i}{j}(8) = {:.3e} {:+.3e}i", last.re, last.im);
    }
    Ok(())
}

//! V system: two excited levels decaying into level 2 with rates sin²t and
//! cos²t. The generator commutes with itself at all times, so every
//! initial state has a closed-form trajectory.

use std::collections::BTreeMap;

use lindblad_pc::model::{assemble, builtin};
use lindblad_pc::observables::{coherence, populations};
use lindblad_pc::solver::{propagate_closed_form, uniform_grid};
use lindblad_pc::state;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = assemble(&builtin("v3", &BTreeMap::new())?)?;
    let grid = uniform_grid(10.0, 10);

    let tr = propagate_closed_form(&g, &state::diagonal(&[0.5, 0.0, 0.5]), &grid)?;
    println!("{:>5} {:>10} {:>10} {:>10}", "t", "p1", "p2", "p2 exact");
    for (t, p) in grid.iter().zip(populations(&tr)) {
        let exact = 1.0 - (-t / 2.0).exp() * ((2.0 * t).sin() / 4.0).cosh();
        println!("{t:>5.1} {:>10.6} {:>10.6} {exact:>10.6}", p[0], p[1]);
    }

    // the coherence between the excited levels decays as ½e^{−t/2}
    let tr = propagate_closed_form(&g, &state::phase_pair(3, 1, 3, 0.7), &grid)?;
    let rho13 = coherence(&tr, 1, 3)?;
    println!("\n{:>5} {:>10} {:>10}", "t", "|rho13|", "arg");
    for (t, z) in grid.iter().zip(rho13) {
        println!("{t:>5.1} {:>10.6} {:>10.4}", z.norm(), z.arg());
    }
    Ok(())
}

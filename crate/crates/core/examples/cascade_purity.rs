//! Three-level cascade 3 → 2 → 1. Only states with ρ₃₃ = 0 admit the
//! closed form; starting in |2⟩ the state passes through the maximally
//! mixed qubit state, where purity is ½ and entropy ln 2.

use std::collections::BTreeMap;

use lindblad_pc::model::{assemble, builtin};
use lindblad_pc::observables::{entropy, populations, purity};
use lindblad_pc::solver::{propagate_closed_form, uniform_grid};
use lindblad_pc::state;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = assemble(&builtin("cascade3", &BTreeMap::new())?)?;
    let grid = uniform_grid(20.0, 2000);
    let tr = propagate_closed_form(&g, &state::pure(3, 2), &grid)?;
    let p = populations(&tr);
    let pi = purity(&tr)?;
    let s = entropy(&tr)?;

    for k in (0..grid.len()).step_by(200) {
        println!(
            "t = {:>5.1}  p2 = {:.6}  purity = {:.6}  entropy = {:.6}",
            grid[k], p[k][1], pi[k], s[k]
        );
    }
    let (k_min, min_pi) =
        pi.iter().enumerate().fold(
            (0, f64::INFINITY),
            |a, (k, v)| if *v < a.1 { (k, *v) } else { a },
        );
    println!("\nmin purity {min_pi:.6} at t = {:.2}", grid[k_min]);
    println!(
        "max entropy {:.6} (ln 2 = {:.6})",
        s.iter().copied().fold(0.0, f64::max),
        2f64.ln()
    );
    Ok(())
}

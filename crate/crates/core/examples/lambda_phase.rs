//! Λ system: level 2 decays into 1 and 3. A superposition of the two lower
//! levels never decays; its coherence only rotates at the level splitting.

use std::collections::BTreeMap;

use lindblad_pc::model::{assemble, builtin};
use lindblad_pc::observables::coherence;
use lindblad_pc::solver::{ode_oracle, propagate_closed_form, uniform_grid, ORACLE_TOL};
use lindblad_pc::state;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params: BTreeMap<String, String> =
        [("e1", "1"), ("e3", "2.5"), ("f1", "t"), ("f2", "exp(-t)")]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
    let g = assemble(&builtin("lambda3", &params)?)?;
    let phi = 0.9;
    let rho0 = state::phase_pair(3, 1, 3, phi);
    let grid = uniform_grid(6.0, 12);

    let closed = coherence(&propagate_closed_form(&g, &rho0, &grid)?, 1, 3)?;
    let oracle = coherence(&ode_oracle(&g, &rho0, &grid, ORACLE_TOL)?, 1, 3)?;
    println!(
        "{:>5} {:>9} {:>10} {:>10}",
        "t", "|rho13|", "arg", "oracle arg"
    );
    for ((t, a), b) in grid.iter().zip(&closed).zip(&oracle) {
        println!(
            "{t:>5.1} {:>9.6} {:>10.6} {:>10.6}",
            a.norm(),
            a.arg(),
            b.arg()
        );
    }
    // with H = diag(−e1, 0, −e3), arg ρ13 = (e1 − e3)t − φ
    println!("\nexpected phase velocity {:.3}", 1.0 - 2.5);
    Ok(())
}

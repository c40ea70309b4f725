//! Closed form against the Dormand–Prince oracle, inside and outside M.

use std::collections::BTreeMap;

use lindblad_pc::linalg::vec;
use lindblad_pc::model::{assemble, builtin};
use lindblad_pc::solver::{
    compare, fedorov_residual, ode_oracle, propagate_closed_form, uniform_grid, ORACLE_TOL,
};
use lindblad_pc::state;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = assemble(&builtin("cascade3", &BTreeMap::new())?)?;
    let grid = uniform_grid(5.0, 100);
    let cases = [
        ("rho33 = 0", state::diagonal(&[0.5, 0.5, 0.0])),
        ("phase 1-2", state::phase_pair(3, 1, 2, 0.4)),
        ("|3><3|", state::pure(3, 3)),
    ];
    println!("{:<10} {:>14} {:>14}", "rho0", "trace dist", "residual");
    for (label, rho0) in cases {
        let closed = propagate_closed_form(&g, &rho0, &grid)?;
        let oracle = ode_oracle(&g, &rho0, &grid, ORACLE_TOL)?;
        let distance = compare(&closed, &oracle)?;
        let residual = fedorov_residual(&g, &vec(&rho0), &grid)?;
        println!("{label:<10} {distance:>14.3e} {residual:>14.3e}");
    }
    Ok(())
}

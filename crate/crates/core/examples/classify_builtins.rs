//! Classification table for the four built-in systems.
//!
//!     cargo run --example classify_builtins

use std::collections::BTreeMap;

use lindblad_pc::commutativity::{classify, default_sample_times};
use lindblad_pc::linalg::DEFAULT_REL_TOL;
use lindblad_pc::model::{assemble, builtin, BUILTIN_NAMES};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!(
        "{:<9} {:>10} {:>8} {:>5}  M",
        "model", "functional", "integral", "dim"
    );
    for name in BUILTIN_NAMES {
        let g = assemble(&builtin(name, &BTreeMap::new())?)?;
        let r = classify(&g, &default_sample_times(1.0), DEFAULT_REL_TOL)?;
        println!(
            "{:<9} {:>10} {:>8} {:>5}  {}  (power cap {}, residual {:.1e})",
            name,
            r.functional,
            r.integral,
            r.partial_rank,
            r.characterization(),
            r.power_cap,
            r.residual_max
        );
    }
    Ok(())
}

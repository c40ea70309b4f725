#![allow(dead_code)]

use std::collections::BTreeMap;

use lindblad_pc::linalg::{c, CMatrix};
use lindblad_pc::model::{assemble, builtin, GeneratorDecomposition};
use lindblad_pc::state;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn generator(name: &str, params: &[(&str, &str)]) -> GeneratorDecomposition {
    let p: BTreeMap<String, String> = params
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    assemble(&builtin(name, &p).unwrap()).unwrap()
}

/// Level that must stay empty for the built-in's closed form to apply.
pub fn forbidden_level(name: &str) -> Option<usize> {
    match name {
        "cascade3" => Some(3),
        "lambda3" => Some(2),
        "cascade4" => Some(4),
        _ => None,
    }
}

fn random_state_on(levels: &[usize], d: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let mut a = CMatrix::zeros(d, d);
    for &i in levels {
        for j in 0..d {
            a[(i - 1, j)] = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
    }
    let rho = &a * a.adjoint();
    let tr = rho.trace().re;
    rho.unscale(tr)
}

/// Ten states avoiding the forbidden level: pure states, a uniform mixture,
/// phase-endowed superpositions and seeded random mixtures.
pub fn admissible_bank(name: &str, d: usize) -> Vec<CMatrix> {
    let allowed: Vec<usize> = (1..=d)
        .filter(|k| Some(*k) != forbidden_level(name))
        .collect();
    let mut bank = vec![
        state::pure(d, allowed[0]),
        state::pure(d, allowed[1]),
        state::diagonal(
            &(1..=d)
                .map(|k| {
                    if allowed.contains(&k) {
                        1.0 / allowed.len() as f64
                    } else {
                        0.0
                    }
                })
                .collect::<Vec<_>>(),
        ),
        state::phase_pair(d, allowed[0], allowed[1], 0.3),
        state::phase_pair(d, allowed[0], allowed[allowed.len() - 1], 1.7),
    ];
    if d == 4 && forbidden_level(name) == Some(4) {
        bank.push(state::phase_triple(0.4, 2.2));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    while bank.len() < 10 {
        bank.push(random_state_on(&allowed, d, &mut rng));
    }
    bank
}

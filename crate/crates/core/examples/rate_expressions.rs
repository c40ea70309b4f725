//! Rate expressions: parsing with parameters, closed-form antiderivatives
//! and the quadrature fallback.

use std::collections::HashMap;

use lindblad_pc::expr::{antiderivative, parse_rate_expr};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = HashMap::from([("w".to_string(), 2.0)]);
    for text in [
        "sin(w*t)^2",
        "exp(-w*t) + 0.5",
        "3*t^2",
        "t*exp(-t)",
        "1/(1 + t^2)",
    ] {
        let f = parse_rate_expr(text, &params)?;
        let big_f = antiderivative(&f);
        let how = match big_f.closed_form() {
            Some(expr) => format!("closed: {expr}"),
            None => "quadrature".to_string(),
        };
        println!(
            "{text:<18} -> {f:<24} F(1.5) = {:.12}  [{how}]",
            big_f.value(1.5)?
        );
    }

    match parse_rate_expr("sin(w*t", &params) {
        Err(e) => println!("\n{e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}

//! Trajectory CSV: `t,p_1,…,p_d,purity,entropy[,re_ij,im_ij…]`.

use std::io::{self, Write};

use crate::observables::ObservableSeries;

fn number(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    // avoid "-0" cells
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.15e}")
}

fn pair_label(i: usize, j: usize) -> String {
    if i < 10 && j < 10 {
        format!("{i}{j}")
    } else {
        format!("{i}_{j}")
    }
}

pub fn header(series: &ObservableSeries) -> String {
    let d = series.populations.first().map_or(0, Vec::len);
    let mut cols = vec!["t".to_string()];
    cols.extend((1..=d).map(|k| format!("p_{k}")));
    cols.push("purity".into());
    cols.push("entropy".into());
    for ((i, j), _) in &series.coherences {
        let label = pair_label(*i, *j);
        cols.push(format!("re_{label}"));
        cols.push(format!("im_{label}"));
    }
    cols.join(",")
}

/// One row per grid point, LF line endings; undefined purity/entropy cells
/// are written as NaN.
pub fn write_csv(series: &ObservableSeries, out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "{}", header(series))?;
    for (k, t) in series.grid.iter().enumerate() {
        let mut cells = vec![number(*t)];
        cells.extend(series.populations[k].iter().map(|p| number(*p)));
        cells.push(number(series.purity[k].unwrap_or(f64::NAN)));
        cells.push(number(series.entropy[k].unwrap_or(f64::NAN)));
        for (_, values) in &series.coherences {
            cells.push(number(values[k].re));
            cells.push(number(values[k].im));
        }
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

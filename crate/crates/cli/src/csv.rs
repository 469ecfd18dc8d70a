use parity_sim::fit::{fit_theta_sweep, ThetaFit};

use crate::error::CliError;

/// 17 significant digits in scientific notation; round-trips every `f64`.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Header line plus one line per row, LF terminated.
pub fn render<R: AsRef<[String]>>(header: &[&str], rows: &[R]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.as_ref().join(","));
        out.push('\n');
    }
    out
}

pub fn numeric_row(values: &[f64]) -> Vec<String> {
    values.iter().map(|v| format_f64(*v)).collect()
}

/// Parses a two-column `theta_rad,g2_at_tau0` file.
pub fn parse_theta_sweep(text: &str) -> Result<Vec<(f64, f64)>, CliError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, header)) if header.trim() == "theta_rad,g2_at_tau0" => {}
        Some((_, header)) => {
            return Err(CliError::Data(format!(
                "expected header theta_rad,g2_at_tau0, found {header:?}"
            )))
        }
        None => return Err(CliError::Data("empty CSV".into())),
    }
    lines
        .map(|(i, line)| {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| CliError::Data(format!("line {}: {s:?}: {e}", i + 1)))
            };
            match fields.as_slice() {
                [t, g] => Ok((parse(t)?, parse(g)?)),
                _ => Err(CliError::Data(format!(
                    "line {}: expected 2 fields, found {}",
                    i + 1,
                    fields.len()
                ))),
            }
        })
        .collect()
}

/// Fits `A sin²(θ/2 + φ) + B` (period free) to a theta-sweep CSV.
pub fn fit_theta_sweep_csv(text: &str) -> Result<ThetaFit, CliError> {
    Ok(fit_theta_sweep(&parse_theta_sweep(text)?)?)
}

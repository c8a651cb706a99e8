//! Vector text format: one vector per line. Real vectors are
//! whitespace-separated decimals; complex vectors are whitespace-separated
//! `re im` pairs. Output uses 17 significant digits so values round-trip.

use num_complex::Complex64;

use crate::{Error, Result};

pub fn format_real(v: &[f64]) -> String {
    v.iter()
        .map(|x| format!("{:.16e}", x))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn format_complex(v: &[Complex64]) -> String {
    v.iter()
        .map(|z| format!("{:.16e} {:.16e}", z.re, z.im))
        .collect::<Vec<_>>()
        .join(" ")
}

fn parse_numbers(line: &str) -> Result<Vec<f64>> {
    line.split_whitespace()
        .map(|tok| {
            let x: f64 = tok
                .parse()
                .map_err(|_| Error::Parse(format!("not a number: {tok:?}")))?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(Error::Parse(format!("non-finite value: {tok:?}")))
            }
        })
        .collect()
}

pub fn parse_real(line: &str) -> Result<Vec<f64>> {
    parse_numbers(line)
}

pub fn parse_complex(line: &str) -> Result<Vec<Complex64>> {
    let xs = parse_numbers(line)?;
    if xs.len() % 2 != 0 {
        return Err(Error::Parse(format!(
            "complex vector needs an even count of numbers, got {}",
            xs.len()
        )));
    }
    Ok(xs
        .chunks_exact(2)
        .map(|p| Complex64::new(p[0], p[1]))
        .collect())
}

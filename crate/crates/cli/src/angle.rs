//! Angle literals: plain decimals plus multiples and fractions of `pi`,
//! e.g. `0.5872`, `pi/8`, `3pi/8`, `3*pi/8`, `-pi/4`, `1/3`.

use std::f64::consts::PI;

use crate::error::{CliError, CliResult};

pub fn parse_angle(text: &str) -> CliResult<f64> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || CliError::validation(format!("cannot parse angle `{text}`"));
    if compact.is_empty() {
        return Err(err());
    }
    let (numerator, denominator) = match compact.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (compact.as_str(), None),
    };
    let value = parse_product(numerator).ok_or_else(err)?;
    let value = match denominator {
        Some(d) => {
            let d: f64 = d.parse().map_err(|_| err())?;
            if d == 0.0 {
                return Err(err());
            }
            value / d
        }
        None => value,
    };
    if !value.is_finite() {
        return Err(err());
    }
    Ok(value)
}

/// `[sign][coefficient][*]pi` or a plain number.
fn parse_product(text: &str) -> Option<f64> {
    let Some(head) = text.strip_suffix("pi") else {
        return text.parse().ok();
    };
    let head = head.strip_suffix('*').unwrap_or(head);
    let coefficient = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        _ => head.parse().ok()?,
    };
    Some(coefficient * PI)
}

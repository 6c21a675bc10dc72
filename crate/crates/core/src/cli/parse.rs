//! Parsers for command-line literals.
//!
//! Complex numbers are written `a+bj` or `a-bj` with a mandatory `j` on the
//! imaginary part; `3`, `2.5j` and `-j` are also accepted.

use num_complex::Complex64;

use crate::gaussian::{CoefficientVector, GaussInt};

/// Splits a literal into real and imaginary text; the imaginary text keeps
/// its sign and drops the `j`.
fn split_complex(token: &str) -> Option<(&str, &str)> {
    let Some(body) = token.strip_suffix('j') else {
        return Some((token, ""));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    match split {
        Some(i) => Some((&body[..i], &body[i..])),
        None => Some(("", body)),
    }
}

fn imag_text(s: &str) -> &str {
    match s {
        "" | "+" => "1",
        "-" => "-1",
        other => other.strip_prefix('+').unwrap_or(other),
    }
}

pub fn parse_complex(token: &str) -> Option<Complex64> {
    let token = token.trim();
    if token.is_empty() {
        return None;
    }
    let (re, im) = split_complex(token)?;
    let is_imag = token.ends_with('j');
    let re = if re.is_empty() { 0.0 } else { re.parse::<f64>().ok()? };
    let im = if is_imag { imag_text(im).parse::<f64>().ok()? } else { 0.0 };
    (re.is_finite() && im.is_finite()).then_some(Complex64::new(re, im))
}

pub fn parse_gauss_int(token: &str) -> Option<GaussInt> {
    let token = token.trim();
    if token.is_empty() {
        return None;
    }
    let (re, im) = split_complex(token)?;
    let is_imag = token.ends_with('j');
    let re = if re.is_empty() { 0 } else { re.strip_prefix('+').unwrap_or(re).parse::<i64>().ok()? };
    let im = if is_imag { imag_text(im).parse::<i64>().ok()? } else { 0 };
    Some(GaussInt::new(re, im))
}

fn parse_list<T>(flag: &str, text: &str, item: impl Fn(&str) -> Option<T>) -> Result<Vec<T>, String> {
    text.split(',')
        .enumerate()
        .map(|(i, tok)| {
            item(tok).ok_or_else(|| format!("{flag}: cannot parse token '{}' at position {}", tok.trim(), i + 1))
        })
        .collect()
}

pub fn parse_complex_list(flag: &str, text: &str) -> Result<Vec<Complex64>, String> {
    parse_list(flag, text, parse_complex)
}

pub fn parse_coefficients(flag: &str, text: &str) -> Result<CoefficientVector, String> {
    parse_list(flag, text, parse_gauss_int).map(CoefficientVector::new)
}

pub fn parse_usize_list(flag: &str, text: &str) -> Result<Vec<usize>, String> {
    parse_list(flag, text, |t| t.trim().parse::<usize>().ok())
}

/// SNR grid in dB: `start:stop:step` (inclusive) or a comma-separated list.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, String> {
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("--grid: expected start:stop:step, got '{text}'"));
        }
        let num = |s: &str| s.trim().parse::<f64>().ok().filter(|x| x.is_finite());
        let (Some(a), Some(b), Some(step)) = (num(parts[0]), num(parts[1]), num(parts[2])) else {
            return Err(format!("--grid: cannot parse '{text}'"));
        };
        if !(step > 0.0) || b < a {
            return Err(format!("--grid: need step > 0 and stop >= start, got '{text}'"));
        }
        let count = ((b - a) / step + 1e-9).floor() as usize + 1;
        Ok((0..count).map(|i| a + i as f64 * step).collect())
    } else {
        parse_list("--grid", text, |t| t.trim().parse::<f64>().ok().filter(|x| x.is_finite()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("-1.1744+2.1496j"), Some(Complex64::new(-1.1744, 2.1496)));
        assert_eq!(parse_complex("1.2512-1.6335j"), Some(Complex64::new(1.2512, -1.6335)));
        assert_eq!(parse_complex("3"), Some(Complex64::new(3.0, 0.0)));
        assert_eq!(parse_complex("-2.5j"), Some(Complex64::new(0.0, -2.5)));
        assert_eq!(parse_complex("-j"), Some(Complex64::new(0.0, -1.0)));
        assert_eq!(parse_complex("1e-3-2E+1j"), Some(Complex64::new(1e-3, -20.0)));
        assert_eq!(parse_complex("1+2i"), None);
        assert_eq!(parse_complex("x"), None);
        assert_eq!(parse_complex(""), None);
    }

    #[test]
    fn coefficient_lists() {
        let a = parse_coefficients("--a", "1,-1,2+3j,-j").unwrap();
        assert_eq!(
            a.entries(),
            &[GaussInt::new(1, 0), GaussInt::new(-1, 0), GaussInt::new(2, 3), GaussInt::new(0, -1)]
        );
        let err = parse_coefficients("--a", "1,x").unwrap_err();
        assert!(err.contains("'x'") && err.contains("position 2"), "{err}");
        assert!(parse_coefficients("--a", "1.5").is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0:4:2").unwrap(), vec![0.0, 2.0, 4.0]);
        assert_eq!(parse_grid("5,10,12.5").unwrap(), vec![5.0, 10.0, 12.5]);
        assert!(parse_grid("0:4:0").is_err());
        assert!(parse_grid("4:0:1").is_err());
    }
}

use std::path::Path;

use mehler_fock::{CoefficientSequence, Complex64, FunctionSpec, MuParameter};
use serde::Deserialize;

use crate::parse;

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

/// One coefficient per line, `re` or `re,im` (commas or whitespace);
/// blank lines and `#` comments are skipped.
pub fn parse_coefficients(text: &str, residual_l1: f64) -> Result<CoefficientSequence, String> {
    let mut values = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|f| !f.is_empty())
            .collect();
        let parsed = match fields.as_slice() {
            [re] => parse::finite(re).map(|re| Complex64::new(re, 0.0)),
            [re, im] => parse::finite(re).and_then(|re| Ok(Complex64::new(re, parse::finite(im)?))),
            _ => Err("expected 're' or 're,im'".to_string()),
        };
        values.push(parsed.map_err(|e| format!("line {}: {e}", k + 1))?);
    }
    CoefficientSequence::with_residual(values, residual_l1).map_err(|e| e.to_string())
}

pub fn read_coefficients(path: &Path, residual_l1: f64) -> Result<CoefficientSequence, String> {
    parse_coefficients(&read(path)?, residual_l1)
        .map_err(|e| format!("{}: {e}", path.display()))
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
enum Number {
    Real(f64),
    Complex { re: f64, im: f64 },
}

impl From<Number> for Complex64 {
    fn from(n: Number) -> Self {
        match n {
            Number::Real(re) => Complex64::new(re, 0.0),
            Number::Complex { re, im } => Complex64::new(re, im),
        }
    }
}

/// `ψ(u) = constant + Σ cosine[k−1] cos(ku) + Σ sine[k−1] sin(ku)`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    #[serde(default)]
    sine: Vec<Number>,
    #[serde(default)]
    cosine: Vec<Number>,
    #[serde(default)]
    constant: Option<Number>,
}

pub fn parse_spec(text: &str, mu: MuParameter) -> Result<FunctionSpec, String> {
    let s: SpecFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let sine = s.sine.into_iter().map(Complex64::from).collect();
    let cosine = s.cosine.into_iter().map(Complex64::from).collect();
    let constant = s.constant.map_or(Complex64::new(0.0, 0.0), Complex64::from);
    Ok(FunctionSpec::new(sine, mu).with_even_part(constant, cosine))
}

pub fn read_spec(path: &Path, mu: MuParameter) -> Result<FunctionSpec, String> {
    parse_spec(&read(path)?, mu).map_err(|e| format!("{}: {e}", path.display()))
}

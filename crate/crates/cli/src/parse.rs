use std::f64::consts::PI;

use mehler_fock::oracle::IdentityId;
use mehler_fock::{Complex64, KernelRoute};

pub type ParseResult<T> = Result<T, String>;

/// A real number; also accepts `pi`, `2pi`, `2*pi`, `pi/2`, `-pi/4` and `inf`.
pub fn real(s: &str) -> ParseResult<f64> {
    let t = s.trim().to_ascii_lowercase();
    if let Some(pos) = t.find("pi") {
        let (head, rest) = (&t[..pos], &t[pos + 2..]);
        let head = head.trim_end_matches('*');
        let coeff = match head {
            "" | "+" => 1.0,
            "-" => -1.0,
            h => h.parse::<f64>().map_err(|_| format!("invalid number '{s}'"))?,
        };
        let div = match rest.strip_prefix('/') {
            Some(d) => d.parse::<f64>().map_err(|_| format!("invalid number '{s}'"))?,
            None if rest.is_empty() => 1.0,
            None => return Err(format!("invalid number '{s}'")),
        };
        return Ok(coeff * PI / div);
    }
    t.parse::<f64>().map_err(|_| format!("invalid number '{s}'"))
}

pub fn finite(s: &str) -> ParseResult<f64> {
    let v = real(s)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' must be finite"))
    }
}

/// `re` or `re,im`.
pub fn complex(s: &str) -> ParseResult<Complex64> {
    let mut parts = s.split(',');
    let re = finite(parts.next().unwrap_or(""))?;
    let im = match parts.next() {
        Some(p) => finite(p)?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return Err(format!("complex value '{s}' must be 're' or 're,im'"));
    }
    Ok(Complex64::new(re, im))
}

/// Complex values separated by `;`.
pub fn complex_list(s: &str) -> ParseResult<Vec<Complex64>> {
    s.split(';').map(complex).collect()
}

pub fn positive_int(s: &str, what: &str) -> ParseResult<u32> {
    match s.trim().parse::<u32>() {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(format!("{what} must be a positive integer, got '{s}'")),
    }
}

/// `k`, `a..b` (inclusive) or a comma-separated mix of both.
pub fn int_list(s: &str, what: &str) -> ParseResult<Vec<u32>> {
    let mut out = Vec::new();
    for token in s.split([',', ';']) {
        let token = token.trim();
        if let Some((a, b)) = token.split_once("..") {
            let b = b.trim_start_matches('=');
            let (a, b) = (positive_int(a, what)?, positive_int(b, what)?);
            if a > b {
                return Err(format!("empty range '{token}' for {what}"));
            }
            out.extend(a..=b);
        } else {
            out.push(positive_int(token, what)?);
        }
    }
    Ok(out)
}

/// Spacing of a grid given as `min:max:count`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Lin,
    /// Logarithmic in `v − origin`.
    Log { shifted: bool },
}

/// Grid points: numbers and `min:max:count[log|lin]` specs separated by `,`
/// or `;`. Log spacing is taken in `v − 1` when `shifted`, otherwise in `v`.
pub fn grid(s: &str, default_log: bool, shifted: bool) -> ParseResult<Vec<f64>> {
    let mut out = Vec::new();
    for token in s.split([',', ';']) {
        let token = token.trim();
        if !token.contains(':') {
            out.push(finite(token)?);
            continue;
        }
        let fields: Vec<&str> = token.split(':').collect();
        if fields.len() != 3 {
            return Err(format!("grid '{token}' must be min:max:count[log|lin]"));
        }
        let (lo, hi) = (finite(fields[0])?, finite(fields[1])?);
        let count_field = fields[2].trim();
        let (count, spacing) = if let Some(c) = count_field.strip_suffix("log") {
            (c, Spacing::Log { shifted })
        } else if let Some(c) = count_field.strip_suffix("lin") {
            (c, Spacing::Lin)
        } else if default_log {
            (count_field, Spacing::Log { shifted })
        } else {
            (count_field, Spacing::Lin)
        };
        let count = positive_int(count, "grid count")? as usize;
        if hi < lo {
            return Err(format!("grid '{token}' has max < min"));
        }
        let origin = match spacing {
            Spacing::Log { shifted: true } => 1.0,
            _ => 0.0,
        };
        if matches!(spacing, Spacing::Log { .. }) && !(lo > origin) {
            return Err(format!("log grid '{token}' needs min > {origin}"));
        }
        for k in 0..count {
            let f = if count == 1 { 0.0 } else { k as f64 / (count - 1) as f64 };
            let v = match spacing {
                Spacing::Lin => lo + (hi - lo) * f,
                Spacing::Log { .. } => {
                    let (a, b) = ((lo - origin).ln(), (hi - origin).ln());
                    origin + (a + (b - a) * f).exp()
                }
            };
            // Pin the endpoints so they are exactly as written.
            out.push(if k == 0 { lo } else if k + 1 == count { hi } else { v });
        }
    }
    Ok(out)
}

pub fn route(s: &str) -> ParseResult<KernelRoute> {
    match s.trim() {
        "auto" => Ok(KernelRoute::Auto),
        "mehler" => Ok(KernelRoute::Mehler),
        "legendre" => Ok(KernelRoute::Legendre),
        "mellin_barnes" | "mellin-barnes" => Ok(KernelRoute::MellinBarnes),
        other => Err(format!(
            "unknown route '{other}' (expected auto, mehler, legendre or mellin_barnes)"
        )),
    }
}

pub fn selection(s: &str) -> ParseResult<Vec<IdentityId>> {
    s.split([',', ';'])
        .map(|t| {
            let t = t.trim();
            IdentityId::parse(t).ok_or_else(|| format!("unknown identity '{t}'"))
        })
        .collect()
}

use std::io::Write;
use std::path::Path;

use mehler_fock::Complex64;
use serde::ser::{Serialize, SerializeMap, Serializer};
use serde_json::value::RawValue;

/// 17 significant digits: parsing the text recovers the binary value.
pub fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

/// A float serialized with [`fmt`]; non-finite values become `null`.
#[derive(Debug, Clone, Copy)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            RawValue::from_string(fmt(self.0))
                .map_err(serde::ser::Error::custom)?
                .serialize(s)
        } else {
            s.serialize_none()
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Cplx(pub Complex64);

impl Serialize for Cplx {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("re", &Num(self.0.re))?;
        m.serialize_entry("im", &Num(self.0.im))?;
        m.end()
    }
}

/// `header` followed by one `arg,re,im` row per point.
pub fn csv(header: &str, rows: &[(f64, Complex64)]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(header);
    out.push('\n');
    for (arg, v) in rows {
        out.push_str(&format!("{},{},{}\n", fmt(*arg), fmt(v.re), fmt(v.im)));
    }
    out
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialization");
    s.push('\n');
    s
}

/// Writes to `path`, or to standard output when `path` is `None`.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| format!("cannot write to stdout: {e}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, f64::MIN_POSITIVE, 5e-324] {
            let s = fmt(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
            let j = serde_json::to_string(&Num(x)).unwrap();
            assert_eq!(j, s);
            assert_eq!(serde_json::from_str::<f64>(&j).unwrap(), x);
        }
        assert_eq!(serde_json::to_string(&Num(f64::NAN)).unwrap(), "null");
    }

    #[test]
    fn csv_layout() {
        let s = csv("x,re,im", &[(2.0, Complex64::new(0.5, -0.0))]);
        assert_eq!(s, "x,re,im\n2.0000000000000000e0,5.0000000000000000e-1,-0.0000000000000000e0\n");
    }
}

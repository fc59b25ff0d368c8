use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::Deserialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Kernel,
    Forward,
    Invert,
    Expand,
    Verify,
}

/// Discrete Mehler-Fock transforms: kernel tables, forward synthesis,
/// inversion, function expansion and identity verification.
#[derive(Debug, Parser)]
#[command(name = "mfk", version)]
pub struct Cli {
    /// Command to run; may instead come from the manifest.
    #[arg(value_enum)]
    pub command: Option<Command>,
    /// JSON job manifest; flags given on the command line override it.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    #[command(flatten)]
    pub opts: Options,
}

/// Every job parameter as text, so flags and manifest entries share one
/// parser.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Options {
    /// Order μ as `re` or `re,im`; verify accepts a `;`-separated list.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
    /// Degree index: `k`, `a..b` or a comma list.
    #[arg(long)]
    pub n: Option<String>,
    /// Real degree τ for conical and bessel_k kernels.
    #[arg(long)]
    pub tau: Option<String>,
    /// x grid, `min:max:count[log|lin]` or a comma list; log is the default.
    #[arg(long)]
    pub x: Option<String>,
    /// y grid, `min:max:count[log|lin]` or a comma list; lin is the default.
    #[arg(long)]
    pub y: Option<String>,
    /// t values (verify: projection and decay).
    #[arg(long)]
    pub t: Option<String>,
    /// u values (verify: Kontorovich-Lebedev).
    #[arg(long)]
    pub u: Option<String>,
    /// Orthogonality matrix size (verify).
    #[arg(long)]
    pub size: Option<String>,
    /// Decay exponent γ (verify).
    #[arg(long)]
    pub gamma: Option<String>,
    /// Kernel kind: conical, incomplete_legendre, bessel_k, incomplete_bessel.
    #[arg(long)]
    pub kind: Option<String>,
    /// Kernel route: auto, mehler, legendre, mellin_barnes.
    #[arg(long)]
    pub route: Option<String>,
    /// Upper limit of incomplete kernels; accepts `pi`.
    #[arg(long)]
    pub omega: Option<String>,
    #[arg(long)]
    pub n_max: Option<String>,
    #[arg(long)]
    pub x_max: Option<String>,
    #[arg(long)]
    pub abs_tol: Option<String>,
    #[arg(long)]
    pub rel_tol: Option<String>,
    /// Replace every identity threshold by this value (verify).
    #[arg(long)]
    pub threshold: Option<String>,
    /// Identities to verify, comma separated; all by default.
    #[arg(long)]
    pub select: Option<String>,
    /// l¹ norm of coefficients dropped before the coefficient file was written.
    #[arg(long)]
    pub tail_l1: Option<String>,
    /// Coefficient file: one `re` or `re,im` per line.
    #[arg(long)]
    pub coeffs: Option<PathBuf>,
    /// Function spec (JSON with sine, cosine and constant coefficients).
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Output path; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Companion tail-bound JSON of forward; defaults to `<output>.tail.json`.
    #[arg(long)]
    pub tail_output: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    command: Option<Command>,
    #[serde(default)]
    parameters: BTreeMap<String, Value>,
    #[serde(default)]
    io: BTreeMap<String, Value>,
}

fn text(key: &str, v: &Value) -> Result<String, String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        Value::Array(items) => {
            let parts = items
                .iter()
                .map(|i| text(key, i))
                .collect::<Result<Vec<_>, _>>()?;
            let sep = if items.iter().all(Value::is_number) { "," } else { ";" };
            Ok(parts.join(sep))
        }
        _ => Err(format!("manifest entry '{key}' must be a string, number or array")),
    }
}

impl Options {
    fn slot(&mut self, key: &str) -> Option<&mut Option<String>> {
        Some(match key {
            "mu" => &mut self.mu,
            "n" => &mut self.n,
            "tau" => &mut self.tau,
            "x" => &mut self.x,
            "y" => &mut self.y,
            "t" => &mut self.t,
            "u" => &mut self.u,
            "size" => &mut self.size,
            "gamma" => &mut self.gamma,
            "kind" => &mut self.kind,
            "route" => &mut self.route,
            "omega" => &mut self.omega,
            "n_max" => &mut self.n_max,
            "x_max" => &mut self.x_max,
            "abs_tol" => &mut self.abs_tol,
            "rel_tol" => &mut self.rel_tol,
            "threshold" => &mut self.threshold,
            "select" => &mut self.select,
            "tail_l1" => &mut self.tail_l1,
            _ => return None,
        })
    }

    fn path_slot(&mut self, key: &str) -> Option<&mut Option<PathBuf>> {
        Some(match key {
            "coeffs" | "input" => &mut self.coeffs,
            "spec" => &mut self.spec,
            "output" => &mut self.output,
            "tail_output" => &mut self.tail_output,
            _ => return None,
        })
    }

    /// Fills every option the command line left unset from the manifest.
    fn fill_from(&mut self, m: &Manifest) -> Result<(), String> {
        for (key, v) in &m.parameters {
            let key = key.replace('-', "_");
            let value = text(&key, v)?;
            match self.slot(&key) {
                Some(slot) => {
                    if slot.is_none() {
                        *slot = Some(value);
                    }
                }
                None => return Err(format!("unknown manifest parameter '{key}'")),
            }
        }
        for (key, v) in &m.io {
            let key = key.replace('-', "_");
            let Value::String(path) = v else {
                return Err(format!("manifest io entry '{key}' must be a path string"));
            };
            match self.path_slot(&key) {
                Some(slot) => {
                    if slot.is_none() {
                        *slot = Some(PathBuf::from(path));
                    }
                }
                None => return Err(format!("unknown manifest io entry '{key}'")),
            }
        }
        Ok(())
    }
}

/// The command and options after merging flags over the manifest.
pub fn resolve(cli: Cli) -> Result<(Command, Options), String> {
    let mut opts = cli.opts;
    let mut command = cli.command;
    if let Some(path) = &cli.manifest {
        let raw = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read manifest {}: {e}", path.display()))?;
        let manifest: Manifest = serde_json::from_str(&raw)
            .map_err(|e| format!("invalid manifest {}: {e}", path.display()))?;
        opts.fill_from(&manifest)?;
        if command.is_none() {
            command = manifest.command;
        }
    }
    let command = command.ok_or("no command given (kernel, forward, invert, expand or verify)")?;
    Ok((command, opts))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_manifest() {
        let m: Manifest = serde_json::from_str(
            r#"{"command": "kernel", "parameters": {"mu": "0.25,0", "n": 2, "x": [1.5, 2],
                "n-max": 4}, "io": {"output": "a.csv"}}"#,
        )
        .unwrap();
        let mut o = Options {
            n: Some("3".into()),
            ..Options::default()
        };
        o.fill_from(&m).unwrap();
        assert_eq!(o.mu.as_deref(), Some("0.25,0"));
        assert_eq!(o.n.as_deref(), Some("3"));
        assert_eq!(o.x.as_deref(), Some("1.5,2"));
        assert_eq!(o.n_max.as_deref(), Some("4"));
        assert_eq!(o.output, Some(PathBuf::from("a.csv")));
    }

    #[test]
    fn unknown_keys_rejected() {
        let m: Manifest = serde_json::from_str(r#"{"parameters": {"nmax": 4}}"#).unwrap();
        assert!(Options::default().fill_from(&m).is_err());
        assert!(serde_json::from_str::<Manifest>(r#"{"params": {}}"#).is_err());
    }
}

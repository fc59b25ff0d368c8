use std::f64::consts::PI;
use std::path::PathBuf;

use mehler_fock::oracle::{
    default_suite_mellin, summarize, suite_jobs, IdentityId, IdentityReport, ParamValue,
    SuiteGrids, Thresholds,
};
use mehler_fock::specfun::{
    bessel_k_imag, conical_kernel, incomplete_bessel, incomplete_legendre_shifted,
};
use mehler_fock::transform::{
    coefficient_by_quadrature, expand_function_complete, expand_function_incomplete,
    forward_series, inverse_coefficients, ForwardSeries,
};
use mehler_fock::{
    Complex64, IntegralResult, KernelDegree, MuParameter, TransformConfig,
};
use rayon::prelude::*;
use serde::ser::{Serialize, SerializeMap, Serializer};
use serde::Serialize as DeriveSerialize;

use crate::args::Options;
use crate::files;
use crate::output::{csv, emit, json, Cplx, Num};
use crate::parse;

/// How a command that produced its output ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    VerificationFailed,
    Unconverged,
}

pub const SUITE_VERSION: &str = "1";

type CmdResult<T> = Result<T, String>;

fn lib<T>(r: mehler_fock::Result<T>) -> CmdResult<T> {
    r.map_err(|e| e.to_string())
}

fn mu_broad(o: &Options) -> CmdResult<MuParameter> {
    let mu = parse::complex(o.mu.as_deref().unwrap_or("0"))?;
    lib(MuParameter::broad(mu))
}

/// Absolute tolerance of `invert` and `expand` unless given: coefficients
/// carry a `sinh(πn)` amplification that puts the library default out of
/// reach in double precision from `n = 3` on.
const COEFFICIENT_ABS_TOL: f64 = 1e-8;

fn transform_config(o: &Options) -> CmdResult<TransformConfig> {
    transform_config_with(o, None)
}

fn coefficient_config(o: &Options) -> CmdResult<TransformConfig> {
    transform_config_with(o, Some(COEFFICIENT_ABS_TOL))
}

fn transform_config_with(o: &Options, abs_tol: Option<f64>) -> CmdResult<TransformConfig> {
    let mut tc = TransformConfig::default();
    if let Some(t) = abs_tol {
        tc.cfg.abs_tol = t;
    }
    if let Some(s) = &o.abs_tol {
        tc.cfg.abs_tol = parse::finite(s)?;
    }
    if let Some(s) = &o.rel_tol {
        tc.cfg.rel_tol = parse::finite(s)?;
    }
    if let Some(s) = &o.n_max {
        tc.n_max = parse::positive_int(s, "n_max")?;
    }
    if let Some(s) = &o.x_max {
        tc.x_max = parse::real(s)?;
    }
    if let Some(s) = &o.route {
        tc.kernel_route = parse::route(s)?;
    }
    lib(tc.validate())?;
    Ok(tc)
}

fn require<'a>(v: &'a Option<String>, what: &str) -> CmdResult<&'a str> {
    v.as_deref().ok_or_else(|| format!("--{what} is required"))
}

fn x_grid(o: &Options) -> CmdResult<Vec<f64>> {
    let xs = parse::grid(require(&o.x, "x")?, true, true)?;
    match xs.iter().find(|&&x| !(x > 1.0)) {
        Some(x) => Err(format!("domain error: x must be > 1, got {x}")),
        None => Ok(xs),
    }
}

fn status_of(converged: impl IntoIterator<Item = bool>) -> Status {
    if converged.into_iter().all(|c| c) {
        Status::Ok
    } else {
        Status::Unconverged
    }
}

fn single_n(o: &Options) -> CmdResult<Option<u32>> {
    match &o.n {
        None => Ok(None),
        Some(s) => match parse::int_list(s, "n")?.as_slice() {
            [n] => Ok(Some(*n)),
            _ => Err("kernel takes a single n".into()),
        },
    }
}

pub fn kernel(o: &Options) -> CmdResult<Status> {
    let tc = transform_config(o)?;
    let mu = mu_broad(o)?;
    let kind = o.kind.as_deref().unwrap_or("conical");
    let tau = match (single_n(o)?, &o.tau) {
        (Some(_), Some(_)) => return Err("give either --n or --tau, not both".into()),
        (Some(n), None) => n as f64,
        (None, Some(t)) => {
            let t = parse::finite(t)?;
            if t < 0.0 {
                return Err("domain error: tau must be >= 0".into());
            }
            t
        }
        (None, None) => return Err("--n or --tau is required".into()),
    };
    let integer = tau.fract() == 0.0 && tau >= 1.0;
    let omega = match &o.omega {
        Some(s) => parse::finite(s)?,
        None => PI,
    };
    let cfg = tc.cfg;
    let (header, args, eval): (_, _, Box<dyn Fn(f64) -> mehler_fock::Result<IntegralResult> + Sync>) =
        match kind {
            "conical" => {
                let route = tc.kernel_route;
                (
                    "x,re,im",
                    x_grid(o)?,
                    Box::new(move |x| {
                        conical_kernel(&mu, KernelDegree::Continuous(tau), x, route, &cfg)
                    }),
                )
            }
            "incomplete_legendre" => (
                "x,re,im",
                x_grid(o)?,
                Box::new(move |x| incomplete_legendre_shifted(mu.value(), tau, x - 1.0, omega, &cfg)),
            ),
            "bessel_k" => {
                let ys = parse::grid(require(&o.y, "y")?, false, false)?;
                if let Some(y) = ys.iter().find(|&&y| !(y > 0.0)) {
                    return Err(format!("domain error: y must be > 0, got {y}"));
                }
                ("y,re,im", ys, Box::new(move |y| bessel_k_imag(tau, y, &cfg)))
            }
            "incomplete_bessel" => {
                if !integer {
                    return Err("incomplete_bessel needs an integer n >= 1".into());
                }
                let ys = parse::grid(require(&o.y, "y")?, false, false)?;
                if let Some(y) = ys.iter().find(|&&y| !(y >= 0.0)) {
                    return Err(format!("domain error: y must be >= 0, got {y}"));
                }
                let n = tau as u32;
                ("y,re,im", ys, Box::new(move |y| incomplete_bessel(n, y, omega, &cfg)))
            }
            other => {
                return Err(format!(
                    "unknown kernel kind '{other}' (expected conical, incomplete_legendre, bessel_k or incomplete_bessel)"
                ))
            }
        };
    let results = args
        .par_iter()
        .map(|&a| eval(a))
        .collect::<mehler_fock::Result<Vec<_>>>();
    let results = lib(results)?;
    let rows: Vec<_> = args.iter().zip(&results).map(|(&a, r)| (a, r.value)).collect();
    emit(o.output.as_deref(), &csv(header, &rows))?;
    Ok(status_of(results.iter().map(|r| r.converged)))
}

fn coefficients(o: &Options) -> CmdResult<mehler_fock::CoefficientSequence> {
    let path = o.coeffs.as_ref().ok_or("--coeffs is required")?;
    let residual = match &o.tail_l1 {
        Some(s) => parse::finite(s)?,
        None => 0.0,
    };
    files::read_coefficients(path, residual)
}

#[derive(DeriveSerialize)]
struct TailRow {
    x: Num,
    tail_bound: Num,
    error_estimate: Num,
    converged: bool,
}

#[derive(DeriveSerialize)]
struct TailReport {
    mu: Cplx,
    terms: usize,
    l1_norm: Num,
    tail_l1: Num,
    rows: Vec<TailRow>,
}

pub fn forward(o: &Options) -> CmdResult<Status> {
    let a = coefficients(o)?;
    let mut tc = transform_config(o)?;
    if o.n_max.is_none() {
        tc.n_max = (a.len() as u32).max(1);
    }
    let mu = mu_broad(o)?;
    let xs = x_grid(o)?;
    let values = xs
        .par_iter()
        .map(|&x| forward_series(&a, &mu, x, &tc))
        .collect::<mehler_fock::Result<Vec<_>>>();
    let values = lib(values)?;
    let rows: Vec<_> = xs.iter().zip(&values).map(|(&x, v)| (x, v.value)).collect();
    emit(o.output.as_deref(), &csv("x,re,im", &rows))?;
    let companion: Option<PathBuf> = o.tail_output.clone().or_else(|| {
        o.output.as_ref().map(|p| {
            let mut s = p.clone().into_os_string();
            s.push(".tail.json");
            PathBuf::from(s)
        })
    });
    let terms = values.first().map_or(a.len().min(tc.n_max as usize), |v| v.terms);
    let report = TailReport {
        mu: Cplx(mu.value()),
        terms,
        l1_norm: Num(a.l1_norm()),
        tail_l1: Num(a.tail_l1(terms)),
        rows: xs
            .iter()
            .zip(&values)
            .map(|(&x, v)| TailRow {
                x: Num(x),
                tail_bound: Num(v.tail_bound),
                error_estimate: Num(v.error_estimate),
                converged: v.converged,
            })
            .collect(),
    };
    if let Some(path) = companion {
        emit(Some(&path), &json(&report))?;
    }
    Ok(status_of(values.iter().map(|v| v.converged)))
}

#[derive(DeriveSerialize)]
struct CoefficientRow {
    n: u32,
    re: Num,
    im: Num,
    error_estimate: Num,
}

pub fn invert(o: &Options) -> CmdResult<Status> {
    let mu = mu_broad(o)?;
    let results: Vec<(u32, IntegralResult)> = match (&o.coeffs, &o.spec) {
        (Some(_), Some(_)) => return Err("give either --coeffs or --spec, not both".into()),
        (None, None) => return Err("--coeffs (self-test) or --spec is required".into()),
        (Some(_), None) => {
            let a = coefficients(o)?;
            let mut tc = coefficient_config(o)?;
            if o.n_max.is_none() {
                tc.n_max = (a.len() as u32).max(1);
            }
            let ns = match &o.n {
                Some(s) => parse::int_list(s, "n")?,
                None => (1..=tc.n_max).collect(),
            };
            let f = ForwardSeries::new(&a, &mu, &tc);
            let r = ns
                .par_iter()
                .map(|&n| inverse_coefficients(&f, &mu, n, &tc).map(|c| (n, c)))
                .collect::<mehler_fock::Result<Vec<_>>>();
            lib(r)?
        }
        (None, Some(path)) => {
            let spec = files::read_spec(path, mu)?;
            let tc = coefficient_config(o)?;
            let ns = match &o.n {
                Some(s) => parse::int_list(s, "n")?,
                None => (1..=spec.highest_harmonic().max(1)).collect(),
            };
            let r = ns
                .par_iter()
                .map(|&n| coefficient_by_quadrature(&spec, n, &tc).map(|c| (n, c)))
                .collect::<mehler_fock::Result<Vec<_>>>();
            lib(r)?
        }
    };
    let rows: Vec<_> = results
        .iter()
        .map(|(n, c)| CoefficientRow {
            n: *n,
            re: Num(c.value.re),
            im: Num(c.value.im),
            error_estimate: Num(c.error_estimate),
        })
        .collect();
    emit(o.output.as_deref(), &json(&rows))?;
    Ok(status_of(results.iter().map(|(_, c)| c.converged)))
}

pub fn expand(o: &Options) -> CmdResult<Status> {
    let mu = mu_broad(o)?;
    let xs = x_grid(o)?;
    let values: Vec<(Complex64, bool)> = match (&o.coeffs, &o.spec) {
        (Some(_), Some(_)) => return Err("give either --coeffs or --spec, not both".into()),
        (None, None) => return Err("--coeffs or --spec is required".into()),
        (None, Some(path)) => {
            let spec = files::read_spec(path, mu)?;
            let mut tc = coefficient_config(o)?;
            if o.n_max.is_none() {
                tc.n_max = tc.n_max.max(spec.highest_harmonic());
            }
            let r = xs
                .par_iter()
                .map(|&x| expand_function_incomplete(&spec, x, &tc).map(|v| (v.value, v.converged)))
                .collect::<mehler_fock::Result<Vec<_>>>();
            lib(r)?
        }
        (Some(_), None) => {
            lib(mu.require_strict())?;
            let a = coefficients(o)?;
            let mut tc = coefficient_config(o)?;
            if o.n_max.is_none() {
                tc.n_max = (a.len() as u32).max(1);
            }
            let r = xs
                .par_iter()
                .map(|&x| expand_function_complete(&a, &mu, x, &tc).map(|v| (v.value, v.converged)))
                .collect::<mehler_fock::Result<Vec<_>>>();
            lib(r)?
        }
    };
    let rows: Vec<_> = xs.iter().zip(&values).map(|(&x, v)| (x, v.0)).collect();
    emit(o.output.as_deref(), &csv("x,re,im", &rows))?;
    Ok(status_of(values.iter().map(|v| v.1)))
}

fn reals(s: &Option<String>, default: &[f64]) -> CmdResult<Vec<f64>> {
    match s {
        Some(s) => parse::grid(s, false, false),
        None => Ok(default.to_vec()),
    }
}

fn ints(s: &Option<String>, default: &[u32]) -> CmdResult<Vec<u32>> {
    match s {
        Some(s) => parse::int_list(s, "n"),
        None => Ok(default.to_vec()),
    }
}

fn mus(s: &Option<String>, default: &[Complex64]) -> CmdResult<Vec<Complex64>> {
    match s {
        Some(s) => parse::complex_list(s),
        None => Ok(default.to_vec()),
    }
}

fn re(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// Grids of the selected identities. Without point flags this is the
/// default acceptance grid; any point flag replaces that axis of every
/// selected identity, the other axes keeping their default values.
fn suite_grids(o: &Options, selection: &[IdentityId]) -> CmdResult<SuiteGrids> {
    let point_flags = [&o.mu, &o.n, &o.x, &o.y, &o.t, &o.u, &o.size, &o.gamma];
    let grids = if point_flags.iter().all(|f| f.is_none()) {
        SuiteGrids::default()
    } else {
        let mut g = SuiteGrids::empty();
        for id in selection {
            match id {
                IdentityId::KernelConsistency => {
                    for mu in mus(&o.mu, &[re(0.0), re(0.25), re(-0.3)])? {
                        for n in ints(&o.n, &[1, 2, 3])? {
                            for x in reals(&o.x, &[1.2, 2.0, 5.0, 50.0])? {
                                g.kernel_consistency.push((mu, n, x));
                            }
                        }
                    }
                }
                IdentityId::Laplace => {
                    for mu in mus(&o.mu, &[re(0.0), re(-0.3)])? {
                        for m in ints(&o.n, &[1, 2, 3])? {
                            for y in reals(&o.y, &[0.5, 1.0, 2.0])? {
                                g.laplace.push((mu, m, y));
                            }
                        }
                    }
                }
                IdentityId::Projection => {
                    for mu in mus(&o.mu, &[re(0.0), re(-0.4)])? {
                        for n in ints(&o.n, &[1, 2, 3])? {
                            for t in reals(&o.t, &[0.5, 1.0, 2.0])? {
                                g.projection.push((mu, n, t));
                            }
                        }
                    }
                }
                IdentityId::KontorovichLebedev => {
                    for n in ints(&o.n, &[1, 2])? {
                        for u in reals(&o.u, &[0.5, 1.0, 0.5 * PI])? {
                            g.kl.push((n, u));
                        }
                    }
                }
                IdentityId::Orthogonality => {
                    let size = match &o.size {
                        Some(s) => parse::positive_int(s, "size")? as usize,
                        None => 5,
                    };
                    let defaults = [re(0.0), re(0.3), re(-0.4), Complex64::new(0.2, 0.1)];
                    for mu in mus(&o.mu, &defaults)? {
                        g.orthogonality.push((mu, size));
                    }
                }
                IdentityId::FockFactor => g.factor = ints(&o.n, &(1..=10).collect::<Vec<_>>())?,
                IdentityId::DecayBound => {
                    let gamma = match &o.gamma {
                        Some(s) => parse::finite(s)?,
                        None => 0.25,
                    };
                    let ts = reals(&o.t, &[0.01, 0.1, 1.0, 10.0, 100.0])?;
                    for mu in mus(&o.mu, &[re(0.0)])? {
                        g.decay.push((mu, gamma, ts.clone()));
                    }
                }
            }
        }
        g
    };
    for &(mu, _) in &grids.orthogonality {
        lib(MuParameter::strict(mu))?;
    }
    let broad = grids
        .kernel_consistency
        .iter()
        .chain(&grids.laplace)
        .chain(&grids.projection)
        .map(|p| p.0)
        .chain(grids.decay.iter().map(|d| d.0));
    for mu in broad {
        lib(MuParameter::broad(mu))?;
    }
    Ok(grids)
}

struct Params<'a>(&'a [(&'static str, ParamValue)]);

impl Serialize for Params<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            match *v {
                ParamValue::Int(i) => m.serialize_entry(k, &i)?,
                ParamValue::Real(x) => m.serialize_entry(k, &Num(x))?,
                ParamValue::Complex(z) => m.serialize_entry(k, &Cplx(z))?,
            }
        }
        m.end()
    }
}

#[derive(DeriveSerialize)]
struct ReportEntry<'a> {
    id: &'static str,
    params: Params<'a>,
    lhs: Cplx,
    rhs: Cplx,
    abs_err: Num,
    rel_err: Num,
    passed: bool,
    threshold: Num,
    #[serde(skip_serializing_if = "str::is_empty")]
    note: &'a str,
}

#[derive(DeriveSerialize)]
struct Summary {
    total: usize,
    passed: usize,
}

#[derive(DeriveSerialize)]
struct VerifyReport<'a> {
    suite_version: &'static str,
    identities: Vec<ReportEntry<'a>>,
    summary: Summary,
}

pub fn run_verification(o: &Options) -> CmdResult<Vec<IdentityReport>> {
    let tc = transform_config(o)?;
    let selection = match &o.select {
        Some(s) => parse::selection(s)?,
        None => IdentityId::ALL.to_vec(),
    };
    let threshold = match &o.threshold {
        Some(s) => {
            let t = parse::finite(s)?;
            if t < 0.0 {
                return Err("threshold must be >= 0".into());
            }
            Some(t)
        }
        None => None,
    };
    let grids = suite_grids(o, &selection)?;
    let mb = default_suite_mellin(&tc);
    let jobs = suite_jobs(&selection, &grids);
    let mut reports: Vec<IdentityReport> = jobs
        .par_iter()
        .map(|job| job.run(&tc, &mb))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    if let Some(t) = threshold {
        let t = Thresholds::uniform(t);
        for r in &mut reports {
            r.rejudge(&t);
        }
    }
    Ok(reports)
}

pub fn verify(o: &Options) -> CmdResult<Status> {
    let reports = run_verification(o)?;
    let (total, passed) = summarize(&reports);
    let doc = VerifyReport {
        suite_version: SUITE_VERSION,
        identities: reports
            .iter()
            .map(|r| ReportEntry {
                id: r.id.as_str(),
                params: Params(&r.params),
                lhs: Cplx(r.lhs),
                rhs: Cplx(r.rhs),
                abs_err: Num(r.abs_err),
                rel_err: Num(r.rel_err),
                passed: r.passed,
                threshold: Num(r.threshold),
                note: &r.note,
            })
            .collect(),
        summary: Summary { total, passed },
    };
    emit(o.output.as_deref(), &json(&doc))?;
    eprintln!("verify: {passed}/{total} passed");
    for r in reports.iter().filter(|r| !r.passed) {
        eprintln!("  FAILED {} {:?} rel_err={:e} threshold={:e} {}", r.id, r.params, r.rel_err, r.threshold, r.note);
    }
    Ok(if passed == total {
        Status::Ok
    } else {
        Status::VerificationFailed
    })
}


//! Executable checks of the closed-form identities behind the transforms.
//!
//! Each check computes both sides of one identity by code paths that share
//! no quadrature call and records the outcome as an [`IdentityReport`].
//! `rel_err` is the observed discrepancy plus the quadrature error estimates
//! of the computed sides, divided by the size of the target, so a report
//! only passes when the integrals were resolved well enough to decide it.
//!
//! Identities checked, with `P_n = P^μ_{in−1/2}`:
//!
//! | id | statement |
//! |----|-----------|
//! | `laplace_2_6` | `∫_1^∞ (x²−1)^{−μ/2} e^{−yx} P_m(x) dx = √(2/π) y^{μ−1/2} K_{im}(y)` |
//! | `orthogonality_2_13` | `∫_1^∞ P_n(x) P_m(x, π) dx = δ_{nm} π / (n sinh(πn) Γ(1/2+in−μ) Γ(1/2−in−μ))` |
//! | `projection_2_18` | `∫_1^∞ P_n(x) (x²−1)^{−μ/2} (x + cosh t)^{μ−3/2} dx = √(2π) sin(nt) / (Γ(3/2−μ) sinh t sinh(πn))` |
//! | `kl_2_23` | `∫_0^∞ e^{−y cosh u} K_{in}(y) dy = π sin(nu) / (sinh u sinh(πn))` |
//! | `factor_2_12` | `(n/π) sinh(πn) Γ(1/2+in) Γ(1/2−in) = n tanh(πn)` |
//! | `kernel_consistency` | Mehler, semi-infinite and Mellin-Barnes routes agree |
//! | `decay_2_5` | `|P^μ_{−1/2}(2t+1)| ≤ C_μ t^{−γ} (1+t)^{−Re μ/2}` |

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::Cell;
use core::f64::consts::{FRAC_2_PI, PI};

use num_complex::Complex64;
#[allow(unused_imports)] // inherent methods take over when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_semi_infinite, DecayHint, IntegralResult, QuadratureConfig};
use crate::specfun::{
    bessel_k_imag_scaled, complex_gamma, compute_decay_bound, conical_kernel_shifted,
    conical_legendre_shifted, conical_mehler_shifted, ln_gamma, mellin_barnes_legendre,
    pair_weighted_incomplete_shifted, KernelDegree, MellinBarnesConfig, MuParameter,
};
use crate::transform::{
    ln_sinh_pi, project_with_tail, Tail, TransformConfig, TransformInput,
};

/// Identity checked by a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityId {
    Laplace,
    Orthogonality,
    Projection,
    KontorovichLebedev,
    FockFactor,
    KernelConsistency,
    DecayBound,
}

impl IdentityId {
    /// Every identity, in suite order.
    pub const ALL: [IdentityId; 7] = [
        IdentityId::KernelConsistency,
        IdentityId::Laplace,
        IdentityId::Projection,
        IdentityId::KontorovichLebedev,
        IdentityId::Orthogonality,
        IdentityId::FockFactor,
        IdentityId::DecayBound,
    ];

    /// Identifier used in reports.
    pub fn as_str(&self) -> &'static str {
        match self {
            IdentityId::Laplace => "laplace_2_6",
            IdentityId::Orthogonality => "orthogonality_2_13",
            IdentityId::Projection => "projection_2_18",
            IdentityId::KontorovichLebedev => "kl_2_23",
            IdentityId::FockFactor => "factor_2_12",
            IdentityId::KernelConsistency => "kernel_consistency",
            IdentityId::DecayBound => "decay_2_5",
        }
    }

    pub fn parse(s: &str) -> Option<IdentityId> {
        IdentityId::ALL.iter().copied().find(|id| id.as_str() == s)
    }
}

impl core::fmt::Display for IdentityId {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One named input of a report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamValue {
    Int(i64),
    Real(f64),
    Complex(Complex64),
}

/// How `rel_err` is formed and judged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    /// Relative to `|rhs|`.
    Relative,
    /// The target is exactly zero; the error is taken against a fixed scale.
    ZeroTarget,
    /// `lhs ≤ rhs`; `rel_err` is the relative excess, judged against zero.
    UpperBound,
}

/// Pass thresholds on `rel_err`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// Single integrals (Laplace and Kontorovich-Lebedev identities).
    pub single_integral: f64,
    /// Integrals of singular or oscillatory products (projection identity).
    pub product_integral: f64,
    /// Orthogonality matrix entries.
    pub orthogonality: f64,
    pub factor: f64,
    /// Largest pairwise difference between kernel routes.
    pub kernel_consistency: f64,
    /// Absolute bound on the projection integral where `sin(nt) = 0`.
    pub projection_zero: f64,
    /// Absolute bound on the Kontorovich-Lebedev integral where `sin(nu) = 0`.
    pub kl_zero: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            single_integral: 1e-8,
            product_integral: 1e-7,
            orthogonality: 1e-6,
            factor: 1e-12,
            kernel_consistency: 1e-8,
            projection_zero: 1e-9,
            kl_zero: 1e-10,
        }
    }
}

impl Thresholds {
    /// The same threshold for every identity.
    pub fn uniform(t: f64) -> Self {
        Thresholds {
            single_integral: t,
            product_integral: t,
            orthogonality: t,
            factor: t,
            kernel_consistency: t,
            projection_zero: t,
            kl_zero: t,
        }
    }

    pub fn for_report(&self, id: IdentityId, comparison: Comparison) -> f64 {
        match (id, comparison) {
            (_, Comparison::UpperBound) => 0.0,
            (IdentityId::Projection, Comparison::ZeroTarget) => self.projection_zero,
            (IdentityId::KontorovichLebedev, Comparison::ZeroTarget) => self.kl_zero,
            (IdentityId::Laplace | IdentityId::KontorovichLebedev, _) => self.single_integral,
            (IdentityId::Projection, _) => self.product_integral,
            (IdentityId::Orthogonality, _) => self.orthogonality,
            (IdentityId::FockFactor, _) => self.factor,
            (IdentityId::KernelConsistency | IdentityId::DecayBound, _) => {
                self.kernel_consistency
            }
        }
    }
}

/// Outcome of one identity check at one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub id: IdentityId,
    pub params: Vec<(&'static str, ParamValue)>,
    pub lhs: Complex64,
    pub rhs: Complex64,
    /// `|lhs − rhs|`.
    pub abs_err: f64,
    /// `(|lhs − rhs| + quadrature error estimates) / scale`.
    pub rel_err: f64,
    /// Sum of the quadrature error estimates of both sides.
    pub error_estimate: f64,
    pub comparison: Comparison,
    pub threshold: f64,
    pub passed: bool,
    /// Diagnostics: unconverged integrals, intermediate values, errors.
    pub note: String,
}

impl IdentityReport {
    fn new(
        id: IdentityId,
        params: Vec<(&'static str, ParamValue)>,
        lhs: Complex64,
        rhs: Complex64,
        error_estimate: f64,
        comparison: Comparison,
        scale: f64,
    ) -> Self {
        let abs_err = (lhs - rhs).norm();
        let rel_err = match comparison {
            Comparison::UpperBound => {
                ((lhs.norm() + error_estimate - rhs.norm()).max(0.0)) / rhs.norm()
            }
            _ => (abs_err + error_estimate) / scale,
        };
        let mut report = IdentityReport {
            id,
            params,
            lhs,
            rhs,
            abs_err,
            rel_err,
            error_estimate,
            comparison,
            threshold: 0.0,
            passed: false,
            note: String::new(),
        };
        report.rejudge(&Thresholds::default());
        report
    }

    /// A report for a point whose evaluation failed outright.
    fn failed(id: IdentityId, params: Vec<(&'static str, ParamValue)>, err: &Error) -> Self {
        let nan = Complex64::new(f64::NAN, f64::NAN);
        IdentityReport {
            id,
            params,
            lhs: nan,
            rhs: nan,
            abs_err: f64::NAN,
            rel_err: f64::NAN,
            error_estimate: f64::NAN,
            comparison: Comparison::Relative,
            threshold: Thresholds::default().for_report(id, Comparison::Relative),
            passed: false,
            note: format!("{err}"),
        }
    }

    /// Recomputes `threshold` and `passed` under `t`.
    pub fn rejudge(&mut self, t: &Thresholds) {
        self.threshold = t.for_report(self.id, self.comparison);
        self.passed = self.rel_err.is_finite() && self.rel_err <= self.threshold;
    }

    fn with_note(mut self, note: String) -> Self {
        self.note = note;
        self
    }
}

fn mu_param(mu: &MuParameter) -> (&'static str, ParamValue) {
    ("mu", ParamValue::Complex(mu.value()))
}

fn int(name: &'static str, v: u32) -> (&'static str, ParamValue) {
    (name, ParamValue::Int(v as i64))
}

fn real(name: &'static str, v: f64) -> (&'static str, ParamValue) {
    (name, ParamValue::Real(v))
}

fn unconverged(what: &str, r: &IntegralResult, notes: &mut Vec<String>) {
    if !r.converged {
        notes.push(format!("{what} not converged (error estimate {:e})", r.error_estimate));
    }
}

fn join(notes: Vec<String>) -> String {
    notes.join("; ")
}

/// `(x² − 1)^{−μ/2} g(x)` as an input to [`project_with_tail`].
struct Weighted<G: Fn(f64) -> Complex64> {
    mu: Complex64,
    g: G,
    decay: f64,
}

impl<G: Fn(f64) -> Complex64> TransformInput for Weighted<G> {
    fn eval_shifted(&self, u: f64) -> Result<Complex64> {
        let w = (-0.5 * self.mu * (u.ln() + (u + 2.0).ln())).exp();
        Ok(w * (self.g)(u))
    }

    fn decay_power(&self) -> f64 {
        self.decay
    }

    fn endpoint_exponent(&self) -> f64 {
        0.5 * self.mu.re
    }
}

/// `Γ(1/2+im−μ) Γ(1/2−im−μ) P^μ_{im−1/2}(x, π)` as an input.
struct IncompleteKernel {
    mu: Complex64,
    m: u32,
    cfg: QuadratureConfig,
}

impl TransformInput for IncompleteKernel {
    fn eval_shifted(&self, u: f64) -> Result<Complex64> {
        Ok(pair_weighted_incomplete_shifted(self.mu, self.m, u, &self.cfg)?.value)
    }

    fn decay_power(&self) -> f64 {
        1.5
    }

    fn endpoint_exponent(&self) -> f64 {
        (0.5 * self.mu.re).max(0.0)
    }
}

fn check_positive(v: f64, what: &str) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} must be finite and > 0")))
    }
}

/// `∫_1^∞ (x²−1)^{−μ/2} e^{−yx} P^μ_{im−1/2}(x) dx` against
/// `√(2/π) y^{μ−1/2} K_{im}(y)`.
pub fn verify_laplace_identity(
    mu: &MuParameter,
    m: u32,
    y: f64,
    tc: &TransformConfig,
) -> Result<IdentityReport> {
    tc.validate()?;
    check_positive(y, "y")?;
    if m == 0 {
        return Err(Error::domain("m must be >= 1"));
    }
    let mv = mu.value();
    let kcfg = tc.kernel_cfg();
    let route = tc.kernel_route;
    let kernel = |u: f64| conical_kernel_shifted(mv, m as f64, u, route, &kcfg);
    let input = Weighted {
        mu: mv,
        g: |u: f64| Complex64::new((-y * (1.0 + u)).exp(), 0.0),
        decay: 2.0,
    };
    let lhs = project_with_tail(kernel, 0.5 * mv.re, 0.5, &input, f64::INFINITY, Tail::Exponential(y), &tc.cfg)?;

    let k = bessel_k_imag_scaled(m as f64, y, &tc.cfg.for_scaled_result((-y).exp()))?;
    let factor = ((mv - 0.5) * y.ln() - y).exp() * FRAC_2_PI.sqrt();
    let rhs = k.scaled(factor);

    let mut notes = Vec::new();
    unconverged("lhs", &lhs, &mut notes);
    unconverged("rhs", &rhs, &mut notes);
    let params = vec![mu_param(mu), int("m", m), real("y", y)];
    Ok(IdentityReport::new(
        IdentityId::Laplace,
        params,
        lhs.value,
        rhs.value,
        lhs.error_estimate + rhs.error_estimate,
        Comparison::Relative,
        rhs.value.norm(),
    )
    .with_note(join(notes)))
}

/// The matrix `I_{nm} = ∫_1^∞ P^μ_{in−1/2}(x) P^μ_{im−1/2}(x, π) dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalityMatrix {
    pub mu: Complex64,
    pub size: usize,
    /// Row-major, `entries[(n−1)·size + (m−1)] = I_{nm}`.
    pub entries: Vec<Complex64>,
    /// Quadrature error estimate of each entry, same layout.
    pub errors: Vec<f64>,
    /// `π / (n sinh(πn) Γ(1/2+in−μ) Γ(1/2−in−μ))`, `n = 1, …, size`.
    pub diagonal_targets: Vec<Complex64>,
}

impl OrthogonalityMatrix {
    /// `I_{nm}`, 1-based.
    pub fn entry(&self, n: usize, m: usize) -> Complex64 {
        self.entries[(n - 1) * self.size + (m - 1)]
    }

    pub fn largest_diagonal(&self) -> f64 {
        (1..=self.size)
            .map(|k| self.entry(k, k).norm())
            .fold(0.0, f64::max)
    }
}

fn ln_gamma_pair(n: u32, mu: Complex64) -> Result<Complex64> {
    let t = n as f64;
    Ok(ln_gamma(Complex64::new(0.5, t) - mu)? + ln_gamma(Complex64::new(0.5, -t) - mu)?)
}

/// `I_{nm}` for `1 ≤ n, m ≤ size`, the incomplete kernel by its
/// integrated-by-parts form. Needs `|Re μ| < 1/2`.
///
/// Off-diagonal entries are compared with zero on the scale of the largest
/// diagonal entry, diagonal entries with their closed-form targets.
pub fn verify_orthogonality(
    mu: &MuParameter,
    size: usize,
    tc: &TransformConfig,
) -> Result<(OrthogonalityMatrix, Vec<IdentityReport>)> {
    mu.require_strict()?;
    tc.validate()?;
    if size == 0 {
        return Err(Error::domain("matrix size must be >= 1"));
    }
    let mv = mu.value();
    let kcfg = tc.kernel_cfg();
    let route = tc.kernel_route;
    let mut entries = Vec::with_capacity(size * size);
    let mut errors = Vec::with_capacity(size * size);
    let mut notes = Vec::with_capacity(size * size);
    let mut targets = Vec::with_capacity(size);
    for n in 1..=size as u32 {
        let ln_target = -(ln_sinh_pi(n) + ln_gamma_pair(n, mv)?);
        targets.push(ln_target.exp() * (PI / n as f64));
        for m in 1..=size as u32 {
            // The integral carries the gamma pair of the incomplete kernel;
            // dividing it out afterwards rescales the tolerance accordingly.
            let inv_pair = (-ln_gamma_pair(m, mv)?).exp();
            let kernel = |u: f64| conical_kernel_shifted(mv, n as f64, u, route, &kcfg);
            let input = IncompleteKernel { mu: mv, m, cfg: kcfg };
            let r = project_with_tail(
                kernel,
                0.5 * mv.re,
                0.5,
                &input,
                f64::INFINITY,
                Tail::Algebraic,
                &tc.cfg.for_scaled_result(inv_pair.norm()),
            )?
            .scaled(inv_pair);
            let mut note = Vec::new();
            unconverged("entry", &r, &mut note);
            entries.push(r.value);
            errors.push(r.error_estimate);
            notes.push(join(note));
        }
    }
    let matrix = OrthogonalityMatrix {
        mu: mv,
        size,
        entries,
        errors,
        diagonal_targets: targets,
    };
    let scale = matrix.largest_diagonal();
    let mut reports = Vec::with_capacity(size * size);
    let mut notes = notes.into_iter();
    for n in 1..=size {
        for m in 1..=size {
            let k = (n - 1) * size + (m - 1);
            let params = vec![mu_param(mu), int("n", n as u32), int("m", m as u32)];
            let (rhs, comparison, s) = if n == m {
                let t = matrix.diagonal_targets[n - 1];
                (t, Comparison::Relative, t.norm())
            } else {
                (Complex64::new(0.0, 0.0), Comparison::ZeroTarget, scale)
            };
            reports.push(
                IdentityReport::new(
                    IdentityId::Orthogonality,
                    params,
                    matrix.entries[k],
                    rhs,
                    matrix.errors[k],
                    comparison,
                    s,
                )
                .with_note(notes.next().unwrap_or_default()),
            );
        }
    }
    Ok((matrix, reports))
}

/// `∫_1^∞ P^μ_{in−1/2}(x) (x²−1)^{−μ/2} (x + cosh t)^{μ−3/2} dx` against
/// `√(2π) sin(nt) / (Γ(3/2−μ) sinh t sinh(πn))`.
pub fn verify_projection_identity(
    mu: &MuParameter,
    n: u32,
    t: f64,
    tc: &TransformConfig,
) -> Result<IdentityReport> {
    tc.validate()?;
    check_positive(t, "t")?;
    if n == 0 {
        return Err(Error::domain("n must be >= 1"));
    }
    let mv = mu.value();
    let kcfg = tc.kernel_cfg();
    let route = tc.kernel_route;
    let kernel = |u: f64| conical_kernel_shifted(mv, n as f64, u, route, &kcfg);
    let c = t.cosh();
    let input = Weighted {
        mu: mv,
        g: |u: f64| ((mv - 1.5) * (1.0 + u + c).ln()).exp(),
        decay: 1.5,
    };
    let scale = ln_sinh_pi(n).exp();
    let lhs = project_with_tail(
        kernel,
        0.5 * mv.re,
        0.5,
        &input,
        f64::INFINITY,
        Tail::Algebraic,
        &tc.cfg.for_scaled_result(scale),
    )?;

    let sin_nt = (n as f64 * t).sin();
    let zero = is_sine_zero(n, t);
    let rhs = if zero {
        Complex64::new(0.0, 0.0)
    } else {
        (2.0 * PI).sqrt() * sin_nt / (complex_gamma(1.5 - mv)? * t.sinh() * scale)
    };

    let mut notes = Vec::new();
    unconverged("lhs", &lhs, &mut notes);
    let (comparison, s) = if zero {
        (Comparison::ZeroTarget, 1.0)
    } else {
        (Comparison::Relative, rhs.norm())
    };
    let params = vec![mu_param(mu), int("n", n), real("t", t)];
    Ok(IdentityReport::new(
        IdentityId::Projection,
        params,
        lhs.value,
        rhs,
        lhs.error_estimate,
        comparison,
        s,
    )
    .with_note(join(notes)))
}

/// `sin(n·t) = 0` up to the rounding of `t`: `n·t` within a few ulps of a
/// multiple of π.
fn is_sine_zero(n: u32, t: f64) -> bool {
    let k = (n as f64 * t / PI).round();
    k != 0.0 && (n as f64 * t - k * PI).abs() <= 8.0 * f64::EPSILON * n as f64 * t
}

/// `∫_0^∞ e^{−y cosh u} K_{in}(y) dy` by iterated quadrature against
/// `π sin(nu) / (sinh u sinh(πn))`. The inner Bessel integrals run 100×
/// tighter than the outer one.
pub fn verify_kl_identity(n: u32, u: f64, tc: &TransformConfig) -> Result<IdentityReport> {
    tc.validate()?;
    check_positive(u, "u")?;
    if n == 0 {
        return Err(Error::domain("n must be >= 1"));
    }
    let tau = n as f64;
    let c = u.cosh();
    let scale = ln_sinh_pi(n).exp();
    let outer = tc.cfg.for_scaled_result(scale);
    let inner = outer.tightened(100.0);
    let inner_ok = Cell::new(true);
    let inner_err = Cell::new(0.0_f64);
    let failure: Cell<Option<Error>> = Cell::new(None);

    // w · K_{in}(y) with K taken from its scaled form; returns the value and
    // tracks w-weighted inner errors.
    let weighted_k = |y: f64, ln_w: f64| -> Complex64 {
        let w = (ln_w - y).exp();
        match bessel_k_imag_scaled(tau, y, &inner.for_scaled_result(w)) {
            Ok(k) => {
                if !k.converged {
                    inner_ok.set(false);
                }
                inner_err.set(inner_err.get().max(k.error_estimate * w));
                k.value * w
            }
            Err(e) => {
                failure.set(Some(e));
                Complex64::new(f64::NAN, f64::NAN)
            }
        }
    };
    // y ∈ (0, 1] as y = e^{−v}: the Jacobian e^{−v} gives decay at rate 1.
    let near = integrate_semi_infinite(
        |v: f64| {
            let y = (-v).exp();
            weighted_k(y, -v - y * c)
        },
        0.0,
        DecayHint::Exponential { rate: 1.0 },
        &outer,
    )?;
    let near_inner = inner_err.replace(0.0);
    // y ∈ [1, ∞): |K_{in}(y)| ≤ K_0(y) ≤ e^{−y}, so the integrand falls at rate cosh u + 1.
    let far = integrate_semi_infinite(
        |y: f64| weighted_k(y, -y * c),
        1.0,
        DecayHint::Exponential { rate: c + 1.0 },
        &outer,
    )?;
    let far_inner = inner_err.get() / (c + 1.0);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let lhs = near.combine(far);

    let zero = is_sine_zero(n, u);
    let rhs = if zero {
        0.0
    } else {
        PI * (tau * u).sin() / (u.sinh() * scale)
    };
    let mut notes = Vec::new();
    unconverged("lhs", &lhs, &mut notes);
    if !inner_ok.get() {
        notes.push(String::from("inner Bessel integral not converged"));
    }
    let (comparison, s) = if zero {
        (Comparison::ZeroTarget, 1.0)
    } else {
        (Comparison::Relative, rhs.abs())
    };
    let params = vec![int("n", n), real("u", u)];
    Ok(IdentityReport::new(
        IdentityId::KontorovichLebedev,
        params,
        lhs.value,
        Complex64::new(rhs, 0.0),
        lhs.error_estimate + near_inner + far_inner,
        comparison,
        s,
    )
    .with_note(join(notes)))
}

/// `(n/π) sinh(πn) Γ(1/2+in) Γ(1/2−in)` against `n tanh(πn)`, the gamma
/// values from [`complex_gamma`] and the hyperbolic sine applied in
/// logarithmic form.
pub fn verify_fock_factor(n: u32) -> Result<IdentityReport> {
    if n == 0 {
        return Err(Error::domain("n must be >= 1"));
    }
    let t = n as f64;
    let g = complex_gamma(Complex64::new(0.5, t))? * complex_gamma(Complex64::new(0.5, -t))?;
    let ln_lhs = g.ln() + ln_sinh_pi(n) + (t / PI).ln();
    let lhs = ln_lhs.exp();
    let rhs = Complex64::new(t * (PI * t).tanh(), 0.0);
    Ok(IdentityReport::new(
        IdentityId::FockFactor,
        vec![int("n", n)],
        lhs,
        rhs,
        0.0,
        Comparison::Relative,
        rhs.norm(),
    ))
}

/// `P^μ_{in−1/2}(x)` by the Mehler, semi-infinite and Mellin-Barnes routes.
/// `lhs` is the Mehler value, `rhs` the Mellin-Barnes value; `rel_err` is the
/// largest of the three pairwise relative differences.
pub fn verify_kernel_consistency(
    mu: &MuParameter,
    n: u32,
    x: f64,
    tc: &TransformConfig,
    mb: &MellinBarnesConfig,
) -> Result<IdentityReport> {
    tc.validate()?;
    if !(x.is_finite() && x > 1.0) {
        return Err(Error::domain("x must be > 1"));
    }
    let mv = mu.value();
    let u = x - 1.0;
    let tau = n as f64;
    let mehler = conical_mehler_shifted(mv, tau, u, &tc.cfg)?;
    let legendre = conical_legendre_shifted(mv, tau, u, &tc.cfg)?;
    let barnes = mellin_barnes_legendre(mu, KernelDegree::Discrete(n), 0.5 * u, mb)?;

    let mut notes = Vec::new();
    unconverged("mehler", &mehler, &mut notes);
    unconverged("legendre", &legendre, &mut notes);
    unconverged("mellin_barnes", &barnes, &mut notes);
    notes.push(format!(
        "legendre = {:e}{:+e}i",
        legendre.value.re, legendre.value.im
    ));
    let routes = [mehler, legendre, barnes];
    let mut worst = 0.0_f64;
    let mut worst_abs = 0.0_f64;
    for i in 0..3 {
        for j in (i + 1)..3 {
            let (a, b) = (routes[i], routes[j]);
            let diff = (a.value - b.value).norm();
            let size = a.value.norm().max(b.value.norm());
            worst_abs = worst_abs.max(diff);
            worst = worst.max((diff + a.error_estimate + b.error_estimate) / size);
        }
    }
    let params = vec![mu_param(mu), int("n", n), real("x", x)];
    let mut report = IdentityReport::new(
        IdentityId::KernelConsistency,
        params,
        mehler.value,
        barnes.value,
        0.0,
        Comparison::Relative,
        1.0,
    );
    report.abs_err = worst_abs;
    report.rel_err = worst;
    report.error_estimate = mehler.error_estimate + legendre.error_estimate + barnes.error_estimate;
    report.rejudge(&Thresholds::default());
    Ok(report.with_note(join(notes)))
}

/// `|P^μ_{−1/2}(2t+1)|` against `C_μ t^{−γ} (1+t)^{−Re μ/2}` at each `t`,
/// with `C_μ` computed once from its contour integral.
pub fn verify_decay_bound(
    mu: &MuParameter,
    gamma_exponent: f64,
    ts: &[f64],
    tc: &TransformConfig,
    mb: &MellinBarnesConfig,
) -> Result<Vec<IdentityReport>> {
    tc.validate()?;
    let bound = compute_decay_bound(mu, gamma_exponent, mb)?;
    let mut out = Vec::with_capacity(ts.len());
    for &t in ts {
        check_positive(t, "t")?;
        let p = conical_kernel_shifted(mu.value(), 0.0, 2.0 * t, tc.kernel_route, &tc.cfg)?;
        let rhs = bound.bound(t);
        let mut notes = Vec::new();
        unconverged("kernel", &p, &mut notes);
        let params = vec![mu_param(mu), real("gamma", gamma_exponent), real("t", t)];
        // The bound is loosened by the error in C_μ; the kernel is tightened by its own.
        let rhs_low = rhs - bound.error_estimate * rhs / bound.c_mu;
        let mut report = IdentityReport::new(
            IdentityId::DecayBound,
            params,
            Complex64::new(p.value.norm(), 0.0),
            Complex64::new(rhs_low, 0.0),
            p.error_estimate,
            Comparison::UpperBound,
            1.0,
        );
        report.rhs = Complex64::new(rhs, 0.0);
        out.push(report.with_note(join(notes)));
    }
    Ok(out)
}

/// Parameter grids for [`run_suite`]. Complex orders are validated when the
/// suite runs; an invalid point yields a failed report.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteGrids {
    /// `(μ, n, x)`.
    pub kernel_consistency: Vec<(Complex64, u32, f64)>,
    /// `(μ, m, y)`.
    pub laplace: Vec<(Complex64, u32, f64)>,
    /// `(μ, n, t)`.
    pub projection: Vec<(Complex64, u32, f64)>,
    /// `(n, u)`.
    pub kl: Vec<(u32, f64)>,
    /// `(μ, N)`; each point yields `N²` reports.
    pub orthogonality: Vec<(Complex64, usize)>,
    pub factor: Vec<u32>,
    /// `(μ, γ, t values)`.
    pub decay: Vec<(Complex64, f64, Vec<f64>)>,
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

impl Default for SuiteGrids {
    fn default() -> Self {
        let mut kernel_consistency = Vec::new();
        for mu in [0.0, 0.25, -0.3] {
            for n in 1..=3 {
                for x in [1.2, 2.0, 5.0, 50.0] {
                    kernel_consistency.push((re(mu), n, x));
                }
            }
        }
        let mut laplace = Vec::new();
        for mu in [0.0, -0.3] {
            for m in 1..=3 {
                for y in [0.5, 1.0, 2.0] {
                    laplace.push((re(mu), m, y));
                }
            }
        }
        let mut projection = Vec::new();
        for mu in [0.0, -0.4] {
            for n in 1..=3 {
                for t in [0.5, 1.0, 2.0] {
                    projection.push((re(mu), n, t));
                }
            }
        }
        projection.push((re(0.0), 2, 0.5 * PI));
        let mut kl = Vec::new();
        for n in 1..=2 {
            for u in [0.5, 1.0, 0.5 * PI] {
                kl.push((n, u));
            }
        }
        SuiteGrids {
            kernel_consistency,
            laplace,
            projection,
            kl,
            orthogonality: vec![
                (re(0.0), 5),
                (re(0.3), 5),
                (re(-0.4), 5),
                (Complex64::new(0.2, 0.1), 5),
            ],
            factor: (1..=10).collect(),
            decay: vec![(re(0.0), 0.25, vec![0.01, 0.1, 1.0, 10.0, 100.0])],
        }
    }
}

impl SuiteGrids {
    /// Grids with every list empty.
    pub fn empty() -> Self {
        SuiteGrids {
            kernel_consistency: Vec::new(),
            laplace: Vec::new(),
            projection: Vec::new(),
            kl: Vec::new(),
            orthogonality: Vec::new(),
            factor: Vec::new(),
            decay: Vec::new(),
        }
    }
}

/// One independent unit of suite work.
#[derive(Debug, Clone, PartialEq)]
pub enum SuiteJob {
    KernelConsistency { mu: Complex64, n: u32, x: f64 },
    Laplace { mu: Complex64, m: u32, y: f64 },
    Projection { mu: Complex64, n: u32, t: f64 },
    KontorovichLebedev { n: u32, u: f64 },
    Orthogonality { mu: Complex64, size: usize },
    FockFactor { n: u32 },
    DecayBound { mu: Complex64, gamma: f64, ts: Vec<f64> },
}

/// Jobs for `selection` in selection order, each grid in its own order.
pub fn suite_jobs(selection: &[IdentityId], grids: &SuiteGrids) -> Vec<SuiteJob> {
    let mut jobs = Vec::new();
    for id in selection {
        match id {
            IdentityId::KernelConsistency => jobs.extend(
                grids
                    .kernel_consistency
                    .iter()
                    .map(|&(mu, n, x)| SuiteJob::KernelConsistency { mu, n, x }),
            ),
            IdentityId::Laplace => jobs.extend(
                grids
                    .laplace
                    .iter()
                    .map(|&(mu, m, y)| SuiteJob::Laplace { mu, m, y }),
            ),
            IdentityId::Projection => jobs.extend(
                grids
                    .projection
                    .iter()
                    .map(|&(mu, n, t)| SuiteJob::Projection { mu, n, t }),
            ),
            IdentityId::KontorovichLebedev => jobs.extend(
                grids
                    .kl
                    .iter()
                    .map(|&(n, u)| SuiteJob::KontorovichLebedev { n, u }),
            ),
            IdentityId::Orthogonality => jobs.extend(
                grids
                    .orthogonality
                    .iter()
                    .map(|&(mu, size)| SuiteJob::Orthogonality { mu, size }),
            ),
            IdentityId::FockFactor => {
                jobs.extend(grids.factor.iter().map(|&n| SuiteJob::FockFactor { n }))
            }
            IdentityId::DecayBound => jobs.extend(grids.decay.iter().map(|(mu, gamma, ts)| {
                SuiteJob::DecayBound {
                    mu: *mu,
                    gamma: *gamma,
                    ts: ts.clone(),
                }
            })),
        }
    }
    jobs
}

impl SuiteJob {
    pub fn id(&self) -> IdentityId {
        match self {
            SuiteJob::KernelConsistency { .. } => IdentityId::KernelConsistency,
            SuiteJob::Laplace { .. } => IdentityId::Laplace,
            SuiteJob::Projection { .. } => IdentityId::Projection,
            SuiteJob::KontorovichLebedev { .. } => IdentityId::KontorovichLebedev,
            SuiteJob::Orthogonality { .. } => IdentityId::Orthogonality,
            SuiteJob::FockFactor { .. } => IdentityId::FockFactor,
            SuiteJob::DecayBound { .. } => IdentityId::DecayBound,
        }
    }

    fn params(&self) -> Vec<(&'static str, ParamValue)> {
        let c = |mu: Complex64| ("mu", ParamValue::Complex(mu));
        match *self {
            SuiteJob::KernelConsistency { mu, n, x } => vec![c(mu), int("n", n), real("x", x)],
            SuiteJob::Laplace { mu, m, y } => vec![c(mu), int("m", m), real("y", y)],
            SuiteJob::Projection { mu, n, t } => vec![c(mu), int("n", n), real("t", t)],
            SuiteJob::KontorovichLebedev { n, u } => vec![int("n", n), real("u", u)],
            SuiteJob::Orthogonality { mu, size } => vec![c(mu), int("N", size as u32)],
            SuiteJob::FockFactor { n } => vec![int("n", n)],
            SuiteJob::DecayBound { mu, gamma, .. } => vec![c(mu), real("gamma", gamma)],
        }
    }

    /// Runs the job. The Mellin-Barnes contour at degree `n` is cut at
    /// height `mb.truncation_height + n`. Errors become failed reports.
    pub fn run(&self, tc: &TransformConfig, mb: &MellinBarnesConfig) -> Vec<IdentityReport> {
        let out = match *self {
            SuiteJob::KernelConsistency { mu, n, x } => MuParameter::broad(mu).and_then(|mu| {
                let mb = MellinBarnesConfig {
                    truncation_height: mb.truncation_height + n as f64,
                    ..*mb
                };
                verify_kernel_consistency(&mu, n, x, tc, &mb).map(|r| vec![r])
            }),
            SuiteJob::Laplace { mu, m, y } => MuParameter::broad(mu)
                .and_then(|mu| verify_laplace_identity(&mu, m, y, tc).map(|r| vec![r])),
            SuiteJob::Projection { mu, n, t } => MuParameter::broad(mu)
                .and_then(|mu| verify_projection_identity(&mu, n, t, tc).map(|r| vec![r])),
            SuiteJob::KontorovichLebedev { n, u } => verify_kl_identity(n, u, tc).map(|r| vec![r]),
            SuiteJob::Orthogonality { mu, size } => MuParameter::strict(mu)
                .and_then(|mu| verify_orthogonality(&mu, size, tc).map(|(_, r)| r)),
            SuiteJob::FockFactor { n } => verify_fock_factor(n).map(|r| vec![r]),
            SuiteJob::DecayBound { mu, gamma, ref ts } => MuParameter::broad(mu)
                .and_then(|mu| verify_decay_bound(&mu, gamma, ts, tc, mb)),
        };
        out.unwrap_or_else(|e| vec![IdentityReport::failed(self.id(), self.params(), &e)])
    }
}

/// Runs every job of `selection` over `grids` in order. Deterministic: the
/// same inputs give bit-identical reports.
pub fn run_suite(
    selection: &[IdentityId],
    grids: &SuiteGrids,
    tc: &TransformConfig,
    mb: &MellinBarnesConfig,
) -> Vec<IdentityReport> {
    suite_jobs(selection, grids)
        .iter()
        .flat_map(|job| job.run(tc, mb))
        .collect()
}

/// The Mellin-Barnes settings the suite uses by default: `γ = 1/4` and a
/// contour cut `40` above the degree.
pub fn default_suite_mellin(tc: &TransformConfig) -> MellinBarnesConfig {
    MellinBarnesConfig::for_degree(0.0, tc.cfg)
}

/// `(total, passed)`.
pub fn summarize(reports: &[IdentityReport]) -> (usize, usize) {
    (reports.len(), reports.iter().filter(|r| r.passed).count())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tc() -> TransformConfig {
        TransformConfig::default()
    }

    #[test]
    fn ids_round_trip() {
        for id in IdentityId::ALL {
            assert_eq!(IdentityId::parse(id.as_str()), Some(id));
        }
        assert_eq!(IdentityId::parse("nope"), None);
    }

    #[test]
    fn factor_small_n() {
        for n in [1, 3] {
            let r = verify_fock_factor(n).unwrap();
            assert!(r.rel_err <= 1e-13, "{r:?}");
            assert!(r.passed);
        }
        assert!(verify_fock_factor(0).is_err());
    }

    #[test]
    fn empty_selection_is_empty() {
        let t = tc();
        assert!(run_suite(&[], &SuiteGrids::default(), &t, &default_suite_mellin(&t)).is_empty());
    }

    #[test]
    fn single_point_suite() {
        let t = tc();
        let grids = SuiteGrids {
            factor: vec![1],
            ..SuiteGrids::empty()
        };
        let r = run_suite(&[IdentityId::FockFactor], &grids, &t, &default_suite_mellin(&t));
        assert_eq!(r.len(), 1);
        assert!(r[0].passed);
    }

    #[test]
    fn invalid_point_becomes_failed_report() {
        let t = tc();
        let grids = SuiteGrids {
            laplace: vec![(re(0.7), 1, 1.0)],
            ..SuiteGrids::empty()
        };
        let r = run_suite(&[IdentityId::Laplace], &grids, &t, &default_suite_mellin(&t));
        assert_eq!(r.len(), 1);
        assert!(!r[0].passed);
        assert!(r[0].note.contains("Re mu must be < 1/2"), "{}", r[0].note);
    }

    #[test]
    fn rejudge_with_unattainable_threshold() {
        let mut r = verify_fock_factor(2).unwrap();
        r.rejudge(&Thresholds::uniform(1e-30));
        assert!(!r.passed || r.rel_err == 0.0);
    }

    #[test]
    fn sine_zero_detection() {
        assert!(is_sine_zero(2, 0.5 * PI));
        assert!(is_sine_zero(1, PI));
        assert!(!is_sine_zero(1, 0.5 * PI));
        assert!(!is_sine_zero(3, 0.5));
    }

    #[test]
    fn kl_rejects_zero_u() {
        assert!(verify_kl_identity(1, 0.0, &tc()).is_err());
    }
}

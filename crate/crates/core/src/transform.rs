//! The discrete Mehler-Fock transform pair, its dual, and the function
//! expansions they produce.
//!
//! Forward synthesis
//!
//! ```text
//! F(x) = Σ_{m≥1} a_m P^μ_{im−1/2}(x)
//! ```
//!
//! is inverted by
//!
//! ```text
//! a_n = (n/π) sinh(πn) Γ(1/2+in−μ) Γ(1/2−in−μ) ∫_1^∞ P^μ_{in−1/2}(x, π) F(x) dx.
//! ```
//!
//! The product `Γ(1/2+in−μ) Γ(1/2−in−μ) P^μ_{in−1/2}(x, π)` is always formed
//! as one quantity (see [`pair_weighted_incomplete_shifted`]), and the outer
//! tolerances are rescaled by `(n/π) sinh(πn)` so that they apply to `a_n`
//! rather than to the exponentially small integral.
//!
//! Integrals over `(1, ∞)` are taken in `u = x − 1`: an endpoint-singular
//! piece on `(0, 1)` absorbs the `(x − 1)^{−Re μ/2}` behaviour of each kernel,
//! and an algebraic-decay piece covers `(1, ∞)`.

use alloc::format;
use alloc::vec::Vec;
use core::cell::{Cell, RefCell};
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent methods take over when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::quadrature::{
    endpoint_singular_pieces, integrate_partitioned, integrate_semi_infinite, oscillation_pieces,
    semi_infinite_algebraic, uniform_partition, DecayHint, Endpoint, IntegralResult,
    QuadratureConfig,
};
pub use crate::specfun::KernelRoute;
use crate::specfun::{
    complex_gamma, conical_kernel_shifted, kernel_envelope_shifted,
    pair_weighted_incomplete_shifted, MuParameter,
};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Finite-support coefficients `a_1, …, a_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSequence {
    values: Vec<Complex64>,
    l1_norm: f64,
    residual_l1: f64,
}

impl CoefficientSequence {
    /// `values[k]` is `a_{k+1}`.
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        Self::with_residual(values, 0.0)
    }

    /// A sequence cut from a longer one; `residual_l1` bounds `Σ|a_n|` over
    /// the dropped terms and enters every tail bound.
    pub fn with_residual(values: Vec<Complex64>, residual_l1: f64) -> Result<Self> {
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::domain("coefficients must be finite"));
        }
        if !(residual_l1 >= 0.0 && residual_l1.is_finite()) {
            return Err(Error::domain("residual l1 norm must be finite and >= 0"));
        }
        let l1_norm = values.iter().map(|v| v.norm()).sum();
        Ok(CoefficientSequence {
            values,
            l1_norm,
            residual_l1,
        })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `a_n`, zero outside the stored range (and for `n = 0`).
    pub fn get(&self, n: u32) -> Complex64 {
        match n {
            0 => ZERO,
            n => self.values.get(n as usize - 1).copied().unwrap_or(ZERO),
        }
    }

    /// `Σ|a_n|` over the stored entries.
    pub fn l1_norm(&self) -> f64 {
        self.l1_norm
    }

    pub fn residual_l1(&self) -> f64 {
        self.residual_l1
    }

    /// `Σ_{n>m}|a_n|` including the residual of any earlier truncation.
    pub fn tail_l1(&self, m: usize) -> f64 {
        self.values.iter().skip(m).map(|v| v.norm()).sum::<f64>() + self.residual_l1
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        CoefficientSequence {
            values: self.values.iter().map(|&v| v * factor).collect(),
            l1_norm: self.l1_norm * factor.norm(),
            residual_l1: self.residual_l1 * factor.norm(),
        }
    }
}

/// Series truncation, integration range and kernel route shared by every
/// transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformConfig {
    pub n_max: u32,
    /// Upper limit of integrals over `(1, ∞)`; `f64::INFINITY` lets the
    /// algebraic tail bound choose it.
    pub x_max: f64,
    pub cfg: QuadratureConfig,
    pub kernel_route: KernelRoute,
}

impl Default for TransformConfig {
    fn default() -> Self {
        TransformConfig {
            n_max: 20,
            x_max: f64::INFINITY,
            cfg: QuadratureConfig::default(),
            kernel_route: KernelRoute::Auto,
        }
    }
}

impl TransformConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_max < 1 {
            return Err(Error::config("n_max must be at least 1"));
        }
        if !(self.x_max > 1.0) {
            return Err(Error::config("x_max must exceed 1"));
        }
        self.cfg.validate()
    }

    /// Tolerances for kernel evaluations nested inside an outer integral:
    /// 100× tighter, but not below what double precision can deliver.
    pub fn kernel_cfg(&self) -> QuadratureConfig {
        QuadratureConfig {
            abs_tol: self.cfg.abs_tol / 100.0,
            rel_tol: (self.cfg.rel_tol / 100.0).max(1e-14),
            ..self.cfg
        }
    }
}

/// A function on `(1, ∞)` that can be fed to the inversion integrals.
pub trait TransformInput {
    /// `F(1 + u)`, `u > 0`.
    fn eval_shifted(&self, u: f64) -> Result<Complex64>;

    /// `p` with `|F(x)| = O(x^{−p})` as `x → ∞`.
    fn decay_power(&self) -> f64;

    /// `e` with `|F(x)| = O((x − 1)^{−e})` as `x → 1`; zero for bounded `F`.
    fn endpoint_exponent(&self) -> f64;
}

/// `F = Σ_{m ≤ n_max} a_m P^μ_{im−1/2}` as an input to the inversion.
#[derive(Debug, Clone)]
pub struct ForwardSeries<'a> {
    coeffs: &'a CoefficientSequence,
    mu: Complex64,
    route: KernelRoute,
    cfg: QuadratureConfig,
    terms: usize,
}

impl<'a> ForwardSeries<'a> {
    pub fn new(coeffs: &'a CoefficientSequence, mu: &MuParameter, tc: &TransformConfig) -> Self {
        ForwardSeries {
            coeffs,
            mu: mu.value(),
            route: tc.kernel_route,
            cfg: tc.kernel_cfg(),
            terms: coeffs.len().min(tc.n_max as usize),
        }
    }
}

impl TransformInput for ForwardSeries<'_> {
    fn eval_shifted(&self, u: f64) -> Result<Complex64> {
        let mut sum = ZERO;
        for (k, &a) in self.coeffs.values().iter().take(self.terms).enumerate() {
            if a != ZERO {
                let p = conical_kernel_shifted(self.mu, (k + 1) as f64, u, self.route, &self.cfg)?;
                sum += a * p.value;
            }
        }
        Ok(sum)
    }

    fn decay_power(&self) -> f64 {
        0.5
    }

    fn endpoint_exponent(&self) -> f64 {
        (0.5 * self.mu.re).max(0.0)
    }
}

/// The inner series of the dual transform,
/// `G(x) = Σ_m a_m Γ(1/2+im−μ) Γ(1/2−im−μ) P^μ_{im−1/2}(x, π)`.
#[derive(Debug, Clone)]
pub struct DualSeries<'a> {
    coeffs: &'a CoefficientSequence,
    mu: Complex64,
    cfg: QuadratureConfig,
    terms: usize,
}

impl<'a> DualSeries<'a> {
    pub fn new(coeffs: &'a CoefficientSequence, mu: &MuParameter, tc: &TransformConfig) -> Self {
        DualSeries {
            coeffs,
            mu: mu.value(),
            cfg: tc.kernel_cfg(),
            terms: coeffs.len().min(tc.n_max as usize),
        }
    }
}

impl TransformInput for DualSeries<'_> {
    fn eval_shifted(&self, u: f64) -> Result<Complex64> {
        let mut sum = ZERO;
        for (k, &a) in self.coeffs.values().iter().take(self.terms).enumerate() {
            if a != ZERO {
                let w = pair_weighted_incomplete_shifted(self.mu, (k + 1) as u32, u, &self.cfg)?;
                sum += a * w.value;
            }
        }
        Ok(sum)
    }

    fn decay_power(&self) -> f64 {
        1.5
    }

    fn endpoint_exponent(&self) -> f64 {
        (0.5 * self.mu.re).max(0.0)
    }
}

/// Samples of `F` on a grid, interpolated by a natural cubic spline in
/// `ln(x − 1)` and continued past the last point by `x^{−tail_exponent}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: Vec<f64>,
    values: Vec<Complex64>,
    tail_exponent: f64,
    knots: Vec<f64>,
    second: Vec<Complex64>,
}

impl SampledFunction {
    pub fn new(grid: Vec<f64>, values: Vec<Complex64>, tail_exponent: f64) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::domain("grid and values differ in length"));
        }
        if grid.len() < 2 {
            return Err(Error::domain("at least two samples are needed"));
        }
        if !(grid[0] > 1.0) || grid.iter().any(|x| !x.is_finite()) {
            return Err(Error::domain("grid points must be finite and > 1"));
        }
        if grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::domain("grid must be strictly increasing"));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::domain("sample values must be finite"));
        }
        if !tail_exponent.is_finite() {
            return Err(Error::domain("tail exponent must be finite"));
        }
        let knots: Vec<f64> = grid.iter().map(|x| (x - 1.0).ln()).collect();
        let second = natural_spline(&knots, &values);
        Ok(SampledFunction {
            grid,
            values,
            tail_exponent,
            knots,
            second,
        })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn tail_exponent(&self) -> f64 {
        self.tail_exponent
    }

    /// Interpolated `F(x)`.
    pub fn eval(&self, x: f64) -> Result<Complex64> {
        if !(x > 1.0) {
            return Err(Error::domain("x must be > 1"));
        }
        self.eval_shifted(x - 1.0)
    }
}

/// Second derivatives of the natural cubic spline through `(s_j, y_j)`.
fn natural_spline(s: &[f64], y: &[Complex64]) -> Vec<Complex64> {
    let n = s.len();
    let mut m = alloc::vec![ZERO; n];
    if n < 3 {
        return m;
    }
    // Thomas algorithm on the interior equations.
    let mut diag = alloc::vec![0.0; n];
    let mut rhs = alloc::vec![ZERO; n];
    for i in 1..n - 1 {
        let h0 = s[i] - s[i - 1];
        let h1 = s[i + 1] - s[i];
        diag[i] = 2.0 * (h0 + h1);
        rhs[i] = ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0) * 6.0;
        if i > 1 {
            let w = h0 / diag[i - 1];
            diag[i] -= w * h0;
            rhs[i] = rhs[i] - rhs[i - 1] * w;
        }
    }
    for i in (1..n - 1).rev() {
        let h1 = s[i + 1] - s[i];
        m[i] = (rhs[i] - m[i + 1] * h1) / diag[i];
    }
    m
}

impl TransformInput for SampledFunction {
    fn eval_shifted(&self, u: f64) -> Result<Complex64> {
        if !(u > 0.0) {
            return Err(Error::domain("x must be > 1"));
        }
        let last = self.grid.len() - 1;
        let x = 1.0 + u;
        if x >= self.grid[last] {
            return Ok(self.values[last] * (x / self.grid[last]).powf(-self.tail_exponent));
        }
        if x <= self.grid[0] {
            return Ok(self.values[0]);
        }
        let s = u.ln();
        let i = self.knots.partition_point(|&k| k <= s).clamp(1, last) - 1;
        let h = self.knots[i + 1] - self.knots[i];
        let a = (self.knots[i + 1] - s) / h;
        let b = 1.0 - a;
        Ok(self.values[i] * a
            + self.values[i + 1] * b
            + (self.second[i] * (a * a * a - a) + self.second[i + 1] * (b * b * b - b)) * (h * h / 6.0))
    }

    fn decay_power(&self) -> f64 {
        self.tail_exponent
    }

    fn endpoint_exponent(&self) -> f64 {
        0.0
    }
}

/// A 2π-periodic `ψ(u) = c_0 + Σ c_k cos(ku) + Σ b_k sin(ku)` together with
/// the order μ; it induces
///
/// ```text
/// f(t) = (t² − 1)^{−μ/2} ∫_{−π}^{π} ψ(u) sinh(u) (t + cosh u)^{μ−3/2} du.
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSpec {
    /// `sine[k]` is `b_{k+1}`.
    pub sine: Vec<Complex64>,
    /// `cosine[k]` is `c_{k+1}`.
    pub cosine: Vec<Complex64>,
    pub constant: Complex64,
    pub mu: MuParameter,
}

impl FunctionSpec {
    pub fn new(sine: Vec<Complex64>, mu: MuParameter) -> Self {
        FunctionSpec {
            sine,
            cosine: Vec::new(),
            constant: ZERO,
            mu,
        }
    }

    pub fn from_real_sine(sine: &[f64], mu: MuParameter) -> Self {
        Self::new(sine.iter().map(|&b| Complex64::new(b, 0.0)).collect(), mu)
    }

    pub fn with_even_part(mut self, constant: Complex64, cosine: Vec<Complex64>) -> Self {
        self.constant = constant;
        self.cosine = cosine;
        self
    }

    /// Fourier coefficients of `ψ` from `N` samples at `u_j = −π + 2πj/N`,
    /// keeping harmonics up to `harmonics < N/2`. Also returns the l¹ norm of
    /// the discarded coefficients.
    pub fn from_periodic_samples(
        samples: &[Complex64],
        harmonics: usize,
        mu: MuParameter,
    ) -> Result<(Self, f64)> {
        let n = samples.len();
        if n < 2 * harmonics + 1 {
            return Err(Error::domain("need more than 2*harmonics samples"));
        }
        let nf = n as f64;
        let node = |j: usize| -PI + 2.0 * PI * j as f64 / nf;
        let constant = samples.iter().sum::<Complex64>() / nf;
        let mut sine = Vec::new();
        let mut cosine = Vec::new();
        let mut discarded = 0.0;
        for k in 1..=n / 2 {
            let nyquist = 2 * k == n;
            let scale = if nyquist { 1.0 / nf } else { 2.0 / nf };
            let kf = k as f64;
            let (mut c, mut b) = (ZERO, ZERO);
            for (j, &v) in samples.iter().enumerate() {
                let u = node(j);
                c += v * (kf * u).cos();
                b += v * (kf * u).sin();
            }
            let (c, b) = (c * scale, if nyquist { ZERO } else { b * scale });
            if k <= harmonics {
                cosine.push(c);
                sine.push(b);
            } else {
                discarded += c.norm() + b.norm();
            }
        }
        Ok((
            FunctionSpec {
                sine,
                cosine,
                constant,
                mu,
            },
            discarded,
        ))
    }

    pub fn psi(&self, u: f64) -> Complex64 {
        let mut v = self.constant;
        for (k, &c) in self.cosine.iter().enumerate() {
            v += c * ((k + 1) as f64 * u).cos();
        }
        for (k, &b) in self.sine.iter().enumerate() {
            v += b * ((k + 1) as f64 * u).sin();
        }
        v
    }

    /// `b_n`.
    pub fn sine_coefficient(&self, n: u32) -> Complex64 {
        match n {
            0 => ZERO,
            n => self.sine.get(n as usize - 1).copied().unwrap_or(ZERO),
        }
    }

    /// Largest `k` with `b_k ≠ 0`; zero if `ψ` has no odd part.
    pub fn highest_harmonic(&self) -> u32 {
        self.sine
            .iter()
            .rposition(|&b| b != ZERO)
            .map_or(0, |k| k as u32 + 1)
    }

    /// `(ψ(u) − ψ(−u))/2 = Σ b_k sin(ku)`.
    pub fn odd_part(&self, u: f64) -> Complex64 {
        let mut v = ZERO;
        for (k, &b) in self.sine.iter().enumerate() {
            v += b * ((k + 1) as f64 * u).sin();
        }
        v
    }
}

/// `f` induced by a [`FunctionSpec`], as an input to the inversion integrals.
#[derive(Debug, Clone)]
pub struct SpecFunction<'a> {
    spec: &'a FunctionSpec,
    cfg: QuadratureConfig,
}

impl<'a> SpecFunction<'a> {
    pub fn new(spec: &'a FunctionSpec, tc: &TransformConfig) -> Self {
        SpecFunction {
            spec,
            cfg: tc.kernel_cfg(),
        }
    }
}

impl TransformInput for SpecFunction<'_> {
    fn eval_shifted(&self, u: f64) -> Result<Complex64> {
        Ok(spec_function_shifted(self.spec, u, &self.cfg)?.value)
    }

    fn decay_power(&self) -> f64 {
        1.5
    }

    fn endpoint_exponent(&self) -> f64 {
        (0.5 * self.spec.mu.re()).max(0.0)
    }
}

/// `ln sinh(πn)` for `n ≥ 1`.
pub(crate) fn ln_sinh_pi(n: u32) -> f64 {
    let x = PI * n as f64;
    x + (-(-2.0 * x).exp()).ln_1p() - core::f64::consts::LN_2
}

/// `(n/π) sinh(πn)`, the factor in front of every inversion integral once
/// the gamma pair has been absorbed into the kernel.
pub(crate) fn inversion_scale(n: u32) -> f64 {
    (n as f64 / PI) * ln_sinh_pi(n).exp()
}

/// `(n/π) sinh(πn) Γ(1/2+in−μ) Γ(1/2−in−μ)`; equal to `n tanh(πn)` at `μ = 0`.
pub fn inversion_factor(n: u32, mu: &MuParameter) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::domain("n must be >= 1"));
    }
    let a = Complex64::new(0.5, n as f64) - mu.value();
    let b = Complex64::new(0.5, -(n as f64)) - mu.value();
    let ln = crate::specfun::ln_gamma(a)? + crate::specfun::ln_gamma(b)? + ln_sinh_pi(n);
    Ok(ln.exp() * (n as f64 / PI))
}

/// How the product of kernel and input decays as `x → ∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Tail {
    /// Algebraically, at the sum of the kernel and input decay powers.
    Algebraic,
    /// Like `e^{−rate·x}`; the range is never cut at `x_max`.
    Exponential(f64),
}

/// `∫_0^∞ K(u) F(1 + u) du` for a kernel with `(x − 1)^{−kernel_endpoint}`
/// behaviour at 1 and `x^{−kernel_decay}` decay.
pub(crate) fn project<K, I>(
    kernel: K,
    kernel_endpoint: f64,
    kernel_decay: f64,
    input: &I,
    x_max: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult>
where
    K: Fn(f64) -> Result<IntegralResult>,
    I: TransformInput + ?Sized,
{
    project_with_tail(kernel, kernel_endpoint, kernel_decay, input, x_max, Tail::Algebraic, cfg)
}

pub(crate) fn project_with_tail<K, I>(
    kernel: K,
    kernel_endpoint: f64,
    kernel_decay: f64,
    input: &I,
    x_max: f64,
    tail: Tail,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult>
where
    K: Fn(f64) -> Result<IntegralResult>,
    I: TransformInput + ?Sized,
{
    let power = kernel_decay + input.decay_power();
    if tail == Tail::Algebraic && !(power > 1.0) {
        return Err(Error::domain(format!(
            "integrand decays like x^-{power}, not integrable over (1, inf)"
        )));
    }
    let exponent = (kernel_endpoint + input.endpoint_exponent()).max(0.0);
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let inner_ok = Cell::new(true);
    let h = |u: f64| -> Complex64 {
        let value = kernel(u).and_then(|k| {
            if !k.converged {
                inner_ok.set(false);
            }
            Ok(k.value * input.eval_shifted(u)?)
        });
        value.unwrap_or_else(|e| {
            failure.borrow_mut().get_or_insert(e);
            Complex64::new(f64::NAN, f64::NAN)
        })
    };
    // The two pieces can cancel by many orders of magnitude, so a relative
    // tolerance on either one says nothing about the sum.
    let half = if cfg.abs_tol > 0.0 {
        QuadratureConfig {
            abs_tol: 0.5 * cfg.abs_tol,
            rel_tol: 0.0,
            ..*cfg
        }
    } else {
        *cfg
    };
    let x_max = match tail {
        Tail::Algebraic => x_max,
        Tail::Exponential(_) => f64::INFINITY,
    };
    let split = (x_max - 1.0).min(1.0);
    let g = |_: f64, d: f64| {
        if exponent == 0.0 {
            h(d)
        } else {
            h(d) * d.powf(exponent)
        }
    };
    let mut r = endpoint_singular_pieces(g, 0.0, split, exponent, Endpoint::Left, 4, &half)?;
    if x_max - 1.0 > split {
        let cutoff = x_max.is_finite().then(|| x_max - 1.0);
        let rest = match tail {
            Tail::Algebraic => semi_infinite_algebraic(&h, split, power, cutoff, &half)?,
            Tail::Exponential(rate) => {
                integrate_semi_infinite(&h, split, DecayHint::Exponential { rate }, &half)?
            }
        };
        r = r.combine(rest);
    }
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    // The pieces were held to an absolute tolerance only; the sum is judged
    // against the caller's tolerance, relative part included.
    r.converged = inner_ok.get() && r.error_estimate <= cfg.tolerance_for(r.value.norm());
    Ok(r)
}

/// `F(x)` from [`forward_series`] with its truncation bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForwardValue {
    pub value: Complex64,
    /// Quadrature error accumulated over the summed terms.
    pub error_estimate: f64,
    /// `E(x)·Σ_{m>N}|a_m|`, where `E ≥ |P^μ_{iτ−1/2}(x)|` for every τ
    /// (`E = |P^μ_{−1/2}(x)|` for real μ) and `N` is the number of summed terms.
    pub tail_bound: f64,
    pub terms: usize,
    pub converged: bool,
}

fn check_x(x: f64) -> Result<f64> {
    if x.is_finite() && x > 1.0 {
        Ok(x - 1.0)
    } else {
        Err(Error::domain("x must be > 1"))
    }
}

/// `F(x) = Σ_{m=1}^{N} a_m P^μ_{im−1/2}(x)`, `N = min(n_max, len a)`.
pub fn forward_series(
    a: &CoefficientSequence,
    mu: &MuParameter,
    x: f64,
    tc: &TransformConfig,
) -> Result<ForwardValue> {
    tc.validate()?;
    let u = check_x(x)?;
    let terms = a.len().min(tc.n_max as usize);
    let mut out = ForwardValue {
        value: ZERO,
        error_estimate: 0.0,
        tail_bound: 0.0,
        terms,
        converged: true,
    };
    for (k, &c) in a.values().iter().take(terms).enumerate() {
        if c == ZERO {
            continue;
        }
        let p = conical_kernel_shifted(mu.value(), (k + 1) as f64, u, tc.kernel_route, &tc.cfg)?;
        out.value += c * p.value;
        out.error_estimate += c.norm() * p.error_estimate;
        out.converged &= p.converged;
    }
    let tail = a.tail_l1(terms);
    if tail > 0.0 {
        out.tail_bound = kernel_envelope_shifted(mu.value(), u, &tc.cfg)? * tail;
    }
    Ok(out)
}

/// `a_n` recovered from `F` by the incomplete-kernel inversion integral.
///
/// Tolerances in `tc.cfg` apply to `a_n`.
pub fn inverse_coefficients<I: TransformInput + ?Sized>(
    f: &I,
    mu: &MuParameter,
    n: u32,
    tc: &TransformConfig,
) -> Result<IntegralResult> {
    tc.validate()?;
    if n == 0 {
        return Err(Error::domain("n must be >= 1"));
    }
    let m = mu.value();
    let kcfg = tc.kernel_cfg();
    let scale = inversion_scale(n);
    let kernel = |u: f64| pair_weighted_incomplete_shifted(m, n, u, &kcfg);
    let r = project(
        kernel,
        0.5 * m.re,
        1.5,
        f,
        tc.x_max,
        &tc.cfg.for_scaled_result(scale),
    )?;
    Ok(r.scaled(Complex64::new(scale, 0.0)))
}

/// `a_n` recovered from the dual series `G` (see [`DualSeries`]) by
/// integrating against the complete kernel. Needs `|Re μ| < 1/2`.
pub fn dual_inverse_coefficients<I: TransformInput + ?Sized>(
    g: &I,
    mu: &MuParameter,
    n: u32,
    tc: &TransformConfig,
) -> Result<IntegralResult> {
    mu.require_strict()?;
    tc.validate()?;
    if n == 0 {
        return Err(Error::domain("n must be >= 1"));
    }
    let m = mu.value();
    let kcfg = tc.kernel_cfg();
    let route = tc.kernel_route;
    let scale = inversion_scale(n);
    let kernel = |u: f64| conical_kernel_shifted(m, n as f64, u, route, &kcfg);
    let r = project(
        kernel,
        0.5 * m.re,
        0.5,
        g,
        tc.x_max,
        &tc.cfg.for_scaled_result(scale),
    )?;
    Ok(r.scaled(Complex64::new(scale, 0.0)))
}

fn spec_function_shifted(spec: &FunctionSpec, w: f64, cfg: &QuadratureConfig) -> Result<IntegralResult> {
    let t = 1.0 + w;
    let expo = spec.mu.value() - 1.5;
    // Folding (−π, 0) onto (0, π): the even part of ψ cancels exactly.
    let f = |u: f64| (expo * (t + u.cosh()).ln()).exp() * spec.odd_part(u) * (2.0 * u.sinh());
    let pieces = oscillation_pieces(PI, spec.highest_harmonic() as f64);
    let r = integrate_partitioned(f, &uniform_partition(0.0, PI, pieces), cfg)?;
    let prefactor = (-0.5 * spec.mu.value() * (w.ln() + (w + 2.0).ln())).exp();
    Ok(r.scaled(prefactor))
}

/// `f(t) = (t² − 1)^{−μ/2} ∫_{−π}^{π} ψ(u) sinh(u) (t + cosh u)^{μ−3/2} du`.
pub fn evaluate_f_from_spec(
    spec: &FunctionSpec,
    t: f64,
    tc: &TransformConfig,
) -> Result<IntegralResult> {
    tc.validate()?;
    let w = check_x(t).map_err(|_| Error::domain("t must be > 1"))?;
    spec_function_shifted(spec, w, &tc.cfg)
}

/// Closed form of `∫_1^∞ P^μ_{in−1/2}(t) f(t) dt`:
/// `√(2π) π b_n / (sinh(πn) Γ(3/2 − μ))`.
pub fn coefficients_from_psi(spec: &FunctionSpec, n: u32) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::domain("n must be >= 1"));
    }
    let b = spec.sine_coefficient(n);
    if b == ZERO {
        return Ok(ZERO);
    }
    let g = complex_gamma(1.5 - spec.mu.value())?;
    Ok(b * ((2.0 * PI).sqrt() * PI * (-ln_sinh_pi(n)).exp()) / g)
}

/// `∫_1^∞ P^μ_{in−1/2}(t) f(t) dt` by quadrature, `f` evaluated from its
/// integral representation. Tolerances apply to `sinh(πn)` times the result.
pub fn coefficient_by_quadrature(
    spec: &FunctionSpec,
    n: u32,
    tc: &TransformConfig,
) -> Result<IntegralResult> {
    tc.validate()?;
    if n == 0 {
        return Err(Error::domain("n must be >= 1"));
    }
    let m = spec.mu.value();
    let kcfg = tc.kernel_cfg();
    let route = tc.kernel_route;
    let kernel = |u: f64| conical_kernel_shifted(m, n as f64, u, route, &kcfg);
    let f = SpecFunction::new(spec, tc);
    let scale = ln_sinh_pi(n).exp();
    project(kernel, 0.5 * m.re, 0.5, &f, tc.x_max, &tc.cfg.for_scaled_result(scale))
}

/// Reconstruction of `f(x)` from the incomplete-kernel series
///
/// ```text
/// f(x) = (1/π) Σ_n n sinh(πn) Γ(1/2+in−μ) Γ(1/2−in−μ) P^μ_{in−1/2}(x, π) c_n
/// ```
///
/// with `c_n` from [`coefficients_from_psi`]. For trigonometric `ψ` the series
/// ends at the highest sine harmonic, which must not exceed `n_max`.
pub fn expand_function_incomplete(
    spec: &FunctionSpec,
    x: f64,
    tc: &TransformConfig,
) -> Result<IntegralResult> {
    tc.validate()?;
    let u = check_x(x)?;
    let top = spec.highest_harmonic();
    if top > tc.n_max {
        return Err(Error::config(format!(
            "n_max = {} truncates psi below its highest harmonic {top}",
            tc.n_max
        )));
    }
    let kcfg = tc.kernel_cfg();
    let mut out = IntegralResult::zero();
    for n in 1..=top {
        let c = coefficients_from_psi(spec, n)?;
        if c == ZERO {
            continue;
        }
        let w = pair_weighted_incomplete_shifted(spec.mu.value(), n, u, &kcfg)?;
        out = out.combine(w.scaled(c * inversion_scale(n)));
    }
    out.converged = out.converged && out.error_estimate <= tc.cfg.tolerance_for(out.value.norm());
    Ok(out)
}

/// Result of [`expand_function_complete`].
#[derive(Debug, Clone, PartialEq)]
pub struct CompleteExpansion {
    pub value: Complex64,
    pub error_estimate: f64,
    /// `d_n = ∫_1^∞ P^μ_{in−1/2}(t, π) f(t) dt` for `n = 1, …, N`.
    pub d: Vec<IntegralResult>,
    pub converged: bool,
}

/// Reconstruction of `f = forward_series(a)` through the complete-kernel
/// series
///
/// ```text
/// f(x) = (1/π) Σ_n n sinh(πn) Γ(1/2+in−μ) Γ(1/2−in−μ) P^μ_{in−1/2}(x) d_n,
/// ```
///
/// `d_n` computed by quadrature, `n ≤ min(n_max, len a)`. Needs `|Re μ| < 1/2`.
pub fn expand_function_complete(
    a: &CoefficientSequence,
    mu: &MuParameter,
    x: f64,
    tc: &TransformConfig,
) -> Result<CompleteExpansion> {
    mu.require_strict()?;
    tc.validate()?;
    let u = check_x(x)?;
    let m = mu.value();
    let terms = a.len().min(tc.n_max as usize) as u32;
    let f = ForwardSeries::new(a, mu, tc);
    let kcfg = tc.kernel_cfg();
    let mut out = CompleteExpansion {
        value: ZERO,
        error_estimate: 0.0,
        d: Vec::with_capacity(terms as usize),
        converged: true,
    };
    for n in 1..=terms {
        let scale = inversion_scale(n);
        let kernel = |v: f64| pair_weighted_incomplete_shifted(m, n, v, &kcfg);
        let weighted = project(
            kernel,
            0.5 * m.re,
            1.5,
            &f,
            tc.x_max,
            &tc.cfg.for_scaled_result(scale),
        )?;
        let pair = crate::specfun::gamma_pair(n, mu)?;
        out.d.push(weighted.scaled(1.0 / pair));
        let p = conical_kernel_shifted(m, n as f64, u, tc.kernel_route, &tc.cfg)?;
        let coeff = weighted.value * scale;
        out.value += coeff * p.value;
        out.error_estimate +=
            scale * (weighted.error_estimate * p.value.norm() + weighted.value.norm() * p.error_estimate);
        out.converged &= weighted.converged && p.converged;
    }
    Ok(out)
}

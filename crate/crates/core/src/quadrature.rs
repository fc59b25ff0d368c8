//! Numerical integration engine.
//!
//! Every integral in the crate goes through one of three entry points:
//!
//! * [`integrate_adaptive`] — finite interval, globally adaptive bisection
//!   driven by the 10-point Gauss / 21-point Kronrod pair;
//! * [`integrate_semi_infinite`] — `(a, ∞)` with a caller-supplied decay
//!   hint that fixes the truncation point and bounds the discarded tail;
//! * [`integrate_endpoint_singular`] — integrands carrying an algebraic
//!   endpoint singularity `(b − t)^{−λ}`, `0 ≤ λ < 1`, removed by a power
//!   substitution.
//!
//! Integrands are complex valued. Real and imaginary parts are integrated
//! together: both share one set of subdivisions and their error estimates add.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent methods take over when std is linked
use num_traits::Float;

use crate::error::{Error, Result};

/// Tolerances and limits shared by every integration routine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of bisections one adaptive run may perform.
    pub max_subdivisions: usize,
    /// Semi-infinite ranges are truncated no earlier than this many
    /// characteristic decay lengths past the lower limit.
    pub tail_cutoff_factor: f64,
    /// Largest endpoint-singularity exponent accepted by
    /// [`integrate_endpoint_singular`].
    pub singular_order_cap: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
            tail_cutoff_factor: 40.0,
            singular_order_cap: 0.98,
        }
    }
}

impl QuadratureConfig {
    pub fn with_tolerances(abs_tol: f64, rel_tol: f64) -> Self {
        QuadratureConfig {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol >= 0.0 && self.rel_tol >= 0.0) {
            return Err(Error::config("tolerances must be nonnegative"));
        }
        if self.abs_tol == 0.0 && self.rel_tol == 0.0 {
            return Err(Error::config("abs_tol and rel_tol cannot both be zero"));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::config("max_subdivisions must be at least 1"));
        }
        if !(self.tail_cutoff_factor > 1.0) {
            return Err(Error::config("tail_cutoff_factor must exceed 1"));
        }
        if !(0.0..1.0).contains(&self.singular_order_cap) {
            return Err(Error::config("singular_order_cap must lie in [0, 1)"));
        }
        Ok(())
    }

    /// Error level accepted for an integral of magnitude `magnitude`.
    pub fn tolerance_for(&self, magnitude: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * magnitude)
    }

    /// Tolerances for an integral whose value is multiplied by `scale`
    /// afterwards, so that `abs_tol` keeps referring to the final result.
    pub fn for_scaled_result(&self, scale: f64) -> Self {
        if !(scale > 0.0 && scale.is_finite()) {
            return *self;
        }
        QuadratureConfig {
            abs_tol: self.abs_tol / scale,
            ..*self
        }
    }

    /// Both tolerances divided by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        QuadratureConfig {
            abs_tol: self.abs_tol / factor,
            rel_tol: self.rel_tol / factor,
            ..*self
        }
    }
}

/// Outcome of one integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl IntegralResult {
    pub fn zero() -> Self {
        IntegralResult {
            value: Complex64::new(0.0, 0.0),
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        }
    }

    /// Sum of two independent integrals; errors add.
    pub fn combine(self, other: IntegralResult) -> Self {
        IntegralResult {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            evaluations: self.evaluations + other.evaluations,
            converged: self.converged && other.converged,
        }
    }

    /// Multiplies value and error estimate by `factor`.
    pub fn scaled(self, factor: Complex64) -> Self {
        IntegralResult {
            value: self.value * factor,
            error_estimate: self.error_estimate * factor.norm(),
            ..self
        }
    }
}

/// Asymptotic decay of an integrand on `(a, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecayHint {
    /// `|f(x)| ≲ C·e^{−rate·x}`.
    Exponential { rate: f64 },
    /// `|f(x)| ≲ C·x^{−power}`, `power > 1`.
    Algebraic { power: f64 },
}

/// Which end of the interval carries the singular weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Left,
    Right,
}

// Kronrod abscissae on [0, 1]; odd indices are the 10-point Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_980_074_618,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

const RULE_POINTS: usize = 21;

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
    /// Roundoff level below which bisection cannot reduce `error`.
    floor: f64,
}

impl Segment {
    fn refinable(&self) -> bool {
        self.error > self.floor
    }
}

/// Error estimate for one real component, following QUADPACK's QK21.
fn component_error(resk: f64, resg: f64, resabs: f64, resasc: f64, half: f64) -> (f64, f64) {
    let resabs = resabs * half;
    let resasc = resasc * half;
    let mut err = ((resk - resg) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * resabs;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(floor);
    }
    (err, floor)
}

fn gauss_kronrod<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let dhalf = half.abs();

    let fc = f(center);
    let mut resk = fc * WGK[10];
    let mut resg = Complex64::new(0.0, 0.0);
    let mut abs_re = WGK[10] * fc.re.abs();
    let mut abs_im = WGK[10] * fc.im.abs();
    let mut values = [(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)); 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        values[j] = (f1, f2);
        let sum = f1 + f2;
        resk += sum * WGK[j];
        if j % 2 == 1 {
            resg += sum * WG[j / 2];
        }
        abs_re += WGK[j] * (f1.re.abs() + f2.re.abs());
        abs_im += WGK[j] * (f1.im.abs() + f2.im.abs());
    }
    let mean = resk * 0.5;
    let mut asc_re = WGK[10] * (fc.re - mean.re).abs();
    let mut asc_im = WGK[10] * (fc.im - mean.im).abs();
    for j in 0..10 {
        let (f1, f2) = values[j];
        asc_re += WGK[j] * ((f1.re - mean.re).abs() + (f2.re - mean.re).abs());
        asc_im += WGK[j] * ((f1.im - mean.im).abs() + (f2.im - mean.im).abs());
    }
    let (err_re, floor_re) = component_error(resk.re, resg.re, abs_re, asc_re, dhalf);
    let (err_im, floor_im) = component_error(resk.im, resg.im, abs_im, asc_im, dhalf);
    let mut error = err_re + err_im;
    if !error.is_finite() || !resk.re.is_finite() || !resk.im.is_finite() {
        error = f64::INFINITY;
    }
    Segment {
        a,
        b,
        value: resk * half,
        error,
        floor: floor_re + floor_im,
    }
}

#[derive(Debug, PartialEq)]
struct Pending {
    error: f64,
    index: usize,
}

impl Eq for Pending {}

impl Ord for Pending {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.index.cmp(&self.index))
    }
}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Globally adaptive integration over the partition `points`.
fn adaptive<F: Fn(f64) -> Complex64>(
    f: &F,
    points: &[f64],
    cfg: &QuadratureConfig,
) -> IntegralResult {
    let mut segments: Vec<Segment> = points
        .windows(2)
        .map(|w| gauss_kronrod(f, w[0], w[1]))
        .collect();
    let mut evaluations = RULE_POINTS * segments.len();
    let mut heap: BinaryHeap<Pending> = segments
        .iter()
        .enumerate()
        .filter(|(_, s)| s.refinable())
        .map(|(index, s)| Pending {
            error: s.error,
            index,
        })
        .collect();

    let mut value: Complex64 = segments.iter().map(|s| s.value).sum();
    let mut error: f64 = segments.iter().map(|s| s.error).sum();
    // Error held by segments already at their roundoff floor. Once it alone
    // exceeds the tolerance, refinement only continues while the remaining
    // error still matters next to it.
    let mut stuck: f64 = segments
        .iter()
        .filter(|s| !s.refinable())
        .map(|s| s.error)
        .sum();
    let mut subdivisions = 0;

    while error > cfg.tolerance_for(value.norm()) && subdivisions < cfg.max_subdivisions {
        if stuck > cfg.tolerance_for(value.norm()) && error - stuck <= 0.1 * stuck {
            break;
        }
        let Some(Pending { index, .. }) = heap.pop() else {
            break;
        };
        let seg = segments[index];
        let mid = 0.5 * (seg.a + seg.b);
        if !(seg.a < mid && mid < seg.b) {
            continue;
        }
        let left = gauss_kronrod(f, seg.a, mid);
        let right = gauss_kronrod(f, mid, seg.b);
        evaluations += 2 * RULE_POINTS;
        subdivisions += 1;

        value += left.value + right.value - seg.value;
        error += left.error + right.error - seg.error;
        segments[index] = left;
        segments.push(right);
        if left.refinable() {
            heap.push(Pending {
                error: left.error,
                index,
            });
        } else {
            stuck += left.error;
        }
        if right.refinable() {
            heap.push(Pending {
                error: right.error,
                index: segments.len() - 1,
            });
        } else {
            stuck += right.error;
        }
    }

    // Re-sum to shed the drift of the running totals.
    let value: Complex64 = segments.iter().map(|s| s.value).sum();
    let error: f64 = segments.iter().map(|s| s.error).sum();
    IntegralResult {
        value,
        error_estimate: error,
        evaluations,
        converged: error <= cfg.tolerance_for(value.norm()),
    }
}

fn check_finite(x: f64, what: &str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(alloc::format!("{what} must be finite")))
    }
}

/// `∫_a^b f(t) dt` for continuous `f`.
///
/// Non-convergence within `cfg.max_subdivisions` is reported through
/// `converged = false`, never as an error.
pub fn integrate_adaptive<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    integrate_partitioned(f, &[a, b], cfg)
}

/// Like [`integrate_adaptive`] but starts from the partition `points`
/// (strictly increasing, at least two entries). Useful for oscillatory
/// integrands where a single starting interval would under-sample.
pub fn integrate_partitioned<F: Fn(f64) -> Complex64>(
    f: F,
    points: &[f64],
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    cfg.validate()?;
    if points.len() < 2 {
        return Err(Error::domain("a partition needs at least two points"));
    }
    for &p in points {
        check_finite(p, "integration limit")?;
    }
    if points.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::domain("integration limits must be strictly increasing"));
    }
    Ok(adaptive(&f, points, cfg))
}

/// Uniform partition of `[a, b]` into `pieces` intervals.
pub(crate) fn uniform_partition(a: f64, b: f64, pieces: usize) -> Vec<f64> {
    let pieces = pieces.max(1);
    let step = (b - a) / pieces as f64;
    let mut pts: Vec<f64> = (0..pieces).map(|k| a + step * k as f64).collect();
    pts.push(b);
    pts
}

/// Pieces needed so each holds at most about one period of `cos(freq·t)`.
pub(crate) fn oscillation_pieces(length: f64, freq: f64) -> usize {
    let periods = length * freq.abs() / core::f64::consts::PI;
    (periods.ceil() as usize).clamp(1, 256)
}

fn tail_target<F: Fn(f64) -> Complex64>(f: &F, a: f64, len: f64, cfg: &QuadratureConfig) -> f64 {
    if cfg.abs_tol > 0.0 {
        return cfg.abs_tol / 10.0;
    }
    let scale = (0..4)
        .map(|k| f(a + len * k as f64).norm())
        .fold(0.0, f64::max)
        * len;
    (cfg.rel_tol * scale / 10.0).max(f64::MIN_POSITIVE)
}

/// `∫_a^∞ f(x) dx`.
///
/// The range is truncated where the tail, estimated from `hint` and samples
/// of `|f|`, falls below `abs_tol / 10`; that estimate is added to the
/// reported error.
///
/// * `Exponential { rate }`: truncation at `a + max(30, tail_cutoff_factor)/rate`
///   or later, tail bounded by the sampled envelope times `1/rate`.
/// * `Algebraic { power }`: tail bounded by `b^{1−p}/(p−1)·sup_{x≥b}|f(x)·x^p|`;
///   `power ≤ 1` is rejected as non-integrable.
pub fn integrate_semi_infinite<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    hint: DecayHint,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    cfg.validate()?;
    check_finite(a, "lower limit")?;
    match hint {
        DecayHint::Exponential { rate } => semi_infinite_exponential(&f, a, rate, cfg),
        DecayHint::Algebraic { power } => semi_infinite_algebraic(&f, a, power, None, cfg),
    }
}

fn semi_infinite_exponential<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    rate: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    if !(rate > 0.0 && rate.is_finite()) {
        return Err(Error::domain("exponential decay rate must be positive"));
    }
    let len = 1.0 / rate;
    let target = tail_target(f, a, len, cfg);
    let mut end = a + len * cfg.tail_cutoff_factor.max(30.0);
    let mut extra = 0;
    let mut tail = f64::INFINITY;
    for _ in 0..64 {
        let envelope = [0.0, 0.25, 0.5, 1.0]
            .iter()
            .map(|&k| f(end + k * len).norm())
            .fold(0.0, f64::max);
        extra += 4;
        tail = if envelope.is_finite() {
            envelope * len
        } else {
            f64::INFINITY
        };
        if tail <= target {
            break;
        }
        end += 10.0 * len;
    }
    let pieces = (((end - a) / (4.0 * len)).ceil() as usize).clamp(1, 64);
    let pts = uniform_partition(a, end, pieces);
    let mut r = adaptive(f, &pts, cfg);
    r.error_estimate += tail;
    r.evaluations += extra;
    r.converged =
        r.converged && tail <= target && r.error_estimate <= cfg.tolerance_for(r.value.norm());
    Ok(r)
}

fn algebraic_sup<F: Fn(f64) -> Complex64>(f: &F, b: f64, power: f64) -> f64 {
    [1.0, 1.25, 1.5, 2.0, 3.0, 4.0]
        .iter()
        .map(|&k| {
            let x = k * b;
            f(x).norm() * x.powf(power)
        })
        .fold(0.0, f64::max)
}

/// Algebraic-decay worker. With `cutoff = Some(b)` the range stops at `b`
/// instead of the tail-driven truncation point.
pub(crate) fn semi_infinite_algebraic<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    power: f64,
    cutoff: Option<f64>,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    if !(power > 1.0) {
        return Err(Error::domain(
            "algebraic decay with power <= 1 is not integrable",
        ));
    }
    let unit = a.abs().max(1.0);
    let target = tail_target(f, a, unit, cfg);
    let mut b = (a + unit).max(2.0 * a.abs()).max(1.0);
    let mut sup = algebraic_sup(f, b, power);
    let mut extra = 6;
    match cutoff {
        Some(limit) => {
            if !(limit > a) {
                return Err(Error::domain("cutoff must exceed the lower limit"));
            }
            b = limit;
            sup = algebraic_sup(f, b, power);
            extra += 6;
        }
        None => {
            for _ in 0..8 {
                let needed = (sup / ((power - 1.0) * target)).powf(1.0 / (power - 1.0));
                if !(needed > b) || !needed.is_finite() {
                    break;
                }
                b = needed.min(1e250);
                sup = algebraic_sup(f, b, power);
                extra += 6;
            }
        }
    }
    let tail = if sup.is_finite() {
        b.powf(1.0 - power) / (power - 1.0) * sup
    } else {
        f64::INFINITY
    };

    // Geometric partition: a, a + u, a + 3u, a + 7u, ...
    let mut pts = Vec::new();
    pts.push(a);
    let mut width = unit;
    let mut x = a + width;
    while x < b {
        pts.push(x);
        width *= 2.0;
        x += width;
    }
    pts.push(b);

    let mut r = adaptive(f, &pts, cfg);
    r.error_estimate += tail;
    r.evaluations += extra;
    r.converged = r.converged
        && (cutoff.is_some() || tail <= target)
        && r.error_estimate <= cfg.tolerance_for(r.value.norm());
    Ok(r)
}

/// `∫_a^b g(t, d)·d^{−exponent} dt`, where `d` is the distance from `t` to
/// the singular endpoint (`d = b − t` for [`Endpoint::Right`], `t − a` for
/// [`Endpoint::Left`]).
///
/// `g` receives both `t` and `d` so it can form quantities that vanish at the
/// endpoint without cancellation. The singularity is removed by
/// `d = s^{1/(1−exponent)}`, which makes the transformed integrand
/// `g(t, d)/(1 − exponent)`.
pub fn integrate_endpoint_singular<G: Fn(f64, f64) -> Complex64>(
    g: G,
    a: f64,
    b: f64,
    exponent: f64,
    at: Endpoint,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    endpoint_singular_pieces(g, a, b, exponent, at, 1, cfg)
}

pub(crate) fn endpoint_singular_pieces<G: Fn(f64, f64) -> Complex64>(
    g: G,
    a: f64,
    b: f64,
    exponent: f64,
    at: Endpoint,
    pieces: usize,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    cfg.validate()?;
    check_finite(a, "lower limit")?;
    check_finite(b, "upper limit")?;
    if !(a < b) {
        return Err(Error::domain("integration limits must satisfy a < b"));
    }
    if exponent.is_nan() || exponent < 0.0 {
        return Err(Error::domain("singularity exponent must be nonnegative"));
    }
    if exponent >= 1.0 {
        return Err(Error::domain(
            "singularity exponent >= 1 makes the integral divergent",
        ));
    }
    if exponent > cfg.singular_order_cap {
        return Err(Error::config(alloc::format!(
            "singularity exponent {exponent} exceeds singular_order_cap {}",
            cfg.singular_order_cap
        )));
    }
    let p = 1.0 / (1.0 - exponent);
    let width = b - a;
    let s_max = width.powf(1.0 - exponent);
    let h = |s: f64| {
        let d = if s >= s_max { width } else { s.powf(p) };
        let t = match at {
            Endpoint::Right => b - d,
            Endpoint::Left => a + d,
        };
        g(t, d) * p
    };
    let pts = uniform_partition(0.0, s_max, pieces);
    Ok(adaptive(&h, &pts, cfg))
}

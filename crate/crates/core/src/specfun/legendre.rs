//! Conical Legendre functions and incomplete Legendre integrals.
//!
//! Evaluators come in two flavours: the public `x`-based ones check their
//! arguments, and the `_shifted` ones take `u = x − 1` so callers integrating
//! towards `x = 1` keep full relative precision in `x² − 1 = u(u + 2)`.

use core::f64::consts::{FRAC_2_PI, PI};

use num_complex::Complex64;
#[allow(unused_imports)] // inherent methods take over when std is linked
use num_traits::Float;

use super::gamma::{complex_gamma, gamma_pair_tau};
use super::mellin::{mellin_barnes_shifted, MellinBarnesConfig};
use super::{check_broad, check_x, KernelDegree, MuParameter};
use crate::error::{Error, Result};
use crate::quadrature::{
    endpoint_singular_pieces, integrate_partitioned, integrate_semi_infinite,
    oscillation_pieces, uniform_partition, DecayHint, Endpoint, IntegralResult,
    QuadratureConfig,
};

/// Which representation evaluates `P^μ_{iτ−1/2}(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KernelRoute {
    /// Mehler route for `x ≤ 3` or `τ > 1/2`, semi-infinite route otherwise.
    #[default]
    Auto,
    Mehler,
    Legendre,
    MellinBarnes,
}

const AUTO_CROSSOVER_X: f64 = 3.0;
const AUTO_MAX_LEGENDRE_TAU: f64 = 0.5;

impl KernelRoute {
    /// The concrete route `Auto` resolves to at `(τ, x = 1 + u)`.
    pub fn resolve(self, tau: f64, u: f64) -> KernelRoute {
        match self {
            KernelRoute::Auto => {
                if u + 1.0 <= AUTO_CROSSOVER_X || tau > AUTO_MAX_LEGENDRE_TAU {
                    KernelRoute::Mehler
                } else {
                    KernelRoute::Legendre
                }
            }
            other => other,
        }
    }
}

/// `ln(2 sinh y)` for `y > 0` without overflow.
fn ln_two_sinh(y: f64) -> f64 {
    if y > 20.0 {
        y + (-(-2.0 * y).exp()).ln_1p()
    } else {
        (2.0 * y.sinh()).ln()
    }
}

/// `ln(sinh(d/2) / d)`, finite at `d = 0`.
fn ln_sinh_half_over(d: f64) -> f64 {
    if d < 1e-3 {
        -core::f64::consts::LN_2 + d * d / 24.0
    } else {
        ln_two_sinh(0.5 * d) - core::f64::consts::LN_2 - d.ln()
    }
}

/// `ln(cosh t + z)`, stable for large `t`.
fn ln_cosh_plus(t: f64, z: f64) -> f64 {
    if t < 20.0 {
        (t.cosh() + z).ln()
    } else {
        let e = (-t).exp();
        t + (0.5 + 0.5 * e * e + z * e).ln()
    }
}

/// `ln(x² − 1)` with `x = 1 + u`.
fn ln_x2m1(u: f64) -> f64 {
    u.ln() + (u + 2.0).ln()
}

fn check_u(u: f64) -> Result<()> {
    if u.is_finite() && u > 0.0 {
        Ok(())
    } else {
        Err(Error::domain("x must be > 1"))
    }
}

/// Mehler route with `x = 1 + u`.
///
/// ```text
/// P^μ_{iτ−1/2}(cosh α) = √(2/π) sinh^μ α / Γ(1/2 − μ) ∫_0^α cos(τt) (cosh α − cosh t)^{−1/2−μ} dt
/// ```
///
/// The weight is split as `(α − t)^{−λ}·[smooth]` with `λ = 1/2 + Re μ`
/// (clamped at 0); the leftover `(α − t)^{−i Im μ}` stays in the smooth part.
pub fn conical_mehler_shifted(
    mu: Complex64,
    tau: f64,
    u: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    check_broad(mu)?;
    check_u(u)?;
    let sinh_alpha = (u * (u + 2.0)).sqrt();
    let alpha = (u + sinh_alpha).ln_1p();
    let power = mu + 0.5;
    let lambda = power.re.max(0.0);
    let ln_d_coeff = Complex64::new(lambda, 0.0) - power;

    let g = |t: f64, d: f64| {
        // cosh α − cosh t = 2 sinh((α + t)/2) · sinh(d/2),  d = α − t
        let ln_w_over_d = ln_two_sinh(alpha - 0.5 * d) + ln_sinh_half_over(d);
        let mut log = -power * ln_w_over_d;
        if ln_d_coeff.re != 0.0 || ln_d_coeff.im != 0.0 {
            log += ln_d_coeff * d.ln();
        }
        log.exp() * (tau * t).cos()
    };
    let prefactor = (mu * sinh_alpha.ln()).exp() * FRAC_2_PI.sqrt() / complex_gamma(0.5 - mu)?;
    let pieces = oscillation_pieces(alpha, tau);
    let cfg = cfg.for_scaled_result(prefactor.norm());
    let integral = endpoint_singular_pieces(g, 0.0, alpha, lambda, Endpoint::Right, pieces, &cfg)?;
    Ok(integral.scaled(prefactor))
}

/// `P^μ_ν(x)`, `ν = iτ − 1/2`, by the Mehler integral over `(0, arccosh x)`.
pub fn legendre_conical_mehler(
    mu: &MuParameter,
    degree: KernelDegree,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    let u = check_x(x)?;
    conical_mehler_shifted(mu.value(), degree.checked_tau()?, u, cfg)
}

/// `√(2/π) Γ(1/2 − μ) (x² − 1)^{−μ/2}`, the prefactor shared by the
/// semi-infinite and incomplete representations before division by the
/// gamma pair.
fn legendre_prefactor(mu: Complex64, u: f64) -> Result<Complex64> {
    Ok(complex_gamma(0.5 - mu)? * (-0.5 * mu * ln_x2m1(u)).exp() * FRAC_2_PI.sqrt())
}

/// Semi-infinite route with `x = 1 + u`:
///
/// ```text
/// P^μ_ν(x) = √(2/π) Γ(1/2−μ)(x²−1)^{−μ/2} / [Γ(1+ν−μ) Γ(−ν−μ)] ∫_0^∞ cos(τt)(cosh t + x)^{μ−1/2} dt
/// ```
pub fn conical_legendre_shifted(
    mu: Complex64,
    tau: f64,
    u: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    check_broad(mu)?;
    check_u(u)?;
    let z = 1.0 + u;
    let expo = mu - 0.5;
    let f = |t: f64| (expo * ln_cosh_plus(t, z)).exp() * (tau * t).cos();
    let prefactor = legendre_prefactor(mu, u)? / gamma_pair_tau(tau, mu)?;
    let cfg = cfg.for_scaled_result(prefactor.norm());
    // Flat until cosh t overtakes x, then e^{−(1/2 − Re μ) t}.
    let knee = (2.0 * (z + 1.0)).ln() + 2.0;
    let run = |c: &QuadratureConfig| -> Result<IntegralResult> {
        let head = integrate_partitioned(
            f,
            &uniform_partition(0.0, knee, oscillation_pieces(knee, tau)),
            c,
        )?;
        let tail = integrate_semi_infinite(
            f,
            knee,
            DecayHint::Exponential {
                rate: 0.5 - mu.re,
            },
            c,
        )?;
        Ok(head.combine(tail))
    };
    let mut r = run(&cfg)?;
    // Head and tail cancel by up to e^{πτ}; a tolerance relative to either
    // piece is too loose for the sum, so rerun against the sum itself.
    let want = cfg.tolerance_for(r.value.norm());
    if r.error_estimate > want {
        r = run(&QuadratureConfig {
            abs_tol: 0.5 * want,
            rel_tol: 0.0,
            ..cfg
        })?;
    }
    r.converged = r.converged && r.error_estimate <= cfg.tolerance_for(r.value.norm());
    Ok(r.scaled(prefactor))
}

/// `P^μ_ν(x)`, `ν = iτ − 1/2`, by the semi-infinite Legendre integral.
pub fn legendre_conical_integral(
    mu: &MuParameter,
    degree: KernelDegree,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    let u = check_x(x)?;
    conical_legendre_shifted(mu.value(), degree.checked_tau()?, u, cfg)
}

/// Incomplete Legendre integral `P^μ_{iτ−1/2}(1 + u, ω)`: the semi-infinite
/// representation with its upper limit cut to `ω`.
pub fn incomplete_legendre_shifted(
    mu: Complex64,
    tau: f64,
    u: f64,
    omega: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    check_broad(mu)?;
    check_u(u)?;
    if !(omega.is_finite() && omega >= 0.0) {
        return Err(Error::domain("omega must be finite and >= 0"));
    }
    if omega == 0.0 {
        return Ok(IntegralResult::zero());
    }
    let z = 1.0 + u;
    let expo = mu - 0.5;
    let f = |t: f64| (expo * ln_cosh_plus(t, z)).exp() * (tau * t).cos();
    let prefactor = legendre_prefactor(mu, u)? / gamma_pair_tau(tau, mu)?;
    let integral = integrate_partitioned(
        f,
        &uniform_partition(0.0, omega, oscillation_pieces(omega, tau)),
        &cfg.for_scaled_result(prefactor.norm()),
    )?;
    Ok(integral.scaled(prefactor))
}

/// `P^μ_{in−1/2}(x, ω)`.
pub fn incomplete_legendre(
    mu: &MuParameter,
    n: u32,
    x: f64,
    omega: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    let u = check_x(x)?;
    incomplete_legendre_shifted(mu.value(), n as f64, u, omega, cfg)
}

/// `Γ(1/2+im−μ) Γ(1/2−im−μ) · P^μ_{im−1/2}(1 + u, π)` by the integrated-by-parts
/// form
///
/// ```text
/// √(2/π) Γ(3/2 − μ)(x² − 1)^{−μ/2} / m · ∫_0^π sin(mt) sinh t (cosh t + x)^{μ−3/2} dt
/// ```
///
/// The gamma pair is left multiplied in: the bare kernel grows like `e^{πm}`,
/// this product stays of order `1/m²`.
pub fn pair_weighted_incomplete_shifted(
    mu: Complex64,
    m: u32,
    u: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    check_broad(mu)?;
    check_u(u)?;
    if m == 0 {
        return Err(Error::domain("m must be >= 1"));
    }
    let z = 1.0 + u;
    let freq = m as f64;
    let expo = mu - 1.5;
    let f = |t: f64| (expo * ln_cosh_plus(t, z)).exp() * ((freq * t).sin() * t.sinh());
    let prefactor =
        complex_gamma(1.5 - mu)? * (-0.5 * mu * ln_x2m1(u)).exp() * (FRAC_2_PI.sqrt() / freq);
    let integral = integrate_partitioned(
        f,
        &uniform_partition(0.0, PI, oscillation_pieces(PI, freq)),
        &cfg.for_scaled_result(prefactor.norm()),
    )?;
    Ok(integral.scaled(prefactor))
}

/// `P^μ_{im−1/2}(1 + u, π)` by the integrated-by-parts form.
pub fn incomplete_ibp_shifted(
    mu: Complex64,
    m: u32,
    u: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    let weighted = pair_weighted_incomplete_shifted(mu, m, u, cfg)?;
    let pair = gamma_pair_tau(m as f64, mu)?;
    Ok(weighted.scaled(1.0 / pair))
}

/// `P^μ_{im−1/2}(x, π)` by integration by parts; equal to
/// [`incomplete_legendre`] at `ω = π` with an integrand decaying one power of
/// `x` faster.
pub fn incomplete_legendre_ibp(
    mu: &MuParameter,
    m: u32,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    let u = check_x(x)?;
    incomplete_ibp_shifted(mu.value(), m, u, cfg)
}

/// `P^μ_{iτ−1/2}(1 + u)` by the requested route.
pub fn conical_kernel_shifted(
    mu: Complex64,
    tau: f64,
    u: f64,
    route: KernelRoute,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    match route.resolve(tau, u) {
        KernelRoute::Mehler | KernelRoute::Auto => conical_mehler_shifted(mu, tau, u, cfg),
        KernelRoute::Legendre => conical_legendre_shifted(mu, tau, u, cfg),
        KernelRoute::MellinBarnes => {
            let mb = MellinBarnesConfig::for_degree(tau, *cfg);
            mellin_barnes_shifted(mu, tau, 0.5 * u, &mb)
        }
    }
}

/// `P^μ_{iτ−1/2}(x)` by the requested route.
pub fn conical_kernel(
    mu: &MuParameter,
    degree: KernelDegree,
    x: f64,
    route: KernelRoute,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    let u = check_x(x)?;
    conical_kernel_shifted(mu.value(), degree.checked_tau()?, u, route, cfg)
}

/// Envelope `E(x) ≥ |P^μ_{iτ−1/2}(x)|` valid for every real `τ`: the Mehler
/// integral with `|cos| ≤ 1` and the modulus taken inside. For real μ it is
/// exactly `|P^μ_{−1/2}(x)|`.
pub fn kernel_envelope_shifted(mu: Complex64, u: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let re = Complex64::new(mu.re, 0.0);
    let base = conical_mehler_shifted(re, 0.0, u, cfg)?;
    let sinh_alpha = (u * (u + 2.0)).sqrt();
    // Swap the real-order prefactor for the modulus of the complex one.
    let ratio = ((mu - re) * sinh_alpha.ln()).exp().norm() * complex_gamma(0.5 - re)?.norm()
        / complex_gamma(0.5 - mu)?.norm();
    Ok(base.value.norm() * ratio)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::with_tolerances(1e-15, 1e-13)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    // Reference values from mpmath's legenp(iτ − 1/2, μ, x, type=3) at 30 digits.
    const REFERENCE: [(f64, f64, f64, f64, f64, f64); 4] = [
        (0.0, 0.0, 1.0, 2.0, 0.556_413_548_935_076_013_682_655_822_446, 0.0),
        (0.25, 0.0, 3.0, 10.0, -0.123_920_495_162_163_511_195_830_389_296, 0.0),
        (-0.3, 0.0, 2.0, 5.0, -0.205_211_356_496_323_695_702_603_334_863, 0.0),
        (
            0.2,
            0.1,
            2.0,
            1.5,
            0.121_230_291_917_148_834_645_606_446_062,
            -0.093_520_492_615_682_905_496_096_376_543_2,
        ),
    ];

    #[test]
    fn mehler_and_legendre_routes_match_reference() {
        for &(mr, mi, tau, x, re, im) in &REFERENCE {
            let mu = Complex64::new(mr, mi);
            let expected = Complex64::new(re, im);
            let m = conical_mehler_shifted(mu, tau, x - 1.0, &cfg()).unwrap();
            let l = conical_legendre_shifted(mu, tau, x - 1.0, &cfg()).unwrap();
            assert!(rel(m.value, expected) < 1e-12, "mehler {mu} {tau} {x}: {m:?}");
            // The semi-infinite route cancels down by about e^{−πτ}.
            assert!(rel(l.value, expected) < 1e-9, "legendre {mu} {tau} {x}: {l:?}");
            assert!(m.converged, "{m:?}");
        }
    }

    #[test]
    fn order_zero_tends_to_one_at_x_one() {
        let mu = MuParameter::broad(0.0).unwrap();
        for tau in [0.0, 1.0, 3.0] {
            let p = legendre_conical_mehler(&mu, KernelDegree::Continuous(tau), 1.0 + 1e-8, &cfg())
                .unwrap();
            assert!((p.value - 1.0).norm() < 1e-6, "{p:?}");
        }
    }

    #[test]
    fn incomplete_limits() {
        let mu = MuParameter::broad(0.0).unwrap();
        let z = incomplete_legendre(&mu, 1, 2.0, 0.0, &cfg()).unwrap();
        assert_eq!(z.value, Complex64::new(0.0, 0.0));
        assert!(incomplete_legendre(&mu, 1, 2.0, -1.0, &cfg()).is_err());
        assert!(incomplete_legendre(&mu, 1, 1.0, 1.0, &cfg()).is_err());
    }

    #[test]
    fn ibp_equals_direct_incomplete() {
        // mpmath: -7.7954412678366119582 at μ = 0.2, m = 2, x = 1.7.
        let mu = MuParameter::broad(0.2).unwrap();
        let a = incomplete_legendre(&mu, 2, 1.7, PI, &cfg()).unwrap();
        let b = incomplete_legendre_ibp(&mu, 2, 1.7, &cfg()).unwrap();
        let expected = Complex64::new(-7.795_441_267_836_611_958_2, 0.0);
        assert!(rel(a.value, expected) < 1e-12, "{a:?}");
        assert!(rel(b.value, expected) < 1e-12, "{b:?}");
        assert!(incomplete_legendre_ibp(&mu, 0, 1.7, &cfg()).is_err());
    }

    #[test]
    fn regime_and_domain_errors() {
        let mu = Complex64::new(0.5, 0.0);
        assert!(matches!(
            conical_mehler_shifted(mu, 1.0, 1.0, &cfg()),
            Err(Error::Regime(_))
        ));
        assert!(conical_legendre_shifted(Complex64::new(0.0, 0.0), 1.0, 0.0, &cfg()).is_err());
        let mu = MuParameter::broad(0.0).unwrap();
        assert!(legendre_conical_mehler(&mu, KernelDegree::Discrete(1), 0.5, &cfg()).is_err());
        assert!(
            legendre_conical_mehler(&mu, KernelDegree::Continuous(-1.0), 2.0, &cfg()).is_err()
        );
    }

    #[test]
    fn envelope_dominates() {
        let mu = Complex64::new(0.2, 0.1);
        for u in [0.2, 1.0, 4.0, 49.0] {
            let env = kernel_envelope_shifted(mu, u, &cfg()).unwrap();
            for tau in [1.0, 2.0, 3.0] {
                let p = conical_mehler_shifted(mu, tau, u, &cfg()).unwrap();
                assert!(p.value.norm() <= env * (1.0 + 1e-12));
            }
        }
        // Real μ: the envelope is |P^μ_{-1/2}|.
        let env = kernel_envelope_shifted(Complex64::new(-0.3, 0.0), 1.0, &cfg()).unwrap();
        let p0 = conical_mehler_shifted(Complex64::new(-0.3, 0.0), 0.0, 1.0, &cfg()).unwrap();
        assert!((env - p0.value.norm()).abs() < 1e-15);
    }

    #[test]
    fn auto_route_resolution() {
        assert_eq!(KernelRoute::Auto.resolve(1.0, 1.0), KernelRoute::Mehler);
        assert_eq!(KernelRoute::Auto.resolve(0.25, 9.0), KernelRoute::Legendre);
        assert_eq!(KernelRoute::Auto.resolve(1.0, 9.0), KernelRoute::Mehler);
        assert_eq!(KernelRoute::Legendre.resolve(5.0, 0.1), KernelRoute::Legendre);
    }
}

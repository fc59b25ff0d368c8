//! Modified Bessel function of imaginary order and the incomplete Bessel
//! integral.
//!
//! Both are integrals of `e^{−y cosh t}`. The factor `e^{−y}` is pulled out
//! and `cosh t − 1 = 2 sinh²(t/2)` used in its place, so quadrature works on
//! an integrand of order one whatever the size of `y`.

use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent methods take over when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::quadrature::{
    integrate_partitioned, integrate_semi_infinite, oscillation_pieces, uniform_partition,
    DecayHint, IntegralResult, QuadratureConfig,
};

fn check_tau(tau: f64) -> Result<()> {
    if tau.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("tau must be finite"))
    }
}

/// `e^{y} K_{iτ}(y)` for `y > 0`.
pub fn bessel_k_imag_scaled(tau: f64, y: f64, cfg: &QuadratureConfig) -> Result<IntegralResult> {
    check_tau(tau)?;
    if !(y > 0.0 && y.is_finite()) {
        return Err(Error::domain("y must be > 0"));
    }
    let f = |t: f64| {
        let s = (0.5 * t).sinh();
        Complex64::new((-2.0 * y * s * s).exp() * (tau * t).cos(), 0.0)
    };
    // Past the knee 2y sinh²(t/2) = 1 the exponent grows at least at rate y sinh(knee).
    let knee = (2.0 * (0.5 / y).sqrt().asinh()).max(1.0);
    let head = integrate_partitioned(
        f,
        &uniform_partition(0.0, knee, oscillation_pieces(knee, tau)),
        cfg,
    )?;
    let tail = integrate_semi_infinite(
        f,
        knee,
        DecayHint::Exponential {
            rate: y * knee.sinh(),
        },
        cfg,
    )?;
    Ok(head.combine(tail))
}

/// `K_{iτ}(y) = ∫_0^∞ e^{−y cosh t} cos(τt) dt`, real valued.
pub fn bessel_k_imag(tau: f64, y: f64, cfg: &QuadratureConfig) -> Result<IntegralResult> {
    if !(y > 0.0 && y.is_finite()) {
        return Err(Error::domain("y must be > 0"));
    }
    let scale = (-y).exp();
    let scaled = bessel_k_imag_scaled(tau, y, &cfg.for_scaled_result(scale))?;
    Ok(scaled.scaled(Complex64::new(scale, 0.0)))
}

/// `K_{in}(y, ω) = ∫_0^ω e^{−y cosh u} cos(nu) du`, `y ≥ 0`.
pub fn incomplete_bessel(n: u32, y: f64, omega: f64, cfg: &QuadratureConfig) -> Result<IntegralResult> {
    if !(y >= 0.0 && y.is_finite()) {
        return Err(Error::domain("y must be finite and >= 0"));
    }
    if !(omega >= 0.0 && omega.is_finite()) {
        return Err(Error::domain("omega must be finite and >= 0"));
    }
    if omega == 0.0 {
        return Ok(IntegralResult::zero());
    }
    let freq = n as f64;
    let f = |u: f64| {
        let s = (0.5 * u).sinh();
        Complex64::new((-2.0 * y * s * s).exp() * (freq * u).cos(), 0.0)
    };
    let r = integrate_partitioned(
        f,
        &uniform_partition(0.0, omega, oscillation_pieces(omega, freq)),
        &cfg.for_scaled_result((-y).exp()),
    )?;
    Ok(r.scaled(Complex64::new((-y).exp(), 0.0)))
}

/// `K_{in}(y, π)` after integrating by parts twice:
///
/// ```text
/// (−1)^{n+1}/n² · sinh(π) y e^{−y cosh π} + y/n² ∫_0^π e^{−y cosh u} (cosh u − y sinh²u) cos(nu) du
/// ```
///
/// which makes the `O(1/n²)` decay in `n` explicit.
pub fn incomplete_bessel_ibp(n: u32, y: f64, cfg: &QuadratureConfig) -> Result<IntegralResult> {
    if n == 0 {
        return Err(Error::domain("n must be >= 1"));
    }
    if !(y > 0.0 && y.is_finite()) {
        return Err(Error::domain("y must be > 0"));
    }
    let freq = n as f64;
    let f = |u: f64| {
        let s = (0.5 * u).sinh();
        let sh = u.sinh();
        Complex64::new(
            (-2.0 * y * s * s).exp() * (u.cosh() - y * sh * sh) * (freq * u).cos(),
            0.0,
        )
    };
    let integral = integrate_partitioned(
        f,
        &uniform_partition(0.0, PI, oscillation_pieces(PI, freq)),
        cfg,
    )?;
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    let sh_half = (0.5 * PI).sinh();
    let boundary = sign * PI.sinh() * y * (-2.0 * y * sh_half * sh_half).exp();
    let mut r = integral.scaled(Complex64::new(y, 0.0));
    r.value += boundary;
    Ok(r.scaled(Complex64::new((-y).exp() / (freq * freq), 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// K_0 by its ascending series; independent of the integral route.
    fn k0_series(x: f64) -> f64 {
        const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_6;
        let q = 0.25 * x * x;
        let mut term = 1.0;
        let mut harmonic = 0.0;
        let mut i0 = 1.0;
        let mut sum = 0.0;
        for k in 1..60 {
            let kf = k as f64;
            term *= q / (kf * kf);
            harmonic += 1.0 / kf;
            i0 += term;
            sum += term * harmonic;
        }
        -((0.5 * x).ln() + EULER_GAMMA) * i0 + sum
    }

    #[test]
    fn k0_matches_series() {
        let cfg = QuadratureConfig::default();
        for y in [0.1, 1.0, 5.0] {
            let k = bessel_k_imag(0.0, y, &cfg).unwrap();
            let expected = k0_series(y);
            assert!((k.value.re - expected).abs() < 1e-10 * expected.max(1e-3), "{y}: {k:?}");
        }
        assert!((k0_series(1.0) - 0.421_024_438_240_708_3).abs() < 1e-15);
    }

    #[test]
    fn domain_errors() {
        let cfg = QuadratureConfig::default();
        assert!(bessel_k_imag(1.0, 0.0, &cfg).is_err());
        assert!(bessel_k_imag(1.0, -1.0, &cfg).is_err());
        assert!(incomplete_bessel_ibp(0, 1.0, &cfg).is_err());
        assert!(incomplete_bessel(1, -1.0, PI, &cfg).is_err());
    }

    #[test]
    fn incomplete_at_zero_argument() {
        let cfg = QuadratureConfig::default();
        let r = incomplete_bessel(0, 0.0, PI, &cfg).unwrap();
        assert!((r.value.re - PI).abs() < 1e-14);
        for n in 1..4 {
            let r = incomplete_bessel(n, 0.0, PI, &cfg).unwrap();
            assert!(r.value.norm() < 1e-14);
        }
    }

    #[test]
    fn ibp_agrees_with_direct_form() {
        let cfg = QuadratureConfig::with_tolerances(1e-15, 1e-13);
        for n in 1..=3 {
            for y in [0.5, 1.0, 2.0] {
                let a = incomplete_bessel(n, y, PI, &cfg).unwrap();
                let b = incomplete_bessel_ibp(n, y, &cfg).unwrap();
                assert!((a.value - b.value).norm() < 1e-10, "{n} {y}");
            }
        }
    }
}

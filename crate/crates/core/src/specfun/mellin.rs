//! Mellin-Barnes representation of the conical kernel and the decay
//! constant derived from it.
//!
//! For `x > 0` and `ν = iτ − 1/2`,
//!
//! ```text
//! Γ(1+ν−μ) Γ(−ν−μ) (1+x)^{μ/2} P^μ_ν(2x+1)
//!     = 1/(2πi) ∫_{γ−i∞}^{γ+i∞} Γ(s−μ/2) Γ(1+ν−μ/2−s) Γ(−ν−μ/2−s) / Γ(1−μ/2−s) · x^{−s} ds
//! ```
//!
//! with `Re μ/2 < γ < 1/2 − Re μ/2`. The contour runs upwards.

use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent methods take over when std is linked
use num_traits::Float;

use super::gamma::ln_gamma;
use super::{check_broad, KernelDegree, MuParameter};
use crate::error::{Error, Result};
use crate::quadrature::{
    integrate_partitioned, integrate_semi_infinite, oscillation_pieces, uniform_partition,
    DecayHint, IntegralResult, QuadratureConfig,
};

/// Contour placement and truncation for the Mellin-Barnes route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MellinBarnesConfig {
    /// Real part `γ` of the vertical contour.
    pub gamma_abscissa: f64,
    /// The contour is integrated over `Im s ∈ [−T, T]`.
    pub truncation_height: f64,
    pub cfg: QuadratureConfig,
}

impl MellinBarnesConfig {
    /// Strip midpoint `γ = 1/4` and `T = τ + 40`: past `|Im s| = τ` the
    /// integrand falls like `e^{−π|Im s|}`.
    pub fn for_degree(tau: f64, cfg: QuadratureConfig) -> Self {
        MellinBarnesConfig {
            gamma_abscissa: 0.25,
            truncation_height: tau + 40.0,
            cfg,
        }
    }

    /// Checks `Re μ/2 < γ < 1/2 − Re μ/2` and `T > 0`.
    pub fn validate(&self, mu: Complex64) -> Result<()> {
        self.cfg.validate()?;
        let lo = 0.5 * mu.re;
        let hi = 0.5 - 0.5 * mu.re;
        if !(self.gamma_abscissa > lo && self.gamma_abscissa < hi) {
            return Err(Error::config(alloc::format!(
                "contour abscissa {} outside the strip ({lo}, {hi})",
                self.gamma_abscissa
            )));
        }
        if !(self.truncation_height > 0.0 && self.truncation_height.is_finite()) {
            return Err(Error::config("truncation_height must be positive"));
        }
        Ok(())
    }
}

fn ln_integrand(mu: Complex64, tau: f64, ln_x: f64, s: Complex64) -> Result<Complex64> {
    let half_mu = 0.5 * mu;
    Ok(ln_gamma(s - half_mu)?
        + ln_gamma(Complex64::new(0.5, tau) - half_mu - s)?
        + ln_gamma(Complex64::new(0.5, -tau) - half_mu - s)?
        - ln_gamma(1.0 - half_mu - s)?
        - s * ln_x)
}

/// The contour integrand
/// `Γ(s−μ/2) Γ(1/2+iτ−μ/2−s) Γ(1/2−iτ−μ/2−s) / Γ(1−μ/2−s) · x^{−s}`.
pub fn mellin_barnes_integrand(
    mu: Complex64,
    tau: f64,
    x_shift: f64,
    s: Complex64,
) -> Result<Complex64> {
    if !(x_shift > 0.0 && x_shift.is_finite()) {
        return Err(Error::domain("x_shift must be > 0"));
    }
    Ok(ln_integrand(mu, tau, x_shift.ln(), s)?.exp())
}

pub(crate) fn mellin_barnes_shifted(
    mu: Complex64,
    tau: f64,
    x_shift: f64,
    mb: &MellinBarnesConfig,
) -> Result<IntegralResult> {
    check_broad(mu)?;
    mb.validate(mu)?;
    if !(x_shift > 0.0 && x_shift.is_finite()) {
        return Err(Error::domain("x_shift must be > 0"));
    }
    let ln_x = x_shift.ln();
    // Dividing by Γ(1/2+iτ−μ) Γ(1/2−iτ−μ) inside the integral keeps the
    // integrand of order one instead of e^{−πτ}.
    let ln_pair = ln_gamma(Complex64::new(0.5, tau) - mu)? + ln_gamma(Complex64::new(0.5, -tau) - mu)?;
    let gamma = mb.gamma_abscissa;
    let h = |sigma: f64| {
        let s = Complex64::new(gamma, sigma);
        match ln_integrand(mu, tau, ln_x, s) {
            Ok(l) => (l - ln_pair).exp(),
            Err(_) => Complex64::new(f64::NAN, f64::NAN),
        }
    };
    let height = mb.truncation_height;
    let pieces = (height.ceil() as usize).max(oscillation_pieces(2.0 * height, ln_x.abs()));
    let mut r = integrate_partitioned(h, &uniform_partition(-height, height, pieces), &mb.cfg)?;
    // Beyond ±T the integrand decays at least like e^{−π|σ|}.
    let edge = h(height).norm() + h(-height).norm();
    let tail = edge / PI;
    r.error_estimate += tail;
    r.evaluations += 2;
    if !(edge <= mb.cfg.abs_tol) {
        r.converged = false;
    }
    r.converged = r.converged && r.error_estimate <= mb.cfg.tolerance_for(r.value.norm());
    let factor = (-0.5 * mu * (1.0 + x_shift).ln()).exp() / (2.0 * PI);
    Ok(r.scaled(factor))
}

/// `P^μ_{iτ−1/2}(2·x_shift + 1)` from the Mellin-Barnes integral.
pub fn mellin_barnes_legendre(
    mu: &MuParameter,
    degree: KernelDegree,
    x_shift: f64,
    mb: &MellinBarnesConfig,
) -> Result<IntegralResult> {
    mellin_barnes_shifted(mu.value(), degree.checked_tau()?, x_shift, mb)
}

/// Constant of the bound
/// `|P^μ_{−1/2}(2t+1)| ≤ C_μ t^{−γ} (1+t)^{−Re μ/2}`, `t > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayBound {
    pub c_mu: f64,
    pub gamma_exponent: f64,
    pub mu: Complex64,
    pub error_estimate: f64,
}

impl DecayBound {
    /// `C_μ t^{−γ} (1+t)^{−Re μ/2}`.
    pub fn bound(&self, t: f64) -> f64 {
        self.c_mu * t.powf(-self.gamma_exponent) * (1.0 + t).powf(-0.5 * self.mu.re)
    }
}

/// `C_μ = 1/(2π) ∫ |Γ(s−μ/2) Γ²((1−μ)/2−s) / (Γ²(1/2−μ) Γ(1−μ/2−s))| |ds|`
/// along `Re s = γ`, for `Re μ/2 < γ < (1 − Re μ)/2`.
pub fn compute_decay_bound(
    mu: &MuParameter,
    gamma_exponent: f64,
    mb: &MellinBarnesConfig,
) -> Result<DecayBound> {
    let m = mu.value();
    let lo = 0.5 * m.re;
    let hi = 0.5 * (1.0 - m.re);
    if !(gamma_exponent > lo && gamma_exponent < hi) {
        return Err(Error::config(alloc::format!(
            "decay exponent {gamma_exponent} outside ({lo}, {hi})"
        )));
    }
    mb.cfg.validate()?;
    let half_mu = 0.5 * m;
    let ln_norm = 2.0 * ln_gamma(0.5 - m)?.re;
    let ratio = |sigma: f64| -> f64 {
        let s = Complex64::new(gamma_exponent, sigma);
        let l = ln_gamma(s - half_mu).map(|a| a.re).unwrap_or(f64::NAN)
            + 2.0 * ln_gamma(0.5 - half_mu - s).map(|a| a.re).unwrap_or(f64::NAN)
            - ln_gamma(1.0 - half_mu - s).map(|a| a.re).unwrap_or(f64::NAN)
            - ln_norm;
        l.exp()
    };
    let both = |sigma: f64| Complex64::new(ratio(sigma) + ratio(-sigma), 0.0);
    let r = integrate_semi_infinite(both, 0.0, DecayHint::Exponential { rate: 0.9 * PI }, &mb.cfg)?;
    if !r.converged {
        return Err(Error::config("decay constant integral did not converge"));
    }
    Ok(DecayBound {
        c_mu: r.value.re / (2.0 * PI),
        gamma_exponent,
        mu: m,
        error_estimate: r.error_estimate / (2.0 * PI),
    })
}

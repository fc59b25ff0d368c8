//! Euler's gamma function on the complex plane.

use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent methods take over when std is linked
use num_traits::Float;

use crate::error::{Error, Result};

// Godfrey's coefficients for g = 607/128, fifteen terms.
const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS: [f64; 15] = [
    0.999_999_999_999_997_091_82,
    57.156_235_665_862_923_517,
    -59.597_960_355_475_491_248,
    14.136_097_974_741_747_174,
    -0.491_913_816_097_620_199_78,
    0.339_946_499_848_118_886_99e-4,
    0.465_236_289_270_485_756_65e-4,
    -0.983_744_753_048_795_646_77e-4,
    0.158_088_703_224_912_488_84e-3,
    -0.210_264_441_724_104_883_19e-3,
    0.217_439_618_115_212_643_20e-3,
    -0.164_318_106_536_763_890_22e-3,
    0.844_182_239_838_527_432_93e-4,
    -0.261_908_384_015_814_086_70e-4,
    0.368_991_826_595_316_227_04e-5,
];

const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_741_78;

fn check_pole(z: Complex64) -> Result<()> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::Pole(z.re));
    }
    Ok(())
}

/// A logarithm of `Γ(z)`, valid for `Re z ≥ 1/2`.
fn ln_gamma_right(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut series = Complex64::new(LANCZOS[0], 0.0);
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        series += c / (z + k as f64);
    }
    let t = z + (LANCZOS_G + 0.5);
    (z + 0.5) * t.ln() - t + series.ln() + HALF_LN_TWO_PI
}

/// A logarithm of `Γ(z)`.
///
/// The branch is not the principal one of `ln Γ`: only `exp` of the result
/// is meaningful, which is all products and ratios of gamma functions need.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    check_pole(z)?;
    if z.re >= 0.5 {
        return Ok(ln_gamma_right(z));
    }
    // Γ(z) Γ(1 − z) = π / sin(πz)
    let sin = (z * PI).sin();
    Ok(Complex64::new(PI.ln(), 0.0) - sin.ln() - ln_gamma_right(1.0 - z))
}

/// Euler's gamma function.
pub fn complex_gamma(z: Complex64) -> Result<Complex64> {
    check_pole(z)?;
    if z.re >= 0.5 {
        return Ok(ln_gamma_right(z).exp());
    }
    let sin = (z * PI).sin();
    Ok(PI / (sin * ln_gamma_right(1.0 - z).exp()))
}

/// `Γ(1/2 + iτ − μ) Γ(1/2 − iτ − μ)` for real `τ`.
///
/// Computed from logarithms, so the `e^{−πτ}` magnitude neither under- nor
/// overflows for any `τ` below a few hundred.
pub fn gamma_pair_tau(tau: f64, mu: Complex64) -> Result<Complex64> {
    let a = Complex64::new(0.5, tau) - mu;
    let b = Complex64::new(0.5, -tau) - mu;
    Ok((ln_gamma(a)? + ln_gamma(b)?).exp())
}

//! Special-function kernels.
//!
//! The conical Legendre function `P^μ_{iτ−1/2}(x)`, `x > 1`, is available by
//! three routes that share no code beyond the gamma function:
//!
//! | route | representation | well suited to |
//! |-------|----------------|----------------|
//! | [`legendre_conical_mehler`] | finite integral over `(0, arccosh x)` with an endpoint singularity | all `x`, any `τ` |
//! | [`legendre_conical_integral`] | integral over `(0, ∞)` of `cos(τt)(cosh t + x)^{μ−1/2}` | moderate `x`, small `τ` |
//! | [`mellin_barnes_legendre`] | vertical contour integral of a gamma ratio | cross-checks |
//!
//! The semi-infinite route loses roughly `e^{πτ}` in relative accuracy to
//! cancellation, which is why [`KernelRoute::Auto`] prefers the Mehler route
//! once `τ > 1/2`.

mod bessel;
mod gamma;
mod legendre;
mod mellin;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use bessel::{
    bessel_k_imag, bessel_k_imag_scaled, incomplete_bessel, incomplete_bessel_ibp,
};
pub use gamma::{complex_gamma, gamma_pair_tau, ln_gamma};
pub use legendre::{
    conical_kernel, conical_kernel_shifted, conical_mehler_shifted, conical_legendre_shifted,
    incomplete_legendre, incomplete_legendre_ibp, incomplete_legendre_shifted,
    incomplete_ibp_shifted, kernel_envelope_shifted, legendre_conical_integral,
    legendre_conical_mehler, pair_weighted_incomplete_shifted, KernelRoute,
};
pub use mellin::{
    compute_decay_bound, mellin_barnes_integrand, mellin_barnes_legendre, DecayBound,
    MellinBarnesConfig,
};

/// Validity regime of the order μ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `Re μ < 1/2`.
    Broad,
    /// `|Re μ| < 1/2`.
    Strict,
}

pub(crate) const BROAD_MSG: &str = "Re mu must be < 1/2";
pub(crate) const STRICT_MSG: &str = "|Re mu| must be < 1/2";

/// The order μ of the associated Legendre functions, checked against its
/// regime on construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuParameter {
    mu: Complex64,
    regime: Regime,
}

impl MuParameter {
    pub fn new(mu: impl Into<Complex64>, regime: Regime) -> Result<Self> {
        let mu = mu.into();
        if !(mu.re.is_finite() && mu.im.is_finite()) {
            return Err(Error::domain("mu must be finite"));
        }
        let ok = match regime {
            Regime::Broad => mu.re < 0.5,
            Regime::Strict => mu.re.abs() < 0.5,
        };
        if !ok {
            return Err(Error::Regime(match regime {
                Regime::Broad => BROAD_MSG,
                Regime::Strict => STRICT_MSG,
            }));
        }
        Ok(MuParameter { mu, regime })
    }

    pub fn broad(mu: impl Into<Complex64>) -> Result<Self> {
        Self::new(mu, Regime::Broad)
    }

    pub fn strict(mu: impl Into<Complex64>) -> Result<Self> {
        Self::new(mu, Regime::Strict)
    }

    pub fn value(&self) -> Complex64 {
        self.mu
    }

    pub fn re(&self) -> f64 {
        self.mu.re
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// Checks `|Re μ| < 1/2` whatever regime the parameter was built with.
    pub fn require_strict(&self) -> Result<()> {
        if self.mu.re.abs() < 0.5 {
            Ok(())
        } else {
            Err(Error::Regime(STRICT_MSG))
        }
    }
}

/// Degree `ν = iτ − 1/2` of a conical kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelDegree {
    /// `τ = n`. The transforms use `n ≥ 1`; `n = 0` is admitted by the
    /// kernel evaluators because `P^μ_{−1/2}` bounds the whole family.
    Discrete(u32),
    /// `τ ≥ 0`.
    Continuous(f64),
}

impl KernelDegree {
    pub fn tau(&self) -> f64 {
        match *self {
            KernelDegree::Discrete(n) => n as f64,
            KernelDegree::Continuous(tau) => tau,
        }
    }

    /// `ν = iτ − 1/2`.
    pub fn nu(&self) -> Complex64 {
        Complex64::new(-0.5, self.tau())
    }

    pub(crate) fn checked_tau(&self) -> Result<f64> {
        let tau = self.tau();
        if tau.is_finite() && tau >= 0.0 {
            Ok(tau)
        } else {
            Err(Error::domain("tau must be finite and nonnegative"))
        }
    }
}

impl From<u32> for KernelDegree {
    fn from(n: u32) -> Self {
        KernelDegree::Discrete(n)
    }
}

/// `Γ(1/2 + in − μ) Γ(1/2 − in − μ)`.
pub fn gamma_pair(n: u32, mu: &MuParameter) -> Result<Complex64> {
    gamma_pair_tau(n as f64, mu.value())
}

pub(crate) fn check_broad(mu: Complex64) -> Result<()> {
    if mu.re < 0.5 {
        Ok(())
    } else {
        Err(Error::Regime(BROAD_MSG))
    }
}

pub(crate) fn check_x(x: f64) -> Result<f64> {
    if x.is_finite() && x > 1.0 {
        Ok(x - 1.0)
    } else {
        Err(Error::domain("x must be > 1"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regimes() {
        assert!(MuParameter::broad(0.25).is_ok());
        assert!(MuParameter::broad(-3.0).is_ok());
        assert_eq!(MuParameter::broad(0.5), Err(Error::Regime(BROAD_MSG)));
        assert!(MuParameter::strict(-0.49).is_ok());
        assert_eq!(MuParameter::strict(-0.5), Err(Error::Regime(STRICT_MSG)));
        let mu = MuParameter::broad(-0.7).unwrap();
        assert!(mu.require_strict().is_err());
        let mu = MuParameter::broad(Complex64::new(0.2, 0.1)).unwrap();
        assert!(mu.require_strict().is_ok());
    }

    #[test]
    fn gamma_pair_real_for_real_mu() {
        let mu = MuParameter::broad(0.25).unwrap();
        for n in 1..6 {
            let g = gamma_pair(n, &mu).unwrap();
            assert!(g.re > 0.0);
            assert!(g.im.abs() <= 1e-12 * g.norm());
        }
    }
}

use mehler_fock::quadrature::{integrate_adaptive, integrate_partitioned};
use mehler_fock::specfun::{complex_gamma, conical_kernel};
use mehler_fock::transform::{forward_series, inverse_coefficients, ForwardSeries};
use mehler_fock::{
    CoefficientSequence, Complex64, KernelDegree, KernelRoute, MuParameter, QuadratureConfig,
    TransformConfig,
};
use proptest::prelude::*;

fn cfg() -> QuadratureConfig {
    QuadratureConfig::with_tolerances(1e-14, 1e-12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn subdivision_is_consistent(a in -3.0f64..0.0, w in 0.5f64..4.0, s in 0.05f64..0.95, k in 0.0f64..6.0) {
        let b = a + w;
        let c = a + s * w;
        let f = |x: f64| Complex64::new((-x * x).exp() * (k * x).cos(), x.sin());
        let whole = integrate_adaptive(f, a, b, &cfg()).unwrap();
        let split = integrate_partitioned(f, &[a, c, b], &cfg()).unwrap();
        let budget = whole.error_estimate + split.error_estimate + 1e-13;
        prop_assert!((whole.value - split.value).norm() <= budget);
    }

    #[test]
    fn gamma_recurrence_and_conjugation(x in -6.5f64..8.0, y in 0.1f64..20.0) {
        let z = Complex64::new(x, y);
        let g = complex_gamma(z).unwrap();
        let g1 = complex_gamma(z + 1.0).unwrap();
        prop_assert!((g1 - z * g).norm() <= 1e-12 * g1.norm());
        let gc = complex_gamma(z.conj()).unwrap();
        prop_assert!((gc - g.conj()).norm() <= 1e-14 * g.norm());
    }

    #[test]
    fn routes_agree(m in -0.45f64..0.45, n in 1u32..4, lx in -1.5f64..1.5) {
        let mu = MuParameter::broad(m).unwrap();
        let x = 1.0 + 10f64.powf(lx);
        let d = KernelDegree::Discrete(n);
        let a = conical_kernel(&mu, d, x, KernelRoute::Mehler, &cfg()).unwrap();
        let b = conical_kernel(&mu, d, x, KernelRoute::MellinBarnes, &cfg()).unwrap();
        prop_assert!((a.value - b.value).norm() <= 1e-8 * a.value.norm().max(b.value.norm()));
    }

    #[test]
    fn forward_is_linear(
        a in prop::collection::vec(-1.0f64..1.0, 1..5),
        b in prop::collection::vec(-1.0f64..1.0, 1..5),
        alpha in -2.0f64..2.0,
        x in 1.05f64..30.0,
    ) {
        let mu = MuParameter::broad(0.1).unwrap();
        let tc = TransformConfig { cfg: cfg(), ..TransformConfig::default() };
        let len = a.len().max(b.len());
        let get = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
        let combo: Vec<f64> = (0..len).map(|i| alpha * get(&a, i) + get(&b, i)).collect();
        let fa = forward_series(&CoefficientSequence::from_real(&a).unwrap(), &mu, x, &tc).unwrap();
        let fb = forward_series(&CoefficientSequence::from_real(&b).unwrap(), &mu, x, &tc).unwrap();
        let fc = forward_series(&CoefficientSequence::from_real(&combo).unwrap(), &mu, x, &tc).unwrap();
        let budget = 1e-13 * (fa.value.norm() + fb.value.norm() + fc.value.norm()) + 1e-15;
        prop_assert!((fc.value - (alpha * fa.value + fb.value)).norm() <= budget);
    }

    #[test]
    fn kernels_are_deterministic(m in -0.45f64..0.45, tau in 0.0f64..5.0, x in 1.01f64..40.0) {
        let mu = MuParameter::broad(m).unwrap();
        let d = KernelDegree::Continuous(tau);
        let a = conical_kernel(&mu, d, x, KernelRoute::Auto, &cfg()).unwrap();
        let b = conical_kernel(&mu, d, x, KernelRoute::Auto, &cfg()).unwrap();
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn inversion_commutes_with_scaling(re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let mu = MuParameter::broad(0.0).unwrap();
        let tc = TransformConfig {
            cfg: QuadratureConfig::with_tolerances(1e-9, 1e-9),
            ..TransformConfig::default()
        };
        let alpha = Complex64::new(re, im);
        let a = CoefficientSequence::from_real(&[0.5, -0.25]).unwrap();
        let b = a.scaled(alpha);
        let fa = ForwardSeries::new(&a, &mu, &tc);
        let fb = ForwardSeries::new(&b, &mu, &tc);
        for n in 1..=2 {
            let ca = inverse_coefficients(&fa, &mu, n, &tc).unwrap();
            let cb = inverse_coefficients(&fb, &mu, n, &tc).unwrap();
            let budget = cb.error_estimate + alpha.norm() * ca.error_estimate + 1e-12;
            prop_assert!((cb.value - alpha * ca.value).norm() <= budget);
        }
    }
}

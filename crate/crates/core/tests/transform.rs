use std::f64::consts::PI;

use mehler_fock::specfun::{conical_kernel, gamma_pair, legendre_conical_mehler};
use mehler_fock::transform::{
    coefficient_by_quadrature, coefficients_from_psi, dual_inverse_coefficients,
    evaluate_f_from_spec, expand_function_complete, expand_function_incomplete, forward_series,
    inverse_coefficients, inversion_factor, DualSeries, ForwardSeries, SampledFunction,
};
use mehler_fock::{
    CoefficientSequence, Complex64, Error, FunctionSpec, KernelDegree, KernelRoute, MuParameter,
    QuadratureConfig, TransformConfig,
};

// mpmath: f(2) for ψ(u) = sin u, μ = 0, from tests/oracles/reference_values.py.
const F_SIN_AT_2: f64 = 0.853_767_873_838_897_280_9;

fn mu(m: f64) -> MuParameter {
    MuParameter::broad(m).unwrap()
}

fn tc(tol: f64) -> TransformConfig {
    TransformConfig {
        cfg: QuadratureConfig::with_tolerances(tol, tol),
        ..TransformConfig::default()
    }
}

fn seq(values: &[f64]) -> CoefficientSequence {
    CoefficientSequence::from_real(values).unwrap()
}

fn geometric(len: usize) -> CoefficientSequence {
    seq(&(1..=len).map(|m| 0.5f64.powi(m as i32)).collect::<Vec<_>>())
}

#[test]
fn forward_single_term_is_the_kernel() {
    let t = tc(1e-12);
    for x in [1.5, 2.0, 7.0] {
        let f = forward_series(&seq(&[1.0]), &mu(0.25), x, &t).unwrap();
        let p = conical_kernel(&mu(0.25), KernelDegree::Discrete(1), x, KernelRoute::Auto, &t.cfg)
            .unwrap();
        assert_eq!(f.value, p.value);
        assert_eq!(f.tail_bound, 0.0);
        assert_eq!(f.terms, 1);
    }
    let zero = forward_series(&seq(&[]), &mu(0.0), 2.0, &t).unwrap();
    assert_eq!(zero.value, Complex64::new(0.0, 0.0));
    assert!(matches!(forward_series(&seq(&[1.0]), &mu(0.0), 1.0, &t), Err(Error::Domain(_))));
}

#[test]
fn forward_tail_bound_law() {
    let a = geometric(8);
    for x in [1.2, 3.0, 20.0] {
        let full = forward_series(&a, &mu(0.0), x, &tc(1e-13)).unwrap();
        let envelope = legendre_conical_mehler(&mu(0.0), KernelDegree::Discrete(0), x, &tc(1e-13).cfg)
            .unwrap()
            .value
            .norm();
        for m in [2u32, 4, 6] {
            let t = TransformConfig { n_max: m, ..tc(1e-13) };
            let partial = forward_series(&a, &mu(0.0), x, &t).unwrap();
            let tail = a.tail_l1(m as usize);
            assert!((partial.tail_bound - envelope * tail).abs() <= 1e-12 * partial.tail_bound);
            assert!((full.value - partial.value).norm() <= partial.tail_bound, "{x} {m}");
        }
    }
}

#[test]
fn inverse_recovers_unit_sequence() {
    let a = seq(&[1.0]);
    let t = tc(1e-9);
    let f = ForwardSeries::new(&a, &mu(0.0), &t);
    for n in 1..=3 {
        let c = inverse_coefficients(&f, &mu(0.0), n, &t).unwrap();
        let target = if n == 1 { 1.0 } else { 0.0 };
        assert!((c.value - target).norm() <= 1e-5, "{n}: {c:?}");
    }
}

#[test]
fn inverse_of_zero_is_zero() {
    let a = seq(&[0.0, 0.0]);
    let t = tc(1e-9);
    let f = ForwardSeries::new(&a, &mu(0.25), &t);
    for n in 1..=3 {
        let c = inverse_coefficients(&f, &mu(0.25), n, &t).unwrap();
        assert_eq!(c.value, Complex64::new(0.0, 0.0));
    }
    assert!(matches!(inverse_coefficients(&f, &mu(0.25), 0, &t), Err(Error::Domain(_))));
}

#[test]
fn round_trip_negative_order() {
    let a = seq(&[0.5, 0.25, 0.125]);
    let t = tc(1e-9);
    let f = ForwardSeries::new(&a, &mu(-0.3), &t);
    for n in 1..=4u32 {
        let c = inverse_coefficients(&f, &mu(-0.3), n, &t).unwrap();
        assert!((c.value - a.get(n)).norm() <= 1e-5, "{n}: {c:?}");
        assert!(c.converged);
    }
}

#[test]
fn round_trip_from_samples() {
    let a = seq(&[0.5, 0.25]);
    let t = tc(1e-10);
    let grid: Vec<f64> = (0..=400).map(|k| 1.0 + 10f64.powf(-4.0 + 9.0 * k as f64 / 400.0)).collect();
    let values = grid
        .iter()
        .map(|&x| forward_series(&a, &mu(0.0), x, &t).unwrap().value)
        .collect();
    let f = SampledFunction::new(grid, values, 0.5).unwrap();
    let t = TransformConfig { x_max: 1e5, ..tc(1e-8) };
    for n in 1..=2u32 {
        let c = inverse_coefficients(&f, &mu(0.0), n, &t).unwrap();
        assert!((c.value - a.get(n)).norm() <= 1e-3, "{n}: {c:?}");
    }
}

#[test]
fn dual_inverse_recovers_second_unit() {
    let a = seq(&[0.0, 1.0]);
    let t = tc(1e-9);
    let g = DualSeries::new(&a, &mu(0.0), &t);
    for n in 1..=3u32 {
        let c = dual_inverse_coefficients(&g, &mu(0.0), n, &t).unwrap();
        assert!((c.value - a.get(n)).norm() <= 1e-5, "{n}: {c:?}");
    }
}

#[test]
fn dual_inverse_zero_and_linearity() {
    let t = tc(1e-9);
    let zero = seq(&[0.0]);
    let g = DualSeries::new(&zero, &mu(0.2), &t);
    assert_eq!(
        dual_inverse_coefficients(&g, &mu(0.2), 1, &t).unwrap().value,
        Complex64::new(0.0, 0.0)
    );
    let a = seq(&[0.3, -0.2]);
    let alpha = Complex64::new(2.0, -1.5);
    let b = a.scaled(alpha);
    let ga = DualSeries::new(&a, &mu(0.2), &t);
    let gb = DualSeries::new(&b, &mu(0.2), &t);
    let ca = dual_inverse_coefficients(&ga, &mu(0.2), 2, &t).unwrap();
    let cb = dual_inverse_coefficients(&gb, &mu(0.2), 2, &t).unwrap();
    let budget = cb.error_estimate + alpha.norm() * ca.error_estimate + 1e-12;
    assert!((cb.value - alpha * ca.value).norm() <= budget);
}

#[test]
fn dual_inverse_needs_strict_regime() {
    let a = seq(&[1.0]);
    let t = tc(1e-9);
    let g = DualSeries::new(&a, &mu(-0.6), &t);
    assert_eq!(
        dual_inverse_coefficients(&g, &mu(-0.6), 1, &t).unwrap_err(),
        Error::Regime("|Re mu| must be < 1/2")
    );
}

#[test]
fn f_from_spec_reference_and_parity() {
    let t = tc(1e-13);
    let spec = FunctionSpec::from_real_sine(&[1.0], mu(0.0));
    let f = evaluate_f_from_spec(&spec, 2.0, &t).unwrap();
    assert!((f.value.re - F_SIN_AT_2).abs() < 1e-12, "{f:?}");
    let with_even = spec.clone().with_even_part(
        Complex64::new(3.0, 1.0),
        vec![Complex64::new(-2.0, 0.0), Complex64::new(0.5, 0.5)],
    );
    let g = evaluate_f_from_spec(&with_even, 2.0, &t).unwrap();
    assert_eq!(f.value, g.value);
    let empty = FunctionSpec::from_real_sine(&[], mu(0.0));
    assert_eq!(evaluate_f_from_spec(&empty, 3.0, &t).unwrap().value.norm(), 0.0);
    assert!(matches!(evaluate_f_from_spec(&spec, 0.9, &t), Err(Error::Domain(_))));
}

#[test]
fn psi_coefficients_closed_form() {
    let spec = FunctionSpec::from_real_sine(&[0.0, 1.0], mu(0.0));
    let c = coefficients_from_psi(&spec, 2).unwrap();
    let expected = 2.0 * 2f64.sqrt() * PI / (2.0 * PI).sinh();
    assert!((c.re - expected).abs() <= 1e-14 * expected);
    for n in [1, 3, 4, 9] {
        assert_eq!(coefficients_from_psi(&spec, n).unwrap(), Complex64::new(0.0, 0.0));
    }
}

#[test]
fn psi_coefficients_match_quadrature() {
    let t = tc(1e-10);
    for m in [0.0, 0.25] {
        let spec = FunctionSpec::from_real_sine(&[1.0, 0.0, 0.25], mu(m));
        for n in 1..=3u32 {
            let closed = coefficients_from_psi(&spec, n).unwrap();
            let quad = coefficient_by_quadrature(&spec, n, &t).unwrap();
            let scale = (PI * n as f64).sinh();
            assert!((closed - quad.value).norm() * scale <= 1e-6, "{m} {n}: {closed} {quad:?}");
            if closed.norm() > 0.0 {
                assert!((closed - quad.value).norm() <= 1e-6 * closed.norm());
            }
        }
    }
}

#[test]
fn expansion_incomplete_reconstructs() {
    let t = tc(1e-12);
    let cases: [(&[f64], f64); 2] = [(&[0.0, 1.0], 0.0), (&[1.0, 0.0, 0.25], -0.2)];
    for (sine, m) in cases {
        let spec = FunctionSpec::from_real_sine(sine, mu(m));
        for x in [1.5, 2.0, 5.0] {
            let direct = evaluate_f_from_spec(&spec, x, &t).unwrap();
            let series = expand_function_incomplete(&spec, x, &t).unwrap();
            assert!((direct.value - series.value).norm() <= 1e-6 * direct.value.norm(), "{m} {x}");
        }
    }
    let empty = FunctionSpec::from_real_sine(&[], mu(0.0));
    assert_eq!(expand_function_incomplete(&empty, 2.0, &t).unwrap().value.norm(), 0.0);
    let spec = FunctionSpec::from_real_sine(&[0.0, 0.0, 1.0], mu(0.0));
    let short = TransformConfig { n_max: 2, ..t };
    assert!(matches!(expand_function_incomplete(&spec, 2.0, &short), Err(Error::Config(_))));
}

#[test]
fn expansion_complete_reconstructs() {
    let t = tc(1e-9);
    let a = seq(&[1.0]);
    for x in [1.5, 2.0, 5.0] {
        let e = expand_function_complete(&a, &mu(0.0), x, &t).unwrap();
        let f = forward_series(&a, &mu(0.0), x, &t).unwrap();
        assert!((e.value - f.value).norm() <= 1e-5, "{x}");
    }
    let e = expand_function_complete(&a, &mu(0.0), 2.0, &t).unwrap();
    let target = PI / (PI.sinh() * gamma_pair(1, &mu(0.0)).unwrap().re);
    assert!((e.d[0].value.re - target).abs() <= 1e-6 * target);
    let zero = expand_function_complete(&seq(&[0.0, 0.0]), &mu(0.0), 2.0, &t).unwrap();
    assert_eq!(zero.value.norm(), 0.0);
    assert!(expand_function_complete(&a, &mu(-0.5), 2.0, &t).is_err());
}

#[test]
fn fock_prefactor_at_order_zero() {
    for n in 1..=12u32 {
        let f = inversion_factor(n, &mu(0.0)).unwrap();
        let expected = n as f64 * (PI * n as f64).tanh();
        assert!((f.re - expected).abs() <= 1e-13 * expected, "{n}");
        assert!(f.im.abs() <= 1e-13 * expected);
    }
}

#[test]
fn config_is_validated_first() {
    let a = seq(&[1.0]);
    let bad = TransformConfig { n_max: 0, ..TransformConfig::default() };
    assert!(matches!(forward_series(&a, &mu(0.0), 2.0, &bad), Err(Error::Config(_))));
    let bad = TransformConfig { x_max: 1.0, ..TransformConfig::default() };
    assert!(matches!(forward_series(&a, &mu(0.0), 2.0, &bad), Err(Error::Config(_))));
}

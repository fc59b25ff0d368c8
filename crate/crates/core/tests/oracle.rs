use std::f64::consts::PI;

use mehler_fock::oracle::{
    default_suite_mellin, run_suite, summarize, verify_decay_bound, verify_fock_factor,
    verify_kernel_consistency, verify_kl_identity, verify_laplace_identity, verify_orthogonality,
    verify_projection_identity, Comparison, IdentityId, SuiteGrids, Thresholds,
};
use mehler_fock::{Complex64, Error, MellinBarnesConfig, MuParameter, TransformConfig};

// mpmath values from tests/oracles/reference_values.py.
const COTH_PI: f64 = 1.003_741_873_197_321_288_2;
const LAPLACE_0_1_1: f64 = 0.230_930_162_206_519_181_3;
const PROJECTION_0_1_1: f64 = 0.175_362_745_066_417_827_6;
const KL_1_HALF_PI: f64 = 0.118_206_746_072_574_641_97;

fn mu(m: f64) -> MuParameter {
    MuParameter::broad(m).unwrap()
}

fn tc() -> TransformConfig {
    TransformConfig::default()
}

fn mb(n: u32) -> MellinBarnesConfig {
    MellinBarnesConfig::for_degree(n as f64, tc().cfg)
}

#[test]
fn laplace_examples() {
    let r = verify_laplace_identity(&mu(0.0), 1, 1.0, &tc()).unwrap();
    assert!(r.passed && r.rel_err <= 1e-8, "{r:?}");
    assert!((r.rhs.re - LAPLACE_0_1_1).abs() <= 1e-12);
    assert!((r.lhs.re - LAPLACE_0_1_1).abs() <= 1e-9);
    let r = verify_laplace_identity(&mu(-0.3), 2, 0.5, &tc()).unwrap();
    assert!(r.passed && r.rel_err <= 1e-8, "{r:?}");
}

#[test]
fn laplace_large_argument() {
    let r = verify_laplace_identity(&mu(0.0), 1, 20.0, &tc()).unwrap();
    assert!(r.lhs.norm() < 1e-8 && r.rhs.norm() < 1e-8, "{r:?}");
    assert!(r.abs_err <= 1e-12, "{r:?}");
    assert!(verify_laplace_identity(&mu(0.0), 1, 0.0, &tc()).is_err());
}

#[test]
fn orthogonality_order_zero() {
    let (m, reports) = verify_orthogonality(&mu(0.0), 2, &tc()).unwrap();
    assert_eq!(reports.len(), 4);
    assert!(reports.iter().all(|r| r.passed), "{reports:?}");
    assert!((m.entry(1, 1).re - COTH_PI).abs() <= 1e-6 * COTH_PI);
    assert!((m.diagonal_targets[0].re - COTH_PI).abs() <= 1e-13);
    assert!(m.entry(1, 2).norm() <= 1e-6 * m.entry(1, 1).norm());
    assert!(m.entry(2, 1).norm() <= 1e-6 * m.entry(1, 1).norm());
    let off = reports.iter().filter(|r| r.comparison == Comparison::ZeroTarget).count();
    assert_eq!(off, 2);
}

#[test]
fn orthogonality_complex_order() {
    let mu = MuParameter::strict(Complex64::new(0.2, 0.1)).unwrap();
    let (m, reports) = verify_orthogonality(&mu, 2, &tc()).unwrap();
    assert!(reports.iter().all(|r| r.passed), "{reports:?}");
    let d = m.entry(2, 2);
    let target = m.diagonal_targets[1];
    assert!((d - target).norm() <= 1e-6 * target.norm());
}

#[test]
fn orthogonality_needs_strict_regime() {
    assert_eq!(
        verify_orthogonality(&mu(-0.5), 2, &tc()).unwrap_err(),
        Error::Regime("|Re mu| must be < 1/2")
    );
}

#[test]
fn projection_examples() {
    let r = verify_projection_identity(&mu(0.0), 1, 1.0, &tc()).unwrap();
    assert!(r.passed && r.rel_err <= 1e-7, "{r:?}");
    assert!((r.rhs.re - PROJECTION_0_1_1).abs() <= 1e-14);
    let r = verify_projection_identity(&mu(-0.4), 3, 0.5, &tc()).unwrap();
    assert!(r.passed && r.rel_err <= 1e-7, "{r:?}");
    let r = verify_projection_identity(&mu(0.0), 2, 0.5 * PI, &tc()).unwrap();
    assert_eq!(r.comparison, Comparison::ZeroTarget);
    assert!(r.passed && r.lhs.norm() <= 1e-9, "{r:?}");
}

#[test]
fn kl_examples() {
    let r = verify_kl_identity(1, 0.5 * PI, &tc()).unwrap();
    assert!(r.passed && r.rel_err <= 1e-8, "{r:?}");
    assert!((r.rhs.re - KL_1_HALF_PI).abs() <= 1e-15);
    let r = verify_kl_identity(2, 0.5 * PI, &tc()).unwrap();
    assert!(r.passed && r.lhs.norm() <= 1e-10, "{r:?}");
    let r = verify_kl_identity(1, 1.0, &tc()).unwrap();
    assert!(r.passed && r.rel_err <= 1e-8, "{r:?}");
}

#[test]
fn fock_factor_examples() {
    for (n, tol) in [(1, 1e-13), (3, 1e-13), (10, 1e-12)] {
        let r = verify_fock_factor(n).unwrap();
        assert!(r.rel_err <= tol && r.passed, "{r:?}");
        assert!(r.lhs.re.is_finite());
    }
}

#[test]
fn kernel_consistency_examples() {
    for (m, n, x) in [(0.0, 1, 2.0), (0.25, 2, 1.2), (-0.3, 3, 50.0)] {
        let r = verify_kernel_consistency(&mu(m), n, x, &tc(), &mb(n)).unwrap();
        assert!(r.passed && r.rel_err <= 1e-8, "{r:?}");
    }
}

#[test]
fn decay_bound_holds() {
    let ts = [0.01, 0.1, 1.0, 10.0, 100.0];
    let reports = verify_decay_bound(&mu(0.0), 0.25, &ts, &tc(), &mb(0)).unwrap();
    assert_eq!(reports.len(), ts.len());
    for r in &reports {
        assert!(r.passed && r.lhs.re <= r.rhs.re, "{r:?}");
    }
}

#[test]
fn suite_selection_and_order() {
    assert!(run_suite(&[], &SuiteGrids::default(), &tc(), &mb(0)).is_empty());
    let grids = SuiteGrids {
        factor: vec![1],
        ..SuiteGrids::empty()
    };
    let r = run_suite(&[IdentityId::FockFactor], &grids, &tc(), &mb(0));
    assert_eq!(r.len(), 1);
    assert_eq!(r[0].id.as_str(), "factor_2_12");
    let grids = SuiteGrids {
        factor: vec![3, 1, 2],
        kl: vec![(1, 1.0)],
        ..SuiteGrids::empty()
    };
    let all = [IdentityId::FockFactor, IdentityId::KontorovichLebedev];
    let a = run_suite(&all, &grids, &tc(), &mb(0));
    let b = run_suite(&all, &grids, &tc(), &mb(0));
    assert_eq!(a, b);
    let ns: Vec<_> = a.iter().map(|r| (r.id, format!("{:?}", r.params))).collect();
    assert_eq!(ns.len(), 4);
    assert_eq!(ns[3].0, IdentityId::KontorovichLebedev);
    assert!(ns[0].1.contains("Int(3)") && ns[2].1.contains("Int(2)"));
    assert_eq!(summarize(&a), (4, 4));
}

#[test]
fn unattainable_threshold_fails() {
    let grids = SuiteGrids {
        factor: vec![1, 2],
        ..SuiteGrids::empty()
    };
    let mut r = run_suite(&[IdentityId::FockFactor], &grids, &tc(), &mb(0));
    let strict = Thresholds::uniform(1e-30);
    for rep in &mut r {
        rep.rejudge(&strict);
    }
    assert!(r.iter().any(|rep| !rep.passed));
}

#[test]
fn tighter_tolerances_keep_verdicts() {
    let grids = SuiteGrids {
        kernel_consistency: vec![(Complex64::new(0.25, 0.0), 2, 1.2)],
        laplace: vec![(Complex64::new(-0.3, 0.0), 3, 0.5)],
        projection: vec![(Complex64::new(-0.4, 0.0), 2, 2.0)],
        kl: vec![(2, 0.5)],
        ..SuiteGrids::empty()
    };
    let base = tc();
    let tight = TransformConfig { cfg: base.cfg.tightened(10.0), ..base };
    let a = run_suite(&IdentityId::ALL, &grids, &base, &default_suite_mellin(&base));
    let b = run_suite(&IdentityId::ALL, &grids, &tight, &default_suite_mellin(&tight));
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert!(x.passed, "{x:?}");
        assert_eq!(x.passed, y.passed, "{y:?}");
    }
}

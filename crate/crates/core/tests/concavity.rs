use curvheat::concavity::{
    audit_domain, audit_extremes, heated_step, heated_step_inverse, hierarchy_suite, hot_approximation,
    hot_rescale_check, seeded_test_functions, AdmissibleFunction, AuditOptions, ExtremeMode, Sampler, TestShape,
};
use curvheat::geometry::ModelSurface;
use curvheat::ExtReal;
use proptest::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

fn kernel_cdf() -> Normal {
    Normal::new(0.0, 2f64.sqrt()).unwrap()
}

#[test]
#[allow(clippy::approx_constant)]
fn hot_function_fixed_values() {
    assert!(heated_step_inverse(0.5).unwrap().abs() < 1e-10);
    let h1 = AdmissibleFunction::hot(1.0).unwrap();
    let v = h1.eval(0.841345).unwrap().to_f64();
    let oracle = kernel_cdf().inverse_cdf(0.841345);
    assert!((v - oracle).abs() < 1e-8, "{v} vs {oracle}");
    assert!((v - 1.414214).abs() < 1e-5);
    assert_eq!(h1.eval(0.0).unwrap(), ExtReal::NegInf);
}

#[test]
fn gaussian_audits_on_flat_ball() {
    let s = ModelSurface::flat();
    let sampler = Sampler::with_seed(3);
    let opts = AuditOptions::default();
    let gauss = |xi: [f64; 2]| (-(xi[0] * xi[0] + xi[1] * xi[1])).exp();
    let log = audit_domain(&gauss, &AdmissibleFunction::log(), &s, 1.0, &sampler, &opts).unwrap();
    assert!(log.passed(), "{log:?}");
    let neg = audit_domain(&gauss, &AdmissibleFunction::power(-1.0).unwrap(), &s, 1.0, &sampler, &opts).unwrap();
    assert!(neg.passed());
    // inflection at |ξ| = 1/√2, so the plain concavity audit must fail
    let lin = audit_domain(&gauss, &AdmissibleFunction::power(1.0).unwrap(), &s, 1.0, &sampler, &opts).unwrap();
    assert!(!lin.passed());
    assert!(lin.witness.is_some());
    let quasi = audit_extremes(&gauss, ExtremeMode::Quasi, &s, 1.0, &sampler, &opts).unwrap();
    assert!(quasi.passed());
}

#[test]
fn concave_cap_passes_linear_audit_on_sphere() {
    // 1 − ρ²/4 with ρ the geodesic distance is concave on a small spherical ball
    let s = ModelSurface::sphere(1.0).unwrap();
    let f = |xi: [f64; 2]| 1.0 - 0.25 * (xi[0] * xi[0] + xi[1] * xi[1]);
    let r = audit_domain(
        &f,
        &AdmissibleFunction::power(1.0).unwrap(),
        &s,
        0.5,
        &Sampler::with_seed(1),
        &AuditOptions::default(),
    )
    .unwrap();
    assert!(r.passed(), "{r:?}");
}

#[test]
fn hierarchy_has_no_violations_on_curved_surfaces() {
    let fs = seeded_test_functions(11, 6);
    let alphas = [-2.0, -1.0, 0.0, 0.5, 1.0];
    for s in [ModelSurface::sphere(1.0).unwrap(), ModelSurface::hyperbolic(-1.0).unwrap()] {
        let rep = hierarchy_suite(
            &fs,
            &alphas,
            &s,
            0.5,
            &Sampler { pairs: 64, ..Sampler::with_seed(11) },
            &AuditOptions::default(),
        )
        .unwrap();
        assert!(rep.passed(), "{:?}", rep.rows.iter().map(|r| &r.violations).collect::<Vec<_>>());
    }
}

#[test]
fn hot_ladder_rescales_exactly() {
    let s = ModelSurface::flat();
    let f = seeded_test_functions(0, 2).into_iter().find(|f| matches!(f.shape, TestShape::Gaussian { .. })).unwrap();
    let sampler = Sampler { pairs: 64, ..Sampler::with_seed(0) };
    let opts = AuditOptions::default();
    let mut last = f64::INFINITY;
    for b in [10.0, 100.0, 1000.0] {
        let g = hot_approximation(&f, &s, 1.0, b, 1e-6, &sampler, &opts).unwrap();
        assert!(g.report.audit.passed());
        assert!(g.report.sup_error < last);
        last = g.report.sup_error;
        if b > 10.0 {
            let rc = hot_rescale_check(&g, b, 10.0, &s, 1.0, &sampler, &opts).unwrap();
            assert!(rc.passed && rc.max_slack_difference < 1e-12, "{}", rc.max_slack_difference);
        }
    }
}

#[test]
fn seeded_functions_are_reproducible() {
    assert_eq!(seeded_test_functions(5, 8), seeded_test_functions(5, 8));
    assert_ne!(seeded_test_functions(5, 8), seeded_test_functions(6, 8));
}

proptest! {
    #[test]
    fn heated_step_matches_normal_cdf(s in -30.0f64..30.0) {
        let got = heated_step(s);
        let exact = kernel_cdf().cdf(s);
        prop_assert!((got - exact).abs() < 1e-10);
    }

    #[test]
    fn hot_inverse_round_trip(y in 1e-12f64..(1.0 - 1e-12)) {
        let s = heated_step_inverse(y).unwrap();
        prop_assert!((heated_step(s) - y).abs() < 1e-10 * y.max(1e-2));
    }

    #[test]
    fn admissible_eval_inverse_round_trip(alpha in -3.0f64..3.0, r in 1e-3f64..5.0, a in 0.5f64..10.0) {
        for f in [AdmissibleFunction::power(alpha).unwrap(), AdmissibleFunction::hot(a * 2.0 * r).unwrap()] {
            let v = f.eval(r).unwrap();
            prop_assert!(v.is_finite());
            let back = f.inverse(v).unwrap();
            prop_assert!((back - r).abs() < 1e-10 * r.max(1.0), "{} -> {:?} -> {}", r, v, back);
        }
    }

    #[test]
    fn admissible_functions_are_increasing(alpha in -3.0f64..3.0, r in 1e-3f64..4.0, dr in 1e-3f64..1.0) {
        for f in [AdmissibleFunction::power(alpha).unwrap(), AdmissibleFunction::hot(10.0).unwrap()] {
            let (lo, hi) = (f.eval(r).unwrap().to_f64(), f.eval(r + dr).unwrap().to_f64());
            prop_assert!(hi > lo);
        }
    }
}

use approx::assert_abs_diff_eq;
use proptest::prelude::*;

use super::negative::*;
use super::*;
use crate::geometry::{ConvexSubset, PointSpec};
use crate::operators::{catalog_operator, OperatorDescriptor};
use crate::resolvents::{
    bifunction_fixture, dist2_to_set, quadratic, quartic, BifunctionDescriptor, ResolventSource,
};
use crate::schemes::{build_scheme, RunConfig, ScheduleRule, SchemeName, SchemeSchedules};

fn e2(x: f64, y: f64) -> SpacePoint {
    ModelSpace::euclidean(2).point(vec![x, y]).unwrap()
}

fn r1(x: f64) -> SpacePoint {
    ModelSpace::euclidean(1).point(vec![x]).unwrap()
}

fn lambda_one() -> SchemeSchedules {
    SchemeSchedules {
        lambda: Some(ScheduleRule::constant(1.0)),
        ..Default::default()
    }
}

fn rotation() -> Operator {
    catalog_operator(
        ModelSpace::euclidean(2),
        &OperatorDescriptor::Rotation {
            angle: 2.0 * std::f64::consts::PI / 3.0,
        },
    )
    .unwrap()
}

#[test]
fn report_bookkeeping() {
    let mut r = CheckReport::new("t");
    r.assert_le(|| "a".into(), 1.0, 2.0, 0.0);
    assert!(r.passed);
    assert_eq!(r.max_violation, -1.0);
    r.assert_le(|| "b".into(), 3.0, 2.0, 0.5);
    assert!(!r.passed);
    assert_eq!(r.violations.len(), 1);
    assert_eq!(r.max_violation, 0.5);
    r.assert_le(|| "nan".into(), f64::NAN, 0.0, 0.0);
    assert_eq!(r.violation_count, 2);
    assert_eq!(r.samples_tested, 3);
}

#[test]
fn violations_are_capped_but_counted() {
    let mut r = CheckReport::new("t");
    for i in 0..200 {
        r.assert_le(|| format!("{i}"), 1.0, 0.0, 0.0);
    }
    assert_eq!(r.violations.len(), MAX_STORED_VIOLATIONS);
    assert_eq!(r.violation_count, 200);
}

#[test]
fn fejer_passes_on_ppa_quadratic() {
    let s = ModelSpace::euclidean(2);
    let a = e2(1.0, -1.0);
    let scheme = build_scheme(SchemeName::Ppa, &ResolventSource::Function(quadratic(s, a.clone())), &lambda_one()).unwrap();
    let tr = scheme.run(&RunConfig::new(e2(5.0, 3.0))).unwrap();
    let r = check_fejer(&tr, &a).unwrap();
    assert!(r.passed, "{r:?}");
    assert!(r.samples_tested > 10);
}

#[test]
fn fejer_on_constant_trace_has_zero_gaps() {
    let p = e2(0.5, 0.5);
    let mut tr = receding_trace(&p).unwrap();
    for st in &mut tr.steps {
        st.point = p.clone();
    }
    tr.summary.final_point = p.clone();
    let r = check_fejer(&tr, &p).unwrap();
    assert!(r.passed);
    assert_eq!(r.samples_tested, 4);
    assert_eq!(r.max_violation, -tol::FEJER);
}

#[test]
fn fejer_control_fails_at_the_increasing_step() {
    let p = e2(0.0, 0.0);
    let r = check_fejer(&receding_trace(&p).unwrap(), &p).unwrap();
    assert!(!r.passed);
    assert_eq!(r.violation_count, 1);
    assert_eq!(r.violations[0].input, "k = 3 -> 4");
}

#[test]
fn fejer_rejects_space_mismatch() {
    let p = e2(0.0, 0.0);
    let tr = receding_trace(&p).unwrap();
    assert!(matches!(check_fejer(&tr, &r1(0.0)), Err(Error::Domain(_))));
}

#[test]
fn quasi_firm_on_quadratics() {
    let s = ModelSpace::euclidean(3);
    let a = s.point(vec![1.0, 2.0, -1.0]).unwrap();
    let r = check_quasi_firm(&quadratic(s, a.clone()), 1.0, &a, 500, 1).unwrap();
    assert!(r.passed && r.samples_tested == 500, "{r:?}");

    let h = ModelSpace::hyperboloid(2);
    let b = h.lift(&[0.3, -0.7]).unwrap();
    let r = check_quasi_firm(&quadratic(h, b.clone()), 1.0, &b, 500, 2).unwrap();
    assert!(r.passed, "{r:?}");
}

#[test]
fn quasi_firm_at_the_witness_is_tight() {
    let s = ModelSpace::euclidean(1);
    let f = quadratic(s, r1(2.0));
    let j = convex_resolvent(&f, 1.0, &r1(2.0)).unwrap();
    assert_eq!(s.distance(&j, &r1(2.0)).unwrap(), 0.0);
    assert_eq!(s.quasilin(&j, &r1(2.0), &r1(2.0), &r1(2.0)).unwrap(), 0.0);
}

#[test]
fn quasi_firm_on_quartic_below_the_order_limit() {
    let f = quartic(ModelSpace::euclidean(1)).unwrap();
    let r = check_quasi_firm(&f, 0.01, &r1(0.0), 500, 3).unwrap();
    assert!(r.passed, "{r:?}");
}

#[test]
fn quasi_firm_control_fails() {
    let s = ModelSpace::euclidean(2);
    let a = e2(1.0, 1.0);
    let r = check_quasi_firm(&reflecting_quadratic(s, a.clone()), 1.0, &a, 500, 4).unwrap();
    assert!(!r.passed);
    assert_eq!(r.violation_count, 500);
}

#[test]
fn quasi_firm_rejects_a_non_minimizer_witness() {
    let s = ModelSpace::euclidean(1);
    assert!(check_quasi_firm(&quadratic(s, r1(0.0)), 1.0, &r1(1.0), 5, 0).is_err());
}

#[test]
fn sqn_ishikawa_reflection_example() {
    let t = catalog_operator(ModelSpace::euclidean(1), &OperatorDescriptor::ScaledReflection { c: 1.0 }).unwrap();
    let src = SqnSource::Ishikawa {
        operator: t,
        alpha: 0.5,
        beta: 0.5,
    };
    let r = check_sqn_inequality(&src, &r1(0.0), 500, 5).unwrap();
    assert!(r.passed, "{r:?}");
}

#[test]
fn sqn_passes_for_all_sources() {
    let s = ModelSpace::euclidean(2);
    let rot = SqnSource::Ishikawa {
        operator: rotation(),
        alpha: 0.5,
        beta: 0.3,
    };
    let twist = catalog_operator(s, &OperatorDescriptor::Twist { rate: 0.7, radius: 1.0 }).unwrap();
    let lip = SqnSource::Lipschitz {
        operator: twist.clone(),
        lambda: 0.5 / (twist.lipschitz().unwrap() - 1.0),
    };
    let eq = SqnSource::Equilibrium {
        bifunction: bifunction_fixture(s, &BifunctionDescriptor::RotationVi).unwrap(),
        lambda: 1.0,
    };
    for src in [rot, lip, eq] {
        let r = check_sqn_inequality(&src, &s.origin(), 500, 6).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.samples_tested, 500);
    }
}

#[test]
fn sqn_controls_fail() {
    for src in sqn_controls().unwrap() {
        let w = match &src {
            SqnSource::Equilibrium { .. } => ModelSpace::euclidean(2).origin(),
            _ => r1(0.0),
        };
        let r = check_sqn_inequality(&src, &w, 500, 7).unwrap();
        assert!(!r.passed, "{}", r.check_name);
    }
}

#[test]
fn nested_fixed_sets() {
    let s = ModelSpace::euclidean(1);
    let r = check_nested_fixed_sets(&quadratic(s, r1(3.0)), 1.0, 0.5, &[r1(3.0)]).unwrap();
    assert!(r.passed);
    let q = quartic(s).unwrap();
    let r = check_nested_fixed_sets(&q, 0.01, 0.005, &[r1(2.0), r1(0.0)]).unwrap();
    assert!(r.passed, "{r:?}");
}

#[test]
fn nested_preconditions() {
    let s = ModelSpace::euclidean(1);
    let q = quartic(s).unwrap();
    assert!(matches!(check_nested_fixed_sets(&q, 0.01, 0.02, &[r1(2.0)]), Err(Error::Domain(_))));
    assert!(matches!(check_nested_fixed_sets(&q, 0.01, 0.01, &[r1(2.0)]), Err(Error::Domain(_))));
    let err = check_nested_fixed_sets(&q, 0.01, 0.005, &[r1(1.0)]).unwrap_err();
    assert!(err.to_string().contains("not fixed"), "{err}");
}

#[test]
fn nested_control_fails() {
    let f = order_dependent_resolvent();
    let r = check_nested_fixed_sets(&f, 1.0, 0.5, &[r1(0.0), r1(4.0)]).unwrap();
    assert!(!r.passed);
    assert_eq!(r.violation_count, 2);
}

#[test]
fn model_spaces_satisfy_the_axioms() {
    for s in [ModelSpace::euclidean(3), ModelSpace::hyperboloid(2), ModelSpace::spider(4)] {
        let r = check_model_space(s, 1000, 11).unwrap();
        assert!(r.passed, "{s:?}: {r:?}");
        assert!(r.max_violation <= 0.0);
    }
}

#[test]
fn sphere_fails_the_comparison_inequality() {
    let r = check_space_axioms(&RoundSphere, |g| Ok(RoundSphere.sample(g, 1.2)), 1000, 12).unwrap();
    assert!(!r.passed);
    assert!(r.violations.iter().any(|v| v.input.starts_with("cat0_comparison")));
}

#[test]
fn sphere_geodesics_are_consistent() {
    let (a, b) = (vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]);
    let m = RoundSphere.combine(&a, &b, 0.5).unwrap();
    assert_abs_diff_eq!(RoundSphere.distance(&a, &m).unwrap(), std::f64::consts::FRAC_PI_4, epsilon = 1e-15);
}

#[test]
fn halpern_target_examples() {
    // constant zero on the line from u = 1: x_{k+1} = 1/(k+1)
    let s = ModelSpace::euclidean(1);
    let zero = catalog_operator(s, &OperatorDescriptor::Constant { point: PointSpec::Coords(vec![0.0]) }).unwrap();
    let seq = crate::operators::OperatorSequence::constant(zero);
    let cfg = RunConfig::new(r1(1.0))
        .with_anchor(r1(1.0))
        .with_anchor_weights(crate::schemes::harmonic_anchor_weights())
        .with_budget(100_000)
        .with_tolerance(1e-6);
    let tr = crate::schemes::halpern_iterate(&seq, &cfg).unwrap();
    let r = check_halpern_target(&tr, &r1(1.0), &KnownSet::Point(r1(0.0)), 5e-3).unwrap();
    assert!(r.passed, "{r:?}");

    let k = ConvexSubset::segment(e2(0.0, 0.0), e2(1.0, 0.0)).unwrap();
    let f = dist2_to_set(ModelSpace::euclidean(2), k.clone());
    let u = e2(0.3, 2.0);
    let scheme = build_scheme(SchemeName::HalpernPpa, &ResolventSource::Function(f), &lambda_one()).unwrap();
    let tr = scheme.run(&RunConfig::new(e2(3.0, 1.0)).with_anchor(u.clone()).with_tolerance(1e-7)).unwrap();
    let r = check_halpern_target(&tr, &u, &KnownSet::Set(k), 5e-3).unwrap();
    assert!(r.passed, "{r:?}");
}

#[test]
fn halpern_target_trivial_when_anchor_is_fixed() {
    let s = ModelSpace::euclidean(2);
    let k = ConvexSubset::segment(e2(0.0, 0.0), e2(1.0, 0.0)).unwrap();
    let u = e2(0.5, 0.0);
    let scheme = build_scheme(SchemeName::HalpernPpa, &ResolventSource::Function(dist2_to_set(s, k.clone())), &lambda_one()).unwrap();
    let tr = scheme.run(&RunConfig::new(u.clone()).with_anchor(u.clone())).unwrap();
    assert!(tr.steps.iter().all(|st| st.point == u));
    let r = check_halpern_target(&tr, &u, &KnownSet::Set(k), 0.0).unwrap();
    assert!(r.passed);
}

#[test]
fn halpern_target_control_fails_on_plain_ppa() {
    let (tr, u, k) = unanchored_trace().unwrap();
    let r = check_halpern_target(&tr, &u, &k, 5e-3).unwrap();
    assert!(!r.passed);
    assert_abs_diff_eq!(tr.summary.final_point.components()[0], 1.0, epsilon = 1e-6);
}

#[test]
fn checks_are_deterministic() {
    let s = ModelSpace::hyperboloid(2);
    let a = s.lift(&[0.1, 0.2]).unwrap();
    let f = quadratic(s, a.clone());
    let one = check_quasi_firm(&f, 2.0, &a, 50, 99).unwrap();
    let two = check_quasi_firm(&f, 2.0, &a, 50, 99).unwrap();
    assert_eq!(serde_json::to_string(&one).unwrap(), serde_json::to_string(&two).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn passed_iff_no_violations(seed in any::<u64>(), lambda in 0.05f64..5.0) {
        let s = ModelSpace::euclidean(2);
        let f = quadratic(s, s.origin());
        let r = check_quasi_firm(&f, lambda, &s.origin(), 20, seed).unwrap();
        prop_assert_eq!(r.passed, r.violations.is_empty());
        prop_assert!(!r.passed || r.max_violation <= 0.0);
    }

    #[test]
    fn sampler_spreads_around_the_base(seed in any::<u64>(), x in -3.0f64..3.0, y in -3.0f64..3.0) {
        let h = ModelSpace::hyperboloid(2);
        let base = h.lift(&[x, y]).unwrap();
        let sm = Sampler::new(h, 0.5).around(base.clone());
        let mut g = rng(seed);
        for p in sm.sample_many(&mut g, 10).unwrap() {
            prop_assert!(h.distance(&p, &base).unwrap() < 10.0);
        }
    }
}

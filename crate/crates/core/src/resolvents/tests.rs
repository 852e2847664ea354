use approx::assert_abs_diff_eq;
use proptest::prelude::*;

use super::*;
use crate::geometry::{ConvexSubset, KnownSet, ModelSpace, PointSpec, SetSpec, SpacePoint};
use crate::operators::{catalog_operator, OperatorDescriptor};
use crate::schemes::ScheduleRule;

fn r1(x: f64) -> SpacePoint {
    ModelSpace::euclidean(1).point(vec![x]).unwrap()
}

fn e2(x: f64, y: f64) -> SpacePoint {
    ModelSpace::euclidean(2).point(vec![x, y]).unwrap()
}

fn x0(p: &SpacePoint) -> f64 {
    p.vector().unwrap()[0]
}

fn line_quadratic(a: f64) -> Objective {
    quadratic(ModelSpace::euclidean(1), r1(a))
}

#[test]
fn quadratic_prox_matches_stationarity() {
    // (y - a) + (y - x)/λ = 0
    let oracle = |x: f64, a: f64, l: f64| (x + l * a) / (1.0 + l);
    assert_eq!(x0(&convex_resolvent(&line_quadratic(0.0), 1.0, &r1(2.0)).unwrap()), 1.0);
    for (x, a, l) in [(3.0, -1.0, 0.5), (-2.0, 4.0, 3.0)] {
        let y = convex_resolvent(&line_quadratic(a), l, &r1(x)).unwrap();
        assert_abs_diff_eq!(x0(&y), oracle(x, a, l), epsilon = 1e-14);
        let y = convex_resolvent(&line_quadratic(a).without_closed_form(), l, &r1(x)).unwrap();
        assert_abs_diff_eq!(x0(&y), oracle(x, a, l), epsilon = 1e-10);
    }
}

#[test]
fn minimizers_are_fixed() {
    let f = line_quadratic(1.5);
    assert_eq!(convex_resolvent(&f, 2.0, &r1(1.5)).unwrap(), r1(1.5));
    let s = ModelSpace::hyperboloid(2);
    let ball = ConvexSubset::ball(s.lift(&[0.3, 0.1]).unwrap(), 0.5).unwrap();
    let g = dist2_to_set(s, ball);
    let inside = s.lift(&[0.4, 0.2]).unwrap();
    assert_eq!(convex_resolvent(&g, 1.0, &inside).unwrap(), inside);
}

#[test]
fn quartic_keeps_its_stationary_point() {
    let f = quartic(ModelSpace::euclidean(1)).unwrap();
    // f'(2) = 12·2·0² = 0, so 2 solves y + λ f'(y) = 2
    assert_eq!(quartic_slope_at(2.0), 0.0);
    let y = convex_resolvent(&f, 0.01, &r1(2.0)).unwrap();
    assert_abs_diff_eq!(x0(&y), 2.0, epsilon = 1e-12);
    assert_eq!(f.argmin(), Some(&KnownSet::Point(r1(0.0))));
    assert_eq!(x0(&convex_resolvent(&f, 0.01, &r1(0.0)).unwrap()), 0.0);
    // from 5 the step lands at the root of y + 0.12 y (y-2)² = 5
    let y = x0(&convex_resolvent(&f, 0.01, &r1(5.0)).unwrap());
    assert_abs_diff_eq!(y + 0.12 * y * (y - 2.0).powi(2), 5.0, epsilon = 1e-12);
}

fn quartic_slope_at(y: f64) -> f64 {
    12.0 * y.powi(3) - 48.0 * y * y + 48.0 * y
}

#[test]
fn quartic_order_limit() {
    let f = quartic(ModelSpace::euclidean(1)).unwrap();
    assert!(matches!(convex_resolvent(&f, 1.0 / 16.0, &r1(1.0)), Err(Error::Domain(_))));
    assert!(matches!(convex_resolvent(&f, 0.2, &r1(1.0)), Err(Error::Domain(_))));
    assert!(convex_resolvent(&f, 0.06, &r1(1.0)).is_ok());
    assert!(matches!(quartic(ModelSpace::euclidean(2)), Err(Error::Unsupported(_))));
}

#[test]
fn gradient_path_agrees_with_closed_form_off_the_line() {
    let s = ModelSpace::hyperboloid(2);
    let a = s.lift(&[0.8, -0.4]).unwrap();
    let x = s.lift(&[-1.2, 0.9]).unwrap();
    for f in [
        quadratic(s, a.clone()),
        dist2_to_set(s, ConvexSubset::ball(a.clone(), 0.3).unwrap()),
    ] {
        let closed = convex_resolvent(&f, 0.7, &x).unwrap();
        let gd = convex_resolvent(&f.clone().without_closed_form(), 0.7, &x).unwrap();
        assert!(s.distance(&closed, &gd).unwrap() < 1e-9);
    }
}

#[test]
fn spider_needs_a_closed_form() {
    let s = ModelSpace::spider(3);
    let a = s.tree_point(1, 2.0).unwrap();
    let f = quadratic(s, a.clone());
    let y = convex_resolvent(&f, 1.0, &s.tree_point(2, 2.0).unwrap()).unwrap();
    // halfway along the path through the hub
    assert_eq!(y, s.origin());
    assert!(matches!(
        convex_resolvent(&f.without_closed_form(), 1.0, &a),
        Err(Error::Unsupported(_))
    ));
}

#[test]
fn broken_closed_form_is_caught() {
    let f = line_quadratic(0.0).with_closed_form(|_, x| Ok(x.clone()));
    assert!(matches!(convex_resolvent(&f, 1.0, &r1(2.0)), Err(Error::Solver { .. })));
}

#[test]
fn constrained_gradient_path() {
    // ½(y - 3)² + ½(y - 2)² over y <= 1 is minimized at the boundary
    let s = ModelSpace::euclidean(1);
    let half = ConvexSubset::halfspace(vec![1.0], 1.0).unwrap();
    let y = convex_resolvent_on(&line_quadratic(3.0), 1.0, &r1(2.0), &half, &ProxOptions::default()).unwrap();
    assert_abs_diff_eq!(x0(&y), 1.0, epsilon = 1e-12);
    assert!(s.contains(&half, &y).unwrap());
}

fn reflection() -> Operator {
    catalog_operator(ModelSpace::euclidean(1), &OperatorDescriptor::ScaledReflection { c: 1.0 }).unwrap()
}

#[test]
fn lipschitz_resolvent_examples() {
    let s = ModelSpace::euclidean(1);
    let id = catalog_operator(s, &OperatorDescriptor::Identity).unwrap();
    assert_abs_diff_eq!(x0(&lipschitz_resolvent(&id, 2.5, &r1(-1.25)).unwrap()), -1.25, epsilon = 1e-12);

    let c = catalog_operator(
        s,
        &OperatorDescriptor::Constant {
            point: PointSpec::Coords(vec![1.0]),
        },
    )
    .unwrap();
    assert_abs_diff_eq!(x0(&lipschitz_resolvent(&c, 1.0, &r1(0.0)).unwrap()), 0.5, epsilon = 1e-15);

    // y = x/(1+2λ)
    let sol = lipschitz_resolvent_detailed(&reflection(), 1.0, &r1(3.0)).unwrap();
    assert_abs_diff_eq!(x0(&sol.point), 1.0, epsilon = 1e-11);
    assert_eq!(sol.bound, 0.5);
    assert!(sol.max_ratio <= sol.bound + RATIO_SLACK);
}

#[test]
fn lipschitz_order_limit() {
    let s = ModelSpace::euclidean(2);
    let t = catalog_operator(s, &OperatorDescriptor::ScaledRotation { angle: 1.0, scale: 1.5 }).unwrap();
    assert!(matches!(lipschitz_resolvent(&t, 2.0, &e2(1.0, 0.0)), Err(Error::Domain(_))));
    assert!(matches!(lipschitz_resolvent(&t, 3.0, &e2(1.0, 0.0)), Err(Error::Domain(_))));
    let y = lipschitz_resolvent(&t, 1.9, &e2(0.0, 0.0)).unwrap();
    assert!(s.distance(&y, &s.origin()).unwrap() <= 1e-12);
    let bare = Operator::new("bare", s, |x| Ok(x.clone()));
    assert!(matches!(lipschitz_resolvent(&bare, 1.0, &e2(1.0, 0.0)), Err(Error::Domain(_))));
}

#[test]
fn lipschitz_ratio_guard() {
    // declared 0.5-Lipschitz but actually a reflection
    let s = ModelSpace::euclidean(1);
    let liar = Operator::new("liar", s, move |x| s.point(vec![-x0(x)])).with_lipschitz(0.1);
    assert!(matches!(lipschitz_resolvent(&liar, 1.0, &r1(3.0)), Err(Error::Solver { .. })));
}

fn quadratic_bifunction(space: ModelSpace, a: SpacePoint) -> Bifunction {
    Bifunction::minimization(quadratic(space, a), ConvexSubset::WholeSpace)
}

#[test]
fn equilibrium_minimization_example() {
    // (z - a) + λ(z - x) = 0
    let f = quadratic_bifunction(ModelSpace::euclidean(1), r1(0.0));
    assert_abs_diff_eq!(x0(&equilibrium_resolvent(&f, 1.0, &r1(2.0)).unwrap()), 1.0, epsilon = 1e-15);
    assert_eq!(equilibrium_resolvent(&f, 3.0, &r1(0.0)).unwrap(), r1(0.0));
}

#[test]
fn rotation_vi_example() {
    let s = ModelSpace::euclidean(2);
    let f = bifunction_fixture(s, &BifunctionDescriptor::RotationVi).unwrap();
    let z = equilibrium_resolvent(&f, 1.0, &e2(1.0, 0.0)).unwrap();
    // (A + λI) z = λx, A = [[0, 1], [-1, 0]], by Cramer's rule
    let (a, b, c, d) = (1.0, 1.0, -1.0, 1.0);
    let det = a * d - b * c;
    let oracle = [(1.0 * d - b * 0.0) / det, (a * 0.0 - c * 1.0) / det];
    assert_abs_diff_eq!(z.vector().unwrap()[0], oracle[0], epsilon = 1e-9);
    assert_abs_diff_eq!(z.vector().unwrap()[1], oracle[1], epsilon = 1e-9);
    assert_eq!(oracle, [0.5, 0.5]);
    // the equilibrium point is fixed
    assert!(s.distance(&equilibrium_resolvent(&f, 2.0, &s.origin()).unwrap(), &s.origin()).unwrap() <= 1e-10);
    assert!(matches!(equilibrium_resolvent(&f, 0.0, &e2(1.0, 0.0)), Err(Error::Domain(_))));
}

#[test]
fn rotation_vi_on_the_boundary() {
    // far outside the ball the resolvent lands on the unit circle
    let s = ModelSpace::euclidean(2);
    let f = bifunction_fixture(s, &BifunctionDescriptor::RotationVi).unwrap();
    let z = equilibrium_resolvent(&f, 1.0, &e2(10.0, -3.0)).unwrap();
    assert_abs_diff_eq!(s.distance(&z, &s.origin()).unwrap(), 1.0, epsilon = 1e-9);
}

#[test]
fn wrong_inner_solutions_fail_verification() {
    let s = ModelSpace::euclidean(2);
    let vi = bifunction_fixture(s, &BifunctionDescriptor::RotationVi).unwrap();
    let eval = move |x: &SpacePoint, y: &SpacePoint| vi.eval(x, y);
    let lazy = Bifunction::custom("lazy", s, eval, 0.0, ConvexSubset::ball(s.origin(), 1.0).unwrap(), |_, x| {
        Ok(x.clone())
    });
    assert!(matches!(equilibrium_resolvent(&lazy, 1.0, &e2(0.6, 0.0)), Err(Error::Solver { .. })));
}

#[test]
fn understated_theta_breaks_the_inner_iteration() {
    // F(x) = -4x has modulus 4, not the declared 0.5: the inner map expands
    let f = Bifunction::variational_inequality("anti", 1, |v| vec![-4.0 * v[0]], 4.0, 0.5, ConvexSubset::WholeSpace)
        .unwrap();
    assert!(equilibrium_resolvent(&f, 1.0, &r1(0.3)).is_err());
}

#[test]
fn minimization_bifunction_is_the_prox_of_reciprocal_order() {
    for s in [ModelSpace::euclidean(2), ModelSpace::hyperboloid(2)] {
        let a = s.lift(&[0.5, -0.25]).unwrap_or_else(|_| s.point(vec![0.5, -0.25]).unwrap());
        let x = s.lift(&[-1.0, 1.5]).unwrap_or_else(|_| s.point(vec![-1.0, 1.5]).unwrap());
        let g = quadratic(s, a.clone());
        let lam = 2.5;
        let ep = equilibrium_resolvent(&Bifunction::minimization(g.clone(), ConvexSubset::WholeSpace), lam, &x).unwrap();
        let prox = convex_resolvent(&g, 1.0 / lam, &x).unwrap();
        assert!(s.distance(&ep, &prox).unwrap() <= 1e-12);
        // independent form: the point of [x, a] at fraction 1/(1+λ)
        let oracle = s.combine(&x, &a, 1.0 / (1.0 + lam)).unwrap();
        assert!(s.distance(&ep, &oracle).unwrap() <= 1e-12);
    }
}

#[test]
fn constrained_minimization_bifunction() {
    // ½|y - a|² restricted to the unit ball, a outside
    let s = ModelSpace::euclidean(2);
    let f = bifunction_fixture(
        s,
        &BifunctionDescriptor::Minimization {
            function: FunctionDescriptor::Quadratic {
                center: Some(PointSpec::Coords(vec![3.0, 0.0])),
            },
            set: SetSpec::Ball {
                center: PointSpec::Coords(vec![0.0, 0.0]),
                radius: 1.0,
            },
        },
    )
    .unwrap();
    let z = equilibrium_resolvent(&f, 1.0, &e2(3.0, 0.0)).unwrap();
    assert_abs_diff_eq!(x0(&z), 1.0, epsilon = 1e-9);
}

fn resolvent_orders() -> Schedule {
    Schedule::new(
        ScheduleRule::constant(1.0),
        ScheduleClass::ResolventParam { lower: None, upper: None },
    )
    .unwrap()
}

#[test]
fn resolvent_sequence_schedule_rules() {
    let f = ResolventSource::Function(line_quadratic(0.0));
    let seq = resolvent_sequence(&f, &resolvent_orders()).unwrap();
    assert_eq!(seq.witness(), Some(&r1(0.0)));
    assert_eq!(x0(&seq.operator(4).unwrap().apply(&r1(2.0)).unwrap()), 1.0);

    let vanishing = Schedule::new(
        ScheduleRule::power(1.0, 0.0, 1.0),
        ScheduleClass::ResolventParam { lower: None, upper: None },
    );
    assert!(vanishing.unwrap_err().to_string().contains("liminf"));

    let mann = Schedule::new(ScheduleRule::constant(0.5), ScheduleClass::MannParam { bound: None }).unwrap();
    assert!(matches!(resolvent_sequence(&f, &mann), Err(Error::Config(_))));

    let q = ResolventSource::Function(quartic(ModelSpace::euclidean(1)).unwrap());
    assert!(matches!(resolvent_sequence(&q, &resolvent_orders()), Err(Error::Config(_))));

    let t = ResolventSource::Operator(
        catalog_operator(ModelSpace::euclidean(2), &OperatorDescriptor::ScaledRotation { angle: 1.0, scale: 1.5 })
            .unwrap(),
    );
    let two = Schedule::new(
        ScheduleRule::constant(2.0),
        ScheduleClass::ResolventParam { lower: None, upper: None },
    )
    .unwrap();
    assert!(matches!(resolvent_sequence(&t, &two), Err(Error::Config(_))));
    assert!(resolvent_sequence(&t, &resolvent_orders()).is_ok());
}

#[test]
fn equilibrium_sequence_needs_a_margin() {
    let s = ModelSpace::euclidean(2);
    let f = ResolventSource::Bifunction(bifunction_fixture(s, &BifunctionDescriptor::RotationVi).unwrap());
    assert!(matches!(resolvent_sequence(&f, &resolvent_orders()), Err(Error::Config(_))));
    let ok = Schedule::new(
        ScheduleRule::constant(1.0),
        ScheduleClass::ResolventParam {
            lower: Some(1e-3),
            upper: Some(2.0),
        },
    )
    .unwrap();
    let seq = resolvent_sequence(&f, &ok).unwrap();
    assert_eq!(seq.witness(), Some(&s.origin()));
}

#[test]
fn fixtures_deserialize() {
    let d: FunctionDescriptor = serde_json::from_str(r#"{"name":"remark32_quartic"}"#).unwrap();
    assert_eq!(d, FunctionDescriptor::Quartic);
    let d: FunctionDescriptor = serde_json::from_str(r#"{"name":"quartic"}"#).unwrap();
    assert_eq!(d, FunctionDescriptor::Quartic);
    let b: BifunctionDescriptor = serde_json::from_str(r#"{"name":"rotation_vi"}"#).unwrap();
    assert_eq!(b, BifunctionDescriptor::RotationVi);
    assert!(serde_json::from_str::<FunctionDescriptor>(r#"{"name":"cubic"}"#).is_err());
}

// ---- property tests ----

fn any_space() -> impl Strategy<Value = ModelSpace> {
    prop_oneof![
        (1usize..4).prop_map(ModelSpace::euclidean),
        (1usize..4).prop_map(ModelSpace::hyperboloid),
        (2usize..5).prop_map(ModelSpace::spider),
    ]
}

fn sample(space: ModelSpace) -> BoxedStrategy<SpacePoint> {
    match space {
        ModelSpace::Euclidean { dim } => prop::collection::vec(-4.0..4.0f64, dim)
            .prop_map(move |v| space.point(v).unwrap())
            .boxed(),
        ModelSpace::Hyperboloid { dim } => prop::collection::vec(-1.5..1.5f64, dim)
            .prop_map(move |v| space.lift(&v).unwrap())
            .boxed(),
        ModelSpace::Spider { legs } => (0..legs, 0.0..4.0f64)
            .prop_map(move |(l, r)| space.tree_point(l, r).unwrap())
            .boxed(),
    }
}

/// A convex fixture with a known minimizer, and probe points.
fn convex_case() -> impl Strategy<Value = (Objective, Vec<SpacePoint>)> {
    any_space().prop_flat_map(|s| {
        (sample(s), 0.1..2.0f64, any::<bool>(), prop::collection::vec(sample(s), 4)).prop_map(
            move |(a, r, ball, pts)| {
                let f = if ball {
                    dist2_to_set(s, ConvexSubset::ball(a, r).unwrap())
                } else {
                    quadratic(s, a)
                };
                (f, pts)
            },
        )
    })
}

fn quasi_firm_holds(f: &Objective, lambda: f64, x: &SpacePoint) -> Result<(f64, f64), TestCaseError> {
    let s = f.space();
    let xt = f.argmin().unwrap().project(s, x).unwrap();
    let j = convex_resolvent(f, lambda, x).unwrap();
    Ok((s.distance(&j, &xt).unwrap().powi(2), s.quasilin(&j, &xt, x, &xt).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn convex_fixtures_are_midpoint_convex((f, p) in convex_case()) {
        let s = f.space();
        let m = s.combine(&p[0], &p[1], 0.5).unwrap();
        let rhs = 0.5 * f.eval(&p[0]).unwrap() + 0.5 * f.eval(&p[1]).unwrap();
        prop_assert!(f.eval(&m).unwrap() <= rhs + 1e-8);
    }

    #[test]
    fn quartic_is_weakly_convex(x in -3.0..5.0f64, y in -3.0..5.0f64, t in 0.0..=1.0f64) {
        let f = quartic(ModelSpace::euclidean(1)).unwrap();
        let alpha = f.weak_convexity();
        let lhs = f.eval(&r1(t * x + (1.0 - t) * y)).unwrap();
        let rhs = t * f.eval(&r1(x)).unwrap() + (1.0 - t) * f.eval(&r1(y)).unwrap()
            + alpha * t * (1.0 - t) * (x - y).powi(2);
        prop_assert!(lhs <= rhs + 1e-8 * (1.0 + rhs.abs()));
    }

    #[test]
    fn convex_resolvents_are_quasi_firm((f, p) in convex_case(), lambda in 0.05..5.0f64) {
        for x in &p {
            let (lhs, rhs) = quasi_firm_holds(&f, lambda, x)?;
            prop_assert!(lhs <= rhs + 1e-7, "{lhs} > {rhs}");
        }
    }

    #[test]
    fn quartic_resolvent_is_quasi_firm(x in -3.0..5.0f64, lambda in 0.001..0.0624f64) {
        let f = quartic(ModelSpace::euclidean(1)).unwrap();
        let (lhs, rhs) = quasi_firm_holds(&f, lambda, &r1(x))?;
        prop_assert!(lhs <= rhs + 1e-7, "{lhs} > {rhs}");
    }

    #[test]
    fn fixed_sets_shrink_with_the_order(
        (f, p) in convex_case(),
        lambda in 0.1..5.0f64,
        ratio in 0.01..0.99f64,
    ) {
        let s = f.space();
        let mu = ratio * lambda;
        // points of the argmin are fixed for every order
        let cand = f.argmin().unwrap().project(s, &p[0]).unwrap();
        prop_assert!(s.distance(&convex_resolvent(&f, lambda, &cand).unwrap(), &cand).unwrap() <= 1e-10);
        prop_assert!(s.distance(&convex_resolvent(&f, mu, &cand).unwrap(), &cand).unwrap() <= 1e-7);
    }

    #[test]
    fn quartic_fixed_sets_shrink(lambda in 0.002..0.0624f64, ratio in 0.01..0.99f64) {
        let f = quartic(ModelSpace::euclidean(1)).unwrap();
        for p in [0.0, 2.0] {
            let j = convex_resolvent(&f, lambda, &r1(p)).unwrap();
            prop_assert!((x0(&j) - p).abs() <= 1e-10);
            let j = convex_resolvent(&f, ratio * lambda, &r1(p)).unwrap();
            prop_assert!((x0(&j) - p).abs() <= 1e-7);
        }
    }

    #[test]
    fn pseudo_convex_fixed_points_minimize((f, p) in convex_case(), lambda in 0.1..3.0f64) {
        // iterate the resolvent to a fixed point and check it is a minimizer
        let s = f.space();
        let mut y = p[0].clone();
        for _ in 0..2000 {
            let next = convex_resolvent(&f, lambda, &y).unwrap();
            let step = s.distance(&next, &y).unwrap();
            y = next;
            if step <= 1e-12 {
                break;
            }
        }
        if s.distance(&convex_resolvent(&f, lambda, &y).unwrap(), &y).unwrap() <= 1e-10 {
            let proj = f.argmin().unwrap().project(s, &y).unwrap();
            prop_assert!(s.distance(&proj, &y).unwrap() <= 1e-6);
        }
    }
}

fn lipschitz_case() -> impl Strategy<Value = (Operator, f64, Vec<SpacePoint>)> {
    let s = ModelSpace::euclidean(2);
    (
        prop_oneof![
            (-3.0..3.0f64).prop_map(|angle| OperatorDescriptor::Rotation { angle }),
            (0.05..=1.0f64).prop_map(|c| OperatorDescriptor::ScaledReflection { c }),
            (0.1..2.0f64, 0.1..2.0f64).prop_map(|(rate, radius)| OperatorDescriptor::Twist { rate, radius }),
            (-3.0..3.0f64, 1.05..3.0f64).prop_map(|(angle, scale)| OperatorDescriptor::ScaledRotation { angle, scale }),
        ],
        0.05..0.95f64,
        prop::collection::vec(prop::collection::vec(-5.0..5.0f64, 2), 3),
    )
        .prop_map(move |(d, u, v)| {
            let t = catalog_operator(s, &d).unwrap();
            let alpha = t.lipschitz().unwrap();
            let lambda = if alpha > 1.0 { u / (alpha - 1.0) } else { 4.0 * u };
            (t, lambda, v.into_iter().map(|c| s.point(c).unwrap()).collect())
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lipschitz_resolvent_fixes_exactly_f_t((t, lambda, pts) in lipschitz_case()) {
        let s = t.space();
        let p = t.witness().unwrap();
        let jp = lipschitz_resolvent(&t, lambda, p).unwrap();
        prop_assert!(s.distance(&jp, p).unwrap() <= 1e-9);
        for x in &pts {
            let sol = lipschitz_resolvent_detailed(&t, lambda, x).unwrap();
            prop_assert!(sol.max_ratio <= sol.bound + RATIO_SLACK);
            // a fixed point of J is fixed by T
            let j = sol.point;
            if s.distance(&lipschitz_resolvent(&t, lambda, &j).unwrap(), &j).unwrap() <= 1e-10 {
                prop_assert!(s.distance(&t.apply(&j).unwrap(), &j).unwrap() <= 1e-7);
            }
        }
    }

    #[test]
    fn lipschitz_resolvent_residual_bound((t, lambda, pts) in lipschitz_case()) {
        let s = t.space();
        prop_assume!(t.flags().quasi_nonexpansive);
        let p = t.witness().unwrap();
        for x in &pts {
            let j = lipschitz_resolvent(&t, lambda, x).unwrap();
            let d = |a: &SpacePoint, b: &SpacePoint| s.distance(a, b).unwrap();
            let lhs = d(x, &j).powi(2);
            let rhs = lambda / (1.0 + lambda) * (d(x, p).powi(2) - d(&j, p).powi(2));
            prop_assert!(lhs <= rhs + 1e-7, "{lhs} > {rhs}");
        }
    }
}

fn bifunction_case() -> impl Strategy<Value = (Bifunction, f64, Vec<SpacePoint>)> {
    let e = ModelSpace::euclidean(2);
    let h = ModelSpace::hyperboloid(2);
    let vi = (0.05..4.0f64, prop::collection::vec(prop::collection::vec(-3.0..3.0f64, 2), 3)).prop_map(move |(l, v)| {
        let f = bifunction_fixture(e, &BifunctionDescriptor::RotationVi).unwrap();
        (f, l, v.into_iter().map(|c| e.point(c).unwrap()).collect::<Vec<_>>())
    });
    let min = (
        prop::collection::vec(-1.0..1.0f64, 2),
        0.05..4.0f64,
        prop::collection::vec(prop::collection::vec(-1.5..1.5f64, 2), 3),
    )
        .prop_map(move |(a, l, v)| {
            let f = quadratic_bifunction(h, h.lift(&a).unwrap());
            (f, l, v.iter().map(|c| h.lift(c).unwrap()).collect::<Vec<_>>())
        });
    prop_oneof![vi, min]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn bifunction_axioms((f, _l, p) in bifunction_case()) {
        let s = f.space();
        let k = f.feasible().clone();
        let pts: Vec<SpacePoint> = p.iter().map(|x| s.project(&k, x).unwrap()).collect();
        for x in &pts {
            prop_assert!(f.eval(x, x).unwrap().abs() <= 1e-12);
            for y in &pts {
                let sum = f.eval(x, y).unwrap() + f.eval(y, x).unwrap();
                prop_assert!(sum <= f.theta() * s.distance(x, y).unwrap().powi(2) + 1e-8);
                if f.eval(x, y).unwrap() >= 0.0 {
                    prop_assert!(f.eval(y, x).unwrap() <= 1e-8);
                }
            }
        }
    }

    #[test]
    fn equilibrium_residual_bound((f, l, p) in bifunction_case()) {
        let s = f.space();
        let w = f.solutions().unwrap().representative(s).unwrap();
        for x in &p {
            let x = s.project(f.feasible(), x).unwrap();
            let j = equilibrium_resolvent(&f, l, &x).unwrap();
            let d = |a: &SpacePoint, b: &SpacePoint| s.distance(a, b).unwrap();
            let lhs = d(&x, &j).powi(2);
            let rhs = d(&x, &w).powi(2) - d(&j, &w).powi(2);
            prop_assert!(lhs <= rhs + 1e-7, "{lhs} > {rhs}");
        }
    }
}

//! Sampled checks of the inequalities behind the convergence results, with
//! reports that state exactly what was tested.

pub mod negative;
mod sampling;

use serde::Serialize;

pub use sampling::{rng, SampleRng, Sampler};

use crate::error::{Error, Result};
use crate::geometry::{GeodesicSpace, KnownSet, ModelSpace, SpacePoint};
use crate::operators::{ishikawa_operator, Operator};
use crate::resolvents::{convex_resolvent, equilibrium_resolvent, lipschitz_resolvent, Bifunction, Objective};
use crate::schemes::IterationTrace;

/// Slack constants, one per inequality.
pub mod tol {
    pub const FEJER: f64 = 1e-9;
    pub const QUASI_FIRM: f64 = 1e-7;
    pub const SQN: f64 = 1e-7;
    pub const NESTED: f64 = 1e-7;
    /// A nested-fixed-set candidate must satisfy `d(J_λ p, p)` below this.
    pub const NESTED_CANDIDATE: f64 = 1e-10;
    pub const CAT0: f64 = 1e-8;
    pub const CAUCHY_SCHWARZ: f64 = 1e-8;
    pub const QUASILIN: f64 = 1e-9;
    pub const GEODESIC: f64 = 1e-9;
    pub const HALPERN_BOUND: f64 = 1e-8;
}

/// Stored violations per report; the count is always exact.
pub const MAX_STORED_VIOLATIONS: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub input: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

/// Outcome of one sampled check of `lhs <= rhs + slack`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check_name: String,
    pub samples_tested: usize,
    pub violation_count: usize,
    pub violations: Vec<Violation>,
    /// Largest `lhs - rhs - slack` seen; non-positive iff the check passed.
    pub max_violation: f64,
    pub passed: bool,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        CheckReport {
            check_name: name.into(),
            samples_tested: 0,
            violation_count: 0,
            violations: Vec::new(),
            max_violation: f64::NEG_INFINITY,
            passed: true,
        }
    }

    /// Records one instance of `lhs <= rhs + slack`. NaN sides count as violations.
    pub fn assert_le(&mut self, input: impl FnOnce() -> String, lhs: f64, rhs: f64, slack: f64) {
        self.samples_tested += 1;
        let excess = lhs - rhs - slack;
        let bad = !(excess <= 0.0);
        self.max_violation = if excess.is_nan() { f64::INFINITY } else { self.max_violation.max(excess) };
        if bad {
            self.passed = false;
            self.violation_count += 1;
            if self.violations.len() < MAX_STORED_VIOLATIONS {
                self.violations.push(Violation {
                    input: input(),
                    lhs,
                    rhs,
                    slack,
                });
            }
        }
    }

    /// Folds another report's samples into this one.
    pub fn absorb(&mut self, other: CheckReport) {
        self.samples_tested += other.samples_tested;
        self.violation_count += other.violation_count;
        self.max_violation = self.max_violation.max(other.max_violation);
        self.passed &= other.passed;
        for v in other.violations {
            if self.violations.len() < MAX_STORED_VIOLATIONS {
                self.violations.push(Violation {
                    input: format!("{}: {}", other.check_name, v.input),
                    ..v
                });
            }
        }
    }
}

fn show(p: &SpacePoint) -> String {
    format!("{:?}", p.components())
}

fn same_space(space: ModelSpace, p: &SpacePoint) -> Result<()> {
    if p.space() == space {
        Ok(())
    } else {
        Err(Error::domain(format!("point of {:?} checked against {space:?}", p.space())))
    }
}

fn with_context<T>(r: Result<T>, i: usize, x: &SpacePoint) -> Result<T> {
    r.map_err(|e| match e {
        Error::Solver { message, residual } => Error::Solver {
            message: format!("sample {i} at {}: {message}", show(x)),
            residual,
        },
        other => other,
    })
}

/// `d(x_{k+1}, p) <= d(x_k, p)` along the recorded iterates and the final point.
pub fn check_fejer(trace: &IterationTrace, p: &SpacePoint) -> Result<CheckReport> {
    let Some(first) = trace.steps.first() else {
        return Err(Error::domain("empty trace"));
    };
    let space = first.point.space();
    same_space(space, p)?;
    let mut pts: Vec<(usize, &SpacePoint)> = trace.steps.iter().map(|s| (s.k, &s.point)).collect();
    if trace.summary.final_point != *pts[pts.len() - 1].1 {
        pts.push((trace.summary.iterations_run + 1, &trace.summary.final_point));
    }
    let mut report = CheckReport::new("fejer");
    for w in pts.windows(2) {
        let (a, b) = (space.distance(w[0].1, p)?, space.distance(w[1].1, p)?);
        report.assert_le(|| format!("k = {} -> {}", w[0].0, w[1].0), b, a, tol::FEJER);
    }
    Ok(report)
}

/// `d²(J_λ x, x̃) <= <J_λ x x̃, x x̃>` for sampled `x` and a minimizer `x̃`.
pub fn check_quasi_firm(f: &Objective, lambda: f64, witness: &SpacePoint, samples: usize, seed: u64) -> Result<CheckReport> {
    let space = f.space();
    same_space(space, witness)?;
    if let Some(a) = f.argmin() {
        let p = a.project(space, witness)?;
        if space.distance(&p, witness)? > 1e-9 {
            return Err(Error::domain("quasi-firm witness is not a minimizer"));
        }
    }
    let sampler = Sampler::new(space, 2.0).around(witness.clone());
    let mut g = rng(seed);
    let mut report = CheckReport::new("quasi_firm");
    for i in 0..samples {
        let x = sampler.sample(&mut g)?;
        let j = with_context(convex_resolvent(f, lambda, &x), i, &x)?;
        let lhs = space.distance(&j, witness)?.powi(2);
        let rhs = space.quasilin(&j, witness, &x, witness)?;
        report.assert_le(|| show(&x), lhs, rhs, tol::QUASI_FIRM);
    }
    Ok(report)
}

/// Sources whose residual inequality [`check_sqn_inequality`] knows.
#[derive(Clone, Debug)]
pub enum SqnSource {
    /// `((1-α)/α) d²(x, T_{α,β} x) <= d²(x, p) - d²(T_{α,β} x, p)`.
    Ishikawa { operator: Operator, alpha: f64, beta: f64 },
    /// `d²(x, J x) <= (λ/(1+λ)) (d²(x, p) - d²(J x, p))`.
    Lipschitz { operator: Operator, lambda: f64 },
    /// `d²(x, J x) <= d²(x, p) - d²(J x, p)`.
    Equilibrium { bifunction: Bifunction, lambda: f64 },
}

pub fn check_sqn_inequality(source: &SqnSource, witness: &SpacePoint, samples: usize, seed: u64) -> Result<CheckReport> {
    let (space, name) = match source {
        SqnSource::Ishikawa { operator, .. } => (operator.space(), "sqn_ishikawa"),
        SqnSource::Lipschitz { operator, .. } => (operator.space(), "sqn_lipschitz"),
        SqnSource::Equilibrium { bifunction, .. } => (bifunction.space(), "sqn_equilibrium"),
    };
    same_space(space, witness)?;
    let ishikawa = match source {
        SqnSource::Ishikawa { operator, alpha, beta } => Some(ishikawa_operator(operator, *alpha, *beta)?),
        _ => None,
    };
    let radius = match source {
        SqnSource::Equilibrium { .. } => 1.0,
        _ => 2.0,
    };
    let sampler = Sampler::new(space, radius).around(witness.clone());
    let mut g = rng(seed);
    let mut report = CheckReport::new(name);
    for i in 0..samples {
        let x = sampler.sample(&mut g)?;
        let (y, factor, weight) = match source {
            SqnSource::Ishikawa { alpha, .. } => {
                let t = ishikawa.as_ref().expect("built above");
                (t.apply(&x), (1.0 - alpha) / alpha, 1.0)
            }
            SqnSource::Lipschitz { operator, lambda } => {
                (lipschitz_resolvent(operator, *lambda, &x), 1.0, lambda / (1.0 + lambda))
            }
            SqnSource::Equilibrium { bifunction, lambda } => {
                (equilibrium_resolvent(bifunction, *lambda, &x), 1.0, 1.0)
            }
        };
        let y = with_context(y, i, &x)?;
        let lhs = factor * space.distance(&x, &y)?.powi(2);
        let rhs = weight * (space.distance(&x, witness)?.powi(2) - space.distance(&y, witness)?.powi(2));
        report.assert_le(|| show(&x), lhs, rhs, tol::SQN);
    }
    Ok(report)
}

/// Points fixed by `J_λ` are fixed by `J_μ` for `0 < μ < λ`.
pub fn check_nested_fixed_sets(f: &Objective, lambda: f64, mu: f64, candidates: &[SpacePoint]) -> Result<CheckReport> {
    if !(mu > 0.0 && mu < lambda) {
        return Err(Error::domain(format!("nested fixed sets need 0 < mu < lambda, got mu = {mu}, lambda = {lambda}")));
    }
    let space = f.space();
    let mut report = CheckReport::new("nested_fixed_sets");
    for p in candidates {
        same_space(space, p)?;
        let gap = space.distance(&convex_resolvent(f, lambda, p)?, p)?;
        if gap > tol::NESTED_CANDIDATE {
            return Err(Error::domain(format!(
                "candidate {} is not fixed by the resolvent of order {lambda} (moves by {gap})",
                show(p)
            )));
        }
        let moved = space.distance(&convex_resolvent(f, mu, p)?, p)?;
        report.assert_le(|| show(p), moved, 0.0, tol::NESTED);
    }
    Ok(report)
}

/// CAT(0) comparison, Cauchy-Schwarz, the quasi-linearization identities
/// and geodesic consistency on sampled points of any geodesic space.
pub fn check_space_axioms<S, F>(space: &S, sample: F, samples: usize, seed: u64) -> Result<CheckReport>
where
    S: GeodesicSpace,
    F: FnMut(&mut SampleRng) -> Result<S::Point>,
{
    let mut report = CheckReport::new("space_axioms");
    for r in space_axiom_reports(space, sample, samples, seed)? {
        report.absorb(r);
    }
    Ok(report)
}

/// The parts of [`check_space_axioms`] as separate reports, in the order
/// comparison, Cauchy-Schwarz, quasi-linearization, geodesic consistency.
pub fn space_axiom_reports<S, F>(space: &S, mut sample: F, samples: usize, seed: u64) -> Result<[CheckReport; 4]>
where
    S: GeodesicSpace,
    F: FnMut(&mut SampleRng) -> Result<S::Point>,
{
    let mut g = rng(seed);
    let mut cat0 = CheckReport::new("cat0_comparison");
    let mut cs = CheckReport::new("cauchy_schwarz");
    let mut ql = CheckReport::new("quasilinearization");
    let mut geo = CheckReport::new("geodesic_consistency");
    for _ in 0..samples {
        let (a, b, c, d, x) = (sample(&mut g)?, sample(&mut g)?, sample(&mut g)?, sample(&mut g)?, sample(&mut g)?);
        let t: f64 = rand::Rng::random(&mut g);
        let desc = || format!("{a:?}, {b:?}, {c:?}, {d:?}, t = {t}");
        let dist = |p: &S::Point, q: &S::Point| space.distance(p, q);
        let (dab, dac, dbc, dcd) = (dist(&a, &b)?, dist(&a, &c)?, dist(&b, &c)?, dist(&c, &d)?);

        let m = space.combine(&a, &b, t)?;
        let lhs = dist(&m, &c)?.powi(2);
        let rhs = (1.0 - t) * dac * dac + t * dbc * dbc - t * (1.0 - t) * dab * dab;
        cat0.assert_le(desc, lhs, rhs, tol::CAT0);

        let q = space.quasilin(&a, &b, &c, &d)?;
        cs.assert_le(desc, q, dab * dcd, tol::CAUCHY_SCHWARZ);

        let ids = [
            space.quasilin(&a, &b, &a, &b)? - dab * dab,
            q - space.quasilin(&c, &d, &a, &b)?,
            q + space.quasilin(&b, &a, &c, &d)?,
            space.quasilin(&a, &x, &c, &d)? + space.quasilin(&x, &b, &c, &d)? - q,
        ];
        for e in ids {
            ql.assert_le(desc, e.abs(), 0.0, tol::QUASILIN);
        }

        let geodesic = [dist(&a, &m)? - t * dab, dist(&m, &b)? - (1.0 - t) * dab];
        for e in geodesic {
            geo.assert_le(desc, e.abs(), 0.0, tol::GEODESIC);
        }
    }
    Ok([cat0, cs, ql, geo])
}

/// [`check_space_axioms`] with the standard sampler of a model space.
pub fn check_model_space(space: ModelSpace, samples: usize, seed: u64) -> Result<CheckReport> {
    let sampler = Sampler::new(space, 1.5);
    check_space_axioms(&space, |g| sampler.sample(g), samples, seed)
}

/// The final iterate lies within `tolerance` of `x* = P_F u`, and every
/// recorded iterate stays within `max{d(x*, u), d(x*, x_1)}` of `x*`.
pub fn check_halpern_target(
    trace: &IterationTrace,
    u: &SpacePoint,
    fixed_set: &KnownSet,
    tolerance: f64,
) -> Result<CheckReport> {
    let Some(first) = trace.steps.first() else {
        return Err(Error::domain("empty trace"));
    };
    let space = first.point.space();
    same_space(space, u)?;
    let target = fixed_set.project(space, u)?;
    let bound = space.distance(&target, u)?.max(space.distance(&target, &first.point)?);
    let mut report = CheckReport::new("halpern_target");
    let fin = &trace.summary.final_point;
    report.assert_le(|| format!("final point {}", show(fin)), space.distance(fin, &target)?, tolerance, 0.0);
    for s in &trace.steps {
        report.assert_le(
            || format!("k = {}", s.k),
            space.distance(&s.point, &target)?,
            bound,
            tol::HALPERN_BOUND,
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests;

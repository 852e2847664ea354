use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ConvexSubset, KnownSet, ModelSpace, PointSpec, SetSpec, SpacePoint, Tangent};

pub type ScalarFn = Arc<dyn Fn(&SpacePoint) -> Result<f64> + Send + Sync>;
/// Riemannian gradient, as a tangent vector at the argument.
pub type GradientFn = Arc<dyn Fn(&SpacePoint) -> Result<Tangent> + Send + Sync>;
/// `(λ, x) ↦ J_λ x`.
pub type ClosedForm = Arc<dyn Fn(f64, &SpacePoint) -> Result<SpacePoint> + Send + Sync>;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ConvexityFlags {
    pub convex: bool,
    pub quasi_convex: bool,
    pub weakly_convex: bool,
    /// Trusted annotation; pseudo-convexity has no finite certificate.
    pub pseudo_convex: bool,
}

/// A proper function `X -> R ∪ {+inf}` with optional derivative and
/// structural metadata.
#[derive(Clone)]
pub struct Objective {
    name: Arc<str>,
    space: ModelSpace,
    eval: ScalarFn,
    gradient: Option<GradientFn>,
    weak_convexity: f64,
    flags: ConvexityFlags,
    argmin: Option<KnownSet>,
    closed_form: Option<ClosedForm>,
}

impl fmt::Debug for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Objective")
            .field("name", &self.name)
            .field("space", &self.space)
            .field("weak_convexity", &self.weak_convexity)
            .field("flags", &self.flags)
            .field("argmin", &self.argmin)
            .field("gradient", &self.gradient.is_some())
            .field("closed_form", &self.closed_form.is_some())
            .finish()
    }
}

impl Objective {
    pub fn new(
        name: impl Into<Arc<str>>,
        space: ModelSpace,
        eval: impl Fn(&SpacePoint) -> Result<f64> + Send + Sync + 'static,
    ) -> Self {
        Objective {
            name: name.into(),
            space,
            eval: Arc::new(eval),
            gradient: None,
            weak_convexity: 0.0,
            flags: ConvexityFlags::default(),
            argmin: None,
            closed_form: None,
        }
    }

    pub fn with_gradient(
        mut self,
        g: impl Fn(&SpacePoint) -> Result<Tangent> + Send + Sync + 'static,
    ) -> Self {
        self.gradient = Some(Arc::new(g));
        self
    }

    pub fn with_closed_form(
        mut self,
        j: impl Fn(f64, &SpacePoint) -> Result<SpacePoint> + Send + Sync + 'static,
    ) -> Self {
        self.closed_form = Some(Arc::new(j));
        self
    }

    /// Declares `f(tx ⊕ (1-t)y) <= t f(x) + (1-t) f(y) + α t(1-t) d²(x, y)`.
    pub fn with_weak_convexity(mut self, alpha: f64) -> Self {
        self.weak_convexity = alpha;
        self.flags.weakly_convex = true;
        self
    }

    pub fn with_flags(mut self, flags: ConvexityFlags) -> Self {
        self.flags = ConvexityFlags {
            weakly_convex: flags.weakly_convex || self.flags.weakly_convex,
            ..flags
        };
        self
    }

    pub fn with_argmin(mut self, argmin: KnownSet) -> Self {
        self.argmin = Some(argmin);
        self
    }

    /// Drops the closed-form resolvent so the iterative solver is used.
    pub fn without_closed_form(mut self) -> Self {
        self.closed_form = None;
        self
    }

    pub fn eval(&self, x: &SpacePoint) -> Result<f64> {
        (self.eval)(x)
    }

    pub fn gradient(&self, x: &SpacePoint) -> Option<Result<Tangent>> {
        self.gradient.as_ref().map(|g| g(x))
    }

    pub fn has_gradient(&self) -> bool {
        self.gradient.is_some()
    }

    pub(crate) fn closed_form(&self) -> Option<&ClosedForm> {
        self.closed_form.as_ref()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn space(&self) -> ModelSpace {
        self.space
    }

    /// Weak-convexity modulus; 0 for convex functions.
    pub fn weak_convexity(&self) -> f64 {
        self.weak_convexity
    }

    pub fn flags(&self) -> ConvexityFlags {
        self.flags
    }

    pub fn argmin(&self) -> Option<&KnownSet> {
        self.argmin.as_ref()
    }

    /// Largest admissible resolvent order, `1/(2α)` for weakly convex `f`.
    pub fn max_order(&self) -> f64 {
        if self.weak_convexity > 0.0 {
            0.5 / self.weak_convexity
        } else {
            f64::INFINITY
        }
    }
}

/// Function fixtures addressable from experiment configs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionDescriptor {
    /// `½ d²(·, a)`; `a` defaults to the origin.
    Quadratic {
        #[serde(default)]
        center: Option<PointSpec>,
    },
    /// `3x⁴ - 16x³ + 24x²` on the real line.
    /// Also accepted under its legacy config name.
    #[serde(alias = "remark32_quartic")]
    Quartic,
    /// `½ d²(·, K)`.
    Dist2ToSet { set: SetSpec },
}

pub fn objective_fixture(space: ModelSpace, desc: &FunctionDescriptor) -> Result<Objective> {
    match desc {
        FunctionDescriptor::Quadratic { center } => {
            let a = match center {
                Some(p) => p.resolve(space)?,
                None => space.origin(),
            };
            Ok(quadratic(space, a))
        }
        FunctionDescriptor::Quartic => quartic(space),
        FunctionDescriptor::Dist2ToSet { set } => Ok(dist2_to_set(space, set.resolve(space)?)),
    }
}

const CONVEX: ConvexityFlags = ConvexityFlags {
    convex: true,
    quasi_convex: true,
    weakly_convex: false,
    pseudo_convex: true,
};

/// `½ d²(·, a)`, with resolvent `(1/(1+λ)) x ⊕ (λ/(1+λ)) a`.
pub fn quadratic(space: ModelSpace, a: SpacePoint) -> Objective {
    let (a1, a2, a3) = (a.clone(), a.clone(), a.clone());
    let mut f = Objective::new("quadratic", space, move |y| Ok(0.5 * space.distance(y, &a1)?.powi(2)))
        .with_flags(CONVEX)
        .with_argmin(KnownSet::Point(a));
    if !matches!(space, ModelSpace::Spider { .. }) {
        f = f.with_gradient(move |y| Ok(space.log_map(y, &a2)?.scaled(-1.0)));
    }
    f.with_closed_form(move |lambda, x| space.combine(x, &a3, lambda / (1.0 + lambda)))
}

/// `½ d²(·, K)`, with resolvent `(1/(1+λ)) x ⊕ (λ/(1+λ)) P_K x`.
pub fn dist2_to_set(space: ModelSpace, set: ConvexSubset) -> Objective {
    let (s1, s2, s3) = (set.clone(), set.clone(), set.clone());
    let mut f = Objective::new("dist2_to_set", space, move |y| {
        let p = space.project(&s1, y)?;
        Ok(0.5 * space.distance(y, &p)?.powi(2))
    })
    .with_flags(CONVEX)
    .with_argmin(KnownSet::Set(set));
    if !matches!(space, ModelSpace::Spider { .. }) {
        f = f.with_gradient(move |y| {
            let p = space.project(&s2, y)?;
            Ok(space.log_map(y, &p)?.scaled(-1.0))
        });
    }
    f.with_closed_form(move |lambda, x| {
        let p = space.project(&s3, x)?;
        space.combine(x, &p, lambda / (1.0 + lambda))
    })
}

fn quartic_value(y: f64) -> f64 {
    y * y * (3.0 * y * y - 16.0 * y + 24.0)
}

fn quartic_slope(y: f64) -> f64 {
    12.0 * y * (y - 2.0).powi(2)
}

/// Root of `y + λ f'(y) = x`; strictly increasing in `y` when `λ < 1/16`.
fn quartic_prox(lambda: f64, x: f64) -> Result<f64> {
    let h = |y: f64| y + lambda * quartic_slope(y) - x;
    let (mut lo, mut hi) = (x - 1.0, x + 1.0);
    let mut width = 1.0;
    while h(lo) > 0.0 {
        width *= 2.0;
        lo = x - width;
    }
    width = 1.0;
    while h(hi) < 0.0 {
        width *= 2.0;
        hi = x + width;
    }
    let mut y = x.clamp(lo, hi);
    for _ in 0..200 {
        let v = h(y);
        if v == 0.0 {
            return Ok(y);
        }
        if v < 0.0 {
            lo = y;
        } else {
            hi = y;
        }
        let slope = 1.0 + lambda * 12.0 * (y - 2.0) * (3.0 * y - 2.0);
        let newton = y - v / slope;
        let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if next == y || hi - lo <= 4.0 * f64::EPSILON * y.abs().max(1.0) {
            return Ok(next);
        }
        y = next;
    }
    Err(Error::solver(format!("quartic prox at x = {x} did not settle"), Some(h(y).abs())))
}

/// `f(x) = 3x⁴ - 16x³ + 24x²` on the real line: 8-weakly convex and
/// quasi-convex, minimized only at 0, with the stationary non-minimizer 2.
pub fn quartic(space: ModelSpace) -> Result<Objective> {
    if space != ModelSpace::euclidean(1) {
        return Err(Error::unsupported(format!("the quartic fixture lives on the real line, not {space:?}")));
    }
    let zero = space.origin();
    Ok(Objective::new("quartic", space, |y| Ok(quartic_value(y.vec_unchecked()[0])))
        .with_gradient(|y| Ok(Tangent(vec![quartic_slope(y.vec_unchecked()[0])])))
        .with_weak_convexity(8.0)
        .with_flags(ConvexityFlags {
            convex: false,
            quasi_convex: true,
            weakly_convex: true,
            pseudo_convex: false,
        })
        .with_argmin(KnownSet::Point(zero))
        .with_closed_form(move |lambda, x| {
            let y = quartic_prox(lambda, x.vec_unchecked()[0])?;
            space.point(vec![y])
        }))
}

use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{convex_resolvent_on, objective_fixture, FunctionDescriptor, Objective, ProxOptions};
use crate::error::{Error, Result};
use crate::geometry::{ConvexSubset, KnownSet, ModelSpace, PointSpec, SetSpec, SpacePoint};

pub type BivariateFn = Arc<dyn Fn(&SpacePoint, &SpacePoint) -> Result<f64> + Send + Sync>;
pub type VectorField = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
/// `(λ, x) ↦ z`, an inner solver supplied by the caller.
pub type InnerSolver = Arc<dyn Fn(f64, &SpacePoint) -> Result<SpacePoint> + Send + Sync>;

pub const VERIFY_TOL: f64 = 1e-7;
pub const VERIFY_DIRECTIONS: usize = 64;
pub const VERIFY_RADII: usize = 8;
pub const VI_TOL: f64 = 1e-10;
pub const VI_BUDGET: usize = 1_000_000;

/// How the resolvent of a bifunction is constructed.
#[derive(Clone)]
pub enum BifunctionStructure {
    /// `f(x, y) = g(y) - g(x)`.
    Minimization(Objective),
    /// `f(x, y) = <F(x), y - x>` on a Euclidean set.
    VariationalInequality {
        field: VectorField,
        lipschitz: f64,
        /// Inner projected step; defaults to `(λ-θ)/(L+λ)²`.
        step: Option<f64>,
    },
    Custom(InnerSolver),
}

impl fmt::Debug for BifunctionStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BifunctionStructure::Minimization(g) => f.debug_tuple("Minimization").field(g).finish(),
            BifunctionStructure::VariationalInequality { lipschitz, step, .. } => f
                .debug_struct("VariationalInequality")
                .field("lipschitz", lipschitz)
                .field("step", step)
                .finish_non_exhaustive(),
            BifunctionStructure::Custom(_) => f.write_str("Custom"),
        }
    }
}

/// An equilibrium bifunction `f: K × K -> R` with `f(x, x) = 0`.
#[derive(Clone)]
pub struct Bifunction {
    name: Arc<str>,
    space: ModelSpace,
    eval: BivariateFn,
    theta: f64,
    structure: BifunctionStructure,
    feasible: ConvexSubset,
    solutions: Option<KnownSet>,
    pseudo_monotone: bool,
}

impl fmt::Debug for Bifunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Bifunction")
            .field("name", &self.name)
            .field("space", &self.space)
            .field("theta", &self.theta)
            .field("structure", &self.structure)
            .field("feasible", &self.feasible)
            .field("solutions", &self.solutions)
            .finish_non_exhaustive()
    }
}

impl Bifunction {
    /// `f(x, y) = g(y) - g(x)` on `K`.
    pub fn minimization(g: Objective, feasible: ConvexSubset) -> Self {
        let space = g.space();
        let h = g.clone();
        let solutions = match (g.argmin(), &feasible) {
            (Some(a), ConvexSubset::WholeSpace) => Some(a.clone()),
            _ => None,
        };
        Bifunction {
            name: format!("minimization({})", g.name()).into(),
            space,
            eval: Arc::new(move |x, y| Ok(h.eval(y)? - h.eval(x)?)),
            theta: 0.0,
            structure: BifunctionStructure::Minimization(g),
            feasible,
            solutions,
            pseudo_monotone: true,
        }
    }

    /// `f(x, y) = <F(x), y - x>` with `F` declared `L`-Lipschitz and
    /// `<F(x) - F(y), x - y> >= -θ |x - y|²`.
    pub fn variational_inequality(
        name: impl Into<Arc<str>>,
        dim: usize,
        field: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
        lipschitz: f64,
        theta: f64,
        feasible: ConvexSubset,
    ) -> Result<Self> {
        if !(lipschitz >= 0.0 && theta >= 0.0) {
            return Err(Error::domain("VI constants must be non-negative"));
        }
        let field: VectorField = Arc::new(field);
        let fld = field.clone();
        Ok(Bifunction {
            name: name.into(),
            space: ModelSpace::euclidean(dim),
            eval: Arc::new(move |x, y| {
                let (xv, yv) = (x.vec_unchecked(), y.vec_unchecked());
                Ok(fld(xv).iter().zip(yv.iter().zip(xv)).map(|(fi, (yi, xi))| fi * (yi - xi)).sum())
            }),
            theta,
            structure: BifunctionStructure::VariationalInequality {
                field,
                lipschitz,
                step: None,
            },
            feasible,
            solutions: None,
            pseudo_monotone: theta == 0.0,
        })
    }

    pub fn custom(
        name: impl Into<Arc<str>>,
        space: ModelSpace,
        eval: impl Fn(&SpacePoint, &SpacePoint) -> Result<f64> + Send + Sync + 'static,
        theta: f64,
        feasible: ConvexSubset,
        solver: impl Fn(f64, &SpacePoint) -> Result<SpacePoint> + Send + Sync + 'static,
    ) -> Self {
        Bifunction {
            name: name.into(),
            space,
            eval: Arc::new(eval),
            theta,
            structure: BifunctionStructure::Custom(Arc::new(solver)),
            feasible,
            solutions: None,
            pseudo_monotone: false,
        }
    }

    pub fn with_solutions(mut self, s: KnownSet) -> Self {
        self.solutions = Some(s);
        self
    }

    pub fn with_pseudo_monotone(mut self, flag: bool) -> Self {
        self.pseudo_monotone = flag;
        self
    }

    /// Overrides the inner VI step size.
    pub fn with_vi_step(mut self, gamma: f64) -> Self {
        if let BifunctionStructure::VariationalInequality { step, .. } = &mut self.structure {
            *step = Some(gamma);
        }
        self
    }

    pub fn eval(&self, x: &SpacePoint, y: &SpacePoint) -> Result<f64> {
        (self.eval)(x, y)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn space(&self) -> ModelSpace {
        self.space
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn structure(&self) -> &BifunctionStructure {
        &self.structure
    }

    pub fn feasible(&self) -> &ConvexSubset {
        &self.feasible
    }

    /// The equilibrium set `S(f, K)` when known.
    pub fn solutions(&self) -> Option<&KnownSet> {
        self.solutions.as_ref()
    }

    pub fn pseudo_monotone(&self) -> bool {
        self.pseudo_monotone
    }
}

/// `z ∈ K` with `f(z, y) + λ<xz, zy> >= 0` for all `y ∈ K`.
///
/// For `Minimization(g)` this is `argmin_{y∈K} g(y) + (λ/2) d²(y, x)`, the
/// convex resolvent of order `1/λ`: comparing `z` with `z ⊕ y` in the
/// subproblem and letting the weight vanish gives exactly
/// `g(y) - g(z) + (λ/2)(d²(x,y) - d²(x,z) - d²(z,y)) >= 0`.
pub fn equilibrium_resolvent(f: &Bifunction, lambda: f64, x: &SpacePoint) -> Result<SpacePoint> {
    if !(lambda > f.theta) || !lambda.is_finite() {
        return Err(Error::domain(format!(
            "equilibrium resolvent needs lambda > theta = {}, got {lambda}",
            f.theta
        )));
    }
    if x.space() != f.space {
        return Err(Error::domain(format!("{} lives on {:?}", f.name, f.space)));
    }
    let z = match &f.structure {
        BifunctionStructure::Minimization(g) => {
            convex_resolvent_on(g, 1.0 / lambda, x, &f.feasible, &ProxOptions::default())?
        }
        BifunctionStructure::VariationalInequality { field, lipschitz, step } => {
            let gamma = step.unwrap_or((lambda - f.theta) / (lipschitz + lambda).powi(2));
            solve_vi(f, field, gamma, lambda, x)?
        }
        BifunctionStructure::Custom(solver) => solver(lambda, x)?,
    };
    verify(f, lambda, x, &z)?;
    Ok(z)
}

/// Fixed point of `z ↦ P_K(z - γ(F(z) + λ(z - x)))`.
fn solve_vi(f: &Bifunction, field: &VectorField, gamma: f64, lambda: f64, x: &SpacePoint) -> Result<SpacePoint> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::domain(format!("VI step must be positive, got {gamma}")));
    }
    let space = f.space;
    let xv = x.vec_unchecked();
    let mut z = space.project(&f.feasible, x)?;
    let mut step = f64::INFINITY;
    for _ in 0..VI_BUDGET {
        let zv = z.vec_unchecked();
        let fz = field(zv);
        let trial: Vec<f64> = zv
            .iter()
            .zip(&fz)
            .zip(xv)
            .map(|((zi, fi), xi)| zi - gamma * (fi + lambda * (zi - xi)))
            .collect();
        let next = space.project(&f.feasible, &space.point(trial)?)?;
        step = space.distance(&z, &next)?;
        z = next;
        if step <= VI_TOL {
            return Ok(z);
        }
    }
    Err(Error::solver(
        format!("VI inner iteration for {} exceeded {VI_BUDGET} steps", f.name),
        Some(step),
    ))
}

/// Deterministic probe points of `K` around `z`: the images under `P_K` of
/// 64 directions × 8 radii, plus the extreme points of `K` when it has them.
pub fn verification_points(space: ModelSpace, set: &ConvexSubset, z: &SpacePoint, scale: f64) -> Result<Vec<SpacePoint>> {
    let mut pts = Vec::with_capacity(VERIFY_DIRECTIONS * VERIFY_RADII + 2);
    let (base, radii): (SpacePoint, Vec<f64>) = match set {
        ConvexSubset::Ball { center, radius } => (
            center.clone(),
            (1..=VERIFY_RADII).map(|i| radius * i as f64 / VERIFY_RADII as f64).collect(),
        ),
        // far hyperbolic probes lose all precision in the quasi-linearization
        _ if matches!(space, ModelSpace::Hyperboloid { .. }) => {
            let reach = (2.0 * (1.0 + scale)).min(4.0);
            (
                z.clone(),
                (1..=VERIFY_RADII).map(|i| reach * i as f64 / VERIFY_RADII as f64).collect(),
            )
        }
        _ => (
            z.clone(),
            (0..VERIFY_RADII).map(|i| 2f64.powi(i as i32 - 3) * (1.0 + scale)).collect(),
        ),
    };
    match space {
        ModelSpace::Spider { legs } => {
            let per_leg = (VERIFY_DIRECTIONS * VERIFY_RADII / legs).max(1);
            let far = radii.iter().cloned().fold(0.0, f64::max) + base.tree().unwrap().1;
            for leg in 0..legs {
                for i in 1..=per_leg {
                    let w = space.tree_point(leg, far * i as f64 / per_leg as f64)?;
                    pts.push(space.project(set, &w)?);
                }
            }
        }
        ModelSpace::Euclidean { dim } | ModelSpace::Hyperboloid { dim } => {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..VERIFY_DIRECTIONS {
                let dir: Vec<f64> = loop {
                    let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
                    if v.iter().any(|c: &f64| c.abs() > 1e-3) {
                        break v;
                    }
                };
                let u = space.unit_tangent(&base, &dir)?;
                for r in &radii {
                    let w = space.exp_map(&base, &u.scaled(*r))?;
                    pts.push(space.project(set, &w)?);
                }
            }
        }
    }
    if let ConvexSubset::Segment { a, b } = set {
        pts.push(a.clone());
        pts.push(b.clone());
    }
    Ok(pts)
}

fn verify(f: &Bifunction, lambda: f64, x: &SpacePoint, z: &SpacePoint) -> Result<()> {
    let space = f.space;
    if !space.contains(&f.feasible, z)? {
        return Err(Error::solver(format!("{} resolvent left the feasible set", f.name), None));
    }
    let scale = space.distance(x, z)?;
    for y in verification_points(space, &f.feasible, z, scale)? {
        let v = f.eval(z, &y)? + lambda * space.quasilin(x, z, z, &y)?;
        if v < -VERIFY_TOL {
            return Err(Error::solver(
                format!(
                    "equilibrium inequality fails for {} at y = {:?}: value {v}",
                    f.name,
                    y.components()
                ),
                Some(-v),
            ));
        }
    }
    Ok(())
}

/// Bifunction fixtures addressable from experiment configs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum BifunctionDescriptor {
    /// `F(x) = Ax` with `A` the quarter turn, on the closed unit ball of the plane.
    RotationVi,
    /// `F(x) = Ax + b` on a Euclidean set, with declared modulus `theta`.
    LinearVi {
        matrix: Vec<Vec<f64>>,
        #[serde(default)]
        shift: Option<Vec<f64>>,
        #[serde(default)]
        theta: f64,
        #[serde(default = "whole")]
        set: SetSpec,
        #[serde(default)]
        solution: Option<PointSpec>,
        #[serde(default)]
        step: Option<f64>,
    },
    /// `f(x, y) = g(y) - g(x)` on `K`.
    Minimization {
        function: FunctionDescriptor,
        #[serde(default = "whole")]
        set: SetSpec,
    },
}

fn whole() -> SetSpec {
    SetSpec::Whole
}

pub fn bifunction_fixture(space: ModelSpace, desc: &BifunctionDescriptor) -> Result<Bifunction> {
    match desc {
        BifunctionDescriptor::RotationVi => {
            if space != ModelSpace::euclidean(2) {
                return Err(Error::unsupported(format!("rotation_vi needs Euclidean 2D, got {space:?}")));
            }
            let ball = ConvexSubset::ball(space.origin(), 1.0)?;
            Ok(Bifunction::variational_inequality("rotation_vi", 2, |v| vec![v[1], -v[0]], 1.0, 0.0, ball)?
                .with_solutions(KnownSet::Point(space.origin())))
        }
        BifunctionDescriptor::LinearVi {
            matrix,
            shift,
            theta,
            set,
            solution,
            step,
        } => {
            let ModelSpace::Euclidean { dim } = space else {
                return Err(Error::unsupported(format!("linear_vi needs a Euclidean space, got {space:?}")));
            };
            if matrix.len() != dim || matrix.iter().any(|row| row.len() != dim) {
                return Err(Error::config(format!("linear_vi matrix must be {dim}x{dim}")));
            }
            let b = shift.clone().unwrap_or_else(|| vec![0.0; dim]);
            if b.len() != dim {
                return Err(Error::config(format!("linear_vi shift must have {dim} entries")));
            }
            // Frobenius norm bounds the operator norm
            let lip = matrix.iter().flatten().map(|a| a * a).sum::<f64>().sqrt();
            let a = matrix.clone();
            let mut bf = Bifunction::variational_inequality(
                "linear_vi",
                dim,
                move |v| a.iter().zip(&b).map(|(row, bi)| row.iter().zip(v).map(|(r, x)| r * x).sum::<f64>() + bi).collect(),
                lip,
                *theta,
                set.resolve(space)?,
            )?;
            if let Some(p) = solution {
                bf = bf.with_solutions(KnownSet::Point(p.resolve(space)?));
            }
            if let Some(g) = step {
                bf = bf.with_vi_step(*g);
            }
            Ok(bf)
        }
        BifunctionDescriptor::Minimization { function, set } => {
            let g = objective_fixture(space, function)?;
            Ok(Bifunction::minimization(g, set.resolve(space)?))
        }
    }
}

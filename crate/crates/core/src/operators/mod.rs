//! Self-maps of convex subsets, operator sequences, and the Mann/Ishikawa
//! composites `(1-a)I ⊕ a T((1-b)I ⊕ b T)`.

mod catalog;

use std::fmt;
use std::sync::Arc;

pub use catalog::{catalog_operator, OperatorDescriptor};

use crate::error::{Error, Result};
use crate::geometry::{ConvexSubset, KnownSet, ModelSpace, SpacePoint};
use crate::schemes::{Schedule, ScheduleClass};

pub type PointMap = Arc<dyn Fn(&SpacePoint) -> Result<SpacePoint> + Send + Sync>;
pub type OperatorFactory = Arc<dyn Fn(usize) -> Result<Operator> + Send + Sync>;

/// Class annotations. Demiclosedness cannot be decided from samples, so it
/// is carried as a trusted flag.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OperatorFlags {
    pub nonexpansive: bool,
    pub quasi_nonexpansive: bool,
    pub demiclosed_assumed: bool,
}

impl OperatorFlags {
    pub const NONEXPANSIVE: OperatorFlags = OperatorFlags {
        nonexpansive: true,
        quasi_nonexpansive: true,
        demiclosed_assumed: true,
    };

    pub const QUASI_NONEXPANSIVE: OperatorFlags = OperatorFlags {
        nonexpansive: false,
        quasi_nonexpansive: true,
        demiclosed_assumed: true,
    };
}

/// A pure map `C -> C` on a convex subset of a model space, with metadata.
#[derive(Clone)]
pub struct Operator {
    name: Arc<str>,
    space: ModelSpace,
    domain: ConvexSubset,
    map: PointMap,
    lipschitz: Option<f64>,
    witness: Option<SpacePoint>,
    fixed_set: Option<KnownSet>,
    flags: OperatorFlags,
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Operator")
            .field("name", &self.name)
            .field("space", &self.space)
            .field("lipschitz", &self.lipschitz)
            .field("witness", &self.witness)
            .field("flags", &self.flags)
            .finish_non_exhaustive()
    }
}

impl Operator {
    pub fn new(
        name: impl Into<Arc<str>>,
        space: ModelSpace,
        map: impl Fn(&SpacePoint) -> Result<SpacePoint> + Send + Sync + 'static,
    ) -> Self {
        Operator {
            name: name.into(),
            space,
            domain: ConvexSubset::WholeSpace,
            map: Arc::new(map),
            lipschitz: None,
            witness: None,
            fixed_set: None,
            flags: OperatorFlags::default(),
        }
    }

    pub fn with_lipschitz(mut self, alpha: f64) -> Self {
        self.lipschitz = Some(alpha);
        self
    }

    pub fn with_witness(mut self, p: SpacePoint) -> Self {
        self.witness = Some(p);
        self
    }

    /// Records the full fixed-point set; also supplies a witness if none is set.
    pub fn with_fixed_set(mut self, set: KnownSet) -> Result<Self> {
        if self.witness.is_none() {
            self.witness = Some(set.representative(self.space)?);
        }
        self.fixed_set = Some(set);
        Ok(self)
    }

    pub fn with_flags(mut self, flags: OperatorFlags) -> Self {
        self.flags = flags;
        self
    }

    pub fn with_domain(mut self, domain: ConvexSubset) -> Self {
        self.domain = domain;
        self
    }

    pub fn apply(&self, x: &SpacePoint) -> Result<SpacePoint> {
        if x.space() != self.space {
            return Err(Error::domain(format!(
                "operator {} acts on {:?}, got a point of {:?}",
                self.name,
                self.space,
                x.space()
            )));
        }
        (self.map)(x)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn space(&self) -> ModelSpace {
        self.space
    }

    pub fn domain(&self) -> &ConvexSubset {
        &self.domain
    }

    pub fn lipschitz(&self) -> Option<f64> {
        self.lipschitz
    }

    pub fn witness(&self) -> Option<&SpacePoint> {
        self.witness.as_ref()
    }

    pub fn fixed_set(&self) -> Option<&KnownSet> {
        self.fixed_set.as_ref()
    }

    pub fn flags(&self) -> OperatorFlags {
        self.flags
    }
}

/// An index-to-operator factory `k -> T_k` (k >= 1) with an optional point
/// of the common fixed set.
#[derive(Clone)]
pub struct OperatorSequence {
    label: Arc<str>,
    space: ModelSpace,
    factory: OperatorFactory,
    witness: Option<SpacePoint>,
    fixed_set: Option<KnownSet>,
}

impl fmt::Debug for OperatorSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OperatorSequence")
            .field("label", &self.label)
            .field("space", &self.space)
            .field("witness", &self.witness)
            .finish_non_exhaustive()
    }
}

impl OperatorSequence {
    pub fn new(
        label: impl Into<Arc<str>>,
        space: ModelSpace,
        factory: impl Fn(usize) -> Result<Operator> + Send + Sync + 'static,
    ) -> Self {
        OperatorSequence {
            label: label.into(),
            space,
            factory: Arc::new(factory),
            witness: None,
            fixed_set: None,
        }
    }

    /// The stationary sequence `T_k = T`.
    pub fn constant(op: Operator) -> Self {
        let witness = op.witness.clone();
        let fixed_set = op.fixed_set.clone();
        let space = op.space;
        let label = op.name.clone();
        OperatorSequence {
            label,
            space,
            factory: Arc::new(move |_| Ok(op.clone())),
            witness,
            fixed_set,
        }
    }

    pub fn with_witness(mut self, p: Option<SpacePoint>) -> Self {
        self.witness = p;
        self
    }

    pub fn with_fixed_set(mut self, set: Option<KnownSet>) -> Self {
        self.fixed_set = set;
        self
    }

    pub fn operator(&self, k: usize) -> Result<Operator> {
        (self.factory)(k)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn space(&self) -> ModelSpace {
        self.space
    }

    /// A point of the common fixed set of all `T_k`.
    pub fn witness(&self) -> Option<&SpacePoint> {
        self.witness.as_ref()
    }

    pub fn fixed_set(&self) -> Option<&KnownSet> {
        self.fixed_set.as_ref()
    }
}

fn require_qne(t: &Operator) -> Result<()> {
    if t.flags.quasi_nonexpansive {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "operator {} is not flagged quasi-nonexpansive",
            t.name
        )))
    }
}

/// `x ↦ (1-α)x ⊕ αTx`.
pub fn mann_operator(t: &Operator, alpha: f64) -> Result<Operator> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("Mann weight {alpha} outside (0, 1)")));
    }
    require_qne(t)?;
    let inner = t.clone();
    let space = t.space;
    let op = Operator {
        name: format!("mann({}, {alpha})", t.name).into(),
        map: Arc::new(move |x| {
            let tx = inner.apply(x)?;
            space.combine(x, &tx, alpha)
        }),
        lipschitz: None,
        flags: OperatorFlags {
            nonexpansive: t.flags.nonexpansive,
            ..OperatorFlags::QUASI_NONEXPANSIVE
        },
        ..t.clone()
    };
    Ok(op)
}

/// `x ↦ (1-α)x ⊕ αT((1-β)x ⊕ βTx)`. With `β = 0` this is exactly
/// [`mann_operator`].
pub fn ishikawa_operator(t: &Operator, alpha: f64, beta: f64) -> Result<Operator> {
    if beta == 0.0 {
        return mann_operator(t, alpha);
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("Ishikawa weight alpha = {alpha} outside (0, 1)")));
    }
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::domain(format!("Ishikawa weight beta = {beta} outside [0, 1]")));
    }
    require_qne(t)?;
    let inner = t.clone();
    let space = t.space;
    Ok(Operator {
        name: format!("ishikawa({}, {alpha}, {beta})", t.name).into(),
        map: Arc::new(move |x| {
            let tx = inner.apply(x)?;
            let y = space.combine(x, &tx, beta)?;
            let ty = inner.apply(&y)?;
            space.combine(x, &ty, alpha)
        }),
        lipschitz: None,
        // the fixed set may grow when beta > 0
        fixed_set: None,
        flags: OperatorFlags::QUASI_NONEXPANSIVE,
        ..t.clone()
    })
}

/// `k ↦ ishikawa_operator(T, α_k, β_k)`; with `β_k → 0` the common fixed set
/// is `F(T)`.
pub fn ishikawa_sequence(t: &Operator, alphas: &Schedule, betas: &Schedule) -> Result<OperatorSequence> {
    if !matches!(alphas.class(), ScheduleClass::MannParam { .. }) {
        return Err(Error::config(
            "Ishikawa step weights must be declared with limsup alpha_k < 1",
        ));
    }
    if !matches!(betas.class(), ScheduleClass::VanishingParam) {
        return Err(Error::config("Ishikawa inner weights must satisfy beta_k -> 0"));
    }
    require_qne(t)?;
    let (t2, a, b) = (t.clone(), alphas.clone(), betas.clone());
    Ok(OperatorSequence::new(format!("ishikawa({})", t.name), t.space, move |k| {
        ishikawa_operator(&t2, a.value(k), b.value(k))
    })
    .with_witness(t.witness.clone())
    .with_fixed_set(t.fixed_set.clone()))
}

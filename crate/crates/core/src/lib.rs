// Negated comparisons are deliberate: they reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod error;
pub mod geometry;
pub mod operators;
pub mod resolvents;
pub mod schemes;

pub use error::{Error, Result};
pub use geometry::{ConvexSubset, GeodesicSpace, KnownSet, ModelSpace, PointSpec, SetSpec, SpacePoint, Tangent};
pub use operators::{Operator, OperatorDescriptor, OperatorSequence};
pub use schemes::{Schedule, ScheduleClass, ScheduleRule};

//! Holonomy algebras on a finite path groupoid: compact structure groups,
//! tame subgroupoids, projective families of charts, cylindrical functions,
//! the uniform measure and its symmetries.

pub mod basis;
pub mod cyl;
pub mod error;
pub mod family;
pub mod group;
pub mod groupoid;
pub mod measure;
pub mod symmetry;

pub use basis::{gram_matrix, make_spin_network, wilson_loop, SpinNetworkFunction};
pub use cyl::{CylFunction, Expression, FiniteTable, SlotFactor, EXACT_LIMIT};
pub use error::{Error, Result};
pub use family::{AmbientConnection, Chart, Reconstruction};
pub use group::{CharLabel, GroupDescriptor, GroupElement, GroupKind, Quaternion};
pub use groupoid::{Alphabet, AtomId, Edge, Letter, PathWord, Sign, TameSubgroupoid, VertexId};
pub use measure::{IntegralEstimate, MeasureSpec, Method, ProbTable};
pub use symmetry::{GaugeTransformation, GroupoidAutomorphism, Transformation};

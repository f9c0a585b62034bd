//! Combinatorics and exact geometry of arrangements of eight planes in projective space.

pub mod algebra;
pub mod arrangement;
pub mod check;
pub mod combinatorics;
pub mod corpus;
pub mod enumerate;
pub mod family;
pub mod fibration;
pub mod report;

pub use algebra::roots::Form;
pub use algebra::{FieldDesc, ParamPoint, Scalar};
pub use arrangement::Arrangement;
pub use combinatorics::{IncidenceTable, Perm};

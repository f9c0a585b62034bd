//! Incidence tables, permutations of the planes, censuses and symmetry groups.

pub mod canon;
pub mod census;
pub mod perm;
pub mod subsets;
pub mod symmetry;
pub mod table;

pub use canon::{canonical_form, CanonicalForm};
pub use census::{
    census, derive, euler_characteristic, Census, CensusError, DerivedIncidence, PointKind,
};
pub use perm::{Perm, PermParseError};
pub use subsets::PlaneSet;
pub use symmetry::{symmetry_group, SymmetryGroup};
pub use table::IncidenceTable;

//! One-parameter families: special members, projective equivalences, parameter self-maps
//! and automorphisms of the double cover.

pub mod cover;
pub mod equivalence;
pub mod selfmap;
pub mod special;

use thiserror::Error;

use crate::algebra::{AlgebraError, FieldDesc, ParamPoint};
use crate::arrangement::ArrangementError;

pub use cover::{
    parse_cover_map, verify_cover_automorphism, verify_cover_map, CoverCheck, CoverMap,
};
pub use equivalence::{equivalences, projective_equivalence, EquivalenceWitness};
pub use selfmap::{
    default_samples, verify_parameter_map, MapKind, ParameterMapReport, SampleOutcome,
};
pub use special::{
    parse_special_point, special_values, Realization, SpecialValue, SpecialValues, Verdict,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FamilyError {
    #[error("expected a one-parameter family")]
    NotParametric,
    #[error("expected a single arrangement, not a family")]
    Parametric,
    #[error("no five planes in general position; not an octic arrangement")]
    NoGeneralPositionQuintuple,
    #[error("fields {0} and {1} have no common embedding here")]
    IncompatibleFields(FieldDesc, FieldDesc),
    #[error("sample {0} is a special value of the family")]
    SampleIsSpecial(Box<ParamPoint>),
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("malformed map `{text}`: {message}")]
    MapSyntax { text: String, message: String },
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// The smaller of two fields when one contains the other.
pub(crate) fn common_field(a: FieldDesc, b: FieldDesc) -> Result<FieldDesc, FamilyError> {
    match (a, b) {
        (x, y) if x == y => Ok(x),
        (FieldDesc::Rational, y) => Ok(y),
        (x, FieldDesc::Rational) => Ok(x),
        (x, y) => Err(FamilyError::IncompatibleFields(x, y)),
    }
}

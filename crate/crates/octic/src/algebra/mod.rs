//! Exact arithmetic: scalar fields, binary forms, determinants and root finding.

pub mod binform;
pub mod field;
pub mod linalg;
pub mod roots;

use thiserror::Error;

pub use binform::BinForm;
pub use field::{Field, FieldDesc, Ring, Scalar};
pub use roots::{factor_binform, ParamPoint, QuadraticRoot, RootReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldDesc, FieldDesc),
    #[error("cannot add forms of degree {0} and {1}")]
    DegreeMismatch(usize, usize),
    #[error("the zero form has no roots to report")]
    ZeroForm,
    #[error("{0} is not a valid quadratic field parameter")]
    InvalidField(i64),
}

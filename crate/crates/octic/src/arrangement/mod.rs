//! Arrangements of eight planes: parsing, minors, incidence tables and validity.

pub mod expr;
pub mod model;

pub use model::{
    validate_rows, Arrangement, ArrangementError, LinearForm, ValidityVerdict, Violation,
};

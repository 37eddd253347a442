//! Exact hypergeometric functions over finite fields.
//!
//! The crate computes Gauss and Jacobi sums, the hypergeometric functions
//! built from them (ₘFₙ, Appell–Lauricella, Humbert and the general Φ_Δ
//! attached to a partition Δ), the point counts of the associated varieties,
//! and the explicit isomorphisms between those varieties.  All values are
//! exact elements of a cyclotomic field; every identity is checked by
//! equality, never by tolerance.

pub mod chars;
pub mod cyclo;
pub mod error;
pub mod ffield;
pub mod genhgf;
pub mod hgf;
pub mod matrix;
pub mod sums;
pub mod varieties;

pub use chars::{AddChar, MulChar};
pub use cyclo::{CycloNum, RootSum};
pub use error::{Error, Result};
pub use ffield::{build_field, extend, Elem, ExtensionField, Field, FieldSpec};
pub use genhgf::{HDeltaChar, HDeltaElem, JmChar, JmElem, Partition, WDeltaElem};
pub use matrix::{MatK, MatZ};
pub use sums::Ctx;
pub use varieties::{GroupChar, GroupElem, VarietySpec};

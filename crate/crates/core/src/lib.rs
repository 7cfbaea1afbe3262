//! Exact orbital integrals over local function fields.

pub mod enumerate;
pub mod error;
pub mod harness;
pub mod invariant;
pub mod lattice;
pub mod localfield;
pub mod orbital;
pub mod polyfactor;

pub use error::{Error, Result};
pub use harness::{OrbitInstance, Report, Status, Suite};
pub use invariant::InvariantProfile;
pub use localfield::{FieldTag, LocalElement, Matrix};
pub use orbital::{Lambda, QsLaurent};
pub use polyfactor::MonicPoly;

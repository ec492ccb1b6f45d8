//! Exact finite subgroups of S3 x S3, their Hopf classification, and
//! contact-structure and framing verdicts for the quotients S3/G.
//!
//! Quaternions have coefficients in a cyclotomic field Q(zeta_N), so group
//! closure, freeness and recognition are exact. The [`numeric`] module
//! cross-checks the geometry in double precision.

pub mod classify;
pub mod cyclotomic;
pub mod error;
pub mod families;
pub mod numeric;
pub mod oracle;
pub mod quaternion;
pub mod spin;
pub mod table;

pub use classify::{classify, validate_constraints, Case, ClassificationResult};
pub use cyclotomic::{CyclotomicField, FieldElement};
pub use error::{Error, Result};
pub use families::FamilySpec;
pub use oracle::{contact_verdicts, ContactReport, EulerVerdict, Existence, FramingVerdict};
pub use quaternion::UnitQuaternion;
pub use spin::{act, recognize, FreeVerdict, GroupFile, GroupTag, Side, SpinGroup, SpinPair};
pub use table::AbelianGroup;

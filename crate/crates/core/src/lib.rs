//! Executable boundary Schwarz inequalities.
//!
//! Holomorphic self-maps of the unit disk are modelled as finite Blaschke
//! products ([`diskmap`]). Each inequality has an evaluator in [`bounds`]
//! returning a signed slack; [`numerics`] supplies independent
//! finite-difference and quadrature cross-checks, [`sharpness`] searches for
//! the extremal maps, and [`harness`] sweeps seeded corpora.

pub mod bounds;
pub mod diskmap;
pub mod error;
pub mod harness;
pub mod numerics;
pub mod sharpness;

pub use bounds::{EquationTag, SlackReport, Verdict};
pub use diskmap::{BoundaryPoint, DiskPoint, DiskSelfMap};
pub use error::{Error, Result};

//! Exact-solution machinery for quasilinear reaction–diffusion equations:
//! jet-based field evaluation, residual verification, solution dressing,
//! linearizing maps and a finite-difference cross-check.

pub mod catalog;
pub mod dressing;
pub mod equations;
pub mod error;
pub mod exec;
pub mod fdsolver;
pub mod field;
pub mod grid;
pub mod jet;
pub mod linearize;
pub mod ode;
pub mod quad;
pub mod recognize;
pub mod singular;
pub mod scalar;

pub use catalog::{Catalog, CatalogEntry, SolutionRecord, Status};
pub use equations::{Equation, LinearForm, PdeCoefficients, ResidualReport};
pub use error::{Error, Result};
pub use exec::Exec;
pub use field::{ScalarField, Var};
pub use grid::GridSpec;
pub use jet::Jet2;
pub use scalar::Scalar;

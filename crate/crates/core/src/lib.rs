//! Projection geometry on matrix Grassmannians.

pub mod atlas;
pub mod error;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod matrix;
pub mod projection;
pub mod random;
pub mod subspace;
pub mod tolerance;
pub mod two_projection;

pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, C64};
pub use projection::{Idempotent, Projection};
pub use subspace::Subspace;
pub use tolerance::ToleranceConfig;

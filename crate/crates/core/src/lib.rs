//! Frequency-domain fluid-structure interaction by interface domain decomposition.
//!
//! Fluid regions are modelled with collocation boundary elements and condensed
//! to a dynamic stiffness on their boundary; structures are Euler-Bernoulli
//! beams. Subdomains are glued either by mortar multipliers living on the
//! structure or by localized Lagrange multipliers with an independent interface
//! frame, and the resulting interface problem is solved with a projected
//! Bi-CGSTAB iteration.

pub mod bem;
pub mod benchmarks;
pub mod coupling;
pub mod error;
pub mod fem;
pub mod io;
pub mod linalg;
pub mod mesh;
pub mod solver;

pub use error::{FsiError, Result};

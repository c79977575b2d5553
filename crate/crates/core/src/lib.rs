//! Geodesics and sectional curvature of Lie groups and semidirect product
//! groups with right-invariant metrics.
//!
//! The finite-dimensional backend ([`algebra`], [`semidirect`]) works from
//! structure constants and Gram matrices. The [`torus`] backend works with
//! exact trigonometric polynomials on the flat 2-torus. Both implement
//! [`backend::MetricAlgebraBackend`], which is all that [`curvature`] and
//! [`geodesic`] need.

pub mod algebra;
pub mod backend;
pub mod builtins;
pub mod curvature;
pub mod element;
pub mod error;
pub mod geodesic;
pub mod sampling;
pub mod semidirect;
pub mod tolerance;
pub mod torus;

pub use algebra::{AlgebraElement, MetricAlgebra, MetricAlgebraSpec, Tolerances};
pub use backend::{MagneticExtension, MetricAlgebraBackend, ProductBackend, SemidirectBackend};
pub use element::{LinearElement, Pair};
pub use error::{Error, Result};
pub use semidirect::{ActionSpec, SemidirectAlgebra};

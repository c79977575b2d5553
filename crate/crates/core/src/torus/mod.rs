//! Exact calculus on trigonometric polynomials and vector fields on the flat
//! torus `[0, 2π)²`, with the volume form `dx1 dx2`.
//!
//! Operations are closed on finitely supported fields, so curvature is
//! evaluated exactly. Geodesic flows grow the support at every step; the
//! integrators here truncate to a fixed band after each right-hand side
//! evaluation, and the result is an experimental approximation, not a
//! geodesic.

pub mod backends;
pub mod field;
pub mod function;
pub mod planes;

#[cfg(test)]
pub(crate) mod grid;

pub use backends::{
    ad_transpose_full, ad_transpose_vol, compressible_rhs, compressible_scalar_backend, euler_rhs, mhd_backend,
    mhd_rhs, mhd_with_sample_band, passive_scalar_backend, passive_scalar_rhs, CompressibleScalar, FunctionSpace, Mhd,
    PassiveScalar, VectorFields, VolumeFields, DEFAULT_SAMPLE_BAND,
};
pub use field::{FieldTerm, TrigVectorField};
pub use function::{Mode, Parity, TorusMetric, TrigFunction};
pub use planes::{arnold_flat_curvature, mhd_mixed_plane, mhd_pure_magnetic_plane};

use crate::backend::MetricAlgebraBackend;
use crate::element::{LinearElement, Pair};
use crate::error::Result;
use crate::geodesic::{integrate, IntegratorConfig, Trajectory};

/// Default `|k|∞` cap for truncated integration.
pub const DEFAULT_SUPPORT_CAP: i64 = 16;

/// Elements whose Fourier support can be cut to `|k|∞ <= band`.
pub trait Truncate {
    fn truncate_to(&self, band: i64) -> Self;
}

impl Truncate for TrigFunction {
    fn truncate_to(&self, band: i64) -> Self {
        self.truncate(band)
    }
}

impl Truncate for TrigVectorField {
    fn truncate_to(&self, band: i64) -> Self {
        self.truncate(band)
    }
}

impl<A: Truncate, B: Truncate> Truncate for Pair<A, B> {
    fn truncate_to(&self, band: i64) -> Self {
        Pair::new(self.g.truncate_to(band), self.h.truncate_to(band))
    }
}

/// [`integrate`] with the state and every right-hand side evaluation
/// truncated to `|k|∞ <= cap`.
pub fn integrate_truncated<B, F>(
    backend: &B,
    rhs: F,
    state0: B::Elem,
    config: &IntegratorConfig,
    cap: i64,
) -> Result<Trajectory<B::Elem>>
where
    B: MetricAlgebraBackend,
    B::Elem: Truncate + LinearElement,
    F: Fn(&B::Elem) -> B::Elem,
{
    integrate(
        backend,
        |s: &B::Elem| rhs(s).truncate_to(cap),
        state0.truncate_to(cap),
        config,
    )
}

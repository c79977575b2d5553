//! Seeded random elements and orthonormal planes.
//!
//! Coordinates are standard normal. Callers supply the generator; the CLI and
//! the test suites use `Xoshiro256PlusPlus` seeded with `seed_from_u64`.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::algebra::MetricAlgebra;
use crate::backend::{MagneticDual, MetricAlgebraBackend, SdElem, SemidirectBackend};
use crate::curvature::Plane;
use crate::element::{LinearElement, Pair};
use crate::error::{Error, Result};

/// Draws whose Gram-Schmidt residual falls below this fraction of their norm
/// are rejected.
pub const REJECT_TOL: f64 = 1e-12;

/// Retries allowed per requested plane.
pub const RETRIES_PER_PLANE: usize = 100;

pub trait RandomElement: MetricAlgebraBackend {
    fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;
}

impl RandomElement for MetricAlgebra {
    fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        nalgebra::DVector::from_fn(self.dim(), |_, _| rng.sample(StandardNormal))
    }
}

impl<B: RandomElement> RandomElement for MagneticDual<B> {
    fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        self.base().random_element(rng)
    }
}

/// Which planes of `g ⋉ h` to draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaneKind {
    /// Both vectors generic.
    Any,
    /// Spanned by `(X1, 0)` and `(X2, 0)`.
    G,
    /// Spanned by `(0, Y1)` and `(0, Y2)`.
    H,
    /// Spanned by `(X, 0)` and `(0, Y)`.
    Mixed,
    /// A generic `(X, Y1)` together with `(0, Y2)`.
    ContainsH,
}

impl std::str::FromStr for PlaneKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "any" => PlaneKind::Any,
            "g" => PlaneKind::G,
            "h" => PlaneKind::H,
            "mixed" => PlaneKind::Mixed,
            "contains-h" => PlaneKind::ContainsH,
            other => return Err(Error::Config(format!("unknown plane kind `{other}`"))),
        })
    }
}

/// Gram-Schmidt on `(first, second)`; `None` if either step is degenerate.
pub fn orthonormalize<B: MetricAlgebraBackend>(b: &B, first: &B::Elem, second: &B::Elem) -> Option<(B::Elem, B::Elem)> {
    let n1 = b.norm_sq(first);
    if !(n1 > 0.0 && n1.is_finite()) {
        return None;
    }
    let e1 = first.scale(1.0 / n1.sqrt());
    let n2 = b.norm_sq(second);
    let perp = second.add_scaled(&e1, -b.inner(second, &e1));
    let np = b.norm_sq(&perp);
    if !(np > REJECT_TOL * n2 && np.is_finite()) {
        return None;
    }
    Some((e1, perp.scale(1.0 / np.sqrt())))
}

fn collect_planes<E, F>(count: usize, mut draw: F) -> Result<Vec<Plane<E>>>
where
    F: FnMut() -> Option<(E, E)>,
{
    let max_attempts = RETRIES_PER_PLANE * count;
    let mut planes = Vec::with_capacity(count);
    let mut attempts = 0;
    while planes.len() < count {
        if attempts == max_attempts {
            return Err(Error::SamplingExhausted {
                requested: count,
                attempts,
            });
        }
        attempts += 1;
        if let Some((x, y)) = draw() {
            planes.push(Plane { x, y });
        }
    }
    Ok(planes)
}

/// `count` orthonormal planes of a backend.
pub fn sample_planes<B: RandomElement, R: Rng + ?Sized>(
    b: &B,
    rng: &mut R,
    count: usize,
) -> Result<Vec<Plane<B::Elem>>> {
    collect_planes(count, || {
        let x = b.random_element(rng);
        let y = b.random_element(rng);
        orthonormalize(b, &x, &y)
    })
}

/// `count` orthonormal planes of `g ⋉ h` of the given kind, orthonormal in the
/// product metric. For [`PlaneKind::ContainsH`] the `(0, Y2)` direction is
/// normalized first and returned as `y`.
pub fn sample_semidirect_planes<S, R>(
    s: &S,
    rng: &mut R,
    count: usize,
    kind: PlaneKind,
) -> Result<Vec<Plane<SdElem<S>>>>
where
    S: SemidirectBackend,
    S::G: RandomElement,
    S::H: RandomElement,
    R: Rng + ?Sized,
{
    let p = s.product();
    let (g, h) = (s.g(), s.h());
    collect_planes(count, || {
        let draw = |rng: &mut R, with_g: bool, with_h: bool| {
            let x = if with_g { g.random_element(rng) } else { g.zero() };
            let y = if with_h { h.random_element(rng) } else { h.zero() };
            Pair::new(x, y)
        };
        match kind {
            PlaneKind::Any => {
                let (a, b) = (draw(rng, true, true), draw(rng, true, true));
                orthonormalize(&p, &a, &b)
            }
            PlaneKind::G => {
                let (a, b) = (draw(rng, true, false), draw(rng, true, false));
                orthonormalize(&p, &a, &b)
            }
            PlaneKind::H => {
                let (a, b) = (draw(rng, false, true), draw(rng, false, true));
                orthonormalize(&p, &a, &b)
            }
            PlaneKind::Mixed => {
                let (a, b) = (draw(rng, true, false), draw(rng, false, true));
                orthonormalize(&p, &a, &b)
            }
            PlaneKind::ContainsH => {
                let (a, b) = (draw(rng, true, true), draw(rng, false, true));
                orthonormalize(&p, &b, &a).map(|(fy, fx)| (fx, fy))
            }
        }
    })
}

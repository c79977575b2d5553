//! The operation set consumed by the curvature and geodesic engines.
//!
//! Two families implement it: the dense finite-dimensional algebras in
//! [`crate::algebra`] / [`crate::semidirect`], and the exact trigonometric
//! field spaces in [`crate::torus`].

use crate::element::{LinearElement, Pair};

/// A Lie algebra with an inner product and the transpose of `ad`.
pub trait MetricAlgebraBackend {
    type Elem: LinearElement;

    fn zero(&self) -> Self::Elem;

    /// `ad(x) y = [x, y]`
    fn bracket(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;

    fn inner(&self, x: &Self::Elem, y: &Self::Elem) -> f64;

    /// `ad(x)ᵀ y`, the adjoint of `ad(x)` with respect to [`inner`](Self::inner).
    fn ad_transpose(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;

    fn norm_sq(&self, x: &Self::Elem) -> f64 {
        self.inner(x, x)
    }
}

/// A semidirect product `g ⋉ h` given by its factors, the action
/// `b: g → Der h`, the transposes `b(X)ᵀ` and the map `h: h × h → g` defined by
/// `<b(X)Y1, Y2> = <h(Y1, Y2), X>`.
pub trait SemidirectBackend {
    type G: MetricAlgebraBackend;
    type H: MetricAlgebraBackend;

    fn g(&self) -> &Self::G;
    fn h(&self) -> &Self::H;

    /// `b(x) y`
    fn act(&self, x: &GElem<Self>, y: &HElem<Self>) -> HElem<Self>;

    /// `b(x)ᵀ y`
    fn act_transpose(&self, x: &GElem<Self>, y: &HElem<Self>) -> HElem<Self>;

    /// `h(y1, y2)`
    fn h_map(&self, y1: &HElem<Self>, y2: &HElem<Self>) -> GElem<Self>;

    /// Whether every `b(X)` is skew-adjoint.
    fn is_isometric(&self) -> bool;

    fn product(&self) -> ProductBackend<'_, Self>
    where
        Self: Sized,
    {
        ProductBackend { sd: self }
    }
}

pub type GElem<S> = <<S as SemidirectBackend>::G as MetricAlgebraBackend>::Elem;
pub type HElem<S> = <<S as SemidirectBackend>::H as MetricAlgebraBackend>::Elem;
pub type SdElem<S> = Pair<GElem<S>, HElem<S>>;

/// The semidirect product algebra assembled from a [`SemidirectBackend`],
/// with block-diagonal inner product and the closed-form transpose
/// `ad(X1,Y1)ᵀ(X2,Y2) = (ad(X1)ᵀX2 − h(Y1,Y2), ad(Y1)ᵀY2 + b(X1)ᵀY2)`.
pub struct ProductBackend<'a, S> {
    sd: &'a S,
}

impl<'a, S: SemidirectBackend> ProductBackend<'a, S> {
    pub fn new(sd: &'a S) -> Self {
        Self { sd }
    }
}

impl<S: SemidirectBackend> MetricAlgebraBackend for ProductBackend<'_, S> {
    type Elem = SdElem<S>;

    fn zero(&self) -> Self::Elem {
        Pair::new(self.sd.g().zero(), self.sd.h().zero())
    }

    fn bracket(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let g = self.sd.g().bracket(&a.g, &b.g);
        let h = self
            .sd
            .h()
            .bracket(&a.h, &b.h)
            .add(&self.sd.act(&a.g, &b.h))
            .sub(&self.sd.act(&b.g, &a.h));
        Pair::new(g, h)
    }

    fn inner(&self, a: &Self::Elem, b: &Self::Elem) -> f64 {
        self.sd.g().inner(&a.g, &b.g) + self.sd.h().inner(&a.h, &b.h)
    }

    fn ad_transpose(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let g = self.sd.g().ad_transpose(&a.g, &b.g).sub(&self.sd.h_map(&a.h, &b.h));
        let h = self
            .sd
            .h()
            .ad_transpose(&a.h, &b.h)
            .add(&self.sd.act_transpose(&a.g, &b.h));
        Pair::new(g, h)
    }
}

/// The magnetic extension `g ⋉ g*_reg`, with the regular dual represented by
/// preimages under the inertia operator `A`.
///
/// On representatives the coadjoint action is `b(X)Y = −ad(X)ᵀY`, its
/// transpose is `b(X)ᵀY = −ad(X)Y`, and `h(Y1, Y2) = ad(Y2)ᵀY1`.
#[derive(Debug, Clone, Copy)]
pub struct MagneticExtension<B> {
    dual: MagneticDual<B>,
}

impl<B: MetricAlgebraBackend> MagneticExtension<B> {
    pub fn new(base: B) -> Self {
        Self {
            dual: MagneticDual(base),
        }
    }

    pub fn base(&self) -> &B {
        &self.dual.0
    }
}

impl<B: MetricAlgebraBackend> SemidirectBackend for MagneticExtension<B> {
    type G = B;
    type H = MagneticDual<B>;

    fn g(&self) -> &B {
        &self.dual.0
    }

    fn h(&self) -> &MagneticDual<B> {
        &self.dual
    }

    fn act(&self, x: &B::Elem, y: &B::Elem) -> B::Elem {
        self.dual.0.ad_transpose(x, y).scale(-1.0)
    }

    fn act_transpose(&self, x: &B::Elem, y: &B::Elem) -> B::Elem {
        self.dual.0.bracket(x, y).scale(-1.0)
    }

    fn h_map(&self, y1: &B::Elem, y2: &B::Elem) -> B::Elem {
        self.dual.0.ad_transpose(y2, y1)
    }

    fn is_isometric(&self) -> bool {
        false
    }
}

/// The abelian space `g*_reg` in representative coordinates.
#[derive(Debug, Clone, Copy)]
pub struct MagneticDual<B>(B);

impl<B> MagneticDual<B> {
    pub fn base(&self) -> &B {
        &self.0
    }
}

impl<B: MetricAlgebraBackend> MetricAlgebraBackend for MagneticDual<B> {
    type Elem = B::Elem;

    fn zero(&self) -> Self::Elem {
        self.0.zero()
    }

    fn bracket(&self, _x: &Self::Elem, _y: &Self::Elem) -> Self::Elem {
        self.0.zero()
    }

    fn inner(&self, x: &Self::Elem, y: &Self::Elem) -> f64 {
        self.0.inner(x, y)
    }

    fn ad_transpose(&self, _x: &Self::Elem, _y: &Self::Elem) -> Self::Elem {
        self.0.zero()
    }
}

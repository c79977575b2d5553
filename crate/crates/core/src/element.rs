//! Vector-space arithmetic shared by every backend's element type.

use nalgebra::DVector;

/// Elements of a real vector space. Backends expose their algebra elements
/// through this trait so that curvature and geodesic code stays generic.
pub trait LinearElement: Clone {
    fn add(&self, other: &Self) -> Self;
    fn scale(&self, factor: f64) -> Self;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    /// `self + factor * other`
    fn add_scaled(&self, other: &Self, factor: f64) -> Self {
        self.add(&other.scale(factor))
    }

    /// Largest absolute coefficient, used for convergence tests.
    fn max_abs(&self) -> f64;
}

impl LinearElement for DVector<f64> {
    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn scale(&self, factor: f64) -> Self {
        self * factor
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn add_scaled(&self, other: &Self, factor: f64) -> Self {
        self + other * factor
    }

    fn max_abs(&self) -> f64 {
        self.amax()
    }
}

/// An element `(X, Y)` of a semidirect product `g ⋉ h`.
///
/// Geodesic states reuse this type with `g` holding `u` and `h` holding `α`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pair<A, B> {
    pub g: A,
    pub h: B,
}

impl<A, B> Pair<A, B> {
    pub fn new(g: A, h: B) -> Self {
        Self { g, h }
    }
}

impl<A: LinearElement, B: LinearElement> LinearElement for Pair<A, B> {
    fn add(&self, other: &Self) -> Self {
        Pair::new(self.g.add(&other.g), self.h.add(&other.h))
    }

    fn scale(&self, factor: f64) -> Self {
        Pair::new(self.g.scale(factor), self.h.scale(factor))
    }

    fn sub(&self, other: &Self) -> Self {
        Pair::new(self.g.sub(&other.g), self.h.sub(&other.h))
    }

    fn add_scaled(&self, other: &Self, factor: f64) -> Self {
        Pair::new(self.g.add_scaled(&other.g, factor), self.h.add_scaled(&other.h, factor))
    }

    fn max_abs(&self) -> f64 {
        self.g.max_abs().max(self.h.max_abs())
    }
}

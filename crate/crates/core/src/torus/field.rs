use crate::element::LinearElement;
use crate::error::{Error, Result};

use super::function::{Mode, Parity, TrigFunction};

/// Fields whose divergence has no coefficient above
/// `DIVERGENCE_TOL · max(1, max_abs)` count as divergence free.
pub const DIVERGENCE_TOL: f64 = 1e-10;

/// One entry of the text representation of a field: `coefficient ·
/// parity(k1 x1 + k2 x2)` in component `component` (1 or 2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldTerm {
    pub parity: Parity,
    pub k1: i64,
    pub k2: i64,
    pub coefficient: f64,
    pub component: usize,
}

/// A vector field on the flat 2-torus in the coordinate frame.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrigVectorField {
    pub comp: [TrigFunction; 2],
}

impl TrigVectorField {
    pub fn new(comp1: TrigFunction, comp2: TrigFunction) -> Self {
        Self { comp: [comp1, comp2] }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c1: f64, c2: f64) -> Self {
        Self::new(TrigFunction::constant(c1), TrigFunction::constant(c2))
    }

    /// The symplectic gradient `(∂₂ψ, −∂₁ψ)`, always divergence free.
    pub fn from_stream(psi: &TrigFunction) -> Self {
        Self::new(psi.derivative(1), psi.derivative(0).scale(-1.0))
    }

    pub fn grad(f: &TrigFunction) -> Self {
        Self::new(f.derivative(0), f.derivative(1))
    }

    pub fn from_terms(terms: &[FieldTerm]) -> Result<Self> {
        let mut out = Self::zero();
        for t in terms {
            let slot = match t.component {
                1 | 2 => &mut out.comp[t.component - 1],
                c => return Err(Error::Config(format!("field component must be 1 or 2, got {c}"))),
            };
            slot.add_term([t.k1, t.k2], t.parity, t.coefficient);
        }
        Ok(out)
    }

    pub fn to_terms(&self) -> Vec<FieldTerm> {
        let mut out = Vec::new();
        for (i, f) in self.comp.iter().enumerate() {
            for (m, &c) in f.iter() {
                out.push(FieldTerm {
                    parity: m.parity,
                    k1: m.k[0],
                    k2: m.k[1],
                    coefficient: c,
                    component: i + 1,
                });
            }
        }
        out
    }

    pub fn band(&self) -> i64 {
        self.comp[0].band().max(self.comp[1].band())
    }

    pub fn truncate(&self, band: i64) -> Self {
        Self::new(self.comp[0].truncate(band), self.comp[1].truncate(band))
    }

    pub fn eval(&self, x: [f64; 2]) -> [f64; 2] {
        [self.comp[0].eval(x), self.comp[1].eval(x)]
    }

    pub fn divergence(&self) -> TrigFunction {
        self.comp[0].derivative(0).add(&self.comp[1].derivative(1))
    }

    /// Largest divergence coefficient.
    pub fn divergence_residual(&self) -> f64 {
        self.divergence().max_abs()
    }

    pub fn is_divergence_free(&self) -> bool {
        self.divergence_residual() <= DIVERGENCE_TOL * self.max_abs().max(1.0)
    }

    pub fn require_divergence_free(&self) -> Result<()> {
        if self.is_divergence_free() {
            Ok(())
        } else {
            Err(Error::NotDivergenceFree {
                residual: self.divergence_residual(),
            })
        }
    }

    /// `X(f) = Σ X_j ∂_j f`
    pub fn apply(&self, f: &TrigFunction) -> TrigFunction {
        self.comp[0]
            .multiply(&f.derivative(0))
            .add(&self.comp[1].multiply(&f.derivative(1)))
    }

    /// `∇_X Y`, componentwise `X(Y_i)`.
    pub fn directional_derivative(&self, y: &Self) -> Self {
        Self::new(self.apply(&y.comp[0]), self.apply(&y.comp[1]))
    }

    /// `(∇X)ᵀY`, componentwise `Σ_j ∂_i X_j Y_j`.
    pub fn jacobian_transpose_apply(&self, y: &Self) -> Self {
        let row = |i: usize| {
            self.comp[0]
                .derivative(i)
                .multiply(&y.comp[0])
                .add(&self.comp[1].derivative(i).multiply(&y.comp[1]))
        };
        Self::new(row(0), row(1))
    }

    /// The Jacobi-Lie bracket of vector fields `∇_X Y − ∇_Y X`.
    pub fn lie_bracket(&self, y: &Self) -> Self {
        self.directional_derivative(y).sub(&y.directional_derivative(self))
    }

    /// Pointwise `g(X, Y)`.
    pub fn dot(&self, y: &Self) -> TrigFunction {
        self.comp[0]
            .multiply(&y.comp[0])
            .add(&self.comp[1].multiply(&y.comp[1]))
    }

    /// `f · X`
    pub fn mul_function(&self, f: &TrigFunction) -> Self {
        Self::new(self.comp[0].multiply(f), self.comp[1].multiply(f))
    }

    /// The L² projection `P` onto divergence-free fields: per mode, the
    /// component parallel to `k` is removed. The mean (`k = 0`) is kept.
    pub fn leray_project(&self) -> Self {
        let mut modes: Vec<Mode> = self.comp.iter().flat_map(|f| f.iter().map(|(m, _)| *m)).collect();
        modes.sort();
        modes.dedup();
        let mut out = Self::zero();
        for m in modes {
            let (a1, a2) = (self.comp[0].coeff(&m), self.comp[1].coeff(&m));
            let (k1, k2) = (m.k[0] as f64, m.k[1] as f64);
            let (p1, p2) = if m.is_constant() {
                (a1, a2)
            } else {
                let s = (k1 * a1 + k2 * a2) / (k1 * k1 + k2 * k2);
                (a1 - s * k1, a2 - s * k2)
            };
            out.comp[0].add_term(m.k, m.parity, p1);
            out.comp[1].add_term(m.k, m.parity, p2);
        }
        out
    }

    /// `Q = I − P`, the projection onto gradients.
    pub fn gradient_part(&self) -> Self {
        self.sub(&self.leray_project())
    }

    /// `∫ g(X, Y) dx1 dx2`
    pub fn inner(&self, y: &Self) -> f64 {
        self.comp[0].inner(&y.comp[0]) + self.comp[1].inner(&y.comp[1])
    }

    pub fn norm_sq(&self) -> f64 {
        self.inner(self)
    }
}

impl LinearElement for TrigVectorField {
    fn add(&self, other: &Self) -> Self {
        Self::new(self.comp[0].add(&other.comp[0]), self.comp[1].add(&other.comp[1]))
    }

    fn scale(&self, factor: f64) -> Self {
        Self::new(self.comp[0].scale(factor), self.comp[1].scale(factor))
    }

    fn max_abs(&self) -> f64 {
        self.comp[0].max_abs().max(self.comp[1].max_abs())
    }
}

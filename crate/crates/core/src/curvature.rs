//! Sectional curvature of right-invariant metrics.
//!
//! Every evaluator returns the numerator `<R(X,Y)Y,X>` broken down into its
//! labeled summands. The denominator `|X|²|Y|² − <X,Y>²` and the quotient are
//! attached so callers can read off the sign and the sectional curvature.

use crate::backend::{GElem, HElem, MetricAlgebraBackend, SdElem, SemidirectBackend};
use crate::element::{LinearElement, Pair};
use crate::error::{Error, Result};

/// Planes with `gram2 <= DEGENERACY_TOL * |x|²|y|²` are rejected.
pub const DEGENERACY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub label: &'static str,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureBreakdown {
    /// `<R(X,Y)Y,X>`, the sum of `terms` in order.
    pub numerator: f64,
    /// `|X|²|Y|² − <X,Y>²`
    pub denominator: f64,
    /// `numerator / denominator`, absent for degenerate planes.
    pub sectional: Option<f64>,
    pub terms: Vec<Term>,
}

impl CurvatureBreakdown {
    /// Assembles a breakdown from its terms and `(|x|², |y|², <x,y>)`.
    pub fn from_terms(terms: Vec<Term>, norms: (f64, f64, f64)) -> Self {
        let numerator = terms.iter().map(|t| t.value).sum();
        let (xx, yy, xy) = norms;
        let denominator = xx * yy - xy * xy;
        let sectional = (denominator > DEGENERACY_TOL * xx * yy).then(|| numerator / denominator);
        Self {
            numerator,
            denominator,
            sectional,
            terms,
        }
    }

    pub fn term(&self, label: &str) -> Option<f64> {
        self.terms.iter().find(|t| t.label == label).map(|t| t.value)
    }

    pub fn labels(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.terms.iter().map(|t| t.label)
    }

    /// The sectional curvature, or `DegeneratePlane` when the plane is
    /// rank deficient.
    pub fn require_sectional(&self) -> Result<f64> {
        self.sectional.ok_or(Error::DegeneratePlane {
            gram: self.denominator,
            threshold: DEGENERACY_TOL,
        })
    }
}

/// Two elements spanning a non-degenerate plane.
#[derive(Debug, Clone, PartialEq)]
pub struct Plane<E> {
    pub x: E,
    pub y: E,
}

impl<E: LinearElement> Plane<E> {
    pub fn new<B>(backend: &B, x: E, y: E) -> Result<Self>
    where
        B: MetricAlgebraBackend<Elem = E>,
    {
        let (xx, yy, xy) = (backend.norm_sq(&x), backend.norm_sq(&y), backend.inner(&x, &y));
        let gram = xx * yy - xy * xy;
        let threshold = DEGENERACY_TOL * xx * yy;
        if gram > threshold && gram.is_finite() {
            Ok(Self { x, y })
        } else {
            Err(Error::DegeneratePlane { gram, threshold })
        }
    }
}

/// `(|x|², |y|², <x,y>)`
pub fn norms<B: MetricAlgebraBackend>(b: &B, x: &B::Elem, y: &B::Elem) -> (f64, f64, f64) {
    (b.norm_sq(x), b.norm_sq(y), b.inner(x, y))
}

pub const GENERIC_LABELS: [&str; 5] = ["sym_transpose", "bracket", "self_transpose", "cross_xy", "cross_yx"];

fn generic_terms<B: MetricAlgebraBackend>(b: &B, x: &B::Elem, y: &B::Elem) -> [f64; 5] {
    let ad_xy = b.bracket(x, y);
    let ad_yx = b.bracket(y, x);
    let t_xy = b.ad_transpose(x, y);
    let t_yx = b.ad_transpose(y, x);
    let t_xx = b.ad_transpose(x, x);
    let t_yy = b.ad_transpose(y, y);
    let sym = t_xy.add(&t_yx);
    [
        0.25 * b.norm_sq(&sym),
        -0.75 * b.norm_sq(&ad_xy),
        -b.inner(&t_xx, &t_yy),
        -0.5 * b.inner(&t_xy, &ad_xy),
        -0.5 * b.inner(&t_yx, &ad_yx),
    ]
}

/// `<R(X,Y)Y,X> = ¼|ad(X)ᵀY + ad(Y)ᵀX|² − ¾|ad(X)Y|² − <ad(X)ᵀX, ad(Y)ᵀY>
///   − ½<ad(X)ᵀY, ad(X)Y> − ½<ad(Y)ᵀX, ad(Y)X>`
pub fn numerator_generic<B: MetricAlgebraBackend>(b: &B, x: &B::Elem, y: &B::Elem) -> CurvatureBreakdown {
    let terms = GENERIC_LABELS
        .iter()
        .zip(generic_terms(b, x, y))
        .map(|(&label, value)| Term { label, value })
        .collect();
    CurvatureBreakdown::from_terms(terms, norms(b, x, y))
}

/// The five-term numerator as a single number.
pub fn generic_value<B: MetricAlgebraBackend>(b: &B, x: &B::Elem, y: &B::Elem) -> f64 {
    generic_terms(b, x, y).iter().sum()
}

/// Sectional curvature of the plane spanned by `x` and `y`.
pub fn sectional<B: MetricAlgebraBackend>(b: &B, x: &B::Elem, y: &B::Elem) -> Result<f64> {
    numerator_generic(b, x, y).require_sectional()
}

pub fn sectional_of<B: MetricAlgebraBackend>(b: &B, plane: &Plane<B::Elem>) -> Result<f64> {
    sectional(b, &plane.x, &plane.y)
}

/// Labels of the semidirect expansion in display order.
pub const SEMIDIRECT_LABELS: [&str; 21] = [
    "r_g",
    "r_h",
    "h_sym_sq",
    "h11_h22",
    "h_sym_adt_sym",
    "h11_adt22",
    "h22_adt11",
    "bt_sym_sq",
    "b_antisym_sq",
    "bt11_bt22",
    "bt11_b22",
    "bt22_b11",
    "bt12_b21",
    "bt21_b12",
    "bt12_b12",
    "bt21_b21",
    "adt11_bt22",
    "adt22_bt11",
    "adt12_mix",
    "adt21_mix",
    "ad12_mix",
];

/// The expansion of `<R̃((X1,Y1),(X2,Y2))(X2,Y2),(X1,Y1)>` on `g ⋉ h` in terms
/// of the factor curvatures, `h`, `b` and `bᵀ`, one labeled entry per summand.
pub fn numerator_semidirect<S: SemidirectBackend>(s: &S, a: &SdElem<S>, b: &SdElem<S>) -> CurvatureBreakdown {
    let g = s.g();
    let hh = s.h();
    let (x1, y1, x2, y2) = (&a.g, &a.h, &b.g, &b.h);

    let h11 = s.h_map(y1, y1);
    let h12 = s.h_map(y1, y2);
    let h21 = s.h_map(y2, y1);
    let h22 = s.h_map(y2, y2);
    let h_sym = h12.add(&h21);

    let at12 = g.ad_transpose(x1, x2);
    let at21 = g.ad_transpose(x2, x1);
    let at11 = g.ad_transpose(x1, x1);
    let at22 = g.ad_transpose(x2, x2);

    let b11 = s.act(x1, y1);
    let b12 = s.act(x1, y2);
    let b21 = s.act(x2, y1);
    let b22 = s.act(x2, y2);
    let bt11 = s.act_transpose(x1, y1);
    let bt12 = s.act_transpose(x1, y2);
    let bt21 = s.act_transpose(x2, y1);
    let bt22 = s.act_transpose(x2, y2);

    let ct11 = hh.ad_transpose(y1, y1);
    let ct22 = hh.ad_transpose(y2, y2);
    let ct12 = hh.ad_transpose(y1, y2);
    let ct21 = hh.ad_transpose(y2, y1);
    let c12 = hh.bracket(y1, y2);

    let bt_sym = bt12.add(&bt21);
    let b_anti = b12.sub(&b21);
    let mix12 = bt12.add(&bt21).sub(&b12).add(&b21);
    let mix21 = bt12.add(&bt21).sub(&b21).add(&b12);
    let mix_ad = bt12.sub(&bt21).add_scaled(&b12, 3.0).add_scaled(&b21, -3.0);

    let values = [
        generic_value(g, x1, x2),
        generic_value(hh, y1, y2),
        0.25 * g.norm_sq(&h_sym),
        -g.inner(&h11, &h22),
        -0.5 * g.inner(&h_sym, &at12.add(&at21)),
        g.inner(&h11, &at22),
        g.inner(&h22, &at11),
        0.25 * hh.norm_sq(&bt_sym),
        -0.75 * hh.norm_sq(&b_anti),
        -hh.inner(&bt11, &bt22),
        -0.5 * hh.inner(&bt11, &b22),
        -0.5 * hh.inner(&bt22, &b11),
        hh.inner(&bt12, &b21),
        hh.inner(&bt21, &b12),
        -0.5 * hh.inner(&bt12, &b12),
        -0.5 * hh.inner(&bt21, &b21),
        -hh.inner(&ct11, &bt22),
        -hh.inner(&ct22, &bt11),
        0.5 * hh.inner(&ct12, &mix12),
        0.5 * hh.inner(&ct21, &mix21),
        -0.5 * hh.inner(&c12, &mix_ad),
    ];
    let terms = SEMIDIRECT_LABELS
        .iter()
        .zip(values)
        .map(|(&label, value)| Term { label, value })
        .collect();
    let p = s.product();
    CurvatureBreakdown::from_terms(terms, norms(&p, a, b))
}

/// The three special planes of a semidirect product.
#[derive(Debug, Clone)]
pub enum SpecialPlane<X, Y> {
    /// Spanned by `(X1, 0)` and `(X2, 0)`.
    GG(X, X),
    /// Spanned by `(X, 0)` and `(0, Y)`.
    GH(X, Y),
    /// Spanned by `(0, Y1)` and `(0, Y2)`.
    HH(Y, Y),
}

/// Closed forms of the numerator on the special planes.
pub fn special_plane<S: SemidirectBackend>(s: &S, case: &SpecialPlane<GElem<S>, HElem<S>>) -> f64 {
    let (g, hh) = (s.g(), s.h());
    match case {
        SpecialPlane::GG(x1, x2) => generic_value(g, x1, x2),
        SpecialPlane::GH(x, y) => {
            let hyy = s.h_map(y, y);
            let bx = s.act(x, y);
            let btx = s.act_transpose(x, y);
            g.inner(&hyy, &g.ad_transpose(x, x)) - 0.25 * hh.norm_sq(&bx.add(&btx)) + 0.5 * hh.norm_sq(&btx)
                - 0.5 * hh.norm_sq(&bx)
        }
        SpecialPlane::HH(y1, y2) => {
            let h_sym = s.h_map(y1, y2).add(&s.h_map(y2, y1));
            generic_value(hh, y1, y2) + 0.25 * g.norm_sq(&h_sym) - g.inner(&s.h_map(y1, y1), &s.h_map(y2, y2))
        }
    }
}

/// `<R^G(X1,X2)X2,X1> + <R^H(Y1,Y2)Y2,Y1>`, the numerator of an isometric
/// semidirect product.
pub fn isometric_sum<S: SemidirectBackend>(s: &S, a: &SdElem<S>, b: &SdElem<S>) -> Result<f64> {
    if !s.is_isometric() {
        return Err(Error::NotIsometric);
    }
    Ok(generic_value(s.g(), &a.g, &b.g) + generic_value(s.h(), &a.h, &b.h))
}

pub const MAGNETIC_LABELS: [&str; 15] = [
    "r_g",
    "adt_sym_sq",
    "ad11_ad22",
    "adt11_adt22",
    "adt_sym_cross",
    "adt11_x22",
    "adt22_x11",
    "ad_sym_sq",
    "adt_antisym_sq",
    "ad11_adt22",
    "ad22_adt11",
    "ad12_adt21",
    "ad21_adt12",
    "ad12_adt12",
    "ad21_adt21",
];

/// The numerator on the magnetic extension `G ⋉ g*_reg` at
/// `((X1, A(Y1)), (X2, A(Y2)))`, written in `g` operations only.
///
/// The cross term `−½<ad(Y1)ᵀY2 + ad(Y2)ᵀY1, ad(X1)ᵀX2 + ad(X2)ᵀX1>` carries a
/// minus sign; it is the image of the `h`-cross term of the semidirect
/// expansion under `h(A(Y1),A(Y2)) = ad(Y2)ᵀY1`.
pub fn numerator_magnetic<B: MetricAlgebraBackend>(
    g: &B,
    a: &Pair<B::Elem, B::Elem>,
    b: &Pair<B::Elem, B::Elem>,
) -> CurvatureBreakdown {
    let (x1, y1, x2, y2) = (&a.g, &a.h, &b.g, &b.h);
    let at = |p: &B::Elem, q: &B::Elem| g.ad_transpose(p, q);
    let ad = |p: &B::Elem, q: &B::Elem| g.bracket(p, q);
    let s_y = at(y1, y2).add(&at(y2, y1));
    let s_x = at(x1, x2).add(&at(x2, x1));
    let (ad11, ad12, ad21, ad22) = (ad(x1, y1), ad(x1, y2), ad(x2, y1), ad(x2, y2));
    let (t11, t12, t21, t22) = (at(x1, y1), at(x1, y2), at(x2, y1), at(x2, y2));
    let (ty11, ty22) = (at(y1, y1), at(y2, y2));
    let values = [
        generic_value(g, x1, x2),
        0.25 * g.norm_sq(&s_y),
        -g.inner(&ad11, &ad22),
        -g.inner(&ty11, &ty22),
        -0.5 * g.inner(&s_y, &s_x),
        g.inner(&ty11, &at(x2, x2)),
        g.inner(&ty22, &at(x1, x1)),
        0.25 * g.norm_sq(&ad12.add(&ad21)),
        -0.75 * g.norm_sq(&t12.sub(&t21)),
        -0.5 * g.inner(&ad11, &t22),
        -0.5 * g.inner(&ad22, &t11),
        g.inner(&ad12, &t21),
        g.inner(&ad21, &t12),
        -0.5 * g.inner(&ad12, &t12),
        -0.5 * g.inner(&ad21, &t21),
    ];
    let terms = MAGNETIC_LABELS
        .iter()
        .zip(values)
        .map(|(&label, value)| Term { label, value })
        .collect();
    let n = (
        g.norm_sq(x1) + g.norm_sq(y1),
        g.norm_sq(x2) + g.norm_sq(y2),
        g.inner(x1, x2) + g.inner(y1, y2),
    );
    CurvatureBreakdown::from_terms(terms, n)
}

/// Levi-Civita connection on constant right-trivialized sections:
/// `∇_X Y = ½ad(X)ᵀY + ½ad(Y)ᵀX − ½ad(X)Y`.
pub fn covariant_derivative<B: MetricAlgebraBackend>(b: &B, x: &B::Elem, y: &B::Elem) -> B::Elem {
    b.ad_transpose(x, y)
        .add(&b.ad_transpose(y, x))
        .sub(&b.bracket(x, y))
        .scale(0.5)
}

/// Numerator computed by composing the connection:
/// `R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_{[X,Y]_F} Z` with `[X,Y]_F = −[X,Y]`,
/// the bracket of the corresponding right-invariant vector fields.
pub fn oracle_numerator<B: MetricAlgebraBackend>(b: &B, x: &B::Elem, y: &B::Elem) -> f64 {
    let field_bracket = b.bracket(x, y).scale(-1.0);
    let nabla_y_y = covariant_derivative(b, y, y);
    let nabla_x_y = covariant_derivative(b, x, y);
    let r = covariant_derivative(b, x, &nabla_y_y)
        .sub(&covariant_derivative(b, y, &nabla_x_y))
        .sub(&covariant_derivative(b, &field_bracket, y));
    b.inner(&r, x)
}

//! Semidirect products `g ⋉ h` of finite-dimensional metric algebras.

use nalgebra::{DMatrix, DVector};

use crate::algebra::{AlgebraElement, Invariant, MetricAlgebra, MetricAlgebraSpec, ValidationReport};
use crate::backend::{MetricAlgebraBackend, SemidirectBackend};
use crate::element::Pair;
use crate::error::{Error, Result};
use crate::tolerance::rel_diff;

/// The action `b: g → Der h` given by the matrices `b(e_i)` acting on `h`.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionSpec {
    pub matrices: Vec<DMatrix<f64>>,
}

impl ActionSpec {
    pub fn new(matrices: Vec<DMatrix<f64>>) -> Self {
        Self { matrices }
    }

    pub fn zero(dim_g: usize, dim_h: usize) -> Self {
        Self::new(vec![DMatrix::zeros(dim_h, dim_h); dim_g])
    }

    /// Builds the action from zero-based `(g_index, row, col, value)` entries.
    pub fn from_entries(dim_g: usize, dim_h: usize, entries: &[(usize, usize, usize, f64)]) -> Result<Self> {
        let mut action = Self::zero(dim_g, dim_h);
        for &(i, r, c, v) in entries {
            if i >= dim_g || r >= dim_h || c >= dim_h {
                return Err(Error::Config(format!(
                    "action entry ({}, {}, {}) out of range for dims ({dim_g}, {dim_h})",
                    i + 1,
                    r + 1,
                    c + 1
                )));
            }
            action.matrices[i][(r, c)] = v;
        }
        Ok(action)
    }
}

/// Derivation and homomorphism checks for an action of `g` on `h`.
pub fn validate_action(g: &MetricAlgebra, h: &MetricAlgebra, action: &ActionSpec, tol: f64) -> ValidationReport {
    let mut report = ValidationReport::default();
    let (n, m) = (g.dim(), h.dim());
    if action.matrices.len() != n || action.matrices.iter().any(|b| b.nrows() != m || b.ncols() != m) {
        report.push(Invariant::Shape, None, f64::INFINITY);
        return report;
    }
    let bmax = action.matrices.iter().fold(0.0_f64, |a, b| a.max(b.amax()));
    let cg = g.spec().structure.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    let ch = h.spec().structure.iter().fold(0.0_f64, |a, v| a.max(v.abs()));

    // b(e_i)[f_a, f_b] = [b(e_i) f_a, f_b] + [f_a, b(e_i) f_b]
    let scale = (bmax * ch).max(1.0);
    let mut worst = (0.0, None);
    for (i, b) in action.matrices.iter().enumerate() {
        for a in 0..m {
            for c in 0..m {
                let fa = h.basis(a);
                let fc = h.basis(c);
                let lhs = b * h.bracket(&fa, &fc);
                let rhs = h.bracket(&(b * &fa), &fc) + h.bracket(&fa, &(b * &fc));
                let r = (lhs - rhs).amax() / scale;
                if r > worst.0 || r.is_nan() {
                    worst = (r, Some([i, a, c]));
                }
            }
        }
    }
    if worst.0 > tol || worst.0.is_nan() {
        report.push(Invariant::Derivation, worst.1, worst.0);
    }

    // b([e_i, e_j]) = b(e_i) b(e_j) − b(e_j) b(e_i)
    let scale = (bmax * bmax).max(cg * bmax).max(1.0);
    let mut worst = (0.0, None);
    for i in 0..n {
        for j in 0..n {
            let mut lhs = DMatrix::zeros(m, m);
            for k in 0..n {
                let c = g.spec().c(i, j, k);
                if c != 0.0 {
                    lhs += &action.matrices[k] * c;
                }
            }
            let (bi, bj) = (&action.matrices[i], &action.matrices[j]);
            let rhs = bi * bj - bj * bi;
            let r = (lhs - rhs).amax() / scale;
            if r > worst.0 || r.is_nan() {
                worst = (r, Some([i, j, 0]));
            }
        }
    }
    if worst.0 > tol || worst.0.is_nan() {
        report.push(Invariant::Homomorphism, worst.1, worst.0);
    }
    report
}

/// A validated semidirect product with cached `b(e_i)ᵀ`, the `h` tensor and
/// the assembled product algebra.
#[derive(Debug, Clone)]
pub struct SemidirectAlgebra {
    g: MetricAlgebra,
    h: MetricAlgebra,
    action: ActionSpec,
    action_t: Vec<DMatrix<f64>>,
    /// `h_tensor[a * dim_h + b] = h(f_a, f_b)` in g-coordinates.
    h_tensor: Vec<DVector<f64>>,
    isometric: bool,
    product: MetricAlgebra,
    name: Option<String>,
}

impl SemidirectAlgebra {
    pub fn build(g: MetricAlgebra, h: MetricAlgebra, action: ActionSpec) -> Result<Self> {
        let tol = g.tolerances().action;
        let report = validate_action(&g, &h, &action, tol);
        if !report.passed() {
            return Err(Error::InvalidAction(report));
        }
        let (n, m) = (g.dim(), h.dim());

        let action_t: Vec<_> = action.matrices.iter().map(|b| h.metric_transpose(b)).collect();

        let gram_h = h.gram();
        let mut h_tensor = Vec::with_capacity(m * m);
        for a in 0..m {
            for c in 0..m {
                // <b(e_i) f_a, f_c> for each i, then raise the index in g.
                let rhs = DVector::from_fn(n, |i, _| action.matrices[i].column(a).dot(&gram_h.column(c)));
                h_tensor.push(g.raise(&rhs));
            }
        }

        let iso_tol = g.tolerances().isometric;
        let isometric = action
            .matrices
            .iter()
            .zip(&action_t)
            .all(|(b, bt)| (b + bt).amax() <= iso_tol * (1.0 + b.amax()));

        let product = MetricAlgebra::with_tolerances(assemble_product(&g, &h, &action), *g.tolerances())?;

        Ok(Self {
            g,
            h,
            action,
            action_t,
            h_tensor,
            isometric,
            product,
            name: None,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn g_algebra(&self) -> &MetricAlgebra {
        &self.g
    }

    pub fn h_algebra(&self) -> &MetricAlgebra {
        &self.h
    }

    pub fn action(&self) -> &ActionSpec {
        &self.action
    }

    /// The matrix of `b(e_i)ᵀ`.
    pub fn action_transpose_matrix(&self, i: usize) -> &DMatrix<f64> {
        &self.action_t[i]
    }

    /// The assembled product algebra with its block-diagonal Gram matrix.
    pub fn product_algebra(&self) -> &MetricAlgebra {
        &self.product
    }

    pub fn dim(&self) -> usize {
        self.g.dim() + self.h.dim()
    }

    pub fn split(&self, v: &DVector<f64>) -> Pair<AlgebraElement, AlgebraElement> {
        let n = self.g.dim();
        Pair::new(v.rows(0, n).into_owned(), v.rows(n, self.h.dim()).into_owned())
    }

    pub fn join(&self, p: &Pair<AlgebraElement, AlgebraElement>) -> DVector<f64> {
        let mut v = DVector::zeros(self.dim());
        v.rows_mut(0, self.g.dim()).copy_from(&p.g);
        v.rows_mut(self.g.dim(), self.h.dim()).copy_from(&p.h);
        v
    }

    /// `Σ x_i b(e_i)`
    pub fn action_matrix(&self, x: &AlgebraElement) -> DMatrix<f64> {
        combine(&self.action.matrices, x)
    }

    fn check_g(&self, x: &AlgebraElement) -> Result<()> {
        check_len(self.g.dim(), x)
    }

    fn check_h(&self, y: &AlgebraElement) -> Result<()> {
        check_len(self.h.dim(), y)
    }

    pub fn derive_h(&self, y1: &AlgebraElement, y2: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_h(y1)?;
        self.check_h(y2)?;
        Ok(self.h_map(y1, y2))
    }

    /// `ad(X1,Y1)ᵀ(X2,Y2)` by the closed form.
    pub fn product_ad_transpose(
        &self,
        a: &Pair<AlgebraElement, AlgebraElement>,
        b: &Pair<AlgebraElement, AlgebraElement>,
    ) -> Result<Pair<AlgebraElement, AlgebraElement>> {
        for p in [a, b] {
            self.check_g(&p.g)?;
            self.check_h(&p.h)?;
        }
        Ok(self.product().ad_transpose(a, b))
    }

    pub fn check_isometric(&self) -> bool {
        self.isometric
    }

    /// Relative residual of
    /// `<h(Y1,Y2), ad(X1)X2> = <b(X1)ᵀY2, b(X2)Y1> − <b(X2)ᵀY2, b(X1)Y1>`.
    pub fn check_h_identity(
        &self,
        y1: &AlgebraElement,
        y2: &AlgebraElement,
        x1: &AlgebraElement,
        x2: &AlgebraElement,
    ) -> f64 {
        let (g, h) = (&self.g, &self.h);
        let lhs = g.inner(&self.h_map(y1, y2), &g.bracket(x1, x2));
        let rhs = h.inner(&self.act_transpose(x1, y2), &self.act(x2, y1))
            - h.inner(&self.act_transpose(x2, y2), &self.act(x1, y1));
        rel_diff(lhs, rhs)
    }

    /// Relative residual of
    /// `<ad(Y1)Y2, b(X)ᵀY3> = <b(X)Y2, ad(Y1)ᵀY3> − <b(X)Y1, ad(Y2)ᵀY3>`.
    pub fn check_derivation_identity(
        &self,
        x: &AlgebraElement,
        y1: &AlgebraElement,
        y2: &AlgebraElement,
        y3: &AlgebraElement,
    ) -> f64 {
        let h = &self.h;
        let lhs = h.inner(&h.bracket(y1, y2), &self.act_transpose(x, y3));
        let rhs =
            h.inner(&self.act(x, y2), &h.ad_transpose(y1, y3)) - h.inner(&self.act(x, y1), &h.ad_transpose(y2, y3));
        rel_diff(lhs, rhs)
    }
}

impl SemidirectBackend for SemidirectAlgebra {
    type G = MetricAlgebra;
    type H = MetricAlgebra;

    fn g(&self) -> &MetricAlgebra {
        &self.g
    }

    fn h(&self) -> &MetricAlgebra {
        &self.h
    }

    fn act(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        combine(&self.action.matrices, x) * y
    }

    fn act_transpose(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        combine(&self.action_t, x) * y
    }

    fn h_map(&self, y1: &AlgebraElement, y2: &AlgebraElement) -> AlgebraElement {
        let m = self.h.dim();
        let mut out = DVector::zeros(self.g.dim());
        for a in 0..m {
            if y1[a] == 0.0 {
                continue;
            }
            for c in 0..m {
                let w = y1[a] * y2[c];
                if w != 0.0 {
                    out.axpy(w, &self.h_tensor[a * m + c], 1.0);
                }
            }
        }
        out
    }

    fn is_isometric(&self) -> bool {
        self.isometric
    }
}

fn combine(mats: &[DMatrix<f64>], x: &AlgebraElement) -> DMatrix<f64> {
    let (r, c) = mats.first().map_or((0, 0), |m| m.shape());
    let mut out = DMatrix::zeros(r, c);
    for (xi, m) in x.iter().zip(mats) {
        if *xi != 0.0 {
            out += m * *xi;
        }
    }
    out
}

fn check_len(dim: usize, x: &AlgebraElement) -> Result<()> {
    if x.len() == dim {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: dim,
            found: x.len(),
        })
    }
}

/// Structure constants and Gram matrix of `g ⋉ h`:
/// `[(X1,Y1),(X2,Y2)] = ([X1,X2], [Y1,Y2] + b(X1)Y2 − b(X2)Y1)`.
fn assemble_product(g: &MetricAlgebra, h: &MetricAlgebra, action: &ActionSpec) -> MetricAlgebraSpec {
    let (n, m) = (g.dim(), h.dim());
    let d = n + m;
    let mut c = vec![0.0; d * d * d];
    let idx = |i: usize, j: usize, k: usize| (i * d + j) * d + k;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                c[idx(i, j, k)] = g.spec().c(i, j, k);
            }
        }
    }
    for a in 0..m {
        for b in 0..m {
            for l in 0..m {
                c[idx(n + a, n + b, n + l)] = h.spec().c(a, b, l);
            }
        }
    }
    for (i, bmat) in action.matrices.iter().enumerate() {
        for a in 0..m {
            for l in 0..m {
                let v = bmat[(l, a)];
                c[idx(i, n + a, n + l)] = v;
                c[idx(n + a, i, n + l)] = -v;
            }
        }
    }
    let mut gram = DMatrix::zeros(d, d);
    gram.view_mut((0, 0), (n, n)).copy_from(g.gram());
    gram.view_mut((n, n), (m, m)).copy_from(h.gram());
    MetricAlgebraSpec::new(d, c, gram)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::{conjugation, linear_so3_on_r3, so3};
    use nalgebra::dvector;

    fn so3_id() -> MetricAlgebra {
        so3(DMatrix::identity(3, 3)).unwrap()
    }

    fn close(a: &DVector<f64>, b: &DVector<f64>) -> bool {
        (a - b).amax() < 1e-13
    }

    #[test]
    fn conjugation_product_bracket() {
        let sd = conjugation(&so3_id()).unwrap();
        let p = sd.product_algebra();
        let x = dvector![1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        let y = dvector![0.0, 0.0, 0.0, 0.0, 1.0, 0.0];
        assert!(close(&p.bracket(&x, &y), &dvector![0.0, 0.0, 0.0, 0.0, 0.0, 1.0]));
    }

    #[test]
    fn zero_action_is_direct_product() {
        let g = so3_id();
        let h = MetricAlgebra::new(MetricAlgebraSpec::abelian(DMatrix::identity(3, 3))).unwrap();
        let sd = SemidirectAlgebra::build(g.clone(), h, ActionSpec::zero(3, 3)).unwrap();
        let a = Pair::new(dvector![1.0, 2.0, 0.5], dvector![3.0, -1.0, 2.0]);
        let b = Pair::new(dvector![-1.0, 0.0, 4.0], dvector![0.0, 1.0, 1.0]);
        let br = sd.product().bracket(&a, &b);
        assert!(close(&br.g, &g.bracket(&a.g, &b.g)));
        assert_eq!(br.h, DVector::zeros(3));
        assert_eq!(sd.derive_h(&a.h, &b.h).unwrap(), DVector::zeros(3));
        // Direct product: assembled bracket agrees.
        let direct = sd.product_algebra().bracket(&sd.join(&a), &sd.join(&b));
        assert!(close(&direct, &sd.join(&br)));
    }

    #[test]
    fn euclidean_bracket_matches_matrix_action() {
        let sd = linear_so3_on_r3();
        let e1 = Pair::new(dvector![1.0, 0.0, 0.0], DVector::zeros(3));
        let f2 = Pair::new(DVector::zeros(3), dvector![0.0, 1.0, 0.0]);
        let br = sd.product().bracket(&e1, &f2);
        assert!(close(&br.h, &dvector![0.0, 0.0, 1.0]));
        assert!(close(&br.g, &DVector::zeros(3)));
        // Cross-check: the antisymmetrized assembled bracket.
        let p = sd.product_algebra();
        let (u, v) = (sd.join(&e1), sd.join(&f2));
        assert!(close(&p.bracket(&u, &v), &-p.bracket(&v, &u)));
        assert!(close(&p.bracket(&u, &v), &sd.join(&br)));
        // Rotation generator applied to f2 as a 3x3 matrix.
        let rot = sd.action_matrix(&dvector![1.0, 0.0, 0.0]);
        assert!(close(&(rot * dvector![0.0, 1.0, 0.0]), &dvector![0.0, 0.0, 1.0]));
    }

    #[test]
    fn derive_h_examples() {
        let sd = conjugation(&so3_id()).unwrap();
        let e = |i| sd.h_algebra().basis(i);
        assert!(close(&sd.derive_h(&e(0), &e(1)).unwrap(), &e(2)));
        let y = dvector![0.3, -1.2, 2.0];
        assert!(sd.check_isometric());
        assert!(sd.derive_h(&y, &y).unwrap().amax() < 1e-14);
        assert!(sd.derive_h(&y, &dvector![1.0]).is_err());
    }

    #[test]
    fn h_defining_relation_on_basis() {
        let g = so3(DMatrix::from_diagonal(&dvector![1.0, 2.0, 3.0])).unwrap();
        let sd = conjugation(&g).unwrap();
        for a in 0..3 {
            for c in 0..3 {
                let (fa, fc) = (sd.h_algebra().basis(a), sd.h_algebra().basis(c));
                let hv = sd.h_map(&fa, &fc);
                for i in 0..3 {
                    let x = sd.g_algebra().basis(i);
                    let lhs = sd.h_algebra().inner(&sd.act(&x, &fa), &fc);
                    let rhs = sd.g_algebra().inner(&hv, &x);
                    assert!((lhs - rhs).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn product_ad_transpose_examples() {
        let sd = conjugation(&so3_id()).unwrap();
        let z = DVector::zeros(3);
        let e = |i| so3_id().basis(i);
        let r = sd
            .product_ad_transpose(&Pair::new(e(0), z.clone()), &Pair::new(e(1), z.clone()))
            .unwrap();
        assert!(close(&r.g, &-e(2)) && close(&r.h, &z));

        let a = Pair::new(z.clone(), e(0));
        let b = Pair::new(z.clone(), e(1));
        let r = sd.product_ad_transpose(&a, &b).unwrap();
        assert!(close(&r.g, &-e(2)) && close(&r.h, &-e(2)));
        let direct = sd.product_algebra().ad_transpose(&sd.join(&a), &sd.join(&b));
        assert!(close(&direct, &sd.join(&r)));

        let zero = Pair::new(z.clone(), z.clone());
        let r = sd.product_ad_transpose(&zero, &zero).unwrap();
        assert_eq!(r, zero);
    }

    #[test]
    fn isometric_flags() {
        assert!(conjugation(&so3_id()).unwrap().check_isometric());
        assert!(linear_so3_on_r3().check_isometric());
        let g = so3(DMatrix::from_diagonal(&dvector![1.0, 2.0, 3.0])).unwrap();
        let sd = conjugation(&g).unwrap();
        assert!(!sd.check_isometric());
        let b1 = &sd.action().matrices[0];
        let s = b1 + sd.action_transpose_matrix(0);
        assert!(s.amax() > 0.1);
    }

    #[test]
    fn identity_residual_examples() {
        let sd = conjugation(&so3_id()).unwrap();
        let e = |i| so3_id().basis(i);
        assert!(sd.check_h_identity(&e(0), &e(1), &e(0), &e(1)) < 1e-14);
        let x = dvector![0.4, 1.0, -2.0];
        assert!(sd.check_h_identity(&e(0), &e(2), &x, &x) < 1e-14);
        assert!(sd.check_derivation_identity(&e(0), &e(0), &e(1), &e(2)) < 1e-14);
        assert!(sd.check_derivation_identity(&DVector::zeros(3), &e(0), &e(1), &e(2)) == 0.0);

        let zero = SemidirectAlgebra::build(
            so3_id(),
            MetricAlgebra::new(MetricAlgebraSpec::abelian(DMatrix::identity(2, 2))).unwrap(),
            ActionSpec::zero(3, 2),
        )
        .unwrap();
        let y = dvector![1.0, 2.0];
        assert_eq!(zero.check_h_identity(&y, &y, &e(0), &e(1)), 0.0);
        assert_eq!(zero.check_derivation_identity(&e(0), &y, &y, &y), 0.0);
    }

    #[test]
    fn invalid_actions_are_rejected() {
        let g = so3_id();
        let h = MetricAlgebra::new(MetricAlgebraSpec::abelian(DMatrix::identity(3, 3))).unwrap();
        // b(e1) nonzero but b(e2)=b(e3)=0 breaks the homomorphism property.
        let mut action = ActionSpec::zero(3, 3);
        action.matrices[0] = g.ad_basis(0).clone();
        let err = SemidirectAlgebra::build(g.clone(), h.clone(), action).unwrap_err();
        match err {
            Error::InvalidAction(r) => assert!(r.has(Invariant::Homomorphism)),
            e => panic!("unexpected {e}"),
        }
        // Identity map on non-abelian h is not a derivation.
        let action = ActionSpec::new(vec![DMatrix::identity(3, 3); 3]);
        let err = SemidirectAlgebra::build(g.clone(), g.clone(), action).unwrap_err();
        match err {
            Error::InvalidAction(r) => assert!(r.has(Invariant::Derivation)),
            e => panic!("unexpected {e}"),
        }
        let err = SemidirectAlgebra::build(g, h, ActionSpec::zero(2, 3)).unwrap_err();
        assert!(matches!(err, Error::InvalidAction(_)));
    }
}

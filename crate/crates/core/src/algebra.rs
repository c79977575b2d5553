//! Finite-dimensional metric Lie algebras given by structure constants and a
//! Gram matrix.

use std::fmt;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::backend::MetricAlgebraBackend;
use crate::error::{Error, Result};

pub type AlgebraElement = DVector<f64>;

/// Validation thresholds. All are relative to the magnitude of the input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub jacobi: f64,
    pub adjoint: f64,
    /// Derivation and homomorphism checks on actions.
    pub action: f64,
    /// Skew-adjointness of `b(e_i)` for the isometric flag.
    pub isometric: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            jacobi: 1e-10,
            adjoint: 1e-10,
            action: 1e-10,
            isometric: 1e-10,
        }
    }
}

/// Raw description of a metric Lie algebra: `[e_i, e_j] = Σ_k c[i][j][k] e_k`
/// and `gram[i][j] = <e_i, e_j>`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricAlgebraSpec {
    pub dim: usize,
    /// Flattened `c[i][j][k]` at index `(i * dim + j) * dim + k`.
    pub structure: Vec<f64>,
    pub gram: DMatrix<f64>,
    pub name: Option<String>,
}

impl MetricAlgebraSpec {
    pub fn new(dim: usize, structure: Vec<f64>, gram: DMatrix<f64>) -> Self {
        Self {
            dim,
            structure,
            gram,
            name: None,
        }
    }

    /// Builds the structure tensor from `(i, j, k, value)` entries with
    /// zero-based indices, filling in `c[j][i][k] = -value`. Entries with
    /// `i == j` are ignored.
    pub fn from_entries(dim: usize, entries: &[(usize, usize, usize, f64)], gram: DMatrix<f64>) -> Result<Self> {
        let mut structure = vec![0.0; dim * dim * dim];
        for &(i, j, k, v) in entries {
            let largest = i.max(j).max(k);
            if largest >= dim {
                return Err(Error::Config(format!(
                    "structure constant index {} out of range for dimension {dim}",
                    largest + 1
                )));
            }
            if i == j {
                continue;
            }
            structure[(i * dim + j) * dim + k] = v;
            structure[(j * dim + i) * dim + k] = -v;
        }
        Ok(Self::new(dim, structure, gram))
    }

    pub fn abelian(gram: DMatrix<f64>) -> Self {
        let dim = gram.nrows();
        Self::new(dim, vec![0.0; dim * dim * dim], gram)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    #[inline]
    pub fn c(&self, i: usize, j: usize, k: usize) -> f64 {
        self.structure[(i * self.dim + j) * self.dim + k]
    }

    fn max_constant(&self) -> f64 {
        self.structure.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Invariant {
    Shape,
    Antisymmetry,
    Jacobi,
    GramSymmetry,
    GramPositiveDefinite,
    Derivation,
    Homomorphism,
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Invariant::Shape => "shape",
            Invariant::Antisymmetry => "antisymmetry",
            Invariant::Jacobi => "jacobi",
            Invariant::GramSymmetry => "gram-symmetry",
            Invariant::GramPositiveDefinite => "gram-positive-definite",
            Invariant::Derivation => "derivation",
            Invariant::Homomorphism => "homomorphism",
        };
        f.write_str(s)
    }
}

/// One failed invariant, with the worst-offending (zero-based) index triple.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationFailure {
    pub invariant: Invariant,
    pub indices: Option<[usize; 3]>,
    pub residual: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub failures: Vec<ValidationFailure>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn has(&self, invariant: Invariant) -> bool {
        self.failures.iter().any(|f| f.invariant == invariant)
    }

    pub(crate) fn push(&mut self, invariant: Invariant, indices: Option<[usize; 3]>, residual: f64) {
        self.failures.push(ValidationFailure {
            invariant,
            indices,
            residual,
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return f.write_str("pass");
        }
        for (n, fail) in self.failures.iter().enumerate() {
            if n > 0 {
                writeln!(f)?;
            }
            write!(f, "fail {}", fail.invariant)?;
            if let Some([i, j, k]) = fail.indices {
                write!(f, " at ({}, {}, {})", i + 1, j + 1, k + 1)?;
            }
            write!(f, " residual {:e}", fail.residual)?;
        }
        Ok(())
    }
}

/// Tracks the worst residual above a threshold.
struct Worst {
    residual: f64,
    indices: Option<[usize; 3]>,
}

impl Worst {
    fn new() -> Self {
        Self {
            residual: 0.0,
            indices: None,
        }
    }

    fn update(&mut self, residual: f64, indices: [usize; 3]) {
        if residual > self.residual || residual.is_nan() {
            self.residual = residual;
            self.indices = Some(indices);
        }
    }

    fn report(self, report: &mut ValidationReport, invariant: Invariant, tol: f64) {
        if self.residual > tol || self.residual.is_nan() {
            report.push(invariant, self.indices, self.residual);
        }
    }
}

/// Checks antisymmetry, the Jacobi identity and positive definiteness of the
/// Gram matrix.
pub fn validate(spec: &MetricAlgebraSpec, tol: &Tolerances) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = spec.dim;
    if n == 0 || spec.structure.len() != n * n * n || spec.gram.nrows() != n || spec.gram.ncols() != n {
        report.push(Invariant::Shape, None, f64::INFINITY);
        return report;
    }

    let scale = match spec.max_constant() {
        m if m > 0.0 => m,
        _ => 1.0,
    };

    let mut worst = Worst::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let r = (spec.c(i, j, k) + spec.c(j, i, k)).abs() / scale;
                worst.update(r, [i, j, k]);
            }
        }
    }
    worst.report(&mut report, Invariant::Antisymmetry, tol.jacobi);

    // Coefficient of e_m in [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j].
    // The identity is quadratic in c, so residuals are scaled by max|c|².
    let mut worst = Worst::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for m in 0..n {
                    let mut s = 0.0;
                    for l in 0..n {
                        s += spec.c(i, j, l) * spec.c(l, k, m)
                            + spec.c(j, k, l) * spec.c(l, i, m)
                            + spec.c(k, i, l) * spec.c(l, j, m);
                    }
                    worst.update(s.abs() / (scale * scale), [i, j, k]);
                }
            }
        }
    }
    worst.report(&mut report, Invariant::Jacobi, tol.jacobi);

    let gscale = match spec.gram.amax() {
        m if m > 0.0 => m,
        _ => 1.0,
    };
    let mut worst = Worst::new();
    for i in 0..n {
        for j in 0..n {
            let r = (spec.gram[(i, j)] - spec.gram[(j, i)]).abs() / gscale;
            worst.update(r, [i, j, 0]);
        }
    }
    worst.report(&mut report, Invariant::GramSymmetry, tol.jacobi);

    match Cholesky::new(spec.gram.clone()) {
        Some(chol) if chol.l_dirty().diagonal().iter().all(|d| *d > 0.0 && d.is_finite()) => {}
        _ => {
            let eig = spec.gram.clone().symmetric_eigenvalues().min();
            report.push(Invariant::GramPositiveDefinite, None, eig);
        }
    }
    report
}

/// A validated metric Lie algebra with cached `ad(e_i)` matrices and Gram
/// factorization.
#[derive(Debug, Clone)]
pub struct MetricAlgebra {
    spec: MetricAlgebraSpec,
    /// `ad_basis[i][(k, j)] = c[i][j][k]`, the matrix of `ad(e_i)`.
    ad_basis: Vec<DMatrix<f64>>,
    chol: Cholesky<f64, Dyn>,
    tol: Tolerances,
}

impl MetricAlgebra {
    pub fn new(spec: MetricAlgebraSpec) -> Result<Self> {
        Self::with_tolerances(spec, Tolerances::default())
    }

    pub fn with_tolerances(spec: MetricAlgebraSpec, tol: Tolerances) -> Result<Self> {
        let report = validate(&spec, &tol);
        if !report.passed() {
            return Err(Error::InvalidAlgebra(report));
        }
        let n = spec.dim;
        let ad_basis = (0..n).map(|i| DMatrix::from_fn(n, n, |k, j| spec.c(i, j, k))).collect();
        let chol = Cholesky::new(spec.gram.clone()).ok_or_else(|| {
            let mut r = ValidationReport::default();
            r.push(Invariant::GramPositiveDefinite, None, f64::NAN);
            Error::InvalidAlgebra(r)
        })?;
        Ok(Self {
            spec,
            ad_basis,
            chol,
            tol,
        })
    }

    pub fn dim(&self) -> usize {
        self.spec.dim
    }

    pub fn spec(&self) -> &MetricAlgebraSpec {
        &self.spec
    }

    pub fn name(&self) -> Option<&str> {
        self.spec.name.as_deref()
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.spec.gram
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn basis(&self, i: usize) -> AlgebraElement {
        let mut e = DVector::zeros(self.dim());
        e[i] = 1.0;
        e
    }

    pub fn ad_basis(&self, i: usize) -> &DMatrix<f64> {
        &self.ad_basis[i]
    }

    /// Matrix of `ad(x)` in the declared basis.
    pub fn ad_matrix(&self, x: &AlgebraElement) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for (xi, adi) in x.iter().zip(&self.ad_basis) {
            if *xi != 0.0 {
                m += adi * *xi;
            }
        }
        m
    }

    /// `G⁻¹ Mᵀ G`, the transpose of a linear map `M` with respect to the metric.
    pub fn metric_transpose(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        self.chol.solve(&(m.transpose() * &self.spec.gram))
    }

    /// Solves `G r = rhs`, i.e. converts a covector in the basis to a vector.
    pub fn raise(&self, rhs: &DVector<f64>) -> DVector<f64> {
        self.chol.solve(rhs)
    }

    fn check(&self, x: &AlgebraElement) -> Result<()> {
        if x.len() == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            })
        }
    }

    pub fn checked_bracket(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(MetricAlgebraBackend::bracket(self, x, y))
    }

    pub fn checked_inner(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<f64> {
        self.check(x)?;
        self.check(y)?;
        Ok(MetricAlgebraBackend::inner(self, x, y))
    }

    pub fn checked_ad_transpose(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(MetricAlgebraBackend::ad_transpose(self, x, y))
    }

    /// Worst `|<ad(x)w, y> − <w, ad(x)ᵀy>| / ((1+|x|)(1+|y|))` over basis `w`.
    pub fn adjointness_residual(&self, x: &AlgebraElement, y: &AlgebraElement) -> f64 {
        let t = MetricAlgebraBackend::ad_transpose(self, x, y);
        let scale = (1.0 + x.norm()) * (1.0 + y.norm());
        (0..self.dim())
            .map(|i| {
                let w = self.basis(i);
                let lhs = self.inner(&self.bracket(x, &w), y);
                let rhs = self.inner(&w, &t);
                (lhs - rhs).abs() / scale
            })
            .fold(0.0, f64::max)
    }

    /// Whether `ad(e_i)` is skew-adjoint for every basis vector, i.e. the
    /// inner product is Ad-invariant.
    pub fn is_ad_invariant(&self) -> bool {
        let g = &self.spec.gram;
        let scale = g.amax();
        self.ad_basis.iter().all(|m| {
            let s = m.transpose() * g + g * m;
            s.amax() <= self.tol.isometric * scale * (1.0 + m.amax())
        })
    }
}

impl MetricAlgebraBackend for MetricAlgebra {
    type Elem = AlgebraElement;

    fn zero(&self) -> AlgebraElement {
        DVector::zeros(self.dim())
    }

    fn bracket(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        self.ad_matrix(x) * y
    }

    fn inner(&self, x: &AlgebraElement, y: &AlgebraElement) -> f64 {
        (&self.spec.gram * y).dot(x)
    }

    fn ad_transpose(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let m = self.ad_matrix(x);
        self.chol.solve(&(m.transpose() * (&self.spec.gram * y)))
    }
}

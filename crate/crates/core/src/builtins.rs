//! Constructors for the example algebras: `so(3)`, conjugation, linear
//! action on `R³`, magnetic extensions, and seeded random solvable algebras
//! for property tests.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::algebra::{MetricAlgebra, MetricAlgebraSpec};
use crate::error::Result;
use crate::semidirect::{ActionSpec, SemidirectAlgebra};

/// `so(3)` with `[e1,e2] = e3`, `[e2,e3] = e1`, `[e3,e1] = e2`.
pub fn so3(gram: DMatrix<f64>) -> Result<MetricAlgebra> {
    let spec = MetricAlgebraSpec::from_entries(3, &[(0, 1, 2, 1.0), (1, 2, 0, 1.0), (2, 0, 1, 1.0)], gram)?;
    let name = if spec.gram == DMatrix::identity(3, 3) {
        "so3".to_string()
    } else if (spec.gram.clone() - DMatrix::from_diagonal(&spec.gram.diagonal())).amax() == 0.0 {
        let d = spec.gram.diagonal();
        format!("so3:{},{},{}", d[0], d[1], d[2])
    } else {
        "so3:custom".to_string()
    };
    MetricAlgebra::new(spec.with_name(name))
}

pub fn so3_diag(d: [f64; 3]) -> Result<MetricAlgebra> {
    so3(DMatrix::from_diagonal(&DVector::from_row_slice(&d)))
}

/// `G ⋉ G` by conjugation: `b(X) = ad(X)` on a copy of `g` with the same metric.
pub fn conjugation(g: &MetricAlgebra) -> Result<SemidirectAlgebra> {
    let action = ActionSpec::new((0..g.dim()).map(|i| g.ad_basis(i).clone()).collect());
    let sd = SemidirectAlgebra::build(g.clone(), g.clone(), action)?;
    Ok(match g.name() {
        Some(n) => sd.with_name(format!("conjugation:{n}")),
        None => sd,
    })
}

/// The magnetic extension `G ⋉ g*_reg` on `A`-preimage coordinates: the dual
/// carries the metric of `g` and `b(X)Y = −ad(X)ᵀY`.
pub fn magnetic(g: &MetricAlgebra) -> Result<SemidirectAlgebra> {
    let n = g.dim();
    let h = MetricAlgebra::with_tolerances(MetricAlgebraSpec::abelian(g.gram().clone()), *g.tolerances())?;
    let action = ActionSpec::new((0..n).map(|i| -g.metric_transpose(g.ad_basis(i))).collect());
    let sd = SemidirectAlgebra::build(g.clone(), h, action)?;
    Ok(match g.name() {
        Some(n) => sd.with_name(format!("magnetic:{n}")),
        None => sd,
    })
}

/// `so(3)` acting on `R³` by cross products, Euclidean metrics on both sides.
pub fn linear_so3_on_r3() -> SemidirectAlgebra {
    let g = so3(DMatrix::identity(3, 3)).expect("so(3) is valid");
    let h = MetricAlgebra::new(MetricAlgebraSpec::abelian(DMatrix::identity(3, 3))).expect("R³ is valid");
    let action = ActionSpec::new((0..3).map(|i| g.ad_basis(i).clone()).collect());
    SemidirectAlgebra::build(g, h, action)
        .expect("rotation action is valid")
        .with_name("euclidean")
}

/// The Euclidean algebra `so(3) ⋉ R³` carrying the Kirchhoff equations.
pub fn euclidean() -> SemidirectAlgebra {
    linear_so3_on_r3()
}

/// Random symmetric positive definite matrix `AAᵀ + n·I` with normal `A`.
pub fn random_gram<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    &a * a.transpose() + DMatrix::identity(n, n) * n as f64
}

/// A random solvable algebra `R ⋉_D R^{dim−1}`: `e_1` acts on the abelian
/// ideal spanned by the remaining basis vectors through a random
/// upper-triangular matrix `D`, so the Jacobi identity holds exactly.
pub fn random_solvable<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<MetricAlgebra> {
    assert!(dim >= 2, "solvable test algebras need dim >= 2");
    let m = dim - 1;
    let mut entries = Vec::new();
    for col in 0..m {
        for row in 0..=col {
            let v: f64 = rng.sample(StandardNormal);
            // [e_1, e_{col+2}] has coefficient D[row][col] on e_{row+2}.
            entries.push((0, col + 1, row + 1, v));
        }
    }
    let gram = random_gram(rng, dim);
    let spec = MetricAlgebraSpec::from_entries(dim, &entries, gram)?.with_name(format!("solvable{dim}"));
    MetricAlgebra::new(spec)
}

/// `so(3)` with the identity and with the `diag(1, 2, 3)` inertia.
pub fn algebra_catalog() -> Vec<MetricAlgebra> {
    vec![
        so3(DMatrix::identity(3, 3)).expect("so(3) is valid"),
        so3_diag([1.0, 2.0, 3.0]).expect("so(3) is valid"),
    ]
}

/// Every fixed-parameter semidirect example: conjugation and magnetic
/// extension of each [`algebra_catalog`] entry, and the Euclidean algebra.
pub fn semidirect_catalog() -> Vec<SemidirectAlgebra> {
    let mut out = Vec::new();
    for g in algebra_catalog() {
        out.push(conjugation(&g).expect("conjugation of a valid algebra"));
        out.push(magnetic(&g).expect("magnetic extension of a valid algebra"));
    }
    out.push(linear_so3_on_r3());
    out
}

/// Conjugation and magnetic extension of `count` random solvable algebras of
/// dimension `dim`.
pub fn random_semidirects<R: Rng + ?Sized>(rng: &mut R, count: usize, dim: usize) -> Result<Vec<SemidirectAlgebra>> {
    let mut out = Vec::with_capacity(2 * count);
    for _ in 0..count {
        let g = random_solvable(rng, dim)?;
        out.push(conjugation(&g)?);
        out.push(magnetic(&g)?);
    }
    Ok(out)
}

//! Resolution of `--algebra` / `--semidirect` / `--spec` into a backend, and
//! the per-backend glue used by the subcommands.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;
use toml::Value;

use semicurv::algebra::{MetricAlgebra, Tolerances};
use semicurv::backend::{MetricAlgebraBackend, ProductBackend, SemidirectBackend};
use semicurv::builtins::{conjugation, linear_so3_on_r3, magnetic, random_solvable, so3, so3_diag};
use semicurv::curvature::{
    norms, numerator_generic, numerator_magnetic, numerator_semidirect, oracle_numerator, CurvatureBreakdown, Plane,
    Term,
};
use semicurv::geodesic::{integrate, rhs_generic, rhs_magnetic, rhs_semidirect, IntegratorConfig, Trajectory};
use semicurv::sampling::{sample_planes, sample_semidirect_planes, PlaneKind, RandomElement};
use semicurv::semidirect::SemidirectAlgebra;
use semicurv::torus::{
    arnold_flat_curvature, integrate_truncated, mhd_with_sample_band, CompressibleScalar, Mhd, PassiveScalar,
    TrigFunction, TrigVectorField, VectorFields, VolumeFields, DEFAULT_SAMPLE_BAND,
};
use semicurv::{LinearElement, Pair};

use crate::config::{Formula, RunConfig};
use crate::error::CliError;
use crate::input::{self, FromToml, SpecFile};

#[allow(clippy::large_enum_variant)]
pub enum Resolved {
    Algebra(MetricAlgebra),
    Semidirect(SemidirectAlgebra),
    TorusVol(VolumeFields),
    TorusFull(VectorFields),
    Passive(PassiveScalar),
    Compressible(CompressibleScalar),
    Mhd(Mhd),
}

pub fn parse_algebra(sel: &str) -> Result<MetricAlgebra, CliError> {
    if sel == "so3" {
        return Ok(so3(DMatrix::identity(3, 3))?);
    }
    if let Some(rest) = sel.strip_prefix("so3:") {
        let d: Vec<f64> = rest
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::config(format!("`{sel}`: {e}")))?;
        let d: [f64; 3] = d
            .try_into()
            .map_err(|_| CliError::config(format!("`{sel}`: so3 takes three diagonal inertia values")))?;
        return Ok(so3_diag(d)?);
    }
    if let Some(rest) = sel.strip_prefix("solvable:") {
        let parts: Vec<&str> = rest.split(':').collect();
        let parsed = match parts.as_slice() {
            [dim, seed] => dim.parse::<usize>().ok().zip(seed.parse::<u64>().ok()),
            _ => None,
        };
        let (dim, seed) = parsed.ok_or_else(|| CliError::config(format!("`{sel}`: expected solvable:<dim>:<seed>")))?;
        if dim < 2 {
            return Err(CliError::config("solvable algebras need dim >= 2"));
        }
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
        let g = random_solvable(&mut rng, dim)?;
        let spec = g.spec().clone().with_name(sel);
        return Ok(MetricAlgebra::with_tolerances(spec, *g.tolerances())?);
    }
    Err(CliError::config(format!(
        "unknown algebra `{sel}` (expected so3, so3:d1,d2,d3, solvable:<dim>:<seed>, torus:vol or torus:full)"
    )))
}

pub fn parse_semidirect(sel: &str) -> Result<SemidirectAlgebra, CliError> {
    if let Some(rest) = sel.strip_prefix("conjugation:") {
        return Ok(conjugation(&parse_algebra(rest)?)?);
    }
    if let Some(rest) = sel.strip_prefix("magnetic:") {
        return Ok(magnetic(&parse_algebra(rest)?)?);
    }
    match sel {
        "euclidean" => Ok(linear_so3_on_r3()),
        "linear_so3_on_r3" => Ok(linear_so3_on_r3().with_name("linear_so3_on_r3")),
        other => Err(CliError::config(format!(
            "unknown semidirect `{other}` (expected conjugation:<algebra>, magnetic:<algebra>, euclidean, \
             linear_so3_on_r3, torus:passive-scalar, torus:compressible or torus:mhd)"
        ))),
    }
}

pub fn resolve(cfg: &RunConfig) -> Result<Resolved, CliError> {
    let t = &cfg.target;
    let given = [t.algebra.is_some(), t.semidirect.is_some(), t.spec.is_some()];
    if given.iter().filter(|g| **g).count() != 1 {
        return Err(CliError::config(
            "exactly one of --algebra, --semidirect or --spec is required",
        ));
    }
    let band = cfg.band.unwrap_or(DEFAULT_SAMPLE_BAND);
    if band < 0 {
        return Err(CliError::config("band must be non-negative"));
    }
    let tol = cfg.tolerances();
    if let Some(sel) = &t.algebra {
        return Ok(match sel.as_str() {
            "torus:vol" => Resolved::TorusVol(VolumeFields { sample_band: band }),
            "torus:full" => Resolved::TorusFull(VectorFields { sample_band: band }),
            _ => Resolved::Algebra(with_tolerances(parse_algebra(sel)?, tol)?),
        });
    }
    if let Some(sel) = &t.semidirect {
        return Ok(match sel.as_str() {
            "torus:passive-scalar" => Resolved::Passive(PassiveScalar::with_sample_band(band)),
            "torus:compressible" => Resolved::Compressible(CompressibleScalar::with_sample_band(band)),
            "torus:mhd" => Resolved::Mhd(mhd_with_sample_band(band)),
            _ => Resolved::Semidirect(parse_semidirect(sel)?),
        });
    }
    let path = t.spec.as_ref().expect("checked above");
    Ok(match input::spec_file(path)? {
        SpecFile::Algebra(spec) => Resolved::Algebra(MetricAlgebra::with_tolerances(spec, tol)?),
        SpecFile::Semidirect { g, h, action, name } => {
            Resolved::Semidirect(input::build_semidirect(g, h, &action, name, tol)?)
        }
    })
}

fn with_tolerances(g: MetricAlgebra, tol: Tolerances) -> Result<MetricAlgebra, CliError> {
    if *g.tolerances() == tol {
        return Ok(g);
    }
    Ok(MetricAlgebra::with_tolerances(g.spec().clone(), tol)?)
}

fn single(label: &'static str, value: f64, n: (f64, f64, f64)) -> CurvatureBreakdown {
    CurvatureBreakdown::from_terms(vec![Term { label, value }], n)
}

fn unsupported(formula: Formula, what: &str) -> CliError {
    CliError::config(format!("formula {formula:?} is not available for {what}"))
}

/// What the curvature and scan subcommands need from a backend.
pub trait CurvatureTarget: Sync {
    type Elem: LinearElement + Send + Sync;
    type Metric: MetricAlgebraBackend<Elem = Self::Elem>;

    fn metric(&self) -> Self::Metric;
    fn default_formula(&self) -> Formula;
    fn evaluate(&self, formula: Formula, x: &Self::Elem, y: &Self::Elem) -> Result<CurvatureBreakdown, CliError>;
    fn parse(&self, v: &Value, what: &str) -> Result<Self::Elem, CliError>;
    fn sample(&self, seed: u64, count: usize, kind: PlaneKind) -> Result<Vec<Plane<Self::Elem>>, CliError>;

    fn check_plane(&self, x: &Self::Elem, y: &Self::Elem) -> Result<(), CliError> {
        Plane::new(&self.metric(), x.clone(), y.clone())?;
        Ok(())
    }
}

fn only_any(kind: PlaneKind) -> Result<(), CliError> {
    if kind == PlaneKind::Any {
        Ok(())
    } else {
        Err(CliError::config(format!(
            "plane kind {kind:?} needs a semidirect target"
        )))
    }
}

fn rng(seed: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

impl CurvatureTarget for MetricAlgebra {
    type Elem = DVector<f64>;
    type Metric = MetricAlgebra;

    fn metric(&self) -> MetricAlgebra {
        self.clone()
    }

    fn default_formula(&self) -> Formula {
        Formula::Generic
    }

    fn evaluate(&self, formula: Formula, x: &Self::Elem, y: &Self::Elem) -> Result<CurvatureBreakdown, CliError> {
        match formula {
            Formula::Generic => Ok(numerator_generic(self, x, y)),
            Formula::Oracle => Ok(single("oracle", oracle_numerator(self, x, y), norms(self, x, y))),
            f => Err(unsupported(f, "finite-dimensional algebras")),
        }
    }

    fn parse(&self, v: &Value, what: &str) -> Result<Self::Elem, CliError> {
        let x = DVector::from_toml(v, what)?;
        if x.len() != self.dim() {
            return Err(semicurv::Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            }
            .into());
        }
        Ok(x)
    }

    fn sample(&self, seed: u64, count: usize, kind: PlaneKind) -> Result<Vec<Plane<Self::Elem>>, CliError> {
        only_any(kind)?;
        Ok(sample_planes(self, &mut rng(seed), count)?)
    }
}

impl CurvatureTarget for SemidirectAlgebra {
    type Elem = Pair<DVector<f64>, DVector<f64>>;
    type Metric = ProductBackendOwned;

    fn metric(&self) -> ProductBackendOwned {
        ProductBackendOwned(self.product_algebra().clone(), self.g_algebra().dim())
    }

    fn default_formula(&self) -> Formula {
        Formula::Expansion
    }

    fn evaluate(&self, formula: Formula, a: &Self::Elem, b: &Self::Elem) -> Result<CurvatureBreakdown, CliError> {
        let p = self.product_algebra();
        let (ja, jb) = (self.join(a), self.join(b));
        match formula {
            Formula::Expansion => Ok(numerator_semidirect(self, a, b)),
            Formula::Generic => Ok(numerator_generic(p, &ja, &jb)),
            Formula::Oracle => Ok(single("oracle", oracle_numerator(p, &ja, &jb), norms(p, &ja, &jb))),
            Formula::Magnetic if self.name().is_some_and(|n| n.starts_with("magnetic:")) => {
                Ok(numerator_magnetic(self.g_algebra(), a, b))
            }
            f => Err(unsupported(f, "this semidirect algebra")),
        }
    }

    /// `{ g = [...], h = [...] }` or a flat vector in product coordinates.
    fn parse(&self, v: &Value, what: &str) -> Result<Self::Elem, CliError> {
        let p = if v.is_array() {
            let flat = DVector::from_toml(v, what)?;
            if flat.len() != self.dim() {
                return Err(semicurv::Error::DimensionMismatch {
                    expected: self.dim(),
                    found: flat.len(),
                }
                .into());
            }
            self.split(&flat)
        } else {
            let mut p = Pair::<DVector<f64>, DVector<f64>>::from_toml(v, what)?;
            if p.g.is_empty() {
                p.g = DVector::zeros(self.g_algebra().dim());
            }
            if p.h.is_empty() {
                p.h = DVector::zeros(self.h_algebra().dim());
            }
            p
        };
        for (found, expected) in [(p.g.len(), self.g_algebra().dim()), (p.h.len(), self.h_algebra().dim())] {
            if found != expected {
                return Err(semicurv::Error::DimensionMismatch { expected, found }.into());
            }
        }
        Ok(p)
    }

    fn sample(&self, seed: u64, count: usize, kind: PlaneKind) -> Result<Vec<Plane<Self::Elem>>, CliError> {
        Ok(sample_semidirect_planes(self, &mut rng(seed), count, kind)?)
    }
}

/// The assembled product algebra acting on split elements.
pub struct ProductBackendOwned(MetricAlgebra, usize);

impl ProductBackendOwned {
    fn join(&self, p: &Pair<DVector<f64>, DVector<f64>>) -> DVector<f64> {
        let mut v = DVector::zeros(self.0.dim());
        v.rows_mut(0, self.1).copy_from(&p.g);
        v.rows_mut(self.1, self.0.dim() - self.1).copy_from(&p.h);
        v
    }

    fn split(&self, v: &DVector<f64>) -> Pair<DVector<f64>, DVector<f64>> {
        Pair::new(
            v.rows(0, self.1).into_owned(),
            v.rows(self.1, self.0.dim() - self.1).into_owned(),
        )
    }
}

impl MetricAlgebraBackend for ProductBackendOwned {
    type Elem = Pair<DVector<f64>, DVector<f64>>;

    fn zero(&self) -> Self::Elem {
        self.split(&DVector::zeros(self.0.dim()))
    }

    fn bracket(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.split(&self.0.bracket(&self.join(x), &self.join(y)))
    }

    fn inner(&self, x: &Self::Elem, y: &Self::Elem) -> f64 {
        self.0.inner(&self.join(x), &self.join(y))
    }

    fn ad_transpose(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.split(&self.0.ad_transpose(&self.join(x), &self.join(y)))
    }
}

impl CurvatureTarget for VolumeFields {
    type Elem = TrigVectorField;
    type Metric = VolumeFields;

    fn metric(&self) -> VolumeFields {
        *self
    }

    fn default_formula(&self) -> Formula {
        Formula::Generic
    }

    fn evaluate(&self, formula: Formula, x: &Self::Elem, y: &Self::Elem) -> Result<CurvatureBreakdown, CliError> {
        x.require_divergence_free()?;
        y.require_divergence_free()?;
        match formula {
            Formula::Generic => Ok(numerator_generic(self, x, y)),
            Formula::Oracle => Ok(single("oracle", oracle_numerator(self, x, y), norms(self, x, y))),
            Formula::Arnold => Ok(single("arnold", arnold_flat_curvature(x, y)?, norms(self, x, y))),
            f => Err(unsupported(f, "torus:vol")),
        }
    }

    fn parse(&self, v: &Value, what: &str) -> Result<Self::Elem, CliError> {
        let x = TrigVectorField::from_toml(v, what)?;
        x.require_divergence_free()?;
        Ok(x)
    }

    fn sample(&self, seed: u64, count: usize, kind: PlaneKind) -> Result<Vec<Plane<Self::Elem>>, CliError> {
        only_any(kind)?;
        Ok(sample_planes(self, &mut rng(seed), count)?)
    }
}

impl CurvatureTarget for VectorFields {
    type Elem = TrigVectorField;
    type Metric = VectorFields;

    fn metric(&self) -> VectorFields {
        *self
    }

    fn default_formula(&self) -> Formula {
        Formula::Generic
    }

    fn evaluate(&self, formula: Formula, x: &Self::Elem, y: &Self::Elem) -> Result<CurvatureBreakdown, CliError> {
        match formula {
            Formula::Generic => Ok(numerator_generic(self, x, y)),
            Formula::Oracle => Ok(single("oracle", oracle_numerator(self, x, y), norms(self, x, y))),
            f => Err(unsupported(f, "torus:full")),
        }
    }

    fn parse(&self, v: &Value, what: &str) -> Result<Self::Elem, CliError> {
        TrigVectorField::from_toml(v, what)
    }

    fn sample(&self, seed: u64, count: usize, kind: PlaneKind) -> Result<Vec<Plane<Self::Elem>>, CliError> {
        only_any(kind)?;
        Ok(sample_planes(self, &mut rng(seed), count)?)
    }
}

/// Torus semidirect targets share their glue.
pub trait TorusSemidirect: SemidirectBackend + Copy + Sync + Send + 'static
where
    <Self::G as MetricAlgebraBackend>::Elem: Clone + Send + Sync,
    <Self::H as MetricAlgebraBackend>::Elem: Clone + Send + Sync,
{
    const NAME: &'static str;
    fn check(
        &self,
        p: &Pair<<Self::G as MetricAlgebraBackend>::Elem, <Self::H as MetricAlgebraBackend>::Elem>,
    ) -> Result<(), CliError>;
    fn magnetic(
        &self,
        _a: &Pair<<Self::G as MetricAlgebraBackend>::Elem, <Self::H as MetricAlgebraBackend>::Elem>,
        _b: &Pair<<Self::G as MetricAlgebraBackend>::Elem, <Self::H as MetricAlgebraBackend>::Elem>,
    ) -> Option<CurvatureBreakdown> {
        None
    }
}

impl TorusSemidirect for PassiveScalar {
    const NAME: &'static str = "torus:passive-scalar";

    fn check(&self, p: &Pair<TrigVectorField, TrigFunction>) -> Result<(), CliError> {
        Ok(p.g.require_divergence_free()?)
    }
}

impl TorusSemidirect for CompressibleScalar {
    const NAME: &'static str = "torus:compressible";

    fn check(&self, _p: &Pair<TrigVectorField, TrigFunction>) -> Result<(), CliError> {
        Ok(())
    }
}

impl TorusSemidirect for Mhd {
    const NAME: &'static str = "torus:mhd";

    fn check(&self, p: &Pair<TrigVectorField, TrigVectorField>) -> Result<(), CliError> {
        p.g.require_divergence_free()?;
        Ok(p.h.require_divergence_free()?)
    }

    fn magnetic(
        &self,
        a: &Pair<TrigVectorField, TrigVectorField>,
        b: &Pair<TrigVectorField, TrigVectorField>,
    ) -> Option<CurvatureBreakdown> {
        Some(numerator_magnetic(self.g(), a, b))
    }
}

/// Owned copy of a torus semidirect backend usable as a plane metric.
#[derive(Clone, Copy)]
pub struct TorusProduct<S>(S);

impl<S: SemidirectBackend> MetricAlgebraBackend for TorusProduct<S> {
    type Elem = Pair<<S::G as MetricAlgebraBackend>::Elem, <S::H as MetricAlgebraBackend>::Elem>;

    fn zero(&self) -> Self::Elem {
        ProductBackend::new(&self.0).zero()
    }

    fn bracket(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        ProductBackend::new(&self.0).bracket(x, y)
    }

    fn inner(&self, x: &Self::Elem, y: &Self::Elem) -> f64 {
        ProductBackend::new(&self.0).inner(x, y)
    }

    fn ad_transpose(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        ProductBackend::new(&self.0).ad_transpose(x, y)
    }
}

impl<S> CurvatureTarget for S
where
    S: TorusSemidirect,
    S::G: RandomElement,
    S::H: RandomElement,
    <S::G as MetricAlgebraBackend>::Elem: FromToml + Clone + Send + Sync,
    <S::H as MetricAlgebraBackend>::Elem: FromToml + Clone + Send + Sync,
{
    type Elem = Pair<<S::G as MetricAlgebraBackend>::Elem, <S::H as MetricAlgebraBackend>::Elem>;
    type Metric = TorusProduct<S>;

    fn metric(&self) -> TorusProduct<S> {
        TorusProduct(*self)
    }

    fn default_formula(&self) -> Formula {
        Formula::Expansion
    }

    fn evaluate(&self, formula: Formula, a: &Self::Elem, b: &Self::Elem) -> Result<CurvatureBreakdown, CliError> {
        self.check(a)?;
        self.check(b)?;
        let p = self.product();
        match formula {
            Formula::Expansion => Ok(numerator_semidirect(self, a, b)),
            Formula::Generic => Ok(numerator_generic(&p, a, b)),
            Formula::Oracle => Ok(single("oracle", oracle_numerator(&p, a, b), norms(&p, a, b))),
            Formula::Magnetic => self.magnetic(a, b).ok_or_else(|| unsupported(formula, S::NAME)),
            f => Err(unsupported(f, S::NAME)),
        }
    }

    fn parse(&self, v: &Value, what: &str) -> Result<Self::Elem, CliError> {
        let p = Self::Elem::from_toml(v, what)?;
        self.check(&p)?;
        Ok(p)
    }

    fn sample(&self, seed: u64, count: usize, kind: PlaneKind) -> Result<Vec<Plane<Self::Elem>>, CliError> {
        Ok(sample_semidirect_planes(self, &mut rng(seed), count, kind)?)
    }
}

/// A geodesic run: the initial state, the integration and the output rows.
pub trait GeodesicTarget {
    type State: LinearElement;

    fn initial_state(&self, cfg: &RunConfig) -> Result<Self::State, CliError>;
    fn integrate(&self, s0: Self::State, cfg: &IntegratorConfig, cap: i64)
        -> Result<Trajectory<Self::State>, CliError>;
    /// Coordinate column names between `t` and `energy`.
    fn columns(&self) -> Vec<String>;
    fn coords(&self, s: &Self::State) -> Vec<f64>;
    /// Truncated torus runs are approximations and are labeled as such.
    fn experimental(&self) -> bool {
        false
    }
}

/// The `u` and `alpha` values of an explicit initial state.
type InitialValues = (Option<Value>, Option<Value>);

fn initial_values(cfg: &RunConfig) -> Result<Option<InitialValues>, CliError> {
    let g = &cfg.geodesic;
    let sources = [
        g.initial_file.is_some(),
        g.u.is_some() || g.alpha.is_some(),
        g.seed.is_some(),
    ];
    match sources.iter().filter(|s| **s).count() {
        0 => {
            return Err(CliError::config(
                "geodesic needs an initial state: --initial, --u/--alpha or --seed",
            ))
        }
        1 => {}
        _ => return Err(CliError::config("give exactly one of --initial, --u/--alpha or --seed")),
    }
    if let Some(path) = &g.initial_file {
        let t = input::read_toml(path)?;
        for key in t.keys() {
            if key != "u" && key != "alpha" {
                return Err(CliError::config(format!("{}: unknown key `{key}`", path.display())));
            }
        }
        return Ok(Some((t.get("u").cloned(), t.get("alpha").cloned())));
    }
    if g.u.is_some() || g.alpha.is_some() {
        let arr = |v: &Option<Vec<f64>>| {
            v.as_ref()
                .map(|v| Value::Array(v.iter().map(|x| Value::Float(*x)).collect()))
        };
        return Ok(Some((arr(&g.u), arr(&g.alpha))));
    }
    Ok(None)
}

fn vector_or_zero(v: Option<&Value>, dim: usize, what: &str) -> Result<DVector<f64>, CliError> {
    match v {
        None => Ok(DVector::zeros(dim)),
        Some(v) => {
            let x = DVector::from_toml(v, what)?;
            if x.len() != dim {
                return Err(semicurv::Error::DimensionMismatch {
                    expected: dim,
                    found: x.len(),
                }
                .into());
            }
            Ok(x)
        }
    }
}

fn no_alpha(alpha: &Option<Value>) -> Result<(), CliError> {
    if alpha.is_some() {
        Err(CliError::config("alpha is only meaningful for semidirect targets"))
    } else {
        Ok(())
    }
}

fn coord_names(prefix: &str, n: usize) -> impl Iterator<Item = String> + '_ {
    (1..=n).map(move |i| format!("{prefix}{i}"))
}

fn integrator_seed(cfg: &RunConfig) -> u64 {
    cfg.geodesic.seed.unwrap_or(0)
}

impl GeodesicTarget for MetricAlgebra {
    type State = DVector<f64>;

    fn initial_state(&self, cfg: &RunConfig) -> Result<DVector<f64>, CliError> {
        match initial_values(cfg)? {
            Some((u, alpha)) => {
                no_alpha(&alpha)?;
                vector_or_zero(u.as_ref(), self.dim(), "u")
            }
            None => Ok(self.random_element(&mut rng(integrator_seed(cfg)))),
        }
    }

    fn integrate(
        &self,
        s0: DVector<f64>,
        cfg: &IntegratorConfig,
        _cap: i64,
    ) -> Result<Trajectory<DVector<f64>>, CliError> {
        Ok(integrate(self, |u| rhs_generic(self, u), s0, cfg)?)
    }

    fn columns(&self) -> Vec<String> {
        coord_names("u", self.dim()).collect()
    }

    fn coords(&self, s: &DVector<f64>) -> Vec<f64> {
        s.iter().copied().collect()
    }
}

impl GeodesicTarget for SemidirectAlgebra {
    type State = Pair<DVector<f64>, DVector<f64>>;

    fn initial_state(&self, cfg: &RunConfig) -> Result<Self::State, CliError> {
        let (dg, dh) = (self.g_algebra().dim(), self.h_algebra().dim());
        match initial_values(cfg)? {
            Some((u, alpha)) => Ok(Pair::new(
                vector_or_zero(u.as_ref(), dg, "u")?,
                vector_or_zero(alpha.as_ref(), dh, "alpha")?,
            )),
            None => {
                let mut r = rng(integrator_seed(cfg));
                let u = self.g().random_element(&mut r);
                Ok(Pair::new(u, self.h().random_element(&mut r)))
            }
        }
    }

    fn integrate(
        &self,
        s0: Self::State,
        cfg: &IntegratorConfig,
        _cap: i64,
    ) -> Result<Trajectory<Self::State>, CliError> {
        Ok(integrate(&self.product(), |s| rhs_semidirect(self, s), s0, cfg)?)
    }

    fn columns(&self) -> Vec<String> {
        coord_names("u", self.g_algebra().dim())
            .chain(coord_names("alpha", self.h_algebra().dim()))
            .collect()
    }

    fn coords(&self, s: &Self::State) -> Vec<f64> {
        s.g.iter().chain(s.h.iter()).copied().collect()
    }
}

fn field_or_zero<E: FromToml + Default>(v: Option<&Value>, what: &str) -> Result<E, CliError> {
    match v {
        None => Ok(E::default()),
        Some(v) => E::from_toml(v, what),
    }
}

fn support(f: &TrigVectorField) -> f64 {
    (f.comp[0].len() + f.comp[1].len()) as f64
}

impl GeodesicTarget for VolumeFields {
    type State = TrigVectorField;

    fn initial_state(&self, cfg: &RunConfig) -> Result<TrigVectorField, CliError> {
        let u = match initial_values(cfg)? {
            Some((u, alpha)) => {
                no_alpha(&alpha)?;
                field_or_zero(u.as_ref(), "u")?
            }
            None => self.random_element(&mut rng(integrator_seed(cfg))),
        };
        u.require_divergence_free()?;
        Ok(u)
    }

    fn integrate(
        &self,
        s0: TrigVectorField,
        cfg: &IntegratorConfig,
        cap: i64,
    ) -> Result<Trajectory<TrigVectorField>, CliError> {
        Ok(integrate_truncated(self, |u| rhs_generic(self, u), s0, cfg, cap)?)
    }

    fn columns(&self) -> Vec<String> {
        vec!["u_modes".into()]
    }

    fn coords(&self, s: &TrigVectorField) -> Vec<f64> {
        vec![support(s)]
    }

    fn experimental(&self) -> bool {
        true
    }
}

impl GeodesicTarget for VectorFields {
    type State = TrigVectorField;

    fn initial_state(&self, cfg: &RunConfig) -> Result<TrigVectorField, CliError> {
        match initial_values(cfg)? {
            Some((u, alpha)) => {
                no_alpha(&alpha)?;
                field_or_zero(u.as_ref(), "u")
            }
            None => Ok(self.random_element(&mut rng(integrator_seed(cfg)))),
        }
    }

    fn integrate(
        &self,
        s0: TrigVectorField,
        cfg: &IntegratorConfig,
        cap: i64,
    ) -> Result<Trajectory<TrigVectorField>, CliError> {
        Ok(integrate_truncated(self, |u| rhs_generic(self, u), s0, cfg, cap)?)
    }

    fn columns(&self) -> Vec<String> {
        vec!["u_modes".into()]
    }

    fn coords(&self, s: &TrigVectorField) -> Vec<f64> {
        vec![support(s)]
    }

    fn experimental(&self) -> bool {
        true
    }
}

fn torus_pair_initial<S>(s: &S, cfg: &RunConfig) -> Result<SdState<S>, CliError>
where
    S: TorusSemidirect,
    S::G: RandomElement,
    S::H: RandomElement,
    <S::G as MetricAlgebraBackend>::Elem: FromToml + Default + Clone + Send + Sync,
    <S::H as MetricAlgebraBackend>::Elem: FromToml + Default + Clone + Send + Sync,
{
    let p = match initial_values(cfg)? {
        Some((u, alpha)) => Pair::new(field_or_zero(u.as_ref(), "u")?, field_or_zero(alpha.as_ref(), "alpha")?),
        None => {
            let mut r = rng(integrator_seed(cfg));
            let u = s.g().random_element(&mut r);
            Pair::new(u, s.h().random_element(&mut r))
        }
    };
    s.check(&p)?;
    Ok(p)
}

type SdState<S> = Pair<
    <<S as SemidirectBackend>::G as MetricAlgebraBackend>::Elem,
    <<S as SemidirectBackend>::H as MetricAlgebraBackend>::Elem,
>;

fn function_support(f: &TrigFunction) -> f64 {
    f.len() as f64
}

impl GeodesicTarget for PassiveScalar {
    type State = Pair<TrigVectorField, TrigFunction>;

    fn initial_state(&self, cfg: &RunConfig) -> Result<Self::State, CliError> {
        torus_pair_initial(self, cfg)
    }

    fn integrate(
        &self,
        s0: Self::State,
        cfg: &IntegratorConfig,
        cap: i64,
    ) -> Result<Trajectory<Self::State>, CliError> {
        Ok(integrate_truncated(
            &self.product(),
            |s| rhs_semidirect(self, s),
            s0,
            cfg,
            cap,
        )?)
    }

    fn columns(&self) -> Vec<String> {
        vec!["u_modes".into(), "alpha_modes".into()]
    }

    fn coords(&self, s: &Self::State) -> Vec<f64> {
        vec![support(&s.g), function_support(&s.h)]
    }

    fn experimental(&self) -> bool {
        true
    }
}

impl GeodesicTarget for CompressibleScalar {
    type State = Pair<TrigVectorField, TrigFunction>;

    fn initial_state(&self, cfg: &RunConfig) -> Result<Self::State, CliError> {
        torus_pair_initial(self, cfg)
    }

    fn integrate(
        &self,
        s0: Self::State,
        cfg: &IntegratorConfig,
        cap: i64,
    ) -> Result<Trajectory<Self::State>, CliError> {
        Ok(integrate_truncated(
            &self.product(),
            |s| rhs_semidirect(self, s),
            s0,
            cfg,
            cap,
        )?)
    }

    fn columns(&self) -> Vec<String> {
        vec!["u_modes".into(), "alpha_modes".into()]
    }

    fn coords(&self, s: &Self::State) -> Vec<f64> {
        vec![support(&s.g), function_support(&s.h)]
    }

    fn experimental(&self) -> bool {
        true
    }
}

impl GeodesicTarget for Mhd {
    type State = Pair<TrigVectorField, TrigVectorField>;

    fn initial_state(&self, cfg: &RunConfig) -> Result<Self::State, CliError> {
        torus_pair_initial(self, cfg)
    }

    fn integrate(
        &self,
        s0: Self::State,
        cfg: &IntegratorConfig,
        cap: i64,
    ) -> Result<Trajectory<Self::State>, CliError> {
        Ok(integrate_truncated(
            &self.product(),
            |s| rhs_magnetic(self.g(), s),
            s0,
            cfg,
            cap,
        )?)
    }

    fn columns(&self) -> Vec<String> {
        vec!["u_modes".into(), "alpha_modes".into()]
    }

    fn coords(&self, s: &Self::State) -> Vec<f64> {
        vec![support(&s.g), support(&s.h)]
    }

    fn experimental(&self) -> bool {
        true
    }
}

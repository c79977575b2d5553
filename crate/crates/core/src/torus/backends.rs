use rand::Rng;
use rand_distr::StandardNormal;

use crate::backend::{MagneticExtension, MetricAlgebraBackend, SemidirectBackend};
use crate::element::{LinearElement, Pair};
use crate::error::Result;
use crate::sampling::RandomElement;

use super::field::TrigVectorField;
use super::function::{Mode, TrigFunction};

/// Default `|k|∞` bound of the random sampling mode set.
pub const DEFAULT_SAMPLE_BAND: i64 = 2;

/// Divergence-free fields with the L² metric.
///
/// The algebra bracket is minus the Jacobi-Lie bracket of vector fields,
/// `[X, Y] = ∇_Y X − ∇_X Y`, the convention for right-invariant fields on the
/// diffeomorphism group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeFields {
    pub sample_band: i64,
}

/// All vector fields with the L² metric; same bracket convention as
/// [`VolumeFields`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VectorFields {
    pub sample_band: i64,
}

/// Functions with the L² metric, as an abelian algebra.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionSpace {
    pub sample_band: i64,
}

impl Default for VolumeFields {
    fn default() -> Self {
        Self {
            sample_band: DEFAULT_SAMPLE_BAND,
        }
    }
}

impl Default for VectorFields {
    fn default() -> Self {
        Self {
            sample_band: DEFAULT_SAMPLE_BAND,
        }
    }
}

impl Default for FunctionSpace {
    fn default() -> Self {
        Self {
            sample_band: DEFAULT_SAMPLE_BAND,
        }
    }
}

/// `P(∇_X Y + (∇X)ᵀY)`, the transpose of `ad(X)` on divergence-free fields.
pub fn ad_transpose_vol(x: &TrigVectorField, y: &TrigVectorField) -> Result<TrigVectorField> {
    x.require_divergence_free()?;
    y.require_divergence_free()?;
    Ok(vol_ad_transpose(x, y))
}

/// `∇_X Y + (div X)Y + (∇X)ᵀY`, the transpose of `ad(X)` on all fields.
pub fn ad_transpose_full(x: &TrigVectorField, y: &TrigVectorField) -> TrigVectorField {
    x.directional_derivative(y)
        .add(&y.mul_function(&x.divergence()))
        .add(&x.jacobian_transpose_apply(y))
}

fn vol_ad_transpose(x: &TrigVectorField, y: &TrigVectorField) -> TrigVectorField {
    x.directional_derivative(y)
        .add(&x.jacobian_transpose_apply(y))
        .leray_project()
}

fn algebra_bracket(x: &TrigVectorField, y: &TrigVectorField) -> TrigVectorField {
    y.directional_derivative(x).sub(&x.directional_derivative(y))
}

impl MetricAlgebraBackend for VolumeFields {
    type Elem = TrigVectorField;

    fn zero(&self) -> TrigVectorField {
        TrigVectorField::zero()
    }

    fn bracket(&self, x: &TrigVectorField, y: &TrigVectorField) -> TrigVectorField {
        algebra_bracket(x, y)
    }

    fn inner(&self, x: &TrigVectorField, y: &TrigVectorField) -> f64 {
        x.inner(y)
    }

    fn ad_transpose(&self, x: &TrigVectorField, y: &TrigVectorField) -> TrigVectorField {
        vol_ad_transpose(x, y)
    }
}

impl MetricAlgebraBackend for VectorFields {
    type Elem = TrigVectorField;

    fn zero(&self) -> TrigVectorField {
        TrigVectorField::zero()
    }

    fn bracket(&self, x: &TrigVectorField, y: &TrigVectorField) -> TrigVectorField {
        algebra_bracket(x, y)
    }

    fn inner(&self, x: &TrigVectorField, y: &TrigVectorField) -> f64 {
        x.inner(y)
    }

    fn ad_transpose(&self, x: &TrigVectorField, y: &TrigVectorField) -> TrigVectorField {
        ad_transpose_full(x, y)
    }
}

impl MetricAlgebraBackend for FunctionSpace {
    type Elem = TrigFunction;

    fn zero(&self) -> TrigFunction {
        TrigFunction::zero()
    }

    fn bracket(&self, _x: &TrigFunction, _y: &TrigFunction) -> TrigFunction {
        TrigFunction::zero()
    }

    fn inner(&self, x: &TrigFunction, y: &TrigFunction) -> f64 {
        x.inner(y)
    }

    fn ad_transpose(&self, _x: &TrigFunction, _y: &TrigFunction) -> TrigFunction {
        TrigFunction::zero()
    }
}

fn random_function<R: Rng + ?Sized>(rng: &mut R, band: i64) -> TrigFunction {
    let mut f = TrigFunction::zero();
    for m in Mode::all_within(band) {
        f.add_term(m.k, m.parity, rng.sample(StandardNormal));
    }
    f
}

impl RandomElement for FunctionSpace {
    fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> TrigFunction {
        random_function(rng, self.sample_band)
    }
}

impl RandomElement for VectorFields {
    fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> TrigVectorField {
        let c1 = random_function(rng, self.sample_band);
        let c2 = random_function(rng, self.sample_band);
        TrigVectorField::new(c1, c2)
    }
}

impl RandomElement for VolumeFields {
    /// Per mode, a normal coefficient along the unit vector `k⊥/|k|`; the
    /// mean gets two independent normal components.
    fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> TrigVectorField {
        let mut out = TrigVectorField::zero();
        for m in Mode::all_within(self.sample_band) {
            if m.is_constant() {
                out.comp[0].add_term(m.k, m.parity, rng.sample(StandardNormal));
                out.comp[1].add_term(m.k, m.parity, rng.sample(StandardNormal));
            } else {
                let (k1, k2) = (m.k[0] as f64, m.k[1] as f64);
                let c: f64 = rng.sample(StandardNormal);
                let c = c / k1.hypot(k2);
                out.comp[0].add_term(m.k, m.parity, -k2 * c);
                out.comp[1].add_term(m.k, m.parity, k1 * c);
            }
        }
        out
    }
}

/// Divergence-free fields acting on functions by `b(X)f = −X(f)`; the
/// passive scalar system.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PassiveScalar {
    pub fields: VolumeFields,
    pub functions: FunctionSpace,
}

/// All vector fields acting on functions by `b(X)f = −X(f)`; the compressible
/// form.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompressibleScalar {
    pub fields: VectorFields,
    pub functions: FunctionSpace,
}

/// The magnetic extension of divergence-free fields; ideal MHD.
pub type Mhd = MagneticExtension<VolumeFields>;

pub fn passive_scalar_backend() -> PassiveScalar {
    PassiveScalar::default()
}

pub fn compressible_scalar_backend() -> CompressibleScalar {
    CompressibleScalar::default()
}

pub fn mhd_backend() -> Mhd {
    MagneticExtension::new(VolumeFields::default())
}

impl PassiveScalar {
    pub fn with_sample_band(band: i64) -> Self {
        Self {
            fields: VolumeFields { sample_band: band },
            functions: FunctionSpace { sample_band: band },
        }
    }
}

impl CompressibleScalar {
    pub fn with_sample_band(band: i64) -> Self {
        Self {
            fields: VectorFields { sample_band: band },
            functions: FunctionSpace { sample_band: band },
        }
    }
}

pub fn mhd_with_sample_band(band: i64) -> Mhd {
    MagneticExtension::new(VolumeFields { sample_band: band })
}

impl SemidirectBackend for PassiveScalar {
    type G = VolumeFields;
    type H = FunctionSpace;

    fn g(&self) -> &VolumeFields {
        &self.fields
    }

    fn h(&self) -> &FunctionSpace {
        &self.functions
    }

    fn act(&self, x: &TrigVectorField, f: &TrigFunction) -> TrigFunction {
        x.apply(f).scale(-1.0)
    }

    fn act_transpose(&self, x: &TrigVectorField, f: &TrigFunction) -> TrigFunction {
        x.apply(f)
    }

    /// `−P(f2 grad f1)`
    fn h_map(&self, f1: &TrigFunction, f2: &TrigFunction) -> TrigVectorField {
        TrigVectorField::grad(f1).mul_function(f2).leray_project().scale(-1.0)
    }

    fn is_isometric(&self) -> bool {
        true
    }
}

impl SemidirectBackend for CompressibleScalar {
    type G = VectorFields;
    type H = FunctionSpace;

    fn g(&self) -> &VectorFields {
        &self.fields
    }

    fn h(&self) -> &FunctionSpace {
        &self.functions
    }

    fn act(&self, x: &TrigVectorField, f: &TrigFunction) -> TrigFunction {
        x.apply(f).scale(-1.0)
    }

    /// `X(f) + f div X`
    fn act_transpose(&self, x: &TrigVectorField, f: &TrigFunction) -> TrigFunction {
        x.apply(f).add(&f.multiply(&x.divergence()))
    }

    /// `−f2 grad f1`
    fn h_map(&self, f1: &TrigFunction, f2: &TrigFunction) -> TrigVectorField {
        TrigVectorField::grad(f1).mul_function(f2).scale(-1.0)
    }

    fn is_isometric(&self) -> bool {
        false
    }
}

/// `u_t = −P(∇_u u)`
pub fn euler_rhs(u: &TrigVectorField) -> TrigVectorField {
    u.directional_derivative(u).leray_project().scale(-1.0)
}

/// `u_t = −P(∇_u u)`, `f_t = −u(f)`
pub fn passive_scalar_rhs(state: &Pair<TrigVectorField, TrigFunction>) -> Pair<TrigVectorField, TrigFunction> {
    let (u, f) = (&state.g, &state.h);
    Pair::new(euler_rhs(u), u.apply(f).scale(-1.0))
}

/// `u_t = −∇_u u − (div u)u − ½grad g(u,u) − f grad f`,
/// `f_t = −u(f) − f div u`
pub fn compressible_rhs(state: &Pair<TrigVectorField, TrigFunction>) -> Pair<TrigVectorField, TrigFunction> {
    let (u, f) = (&state.g, &state.h);
    let div = u.divergence();
    let du = u
        .directional_derivative(u)
        .add(&u.mul_function(&div))
        .add(&TrigVectorField::grad(&u.dot(u)).scale(0.5))
        .add(&TrigVectorField::grad(f).mul_function(f))
        .scale(-1.0);
    let df = u.apply(f).add(&f.multiply(&div)).scale(-1.0);
    Pair::new(du, df)
}

/// `u_t = P(−∇_u u + ∇_B B)`, `B_t = −(∇_u B − ∇_B u)`
pub fn mhd_rhs(state: &Pair<TrigVectorField, TrigVectorField>) -> Pair<TrigVectorField, TrigVectorField> {
    let (u, b) = (&state.g, &state.h);
    let du = b
        .directional_derivative(b)
        .sub(&u.directional_derivative(u))
        .leray_project();
    let field_bracket = u.directional_derivative(b).sub(&b.directional_derivative(u));
    Pair::new(du, field_bracket.scale(-1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{isometric_sum, numerator_semidirect};
    use crate::geodesic::{rhs_generic, rhs_magnetic, rhs_semidirect};
    use crate::tolerance::rel_diff;
    use crate::torus::function::Parity;
    use crate::torus::grid::{assert_grid_eq, sample, sample_field, GridDerivative};
    use rand::SeedableRng;
    use rand_xoshiro::Xoshiro256PlusPlus;

    fn shear1() -> TrigVectorField {
        TrigVectorField::new(TrigFunction::sin(0, 1), TrigFunction::zero())
    }

    fn shear2() -> TrigVectorField {
        TrigVectorField::new(TrigFunction::zero(), TrigFunction::sin(1, 0))
    }

    /// Divergence-free basis of modes with `|k|∞ <= band`.
    fn vol_family(band: i64) -> Vec<TrigVectorField> {
        let mut out = vec![TrigVectorField::constant(1.0, 0.0), TrigVectorField::constant(0.0, 1.0)];
        for m in Mode::all_within(band).into_iter().filter(|m| !m.is_constant()) {
            out.push(TrigVectorField::from_stream(&TrigFunction::term(m.k, m.parity, 1.0)));
        }
        out
    }

    fn full_family(band: i64) -> Vec<TrigVectorField> {
        let mut out = Vec::new();
        for m in Mode::all_within(band) {
            let f = TrigFunction::term(m.k, m.parity, 1.0);
            out.push(TrigVectorField::new(f.clone(), TrigFunction::zero()));
            out.push(TrigVectorField::new(TrigFunction::zero(), f));
        }
        out
    }

    fn function_family(band: i64) -> Vec<TrigFunction> {
        Mode::all_within(band)
            .into_iter()
            .map(|m| TrigFunction::term(m.k, m.parity, 1.0))
            .collect()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn ad_transpose_vol_examples() {
        let g = VolumeFields::default();
        assert!(ad_transpose_vol(&shear1(), &shear1()).unwrap().max_abs() < 1e-15);
        assert!(ad_transpose_vol(&TrigVectorField::zero(), &shear2()).unwrap().max_abs() == 0.0);
        let bad = TrigVectorField::new(TrigFunction::cos(1, 0), TrigFunction::zero());
        assert!(ad_transpose_vol(&bad, &shear1()).is_err());

        // adjointness on a spanning family of low modes
        let (x, y) = (shear1(), shear2());
        let t = ad_transpose_vol(&x, &y).unwrap();
        for z in vol_family(3) {
            let lhs = g.inner(&g.bracket(&x, &z), &y);
            assert!(close(lhs, g.inner(&z, &t), 1e-12), "{lhs} vs {}", g.inner(&z, &t));
        }
    }

    #[test]
    fn volume_adjointness_on_random_fields() {
        let g = VolumeFields::default();
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(3);
        for _ in 0..5 {
            let x = g.random_element(&mut rng);
            let y = g.random_element(&mut rng);
            assert!(x.is_divergence_free() && y.is_divergence_free());
            let t = g.ad_transpose(&x, &y);
            for z in vol_family(4) {
                let lhs = g.inner(&g.bracket(&x, &z), &y);
                assert!(close(lhs, g.inner(&z, &t), 1e-12));
            }
        }
    }

    #[test]
    fn full_adjointness_and_examples() {
        let g = VectorFields::default();
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(5);
        for _ in 0..5 {
            let x = g.random_element(&mut rng);
            let y = g.random_element(&mut rng);
            let t = ad_transpose_full(&x, &y);
            for z in full_family(4) {
                let lhs = g.inner(&g.bracket(&x, &z), &y);
                assert!(close(lhs, g.inner(&z, &t), 1e-12));
            }
        }
        // divergence-free X: unprojected two-term form
        let (x, y) = (shear1(), shear2());
        let expected = x.directional_derivative(&y).add(&x.jacobian_transpose_apply(&y));
        assert_eq!(ad_transpose_full(&x, &y), expected);

        // X = (cos x1, 0), Y = (1, 0): (∇X)ᵀY = (−sin x1, 0), (div X)Y = (−sin x1, 0)
        let x = TrigVectorField::new(TrigFunction::cos(1, 0), TrigFunction::zero());
        let y = TrigVectorField::constant(1.0, 0.0);
        let r = sample_field(&ad_transpose_full(&x, &y));
        assert_grid_eq(&r[0], &sample(|p| -2.0 * p[0].sin()), 1e-12);
        assert_grid_eq(&r[1], &sample(|_| 0.0), 1e-12);
        assert_eq!(ad_transpose_full(&TrigVectorField::zero(), &y), TrigVectorField::zero());
    }

    #[test]
    fn bracket_satisfies_jacobi() {
        let g = VectorFields::default();
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(9);
        let (x, y, z) = (
            g.random_element(&mut rng),
            g.random_element(&mut rng),
            g.random_element(&mut rng),
        );
        let j = g
            .bracket(&x, &g.bracket(&y, &z))
            .add(&g.bracket(&y, &g.bracket(&z, &x)))
            .add(&g.bracket(&z, &g.bracket(&x, &y)));
        assert!(j.max_abs() < 1e-11);
        // orientation: the algebra bracket is minus the field bracket
        assert_eq!(g.bracket(&x, &y), x.lie_bracket(&y).scale(-1.0));
    }

    #[test]
    fn passive_scalar_h_relation_and_isometry() {
        let s = passive_scalar_backend();
        assert!(s.is_isometric());
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(13);
        let f1 = s.h().random_element(&mut rng);
        let f2 = s.h().random_element(&mut rng);
        let h = s.h_map(&f1, &f2);
        for x in vol_family(3) {
            let lhs = s.h().inner(&s.act(&x, &f1), &f2);
            assert!(close(lhs, s.g().inner(&h, &x), 1e-12));
        }
        for f in function_family(2) {
            let x = s.g().random_element(&mut rng);
            let lhs = s.h().inner(&s.act(&x, &f1), &f);
            assert!(close(lhs, -s.h().inner(&f1, &s.act(&x, &f)), 1e-12));
        }
        assert!(s.h_map(&f1, &f1).max_abs() < 1e-14);
    }

    #[test]
    fn compressible_h_and_action_transpose() {
        let s = compressible_scalar_backend();
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(17);
        let f1 = s.h().random_element(&mut rng);
        let f2 = s.h().random_element(&mut rng);
        let h = s.h_map(&f1, &f2);
        for x in full_family(3) {
            let lhs = s.h().inner(&s.act(&x, &f1), &f2);
            assert!(close(lhs, s.g().inner(&h, &x), 1e-12));
            let bt = s.act_transpose(&x, &f2);
            assert!(close(lhs, s.h().inner(&f1, &bt), 1e-12));
        }
    }

    #[test]
    fn passive_scalar_flux_example() {
        let s = passive_scalar_backend();
        let state = Pair::new(shear1(), TrigFunction::cos(1, 0));
        let r = rhs_semidirect(&s, &state);
        // f_t = −sin x2 · (−sin x1)
        assert_grid_eq(&sample(|p| r.h.eval(p)), &sample(|p| p[0].sin() * p[1].sin()), 1e-12);
        let d = passive_scalar_rhs(&state);
        assert!(d.sub(&r).max_abs() < 1e-14);
    }

    #[test]
    fn grid_check_of_passive_advection() {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(21);
        let s = passive_scalar_backend();
        let u = s.g().random_element(&mut rng);
        let f = s.h().random_element(&mut rng);
        let gd = GridDerivative::new();
        let (ug, fg) = (sample_field(&u), sample(|p| f.eval(p)));
        let (d0, d1) = (gd.derivative(&fg, 0), gd.derivative(&fg, 1));
        let expected: Vec<f64> = (0..fg.len()).map(|p| -(ug[0][p] * d0[p] + ug[1][p] * d1[p])).collect();
        let got = s.act(&u, &f);
        assert_grid_eq(&sample(|p| got.eval(p)), &expected, 1e-12);
    }

    #[test]
    fn displayed_systems_match_assemblies() {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(23);
        let vol = VolumeFields::default();
        let ps = passive_scalar_backend();
        let cs = compressible_scalar_backend();
        for _ in 0..5 {
            let u = vol.random_element(&mut rng);
            let b = vol.random_element(&mut rng);
            let f = ps.h().random_element(&mut rng);
            let uc = cs.g().random_element(&mut rng);

            let e = rhs_generic(&vol, &u);
            assert!(e.sub(&euler_rhs(&u)).max_abs() <= 1e-12 * e.max_abs().max(1.0));

            let st = Pair::new(u.clone(), f.clone());
            let a = rhs_semidirect(&ps, &st);
            assert!(a.sub(&passive_scalar_rhs(&st)).max_abs() <= 1e-12 * a.max_abs().max(1.0));

            let st = Pair::new(uc, f);
            let a = rhs_semidirect(&cs, &st);
            assert!(a.sub(&compressible_rhs(&st)).max_abs() <= 1e-12 * a.max_abs().max(1.0));

            let st = Pair::new(u, b);
            let a = rhs_magnetic(&vol, &st);
            assert!(a.sub(&mhd_rhs(&st)).max_abs() <= 1e-12 * a.max_abs().max(1.0));
            let m = rhs_semidirect(&mhd_backend(), &st);
            assert!(a.sub(&m).max_abs() <= 1e-12 * a.max_abs().max(1.0));
        }
    }

    #[test]
    fn displayed_system_special_cases() {
        let u = shear1().add(&shear2().scale(0.5));
        let cs = compressible_scalar_backend();
        // divergence-free u, f = 0: unprojected Euler form
        let r = compressible_rhs(&Pair::new(u.clone(), TrigFunction::zero()));
        let expected = u
            .directional_derivative(&u)
            .add(&TrigVectorField::grad(&u.dot(&u)).scale(0.5))
            .scale(-1.0);
        assert!(r.g.sub(&expected).max_abs() < 1e-15);
        // u = 0: only −f grad f survives
        let f = TrigFunction::cos(1, 1).add(&TrigFunction::sin(0, 1));
        let r = rhs_semidirect(&cs, &Pair::new(TrigVectorField::zero(), f.clone()));
        assert!(r.h.is_empty());
        assert!(
            r.g.sub(&TrigVectorField::grad(&f).mul_function(&f).scale(-1.0))
                .max_abs()
                < 1e-15
        );

        // MHD with B = 0 is Euler, with u = B it is stationary
        let vol = VolumeFields::default();
        let r = rhs_magnetic(&vol, &Pair::new(u.clone(), TrigVectorField::zero()));
        assert!(r.g.sub(&euler_rhs(&u)).max_abs() < 1e-15);
        assert!(r.h.max_abs() == 0.0);
        let r = rhs_magnetic(&vol, &Pair::new(u.clone(), u.clone()));
        assert!(r.max_abs() < 1e-15);
    }

    #[test]
    fn passive_scalar_isometric_additivity() {
        let s = passive_scalar_backend();
        let p = s.product();
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(29);
        for _ in 0..5 {
            let a = Pair::new(s.g().random_element(&mut rng), s.h().random_element(&mut rng));
            let b = Pair::new(s.g().random_element(&mut rng), s.h().random_element(&mut rng));
            let n = numerator_semidirect(&s, &a, &b).numerator;
            let sum = isometric_sum(&s, &a, &b).unwrap();
            assert!(rel_diff(n, sum) <= 1e-10, "{n} vs {sum}");
            let generic = crate::curvature::numerator_generic(&p, &a, &b).numerator;
            assert!(rel_diff(n, generic) <= 1e-10);
        }
    }

    #[test]
    fn parity_round_trip() {
        assert_eq!("sin".parse::<Parity>().unwrap(), Parity::Sin);
        assert!("tan".parse::<Parity>().is_err());
    }
}

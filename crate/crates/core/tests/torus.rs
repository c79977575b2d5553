use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

use semicurv::curvature::{numerator_generic, numerator_semidirect, Term};
use semicurv::geodesic::{rhs_generic, rhs_magnetic, rhs_semidirect};
use semicurv::sampling::{sample_semidirect_planes, PlaneKind, RandomElement};
use semicurv::tolerance::rel_diff;
use semicurv::torus::{
    arnold_flat_curvature, compressible_rhs, compressible_scalar_backend, euler_rhs, mhd_backend, mhd_mixed_plane,
    mhd_pure_magnetic_plane, mhd_rhs, passive_scalar_backend, TrigVectorField, VolumeFields,
};
use semicurv::{LinearElement, MetricAlgebraBackend, Pair, SemidirectBackend};

fn rng(seed: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

fn rel_max<E: LinearElement>(a: &E, b: &E) -> f64 {
    a.sub(b).max_abs() / 1f64.max(a.max_abs()).max(b.max_abs())
}

#[test]
fn passive_scalar_is_flat_on_planes_containing_functions() {
    let s = passive_scalar_backend();
    let planes = sample_semidirect_planes(&s, &mut rng(1), 50, PlaneKind::ContainsH).unwrap();
    for pl in planes {
        assert!(pl.y.g.max_abs() == 0.0);
        let n = numerator_semidirect(&s, &pl.x, &pl.y).numerator;
        assert!(n.abs() <= 1e-12, "numerator {n}");
    }
}

#[test]
fn passive_scalar_curvature_is_the_fluid_curvature() {
    let s = passive_scalar_backend();
    let planes = sample_semidirect_planes(&s, &mut rng(2), 50, PlaneKind::Any).unwrap();
    for pl in planes {
        let n = numerator_semidirect(&s, &pl.x, &pl.y).numerator;
        let fluid = numerator_generic(s.g(), &pl.x.g, &pl.y.g).numerator;
        assert!(rel_diff(n, fluid) <= 1e-10, "{n} vs {fluid}");
    }
}

#[test]
fn euler_reduction() {
    let g = VolumeFields::default();
    let mut r = rng(3);
    for _ in 0..20 {
        let u = g.random_element(&mut r);
        assert!(rel_max(&rhs_generic(&g, &u), &euler_rhs(&u)) <= 1e-12);
    }
}

#[test]
fn displayed_systems_match_assemblies() {
    let m = mhd_backend();
    let c = compressible_scalar_backend();
    let mut r = rng(4);
    for _ in 0..20 {
        let st = Pair::new(m.g().random_element(&mut r), m.g().random_element(&mut r));
        let assembled = rhs_magnetic(m.g(), &st);
        assert!(rel_max(&assembled, &mhd_rhs(&st)) <= 1e-12);
        assert!(rel_max(&assembled, &rhs_semidirect(&m, &st)) <= 1e-12);

        // B_t = −[u, B] with the vector-field bracket [u, B] = ∇_u B − ∇_B u
        let (u, b) = (&st.g, &st.h);
        let field_bracket = u.directional_derivative(b).sub(&b.directional_derivative(u));
        assert!(rel_max(&assembled.h, &field_bracket.scale(-1.0)) <= 1e-12);

        let st = Pair::new(c.g().random_element(&mut r), c.h().random_element(&mut r));
        assert!(rel_max(&rhs_semidirect(&c, &st), &compressible_rhs(&st)) <= 1e-12);
    }
}

#[test]
fn plane_formulas_match_expansions() {
    let m = mhd_backend();
    let g = m.g();
    let z = TrigVectorField::zero();
    let mut r = rng(6);
    for _ in 0..20 {
        let (x, y) = (g.random_element(&mut r), g.random_element(&mut r));
        let mixed = numerator_semidirect(&m, &Pair::new(x.clone(), z.clone()), &Pair::new(z.clone(), y.clone()));
        assert!(rel_diff(mhd_mixed_plane(&x, &y).unwrap(), mixed.numerator) <= 1e-10);
        let pure = numerator_semidirect(&m, &Pair::new(z.clone(), x.clone()), &Pair::new(z.clone(), y.clone()));
        assert!(rel_diff(mhd_pure_magnetic_plane(&x, &y).unwrap(), pure.numerator) <= 1e-10);
        let fluid = numerator_generic(g, &x, &y);
        assert!(rel_diff(arnold_flat_curvature(&x, &y).unwrap(), fluid.numerator) <= 1e-10);
        let sum: f64 = fluid.terms.iter().map(|t: &Term| t.value).sum();
        assert!(rel_diff(sum, fluid.numerator) <= 1e-12);
    }
}

#[test]
fn torus_backends_agree_on_the_inner_product() {
    let g = VolumeFields::default();
    let mut r = rng(7);
    let x = g.random_element(&mut r);
    assert!(rel_diff(g.norm_sq(&x), x.norm_sq()) == 0.0);
}

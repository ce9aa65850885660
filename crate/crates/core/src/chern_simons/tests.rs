use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::bundle::{chern_connection, flat_connection_from_section, primed_connection, HermitianBundle, Section};
use crate::forms::Cov;
use crate::group::{invariant_three_form, GroupMap};
use crate::integrate::{integrate, integrate_fallible, Axis};
use crate::jet::Jet;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn rc(rng: &mut ChaCha8Rng) -> C64 {
    c(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5))
}

fn random_point(rng: &mut ChaCha8Rng) -> [f64; 6] {
    std::array::from_fn(|_| rng.gen_range(-0.6..0.6))
}

fn torus_point(rng: &mut ChaCha8Rng) -> [f64; 6] {
    std::array::from_fn(|_| rng.gen_range(0.0..1.0))
}

fn metric(rng: &mut ChaCha8Rng) -> HermitianBundle {
    let a: Vec<C64> = (0..4).map(|_| rc(rng)).collect();
    let b = a.clone();
    HermitianBundle::unimodular(
        3,
        move |z| (z[0] * a[0] + z[2].conj() * a[1]).re() + z[1].norm_sqr() * 0.3,
        move |z| z[0].conj() * b[2] + z[2] * z[1] * b[3],
    )
}

#[test]
fn equal_connections_have_no_transgression() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let d = random_torus_connection(&mut rng, 0.5);
    let p = torus_point(&mut rng);
    let t = d.matrix(&p, 1).unwrap();
    assert_eq!(transgression_form(&t, &t).unwrap().max_abs(), 0.0);
}

#[test]
fn closed_form_matches_t_integral() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..5 {
        let (d0, d1) = (random_torus_connection(&mut rng, 0.5), random_torus_connection(&mut rng, 0.5));
        let p = torus_point(&mut rng);
        let (t0, t1) = (d0.matrix(&p, 1).unwrap(), d1.matrix(&p, 1).unwrap());
        let closed = transgression_form(&t0, &t1).unwrap();
        let defn = t_integrated_form(&t0, &t1, 32).unwrap();
        assert!(closed.max_diff(&defn) < 1e-10 * (1.0 + closed.max_abs()));
        // the printed R₀ coefficient of 1 differs from the definition
        let a = t1.sub(&t0).unwrap();
        let r0 = Connection::curvature_of(&t0).unwrap();
        let once = closed.sub(&a.wedge(&r0).unwrap().trace()).unwrap();
        assert!(once.max_diff(&defn) > 1e-3);
    }
}

#[test]
fn closed_form_matches_t_integral_for_bundle_connections() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let e = metric(&mut rng);
    let s = Section::holomorphic(3, |z| [z[0] + 1.0, z[1] * z[2] + 0.5]);
    let d0 = chern_connection(&e).to_adapted(&s);
    let d1 = flat_connection_from_section(&e, &s);
    for _ in 0..5 {
        let p = random_point(&mut rng);
        let (t0, t1) = (d0.matrix(&p, 2).unwrap(), d1.matrix(&p, 2).unwrap());
        let closed = transgression_form(&t0, &t1).unwrap();
        assert!(closed.max_diff(&t_integrated_form(&t0, &t1, 32).unwrap()) < 1e-8);
    }
}

#[test]
fn flat_pair_is_minus_a_third_of_the_group_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let e = metric(&mut rng);
    let sp = Section::holomorphic(3, |z| [z[0].exp(), z[1] + 0.7]);
    let k: Vec<C64> = (0..3).map(|_| rc(&mut rng)).collect();
    let g = GroupMap::new(3, move |z| [z[0] * k[0] + 1.5, z[1].conj() * k[1] + z[2] * k[2]]);
    let (e2, sp2, g2) = (e.clone(), sp.clone(), g.clone());
    let sq = Section::smooth(3, move |z| {
        let v = sp2.field.eval_coords(z);
        let jv = e2.j(z, &v).unwrap();
        let [a, b] = g2.raw_components(z);
        [v[0] * a + jv[0] * b, v[1] * a + jv[1] * b]
    });
    let dp = flat_connection_from_section(&e, &sp);
    let dq = flat_connection_from_section(&e, &sq).to_adapted(&sp);
    let group = invariant_three_form(&g);
    for _ in 0..10 {
        let p = random_point(&mut rng);
        let (t0, t1) = (dp.matrix(&p, 2).unwrap(), dq.matrix(&p, 2).unwrap());
        let general = transgression_form(&t0, &t1).unwrap();
        assert!(general.max_diff(&flat_form(&t0, &t1).unwrap()) < 1e-10);
        let oracle = group.at(&p, 2).unwrap().scale_c(c(-1.0 / 3.0, 0.0));
        assert!(general.max_diff(&oracle) < 1e-10);
    }
}

/// `θ = θ_H + g⁻¹∂̄g`: the `(0,1)` part is gauge-trivial, hence integrable.
fn gauged(e: &HermitianBundle, k: [C64; 4]) -> Connection {
    let chern = chern_connection(e);
    let theta = chern.theta.clone();
    let mut d = chern.clone();
    d.theta = Field::new(3, move |z| {
        let g = [
            [z[0].conj() * k[0] + 1.0, z[1] * z[2].conj() * k[1]],
            [z[2].conj() * k[2], (z[0] * k[3]).exp() + z[1].conj() * 0.3],
        ];
        let gm = MatForm::functions(3, g);
        let ginv = MatForm::functions(3, crate::bundle::jmat_inv(&g)?);
        theta.eval_coords(z)?.add(&ginv.wedge(&gm.delbar())?)
    });
    d
}

#[test]
fn integrable_pair_has_the_03_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let e = metric(&mut rng);
    let k0 = std::array::from_fn(|_| rc(&mut rng));
    let k1 = std::array::from_fn(|_| rc(&mut rng));
    let (d0, d1) = (gauged(&e, k0), gauged(&e, k1));
    for _ in 0..10 {
        let p = random_point(&mut rng);
        let (t0, t1) = (d0.matrix(&p, 2).unwrap(), d1.matrix(&p, 2).unwrap());
        assert!(Connection::curvature_of(&t0).unwrap().type_project(0, 2).unwrap().max_abs() < 1e-12);
        let general = transgression_form(&t0, &t1).unwrap().type_project(0, 3).unwrap();
        let special = form_03(&t0, &t1).unwrap();
        assert!(special.max_abs() > 1e-4);
        assert!(general.max_diff(&special) < 1e-10);
    }
}

#[test]
fn zero_test_form_pairs_to_zero_and_types_are_checked() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (d0, d1) = (random_torus_connection(&mut rng, 0.5), random_torus_connection(&mut rng, 0.5));
    let zero = Field::new(3, |_| KForm::zero(3, 3));
    let r = cs_pair(&d0, &d1, &zero, &torus_domain(), &QuadratureSpec::periodic(2)).unwrap();
    assert_eq!(r.value, c(0.0, 0.0));
    let bad = Field::new(3, |_| KForm::monomial(3, Jet::real(1.0), &[Cov::Dz(0), Cov::Dzbar(1), Cov::Dzbar(2)]));
    assert!(matches!(
        cs_pair(&d0, &d1, &bad, &torus_domain(), &QuadratureSpec::periodic(2)),
        Err(Error::WrongTestFormType(_))
    ));
}

#[test]
fn frames_must_agree() {
    let e = HermitianBundle::flat(3);
    let s = Section::holomorphic(3, |z| [z[0] + 2.0, Jet::real(1.0)]);
    assert!(matches!(
        cs_transgression(&chern_connection(&e), &flat_connection_from_section(&e, &s)),
        Err(Error::FrameMismatch)
    ));
}

#[test]
fn additivity_and_antisymmetry_on_the_torus() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let d: Vec<Connection> = (0..3).map(|_| random_torus_connection(&mut rng, 0.5)).collect();
    let tau = random_torus_test_form(&mut rng, 1.0);
    let spec = QuadratureSpec::periodic(5);
    let dom = torus_domain();
    let pair = |a: usize, b: usize| cs_pair_many(&d[a], &d[b], std::slice::from_ref(&tau), &dom, &spec, 1).unwrap().remove(0);
    let (p01, p12, p02, p10) = (pair(0, 1), pair(1, 2), pair(0, 2), pair(1, 0));
    let scale = p01.value.norm().max(p12.value.norm()).max(p02.value.norm());
    assert!(scale > 1e-3);
    assert!((p01.value + p12.value - p02.value).norm() < 1e-9 * scale);
    assert!((p01.value + p10.value).norm() < 1e-9 * scale);
    assert!(p01.type_defect < 1e-14);
}

#[test]
fn primed_to_metric_pairs_to_zero_by_type() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let e = metric(&mut rng);
    let s = Section::holomorphic(3, |z| [z[0] + 2.0, z[1] * z[2] + 1.0]);
    let d_mu = chern_connection(&e).to_adapted(&s);
    let d_prime = primed_connection(&e, &s);
    let tau = random_torus_test_form(&mut rng, 1.0);
    let dom = Domain::real_box(&[-0.5; 6], &[0.5; 6]);
    let r = cs_pair(&d_prime, &d_mu, &tau, &dom, &QuadratureSpec::gauss(2)).unwrap();
    assert!(r.value.norm() < 1e-10);
    // not trivially zero: the transgression itself is nonzero
    let t = cs_transgression(&d_prime, &d_mu).unwrap().at(&[0.1; 6], CS_ORDER).unwrap();
    assert!(t.max_abs() > 1e-3);
}

fn line() -> LineTube {
    LineTube { center: [c(0.1, -0.2), c(0.0, 0.3), c(0.2, 0.1)], length: 1.0 }
}

#[test]
fn tube_domains_are_oriented() {
    // Stokes for (x1 − c) dy1∧dx2∧dy2∧dx3∧dy3 over the tube: vol(B⁴_ε)·πℓ²
    let tube = line();
    let (eps, cx) = (0.3f64, tube.center[0].re);
    let form = Field::new(3, move |z| {
        
        (1..6).fold(KForm::scalar(3, z[0].re() - cx), |acc, i| acc.wedge(&KForm::real_covector(3, i)).unwrap())
    });
    let want = PI * PI / 2.0 * eps.powi(4) * PI;
    let r = integrate(&form, &tube_boundary(&tube, eps), &QuadratureSpec::gauss(8), 0).unwrap();
    assert!((r.value - want).norm() < 1e-12);
    let vol = Field::new(3, |_| KForm::real_volume(3, Jet::real(1.0)));
    let r = integrate(&vol, &tube_complement(&tube, eps), &QuadratureSpec::gauss(8), 0).unwrap();
    assert!((r.value - want).norm() < 1e-12);
}

#[test]
fn tube_test_form_is_closed_and_typed() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let tau = tube_test_form(&line(), [rc(&mut rng), rc(&mut rng), rc(&mut rng)], 6);
    for _ in 0..10 {
        let p = random_point(&mut rng);
        let t = tau.at(&p, 2);
        assert!(t.d().max_abs() < 1e-12);
        check_test_form(&tau, &[p]).unwrap();
    }
    assert_eq!(tau.at(&[2.0; 6], 2).max_abs(), 0.0);
}

#[test]
fn tubular_limit_rejects_short_schedules() {
    let e = HermitianBundle::flat(3);
    let s = Section::holomorphic(3, |z| [z[0], z[1]]);
    let tau = tube_test_form(&LineTube { center: [c(0.0, 0.0); 3], length: 1.0 }, [c(1.0, 0.0); 3], 6);
    let tube = LineTube { center: [c(0.0, 0.0); 3], length: 1.0 };
    let r = tubular_limit(&e, &s, &tau, &tube, &[0.2, 0.1, 0.05], &QuadratureSpec::gauss(4));
    assert_eq!(r.unwrap_err(), Error::ScheduleTooShort { needed: 4, got: 3 });
}

#[test]
fn nonvanishing_section_has_no_boundary() {
    let e = HermitianBundle::flat(3);
    let s = Section::holomorphic(3, |z| [z[0] + 3.0, z[1]]);
    let tube = LineTube { center: [c(0.0, 0.0); 3], length: 1.0 };
    let tau = tube_test_form(&tube, [c(1.0, 0.0); 3], 6);
    let r = tubular_limit(&e, &s, &tau, &tube, &[0.2, 0.1, 0.05, 0.025], &QuadratureSpec::gauss(4)).unwrap();
    assert!(!r.singular && r.boundary.iter().all(|v| v.norm() == 0.0));
}

fn tube_setup() -> (HermitianBundle, Section, Field<KForm>, LineTube) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let e = metric(&mut rng);
    let tube = LineTube { center: [c(0.0, 0.0); 3], length: 0.8 };
    let s = Section::holomorphic(3, |z| [z[0], z[1]]);
    let tau = tube_test_form(&tube, [rc(&mut rng), rc(&mut rng), rc(&mut rng)], 6);
    (e, s, tau, tube)
}

#[test]
fn stokes_moves_the_pairing_to_the_tube_boundary() {
    let (e, s, tau, tube) = tube_setup();
    let eps = 0.2;
    let e = e.excising(0.01);
    let boundary = integrate_fallible(&boundary_form(&e, &s, &tau), &tube_boundary(&tube, eps), &QuadratureSpec::gauss(8), CS_ORDER)
        .unwrap();
    let volume = tube_complement(&tube, tube.length).with_axis(0, Axis::new(eps, tube.length));
    let bulk = integrate_fallible(&log_norm_integrand(&e, &s, &tau), &volume, &QuadratureSpec::gauss(6), CS_ORDER).unwrap();
    // coarse grids; the point is sign and size
    assert!((bulk.value - boundary.value).norm() < 1e-2 * boundary.value.norm(), "{bulk:?} {boundary:?}");
}

#[test]
fn tube_integrals_decay_and_extrapolate_to_zero() {
    let (e, s, tau, tube) = tube_setup();
    let radii = [0.05, 0.025, 0.0125, 0.00625, 0.003125];
    let r = tubular_limit(&e, &s, &tau, &tube, &radii, &QuadratureSpec::gauss(6)).unwrap();
    assert!(r.singular && r.integrand_defect < 1e-10);
    for w in r.boundary.windows(2) {
        assert!(w[1].norm() < 0.5 * w[0].norm());
    }
    assert!(r.limit.norm() < 1e-4 * r.scale, "{r:?}");
    assert!(r.power_fit.unwrap().exponent > 1.5);
}

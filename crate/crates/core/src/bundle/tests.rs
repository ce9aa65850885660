use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::group::{maurer_cartan, GroupMap};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn rc(rng: &mut ChaCha8Rng) -> C64 {
    c(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5))
}

fn random_point(rng: &mut ChaCha8Rng) -> [f64; 6] {
    let mut p = [0.0; 6];
    p.iter_mut().for_each(|x| *x = rng.gen_range(-0.6..0.6));
    p
}

fn random_metric(rng: &mut ChaCha8Rng) -> HermitianBundle {
    let a: Vec<C64> = (0..6).map(|_| rc(rng)).collect();
    HermitianBundle::unimodular(
        3,
        {
            let a = a.clone();
            move |z| (z[0] * a[0] + z[1].conj() * a[1]).re() + z[2].norm_sqr() * a[2].re
        },
        {
            let b: Vec<C64> = a.iter().map(|x| x * c(0.3, 1.1)).collect();
            move |z| z[0].conj() * b[3] + (z[1] * b[4]).exp() * 0.5 + z[2] * z[0] * b[5]
        },
    )
}

fn random_holomorphic(rng: &mut ChaCha8Rng) -> Section {
    let a: Vec<C64> = (0..6).map(|_| rc(rng)).collect();
    Section::holomorphic(3, move |z| {
        [z[0] * a[0] + (z[1] * a[1]).exp() + a[2] * 2.0, z[1] * a[3] + z[2] * z[0] * a[4] + a[5]]
    })
}

fn random_smooth(rng: &mut ChaCha8Rng) -> Section {
    let a: Vec<C64> = (0..4).map(|_| rc(rng)).collect();
    Section::smooth(3, move |z| [z[0].conj() * a[0] + z[1] * a[1] + 1.0, (z[2] * a[2]).exp() * z[1].conj() + a[3]])
}

fn at(s: &Section, p: &[f64; 6]) -> JetVec {
    s.field.at(p, 0)
}

#[test]
fn j_on_flat_metric() {
    let e = HermitianBundle::flat(1);
    let z = seed(&[0.0; 6], 1, 0);
    let one = [Jet::real(1.0), Jet::real(0.0)];
    let js = e.j(&z, &one).unwrap();
    assert_eq!((js[0].v, js[1].v), (c(0.0, 0.0), c(1.0, 0.0)));
    assert_eq!(wedge_det(&one, &js).v, c(1.0, 0.0));
    let is = [Jet::real(0.0), Jet::constant(c(0.0, 1.0))];
    let jis = e.j(&z, &is).unwrap();
    assert_eq!((jis[0].v, jis[1].v), (c(0.0, 1.0), c(0.0, 0.0)));
    assert_eq!(wedge_det(&is, &jis).v, c(1.0, 0.0));
}

#[test]
fn quaternionic_identities_on_random_data() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..20 {
        let e = random_metric(&mut rng);
        let (s, t) = (random_smooth(&mut rng), random_holomorphic(&mut rng));
        let r = quat_residuals(&e, &s, &t, &random_point(&mut rng)).unwrap();
        assert!(r.max() < 1e-12, "{r:?}");
    }
}

#[test]
fn j_needs_unit_determinant() {
    let e = HermitianBundle::conformal(2, |z| z[0].norm_sqr());
    let z = seed(&[0.5, 0.0, 0.0, 0.0, 0.0, 0.0], 2, 0);
    assert!(matches!(e.j(&z, &[Jet::real(1.0), Jet::real(0.0)]), Err(Error::NotQuaternionic(_))));
    let bad = HermitianBundle::new(1, |_| [[Jet::real(-1.0), Jet::real(0.0)], [Jet::real(0.0), Jet::real(1.0)]]);
    assert_eq!(bad.metric_at(&[0.0; 6], 0).unwrap_err(), Error::DegenerateMetric);
}

#[test]
fn chern_connection_of_flat_metric_vanishes() {
    let d = chern_connection(&HermitianBundle::flat(3));
    assert_eq!(d.matrix(&[0.1; 6], 1).unwrap().max_abs(), 0.0);
}

#[test]
fn chern_connection_of_conformal_metric() {
    let e = HermitianBundle::conformal(3, |z| z[0].norm_sqr());
    let p = [0.3, -0.4, 0.2, 0.1, -0.5, 0.6];
    let theta = chern_connection(&e).matrix(&p, 1).unwrap();
    let z1bar = c(0.3, 0.4);
    for (i, j) in [(0, 0), (1, 1)] {
        assert!((theta.e[i][j].coeff(0b000001) - z1bar).norm() < 1e-14);
        assert!(theta.e[i][j].sub(&theta.e[i][j].type_project(1, 0).unwrap()).unwrap().max_abs() < 1e-15);
    }
    assert!(theta.e[0][1].max_abs() < 1e-15 && theta.e[1][0].max_abs() < 1e-15);
}

/// `s'^† H v` for a vector of forms `v`.
fn mu_forms(e: &HermitianBundle, z: &Coords, v: &VecForm, t: &JetVec) -> KForm {
    let h = e.metric(z).unwrap();
    let hv0 = v[0].scale(&h[0][0]).add(&v[1].scale(&h[0][1])).unwrap();
    let hv1 = v[0].scale(&h[1][0]).add(&v[1].scale(&h[1][1])).unwrap();
    hv0.scale(&t[0].conj()).add(&hv1.scale(&t[1].conj())).unwrap()
}

#[test]
fn chern_connection_is_metric_and_of_type_10() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..10 {
        let e = random_metric(&mut rng);
        let d = chern_connection(&e);
        let (s, t) = (random_smooth(&mut rng), random_smooth(&mut rng));
        let p = random_point(&mut rng);
        let z = seed(&p, 3, 2);
        let (sv, tv) = (s.field.eval_coords(&z), t.field.eval_coords(&z));
        let lhs = KForm::scalar(3, e.mu(&z, &sv, &tv).unwrap()).d();
        let ds = d.covariant(&z, &sv).unwrap();
        let dt = d.covariant(&z, &tv).unwrap();
        // μ(s, Dt) is conjugate-linear in the form part of Dt
        let h = e.metric(&z).unwrap();
        let hs = [h[0][0] * sv[0] + h[0][1] * sv[1], h[1][0] * sv[0] + h[1][1] * sv[1]];
        let second = dt[0].conj().scale(&hs[0]).add(&dt[1].conj().scale(&hs[1])).unwrap();
        let rhs = mu_forms(&e, &z, &ds, &tv).add(&second).unwrap();
        assert!(lhs.max_diff(&rhs) < 1e-9);
        let theta = d.matrix(&p, 1).unwrap();
        assert!(theta.type_project(0, 1).unwrap().max_abs() == 0.0);
        let r = d.curvature(&p).unwrap();
        assert!(r.type_project(2, 0).unwrap().max_abs() < 1e-9);
        assert!(r.type_project(0, 2).unwrap().max_abs() < 1e-9);
    }
}

#[test]
fn frame_of_constant_section() {
    let e = HermitianBundle::flat(2);
    let s = Section::holomorphic(2, |_| [Jet::real(1.0), Jet::real(0.0)]);
    let f = frame_formulas(&e, &s).at(&[0.2; 6], 2).unwrap();
    assert_eq!(f.beta.max_abs(), 0.0);
    assert!(f.matrix.max_abs() < 1e-15);
}

#[test]
fn frame_of_identity_section() {
    let e = HermitianBundle::flat(2);
    let s = Section::holomorphic(2, |z| [z[0], z[1]]);
    let probe = Section::smooth(2, |z| [z[0].conj() + 1.0, z[1] * z[0]]);
    let p = [0.3, 0.2, -0.4, 0.1, 0.0, 0.0];
    let f = frame_formulas(&e, &s).at(&p, 2).unwrap();
    // ∂ log(|z1|² + |z2|²) = (z̄1 dz1 + z̄2 dz2)/n
    let n = 0.09 + 0.04 + 0.16 + 0.01;
    assert!((f.matrix.e[0][0].coeff(0b01) - c(0.3, -0.2) / n).norm() < 1e-14);
    assert!((f.matrix.e[0][0].coeff(0b10) - c(-0.4, -0.1) / n).norm() < 1e-14);
    assert!(f.matrix.e[1][1].max_diff(&f.matrix.e[0][0].conj()) < 1e-14);
    let r = frame_residuals(&e, &s, &probe, &p).unwrap();
    assert!(r.max() < 1e-9, "{r:?}");
}

#[test]
fn frame_identities_on_random_metrics() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..10 {
        let e = random_metric(&mut rng);
        let (s, probe) = (random_holomorphic(&mut rng), random_smooth(&mut rng));
        let r = frame_residuals(&e, &s, &probe, &random_point(&mut rng)).unwrap();
        assert!(r.max() < 1e-9, "{r:?}");
    }
}

#[test]
fn printed_constraint_sign_fails() {
    // ∂β = β∧∂L as printed differs from ∂β = ∂L∧β by 2β∧∂L, nonzero here
    let e = HermitianBundle::flat(2);
    let s = Section::holomorphic(2, |z| [z[0], z[1]]);
    let f = frame_formulas(&e, &s).at(&[0.3, 0.2, -0.4, 0.1, 0.0, 0.0], 2).unwrap();
    let printed = f.beta.del().sub(&f.beta.wedge(&f.log_norm.del()).unwrap()).unwrap();
    assert!(printed.max_abs() > 1e-2);
}

#[test]
fn flat_connection_kills_section_and_its_j() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let e = random_metric(&mut rng);
    let s = Section::holomorphic(3, |z| [z[0].exp(), Jet::real(0.5)]);
    let d = flat_connection_from_section(&e, &s).to_standard();
    for _ in 0..10 {
        let p = random_point(&mut rng);
        let z = seed(&p, 3, 2);
        let v = s.field.eval_coords(&z);
        assert!(vec_max_abs(&d.covariant(&z, &v).unwrap()) < 1e-10);
        let jv = e.j(&z, &v).unwrap();
        assert!(vec_max_abs(&d.covariant(&z, &jv).unwrap()) < 1e-10);
        assert!(d.curvature(&p).unwrap().max_abs() < 1e-9);
    }
}

#[test]
fn flat_connection_of_constant_section_vanishes() {
    let e = HermitianBundle::flat(2);
    let s = Section::holomorphic(2, |_| [Jet::real(1.0), Jet::real(0.0)]);
    let d = flat_connection_from_section(&e, &s).to_standard();
    assert!(d.matrix(&[0.1; 6], 1).unwrap().max_abs() < 1e-15);
}

#[test]
fn difference_of_flat_connections_is_minus_maurer_cartan() {
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    let e = random_metric(&mut rng);
    let sp = random_holomorphic(&mut rng);
    let k: Vec<C64> = (0..3).map(|_| rc(&mut rng)).collect();
    let g = GroupMap::new(3, move |z| [z[0] * k[0] + 1.5, z[1].conj() * k[1] + z[2] * k[2]]);
    // s_Q = a s_P + b (j s_P)
    let (e2, sp2, g2) = (e.clone(), sp.clone(), g.clone());
    let sq = Section::smooth(3, move |z| {
        let v = sp2.field.eval_coords(z);
        let jv = e2.j(z, &v).unwrap();
        let [a, b] = g2.raw_components(z);
        [v[0] * a + jv[0] * b, v[1] * a + jv[1] * b]
    });
    let dp = flat_connection_from_section(&e, &sp);
    let dq = flat_connection_from_section(&e, &sq).to_adapted(&sp);
    let a = connection_difference(&dq, &dp).unwrap();
    for _ in 0..10 {
        let p = random_point(&mut rng);
        let rows = a.at(&p, 1).unwrap().transpose();
        let mc = maurer_cartan(&g).at(&p, 1).unwrap().to_mat().neg();
        assert!(rows.max_diff(&mc) < 1e-10);
    }
}

#[test]
fn primed_difference_and_its_curvature() {
    let mut rng = ChaCha8Rng::seed_from_u64(46);
    for e in [HermitianBundle::flat(3), random_metric(&mut rng)] {
        let s = Section::holomorphic(3, |z| [z[0], z[1]]);
        let a = connection_difference(&primed_connection(&e, &s), &flat_connection_from_section(&e, &s)).unwrap();
        let f = frame_formulas(&e, &s);
        for _ in 0..10 {
            let p = random_point(&mut rng);
            let ff = f.at(&p, 2).unwrap();
            let m = a.at(&p, 2).unwrap().transpose();
            let want = MatForm::new([
                [KForm::zero(3, 1), KForm::zero(3, 1)],
                [ff.beta.conj().neg(), ff.log_norm.delbar()],
            ])
            .unwrap();
            assert!(m.max_diff(&want) < 1e-10);
            let r = m.d().sub(&m.wedge(&m).unwrap()).unwrap();
            let want_r = MatForm::new([
                [KForm::zero(3, 2), KForm::zero(3, 2)],
                [ff.beta.conj().del().neg(), ff.log_norm.delbar().del()],
            ])
            .unwrap();
            assert!(r.max_diff(&want_r) < 1e-9);
        }
    }
}

#[test]
fn frames_must_match() {
    let e = HermitianBundle::flat(2);
    let s = Section::holomorphic(2, |z| [z[0], Jet::real(1.0)]);
    let chern = chern_connection(&e);
    assert!(matches!(
        connection_difference(&chern, &flat_connection_from_section(&e, &s)),
        Err(Error::FrameMismatch)
    ));
    let zero = connection_difference(&chern, &chern).unwrap();
    assert_eq!(zero.at(&[0.1; 6], 1).unwrap().max_abs(), 0.0);
}

#[test]
fn holomorphic_flag_is_checkable() {
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    let p = random_point(&mut rng);
    assert!(random_holomorphic(&mut rng).dbar_size(&p) < 1e-10);
    assert!(random_smooth(&mut rng).dbar_size(&p) > 1e-3);
    let _ = at(&random_smooth(&mut rng), &p);
}

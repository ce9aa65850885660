use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::group::{full_three_form, invariant_three_form};
use crate::integrate::QuadratureSpec;
use crate::jet::NVARS;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn real_point(z: [C64; 3]) -> [f64; NVARS] {
    [z[0].re, z[0].im, z[1].re, z[1].im, z[2].re, z[2].im]
}

fn random_z(rng: &mut ChaCha8Rng) -> [C64; 3] {
    let mut r = || c(rng.gen_range(-1.2..1.2), rng.gen_range(-1.2..1.2));
    [r(), r(), r()]
}

fn basis(k: usize) -> [f64; NVARS] {
    let mut e = [0.0; NVARS];
    e[k] = 1.0;
    e
}

#[test]
fn equal_lines_give_zero() {
    let mut m = LocalModel::generic();
    m.p = m.q;
    let a = alpha_at(&m, [c(0.3, 0.1), c(0.2, -0.4), c(0.0, 0.0)], 1).unwrap();
    assert!(a.max_abs() == 0.0);
    assert_eq!(m.kernel([c(0.3, 0.1), c(0.2, -0.4)]).unwrap(), [0.0; 4]);
}

#[test]
fn alpha_is_a_third_of_the_pulled_back_invariant_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for m in [LocalModel::generic(), LocalModel::coplanar()] {
        let g = m.group_map();
        for _ in 0..20 {
            let p = real_point(random_z(&mut rng));
            let a = alpha_pq(&m).at(&p, 1).unwrap();
            let full = full_three_form(&g).at(&p, 1).unwrap().scale_c(c(1.0 / 3.0, 0.0));
            let inv = invariant_three_form(&g).at(&p, 1).unwrap().scale_c(c(1.0 / 3.0, 0.0));
            let s = a.max_abs().max(1.0);
            assert!(a.max_diff(&full) < 1e-11 * s && a.max_diff(&inv) < 1e-10 * s);
            assert!(a.max_diff(&a.conj()) < 1e-10 * s);
        }
    }
}

#[test]
fn alpha_is_closed_off_the_lines() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let m = LocalModel::generic();
    for _ in 0..100 {
        let a = alpha_pq(&m).at(&real_point(random_z(&mut rng)), 2).unwrap();
        assert!(a.d().max_abs() < 1e-8 * a.max_abs().max(1.0));
    }
}

#[test]
fn evaluation_on_a_line_is_refused() {
    let m = LocalModel::generic();
    assert!(alpha_at(&m, [m.q.c[0], m.q.c[1], c(0.5, 0.0)], 1).is_err());
    assert!(m.kernel([m.p.c[0], m.p.c[1]]).is_err());
    assert!(LocalModel::new(1.0, LineDivisor::new(c(2.0, 0.0), c(0.0, 0.0)), m.q).is_err());
}

/// The closed-form kernel against `g*Θ ∧ db` built from jets and wedges.
#[test]
fn kernel_matches_the_jet_wedge() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for m in [LocalModel::generic(), LocalModel::coplanar()] {
        let theta = full_three_form(&m.group_map());
        let bump = Bump::new([c(0.4, 0.1), c(0.2, 0.0), c(0.1, 0.1)], 1.5);
        for _ in 0..20 {
            let z = random_z(&mut rng);
            let p = real_point(z);
            let db = KForm::scalar(3, bump.field().at(&p, 1)).d();
            let four = theta.at(&p, 1).unwrap().wedge(&db).unwrap();
            let jets = four.eval_on(&[basis(0), basis(1), basis(2), basis(3)]).unwrap();
            let k = m.kernel([z[0], z[1]]).unwrap();
            let grad = bump.gradient(z);
            let fast: f64 = (0..4).map(|i| k[i] * grad[i]).sum();
            assert!((jets - fast).norm() < 1e-10 * fast.abs().max(1.0), "{jets} vs {fast}");
        }
    }
}

#[test]
fn algebraic_integrand_matches_the_jet_wedge() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let m = LocalModel::coplanar();
    let bump = Bump::new([c(0.5, 0.0), c(0.0, 0.1), c(0.1, 0.0)], 1.4);
    let coeffs = [c(0.7, -0.2), c(0.3, 0.5)];
    for _ in 0..10 {
        let z = random_z(&mut rng);
        let p = real_point(z);
        let b = bump.field().at(&p, 1);
        let dz = |k| KForm::monomial(3, crate::jet::Jet::real(1.0), &[crate::forms::Cov::Dz(k)]);
        let b20 = dz(0).scale_c(coeffs[0]).add(&dz(1).scale_c(coeffs[1])).unwrap().wedge(&dz(2)).unwrap();
        let dbar_beta = KForm::scalar(3, b).delbar().wedge(&b20).unwrap();
        let six = dbar_beta.wedge(&alpha_pq(&m).at(&p, 1).unwrap()).unwrap();
        let jets = six.eval_on(&(0..6).map(basis).collect::<Vec<_>>()).unwrap();
        let k = m.kernel([z[0], z[1]]).unwrap();
        let g = bump.gradient(z);
        let a_dz = coeffs[0] * c(k[0], k[1]) + coeffs[1] * c(k[2], k[3]);
        let fast = 2.0 * C64::i() * c(0.5 * g[4], 0.5 * g[5]) * a_dz / 3.0;
        assert!((jets - fast).norm() < 1e-10 * fast.norm().max(1.0), "{jets} vs {fast}");
    }
}

#[test]
fn line_integral_matches_closed_form() {
    let bump = Bump::new([c(0.1, 0.0), c(0.0, 0.2), c(0.3, 0.0)], 0.8);
    let line = LineDivisor::new(c(0.0, 0.0), c(0.0, 0.0));
    let d2: f64 = 0.05;
    let a = 1.0 - d2 / 0.64;
    let exact = PI * 0.64 * a.powi(5) / 5.0;
    assert!((line_integral(&bump, &line, 16) - exact).abs() < 1e-13);
    let far = LineDivisor::new(c(2.0, 0.0), c(0.0, 0.0));
    assert_eq!(line_integral(&bump, &far, 16), 0.0);
}

#[test]
fn localization_reaches_eight_pi_squared_at_low_resolution() {
    let m = LocalModel::generic();
    let bump = Bump::on_line(&m.q, 0.5);
    let spec = QuadratureSpec::qmc(200_000, 7).with_schedule(&[0.2, 0.1, 0.05]);
    let r = localization_check(&m, &bump, &spec, 1.0).unwrap();
    let a = PI * 0.25 / 5.0;
    assert!((r.q_integral - a).abs() < 1e-12 && r.p_integral == 0.0);
    let ratio = r.ratio.unwrap();
    assert!((ratio + 1.0).abs() < 0.01, "{r:?}");
    assert!((r.extrapolated.unwrap() / r.lhs - 1.0).abs() < 0.02, "{r:?}");
    let swapped = localization_check(&m.swapped(), &bump, &spec, 1.0).unwrap();
    assert!((swapped.lhs + r.lhs).abs() < 0.05 * r.lhs.abs());
    assert!((swapped.rhs + r.rhs).abs() < 1e-12);
}

#[test]
fn controls_vanish() {
    let spec = QuadratureSpec::qmc(100_000, 3).with_schedule(&[0.2, 0.1, 0.05]);
    let mut m = LocalModel::generic();
    let on_q = Bump::on_line(&m.q, 0.5);
    let far = Bump::new([c(-1.5, 0.0), c(0.0, 1.2), c(0.0, 0.0)], 0.8);
    let r = localization_check(&m, &far, &spec, 1.0).unwrap();
    assert!(r.rhs == 0.0 && r.lhs.abs() < 4.0 * r.lhs_error && r.inconclusive, "{r:?}");
    m.p = m.q;
    let r = localization_check(&m, &on_q, &spec, 1.0).unwrap();
    assert!(r.rhs == 0.0 && r.lhs == 0.0);
}

#[test]
fn algebraic_pairing_is_small_against_its_mass() {
    let m = LocalModel::coplanar();
    let bump = Bump::new([c(0.5, 0.05), c(0.05, 0.0), c(0.1, -0.1)], 0.8);
    let spec = QuadratureSpec::qmc(200_000, 5);
    let zero = algebraic_equivalence_check(&m, &bump, [c(0.0, 0.0); 2], &spec).unwrap();
    assert_eq!(zero.pairing, c(0.0, 0.0));
    let r = algebraic_equivalence_check(&m, &bump, [c(1.0, 0.0), c(0.0, 0.0)], &spec).unwrap();
    assert!(r.coplanar && r.mass > 0.0 && r.relative < 0.05, "{r:?}");
}

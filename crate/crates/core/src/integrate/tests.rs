use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use super::*;
use crate::forms::{Cov, Field, KForm};
use crate::jet::Jet;

/// `ι_{−x}(dx1∧dy1∧dx2∧dy2)`: restricted to the unit sphere with the
/// inward-normal-first orientation, its volume form.
fn sphere_volume_form() -> Field<KForm> {
    Field::new(2, |z| {
        let x = [z[0].re(), z[0].im(), z[1].re(), z[1].im()];
        let mut out = KForm::zero(2, 3);
        for i in 0..4 {
            let mut term = KForm::scalar(2, x[i] * if i % 2 == 0 { -1.0 } else { 1.0 });
            for j in (0..4).filter(|&j| j != i) {
                term = term.wedge(&KForm::real_covector(2, j)).unwrap();
            }
            out = out.add(&term).unwrap();
        }
        out
    })
}

#[test]
fn unit_cube_volume() {
    let one = Field::new(3, |_| KForm::real_volume(3, Jet::real(1.0)));
    let r = integrate(&one, &Domain::real_box(&[0.0; 6], &[1.0; 6]), &QuadratureSpec::gauss(2), 0).unwrap();
    assert!((r.value - 1.0).norm() < 1e-14);
}

#[test]
fn volume_of_three_sphere() {
    for chart in [SphereChart::Hopf, SphereChart::Euler] {
        let d = Domain::sphere3([C64::new(0.0, 0.0); 2], 1.0, chart);
        let r = integrate(&sphere_volume_form(), &d, &QuadratureSpec::gauss(24), 0).unwrap();
        assert!((r.value - 2.0 * PI * PI).norm() < 1e-8 * 2.0 * PI * PI, "{chart:?}: {}", r.value);
        let f = integrate(&sphere_volume_form(), &d.flipped(), &QuadratureSpec::gauss(24), 0).unwrap();
        assert!((f.value + r.value).norm() < 1e-13);
    }
}

#[test]
fn hopf_chart_has_inward_normal_first() {
    let d = Domain::sphere3([C64::new(0.0, 0.0); 2], 1.0, SphereChart::Hopf);
    let (p, t) = d.push(&[0.4, 1.1, 2.3]);
    let m = [
        [p[0], t[0][0], t[1][0], t[2][0]],
        [p[1], t[0][1], t[1][1], t[2][1]],
        [p[2], t[0][2], t[1][2], t[2][2]],
        [p[3], t[0][3], t[1][3], t[2][3]],
    ];
    assert!(det4(m) < 0.0);
}

fn det4(m: [[f64; 4]; 4]) -> f64 {
    let minor = |r: usize| {
        let rows: Vec<[f64; 3]> = (0..4).filter(|&i| i != r).map(|i| [m[i][1], m[i][2], m[i][3]]).collect();
        rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1])
            - rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0])
            + rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0])
    };
    (0..4).map(|r| if r % 2 == 0 { 1.0 } else { -1.0 } * m[r][0] * minor(r)).sum()
}

#[test]
fn excised_disc_integral_extrapolates_to_zero() {
    let f = Field::new(1, |z| KForm::monomial(1, z[0].recip(), &[Cov::Dz(0), Cov::Dzbar(0)]));
    let spec = QuadratureSpec::gauss(32).with_schedule(&[0.2, 0.1, 0.05]);
    let r = integrate(&f, &Domain::disc(C64::new(0.0, 0.0), 1.0), &spec, 0).unwrap();
    assert!(r.value.norm() < 1e-12);
    assert_eq!(r.partials.len(), 3);
}

#[test]
fn excision_needs_a_radial_axis() {
    let one = Field::new(1, |_| KForm::real_volume(1, Jet::real(1.0)));
    let spec = QuadratureSpec::gauss(4).with_schedule(&[0.2, 0.1, 0.05]);
    assert!(integrate(&one, &Domain::real_box(&[0.0; 2], &[1.0; 2]), &spec, 0).is_err());
}

#[test]
fn linearity_and_orientation() {
    let w1 = Field::new(2, |z| KForm::real_volume(2, (z[0] * z[1].conj()).exp()));
    let w2 = Field::new(2, |z| KForm::real_volume(2, z[0].norm_sqr() + z[1] * 2.0));
    let a = C64::new(0.3, -1.7);
    let (w1c, w2c) = (w1.clone(), w2.clone());
    let combo = Field::new(2, move |z| w1c.eval_coords(z).scale_c(a).add(&w2c.eval_coords(z)).unwrap());
    let dom = Domain::real_box(&[-1.0, 0.0, 0.0, -0.5], &[1.0, 1.0, 0.5, 0.5]);
    let spec = QuadratureSpec::gauss(8);
    let i1 = integrate(&w1, &dom, &spec, 0).unwrap().value;
    let i2 = integrate(&w2, &dom, &spec, 0).unwrap().value;
    let ic = integrate(&combo, &dom, &spec, 0).unwrap().value;
    assert!((ic - (a * i1 + i2)).norm() < 1e-12 * ic.norm());
    let flipped = integrate(&w1, &dom.flipped(), &spec, 0).unwrap().value;
    assert!((flipped + i1).norm() < 1e-14 * i1.norm());
}

#[test]
fn qmc_is_bit_reproducible() {
    let w = Field::new(3, |z| KForm::real_volume(3, (z[0] * z[1] + z[2].conj()).cos()));
    let dom = Domain::real_box(&[0.0; 6], &[1.0; 6]);
    let spec = QuadratureSpec::qmc(40_000, 99);
    let a = integrate(&w, &dom, &spec, 0).unwrap();
    let b = integrate(&w, &dom, &spec, 0).unwrap();
    assert_eq!(a.value.re.to_bits(), b.value.re.to_bits());
    assert_eq!(a.value.im.to_bits(), b.value.im.to_bits());
    let g = integrate(&w, &dom, &QuadratureSpec::gauss(6), 0).unwrap();
    assert!((a.value - g.value).norm() < 5.0 * a.error + 1e-6, "{} vs {} ± {}", a.value, g.value, a.error);
}

#[test]
fn tolerance_violation_is_reported() {
    let w = Field::new(1, |z| KForm::real_volume(1, (z[0] * 20.0).sin()));
    let spec = QuadratureSpec::gauss(3).with_tolerance(1e-12);
    let err = integrate(&w, &Domain::real_box(&[0.0; 2], &[1.0; 2]), &spec, 0).unwrap_err();
    assert!(matches!(err, crate::error::Error::NonConvergent { .. }));
}

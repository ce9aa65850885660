//! Pointwise identity suites: quaternions, forms, the group 3-form and the
//! bundle frame identities, each at random points.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rand::Rng;

use super::suite_rng;
use crate::bundle::{frame_residuals, quat_residuals};
use crate::config::Config;
use crate::error::Result;
use crate::forms::{KForm, MatForm, QForm};
use crate::group::{decomposition_residual, invariant_three_form, invariant_three_form_formula, maurer_cartan_residual, s3_constant};
use crate::integrate::{QuadratureSpec, SphereChart};
use crate::quaternion::{mat_det, mat_mul, Quaternion};
use crate::report::{CheckRecord, Recorder};
use crate::samples::{random_complex, random_form, random_group_map, random_holomorphic, random_metric, random_point, random_smooth};

fn random_quaternion(rng: &mut impl Rng) -> Quaternion {
    Quaternion::new(random_complex(rng, 1.0), random_complex(rng, 1.0))
}

fn mat_gap(x: &[[C64; 2]; 2], y: &[[C64; 2]; 2]) -> f64 {
    (0..4).map(|k| (x[k / 2][k % 2] - y[k / 2][k % 2]).norm()).fold(0.0, f64::max)
}

fn q_gap(p: Quaternion, q: Quaternion) -> f64 {
    (p.a - q.a).norm().max((p.b - q.b).norm())
}

pub fn quaternion(cfg: &Config, rec: &mut Recorder) {
    let c = &cfg.quaternion;
    let mut rng = suite_rng(cfg.seed, 1);
    let anchor = "embedding into 2x2 matrices is multiplicative, q q^-1 = 1, det = |q|^2, q = r u";
    rec.run("quaternion.algebra", anchor, c.tolerance, || {
        let mut worst: f64 = 0.0;
        for _ in 0..c.points {
            let (p, q) = (random_quaternion(&mut rng), random_quaternion(&mut rng));
            let hom = mat_gap(&(p * q).embed(), &mat_mul(&p.embed(), &q.embed()));
            let inv = q_gap(p * p.inverse()?, Quaternion::from_complex(C64::new(1.0, 0.0)));
            let det = (mat_det(&p.embed()) - p.norm_sqr()).norm();
            let polar = q_gap(p.polar()?.reconstruct(), p);
            let round = q_gap(Quaternion::from_matrix(&p.embed()), p);
            worst = worst.max(hom).max(inv).max(det).max(polar).max(round);
        }
        Ok(vec![CheckRecord::residual("quaternion.algebra", anchor, worst, c.tolerance).with_samples(c.points as u64)])
    });
}

/// The imaginary part `(x − x̄)/2` of a form.
fn imaginary(x: &KForm) -> Result<KForm> {
    Ok(x.sub(&x.conj())?.scale_c(C64::new(0.5, 0.0)))
}

fn random_mat(rng: &mut impl Rng, k: usize, p: &[f64; 6]) -> Result<MatForm> {
    MatForm::new(std::array::from_fn(|_| std::array::from_fn(|_| random_form(rng, 3, k).at(p, 0))))
}

pub fn forms(cfg: &Config, rec: &mut Recorder) {
    let c = &cfg.forms;
    let n = c.points as u64;
    let mut rng = suite_rng(cfg.seed, 2);
    let anchor = "(A + B j)^3 = 3 conj(A) ^ B ^ conj(B) for imaginary A";
    rec.run("forms.triple-wedge", anchor, c.tolerance, || {
        let mut worst: f64 = 0.0;
        for _ in 0..c.points {
            let p = random_point(&mut rng, 0.8);
            let a = imaginary(&random_form(&mut rng, 3, 1).at(&p, 0))?;
            let b = random_form(&mut rng, 3, 1).at(&p, 0);
            let x = QForm::new(a.clone(), b.clone());
            let cube = x.qwedge(&x)?.qwedge(&x)?;
            let want = a.conj().wedge(&b)?.wedge(&b.conj())?.scale_c(C64::new(3.0, 0.0));
            let scale = 1.0 + want.max_abs();
            worst = worst.max(cube.a.max_diff(&want) / scale).max(cube.b.max_abs() / scale);
        }
        Ok(vec![CheckRecord::residual("forms.triple-wedge", anchor, worst, c.tolerance).with_samples(n)])
    });
    let anchor = "d(d w) = 0 for 1- and 2-forms";
    rec.run("forms.d-squared", anchor, c.tolerance, || {
        let mut worst: f64 = 0.0;
        for i in 0..c.points {
            let p = random_point(&mut rng, 0.8);
            let w = random_form(&mut rng, 3, 1 + i % 2).at(&p, 2);
            worst = worst.max(w.d().d().max_abs() / (1.0 + w.max_abs()));
        }
        Ok(vec![CheckRecord::residual("forms.d-squared", anchor, worst, c.tolerance).with_samples(n)])
    });
    let anchor = "d(a ^ b) = da ^ b - a ^ db for a 1-form a";
    rec.run("forms.leibniz", anchor, c.tolerance, || {
        let mut worst: f64 = 0.0;
        for _ in 0..c.points {
            let p = random_point(&mut rng, 0.8);
            let a = random_form(&mut rng, 3, 1).at(&p, 1);
            let b = random_form(&mut rng, 3, 2).at(&p, 1);
            let lhs = a.wedge(&b)?.d();
            let rhs = a.d().wedge(&b)?.sub(&a.wedge(&b.d())?)?;
            worst = worst.max(lhs.max_diff(&rhs) / (1.0 + lhs.max_abs()));
        }
        Ok(vec![CheckRecord::residual("forms.leibniz", anchor, worst, c.tolerance).with_samples(n)])
    });
    let anchor = "tr(x ^ y) = (-1)^(|x||y|) tr(y ^ x) for matrix-valued forms";
    rec.run("forms.graded-cyclicity", anchor, c.tolerance, || {
        let mut worst: f64 = 0.0;
        for i in 0..c.points {
            let p = random_point(&mut rng, 0.8);
            let (k, l) = (1 + i % 2, 1);
            let (x, y) = (random_mat(&mut rng, k, &p)?, random_mat(&mut rng, l, &p)?);
            let xy = x.wedge(&y)?.trace();
            let yx = y.wedge(&x)?.trace();
            let signed = if (k * l) % 2 == 1 { yx.neg() } else { yx };
            worst = worst.max(xy.max_diff(&signed) / (1.0 + xy.max_abs()));
        }
        Ok(vec![CheckRecord::residual("forms.graded-cyclicity", anchor, worst, c.tolerance).with_samples(n)])
    });
}

pub fn group(cfg: &Config, rec: &mut Recorder) {
    let c = &cfg.group;
    let n = c.points as u64;
    let mut rng = suite_rng(cfg.seed, 3);
    let anchor = "integral over S^3 of tr((h^-1 dh)^3) = 24 pi^2";
    rec.run("group.s3-constant", anchor, c.s3_tolerance, || {
        let spec = QuadratureSpec::gauss(c.s3_nodes);
        let s = s3_constant(&spec, SphereChart::Hopf, false)?;
        let samples = (c.s3_nodes as u64).pow(3);
        Ok(vec![
            CheckRecord::new("group.s3-constant", anchor, s.value, 24.0 * PI * PI, c.s3_tolerance)
                .relative()
                .with_error(s.error)
                .with_samples(samples),
            CheckRecord::new("group.s3-volume", "vol(S^3) = 2 pi^2", s.volume, 2.0 * PI * PI, c.volume_tolerance)
                .with_error(s.volume_error)
                .with_samples(samples),
        ])
    });
    let anchor = "d(g^-1 dg) + (g^-1 dg) ^ (g^-1 dg) = 0";
    rec.run("group.maurer-cartan", anchor, c.tolerance, || {
        let mut worst: f64 = 0.0;
        let mut g = random_group_map(&mut rng);
        for i in 0..c.points {
            if i % 10 == 9 {
                g = random_group_map(&mut rng);
            }
            worst = worst.max(maurer_cartan_residual(&g, &random_point(&mut rng, 0.7))?);
        }
        Ok(vec![CheckRecord::residual("group.maurer-cartan", anchor, worst, c.tolerance).with_samples(n)])
    });
    let anchor = "tr((g^-1 dg)^3) is real, closed, and equals its closed-form expression";
    rec.run("group.three-form", anchor, c.tolerance, || {
        let mut worst: f64 = 0.0;
        let mut g = random_group_map(&mut rng);
        for i in 0..c.points {
            if i % 10 == 9 {
                g = random_group_map(&mut rng);
            }
            let p = random_point(&mut rng, 0.7);
            let t = invariant_three_form(&g).at(&p, 2)?;
            let scale = 1.0 + t.max_abs();
            let real = t.sub(&t.conj())?.max_abs() / scale;
            let closed = t.d().max_abs() / scale;
            let formula = t.max_diff(&invariant_three_form_formula(&g).at(&p, 1)?) / scale;
            worst = worst.max(real).max(closed).max(formula);
        }
        Ok(vec![CheckRecord::residual("group.three-form", anchor, worst, c.tolerance).with_samples(n)])
    });
    let anchor = "tr((g^-1 dg)^3) splits into the unit part and the scale term";
    rec.run("group.decomposition", anchor, c.tolerance, || {
        let mut worst: f64 = 0.0;
        let g = random_group_map(&mut rng);
        for _ in 0..c.points {
            worst = worst.max(decomposition_residual(&g, &random_point(&mut rng, 0.7))?);
        }
        Ok(vec![CheckRecord::residual("group.decomposition", anchor, worst, c.tolerance).with_samples(n)])
    });
}

pub fn bundle(cfg: &Config, rec: &mut Recorder) {
    let c = &cfg.bundle;
    let mut rng = suite_rng(cfg.seed, 4);
    let anchor = "j is conjugate linear, j^2 = -1, isometric, and {s, js} is a frame";
    rec.run("bundle.quaternionic", anchor, c.tolerance, || {
        let mut worst: f64 = 0.0;
        for _ in 0..c.points {
            let e = random_metric(&mut rng);
            let (s, t) = (random_smooth(&mut rng), random_holomorphic(&mut rng));
            worst = worst.max(quat_residuals(&e, &s, &t, &random_point(&mut rng, 0.6))?.max());
        }
        Ok(vec![CheckRecord::residual("bundle.quaternionic", anchor, worst, c.tolerance).with_samples(c.points as u64)])
    });
    let ids = [
        ("bundle.frame-matrix", "connection matrix in the frame (s, js) is [[dL, b], [-conj b, dbar L]]"),
        ("bundle.constraint", "b is of type (1,0) and del b = del L ^ b"),
        ("bundle.curvature", "curvature matches its closed form and is of type (1,1)"),
        ("bundle.operators", "D^(1,0) s = -j dbar(j s) and D commutes with j"),
    ];
    rec.run(ids[0].0, ids[0].1, c.tolerance, || {
        let mut worst = [0.0f64; 4];
        let mut used = 0u64;
        for _ in 0..c.points {
            let e = random_metric(&mut rng);
            let (s, probe) = (random_holomorphic(&mut rng), random_smooth(&mut rng));
            let p = random_point(&mut rng, 0.6);
            let v = s.field.at(&p, 0);
            if v[0].v.norm().hypot(v[1].v.norm()) < c.excision_radius {
                continue;
            }
            used += 1;
            let r = frame_residuals(&e, &s, &probe, &p)?;
            let parts = [r.matrix, r.beta_type.max(r.part20), r.pcurvature.max(r.curvature_type), r.d10.max(r.j_commutes)];
            for (w, x) in worst.iter_mut().zip(parts) {
                *w = w.max(x);
            }
        }
        Ok(ids
            .iter()
            .zip(worst)
            .map(|((id, anchor), w)| CheckRecord::residual(id, anchor, w, c.tolerance).with_samples(used))
            .collect())
    });
}

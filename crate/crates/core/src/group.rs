//! Maurer–Cartan calculus on ℍ*.
//!
//! A [`GroupMap`] is a map `g = a + b·j` from a chart into the nonzero
//! quaternions. Writing `g = r·ϰ` with `r = |g|` and `ϰ = u + v·j` on S³,
//!
//! ```text
//! g⁻¹dg = r⁻¹dr + (ū du + v dv̄) + (ū dv − v dū)·j
//! ```
//!
//! and the trace of its cube is the real, closed 3-form whose integral over
//! S³ is `24π²`.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{Coords, Field, KForm, QForm};
use crate::integrate::{integrate, integrate_fallible, Domain, QuadratureSpec, SphereChart};
use crate::jet::{Jet, NVARS};
use crate::quaternion::Quaternion;

/// A smooth map into ℍ*, with a threshold below which `|g|` counts as a
/// zero (evaluation there is an error rather than a silent NaN).
#[derive(Clone)]
pub struct GroupMap {
    map: Field<[Jet; 2]>,
    threshold: f64,
}

impl GroupMap {
    pub fn new(dim: usize, rule: impl Fn(&Coords) -> [Jet; 2] + Send + Sync + 'static) -> Self {
        GroupMap { map: Field::new(dim, rule), threshold: 1e-12 }
    }

    /// `(z1, z2) ↦ z1 + z2·j` on ℂ².
    pub fn identity() -> Self {
        GroupMap::new(2, |z| [z[0], z[1]])
    }

    /// Declares `|g| < threshold` as the excised zero locus.
    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = threshold;
        self
    }

    pub fn dim(&self) -> usize {
        self.map.dim()
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn value(&self, point: &[f64; NVARS]) -> Quaternion {
        let [a, b] = self.map.at(point, 0);
        Quaternion::new(a.v, b.v)
    }

    /// `q·g` for a fixed quaternion `q`.
    pub fn left_mul(&self, q: Quaternion) -> GroupMap {
        let map = self.map.clone();
        GroupMap {
            map: Field::new(self.dim(), move |z| {
                let [a, b] = map.eval_coords(z);
                [a * q.a - b.conj() * q.b, b * q.a + a.conj() * q.b]
            }),
            threshold: self.threshold,
        }
    }

    fn components(&self, z: &Coords) -> Result<[Jet; 2]> {
        let [a, b] = self.map.eval_coords(z);
        let n = a.v.norm_sqr() + b.v.norm_sqr();
        if !(n >= self.threshold * self.threshold) {
            return Err(Error::SingularEvaluation(format!("|g| = {:.3e} below threshold", n.sqrt())));
        }
        Ok([a, b])
    }

    /// `(a, b)` without the threshold check.
    pub fn raw_components(&self, z: &Coords) -> [Jet; 2] {
        self.map.eval_coords(z)
    }

    /// The unit part `ϰ = g/|g| = u + v·j`.
    fn unit_components(&self, z: &Coords) -> Result<[Jet; 2]> {
        let [a, b] = self.components(z)?;
        let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
        Ok([a / r, b / r])
    }
}

/// `g⁻¹dg` for `g = a + b·j` given as jets.
pub fn mc_of(dim: usize, a: Jet, b: Jet) -> Result<QForm> {
    let n = a.norm_sqr() + b.norm_sqr();
    let inv = QForm::function(dim, a.conj() / n, -b / n);
    inv.qwedge(&QForm::function(dim, a, b).d())
}

/// Pullback of the left-invariant form `h⁻¹dh` along `g`.
pub fn maurer_cartan(g: &GroupMap) -> Field<Result<QForm>> {
    let (g, dim) = (g.clone(), g.dim());
    Field::new(dim, move |z| {
        let [a, b] = g.components(z)?;
        mc_of(dim, a, b)
    })
}

fn trace_cube(w: &QForm) -> Result<KForm> {
    Ok(w.qwedge(w)?.qwedge(w)?.trace())
}

/// `tr((ϰ⁻¹dϰ)^∧3)` for the unit part `ϰ` of `g`.
pub fn invariant_three_form(g: &GroupMap) -> Field<Result<KForm>> {
    let (g, dim) = (g.clone(), g.dim());
    Field::new(dim, move |z| {
        let [u, v] = g.unit_components(z)?;
        trace_cube(&mc_of(dim, u, v)?)
    })
}

/// The closed-form expression `3(u dū dv dv̄ − v̄ du dū dv) + conjugate`.
pub fn invariant_three_form_formula(g: &GroupMap) -> Field<Result<KForm>> {
    let (g, dim) = (g.clone(), g.dim());
    Field::new(dim, move |z| {
        let [u, v] = g.unit_components(z)?;
        let d = |f: Jet| KForm::scalar(dim, f).d();
        let (du, dub, dv, dvb) = (d(u), d(u.conj()), d(v), d(v.conj()));
        let first = dub.wedge(&dv)?.wedge(&dvb)?.scale(&u);
        let second = du.wedge(&dub)?.wedge(&dv)?.scale(&v.conj());
        let t = first.sub(&second)?;
        Ok(t.add(&t.conj())?.scale_c(C64::new(3.0, 0.0)))
    })
}

/// `tr((g⁻¹dg)^∧3)`.
pub fn full_three_form(g: &GroupMap) -> Field<Result<KForm>> {
    let mc = maurer_cartan(g);
    mc.map(|w| trace_cube(&w?))
}

/// The scale term `tr(−d log r ∧ d(ϰ⁻¹dϰ))` of the decomposition
/// `(h⁻¹dh)^∧3 = −d log r ∧ d(ϰ⁻¹dϰ) + (ϰ⁻¹dϰ)^∧3`. Its trace vanishes
/// identically because `ū du + v dv̄` is purely imaginary; it is computed
/// rather than assumed.
pub fn scale_term(g: &GroupMap) -> Field<Result<KForm>> {
    let (g, dim) = (g.clone(), g.dim());
    Field::new(dim, move |z| {
        let [a, b] = g.components(z)?;
        let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let dlogr = KForm::scalar(dim, r.ln()).d();
        let w = mc_of(dim, a / r, b / r)?;
        Ok(dlogr.wedge(&w.d().trace())?.neg())
    })
}

/// Largest coefficient of `full − (scale term + invariant)` at `point`.
pub fn decomposition_residual(g: &GroupMap, point: &[f64; NVARS]) -> Result<f64> {
    let full = full_three_form(g).at(point, 2)?;
    let scale = scale_term(g).at(point, 2)?;
    let inv = invariant_three_form(g).at(point, 2)?;
    Ok(full.max_diff(&scale.add(&inv)?))
}

/// Largest coefficient of `d(g⁻¹dg) + g⁻¹dg ∧ g⁻¹dg` at `point`.
pub fn maurer_cartan_residual(g: &GroupMap, point: &[f64; NVARS]) -> Result<f64> {
    let w = maurer_cartan(g).at(point, 2)?;
    Ok(w.d().add(&w.qwedge(&w)?)?.a.max_abs().max(w.d().add(&w.qwedge(&w)?)?.b.max_abs()))
}

/// `ι_{−x}(dx1∧dy1∧dx2∧dy2)` on ℂ²; on the unit sphere, oriented as in
/// [`Domain::sphere3`], it restricts to the volume form.
pub fn s3_volume_form() -> Field<KForm> {
    Field::new(2, |z| {
        let x = [z[0].re(), z[0].im(), z[1].re(), z[1].im()];
        let mut out = KForm::zero(2, 3);
        for (i, xi) in x.iter().enumerate() {
            let mut term = KForm::scalar(2, *xi * if i % 2 == 0 { -1.0 } else { 1.0 });
            for j in (0..4).filter(|&j| j != i) {
                term = term.wedge(&KForm::real_covector(2, j)).expect("degree ≤ 4");
            }
            out = out.add(&term).expect("same degree");
        }
        out
    })
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct S3Constant {
    /// `∫_{S³} tr((h⁻¹dh)^∧3)`.
    pub value: f64,
    pub error: f64,
    /// `vol(S³)` from the same rule.
    pub volume: f64,
    pub volume_error: f64,
}

/// Integrates the invariant 3-form of the identity map over the unit
/// sphere. The orientation is the one fixed by requiring this value to be
/// positive (see [`Domain::sphere3`]); `flipped` reverses it.
pub fn s3_constant(spec: &QuadratureSpec, chart: SphereChart, flipped: bool) -> Result<S3Constant> {
    let mut domain = Domain::sphere3([C64::new(0.0, 0.0); 2], 1.0, chart);
    if flipped {
        domain = domain.flipped();
    }
    let form = invariant_three_form(&GroupMap::identity());
    let r = integrate_fallible(&form, &domain, spec, 1)?;
    let vol = integrate(&s3_volume_form(), &domain, spec, 0)?;
    Ok(S3Constant { value: r.value.re, error: r.error, volume: vol.value.re, volume_error: vol.error })
}

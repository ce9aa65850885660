//! Hermitian rank-2 bundles on a chart, their quaternionic structure and
//! connections.
//!
//! Sections are column vectors in the standard holomorphic frame
//! `(e1, e2)` and the metric is `μ(s, s') = s'^† H s`. Connection matrices
//! are stored in the column convention, `D s = ds + θ s`, with curvature
//! `R = dθ + θ∧θ`. The displayed matrices of the quaternionic frame
//! `(s, j·s)` act on the frame as a column of sections, i.e. they are the
//! transpose `M = ωᵀ`, whose curvature is `dM − M∧M`; [`Connection::row_matrix`]
//! returns that form.
//!
//! With the determinant trivialization `1 = e1∧e2`, the defining relation
//! `s∧(j·s')/1 = μ(s, s')` gives `j·s' = [[0,−1],[1,0]]·Hᵀ·s̄'`, so
//! `j² = −det H`. Quaternionic operations therefore require `det H ≡ 1`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::forms::{Coords, Field, KForm, MatForm};
use crate::jet::{seed, Jet, NVARS};

pub type JetMat = [[Jet; 2]; 2];
pub type JetVec = [Jet; 2];
/// A pair of k-forms: a vector-valued form in some frame.
pub type VecForm = [KForm; 2];

pub fn jmat_mul(a: &JetMat, b: &JetMat) -> JetMat {
    let e = |i: usize, j: usize| a[i][0] * b[0][j] + a[i][1] * b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn jmat_det(a: &JetMat) -> Jet {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

pub fn jmat_inv(a: &JetMat) -> Result<JetMat> {
    let det = jmat_det(a);
    if det.v.norm() < 1e-300 {
        return Err(Error::SingularEvaluation("singular 2×2 matrix".into()));
    }
    let r = det.recip();
    Ok([[a[1][1] * r, -a[0][1] * r], [-a[1][0] * r, a[0][0] * r]])
}

pub fn jmat_adjoint(a: &JetMat) -> JetMat {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

/// `M v` for a matrix of forms acting on a vector of forms.
pub fn apply(m: &MatForm, v: &VecForm) -> Result<VecForm> {
    let row = |i: usize| -> Result<KForm> { m.e[i][0].wedge(&v[0])?.add(&m.e[i][1].wedge(&v[1])?) };
    Ok([row(0)?, row(1)?])
}

fn vec_functions(dim: usize, s: &JetVec) -> VecForm {
    [KForm::scalar(dim, s[0]), KForm::scalar(dim, s[1])]
}

fn vec_sub(a: &VecForm, b: &VecForm) -> Result<VecForm> {
    Ok([a[0].sub(&b[0])?, a[1].sub(&b[1])?])
}

fn vec_max_abs(v: &VecForm) -> f64 {
    v[0].max_abs().max(v[1].max_abs())
}

/// A rank-2 hermitian bundle on a chart of dimension `dim`, trivialized
/// holomorphically by `(e1, e2)`, with `det E` trivialized by `e1∧e2`.
#[derive(Clone)]
pub struct HermitianBundle {
    metric: Field<JetMat>,
    /// Sections with `‖s‖` below this count as vanishing.
    pub excision: f64,
}

impl HermitianBundle {
    pub fn new(dim: usize, metric: impl Fn(&Coords) -> JetMat + Send + Sync + 'static) -> Self {
        HermitianBundle { metric: Field::new(dim, metric), excision: 1e-2 }
    }

    pub fn flat(dim: usize) -> Self {
        HermitianBundle::new(dim, |_| [[Jet::real(1.0), Jet::real(0.0)], [Jet::real(0.0), Jet::real(1.0)]])
    }

    /// `H = e^φ·I` for a real function `φ`. Not quaternionic unless `φ ≡ 0`.
    pub fn conformal(dim: usize, phi: impl Fn(&Coords) -> Jet + Send + Sync + 'static) -> Self {
        HermitianBundle::new(dim, move |z| {
            let e = phi(z).re().exp();
            [[e, Jet::real(0.0)], [Jet::real(0.0), e]]
        })
    }

    /// `H = A A^†` with `A = [[e^φ, h], [0, e^{−φ}]]`: positive, `det H = 1`.
    pub fn unimodular(
        dim: usize,
        phi: impl Fn(&Coords) -> Jet + Send + Sync + 'static,
        h: impl Fn(&Coords) -> Jet + Send + Sync + 'static,
    ) -> Self {
        HermitianBundle::new(dim, move |z| {
            let (p, h) = (phi(z).re(), h(z));
            let (e, ei) = (p.exp(), (-p).exp());
            let zero = Jet::real(0.0);
            let a = [[e, h], [zero, ei]];
            jmat_mul(&a, &jmat_adjoint(&a))
        })
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    pub fn excising(mut self, radius: f64) -> Self {
        self.excision = radius;
        self
    }

    pub fn metric(&self, z: &Coords) -> Result<JetMat> {
        let h = self.metric.eval_coords(z);
        let det = jmat_det(&h).v;
        if !(h[0][0].v.re > 0.0 && det.re > 0.0) {
            return Err(Error::DegenerateMetric);
        }
        Ok(h)
    }

    pub fn metric_at(&self, point: &[f64; NVARS], order: u8) -> Result<JetMat> {
        self.metric(&seed(point, self.dim(), order))
    }

    /// The metric, additionally checked to have unit determinant.
    fn quaternionic_metric(&self, z: &Coords) -> Result<JetMat> {
        let h = self.metric(z)?;
        let det = jmat_det(&h).v;
        if (det - 1.0).norm() > 1e-10 {
            return Err(Error::NotQuaternionic(det.re));
        }
        Ok(h)
    }

    /// `μ(s, s') = s'^† H s`.
    pub fn mu(&self, z: &Coords, s: &JetVec, t: &JetVec) -> Result<Jet> {
        let h = self.metric(z)?;
        let hs = [h[0][0] * s[0] + h[0][1] * s[1], h[1][0] * s[0] + h[1][1] * s[1]];
        Ok(t[0].conj() * hs[0] + t[1].conj() * hs[1])
    }

    /// `j·s` for a section given by its components.
    pub fn j(&self, z: &Coords, s: &JetVec) -> Result<JetVec> {
        let h = self.quaternionic_metric(z)?;
        let w = [h[0][0] * s[0].conj() + h[1][0] * s[1].conj(), h[0][1] * s[0].conj() + h[1][1] * s[1].conj()];
        Ok([-w[1], w[0]])
    }

    /// `j` applied to a vector of forms (conjugate-linear in the forms).
    pub fn j_forms(&self, z: &Coords, v: &VecForm) -> Result<VecForm> {
        let h = self.quaternionic_metric(z)?;
        let (c0, c1) = (v[0].conj(), v[1].conj());
        let w0 = c0.scale(&h[0][0]).add(&c1.scale(&h[1][0]))?;
        let w1 = c0.scale(&h[0][1]).add(&c1.scale(&h[1][1]))?;
        Ok([w1.neg(), w0])
    }
}

/// `s∧t` divided by the trivializing section `e1∧e2`.
pub fn wedge_det(s: &JetVec, t: &JetVec) -> Jet {
    s[0] * t[1] - s[1] * t[0]
}

#[derive(Clone)]
pub struct Section {
    pub field: Field<JetVec>,
    pub holomorphic: bool,
}

impl Section {
    pub fn holomorphic(dim: usize, rule: impl Fn(&Coords) -> JetVec + Send + Sync + 'static) -> Self {
        Section { field: Field::new(dim, rule), holomorphic: true }
    }

    pub fn smooth(dim: usize, rule: impl Fn(&Coords) -> JetVec + Send + Sync + 'static) -> Self {
        Section { field: Field::new(dim, rule), holomorphic: false }
    }

    pub fn dim(&self) -> usize {
        self.field.dim()
    }

    /// Largest `∂̄`-component of the section at `point`.
    pub fn dbar_size(&self, point: &[f64; NVARS]) -> f64 {
        let s = self.field.at(point, 1);
        let d = vec_functions(self.dim(), &s).map(|c| c.delbar());
        vec_max_abs(&d)
    }

    pub(crate) fn nonvanishing(&self, e: &HermitianBundle, z: &Coords) -> Result<JetVec> {
        let s = self.field.eval_coords(z);
        let n = e.mu(z, &s, &s)?.v.re;
        if !(n.sqrt() >= e.excision) {
            return Err(Error::SingularEvaluation(format!("section norm {:.3e} inside excision", n.sqrt())));
        }
        Ok(s)
    }
}

/// The frame a connection matrix refers to.
#[derive(Clone)]
pub enum Frame {
    /// The holomorphic trivialization `(e1, e2)`.
    Standard,
    /// `(s, j·s)` for a nonvanishing section `s`.
    Adapted(Section),
}

impl Frame {
    fn same(&self, other: &Frame) -> bool {
        match (self, other) {
            (Frame::Standard, Frame::Standard) => true,
            (Frame::Adapted(a), Frame::Adapted(b)) => a.field.same_rule(&b.field),
            _ => false,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ConnectionFlags {
    pub metric: bool,
    pub type_10: bool,
    pub quaternionic: bool,
    pub flat: bool,
}

/// A connection: a frame and its column-convention matrix `θ`.
#[derive(Clone)]
pub struct Connection {
    pub bundle: HermitianBundle,
    pub frame: Frame,
    pub theta: Field<Result<MatForm>>,
    pub flags: ConnectionFlags,
}

impl Connection {
    pub fn dim(&self) -> usize {
        self.bundle.dim()
    }

    pub fn matrix(&self, point: &[f64; NVARS], order: u8) -> Result<MatForm> {
        self.theta.at(point, order)
    }

    /// `dθ + θ∧θ`; needs the matrix at derivative order 1.
    pub fn curvature_of(theta: &MatForm) -> Result<MatForm> {
        theta.d().add(&theta.wedge(theta)?)
    }

    pub fn curvature(&self, point: &[f64; NVARS]) -> Result<MatForm> {
        Connection::curvature_of(&self.matrix(point, 2)?)
    }

    /// The matrix acting on the frame as a column of sections, `θᵀ`.
    pub fn row_matrix(&self, point: &[f64; NVARS], order: u8) -> Result<MatForm> {
        Ok(self.matrix(point, order)?.transpose())
    }

    /// The same connection expressed in the standard frame.
    pub fn to_standard(&self) -> Connection {
        let section = match &self.frame {
            Frame::Standard => return self.clone(),
            Frame::Adapted(s) => s.clone(),
        };
        let (e, theta, dim) = (self.bundle.clone(), self.theta.clone(), self.dim());
        Connection {
            bundle: self.bundle.clone(),
            frame: Frame::Standard,
            flags: self.flags,
            theta: Field::new(dim, move |z| {
                let phi = adapted_frame(&e, &section, z)?;
                let omega = theta.eval_coords(z)?;
                let (p, pinv) = (MatForm::functions(dim, phi), MatForm::functions(dim, jmat_inv(&phi)?));
                // Dφ = φω  ⇒  θ = (φω − dφ)φ⁻¹
                p.wedge(&omega)?.sub(&p.d())?.wedge(&pinv)
            }),
        }
    }

    /// The same connection expressed in the frame `(s, j·s)`.
    pub fn to_adapted(&self, s: &Section) -> Connection {
        let std = self.to_standard();
        let (e, s2, dim) = (self.bundle.clone(), s.clone(), self.dim());
        Connection {
            bundle: self.bundle.clone(),
            frame: Frame::Adapted(s.clone()),
            flags: self.flags,
            theta: Field::new(dim, move |z| {
                let phi = adapted_frame(&e, &s2, z)?;
                let theta = std.theta.eval_coords(z)?;
                let (p, pinv) = (MatForm::functions(dim, phi), MatForm::functions(dim, jmat_inv(&phi)?));
                // ω = φ⁻¹(dφ + θφ)
                pinv.wedge(&p.d().add(&theta.wedge(&p)?)?)
            }),
        }
    }

    /// `D s = ds + θ s` for a section in the standard frame.
    pub fn covariant(&self, z: &Coords, s: &JetVec) -> Result<VecForm> {
        let theta = match self.frame {
            Frame::Standard => self.theta.eval_coords(z)?,
            Frame::Adapted(_) => self.to_standard().theta.eval_coords(z)?,
        };
        let v = vec_functions(self.dim(), s);
        let dv = v.clone().map(|c| c.d());
        let tv = apply(&theta, &v)?;
        Ok([dv[0].add(&tv[0])?, dv[1].add(&tv[1])?])
    }
}

/// Columns `[s, j·s]` as a matrix of functions.
fn adapted_frame(e: &HermitianBundle, s: &Section, z: &Coords) -> Result<JetMat> {
    let v = s.nonvanishing(e, z)?;
    let js = e.j(z, &v)?;
    Ok([[v[0], js[0]], [v[1], js[1]]])
}

/// The section `j·s`.
pub fn j_structure(e: &HermitianBundle, s: &Section) -> Section {
    let (e, f) = (e.clone(), s.field.clone());
    Section::smooth(s.dim(), move |z| {
        let v = f.eval_coords(z);
        e.j(z, &v).unwrap_or([Jet::constant(C64::new(f64::NAN, f64::NAN)); 2])
    })
}

/// The metric `(1,0)` connection `θ = H⁻¹∂H` in the standard frame.
pub fn chern_connection(e: &HermitianBundle) -> Connection {
    let (e2, dim) = (e.clone(), e.dim());
    Connection {
        bundle: e.clone(),
        frame: Frame::Standard,
        flags: ConnectionFlags { metric: true, type_10: true, quaternionic: true, flat: false },
        theta: Field::new(dim, move |z| {
            let h = e2.metric(z)?;
            let hinv = MatForm::functions(dim, jmat_inv(&h)?);
            hinv.wedge(&MatForm::functions(dim, h).del())
        }),
    }
}

/// The flat ℍ-connection with `D s = 0` (hence `D(j·s) = 0`), in the
/// frame `(s, j·s)` where its matrix vanishes.
pub fn flat_connection_from_section(e: &HermitianBundle, s: &Section) -> Connection {
    let (e2, s2, dim) = (e.clone(), s.clone(), e.dim());
    Connection {
        bundle: e.clone(),
        frame: Frame::Adapted(s.clone()),
        flags: ConnectionFlags { metric: false, type_10: false, quaternionic: true, flat: true },
        theta: Field::new(dim, move |z| {
            adapted_frame(&e2, &s2, z)?;
            Ok(MatForm::zero(dim, 1))
        }),
    }
}

/// `A = D1 − D0`, defined when both matrices refer to the same frame.
pub fn connection_difference(d1: &Connection, d0: &Connection) -> Result<Field<Result<MatForm>>> {
    if !d1.frame.same(&d0.frame) {
        return Err(Error::FrameMismatch);
    }
    Ok(d1.theta.zip(&d0.theta, |a, b| a?.sub(&b?)))
}

/// `D′_P = D_P^{1,0} + D_{μ,P}^{0,1}` in the frame `(s_P, j·s_P)`: since
/// `D_P` vanishes there, its matrix is the `(0,1)` part of `D_{μ,P}`'s.
pub fn primed_connection(e: &HermitianBundle, s_p: &Section) -> Connection {
    let mu = chern_connection(e).to_adapted(s_p);
    Connection {
        bundle: e.clone(),
        frame: Frame::Adapted(s_p.clone()),
        flags: ConnectionFlags { metric: false, type_10: true, quaternionic: false, flat: false },
        theta: mu.theta.map(|w| w?.type_project(0, 1)),
    }
}

/// The quantities of the quaternionic frame `(s_P, j·s_P)`.
#[derive(Clone, Debug)]
pub struct FrameFormulas {
    /// `log ‖s_P‖²` as a function.
    pub log_norm: KForm,
    pub beta: KForm,
    /// Row-convention matrix `M` of the metric connection.
    pub matrix: MatForm,
    /// `[[∂L, β], [−β̄, ∂̄L]]` assembled from `L` and `β`.
    pub displayed: MatForm,
}

pub fn frame_formulas(e: &HermitianBundle, s_p: &Section) -> Field<Result<FrameFormulas>> {
    let mu = chern_connection(e).to_adapted(s_p);
    let (e2, s2, dim) = (e.clone(), s_p.clone(), e.dim());
    Field::new(dim, move |z| {
        let s = s2.nonvanishing(&e2, z)?;
        let l = KForm::scalar(dim, e2.mu(z, &s, &s)?.ln());
        let matrix = mu.theta.eval_coords(z)?.transpose();
        let beta = matrix.e[0][1].clone();
        let displayed = MatForm::new([[l.del(), beta.clone()], [beta.conj().neg(), l.delbar()]])?;
        Ok(FrameFormulas { log_norm: l, beta, matrix, displayed })
    })
}

/// Corrected curvature of `D_{μ,P}` in the frame `(s_P, j·s_P)`, row
/// convention:
/// `[[∂̄∂L + β∧β̄, ∂̄β + ∂̄L∧β], [−∂β̄ − ∂L∧β̄, ∂∂̄L − β∧β̄]]`.
pub fn pcurvature(f: &FrameFormulas) -> Result<MatForm> {
    let (l, b) = (&f.log_norm, &f.beta);
    let bb = b.conj();
    MatForm::new([
        [l.del().delbar().add(&b.wedge(&bb)?)?, b.delbar().add(&l.delbar().wedge(b)?)?],
        [bb.del().add(&l.del().wedge(&bb)?)?.neg(), l.delbar().del().sub(&b.wedge(&bb)?)?],
    ])
}

/// Residuals of the frame identities at one point.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FrameResiduals {
    /// Connection matrix against `[[∂L, β], [−β̄, ∂̄L]]`.
    pub matrix: f64,
    /// `(1,0)`-type of `β` (size of its other part).
    pub beta_type: f64,
    /// `∂β − ∂L∧β`.
    pub part20: f64,
    /// Curvature against the closed form.
    pub pcurvature: f64,
    /// `(2,0)` and `(0,2)` parts of the curvature.
    pub curvature_type: f64,
    /// `D^{1,0} s + j ∂̄ (j s)` on a smooth section.
    pub d10: f64,
    /// `D(j s) − j D s` on a smooth section.
    pub j_commutes: f64,
}

impl FrameResiduals {
    pub fn max(&self) -> f64 {
        [self.matrix, self.beta_type, self.part20, self.pcurvature, self.curvature_type, self.d10, self.j_commutes]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

pub fn frame_residuals(
    e: &HermitianBundle,
    s_p: &Section,
    probe: &Section,
    point: &[f64; NVARS],
) -> Result<FrameResiduals> {
    let f = frame_formulas(e, s_p).at(point, 2)?;
    let beta_type = f.beta.sub(&f.beta.type_project(1, 0)?)?.max_abs();
    let part20 = f.beta.del().sub(&f.log_norm.del().wedge(&f.beta)?)?.max_abs();
    // row-convention curvature dM − M∧M
    let r = f.matrix.d().sub(&f.matrix.wedge(&f.matrix)?)?;
    let pc = pcurvature(&f)?;
    let curvature_type = r.type_project(2, 0)?.max_abs().max(r.type_project(0, 2)?.max_abs());
    let (d10, j_commutes) = operator_residuals(e, probe, point)?;
    Ok(FrameResiduals {
        matrix: f.matrix.max_diff(&f.displayed),
        beta_type,
        part20,
        pcurvature: r.max_diff(&pc),
        curvature_type,
        d10,
        j_commutes,
    })
}

/// `‖D^{1,0}s + j∂̄(js)‖` and `‖D(js) − jDs‖` for the Chern connection.
pub fn operator_residuals(e: &HermitianBundle, s: &Section, point: &[f64; NVARS]) -> Result<(f64, f64)> {
    let dim = e.dim();
    let z = seed(point, dim, 2);
    let d = chern_connection(e);
    let v = s.field.eval_coords(&z);
    let ds = d.covariant(&z, &v)?;
    let js = e.j(&z, &v)?;
    let dbar_js = vec_functions(dim, &js).map(|c| c.delbar());
    let rhs = e.j_forms(&z, &dbar_js)?;
    let lhs = [ds[0].type_project(1, 0)?, ds[1].type_project(1, 0)?];
    let d10 = vec_max_abs(&[lhs[0].add(&rhs[0])?, lhs[1].add(&rhs[1])?]);
    let djs = d.covariant(&z, &js)?;
    let jds = e.j_forms(&z, &ds)?;
    Ok((d10, vec_max_abs(&vec_sub(&djs, &jds)?)))
}

/// Residuals of the pointwise identities of the quaternionic structure.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct QuatResiduals {
    pub orthogonal: f64,
    pub wedge_norm: f64,
    pub conjugate_linear: f64,
    pub isometry: f64,
    pub wedge_conjugate: f64,
    pub j_squared: f64,
    pub basis: f64,
}

impl QuatResiduals {
    pub fn max(&self) -> f64 {
        [
            self.orthogonal,
            self.wedge_norm,
            self.conjugate_linear,
            self.isometry,
            self.wedge_conjugate,
            self.j_squared,
            self.basis,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn quat_residuals(e: &HermitianBundle, s: &Section, t: &Section, point: &[f64; NVARS]) -> Result<QuatResiduals> {
    let z = seed(point, e.dim(), 0);
    let (s, t) = (s.field.eval_coords(&z), t.field.eval_coords(&z));
    let js = e.j(&z, &s)?;
    let jt = e.j(&z, &t)?;
    let norm = e.mu(&z, &s, &s)?.v;
    let i = C64::new(0.0, 1.0);
    let is = [s[0] * i, s[1] * i];
    let j_is = e.j(&z, &is)?;
    let jjs = e.j(&z, &js)?;
    let dist = |a: &JetVec, b: &JetVec| (a[0].v - b[0].v).norm().max((a[1].v - b[1].v).norm());
    // s = μ(s, s0)/‖s0‖² s0 + μ(s, j s0)/‖s0‖² j s0, with s0 = t
    let nt = e.mu(&z, &t, &t)?.v;
    let (c0, c1) = (e.mu(&z, &s, &t)?.v / nt, e.mu(&z, &s, &jt)?.v / nt);
    let rebuilt = [t[0] * c0 + jt[0] * c1, t[1] * c0 + jt[1] * c1];
    let (w0, w1) = (wedge_det(&s, &jt).v / nt, -wedge_det(&s, &t).v / nt);
    let rebuilt2 = [t[0] * w0 + jt[0] * w1, t[1] * w0 + jt[1] * w1];
    Ok(QuatResiduals {
        orthogonal: e.mu(&z, &js, &s)?.v.norm(),
        wedge_norm: (wedge_det(&s, &js).v - norm).norm(),
        conjugate_linear: dist(&j_is, &[js[0] * -i, js[1] * -i]),
        isometry: (e.mu(&z, &js, &js)?.v - norm).norm(),
        wedge_conjugate: (wedge_det(&js, &jt).v - wedge_det(&s, &t).v.conj()).norm(),
        j_squared: dist(&jjs, &[-s[0], -s[1]]),
        basis: dist(&rebuilt, &s).max(dist(&rebuilt2, &s)),
    })
}

#[cfg(test)]
mod tests;

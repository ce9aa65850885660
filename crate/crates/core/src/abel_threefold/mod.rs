//! The quaternionic Abel analogue on a local model `X = box ⊂ ℂ³`: a map
//! `g` into ℍ* vanishing on a line `Q` and singular on a line `P`, the
//! 3-form `α_PQ = −⅓tr(A_PQ^∧3)` with `A_PQ = −g⁻¹dg`, and the two
//! pairings it satisfies as a current.

mod checks;

pub use checks::{
    algebraic_equivalence_check, calibrate_sign, line_integral, localization_check, AlgebraicReport, Bump,
    LocalizationReport, TUBE_RADIUS,
};

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{Coords, Field, KForm};
use crate::group::{maurer_cartan, GroupMap};
use crate::quaternion::Quaternion;

/// The complex line `{z₁ = c₁, z₂ = c₂}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LineDivisor {
    pub c: [C64; 2],
}

impl LineDivisor {
    pub fn new(c1: C64, c2: C64) -> Self {
        LineDivisor { c: [c1, c2] }
    }

    /// Euclidean distance from `(z₁, z₂)` to the line.
    pub fn distance(&self, w: [C64; 2]) -> f64 {
        ((w[0] - self.c[0]).norm_sqr() + (w[1] - self.c[1]).norm_sqr()).sqrt()
    }
}

/// `g = ((z₁ − c₁^Q) + (z₂ − c₂^Q)j)·((z₁ − c₁^P) + (z₂ − c₂^P)j)⁻¹` on the
/// box `|Re zₖ|, |Im zₖ| ≤ half_width`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LocalModel {
    pub half_width: f64,
    pub p: LineDivisor,
    pub q: LineDivisor,
    /// Evaluations closer than this to either line are refused.
    pub guard: f64,
}

/// `Θ = tr((h⁻¹dh)^∧3)` equals `κ·σ` with `σ` the solid-angle form of
/// ℝ⁴ = ℍ in the coordinates `(Re a, Im a, Re b, Im b)` of `a + bj`; the
/// sign reflects the orientation in which `∫_{S³} Θ = +24π²`.
pub const KAPPA: f64 = -12.0;

impl LocalModel {
    pub fn new(half_width: f64, p: LineDivisor, q: LineDivisor) -> Result<Self> {
        for line in [p, q] {
            if line.c.iter().any(|c| c.re.abs() >= half_width || c.im.abs() >= half_width) {
                return Err(Error::Invalid(format!("line {:?} leaves the box of half-width {half_width}", line.c)));
            }
        }
        Ok(LocalModel { half_width, p, q, guard: 1e-6 })
    }

    /// `L = 3`, `Q` through the origin, `P` offset by `(1, 0)`.
    pub fn coplanar() -> Self {
        let zero = C64::new(0.0, 0.0);
        LocalModel::new(3.0, LineDivisor::new(C64::new(1.0, 0.0), zero), LineDivisor::new(zero, zero)).unwrap()
    }

    /// `L = 3`, `Q` through the origin, `P` offset by `(1, 0.7)`.
    pub fn generic() -> Self {
        let zero = C64::new(0.0, 0.0);
        LocalModel::new(3.0, LineDivisor::new(C64::new(1.0, 0.0), C64::new(0.7, 0.0)), LineDivisor::new(zero, zero))
            .unwrap()
    }

    pub fn swapped(&self) -> Self {
        LocalModel { p: self.q, q: self.p, ..*self }
    }

    pub fn is_trivial(&self) -> bool {
        self.p == self.q
    }

    fn check(&self, w: [C64; 2]) -> Result<()> {
        let d = self.p.distance(w).min(self.q.distance(w));
        if self.is_trivial() || d >= self.guard {
            Ok(())
        } else {
            Err(Error::SingularEvaluation(format!("point {w:?} within {d:.3e} of a divisor line")))
        }
    }

    /// `g` as a map on the `(z₁, z₂, z₃)` chart.
    pub fn group_map(&self) -> GroupMap {
        let m = *self;
        GroupMap::new(3, move |z: &Coords| {
            let (aq, bq) = (z[0] - m.q.c[0], z[1] - m.q.c[1]);
            let (ap, bp) = (z[0] - m.p.c[0], z[1] - m.p.c[1]);
            let n = (ap.norm_sqr() + bp.norm_sqr()).recip();
            let (ia, ib) = (ap.conj() * n, -bp * n);
            // (a + bj)(c + dj) = (ac − b d̄) + (ad + b c̄) j
            [aq * ia - bq * ib.conj(), aq * ib + bq * ia.conj()]
        })
    }

    pub fn value(&self, w: [C64; 2]) -> Result<Quaternion> {
        self.check(w)?;
        let u = Quaternion::new(w[0] - self.q.c[0], w[1] - self.q.c[1]);
        let v = Quaternion::new(w[0] - self.p.c[0], w[1] - self.p.c[1]);
        Ok(u * v.inverse()?)
    }

    /// The vector `K(w)` with `g*Θ ∧ df = (K·∇f) dx₁dy₁dx₂dy₂` for any
    /// function `f` of `(x₁, y₁, x₂, y₂)`; closed form of the pulled-back
    /// solid-angle form, `K = −κ·adj(Dg)·g/|g|⁴`.
    pub fn kernel(&self, w: [C64; 2]) -> Result<[f64; 4]> {
        self.check(w)?;
        self.kernel_raw(w)
    }

    /// [`LocalModel::kernel`] without the distance guard.
    pub(crate) fn kernel_raw(&self, w: [C64; 2]) -> Result<[f64; 4]> {
        if self.is_trivial() {
            return Ok([0.0; 4]);
        }
        let u = Quaternion::new(w[0] - self.q.c[0], w[1] - self.q.c[1]);
        let v = Quaternion::new(w[0] - self.p.c[0], w[1] - self.p.c[1]);
        let vinv = v.inverse()?;
        let g = u * vinv;
        let (one, zero, i) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 1.0));
        let basis = [Quaternion::new(one, zero), Quaternion::new(i, zero), Quaternion::new(zero, one), Quaternion::new(zero, i)];
        let real4 = |q: Quaternion| [q.a.re, q.a.im, q.b.re, q.b.im];
        let mut jac = [[0.0; 4]; 4];
        for (k, e) in basis.iter().enumerate() {
            let col = real4((*e - g * *e) * vinv);
            for r in 0..4 {
                jac[r][k] = col[r];
            }
        }
        let gv = real4(g);
        let adj = adjugate4(&jac);
        let n2 = g.norm_sqr();
        let s = -KAPPA / (n2 * n2);
        let mut out = [0.0; 4];
        for k in 0..4 {
            out[k] = s * (0..4).map(|i| adj[k][i] * gv[i]).sum::<f64>();
        }
        Ok(out)
    }
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// `adj(J)[k][i] = (−1)^{i+k} M_{ik}`.
fn adjugate4(j: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let mut adj = [[0.0; 4]; 4];
    for i in 0..4 {
        for k in 0..4 {
            let mut m = [[0.0; 3]; 3];
            for (r, row) in (0..4).filter(|&r| r != i).enumerate() {
                for (c, col) in (0..4).filter(|&c| c != k).enumerate() {
                    m[r][c] = j[row][col];
                }
            }
            let sign = if (i + k) % 2 == 0 { 1.0 } else { -1.0 };
            adj[k][i] = sign * det3(m);
        }
    }
    adj
}

/// `α_PQ = −⅓tr(A_PQ^∧3)` with `A_PQ = −g⁻¹dg`.
pub fn alpha_pq(model: &LocalModel) -> Field<Result<KForm>> {
    let m = *model;
    let mc = maurer_cartan(&model.group_map());
    Field::new(3, move |z: &Coords| {
        m.check([z[0].v, z[1].v])?;
        if m.is_trivial() {
            return Ok(KForm::zero(3, 3));
        }
        let a = mc.eval_coords(z)?.neg();
        Ok(a.qwedge(&a)?.qwedge(&a)?.trace().scale_c(C64::new(-1.0 / 3.0, 0.0)))
    })
}

/// Convenience for tests and reports: `α_PQ` at a point of ℂ³.
pub fn alpha_at(model: &LocalModel, z: [C64; 3], order: u8) -> Result<KForm> {
    let mut p = [0.0; crate::jet::NVARS];
    for k in 0..3 {
        p[2 * k] = z[k].re;
        p[2 * k + 1] = z[k].im;
    }
    alpha_pq(model).at(&p, order)
}

#[cfg(test)]
mod tests;

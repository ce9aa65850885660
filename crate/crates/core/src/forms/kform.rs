//! Pointwise complex-valued differential forms.
//!
//! A [`KForm`] is the germ of a form at one point: a sparse table from
//! multi-indices to [`Jet`] coefficients. A multi-index is a bitmask over
//! the covectors `dz1 dz2 dz3 dz̄1 dz̄2 dz̄3` (bits 0..6), always read in
//! increasing bit order, so `dz1∧dz̄1` is stored as `0b001001` and
//! `dz̄1∧dz1` is its negative.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::jet::Jet;

/// One covector of the complex frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cov {
    Dz(usize),
    Dzbar(usize),
}

impl Cov {
    pub fn bit_mask(self) -> u8 {
        1 << self.bit()
    }

    pub fn bit(self) -> u8 {
        match self {
            Cov::Dz(k) => k as u8,
            Cov::Dzbar(k) => 3 + k as u8,
        }
    }
}

const HOLO: u8 = 0b000111;

fn holo_count(mask: u8) -> u32 {
    (mask & HOLO).count_ones()
}

fn anti_count(mask: u8) -> u32 {
    (mask >> 3).count_ones()
}

/// Sign of the permutation sorting the concatenation `I ++ J` of two
/// disjoint increasing index lists.
pub(crate) fn merge_sign(i: u8, j: u8) -> f64 {
    let mut inversions = 0;
    let mut rest = j;
    while rest != 0 {
        let b = rest.trailing_zeros();
        inversions += (i >> (b + 1)).count_ones();
        rest &= rest - 1;
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[derive(Clone, Debug)]
pub struct KForm {
    dim: usize,
    degree: usize,
    terms: Vec<(u8, Jet)>,
}

impl KForm {
    pub fn zero(dim: usize, degree: usize) -> Self {
        KForm { dim, degree, terms: Vec::new() }
    }

    pub fn scalar(dim: usize, c: Jet) -> Self {
        KForm { dim, degree: 0, terms: vec![(0, c)] }
    }

    /// `c · cov[0] ∧ cov[1] ∧ …`, normalized to canonical order.
    pub fn monomial(dim: usize, c: Jet, covs: &[Cov]) -> Self {
        let mut mask = 0u8;
        let mut sign = 1.0;
        for cov in covs {
            let b = cov.bit();
            let k = match *cov {
                Cov::Dz(k) | Cov::Dzbar(k) => k,
            };
            assert!(k < dim, "covector index outside chart");
            if mask & (1 << b) != 0 {
                return KForm::zero(dim, covs.len());
            }
            sign *= merge_sign(mask, 1 << b);
            mask |= 1 << b;
        }
        KForm { dim, degree: covs.len(), terms: vec![(mask, c * sign)] }
    }

    /// The real covector `dx_k` (`i = 2k`) or `dy_k` (`i = 2k + 1`).
    pub fn real_covector(dim: usize, i: usize) -> Self {
        let k = i / 2;
        let (a, b) = if i.is_multiple_of(2) {
            (C64::new(0.5, 0.0), C64::new(0.5, 0.0))
        } else {
            (C64::new(0.0, -0.5), C64::new(0.0, 0.5))
        };
        KForm::from_terms(dim, 1, [(1u8 << k, Jet::constant(a)), (1u8 << (3 + k), Jet::constant(b))])
    }

    /// `c · dx1∧dy1∧…∧dx_m∧dy_m`.
    pub fn real_volume(dim: usize, c: Jet) -> Self {
        let mut out = KForm::scalar(dim, c);
        for i in 0..2 * dim {
            out = out.wedge(&KForm::real_covector(dim, i)).expect("within top degree");
        }
        out
    }

    /// Builds a form from raw `(mask, coefficient)` pairs; duplicates add up.
    pub fn from_terms(dim: usize, degree: usize, terms: impl IntoIterator<Item = (u8, Jet)>) -> Self {
        let mut f = KForm::zero(dim, degree);
        for (m, c) in terms {
            debug_assert_eq!(m.count_ones() as usize, degree);
            f.push(m, c);
        }
        f
    }

    fn push(&mut self, mask: u8, c: Jet) {
        match self.terms.binary_search_by_key(&mask, |t| t.0) {
            Ok(i) => self.terms[i].1 += c,
            Err(i) => self.terms.insert(i, (mask, c)),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &[(u8, Jet)] {
        &self.terms
    }

    pub fn coeff(&self, mask: u8) -> C64 {
        self.coeff_jet(mask).map_or(C64::new(0.0, 0.0), |c| c.v)
    }

    pub fn coeff_jet(&self, mask: u8) -> Option<&Jet> {
        self.terms.binary_search_by_key(&mask, |t| t.0).ok().map(|i| &self.terms[i].1)
    }

    /// Value of the coefficient of `covs` (in the given order, with sign).
    pub fn component(&self, covs: &[Cov]) -> C64 {
        let probe = KForm::monomial(self.dim, Jet::real(1.0), covs);
        match probe.terms.first() {
            Some((m, s)) => self.coeff(*m) * s.v,
            None => C64::new(0.0, 0.0),
        }
    }

    fn check_chart(&self, other: &KForm) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::ChartMismatch(self.dim, other.dim));
        }
        Ok(())
    }

    pub fn add(&self, other: &KForm) -> Result<KForm> {
        self.check_chart(other)?;
        if self.degree != other.degree {
            return Err(Error::Invalid(format!(
                "cannot add forms of degrees {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.push(*m, *c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &KForm) -> Result<KForm> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> KForm {
        self.map_coeffs(|c| -*c)
    }

    pub fn scale(&self, s: &Jet) -> KForm {
        self.map_coeffs(|c| *c * *s)
    }

    pub fn scale_c(&self, s: C64) -> KForm {
        self.map_coeffs(|c| *c * s)
    }

    pub fn map_coeffs(&self, f: impl Fn(&Jet) -> Jet) -> KForm {
        KForm {
            dim: self.dim,
            degree: self.degree,
            terms: self.terms.iter().map(|(m, c)| (*m, f(c))).collect(),
        }
    }

    pub fn wedge(&self, other: &KForm) -> Result<KForm> {
        self.check_chart(other)?;
        let degree = self.degree + other.degree;
        if degree > 2 * self.dim {
            return Err(Error::DegreeTooHigh { degree, max: 2 * self.dim });
        }
        let mut out = KForm::zero(self.dim, degree);
        for (mi, ci) in &self.terms {
            for (mj, cj) in &other.terms {
                if mi & mj != 0 {
                    continue;
                }
                let s = merge_sign(*mi, *mj);
                out.push(mi | mj, *ci * *cj * s);
            }
        }
        Ok(out)
    }

    /// Exterior derivative. Coefficients lose one derivative order; a
    /// top-degree input yields the zero form of degree `2m + 1`.
    pub fn d(&self) -> KForm {
        self.derivative(true, true)
    }

    /// ∂ part of `d`.
    pub fn del(&self) -> KForm {
        self.derivative(true, false)
    }

    /// ∂̄ part of `d`.
    pub fn delbar(&self) -> KForm {
        self.derivative(false, true)
    }

    fn derivative(&self, holo: bool, anti: bool) -> KForm {
        let mut out = KForm::zero(self.dim, self.degree + 1);
        if self.degree >= 2 * self.dim {
            return out;
        }
        for (m, c) in &self.terms {
            for k in 0..self.dim {
                let mut add = |bit: u8, dc: Jet| {
                    if m & (1 << bit) != 0 {
                        return;
                    }
                    let below = (m & ((1u8 << bit) - 1)).count_ones();
                    let s = if below.is_multiple_of(2) { 1.0 } else { -1.0 };
                    out.push(m | (1 << bit), dc * s);
                };
                if holo {
                    add(k as u8, c.d_z(k));
                }
                if anti {
                    add(3 + k as u8, c.d_zbar(k));
                }
            }
        }
        out
    }

    pub fn type_project(&self, p: usize, q: usize) -> Result<KForm> {
        if p + q != self.degree {
            return Err(Error::TypeMismatch { p, q, degree: self.degree });
        }
        Ok(KForm {
            dim: self.dim,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| holo_count(*m) as usize == p && anti_count(*m) as usize == q)
                .cloned()
                .collect(),
        })
    }

    /// Complex conjugate: swaps `dz_i ↔ dz̄_i` and conjugates coefficients.
    pub fn conj(&self) -> KForm {
        let mut out = KForm::zero(self.dim, self.degree);
        for (m, c) in &self.terms {
            let (p, q) = (holo_count(*m), anti_count(*m));
            let swapped = ((m & HOLO) << 3) | (m >> 3);
            // moving the q new holomorphic covectors past the p new
            // antiholomorphic ones
            let s = if (p * q) % 2 == 0 { 1.0 } else { -1.0 };
            out.push(swapped, c.conj() * s);
        }
        out
    }

    /// Evaluates the form on real tangent vectors given in the coordinates
    /// `(x1, y1, x2, y2, x3, y3)`.
    pub fn eval_on(&self, vectors: &[[f64; 6]]) -> Result<C64> {
        if vectors.len() != self.degree {
            return Err(Error::Invalid(format!(
                "a {}-form needs {} vectors, got {}",
                self.degree,
                self.degree,
                vectors.len()
            )));
        }
        let mut total = C64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let bits: Vec<u8> = (0..6).filter(|b| m & (1 << b) != 0).collect();
            let mut mat = vec![vec![C64::new(0.0, 0.0); bits.len()]; bits.len()];
            for (a, &b) in bits.iter().enumerate() {
                for (col, v) in vectors.iter().enumerate() {
                    mat[a][col] = covector_on(b, v);
                }
            }
            total += c.v * det(mat);
        }
        Ok(total)
    }

    /// For a top-degree form, the coefficient `f` with
    /// `form = f · dx1∧dy1∧…∧dx_m∧dy_m`.
    pub fn real_density(&self) -> Result<C64> {
        if self.degree != 2 * self.dim {
            return Err(Error::Invalid(format!(
                "real density needs a {}-form, got degree {}",
                2 * self.dim,
                self.degree
            )));
        }
        let basis: Vec<[f64; 6]> = (0..self.degree)
            .map(|i| {
                let mut e = [0.0; 6];
                e[i] = 1.0;
                e
            })
            .collect();
        self.eval_on(&basis)
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.v.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient difference against `other` (values only).
    pub fn max_diff(&self, other: &KForm) -> f64 {
        let mut masks: Vec<u8> = self.terms.iter().chain(&other.terms).map(|t| t.0).collect();
        masks.sort_unstable();
        masks.dedup();
        masks.into_iter().map(|m| (self.coeff(m) - other.coeff(m)).norm()).fold(0.0, f64::max)
    }
}

fn covector_on(bit: u8, v: &[f64; 6]) -> C64 {
    let k = (bit % 3) as usize;
    let (x, y) = (v[2 * k], v[2 * k + 1]);
    if bit < 3 {
        C64::new(x, y)
    } else {
        C64::new(x, -y)
    }
}

fn det(mut m: Vec<Vec<C64>>) -> C64 {
    let n = m.len();
    let mut acc = C64::new(1.0, 0.0);
    for col in 0..n {
        let piv = (col..n).max_by(|&a, &b| m[a][col].norm().total_cmp(&m[b][col].norm())).unwrap();
        if m[piv][col].norm() == 0.0 {
            return C64::new(0.0, 0.0);
        }
        if piv != col {
            m.swap(piv, col);
            acc = -acc;
        }
        acc *= m[col][col];
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            for c in col..n {
                let t = m[col][c];
                m[r][c] -= f * t;
            }
        }
    }
    acc
}

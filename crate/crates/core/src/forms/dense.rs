//! Value-only forms with a dense coefficient table, for inner loops where
//! derivatives are no longer needed.

use num_complex::Complex64 as C64;

use super::kform::merge_sign;
use super::{KForm, MatForm};
use crate::jet::Jet;

const ZERO: C64 = C64::new(0.0, 0.0);

const fn masks_of_degree(k: u32) -> ([u8; 20], usize) {
    let mut out = [0u8; 20];
    let mut n = 0;
    let mut m = 0u32;
    while m < 64 {
        if m.count_ones() == k {
            out[n] = m as u8;
            n += 1;
        }
        m += 1;
    }
    (out, n)
}

const MASKS: [([u8; 20], usize); 7] = [
    masks_of_degree(0),
    masks_of_degree(1),
    masks_of_degree(2),
    masks_of_degree(3),
    masks_of_degree(4),
    masks_of_degree(5),
    masks_of_degree(6),
];

fn masks(degree: usize) -> &'static [u8] {
    let (m, n) = &MASKS[degree];
    &m[..*n]
}

/// Coefficients indexed by the covector bitmask (see [`KForm`]).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DenseForm {
    pub degree: usize,
    pub c: [C64; 64],
}

impl DenseForm {
    pub fn zero(degree: usize) -> Self {
        DenseForm { degree, c: [ZERO; 64] }
    }

    pub fn from_kform(f: &KForm) -> Self {
        let mut out = DenseForm::zero(f.degree());
        for (m, c) in f.terms() {
            out.c[*m as usize] = c.v;
        }
        out
    }

    pub fn to_kform(&self, dim: usize) -> KForm {
        let terms = masks(self.degree).iter().filter(|&&m| self.c[m as usize] != ZERO);
        KForm::from_terms(dim, self.degree, terms.map(|&m| (m, Jet::constant(self.c[m as usize]))))
    }

    /// Values of `d f`; the coefficients of `f` must carry first
    /// derivatives.
    pub fn exterior_derivative(f: &KForm) -> DenseForm {
        let mut out = DenseForm::zero((f.degree() + 1).min(6));
        if f.degree() >= 2 * f.dim() {
            return out;
        }
        let (half, ihalf) = (C64::new(0.5, 0.0), C64::new(0.0, 0.5));
        for (m, c) in f.terms() {
            assert!(c.order() >= 1, "derivative of an order-0 jet");
            for k in 0..f.dim() {
                let (gx, gy) = (c.g[2 * k], c.g[2 * k + 1]);
                for (bit, dc) in [(k as u8, gx * half - gy * ihalf), (3 + k as u8, gx * half + gy * ihalf)] {
                    if m & (1 << bit) != 0 {
                        continue;
                    }
                    let below = (m & ((1u8 << bit) - 1)).count_ones();
                    let s = if below.is_multiple_of(2) { 1.0 } else { -1.0 };
                    out.c[(m | (1 << bit)) as usize] += dc * s;
                }
            }
        }
        out
    }

    pub fn add(&self, o: &DenseForm) -> DenseForm {
        debug_assert_eq!(self.degree, o.degree);
        let mut out = *self;
        for &m in masks(self.degree) {
            out.c[m as usize] += o.c[m as usize];
        }
        out
    }

    pub fn scale(&self, s: C64) -> DenseForm {
        let mut out = *self;
        for &m in masks(self.degree) {
            out.c[m as usize] *= s;
        }
        out
    }

    pub fn wedge(&self, o: &DenseForm) -> DenseForm {
        let degree = self.degree + o.degree;
        let mut out = DenseForm::zero(degree.min(6));
        if degree > 6 {
            return out;
        }
        for &i in masks(self.degree) {
            let a = self.c[i as usize];
            if a == ZERO {
                continue;
            }
            for &j in masks(o.degree) {
                let b = o.c[j as usize];
                if i & j != 0 || b == ZERO {
                    continue;
                }
                out.c[(i | j) as usize] += a * b * merge_sign(i, j);
            }
        }
        out
    }
}

pub type DenseMat = [[DenseForm; 2]; 2];

pub fn dense_mat(m: &MatForm) -> DenseMat {
    std::array::from_fn(|i| std::array::from_fn(|j| DenseForm::from_kform(&m.e[i][j])))
}

/// Values of `d m` for a matrix whose entries carry first derivatives.
pub fn dense_mat_d(m: &MatForm) -> DenseMat {
    std::array::from_fn(|i| std::array::from_fn(|j| DenseForm::exterior_derivative(&m.e[i][j])))
}

pub fn dense_mat_add(a: &DenseMat, b: &DenseMat) -> DenseMat {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][j].add(&b[i][j])))
}

pub fn dense_mat_scale(a: &DenseMat, s: C64) -> DenseMat {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][j].scale(s)))
}

pub fn dense_mat_wedge(a: &DenseMat, b: &DenseMat) -> DenseMat {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][0].wedge(&b[0][j]).add(&a[i][1].wedge(&b[1][j]))))
}

pub fn dense_trace(a: &DenseMat) -> DenseForm {
    a[0][0].add(&a[1][1])
}

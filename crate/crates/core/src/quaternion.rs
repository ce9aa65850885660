//! Quaternions in the split form `a + b·j` with complex `a`, `b`.
//!
//! Multiplication follows the rule `j·z = z̄·j` for complex scalars `z`,
//! so that `(a + b·j)(c + d·j) = (ac − b·d̄) + (ad + b·c̄)·j`. The 2×2
//! complex-matrix embedding `a + b·j ↦ [[a, b], [−b̄, ā]]` is a
//! multiplicative homomorphism and serves as the oracle for the product.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub type Mat2 = [[C64; 2]; 2];

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Quaternion {
    pub a: C64,
    pub b: C64,
}

/// `r · unit` with `r > 0` and `unit` on S³.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarDecomposition {
    pub r: f64,
    pub unit: Quaternion,
}

impl Quaternion {
    pub const ONE: Quaternion = Quaternion { a: C64::new(1.0, 0.0), b: C64::new(0.0, 0.0) };
    pub const J: Quaternion = Quaternion { a: C64::new(0.0, 0.0), b: C64::new(1.0, 0.0) };

    pub fn new(a: C64, b: C64) -> Self {
        Quaternion { a, b }
    }

    pub fn from_complex(a: C64) -> Self {
        Quaternion { a, b: C64::new(0.0, 0.0) }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Quaternionic conjugate `ā − b·j`.
    pub fn conj(&self) -> Quaternion {
        Quaternion { a: self.a.conj(), b: -self.b }
    }

    pub fn scale(&self, s: f64) -> Quaternion {
        Quaternion { a: self.a * s, b: self.b * s }
    }

    pub fn inverse(&self) -> Result<Quaternion> {
        let n = self.norm_sqr();
        if n == 0.0 {
            return Err(Error::ZeroQuaternion);
        }
        Ok(self.conj().scale(1.0 / n))
    }

    pub fn polar(&self) -> Result<PolarDecomposition> {
        let r = self.norm();
        if r == 0.0 {
            return Err(Error::ZeroQuaternion);
        }
        Ok(PolarDecomposition { r, unit: self.scale(1.0 / r) })
    }

    pub fn embed(&self) -> Mat2 {
        [[self.a, self.b], [-self.b.conj(), self.a.conj()]]
    }

    /// Inverse of [`Quaternion::embed`]; reads the first row.
    pub fn from_matrix(m: &Mat2) -> Quaternion {
        Quaternion { a: m[0][0], b: m[0][1] }
    }

    /// Real part of the scalar component, i.e. half the matrix trace.
    pub fn real_part(&self) -> f64 {
        self.a.re
    }
}

impl PolarDecomposition {
    pub fn reconstruct(&self) -> Quaternion {
        self.unit.scale(self.r)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, o: Quaternion) -> Quaternion {
        Quaternion {
            a: self.a * o.a - self.b * o.b.conj(),
            b: self.a * o.b + self.b * o.a.conj(),
        }
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion { a: self.a + o.a, b: self.b + o.b }
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion { a: self.a - o.a, b: self.b - o.b }
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion { a: -self.a, b: -self.b }
    }
}

pub fn mat_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    let mut out = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    out
}

pub fn mat_det(x: &Mat2) -> C64 {
    x[0][0] * x[1][1] - x[0][1] * x[1][0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn close(x: Quaternion, y: Quaternion, tol: f64) -> bool {
        (x - y).norm() <= tol
    }

    #[test]
    fn j_times_i_is_minus_i_j() {
        let p = Quaternion::J;
        let q = Quaternion::from_complex(c(0.0, 1.0));
        let r = p * q;
        assert_eq!(r, Quaternion::new(c(0.0, 0.0), c(0.0, -1.0)));
    }

    #[test]
    fn identity_is_neutral() {
        let q = Quaternion::new(c(0.3, -1.2), c(2.0, 0.5));
        assert_eq!(Quaternion::ONE * q, q);
        assert_eq!(q * Quaternion::ONE, q);
    }

    #[test]
    fn inverse_of_three_plus_four_j() {
        let q = Quaternion::new(c(3.0, 0.0), c(4.0, 0.0));
        let inv = q.inverse().unwrap();
        assert!(close(inv, Quaternion::new(c(3.0 / 25.0, 0.0), c(-4.0 / 25.0, 0.0)), 1e-16));
        // matrix product as the independent check
        let prod = mat_mul(&q.embed(), &inv.embed());
        assert!((prod[0][0] - 1.0).norm() < 1e-15 && prod[0][1].norm() < 1e-15);
        assert!(close(q * inv, Quaternion::ONE, 1e-15));
    }

    #[test]
    fn unit_inverse_is_ubar_minus_vj() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let q = Quaternion::new(c(s, 0.0), c(0.0, s));
        let inv = q.inverse().unwrap();
        assert!(close(inv, Quaternion::new(c(s, 0.0), c(0.0, -s)), 1e-15));
        assert_eq!(Quaternion::ONE.inverse().unwrap(), Quaternion::ONE);
    }

    #[test]
    fn zero_has_no_inverse_or_polar() {
        assert_eq!(Quaternion::default().inverse(), Err(Error::ZeroQuaternion));
        assert!(Quaternion::default().polar().is_err());
    }

    #[test]
    fn polar_of_three_four() {
        let p = Quaternion::new(c(3.0, 0.0), c(4.0, 0.0)).polar().unwrap();
        assert_eq!(p.r, 5.0);
        assert!(close(p.unit, Quaternion::new(c(0.6, 0.0), c(0.8, 0.0)), 1e-15));
        let u = Quaternion::new(c(0.6, 0.0), c(0.0, 0.8));
        let pu = u.polar().unwrap();
        assert!((pu.r - 1.0).abs() < 1e-15 && close(pu.unit, u, 1e-15));
    }

    #[test]
    fn embedding_of_basis() {
        let one = Quaternion::ONE.embed();
        assert_eq!(one, [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]);
        let j = Quaternion::J.embed();
        assert_eq!(j, [[c(0.0, 0.0), c(1.0, 0.0)], [c(-1.0, 0.0), c(0.0, 0.0)]]);
    }

    fn quat() -> impl Strategy<Value = Quaternion> {
        (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64)
            .prop_map(|(a, b, x, y)| Quaternion::new(c(a, b), c(x, y)))
    }

    proptest! {
        #[test]
        fn product_agrees_with_matrix_product(p in quat(), q in quat()) {
            let lhs = (p * q).embed();
            let rhs = mat_mul(&p.embed(), &q.embed());
            for i in 0..2 { for j in 0..2 {
                prop_assert!((lhs[i][j] - rhs[i][j]).norm() < 1e-14 * (1.0 + p.norm() * q.norm()));
            }}
        }

        #[test]
        fn embedded_inverse_is_identity(q in quat()) {
            prop_assume!(q.norm() > 1e-3);
            let m = mat_mul(&q.embed(), &q.inverse().unwrap().embed());
            prop_assert!((m[0][0] - 1.0).norm() < 1e-13 && (m[1][1] - 1.0).norm() < 1e-13);
            prop_assert!(m[0][1].norm() < 1e-13 && m[1][0].norm() < 1e-13);
        }

        #[test]
        fn determinant_is_norm_squared(q in quat()) {
            let d = mat_det(&q.embed());
            prop_assert!((d.re - q.norm_sqr()).abs() < 1e-14 * (1.0 + q.norm_sqr()));
            prop_assert!(d.im.abs() < 1e-14 * (1.0 + q.norm_sqr()));
        }

        #[test]
        fn polar_round_trip(q in quat()) {
            prop_assume!(q.norm() > 1e-6);
            let p = q.polar().unwrap();
            prop_assert!((p.reconstruct() - q).norm() <= 1e-14 * q.norm());
            prop_assert!((p.unit.norm_sqr() - 1.0).abs() < 1e-14);
        }

        #[test]
        fn j_conjugates_complex_scalars(re in -5.0..5.0f64, im in -5.0..5.0f64) {
            let z = Quaternion::from_complex(c(re, im));
            let zbar = Quaternion::from_complex(c(re, -im));
            prop_assert!(close(Quaternion::J * z, zbar * Quaternion::J, 1e-15));
        }

        #[test]
        fn left_multiplication_by_j_embeds(q in quat()) {
            let lhs = (Quaternion::J * q).embed();
            let rhs = mat_mul(&Quaternion::J.embed(), &q.embed());
            for i in 0..2 { for j in 0..2 { prop_assert!((lhs[i][j] - rhs[i][j]).norm() < 1e-14); } }
        }
    }
}

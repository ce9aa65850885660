//! Fields: rules assigning a pointwise object to each point of a chart.
//!
//! A field is a closure over the seeded complex coordinates `z_k` (as
//! [`Jet`]s), so its derivatives at a point come from the same evaluation.

use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::jet::{seed, Jet, NVARS};

pub type Coords = [Jet; 3];

/// A rule `coordinates ↦ T` on a chart of complex dimension `dim`.
pub struct Field<T> {
    dim: usize,
    rule: Arc<dyn Fn(&Coords) -> T + Send + Sync>,
}

impl<T> Clone for Field<T> {
    fn clone(&self) -> Self {
        Field { dim: self.dim, rule: self.rule.clone() }
    }
}

impl<T: 'static> Field<T> {
    pub fn new(dim: usize, rule: impl Fn(&Coords) -> T + Send + Sync + 'static) -> Self {
        Field { dim, rule: Arc::new(rule) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Evaluates with coefficients valid to derivative `order`.
    pub fn at(&self, point: &[f64; NVARS], order: u8) -> T {
        let z = seed(point, self.dim, order);
        (self.rule)(&z)
    }

    /// Whether both fields share one rule (not merely equal values).
    pub fn same_rule(&self, other: &Field<T>) -> bool {
        self.dim == other.dim && Arc::ptr_eq(&self.rule, &other.rule)
    }

    pub fn eval_coords(&self, z: &Coords) -> T {
        (self.rule)(z)
    }

    pub fn map<U: 'static>(&self, f: impl Fn(T) -> U + Send + Sync + 'static) -> Field<U> {
        let rule = self.rule.clone();
        Field::new(self.dim, move |z| f(rule(z)))
    }

    pub fn zip<U: 'static, V: 'static>(
        &self,
        other: &Field<U>,
        f: impl Fn(T, U) -> V + Send + Sync + 'static,
    ) -> Field<V> {
        assert_eq!(self.dim, other.dim, "fields on different charts");
        let (a, b) = (self.rule.clone(), other.rule.clone());
        Field::new(self.dim, move |z| f(a(z), b(z)))
    }
}

pub type ScalarField = Field<Jet>;

impl Field<Jet> {
    pub fn value(&self, point: &[f64; NVARS]) -> C64 {
        self.at(point, 0).v
    }

    pub fn d_z(&self, point: &[f64; NVARS], k: usize) -> C64 {
        self.at(point, 1).d_z(k).v
    }

    pub fn d_zbar(&self, point: &[f64; NVARS], k: usize) -> C64 {
        self.at(point, 1).d_zbar(k).v
    }

    /// Second Wirtinger derivative; `a`, `b` are `(index, antiholomorphic)`.
    pub fn second(&self, point: &[f64; NVARS], a: (usize, bool), b: (usize, bool)) -> C64 {
        let j = self.at(point, 2);
        let first = if a.1 { j.d_zbar(a.0) } else { j.d_z(a.0) };
        let second = if b.1 { first.d_zbar(b.0) } else { first.d_z(b.0) };
        second.v
    }

    /// Largest relative error between the AD gradient and central finite
    /// differences of the value with step `h`.
    pub fn gradient_check(&self, point: &[f64; NVARS], h: f64) -> f64 {
        let j = self.at(point, 1);
        let scale = (0..2 * self.dim).map(|i| j.g[i].norm()).fold(j.v.norm(), f64::max).max(1e-300);
        let mut worst: f64 = 0.0;
        for i in 0..2 * self.dim {
            let (mut p, mut m) = (*point, *point);
            p[i] += h;
            m[i] -= h;
            let fd = (self.value(&p) - self.value(&m)) / (2.0 * h);
            worst = worst.max((fd - j.g[i]).norm() / scale);
        }
        worst
    }

    /// Largest asymmetry of the Wirtinger Hessian.
    pub fn mixed_partials_residual(&self, point: &[f64; NVARS]) -> f64 {
        let idx: Vec<(usize, bool)> =
            (0..self.dim).flat_map(|k| [(k, false), (k, true)]).collect();
        let mut worst: f64 = 0.0;
        for &a in &idx {
            for &b in &idx {
                worst = worst.max((self.second(point, a, b) - self.second(point, b, a)).norm());
            }
        }
        worst
    }
}

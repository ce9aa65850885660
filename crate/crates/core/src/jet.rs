//! Second-order forward-mode jets over six real variables.
//!
//! A [`Jet`] carries a complex value together with its gradient and
//! Hessian with respect to the real coordinates `(x1, y1, x2, y2, x3, y3)`
//! of a chart on ℂ³ (lower-dimensional charts simply leave the trailing
//! variables unseeded). Coefficients of differential forms are stored as
//! jets, so the exterior derivative is a pointwise operation: it reads the
//! gradient and lowers the available order by one.
//!
//! The `order` field records how many derivative levels are valid. Taking
//! a derivative of an order-2 jet yields an order-1 jet, and so on; the
//! arithmetic skips Hessian work entirely once an operand drops below 2.

use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64 as C64;

/// Number of real variables tracked.
pub const NVARS: usize = 6;
const NHESS: usize = NVARS * (NVARS + 1) / 2;

const fn hess_table() -> [[usize; NVARS]; NVARS] {
    let mut t = [[0usize; NVARS]; NVARS];
    let mut k = 0;
    let mut i = 0;
    while i < NVARS {
        let mut j = i;
        while j < NVARS {
            t[i][j] = k;
            t[j][i] = k;
            k += 1;
            j += 1;
        }
        i += 1;
    }
    t
}

const HIDX: [[usize; NVARS]; NVARS] = hess_table();

const ZERO: C64 = C64::new(0.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug)]
pub struct Jet {
    pub v: C64,
    pub g: [C64; NVARS],
    h: [C64; NHESS],
    order: u8,
}

impl Default for Jet {
    fn default() -> Self {
        Jet::constant(ZERO)
    }
}

impl Jet {
    /// Constants are exact to every order.
    pub fn constant(v: C64) -> Self {
        Jet { v, g: [ZERO; NVARS], h: [ZERO; NHESS], order: 2 }
    }

    pub fn real(v: f64) -> Self {
        Jet::constant(C64::new(v, 0.0))
    }

    /// The real coordinate `x_var` evaluated at `value`, valid to `order`.
    pub fn variable(value: f64, var: usize, order: u8) -> Self {
        let mut j = Jet::real(value);
        j.g[var] = C64::new(1.0, 0.0);
        j.order = order.min(2);
        j
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn with_order(mut self, order: u8) -> Self {
        self.order = self.order.min(order);
        self
    }

    pub fn hess(&self, i: usize, j: usize) -> C64 {
        self.h[HIDX[i][j]]
    }

    pub fn is_finite(&self) -> bool {
        self.v.re.is_finite() && self.v.im.is_finite()
    }

    /// Partial derivative with respect to real variable `var`.
    pub fn partial(&self, var: usize) -> Jet {
        debug_assert!(self.order >= 1, "derivative of an order-0 jet");
        let mut out = Jet::constant(self.g[var]);
        if self.order >= 2 {
            for k in 0..NVARS {
                out.g[k] = self.h[HIDX[var][k]];
            }
        }
        out.order = self.order.saturating_sub(1);
        out
    }

    /// Wirtinger derivative ∂/∂z_k = ½(∂/∂x_k − i ∂/∂y_k).
    pub fn d_z(&self, k: usize) -> Jet {
        self.wirtinger(k, -1.0)
    }

    /// Wirtinger derivative ∂/∂z̄_k = ½(∂/∂x_k + i ∂/∂y_k).
    pub fn d_zbar(&self, k: usize) -> Jet {
        self.wirtinger(k, 1.0)
    }

    fn wirtinger(&self, k: usize, sign: f64) -> Jet {
        debug_assert!(self.order >= 1, "derivative of an order-0 jet");
        let w = C64::new(0.5, 0.0);
        let wi = C64::new(0.0, 0.5 * sign);
        let (x, y) = (2 * k, 2 * k + 1);
        let mut out = Jet::constant(self.g[x] * w + self.g[y] * wi);
        if self.order >= 2 {
            for l in 0..NVARS {
                out.g[l] = self.h[HIDX[x][l]] * w + self.h[HIDX[y][l]] * wi;
            }
        }
        out.order = self.order - 1;
        out
    }

    pub fn conj(&self) -> Jet {
        let mut out = *self;
        out.v = out.v.conj();
        for x in out.g.iter_mut() {
            *x = x.conj();
        }
        if self.order >= 2 {
            for x in out.h.iter_mut() {
                *x = x.conj();
            }
        }
        out
    }

    pub fn re(&self) -> Jet {
        (*self + self.conj()) * 0.5
    }

    pub fn im(&self) -> Jet {
        (*self - self.conj()) * C64::new(0.0, -0.5)
    }

    /// |z|² as a jet (real-valued).
    pub fn norm_sqr(&self) -> Jet {
        *self * self.conj()
    }

    /// Apply a holomorphic scalar function given its value and first two
    /// derivatives at `self.v`.
    pub fn chain(&self, f0: C64, f1: C64, f2: C64) -> Jet {
        let mut out = Jet { v: f0, g: [ZERO; NVARS], h: [ZERO; NHESS], order: self.order };
        if self.order >= 1 {
            for k in 0..NVARS {
                out.g[k] = f1 * self.g[k];
            }
        }
        if self.order >= 2 {
            for i in 0..NVARS {
                let gi = self.g[i];
                for j in i..NVARS {
                    let k = HIDX[i][j];
                    out.h[k] = f1 * self.h[k] + f2 * gi * self.g[j];
                }
            }
        }
        out
    }

    pub fn recip(&self) -> Jet {
        let r = self.v.inv();
        self.chain(r, -r * r, 2.0 * r * r * r)
    }

    pub fn exp(&self) -> Jet {
        let e = self.v.exp();
        self.chain(e, e, e)
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Jet {
        let r = self.v.inv();
        self.chain(self.v.ln(), r, -r * r)
    }

    pub fn sqrt(&self) -> Jet {
        let s = self.v.sqrt();
        let d1 = 0.5 / s;
        self.chain(s, d1, -0.5 * d1 / self.v)
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = (self.v.sin(), self.v.cos());
        self.chain(s, c, -s)
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = (self.v.sin(), self.v.cos());
        self.chain(c, -s, -c)
    }

    pub fn powi(&self, n: i32) -> Jet {
        if n == 0 {
            return Jet::real(1.0);
        }
        if n == 1 {
            return *self;
        }
        let nf = n as f64;
        if n >= 2 {
            // positive powers stay finite at zero
            return self.chain(self.v.powi(n), nf * self.v.powi(n - 1), nf * (nf - 1.0) * self.v.powi(n - 2));
        }
        let p = self.v.powi(n - 2);
        self.chain(p * self.v * self.v, nf * p * self.v, nf * (nf - 1.0) * p)
    }

    /// Largest absolute entry among value, gradient and Hessian
    /// (only the levels that are valid).
    pub fn max_abs(&self) -> f64 {
        let mut m = self.v.norm();
        if self.order >= 1 {
            m = self.g.iter().fold(m, |a, x| a.max(x.norm()));
        }
        if self.order >= 2 {
            m = self.h.iter().fold(m, |a, x| a.max(x.norm()));
        }
        m
    }
}

impl From<C64> for Jet {
    fn from(v: C64) -> Self {
        Jet::constant(v)
    }
}

impl From<f64> for Jet {
    fn from(v: f64) -> Self {
        Jet::real(v)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, o: Jet) -> Jet {
        self += o;
        self
    }
}

impl AddAssign for Jet {
    fn add_assign(&mut self, o: Jet) {
        self.order = self.order.min(o.order);
        self.v += o.v;
        if self.order >= 1 {
            for k in 0..NVARS {
                self.g[k] += o.g[k];
            }
        }
        if self.order >= 2 {
            for k in 0..NHESS {
                self.h[k] += o.h[k];
            }
        }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(mut self, o: Jet) -> Jet {
        self -= o;
        self
    }
}

impl SubAssign for Jet {
    fn sub_assign(&mut self, o: Jet) {
        self.order = self.order.min(o.order);
        self.v -= o.v;
        if self.order >= 1 {
            for k in 0..NVARS {
                self.g[k] -= o.g[k];
            }
        }
        if self.order >= 2 {
            for k in 0..NHESS {
                self.h[k] -= o.h[k];
            }
        }
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self * -1.0
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let order = self.order.min(o.order);
        let mut out = Jet { v: self.v * o.v, g: [ZERO; NVARS], h: [ZERO; NHESS], order };
        if order >= 1 {
            for k in 0..NVARS {
                out.g[k] = self.g[k] * o.v + self.v * o.g[k];
            }
        }
        if order >= 2 {
            for i in 0..NVARS {
                for j in i..NVARS {
                    let k = HIDX[i][j];
                    out.h[k] = self.h[k] * o.v
                        + self.v * o.h[k]
                        + self.g[i] * o.g[j]
                        + self.g[j] * o.g[i];
                }
            }
        }
        out
    }
}

impl MulAssign for Jet {
    fn mul_assign(&mut self, o: Jet) {
        *self = *self * o;
    }
}

impl Mul<C64> for Jet {
    type Output = Jet;
    fn mul(mut self, s: C64) -> Jet {
        self.v *= s;
        if self.order >= 1 {
            for x in self.g.iter_mut() {
                *x *= s;
            }
        }
        if self.order >= 2 {
            for x in self.h.iter_mut() {
                *x *= s;
            }
        }
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, s: f64) -> Jet {
        self * C64::new(s, 0.0)
    }
}

impl Add<C64> for Jet {
    type Output = Jet;
    fn add(mut self, s: C64) -> Jet {
        self.v += s;
        self
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, s: f64) -> Jet {
        self.v += s;
        self
    }
}

impl Sub<C64> for Jet {
    type Output = Jet;
    fn sub(mut self, s: C64) -> Jet {
        self.v -= s;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, s: f64) -> Jet {
        self.v -= s;
        self
    }
}

impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

impl Div<C64> for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, s: C64) -> Jet {
        self * s.inv()
    }
}

impl Div<f64> for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, s: f64) -> Jet {
        self * (1.0 / s)
    }
}

/// Complex coordinates `z_k = x_k + i y_k` seeded at `point`, each valid to
/// `order`. Coordinates beyond the chart dimension are seeded as constants.
pub fn seed(point: &[f64; NVARS], dim: usize, order: u8) -> [Jet; 3] {
    let mut z = [Jet::real(0.0); 3];
    for (k, zk) in z.iter_mut().enumerate() {
        let x = point[2 * k];
        let y = point[2 * k + 1];
        if k < dim {
            *zk = Jet::variable(x, 2 * k, order) + Jet::variable(y, 2 * k + 1, order) * I;
        } else {
            *zk = Jet::constant(C64::new(x, y));
        }
    }
    z
}

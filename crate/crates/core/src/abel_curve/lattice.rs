//! The lattice `Λ = ℤ + τℤ` and the Weierstrass σ-function built from the
//! odd Jacobi theta function.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::integrate::{Axis, Domain};
use crate::jet::{Jet, NVARS};

const I: C64 = C64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Lattice {
    pub tau: C64,
    /// `σ(z + 1) = −e^{η₁(z + ½)} σ(z)`.
    pub eta1: C64,
    /// `σ(z + τ) = −e^{η₂(z + τ/2)} σ(z)`.
    pub eta2: C64,
    /// `θ₁′(0)`.
    theta_prime0: C64,
}

impl Lattice {
    /// Fails unless `Im τ > 0`. The Legendre relation `η₁τ − η₂ = 2πi` is
    /// checked on construction.
    pub fn new(tau: C64) -> Result<Self> {
        if !(tau.im > 0.0) {
            return Err(Error::Invalid(format!("lattice parameter needs Im τ > 0, got {tau}")));
        }
        let mut l = Lattice { tau, eta1: C64::new(0.0, 0.0), eta2: C64::new(0.0, 0.0), theta_prime0: C64::new(1.0, 0.0) };
        let (d1, d3) = l.theta_odd_derivatives_at_zero();
        l.theta_prime0 = d1;
        // the Weierstrass normalization: no z³ term in σ
        l.eta1 = -PI * PI * d3 / (3.0 * d1);
        l.eta2 = l.eta1 * tau - 2.0 * PI * I;
        let legendre = (l.eta1 * tau - l.eta2 - 2.0 * PI * I).norm();
        if legendre > 1e-10 {
            return Err(Error::Invalid(format!("Legendre relation off by {legendre:.3e}")));
        }
        Ok(l)
    }

    fn terms(&self) -> impl Iterator<Item = (f64, C64)> + '_ {
        // (2n+1, (−1)ⁿ q^{(n+½)²}) with q = e^{iπτ}
        (0..64).map_while(move |n| {
            let k = n as f64 + 0.5;
            let w = (I * PI * self.tau * k * k).exp() * if n % 2 == 0 { 1.0 } else { -1.0 };
            (n < 2 || w.norm() > 1e-300).then_some((2.0 * k, w))
        })
    }

    fn theta_odd_derivatives_at_zero(&self) -> (C64, C64) {
        let mut d1 = C64::new(0.0, 0.0);
        let mut d3 = C64::new(0.0, 0.0);
        for (m, w) in self.terms() {
            d1 += 2.0 * w * m;
            d3 -= 2.0 * w * m * m * m;
        }
        (d1, d3)
    }

    /// `θ₁(u), θ₁′(u), θ₁″(u)` with `θ₁(u) = 2Σ(−1)ⁿq^{(n+½)²} sin((2n+1)u)`.
    pub fn theta1(&self, u: C64) -> [C64; 3] {
        let mut out = [C64::new(0.0, 0.0); 3];
        for (m, w) in self.terms() {
            let (s, c) = ((u * m).sin(), (u * m).cos());
            let t = 2.0 * w;
            if !(t * s).is_finite() {
                break;
            }
            out[0] += t * s;
            out[1] += t * m * c;
            out[2] -= t * m * m * s;
        }
        out
    }

    /// `σ, σ′, σ″` at `z`.
    pub fn sigma_derivatives(&self, z: C64) -> [C64; 3] {
        let [t0, t1, t2] = self.theta1(PI * z);
        let n = PI * self.theta_prime0;
        let (t, dt, ddt) = (t0 / n, t1 * PI / n, t2 * PI * PI / n);
        let e = (self.eta1 * z * z * 0.5).exp();
        let de = self.eta1 * z * e;
        let dde = (self.eta1 + self.eta1 * self.eta1 * z * z) * e;
        [t * e, dt * e + t * de, ddt * e + 2.0 * dt * de + t * dde]
    }

    pub fn sigma(&self, z: C64) -> C64 {
        self.sigma_derivatives(z)[0]
    }

    /// σ applied to a holomorphic jet argument.
    pub fn sigma_jet(&self, z: &Jet) -> Jet {
        let [s0, s1, s2] = self.sigma_derivatives(z.v);
        z.chain(s0, s1, s2)
    }

    /// Real torus coordinates: `z = x + τy`.
    pub fn coords(&self, z: C64) -> (f64, f64) {
        let y = z.im / self.tau.im;
        (z.re - self.tau.re * y, y)
    }

    pub fn point(&self, x: f64, y: f64) -> C64 {
        C64::new(x, 0.0) + self.tau * y
    }

    /// The lattice point `m + nτ` nearest to `w` in torus coordinates.
    pub fn nearest(&self, w: C64) -> (i64, i64) {
        let (x, y) = self.coords(w);
        // the rounded coordinates are close to optimal; check neighbours
        let (x0, y0) = (x.round() as i64, y.round() as i64);
        let mut best = (x0, y0);
        let mut dist = f64::INFINITY;
        for dm in -1..=1 {
            for dn in -1..=1 {
                let (m, n) = (x0 + dm, y0 + dn);
                let d = (w - self.point(m as f64, n as f64)).norm();
                if d < dist {
                    dist = d;
                    best = (m, n);
                }
            }
        }
        best
    }

    /// Distance from `w` to `Λ`.
    pub fn distance_to_lattice(&self, w: C64) -> f64 {
        let (m, n) = self.nearest(w);
        (w - self.point(m as f64, n as f64)).norm()
    }

    /// The representative of `z` in `base + [0,1)·1 + [0,1)·τ` and the
    /// lattice coordinates subtracted to get there.
    pub fn reduce(&self, z: C64, base: C64) -> (C64, (i64, i64)) {
        let (x, y) = self.coords(z - base);
        let (a, b) = (x.floor(), y.floor());
        (z - self.point(a, b), (a as i64, b as i64))
    }

    pub fn area(&self) -> f64 {
        self.tau.im
    }

    /// The fundamental parallelogram at `base` in torus coordinates
    /// `(x, y) ∈ [0,1]²`, periodic in both.
    pub fn domain(&self, base: C64) -> Domain {
        let tau = self.tau;
        Domain::custom("torus", vec![Axis::periodic(0.0, 1.0), Axis::periodic(0.0, 1.0)], None, move |t| {
            let mut out = [Jet::real(0.0); NVARS];
            out[0] = t[0] + t[1] * tau.re + base.re;
            out[1] = t[1] * tau.im + base.im;
            out
        })
    }
}

/// `σ(z)` for the lattice `ℤ + τℤ`.
pub fn sigma(z: C64, lattice: &Lattice) -> C64 {
    lattice.sigma(z)
}

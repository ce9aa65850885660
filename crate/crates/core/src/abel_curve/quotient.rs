//! Divisors on `X = ℂ/Λ` and the smooth quotient map
//! `g = ∏σ(z − qᵢ)/σ(z − pᵢ) · exp(λz + μz̄ + φ)` with divisor `Q − P`.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rand::Rng;
use serde::Serialize;

use super::lattice::Lattice;
use crate::error::{Error, Result};
use crate::forms::{Coords, Field, KForm};
use crate::jet::Jet;

const I: C64 = C64::new(0.0, 1.0);

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorusDivisor {
    pub points: Vec<(C64, u32)>,
}

impl TorusDivisor {
    pub fn new(points: Vec<(C64, u32)>) -> Result<Self> {
        if points.iter().any(|&(_, m)| m == 0) {
            return Err(Error::Invalid("divisor multiplicities must be positive".into()));
        }
        Ok(TorusDivisor { points })
    }

    /// Simple points.
    pub fn simple(points: &[C64]) -> Self {
        TorusDivisor { points: points.iter().map(|&z| (z, 1)).collect() }
    }

    pub fn degree(&self) -> u32 {
        self.points.iter().map(|&(_, m)| m).sum()
    }

    /// `Σ mᵢ zᵢ` with the representatives as given.
    pub fn sum(&self) -> C64 {
        self.points.iter().map(|&(z, m)| z * m as f64).sum()
    }
}

/// A real trigonometric polynomial in torus coordinates,
/// `φ = Σ aₖ cos 2π(k·(x,y)) + bₖ sin 2π(k·(x,y))`.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Twist {
    pub modes: Vec<([i32; 2], f64, f64)>,
}

impl Twist {
    pub fn none() -> Self {
        Twist::default()
    }

    /// `count` modes with frequencies in `{−2..2}²∖0` and amplitudes in
    /// `[−amp, amp]`.
    pub fn random(rng: &mut impl Rng, count: usize, amp: f64) -> Self {
        let modes = (0..count)
            .map(|_| {
                let k = loop {
                    let k = [rng.gen_range(-2..=2), rng.gen_range(-2..=2)];
                    if k != [0, 0] {
                        break k;
                    }
                };
                (k, rng.gen_range(-amp..=amp), rng.gen_range(-amp..=amp))
            })
            .collect();
        Twist { modes }
    }

    pub fn eval(&self, x: &Jet, y: &Jet) -> Jet {
        let mut out = Jet::real(0.0);
        for &([k1, k2], a, b) in &self.modes {
            let arg = (*x * k1 as f64 + *y * k2 as f64) * (2.0 * PI);
            out = out + arg.cos() * a + arg.sin() * b;
        }
        out
    }
}

/// Torus coordinates of a jet point `z = x + τy`.
pub fn torus_coords(lattice: &Lattice, z: &Jet) -> (Jet, Jet) {
    let y = z.im() / lattice.tau.im;
    (z.re() - y * lattice.tau.re, y)
}

/// `g` with `div g = Q − P`, doubly periodic by the choice of `λ, μ`.
#[derive(Clone, Debug, Serialize)]
pub struct SmoothQuotientMap {
    pub lattice: Lattice,
    pub p: TorusDivisor,
    pub q: TorusDivisor,
    pub twist: Twist,
    pub lambda: C64,
    pub mu: C64,
    /// `Σ(qᵢ − pᵢ)` with the given representatives.
    pub difference: C64,
    /// The lattice point nearest to the difference, absorbed into `λ`.
    pub shift: (i64, i64),
}

/// Builds `g`. Points shared by `P` and `Q` cancel, so `Q = P` gives `g ≡ 1`.
pub fn build_g(lattice: &Lattice, p: &TorusDivisor, q: &TorusDivisor, twist: &Twist) -> Result<SmoothQuotientMap> {
    if p.degree() != q.degree() {
        return Err(Error::Invalid(format!("divisor degrees differ: {} vs {}", q.degree(), p.degree())));
    }
    let s = q.sum() - p.sum();
    let (m0, n0) = lattice.nearest(s);
    let omega = lattice.point(m0 as f64, n0 as f64);
    // multipliers e^{λ+μ−η₁S} = 1 and e^{λτ+μτ̄−η₂S} = 1, with the integer
    // freedom used to make μ as small as possible
    let mu = PI * (s - omega) / lattice.tau.im;
    let lambda = lattice.eta1 * s - 2.0 * PI * I * n0 as f64 - mu;
    Ok(SmoothQuotientMap {
        lattice: *lattice,
        p: p.clone(),
        q: q.clone(),
        twist: twist.clone(),
        lambda,
        mu,
        difference: s,
        shift: (m0, n0),
    })
}

impl SmoothQuotientMap {
    /// `g` at a jet point; fails at poles.
    pub fn value(&self, z: &Jet) -> Result<Jet> {
        let mut num = Jet::real(1.0);
        let mut den = Jet::real(1.0);
        for &(q, m) in &self.q.points {
            num *= self.lattice.sigma_jet(&(*z - q)).powi(m as i32);
        }
        for &(p, m) in &self.p.points {
            den *= self.lattice.sigma_jet(&(*z - p)).powi(m as i32);
        }
        if den.v.norm() == 0.0 || !num.is_finite() || !den.is_finite() {
            return Err(Error::SingularEvaluation(format!("g has a pole at {}", z.v)));
        }
        let (x, y) = torus_coords(&self.lattice, z);
        let e = (*z * self.lambda + z.conj() * self.mu + self.twist.eval(&x, &y)).exp();
        Ok(num * den.recip() * e)
    }

    pub fn field(&self) -> Field<Result<Jet>> {
        let g = self.clone();
        Field::new(1, move |z: &Coords| g.value(&z[0]))
    }

    /// `g⁻¹dg`, a 1-form with simple poles along the divisor.
    pub fn log_derivative(&self, z: &Jet) -> Result<KForm> {
        let g = self.value(z)?;
        if g.v.norm() == 0.0 {
            return Err(Error::SingularEvaluation(format!("g vanishes at {}", z.v)));
        }
        Ok(KForm::scalar(1, g).d().scale(&g.recip()))
    }

    /// `α_PQ = −g⁻¹dg`.
    pub fn alpha(&self) -> Field<Result<KForm>> {
        let g = self.clone();
        Field::new(1, move |z: &Coords| Ok(g.log_derivative(&z[0])?.neg()))
    }

    /// The `dz̄`-coefficient of `g⁻¹∂̄g`, smooth across the divisor.
    pub fn dbar_log(&self, z: &Jet) -> Result<Jet> {
        let g = self.value(z)?;
        Ok(g.d_zbar(0) * g.recip().with_order(g.order().saturating_sub(1)))
    }
}

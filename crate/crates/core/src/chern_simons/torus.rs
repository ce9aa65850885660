//! Smooth periodic models on the flat torus ℂ³/ℤ⁶, where pairings are
//! integrals of trigonometric polynomials and equal-weight grids are exact
//! once the grid exceeds the highest frequency.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rand::Rng;

use crate::bundle::{Connection, ConnectionFlags, Frame, HermitianBundle};
use crate::forms::{Coords, Cov, Field, KForm, MatForm};
use crate::integrate::Domain;
use crate::jet::Jet;

/// One Fourier mode `e^{2πi⟨m, x⟩}` with `m ∈ {−1, 0, 1}⁶`.
#[derive(Clone, Copy, Debug)]
struct Mode([i32; 6]);

impl Mode {
    fn random(rng: &mut impl Rng) -> Self {
        Mode(std::array::from_fn(|_| rng.gen_range(-1..=1)))
    }

    fn eval(&self, x: &[Jet; 6]) -> Jet {
        let mut phase = Jet::real(0.0);
        for (m, xa) in self.0.iter().zip(x) {
            match m {
                1 => phase += *xa,
                -1 => phase -= *xa,
                _ => {}
            }
        }
        (phase * C64::new(0.0, 2.0 * PI)).exp()
    }
}

fn real_coords(z: &Coords) -> [Jet; 6] {
    [z[0].re(), z[0].im(), z[1].re(), z[1].im(), z[2].re(), z[2].im()]
}

fn covs() -> [Cov; 6] {
    [Cov::Dz(0), Cov::Dz(1), Cov::Dz(2), Cov::Dzbar(0), Cov::Dzbar(1), Cov::Dzbar(2)]
}

fn rc(rng: &mut impl Rng, amp: f64) -> C64 {
    C64::new(rng.gen_range(-amp..amp), rng.gen_range(-amp..amp))
}

/// The unit torus `[0,1]⁶` with periodic axes.
pub fn torus_domain() -> Domain {
    Domain::torus(&[0.0; 6], &[1.0; 6])
}

/// A random periodic connection in the standard frame of the trivial
/// bundle: each matrix entry is `Σ_c (α_c + γ_c e^{2πi⟨m_c, x⟩}) dc` over
/// the six covectors `dz_k`, `dz̄_k`.
pub fn random_torus_connection(rng: &mut impl Rng, amplitude: f64) -> Connection {
    let mut entries = Vec::new();
    for _ in 0..4 {
        let terms: Vec<(Cov, C64, C64, Mode)> =
            covs().into_iter().map(|c| (c, rc(rng, amplitude), rc(rng, amplitude), Mode::random(rng))).collect();
        entries.push(terms);
    }
    let theta = Field::new(3, move |z| {
        let x = real_coords(z);
        let entry = |k: usize| {
            KForm::from_terms(3, 1, entries[k].iter().map(|(c, alpha, gamma, m)| (c.bit_mask(), m.eval(&x) * *gamma + *alpha)))
        };
        MatForm::new([[entry(0), entry(1)], [entry(2), entry(3)]])
    });
    Connection {
        bundle: HermitianBundle::flat(3),
        frame: Frame::Standard,
        theta,
        flags: ConnectionFlags::default(),
    }
}

/// A random d-closed periodic test form of type `(3,0)+(2,1)`: constant
/// coefficients on every such monomial plus `d(e^{2πi⟨m, x⟩} dz_a∧dz_b)`.
pub fn random_torus_test_form(rng: &mut impl Rng, amplitude: f64) -> Field<KForm> {
    let mut constant = vec![(vec![Cov::Dz(0), Cov::Dz(1), Cov::Dz(2)], rc(rng, amplitude))];
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        for k in 0..3 {
            constant.push((vec![Cov::Dz(a), Cov::Dz(b), Cov::Dzbar(k)], rc(rng, amplitude)));
        }
    }
    let (m, gamma) = (Mode::random(rng), rc(rng, amplitude));
    let pair = [(0, 1), (0, 2), (1, 2)][rng.gen_range(0..3)];
    Field::new(3, move |z| {
        let exact = KForm::monomial(3, m.eval(&real_coords(z)) * gamma, &[Cov::Dz(pair.0), Cov::Dz(pair.1)]).d();
        constant.iter().fold(exact, |acc, (covs, c)| {
            acc.add(&KForm::monomial(3, Jet::constant(*c), covs)).expect("same chart")
        })
    })
}

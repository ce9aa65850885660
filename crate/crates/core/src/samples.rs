//! Seeded random inputs for the verification suites: points, forms, group
//! maps, metrics and sections. All coefficient choices keep the data away
//! from zeros and degeneracies on the sampling boxes used here.

use num_complex::Complex64 as C64;
use rand::Rng;

use crate::bundle::{HermitianBundle, Section};
use crate::forms::{Coords, Field, KForm};
use crate::group::GroupMap;
use crate::jet::Jet;

pub fn random_complex(rng: &mut impl Rng, amplitude: f64) -> C64 {
    C64::new(rng.gen_range(-amplitude..amplitude), rng.gen_range(-amplitude..amplitude))
}

/// A point of the box `[−half, half]⁶`.
pub fn random_point(rng: &mut impl Rng, half: f64) -> [f64; 6] {
    std::array::from_fn(|_| rng.gen_range(-half..half))
}

/// Quadratic polynomial in `z, z̄` plus an exponential, so nothing is
/// accidentally holomorphic.
pub fn random_coeff(rng: &mut impl Rng, dim: usize) -> impl Fn(&Coords) -> Jet + Clone + Send + Sync + 'static {
    let lin: Vec<(C64, C64)> = (0..dim).map(|_| (random_complex(rng, 1.0), random_complex(rng, 1.0))).collect();
    let quad: Vec<C64> = (0..dim * dim).map(|_| random_complex(rng, 1.0)).collect();
    let (c0, ce) = (random_complex(rng, 1.0), random_complex(rng, 1.0));
    move |z: &Coords| {
        let mut acc = Jet::constant(c0);
        for k in 0..dim {
            acc += z[k] * lin[k].0 + z[k].conj() * lin[k].1;
            for l in 0..dim {
                acc += z[k] * z[l].conj() * quad[k * dim + l];
            }
        }
        acc + (z[0] * ce).exp() * 0.5
    }
}

/// A `k`-form with every admissible monomial present.
pub fn random_form(rng: &mut impl Rng, dim: usize, k: usize) -> Field<KForm> {
    let masks: Vec<u8> = (0u8..64)
        .filter(|m| m.count_ones() as usize == k)
        .filter(|m| (0..3).all(|b| b < dim || m & (0b001001 << b) == 0))
        .collect();
    let coeffs: Vec<_> = masks.iter().map(|_| random_coeff(rng, dim)).collect();
    Field::new(dim, move |z| KForm::from_terms(dim, k, masks.iter().zip(&coeffs).map(|(m, f)| (*m, f(z)))))
}

/// `g = a + b·j` with `|a|` kept above `|b|` on the unit box.
pub fn random_group_map(rng: &mut impl Rng) -> GroupMap {
    let p: Vec<C64> = (0..8).map(|_| random_complex(rng, 1.0)).collect();
    GroupMap::new(3, move |z| {
        let a = z[0] * p[0] + z[1].conj() * p[1] + (z[2] * p[2]).exp() + p[3] * 2.0;
        let b = z[1] * z[0].conj() * p[4] + z[2] * p[5] + (z[0] * p[6]).sin() + p[7];
        [a, b]
    })
}

/// A unit-determinant metric with non-holomorphic entries.
pub fn random_metric(rng: &mut impl Rng) -> HermitianBundle {
    let a: Vec<C64> = (0..6).map(|_| random_complex(rng, 0.5)).collect();
    let b: Vec<C64> = a.iter().map(|x| x * C64::new(0.3, 1.1)).collect();
    HermitianBundle::unimodular(
        3,
        move |z| (z[0] * a[0] + z[1].conj() * a[1]).re() + z[2].norm_sqr() * a[2].re,
        move |z| z[0].conj() * b[3] + (z[1] * b[4]).exp() * 0.5 + z[2] * z[0] * b[5],
    )
}

/// A holomorphic section with no zeros on the box `[−0.6, 0.6]⁶`.
pub fn random_holomorphic(rng: &mut impl Rng) -> Section {
    let a: Vec<C64> = (0..6).map(|_| random_complex(rng, 0.5)).collect();
    Section::holomorphic(3, move |z| {
        [z[0] * a[0] + (z[1] * a[1]).exp() + a[2] * 2.0, z[1] * a[3] + z[2] * z[0] * a[4] + a[5]]
    })
}

pub fn random_smooth(rng: &mut impl Rng) -> Section {
    let a: Vec<C64> = (0..4).map(|_| random_complex(rng, 0.5)).collect();
    Section::smooth(3, move |z| [z[0].conj() * a[0] + z[1] * a[1] + 1.0, (z[2] * a[2]).exp() * z[1].conj() + a[3]])
}

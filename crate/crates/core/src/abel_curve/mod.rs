//! The classical Abel theorem on an elliptic curve `X = ℂ/(ℤ + τℤ)`: the
//! smooth quotient `g` of two divisors, the pairing `∫_X α_PQ ∧ η` with
//! holomorphic 1-forms, and the construction of a meromorphic `f` with
//! `div f = Q − P` from `g`, an integral class `ξ` and a `∂̄`-solve.

mod lattice;
mod pipeline;
mod quotient;

pub use lattice::{sigma, Lattice};
pub use pipeline::{
    alpha01_sup, build_psi_and_f, choose_base, dbar_solve, periods_and_class, run_pipeline, AbelFunction, AbelOutcome, Gamma,
    PeriodClass,
};
pub use quotient::{build_g, torus_coords, SmoothQuotientMap, TorusDivisor, Twist};

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::Result;
use crate::forms::{Cov, Field, KForm};
use crate::integrate::{integrate_fallible, QuadratureSpec};
use crate::jet::Jet;

const I: C64 = C64::new(0.0, 1.0);

#[derive(Clone, Debug, Serialize)]
pub struct AbelPairing {
    /// `(1/2πi)∫_X η ∧ α_PQ`, congruent to `c·Σ(qᵢ − pᵢ)` modulo `cΛ`.
    pub value: C64,
    pub error: f64,
    /// The same integral with the factors in the order `α_PQ ∧ η`.
    pub reversed: C64,
    /// Distance of `value/c − Σ(qᵢ − pᵢ)` to the lattice.
    pub defect: f64,
}

/// Pairs `α_PQ = −g⁻¹dg` with `η = c·dz`. Only `α^{0,1}` survives the
/// wedge, so the integrand is bounded and a periodic grid converges
/// spectrally.
pub fn abel_pairing(g: &SmoothQuotientMap, c: C64, base: C64, spec: &QuadratureSpec) -> Result<AbelPairing> {
    let gm = g.clone();
    let field = Field::new(1, move |z| {
        let eta = KForm::monomial(1, Jet::constant(c), &[Cov::Dz(0)]);
        let alpha = gm.log_derivative(&z[0])?.neg();
        Ok(eta.wedge(&alpha)?.scale_c(1.0 / (2.0 * PI * I)))
    });
    let r = integrate_fallible(&field, &g.lattice.domain(base), spec, 1)?;
    let defect = if c.norm() == 0.0 {
        r.value.norm()
    } else {
        g.lattice.distance_to_lattice(r.value / c - g.difference)
    };
    Ok(AbelPairing { value: r.value, error: r.error, reversed: -r.value, defect })
}

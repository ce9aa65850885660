//! Tube limits around the zero line of `s_P`.
//!
//! For a d-closed compactly supported `τ` of type `(3,0)+(2,1)` the
//! pairing of the flat connection `D_P` with `D′_P` has integrand
//! `τ∧∂̄L∧∂∂̄L = −d(L·τ∧∂∂̄L)` with `L = log‖s_P‖²`, so over `X − B_ε` it
//! equals the boundary integral `I(ε) = ∫_{∂B_ε} L·τ∧∂∂̄L`. The limit
//! `ε → 0` is read off from a decreasing radius schedule.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::bundle::{flat_connection_from_section, primed_connection, HermitianBundle, Section};
use crate::error::{Error, Result};
use crate::forms::{Cov, Field, KForm};
use crate::integrate::{extrapolate, integrate_fallible, least_squares, Axis, Domain, QuadratureSpec};
use crate::jet::{Jet, NVARS};

use super::{cs_transgression, CS_ORDER};

/// The line `P = {z1 = c1, z2 = c2}` and tubes `|(z1, z2) − (c1, c2)| = ε`
/// over the disc `|z3 − c3| ≤ length`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LineTube {
    pub center: [C64; 3],
    pub length: f64,
}

fn place(center: [C64; 3], rho: Jet, t: &[Jet]) -> [Jet; NVARS] {
    // outward-oriented S³ in (η, ξ2, ξ1) order, then the z3 disc in polar
    // coordinates
    let (eta, a, b) = (t[0], t[1], t[2]);
    let (c, s) = (eta.cos(), eta.sin());
    let (r, phi) = (t[3], t[4]);
    [
        rho * c * b.cos() + center[0].re,
        rho * c * b.sin() + center[0].im,
        rho * s * a.cos() + center[1].re,
        rho * s * a.sin() + center[1].im,
        r * phi.cos() + center[2].re,
        r * phi.sin() + center[2].im,
    ]
}

fn tube_axes(length: f64) -> Vec<Axis> {
    vec![
        Axis::new(0.0, PI / 2.0),
        Axis::periodic(0.0, 2.0 * PI),
        Axis::periodic(0.0, 2.0 * PI),
        Axis::new(0.0, length),
        Axis::periodic(0.0, 2.0 * PI),
    ]
}

/// `∂B_ε`, oriented as the boundary of the tube.
pub fn tube_boundary(tube: &LineTube, eps: f64) -> Domain {
    let center = tube.center;
    Domain::custom("tube boundary", tube_axes(tube.length), None, move |t| place(center, Jet::real(eps), t))
}

/// `{ρ ≤ outer}` around the line with the standard orientation; the radial
/// axis `ρ` comes first so excision at `δ` removes `B_δ`.
pub fn tube_complement(tube: &LineTube, outer: f64) -> Domain {
    let center = tube.center;
    let mut axes = vec![Axis::new(0.0, outer)];
    axes.extend(tube_axes(tube.length));
    Domain::custom("tube complement", axes, Some(0), move |t| place(center, t[0], &t[1..]))
}

/// Least-squares fit `log|I| = log C + p·log ε + k·log|log ε|`.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ExponentFit {
    pub exponent: f64,
    /// Power of `|log ε|`; fixed at 2 in the pinned model.
    pub log_power: f64,
    pub log_coefficient: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct TubularReport {
    pub radii: Vec<f64>,
    pub boundary: Vec<C64>,
    pub boundary_errors: Vec<f64>,
    /// `C·ε^p·(log ε)²` with `p` fitted.
    pub pinned_fit: Option<ExponentFit>,
    /// `C·ε^p` without logarithm.
    pub power_fit: Option<ExponentFit>,
    /// `C·ε^p·|log ε|^k` with both fitted.
    pub free_fit: Option<ExponentFit>,
    /// Extrapolated `ε → 0` value of the pairing from `v + c₁ε + c₂ε²`
    /// over all radii, which covers the measured `ε²` decay.
    pub limit: C64,
    pub limit_residual: f64,
    /// The same from `v + c₁ε + c₂ε(log ε)²` over the four smallest radii
    /// (the model is asymptotic).
    pub log_model_limit: C64,
    pub log_model_residual: f64,
    /// Sup norm of the coefficients of `τ` over sampled points.
    pub scale: f64,
    /// Largest pointwise gap between the transgression of `(D_P, D′_P)`
    /// and `τ∧∂̄L∧∂∂̄L` at checked points.
    pub integrand_defect: f64,
    /// False when `s_P` does not vanish on the line: nothing is excised.
    pub singular: bool,
}

/// `L·τ∧∂∂̄L` with `L = log μ(s_P, s_P)`.
pub fn boundary_form(e: &HermitianBundle, s_p: &Section, tau: &Field<KForm>) -> Field<Result<KForm>> {
    let (e, s, tau) = (e.clone(), s_p.clone(), tau.clone());
    Field::new(3, move |z| {
        let v = s.nonvanishing(&e, z)?;
        let l = e.mu(z, &v, &v)?.ln();
        let ddbar = KForm::scalar(3, l).delbar().del();
        Ok(tau.eval_coords(z).wedge(&ddbar)?.scale(&l))
    })
}

/// `τ = d(χ·φ)` for the constant `(2,0)`-form
/// `φ = c₀ dz1∧dz2 + c₁ dz1∧dz3 + c₂ dz2∧dz3` and the bump
/// `χ = (1 − ρ²/ℓ²)^k (1 − |z3 − c3|²/ℓ²)^k` supported in the tube of
/// radius and length `ℓ`. Closed, of type `(3,0)+(2,1)`, compactly
/// supported.
pub fn tube_test_form(tube: &LineTube, phi: [C64; 3], power: i32) -> Field<KForm> {
    let (c, len2) = (tube.center, tube.length * tube.length);
    Field::new(3, move |z| {
        let rho2 = (z[0] - c[0]).norm_sqr() + (z[1] - c[1]).norm_sqr();
        let w2 = (z[2] - c[2]).norm_sqr();
        let chi = if rho2.v.re >= len2 || w2.v.re >= len2 {
            Jet::real(0.0)
        } else {
            (Jet::real(1.0) - rho2 * (1.0 / len2)).powi(power) * (Jet::real(1.0) - w2 * (1.0 / len2)).powi(power)
        };
        let form = [(0, 1), (0, 2), (1, 2)].iter().zip(phi).fold(KForm::zero(3, 2), |acc, (&(a, b), k)| {
            acc.add(&KForm::monomial(3, chi * k, &[Cov::Dz(a), Cov::Dz(b)])).expect("same chart")
        });
        form.d()
    })
}

/// `τ∧∂̄L∧∂∂̄L`, the pairing integrand written through `L`.
pub fn log_norm_integrand(e: &HermitianBundle, s_p: &Section, tau: &Field<KForm>) -> Field<Result<KForm>> {
    let (e, s, tau) = (e.clone(), s_p.clone(), tau.clone());
    Field::new(3, move |z| {
        let v = s.nonvanishing(&e, z)?;
        let l = KForm::scalar(3, e.mu(z, &v, &v)?.ln());
        tau.eval_coords(z).wedge(&l.delbar())?.wedge(&l.delbar().del())
    })
}

fn fit_exponent<const K: usize>(radii: &[f64], values: &[C64], log_power: Option<f64>) -> Result<ExponentFit> {
    let rows: Vec<[f64; K]> = radii
        .iter()
        .map(|&e| {
            let mut r = [0.0; K];
            r[0] = 1.0;
            r[1] = e.ln();
            if K == 3 {
                r[2] = e.ln().abs().ln();
            }
            r
        })
        .collect();
    let y: Vec<C64> = radii
        .iter()
        .zip(values)
        .map(|(&e, v)| {
            let shift = log_power.map_or(0.0, |k| k * e.ln().abs().ln());
            C64::new(v.norm().ln() - shift, 0.0)
        })
        .collect();
    let (c, residual) = least_squares(&rows, &y)?;
    Ok(ExponentFit {
        exponent: c[1].re,
        log_power: log_power.unwrap_or(if K == 3 { c[2].re } else { 0.0 }),
        log_coefficient: c[0].re,
        residual,
    })
}

fn tau_scale(tau: &Field<KForm>, tube: &LineTube) -> f64 {
    let mut best: f64 = 0.0;
    for i in 0..512 {
        let mut p = [0.0; NVARS];
        for (a, x) in p.iter_mut().enumerate() {
            let u = ((i as f64 + 0.5) * (0.618_033_988_749_895 + 0.287 * a as f64)).fract();
            let c = tube.center[a / 2];
            let mid = if a % 2 == 0 { c.re } else { c.im };
            *x = mid + (2.0 * u - 1.0) * tube.length;
        }
        best = best.max(tau.at(&p, 1).max_abs());
    }
    best
}

/// Boundary integrals over the radius schedule, the decay fits and the
/// extrapolated pairing `CS_{D_P}(D′_P)(τ)`.
pub fn tubular_limit(
    e: &HermitianBundle,
    s_p: &Section,
    tau: &Field<KForm>,
    tube: &LineTube,
    radii: &[f64],
    spec: &QuadratureSpec,
) -> Result<TubularReport> {
    if radii.len() < 4 {
        return Err(Error::ScheduleTooShort { needed: 4, got: radii.len() });
    }
    if radii.iter().any(|r| !(*r > 0.0)) || radii.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::BadSchedule);
    }
    let scale = tau_scale(tau, tube);
    // the tubes themselves are the excision here
    let e = &e.clone().excising(0.1 * radii[radii.len() - 1]);
    let c = tube.center;
    let on_line = s_p.field.at(&[c[0].re, c[0].im, c[1].re, c[1].im, c[2].re, c[2].im], 0);
    if on_line[0].v.norm() + on_line[1].v.norm() > 1e-12 {
        let zero = vec![C64::new(0.0, 0.0); radii.len()];
        return Ok(TubularReport {
            radii: radii.to_vec(),
            boundary: zero,
            boundary_errors: vec![0.0; radii.len()],
            pinned_fit: None,
            power_fit: None,
            free_fit: None,
            limit: C64::new(0.0, 0.0),
            limit_residual: 0.0,
            log_model_limit: C64::new(0.0, 0.0),
            log_model_residual: 0.0,
            scale,
            integrand_defect: 0.0,
            singular: false,
        });
    }
    // the connection-level integrand against the closed form through L
    let cs = cs_transgression(&flat_connection_from_section(e, s_p), &primed_connection(e, s_p))?;
    let via_l = log_norm_integrand(e, s_p, tau);
    let probe = tube_boundary(tube, radii[0]);
    let mut integrand_defect: f64 = 0.0;
    for i in 0..8 {
        let t: Vec<f64> = probe
            .axes()
            .iter()
            .enumerate()
            .map(|(a, ax)| ax.lo + ((i as f64 + 0.5) * (0.618_033_988_749_895 + 0.31 * a as f64)).fract() * (ax.hi - ax.lo))
            .collect();
        let p = probe.push(&t).0;
        let direct = tau.at(&p, CS_ORDER).wedge(&cs.at(&p, CS_ORDER)?)?;
        integrand_defect = integrand_defect.max(direct.max_diff(&via_l.at(&p, CS_ORDER)?));
    }
    let form = boundary_form(e, s_p, tau);
    let mut boundary = Vec::new();
    let mut boundary_errors = Vec::new();
    for &eps in radii {
        let r = integrate_fallible(&form, &tube_boundary(tube, eps), spec, CS_ORDER)?;
        boundary.push(r.value);
        boundary_errors.push(r.error);
    }
    let partials: Vec<(f64, C64)> = radii.iter().copied().zip(boundary.iter().copied()).collect();
    let log_model = extrapolate(&partials[partials.len() - 4..])?;
    let rows: Vec<[f64; 3]> = radii.iter().map(|&e| [1.0, e, e * e]).collect();
    let (coef, limit_residual) = least_squares(&rows, &boundary)?;
    let nonzero = boundary.iter().all(|v| v.norm() > 0.0);
    Ok(TubularReport {
        radii: radii.to_vec(),
        pinned_fit: if nonzero { Some(fit_exponent::<2>(radii, &boundary, Some(2.0))?) } else { None },
        power_fit: if nonzero { Some(fit_exponent::<2>(radii, &boundary, Some(0.0))?) } else { None },
        free_fit: if nonzero { Some(fit_exponent::<3>(radii, &boundary, None)?) } else { None },
        boundary,
        boundary_errors,
        limit: coef[0],
        limit_residual,
        log_model_limit: log_model.value,
        log_model_residual: log_model.residual,
        scale,
        integrand_defect,
        singular: true,
    })
}

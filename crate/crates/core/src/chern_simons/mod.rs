//! The holomorphic Chern–Simons transgression between two connections on
//! a rank-2 bundle, its pairing with test forms, and the tube limits
//! that compare a flat connection with the metric one.
//!
//! All matrices are column convention (`D s = ds + θ s`), where wedge
//! products of matrix forms represent composition of endomorphisms.

mod torus;
mod tubular;

pub use torus::{random_torus_connection, random_torus_test_form, torus_domain};
pub use tubular::{
    boundary_form, log_norm_integrand, tube_boundary, tube_complement, tube_test_form, tubular_limit, ExponentFit,
    LineTube, TubularReport,
};

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::bundle::Connection;
use crate::error::{Error, Result};
use crate::forms::{dense_mat, dense_mat_add, dense_mat_d, dense_mat_scale, dense_mat_wedge, dense_trace, Field, KForm, MatForm};
use crate::integrate::{gauss_legendre_on, integrate_many, Domain, IntegralResult, QuadratureSpec};
use crate::jet::NVARS;

/// Jet order used when evaluating connections for the transgression: the
/// matrices themselves may already consume one derivative (frame changes).
pub const CS_ORDER: u8 = 2;

/// `tr(A∧(2R₀ + D₀A + ⅔A∧A))` with `A = θ₁ − θ₀`, `R₀ = dθ₀ + θ₀∧θ₀`
/// and `D₀A = dA + θ₀∧A + A∧θ₀`. Both matrices need derivative order 1.
pub fn transgression_form(theta0: &MatForm, theta1: &MatForm) -> Result<KForm> {
    let a = theta1.sub(theta0)?;
    // derivatives first; only values are needed past this point
    let (dtheta0, da) = (dense_mat_d(theta0), dense_mat_d(&a));
    let (t0, a) = (dense_mat(theta0), dense_mat(&a));
    let r0 = dense_mat_add(&dtheta0, &dense_mat_wedge(&t0, &t0));
    let d0a = dense_mat_add(&da, &dense_mat_add(&dense_mat_wedge(&t0, &a), &dense_mat_wedge(&a, &t0)));
    let inner = dense_mat_add(
        &dense_mat_add(&dense_mat_scale(&r0, C64::new(2.0, 0.0)), &d0a),
        &dense_mat_scale(&dense_mat_wedge(&a, &a), C64::new(2.0 / 3.0, 0.0)),
    );
    Ok(dense_trace(&dense_mat_wedge(&a, &inner)).to_kform(theta0.dim()))
}

/// The definition: `∫₀¹ tr(2A∧R̃(t)) dt` where `R̃(t)` is the curvature of
/// `θ₀ + tA`, computed directly, with `nodes`-point Gauss–Legendre in `t`.
pub fn t_integrated_form(theta0: &MatForm, theta1: &MatForm, nodes: usize) -> Result<KForm> {
    let a = theta1.sub(theta0)?;
    let (ts, ws) = gauss_legendre_on(nodes, 0.0, 1.0);
    let mut acc = KForm::zero(a.dim(), 3);
    for (t, w) in ts.iter().zip(&ws) {
        let theta_t = theta0.add(&a.scale_c(C64::new(*t, 0.0)))?;
        let r = Connection::curvature_of(&theta_t)?;
        acc = acc.add(&a.wedge(&r)?.trace().scale_c(C64::new(2.0 * w, 0.0)))?;
    }
    Ok(acc)
}

/// `−⅓ tr(A∧A∧A)`, the transgression when both connections are flat.
pub fn flat_form(theta0: &MatForm, theta1: &MatForm) -> Result<KForm> {
    let a = theta1.sub(theta0)?;
    Ok(a.wedge(&a)?.wedge(&a)?.trace().scale_c(C64::new(-1.0 / 3.0, 0.0)))
}

/// `−⅓ tr((A^{0,1})^∧3)`, the `(0,3)` part of the transgression when both
/// `(0,1)` parts are integrable.
pub fn form_03(theta0: &MatForm, theta1: &MatForm) -> Result<KForm> {
    let a = theta1.sub(theta0)?.type_project(0, 1)?;
    Ok(a.wedge(&a)?.wedge(&a)?.trace().scale_c(C64::new(-1.0 / 3.0, 0.0)))
}

fn same_frame(d0: &Connection, d1: &Connection) -> Result<()> {
    // the difference carries the frame check
    crate::bundle::connection_difference(d1, d0).map(|_| ())
}

/// The transgression 3-form of the pair as a field.
pub fn cs_transgression(d0: &Connection, d1: &Connection) -> Result<Field<Result<KForm>>> {
    same_frame(d0, d1)?;
    Ok(d0.theta.zip(&d1.theta, |t0, t1| transgression_form(&t0?, &t1?)))
}

/// A pairing `CS_{D₀}(D₁)(τ) = ∫ τ ∧ tr(A∧(2R₀ + D₀A + ⅔A∧A))`.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CSPairing {
    pub value: C64,
    pub error: f64,
    pub integrand: String,
    pub samples: usize,
    pub quadrature: IntegralResult,
    /// Largest pointwise change of the integrand, over the checked points,
    /// when the transgression is replaced by its `(1,2)+(0,3)` part.
    pub type_defect: f64,
}

/// Checks that `τ` is of type `(3,0)+(2,1)` at `points`.
pub fn check_test_form(tau: &Field<KForm>, points: &[[f64; NVARS]]) -> Result<()> {
    for p in points {
        let t = tau.at(p, 1);
        if t.degree() != 3 {
            return Err(Error::WrongTestFormType(format!("degree {}", t.degree())));
        }
        let kept = t.type_project(3, 0)?.add(&t.type_project(2, 1)?)?;
        let rest = t.sub(&kept)?.max_abs();
        if rest > 1e-12 * (1.0 + t.max_abs()) {
            return Err(Error::WrongTestFormType(format!("(1,2)+(0,3) part of size {rest:.3e}")));
        }
    }
    Ok(())
}

fn sample_points(domain: &Domain, count: usize) -> Vec<[f64; NVARS]> {
    // a fixed lattice in parameter space
    let k = domain.dim();
    (0..count)
        .map(|i| {
            let t: Vec<f64> = (0..k)
                .map(|a| {
                    let ax = domain.axes()[a];
                    let u = ((i as f64 + 0.5) * (0.618_033_988_749_895 + 0.31 * a as f64)).fract();
                    ax.lo + u * (ax.hi - ax.lo)
                })
                .collect();
            domain.push(&t).0
        })
        .collect()
}

pub fn cs_pair(
    d0: &Connection,
    d1: &Connection,
    tau: &Field<KForm>,
    domain: &Domain,
    spec: &QuadratureSpec,
) -> Result<CSPairing> {
    Ok(cs_pair_many(d0, d1, std::slice::from_ref(tau), domain, spec, CS_ORDER)?.swap_remove(0))
}

/// Pairs one transgression with several test forms, evaluating the
/// connections once per node at jet order `order` (1 suffices when the
/// matrices are given directly rather than through frame changes).
pub fn cs_pair_many(
    d0: &Connection,
    d1: &Connection,
    taus: &[Field<KForm>],
    domain: &Domain,
    spec: &QuadratureSpec,
    order: u8,
) -> Result<Vec<CSPairing>> {
    let cs = cs_transgression(d0, d1)?;
    let checks = sample_points(domain, 16);
    let mut type_defects = Vec::new();
    for tau in taus {
        check_test_form(tau, &checks)?;
        let mut defect: f64 = 0.0;
        for p in &checks {
            let (t, c) = (tau.at(p, order), cs.at(p, order)?);
            let kept = c.type_project(1, 2)?.add(&c.type_project(0, 3)?)?;
            defect = defect.max(t.wedge(&c)?.max_diff(&t.wedge(&kept)?));
        }
        type_defects.push(defect);
    }
    let taus2 = taus.to_vec();
    let integrand = Field::new(cs.dim(), move |z| {
        let c = cs.eval_coords(z)?;
        taus2.iter().map(|t| t.eval_coords(z).wedge(&c)).collect::<Result<Vec<_>>>()
    });
    let results = integrate_many(&integrand, taus.len(), domain, spec, order)?;
    let samples = match spec.method {
        crate::integrate::Method::Qmc => spec.resolution,
        _ => spec.resolution.pow(domain.dim() as u32),
    };
    Ok(results
        .into_iter()
        .zip(type_defects)
        .map(|(r, type_defect)| CSPairing {
            value: r.value,
            error: r.error,
            integrand: "tau ^ tr(A ^ (2 R0 + D0 A + 2/3 A ^ A))".into(),
            samples,
            quadrature: r,
            type_defect,
        })
        .collect())
}

#[cfg(test)]
mod tests;

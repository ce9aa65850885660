//! Quadrature: tensor Gauss/periodic grids and shifted-lattice QMC over
//! parameterized domains, with radial excision and `δ → 0` extrapolation.

mod domain;
mod extrapolate;
mod gauss;
mod qmc;
mod sum;

pub use domain::{Axis, Domain, SphereChart};
pub use extrapolate::{extrapolate, Extrapolation};
pub(crate) use extrapolate::least_squares;
pub use gauss::{gauss_legendre, gauss_legendre_on, periodic_rule};
pub use qmc::{mean_and_stderr, RdSequence};
pub use sum::{pairwise_sum, par_sum, par_sum_columns, par_sum_vec, CHUNK};

use std::sync::OnceLock;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{Field, KForm};
use crate::jet::NVARS;

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    PeriodicGrid,
    GaussGrid,
    Qmc,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSpec {
    pub method: Method,
    /// Nodes per axis for grids; total sample count for QMC.
    pub resolution: usize,
    /// Excision radii, strictly decreasing. Three or more entries request
    /// extrapolation to `δ = 0`.
    #[serde(default)]
    pub schedule: Vec<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    /// Independent shifts for QMC error estimation.
    #[serde(default = "default_replicates")]
    pub replicates: usize,
}

fn default_tolerance() -> f64 {
    f64::INFINITY
}

fn default_replicates() -> usize {
    8
}

impl QuadratureSpec {
    pub fn gauss(n: usize) -> Self {
        QuadratureSpec {
            method: Method::GaussGrid,
            resolution: n,
            schedule: vec![],
            seed: 0,
            tolerance: f64::INFINITY,
            replicates: 1,
        }
    }

    pub fn periodic(n: usize) -> Self {
        QuadratureSpec { method: Method::PeriodicGrid, ..QuadratureSpec::gauss(n) }
    }

    pub fn qmc(samples: usize, seed: u64) -> Self {
        QuadratureSpec {
            method: Method::Qmc,
            resolution: samples,
            seed,
            replicates: default_replicates(),
            ..QuadratureSpec::gauss(0)
        }
    }

    pub fn with_schedule(mut self, schedule: &[f64]) -> Self {
        self.schedule = schedule.to_vec();
        self
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.resolution == 0 {
            return Err(Error::Invalid("quadrature resolution must be positive".into()));
        }
        if self.method == Method::Qmc && self.replicates == 0 {
            return Err(Error::Invalid("QMC needs at least one replicate".into()));
        }
        if self.schedule.iter().any(|d| !(*d > 0.0)) || self.schedule.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::BadSchedule);
        }
        if !self.schedule.is_empty() && self.schedule.len() < 3 {
            return Err(Error::ScheduleTooShort { needed: 3, got: self.schedule.len() });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct IntegralResult {
    pub value: C64,
    pub error: f64,
    /// `(δ, value)` for each excision radius.
    pub partials: Vec<(f64, C64)>,
    pub fit_residual: Option<f64>,
}

/// Integrates a top-degree form field over `domain`. Fields are evaluated
/// with derivative order `order`.
pub fn integrate(field: &Field<KForm>, domain: &Domain, spec: &QuadratureSpec, order: u8) -> Result<IntegralResult> {
    single(integrate_with(&|p: &[f64; NVARS]| Ok(vec![field.at(p, order)]), 1, domain, spec))
}

/// As [`integrate`], for fields that may fail (e.g. at zeros of a map).
pub fn integrate_fallible(
    field: &Field<Result<KForm>>,
    domain: &Domain,
    spec: &QuadratureSpec,
    order: u8,
) -> Result<IntegralResult> {
    single(integrate_with(&|p: &[f64; NVARS]| Ok(vec![field.at(p, order)?]), 1, domain, spec))
}

/// Integrates `width` forms sharing one evaluation per point, on the same
/// nodes as separate calls would use.
pub fn integrate_many(
    field: &Field<Result<Vec<KForm>>>,
    width: usize,
    domain: &Domain,
    spec: &QuadratureSpec,
    order: u8,
) -> Result<Vec<IntegralResult>> {
    integrate_with(&|p: &[f64; NVARS]| field.at(p, order), width, domain, spec)
}

fn single(r: Result<Vec<IntegralResult>>) -> Result<IntegralResult> {
    Ok(r?.swap_remove(0))
}

type PointForms<'a> = dyn Fn(&[f64; NVARS]) -> Result<Vec<KForm>> + Sync + 'a;

fn integrate_with(form: &PointForms, width: usize, domain: &Domain, spec: &QuadratureSpec) -> Result<Vec<IntegralResult>> {
    spec.validate()?;
    if spec.schedule.is_empty() {
        let (values, errors) = integrate_axes(form, width, domain, domain.axes(), spec)?;
        return values
            .into_iter()
            .zip(errors)
            .map(|(value, error)| finish(IntegralResult { value, error, partials: vec![], fit_residual: None }, spec))
            .collect();
    }
    if domain.radial().is_none() {
        return Err(Error::Invalid(format!("domain {} has no radial axis to excise", domain.name)));
    }
    let mut partials = vec![Vec::new(); width];
    let mut errors = vec![0.0f64; width];
    for &delta in &spec.schedule {
        let (v, e) = integrate_axes(form, width, domain, &domain.excised_axes(delta), spec)?;
        for k in 0..width {
            partials[k].push((delta, v[k]));
            errors[k] = errors[k].max(e[k]);
        }
    }
    partials
        .into_iter()
        .zip(errors)
        .map(|(partials, error)| {
            let fit = extrapolate(&partials)?;
            // the spread between the extrapolant and the finest partial
            // bounds the truncation error of the model
            let error = error.max(fit.residual);
            finish(IntegralResult { value: fit.value, error, partials, fit_residual: Some(fit.residual) }, spec)
        })
        .collect()
}

fn finish(r: IntegralResult, spec: &QuadratureSpec) -> Result<IntegralResult> {
    if !(r.error <= spec.tolerance) {
        return Err(Error::NonConvergent { estimate: r.error, tolerance: spec.tolerance });
    }
    Ok(r)
}

fn evaluate(form: &PointForms, width: usize, domain: &Domain, t: &[f64], failure: &OnceLock<Error>) -> Vec<C64> {
    let (p, tangents) = domain.push(t);
    let out = form(&p).and_then(|fs| fs.iter().map(|f| f.eval_on(&tangents)).collect::<Result<Vec<_>>>());
    match out {
        Ok(v) => v,
        Err(e) => {
            let _ = failure.set(e);
            vec![C64::new(0.0, 0.0); width]
        }
    }
}

fn integrate_axes(
    form: &PointForms,
    width: usize,
    domain: &Domain,
    axes: &[Axis],
    spec: &QuadratureSpec,
) -> Result<(Vec<C64>, Vec<f64>)> {
    let failure = OnceLock::new();
    let out = match spec.method {
        Method::GaussGrid | Method::PeriodicGrid => {
            let n = spec.resolution;
            let fine = grid_sum(form, width, domain, axes, n, spec.method, &failure);
            let errors = if n >= 2 {
                let coarse = grid_sum(form, width, domain, axes, n / 2, spec.method, &failure);
                fine.iter().zip(&coarse).map(|(f, c)| (f - c).norm()).collect()
            } else {
                vec![f64::INFINITY; width]
            };
            (fine, errors)
        }
        Method::Qmc => {
            let k = axes.len();
            let seqs = RdSequence::shifted(k, spec.seed, spec.replicates);
            let per = (spec.resolution / spec.replicates).max(1);
            let vol: f64 = axes.iter().map(|a| a.hi - a.lo).product();
            let mut re = vec![Vec::new(); width];
            let mut im = vec![Vec::new(); width];
            for seq in &seqs {
                let s = par_sum_columns(per, width, |i| {
                    let mut u = [0.0; NVARS];
                    seq.point(i as u64, &mut u[..k]);
                    let t: Vec<f64> = (0..k).map(|a| axes[a].lo + u[a] * (axes[a].hi - axes[a].lo)).collect();
                    evaluate(form, width, domain, &t, &failure)
                });
                for (j, v) in s.iter().enumerate() {
                    let v = v * (vol / per as f64);
                    re[j].push(v.re);
                    im[j].push(v.im);
                }
            }
            let mut values = Vec::new();
            let mut errors = Vec::new();
            for j in 0..width {
                let (mr, er) = mean_and_stderr(&re[j]);
                let (mi, ei) = mean_and_stderr(&im[j]);
                values.push(C64::new(mr, mi));
                errors.push(er.hypot(ei));
            }
            (values, errors)
        }
    };
    match failure.into_inner() {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

fn grid_sum(
    form: &PointForms,
    width: usize,
    domain: &Domain,
    axes: &[Axis],
    n: usize,
    method: Method,
    failure: &OnceLock<Error>,
) -> Vec<C64> {
    let rules: Vec<(Vec<f64>, Vec<f64>)> = axes
        .iter()
        .map(|a| {
            if a.periodic || method == Method::PeriodicGrid {
                periodic_rule(n, a.lo, a.hi)
            } else {
                gauss_legendre_on(n, a.lo, a.hi)
            }
        })
        .collect();
    let total = n.pow(axes.len() as u32);
    par_sum_columns(total, width, |mut idx| {
        let mut t = [0.0; NVARS];
        let mut w = 1.0;
        for (a, (x, wx)) in rules.iter().enumerate() {
            let i = idx % n;
            idx /= n;
            t[a] = x[i];
            w *= wx[i];
        }
        let mut v = evaluate(form, width, domain, &t[..axes.len()], failure);
        v.iter_mut().for_each(|x| *x *= w);
        v
    })
}

#[cfg(test)]
mod tests;

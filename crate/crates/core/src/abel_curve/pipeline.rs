//! From `g` to a meromorphic `f`: loop windings and the integral class
//! `ξ`, the `∂̄`-solve for `γ`, and `f = exp ∫ψ` with `ψ = g⁻¹dg + ξ + dγ`.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rustfft::FftPlanner;
use serde::Serialize;

use super::lattice::Lattice;
use super::quotient::{build_g, SmoothQuotientMap, TorusDivisor, Twist};
use crate::error::{Error, Result};
use crate::forms::{Cov, KForm};
use crate::integrate::{gauss_legendre_on, pairwise_sum, periodic_rule};
use crate::jet::{seed, Jet, NVARS};

const I: C64 = C64::new(0.0, 1.0);
const WINDING_TOL: f64 = 1e-6;
const MEAN_TOL: f64 = 1e-8;
const PERIOD_TOL: f64 = 1e-5;

fn jet_at(z: C64, order: u8) -> Jet {
    let mut p = [0.0; NVARS];
    p[0] = z.re;
    p[1] = z.im;
    seed(&p, 1, order)[0]
}

/// Torus coordinates of `z − base` as jets.
fn rel_coords(lattice: &Lattice, z: &Jet, base: C64) -> (Jet, Jet) {
    super::quotient::torus_coords(lattice, &(*z - base))
}

/// `∮ form` along `t ↦ z(t)`, `t ∈ [0, 1)`, for a closed smooth curve,
/// refining the periodic rule until two levels agree.
fn closed_contour(form: &dyn Fn(&Jet) -> Result<KForm>, curve: &dyn Fn(f64) -> (C64, C64)) -> Result<C64> {
    let eval = |n: usize| -> Result<C64> {
        let (t, w) = periodic_rule(n, 0.0, 1.0);
        let mut vals = Vec::with_capacity(n);
        for (t, w) in t.iter().zip(&w) {
            let (z, dz) = curve(*t);
            let f = form(&jet_at(z, 1))?;
            vals.push(f.eval_on(&[[dz.re, dz.im, 0.0, 0.0, 0.0, 0.0]])? * *w);
        }
        Ok(pairwise_sum(&vals))
    };
    let mut n = 64;
    let mut prev = eval(n)?;
    while n < 1 << 15 {
        n *= 2;
        let next = eval(n)?;
        if (next - prev).norm() < 1e-11 * (1.0 + next.norm()) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NonConvergent { estimate: (eval(n)? - prev).norm(), tolerance: 1e-11 })
}

/// A base corner whose edge loops `base + t` and `base + tτ` and whose
/// grid stay as far as possible from every divisor point.
pub fn choose_base(lattice: &Lattice, points: &[C64]) -> C64 {
    let frac_dist = |a: f64| (a - a.round()).abs();
    let mut best = (f64::NEG_INFINITY, C64::new(0.0, 0.0));
    for i in 0..32 {
        for j in 0..32 {
            let (x0, y0) = ((i as f64 + 0.5) / 32.0, (j as f64 + 0.5) / 32.0);
            let score = points
                .iter()
                .map(|&p| {
                    let (x, y) = lattice.coords(p);
                    frac_dist(x - x0).min(frac_dist(y - y0))
                })
                .fold(f64::INFINITY, f64::min);
            if score > best.0 + 1e-12 {
                best = (score, lattice.point(x0, y0));
            }
        }
    }
    best.1
}

fn all_points(g: &SmoothQuotientMap) -> Vec<C64> {
    g.p.points.iter().chain(&g.q.points).map(|&(z, _)| z).collect()
}

/// Windings of `g` around the two edge loops at `base`, and the class
/// `ξ = −2πi(m dx + n dy)` that makes `α^{0,1} − ξ^{0,1}` mean-free when
/// `Q ~ P`.
#[derive(Clone, Debug, Serialize)]
pub struct PeriodClass {
    pub base: C64,
    /// `(1/2πi)∮ g⁻¹dg` along `base + t` and `base + tτ`.
    pub raw: [C64; 2],
    pub windings: [i64; 2],
    /// Torus coordinates of `Σ(qᵢ − pᵢ)` with representatives in the
    /// parallelogram at `base`.
    pub reduced_sum: [f64; 2],
    /// `m = k_A + s₂`, `n = k_B − s₁` for windings `k` and reduced sum
    /// `s₁ + s₂τ`, from `∫_X g⁻¹dg ∧ dz = 2πi(τk_A − k_B + s₁ + s₂τ)`.
    pub m: i64,
    pub n: i64,
}

impl PeriodClass {
    /// `ξ` at a jet point.
    pub fn xi(&self, lattice: &Lattice, z: &Jet) -> KForm {
        let (x, y) = rel_coords(lattice, z, self.base);
        KForm::scalar(1, (x * self.m as f64 + y * self.n as f64) * (-2.0 * PI * I)).d()
    }

    /// The primitive `−2πi(m x + n y)` of `ξ`.
    pub fn xi_primitive(&self, lattice: &Lattice, z: &Jet) -> Jet {
        let (x, y) = rel_coords(lattice, z, self.base);
        (x * self.m as f64 + y * self.n as f64) * (-2.0 * PI * I)
    }
}

pub fn periods_and_class(g: &SmoothQuotientMap, base: C64) -> Result<PeriodClass> {
    let l = g.lattice;
    let form = |z: &Jet| g.log_derivative(z);
    let a = closed_contour(&form, &|t| (base + t, C64::new(1.0, 0.0)))? / (2.0 * PI * I);
    let b = closed_contour(&form, &|t| (base + l.tau * t, l.tau))? / (2.0 * PI * I);
    let mut windings = [0; 2];
    for (k, w) in [a, b].iter().enumerate() {
        windings[k] = w.re.round() as i64;
        if (w - windings[k] as f64).norm() > WINDING_TOL {
            return Err(Error::NormalizationClassMismatch(format!("loop {k} of g⁻¹dg gives {w}·2πi")));
        }
    }
    let reduced: C64 = g.q.points.iter().map(|&(z, m)| l.reduce(z, base).0 * m as f64).sum::<C64>()
        - g.p.points.iter().map(|&(z, m)| l.reduce(z, base).0 * m as f64).sum::<C64>();
    let (s1, s2) = l.coords(reduced);
    Ok(PeriodClass {
        base,
        raw: [a, b],
        windings,
        reduced_sum: [s1, s2],
        m: windings[0] + s2.round() as i64,
        n: windings[1] - s1.round() as i64,
    })
}

/// A solution of `∂̄γ = ρ` on the torus as a trigonometric polynomial in
/// the coordinates of `z − base`.
#[derive(Clone, Debug, Serialize)]
pub struct Gamma {
    pub lattice: Lattice,
    pub base: C64,
    pub grid: usize,
    pub modes: Vec<([i64; 2], C64)>,
    /// Mean of `ρ`, which must vanish for solvability.
    pub mean: C64,
    /// `max |∂̄γ − ρ|` over checked grid nodes.
    pub residual: f64,
}

impl Gamma {
    pub fn value(&self, z: &Jet) -> Jet {
        let (x, y) = rel_coords(&self.lattice, z, self.base);
        let mut out = Jet::real(0.0);
        for &([k1, k2], c) in &self.modes {
            out += ((x * k1 as f64 + y * k2 as f64) * (2.0 * PI * I)).exp() * c;
        }
        out
    }
}

fn signed_freq(i: usize, n: usize) -> i64 {
    if i < n.div_ceil(2) {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// `(1/n²)Σ v e^{−2πi(k·u)}` on an `n × n` grid stored row-major in `y`.
fn fft2(data: &mut [C64], n: usize) {
    let fft = FftPlanner::new().plan_fft_forward(n);
    for row in data.chunks_mut(n) {
        fft.process(row);
    }
    let mut col = vec![C64::new(0.0, 0.0); n];
    for i in 0..n {
        for j in 0..n {
            col[j] = data[j * n + i];
        }
        fft.process(&mut col);
        for j in 0..n {
            data[j * n + i] = col[j];
        }
    }
    let s = 1.0 / (n * n) as f64;
    data.iter_mut().for_each(|v| *v *= s);
}

/// Solves `∂̄γ = ρ` spectrally, where `rho` gives the `dz̄`-coefficient of a
/// (0,1)-form. On the torus `∂̄e^{2πi(k₁x+k₂y)} = π(τk₁ − k₂)/Im τ ·
/// e^{2πi(k₁x+k₂y)}`, so the constant mode is the only obstruction.
pub fn dbar_solve(lattice: &Lattice, rho: &dyn Fn(&Jet) -> Result<Jet>, base: C64, n: usize) -> Result<Gamma> {
    if n < 4 {
        return Err(Error::Invalid("∂̄-solve grid needs at least 4 nodes per axis".into()));
    }
    let node = |i: usize, j: usize| base + lattice.point(i as f64 / n as f64, j as f64 / n as f64);
    let mut data = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            data.push(rho(&jet_at(node(i, j), 1))?.v);
        }
    }
    let sup = data.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let samples = data.clone();
    fft2(&mut data, n);
    let mean = data[0];
    if mean.norm() > MEAN_TOL * sup.max(1.0) {
        return Err(Error::NotAbelJacobiEquivalent(mean.norm()));
    }
    let mut modes = Vec::new();
    let top = data.iter().skip(1).map(|v| v.norm()).fold(0.0, f64::max);
    for j in 0..n {
        for i in 0..n {
            let c = data[j * n + i];
            let k = [signed_freq(i, n), signed_freq(j, n)];
            if k == [0, 0] || c.norm() <= 1e-15 * top {
                continue;
            }
            let symbol = PI * (lattice.tau * k[0] as f64 - k[1] as f64) / lattice.tau.im;
            modes.push((k, c / symbol));
        }
    }
    let mut gamma = Gamma { lattice: *lattice, base, grid: n, modes, mean, residual: 0.0 };
    let stride = (n * n / 1024).max(1);
    let mut residual: f64 = 0.0;
    for idx in (0..n * n).step_by(stride) {
        let (i, j) = (idx % n, idx / n);
        let dg = gamma.value(&jet_at(node(i, j), 1)).d_zbar(0).v;
        residual = residual.max((dg - samples[idx]).norm());
    }
    gamma.residual = residual;
    Ok(gamma)
}

/// `ψ = g⁻¹dg + ξ + dγ` and `f = g·exp(Ξ + γ)` with `dΞ = ξ`, together with
/// the checks that `f = exp ∫ψ` is single-valued and meromorphic with
/// `div f = Q − P`.
#[derive(Clone, Debug, Serialize)]
pub struct AbelFunction {
    pub g: SmoothQuotientMap,
    pub class: PeriodClass,
    pub gamma: Gamma,
    /// `max |ψ^{0,1}|` over sample points.
    pub psi01_max: f64,
    /// `max |dψ|` over sample points.
    pub dpsi_max: f64,
    /// `(1/2πi)∮ψ` along the two edge loops.
    pub periods: [C64; 2],
    pub period_defect: f64,
    /// `max |f(z + ω) − f(z)| / |f(z)|` for `ω ∈ {1, τ}`.
    pub periodicity_defect: f64,
    /// `(point, expected, measured)` winding of `f` around each divisor
    /// point.
    pub windings: Vec<(C64, i64, f64)>,
    pub winding_defect: f64,
    /// Mismatch of `∫ψ` along segments against `log f(b)/f(a)` mod `2πi`.
    pub path_defect: f64,
}

impl AbelFunction {
    pub fn psi(&self, z: &Jet) -> Result<KForm> {
        let l = &self.g.lattice;
        let dgamma = KForm::scalar(1, self.gamma.value(z)).d();
        self.g.log_derivative(z)?.add(&self.class.xi(l, z))?.add(&dgamma)
    }

    pub fn f(&self, z: &Jet) -> Result<Jet> {
        let e = (self.class.xi_primitive(&self.g.lattice, z) + self.gamma.value(z)).exp();
        Ok(self.g.value(z)? * e)
    }
}

fn sample_points(lattice: &Lattice, base: C64, avoid: &[C64], count: usize) -> Vec<C64> {
    let mut out = Vec::new();
    for j in 0..count {
        for i in 0..count {
            let z = base + lattice.point((i as f64 + 0.37) / count as f64, (j as f64 + 0.61) / count as f64);
            if avoid.iter().all(|&p| lattice.distance_to_lattice(z - p) > 0.03) {
                out.push(z);
            }
        }
    }
    out
}

fn wrap_2pi_i(v: C64) -> C64 {
    v - 2.0 * PI * I * (v.im / (2.0 * PI)).round()
}

pub fn build_psi_and_f(g: &SmoothQuotientMap, class: &PeriodClass, gamma: &Gamma) -> Result<AbelFunction> {
    let l = g.lattice;
    let base = class.base;
    let mut af = AbelFunction {
        g: g.clone(),
        class: class.clone(),
        gamma: gamma.clone(),
        psi01_max: 0.0,
        dpsi_max: 0.0,
        periods: [C64::new(0.0, 0.0); 2],
        period_defect: 0.0,
        periodicity_defect: 0.0,
        windings: vec![],
        winding_defect: 0.0,
        path_defect: 0.0,
    };
    let pts = all_points(g);
    let samples = sample_points(&l, base, &pts, 7);
    let dzbar = Cov::Dzbar(0).bit_mask();
    for &z in &samples {
        af.psi01_max = af.psi01_max.max(af.psi(&jet_at(z, 1))?.coeff(dzbar).norm());
        af.dpsi_max = af.dpsi_max.max(af.psi(&jet_at(z, 2))?.d().max_abs());
        let fz = af.f(&jet_at(z, 0))?.v;
        for w in [C64::new(1.0, 0.0), l.tau] {
            let fw = af.f(&jet_at(z + w, 0))?.v;
            af.periodicity_defect = af.periodicity_defect.max((fw - fz).norm() / fz.norm());
        }
    }

    let view = af.clone();
    let psi = |z: &Jet| view.psi(z);
    let a = closed_contour(&psi, &|t| (base + t, C64::new(1.0, 0.0)))? / (2.0 * PI * I);
    let b = closed_contour(&psi, &|t| (base + l.tau * t, l.tau))? / (2.0 * PI * I);
    af.periods = [a, b];
    af.period_defect = [a, b].iter().map(|w| (w - w.re.round()).norm()).fold(0.0, f64::max);
    if af.period_defect > PERIOD_TOL {
        return Err(Error::NormalizationClassMismatch(format!("ψ has periods {a}, {b} in units of 2πi")));
    }

    // distinct divisor locations with their net multiplicity
    let mut net: Vec<(C64, i64)> = Vec::new();
    for (sign, d) in [(1, &g.q), (-1, &g.p)] {
        for &(z, m) in &d.points {
            match net.iter_mut().find(|(w, _)| l.distance_to_lattice(*w - z) < 1e-12) {
                Some(e) => e.1 += sign * m as i64,
                None => net.push((z, sign * m as i64)),
            }
        }
    }
    let mut sep = 0.05f64;
    for (i, &(a, _)) in net.iter().enumerate() {
        for &(b, _) in &net[i + 1..] {
            sep = sep.min(0.3 * l.distance_to_lattice(a - b));
        }
    }
    for &(c, expected) in &net {
        let w = closed_contour(&psi, &|t| {
            let e = (2.0 * PI * I * t).exp();
            (c + sep * e, 2.0 * PI * I * sep * e)
        })? / (2.0 * PI * I);
        af.winding_defect = af.winding_defect.max((w - expected as f64).norm());
        af.windings.push((c, expected, w.re));
    }

    // composite Gauss rule: the poles may sit a short distance off the path
    let (nodes, weights): (Vec<f64>, Vec<f64>) = (0..16)
        .flat_map(|k| {
            let (t, w) = gauss_legendre_on(16, k as f64 / 16.0, (k + 1) as f64 / 16.0);
            t.into_iter().zip(w)
        })
        .unzip();
    for pair in samples.windows(2).step_by(3) {
        let (za, zb) = (pair[0], pair[1]);
        let close = (0..=64).any(|k| {
            let z = za + (zb - za) * (k as f64 / 64.0);
            pts.iter().any(|&p| l.distance_to_lattice(z - p) < 0.05)
        });
        if close {
            continue;
        }
        let mut vals = Vec::new();
        for (t, w) in nodes.iter().zip(&weights) {
            let d = zb - za;
            let form = view.psi(&jet_at(za + d * *t, 1))?;
            vals.push(form.eval_on(&[[d.re, d.im, 0.0, 0.0, 0.0, 0.0]])? * *w);
        }
        let integral = pairwise_sum(&vals);
        let logs = (af.f(&jet_at(zb, 0))?.v / af.f(&jet_at(za, 0))?.v).ln();
        af.path_defect = af.path_defect.max(wrap_2pi_i(integral - logs).norm());
    }
    Ok(af)
}

/// The pipeline either constructs `f` or reports where it is obstructed.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum AbelOutcome {
    Constructed(Box<AbelFunction>),
    Obstructed { stage: String, detail: String },
}

/// `g`, its class, the `∂̄`-solve on an `n × n` grid and `f`.
pub fn run_pipeline(lattice: &Lattice, p: &TorusDivisor, q: &TorusDivisor, twist: &Twist, n: usize) -> Result<AbelOutcome> {
    let g = build_g(lattice, p, q, twist)?;
    let base = choose_base(lattice, &all_points(&g));
    let class = match periods_and_class(&g, base) {
        Ok(c) => c,
        Err(e @ Error::NormalizationClassMismatch(_)) => {
            return Ok(AbelOutcome::Obstructed { stage: "periods".into(), detail: e.to_string() })
        }
        Err(e) => return Err(e),
    };
    let dzbar = Cov::Dzbar(0).bit_mask();
    let rho = |z: &Jet| -> Result<Jet> {
        let xi01 = class.xi(lattice, z).coeff_jet(dzbar).copied().unwrap_or(Jet::real(0.0));
        Ok(g.dbar_log(z)? * -1.0 - xi01)
    };
    let gamma = match dbar_solve(lattice, &rho, base, n) {
        Ok(gm) => gm,
        Err(e @ Error::NotAbelJacobiEquivalent(_)) => {
            return Ok(AbelOutcome::Obstructed { stage: "dbar-solve".into(), detail: e.to_string() })
        }
        Err(e) => return Err(e),
    };
    match build_psi_and_f(&g, &class, &gamma) {
        Ok(f) => Ok(AbelOutcome::Constructed(Box::new(f))),
        Err(e @ Error::NormalizationClassMismatch(_)) => {
            Ok(AbelOutcome::Obstructed { stage: "periods of ψ".into(), detail: e.to_string() })
        }
        Err(e) => Err(e),
    }
}

/// `max |g⁻¹∂̄g|` over an `n × n` grid outside discs of `radius` around
/// the divisor points.
pub fn alpha01_sup(g: &SmoothQuotientMap, base: C64, n: usize, radius: f64) -> Result<f64> {
    let l = g.lattice;
    let pts = all_points(g);
    let mut sup: f64 = 0.0;
    for j in 0..n {
        for i in 0..n {
            let z = base + l.point(i as f64 / n as f64, j as f64 / n as f64);
            if pts.iter().any(|&p| l.distance_to_lattice(z - p) < radius) {
                continue;
            }
            sup = sup.max(g.dbar_log(&jet_at(z, 1))?.v.norm());
        }
    }
    Ok(sup)
}

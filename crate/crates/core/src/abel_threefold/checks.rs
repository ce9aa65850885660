//! The two pairings of `α_PQ` as a current, by 6-dimensional QMC with
//! Hopf-coordinate tubes around the lines so the integrand stays bounded.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rand::Rng;
use serde::Serialize;

use super::{LineDivisor, LocalModel};
use crate::error::{Error, Result};
use crate::forms::{Coords, Field, KForm};
use crate::integrate::{gauss_legendre_on, least_squares, mean_and_stderr, par_sum_columns, periodic_rule, Method, QuadratureSpec, RdSequence};
use crate::jet::Jet;

/// Radius of the tube integrated in polar coordinates around each line;
/// excision radii must stay below it.
pub const TUBE_RADIUS: f64 = 0.4;

/// `b(z) = (1 − |z − c|²/ρ²)⁴` inside the ball, zero outside.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Bump {
    pub center: [C64; 3],
    pub radius: f64,
}

impl Bump {
    pub fn new(center: [C64; 3], radius: f64) -> Self {
        Bump { center, radius }
    }

    /// Centred on a point of `line` at height `z₃ = 0`.
    pub fn on_line(line: &LineDivisor, radius: f64) -> Self {
        Bump::new([line.c[0], line.c[1], C64::new(0.0, 0.0)], radius)
    }

    /// A bump of radius in `[0.5, 0.9]` centred within `0.3` of `line`.
    pub fn random_near(rng: &mut impl Rng, line: &LineDivisor) -> Self {
        let mut off = || C64::new(rng.gen_range(-0.15..0.15), rng.gen_range(-0.15..0.15));
        let center = [line.c[0] + off(), line.c[1] + off(), off()];
        Bump::new(center, rng.gen_range(0.5..0.9))
    }

    fn s(&self, z: [C64; 3]) -> f64 {
        (0..3).map(|k| (z[k] - self.center[k]).norm_sqr()).sum::<f64>() / (self.radius * self.radius)
    }

    pub fn value(&self, z: [C64; 3]) -> f64 {
        let s = self.s(z);
        if s >= 1.0 {
            0.0
        } else {
            (1.0 - s).powi(4)
        }
    }

    /// `∂b/∂(x₁, y₁, x₂, y₂, x₃, y₃)`.
    pub fn gradient(&self, z: [C64; 3]) -> [f64; 6] {
        let s = self.s(z);
        if s >= 1.0 {
            return [0.0; 6];
        }
        let f = -8.0 * (1.0 - s).powi(3) / (self.radius * self.radius);
        let mut g = [0.0; 6];
        for k in 0..3 {
            let d = z[k] - self.center[k];
            g[2 * k] = f * d.re;
            g[2 * k + 1] = f * d.im;
        }
        g
    }

    /// `b` as a jet field, for cross-checks of the closed-form integrands.
    pub fn field(&self) -> Field<Jet> {
        let b = *self;
        Field::new(3, move |z: &Coords| {
            let mut s = Jet::real(0.0);
            for k in 0..3 {
                s += (z[k] - b.center[k]).norm_sqr();
            }
            let t = s * (-1.0 / (b.radius * b.radius)) + 1.0;
            if t.v.re <= 0.0 {
                Jet::real(0.0)
            } else {
                t.powi(4)
            }
        })
    }

    /// `b·dx₃∧dy₃` as a form field.
    pub fn vertical_form(&self) -> Field<KForm> {
        self.field().map(|b| {
            let area = KForm::real_covector(3, 4).wedge(&KForm::real_covector(3, 5)).expect("degree 2");
            area.scale(&b)
        })
    }
}

/// `∫_line β` for `β = b·dx₃∧dy₃`, with the line oriented by `z₃`.
pub fn line_integral(bump: &Bump, line: &LineDivisor, n: usize) -> f64 {
    let d2 = line.distance([bump.center[0], bump.center[1]]).powi(2);
    let r2 = bump.radius * bump.radius - d2;
    if r2 <= 0.0 {
        return 0.0;
    }
    let (rs, wr) = gauss_legendre_on(n, 0.0, r2.sqrt());
    let (ts, wt) = periodic_rule(n, 0.0, 2.0 * PI);
    let mut acc = 0.0;
    for (r, w1) in rs.iter().zip(&wr) {
        for (t, w2) in ts.iter().zip(&wt) {
            let z3 = bump.center[2] + C64::from_polar(*r, *t);
            acc += w1 * w2 * r * bump.value([line.c[0], line.c[1], z3]);
        }
    }
    acc
}

struct Region {
    /// Centre of the 4-ball in `(z₁, z₂)`.
    center: [C64; 2],
    radius: f64,
    /// Tubes are integrated from the line outward; the outer region skips
    /// points inside any tube.
    tube: bool,
    samples: usize,
}

struct QmcOutcome {
    direct: C64,
    error: f64,
    partials: Vec<(f64, C64)>,
    mass: f64,
    samples: usize,
}

type PointValue<'a> = dyn Fn([C64; 2], C64) -> Result<C64> + Sync + 'a;

/// `∫ value d⁴w d²z₃` over the support of `bump`, split into a tube of
/// radius [`TUBE_RADIUS`] around each line meeting the support and the
/// remainder; the tubes use `w = c + r(cos η e^{iξ₁}, sin η e^{iξ₂})` so the
/// `r³` volume factor absorbs the `r⁻³` singularity.
fn qmc_integrate(model: &LocalModel, bump: &Bump, spec: &QuadratureSpec, value: &PointValue) -> Result<QmcOutcome> {
    spec.validate()?;
    if spec.method != Method::Qmc {
        return Err(Error::Invalid("the threefold pairings are integrated by QMC".into()));
    }
    if spec.schedule.first().is_some_and(|&d| d >= TUBE_RADIUS) {
        return Err(Error::Invalid(format!("excision radii must stay below the tube radius {TUBE_RADIUS}")));
    }
    let mut lines = vec![model.q];
    if !model.is_trivial() {
        lines.push(model.p);
    }
    let bc = [bump.center[0], bump.center[1]];
    if lines.len() == 2 && model.p.distance(model.q.c) < 2.0 * TUBE_RADIUS {
        return Err(Error::Invalid("lines closer than two tube radii".into()));
    }
    let tubes: Vec<[C64; 2]> =
        lines.iter().filter(|l| l.distance(bc) < bump.radius + TUBE_RADIUS).map(|l| l.c).collect();
    let total = spec.resolution;
    let mut regions = vec![Region {
        center: bc,
        radius: bump.radius,
        tube: false,
        samples: if tubes.is_empty() { total } else { total / 2 },
    }];
    for &c in &tubes {
        regions.push(Region { center: c, radius: TUBE_RADIUS, tube: true, samples: total / (2 * tubes.len()) });
    }
    let nd = spec.schedule.len();
    // columns: δ = 0, each excision radius, unsigned mass
    let width = nd + 2;
    let failure = std::sync::OnceLock::new();
    let mut per_rep: Vec<Vec<C64>> = vec![vec![C64::new(0.0, 0.0); width]; spec.replicates];
    for (ri, region) in regions.iter().enumerate() {
        let seqs = RdSequence::shifted(6, spec.seed.wrapping_add(ri as u64 * 0x9e37_79b9), spec.replicates);
        let per = (region.samples / spec.replicates).max(1);
        let rho3 = bump.radius;
        let vol = region.radius * (PI / 2.0) * (2.0 * PI) * (2.0 * PI) * PI * rho3 * rho3;
        for (rep, seq) in seqs.iter().enumerate() {
            let sums = par_sum_columns(per, width, |i| {
                let mut u = [0.0; 6];
                seq.point(i as u64, &mut u);
                let r = region.radius * u[0];
                let (eta, x1, x2) = (PI / 2.0 * u[1], 2.0 * PI * u[2], 2.0 * PI * u[3]);
                let w = [
                    region.center[0] + C64::from_polar(r * eta.cos(), x1),
                    region.center[1] + C64::from_polar(r * eta.sin(), x2),
                ];
                let z3 = bump.center[2] + C64::from_polar(rho3 * u[4].sqrt(), 2.0 * PI * u[5]);
                let mut out = vec![C64::new(0.0, 0.0); width];
                if bump.value([w[0], w[1], z3]) == 0.0 {
                    return out;
                }
                if !region.tube && tubes.iter().any(|t| (w[0] - t[0]).norm_sqr() + (w[1] - t[1]).norm_sqr() < TUBE_RADIUS * TUBE_RADIUS) {
                    return out;
                }
                let jac = r.powi(3) * eta.sin() * eta.cos();
                let v = match value(w, z3) {
                    Ok(v) if v.is_finite() => v * jac,
                    Ok(_) => {
                        let _ = failure.set(Error::SingularEvaluation(format!("non-finite integrand at {w:?}")));
                        return out;
                    }
                    Err(e) => {
                        let _ = failure.set(e);
                        return out;
                    }
                };
                out[0] = v;
                for (k, &d) in spec.schedule.iter().enumerate() {
                    if !region.tube || r >= d {
                        out[k + 1] = v;
                    }
                }
                out[nd + 1] = C64::new(v.norm(), 0.0);
                out
            });
            for (acc, s) in per_rep[rep].iter_mut().zip(&sums) {
                *acc += s * (vol / per as f64);
            }
        }
    }
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let column = |k: usize| -> (C64, f64) {
        let re: Vec<f64> = per_rep.iter().map(|v| v[k].re).collect();
        let im: Vec<f64> = per_rep.iter().map(|v| v[k].im).collect();
        let (mr, er) = mean_and_stderr(&re);
        let (mi, ei) = mean_and_stderr(&im);
        (C64::new(mr, mi), er.hypot(ei))
    };
    let (direct, error) = column(0);
    let partials = (0..nd).map(|k| (spec.schedule[k], column(k + 1).0)).collect();
    Ok(QmcOutcome {
        direct,
        error,
        partials,
        mass: column(nd + 1).0.re,
        samples: regions.iter().map(|r| (r.samples / spec.replicates).max(1) * spec.replicates).sum(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalizationReport {
    /// `⅓∫_X g*Θ ∧ dβ`, with the tubes integrated down to the lines.
    pub lhs: f64,
    pub lhs_error: f64,
    /// `(δ, value)` with tubes of radius `δ` removed.
    pub partials: Vec<(f64, f64)>,
    /// `v` from fitting `v + aδ² + bδ⁴` to the partials; the removed part
    /// is even in `δ` because the bump is smooth across the line.
    pub extrapolated: Option<f64>,
    /// `8π²(∫_Q β − ∫_P β)`.
    pub rhs: f64,
    pub q_integral: f64,
    pub p_integral: f64,
    /// Orientation sign applied to `rhs` before forming the ratio.
    pub sign: f64,
    /// `lhs / (sign·rhs)`, absent when both sides are below the noise.
    pub ratio: Option<f64>,
    pub inconclusive: bool,
    pub samples: usize,
}

/// `⅓∫_X g*tr((h⁻¹dh)^∧3) ∧ dβ` against `8π²(∫_Q β − ∫_P β)` for
/// `β = b·dx₃∧dy₃`.
pub fn localization_check(model: &LocalModel, bump: &Bump, spec: &QuadratureSpec, sign: f64) -> Result<LocalizationReport> {
    let value = |w: [C64; 2], z3: C64| -> Result<C64> {
        let k = model.kernel_raw(w)?;
        let g = bump.gradient([w[0], w[1], z3]);
        Ok(C64::new((0..4).map(|i| k[i] * g[i]).sum::<f64>() / 3.0, 0.0))
    };
    let out = qmc_integrate(model, bump, spec, &value)?;
    let lhs = out.direct.re;
    let extrapolated = if out.partials.len() >= 3 {
        let rows: Vec<[f64; 3]> = out.partials.iter().map(|p| [1.0, p.0 * p.0, p.0.powi(4)]).collect();
        let ys: Vec<C64> = out.partials.iter().map(|p| p.1).collect();
        Some(least_squares(&rows, &ys)?.0[0].re)
    } else {
        None
    };
    let q_integral = line_integral(bump, &model.q, 24);
    let p_integral = if model.is_trivial() { q_integral } else { line_integral(bump, &model.p, 24) };
    let rhs = 8.0 * PI * PI * (q_integral - p_integral);
    let noise = 3.0 * out.error + 1e-12;
    let inconclusive = rhs.abs() < noise && lhs.abs() < noise;
    Ok(LocalizationReport {
        lhs,
        lhs_error: out.error,
        partials: out.partials.iter().map(|&(d, v)| (d, v.re)).collect(),
        extrapolated,
        rhs,
        q_integral,
        p_integral,
        sign,
        ratio: (!inconclusive && rhs != 0.0).then(|| lhs / (sign * rhs)),
        inconclusive,
        samples: out.samples,
    })
}

/// The global orientation sign: the localization check for the
/// canonical bump centred on `Q` in the generic model.
pub fn calibrate_sign(spec: &QuadratureSpec) -> Result<f64> {
    let model = LocalModel::generic();
    let r = localization_check(&model, &Bump::on_line(&model.q, 0.5), spec, 1.0)?;
    match r.ratio {
        Some(x) => Ok(x.signum()),
        None => Err(Error::NonConvergent { estimate: r.lhs_error, tolerance: r.rhs.abs() }),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgebraicReport {
    /// `∫_X ∂̄β^{2,0} ∧ α_PQ`.
    pub pairing: C64,
    pub error: f64,
    /// `∫_X |∂̄β^{2,0} ∧ α_PQ|`.
    pub mass: f64,
    /// `|pairing| / mass`.
    pub relative: f64,
    pub coplanar: bool,
    pub samples: usize,
}

/// Pairs `α_PQ` with `∂̄β` for `β = b·(c₁dz₁ + c₂dz₂)∧dz₃`. Only the
/// `∂b/∂z̄₃` part of `∂̄b` survives the wedge with a form pulled back from
/// `(z₁, z₂)`, giving `∂̄β∧α = 2i·∂b/∂z̄₃·Σ cₐ(α∧dzₐ)/vol₄ · vol₆`.
pub fn algebraic_equivalence_check(
    model: &LocalModel,
    bump: &Bump,
    coeffs: [C64; 2],
    spec: &QuadratureSpec,
) -> Result<AlgebraicReport> {
    let value = |w: [C64; 2], z3: C64| -> Result<C64> {
        let k = model.kernel_raw(w)?;
        let g = bump.gradient([w[0], w[1], z3]);
        let dbar3 = C64::new(0.5 * g[4], 0.5 * g[5]);
        let a_dz = coeffs[0] * C64::new(k[0], k[1]) + coeffs[1] * C64::new(k[2], k[3]);
        Ok(2.0 * C64::i() * dbar3 * a_dz / 3.0)
    };
    let spec = QuadratureSpec { schedule: vec![], ..spec.clone() };
    let out = qmc_integrate(model, bump, &spec, &value)?;
    Ok(AlgebraicReport {
        pairing: out.direct,
        error: out.error,
        mass: out.mass,
        relative: if out.mass > 0.0 { out.direct.norm() / out.mass } else { 0.0 },
        coplanar: model.p.c[1] == model.q.c[1],
        samples: out.samples,
    })
}

//! Parameterized integration domains.
//!
//! A domain is a box of parameters mapped into the real coordinates
//! `(x1, y1, x2, y2, x3, y3)` of a chart. The map is evaluated on jets, so
//! the tangent vectors pushed into the form are exact derivatives.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::jet::{Jet, NVARS};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    /// Periodic axes get equal-weight rules in grid methods.
    pub periodic: bool,
}

impl Axis {
    pub fn new(lo: f64, hi: f64) -> Self {
        Axis { lo, hi, periodic: false }
    }

    pub fn periodic(lo: f64, hi: f64) -> Self {
        Axis { lo, hi, periodic: true }
    }
}

type ParamMap = dyn Fn(&[Jet]) -> [Jet; NVARS] + Send + Sync;

/// Which parameterization of the 3-sphere to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SphereChart {
    /// `w1 = cos η·e^{iξ1}`, `w2 = sin η·e^{iξ2}`, parameters ordered
    /// `(η, ξ1, ξ2)`.
    Hopf,
    /// `w1 = cos(θ/2)·e^{i(ψ+φ)/2}`, `w2 = sin(θ/2)·e^{i(ψ−φ)/2}`,
    /// parameters ordered `(θ, φ, ψ)`.
    Euler,
}

#[derive(Clone)]
pub struct Domain {
    pub name: String,
    axes: Vec<Axis>,
    map: Arc<ParamMap>,
    /// Axis whose lower end is the singular set; excision raises it to δ.
    radial: Option<usize>,
}

impl Domain {
    pub fn custom(
        name: &str,
        axes: Vec<Axis>,
        radial: Option<usize>,
        map: impl Fn(&[Jet]) -> [Jet; NVARS] + Send + Sync + 'static,
    ) -> Self {
        Domain { name: name.into(), axes, map: Arc::new(map), radial }
    }

    /// The coordinate box itself with the standard orientation.
    pub fn real_box(lo: &[f64], hi: &[f64]) -> Self {
        let axes = lo.iter().zip(hi).map(|(&a, &b)| Axis::new(a, b)).collect();
        Domain::custom("box", axes, None, identity_map)
    }

    /// A box whose every axis is a full period.
    pub fn torus(lo: &[f64], hi: &[f64]) -> Self {
        let axes = lo.iter().zip(hi).map(|(&a, &b)| Axis::periodic(a, b)).collect();
        Domain::custom("torus", axes, None, identity_map)
    }

    /// The disc `|z1 − c| ≤ radius` in polar coordinates, radial excision
    /// around the centre.
    pub fn disc(center: C64, radius: f64) -> Self {
        Domain::custom(
            "disc",
            vec![Axis::new(0.0, radius), Axis::periodic(0.0, 2.0 * PI)],
            Some(0),
            move |t| {
                let (r, th) = (t[0], t[1]);
                let mut out = [Jet::real(0.0); NVARS];
                out[0] = r * th.cos() + center.re;
                out[1] = r * th.sin() + center.im;
                out
            },
        )
    }

    /// The 3-sphere `|w| = radius` around `center` in ℂ², with inward
    /// normal first: at `w = (1, 0)` the frame `(∂y1, ∂y2, ∂x2)` is positive.
    /// This is the orientation in which `∫ tr((h⁻¹dh)^∧3) = +24π²`.
    pub fn sphere3(center: [C64; 2], radius: f64, chart: SphereChart) -> Self {
        let place = move |w1: (Jet, Jet), w2: (Jet, Jet)| {
            let mut out = [Jet::real(0.0); NVARS];
            out[0] = w1.0 * radius + center[0].re;
            out[1] = w1.1 * radius + center[0].im;
            out[2] = w2.0 * radius + center[1].re;
            out[3] = w2.1 * radius + center[1].im;
            out
        };
        match chart {
            SphereChart::Hopf => Domain::custom(
                "S3 (Hopf)",
                vec![Axis::new(0.0, PI / 2.0), Axis::periodic(0.0, 2.0 * PI), Axis::periodic(0.0, 2.0 * PI)],
                None,
                move |t| {
                    let (c, s) = (t[0].cos(), t[0].sin());
                    place((c * t[1].cos(), c * t[1].sin()), (s * t[2].cos(), s * t[2].sin()))
                },
            ),
            SphereChart::Euler => Domain::custom(
                "S3 (Euler)",
                vec![Axis::new(0.0, PI), Axis::new(0.0, 2.0 * PI), Axis::periodic(0.0, 4.0 * PI)],
                None,
                move |t| {
                    let (c, s) = ((t[0] * 0.5).cos(), (t[0] * 0.5).sin());
                    let (p, m) = ((t[2] + t[1]) * 0.5, (t[2] - t[1]) * 0.5);
                    place((c * p.cos(), c * p.sin()), (s * m.cos(), s * m.sin()))
                },
            ),
        }
    }

    /// The same domain with the opposite orientation: the first
    /// non-radial axis is reflected.
    pub fn flipped(&self) -> Self {
        let map = self.map.clone();
        let k = (0..self.axes.len()).find(|&i| Some(i) != self.radial).expect("a non-radial axis");
        let (lo, hi) = (self.axes[k].lo, self.axes[k].hi);
        Domain {
            name: format!("{} (flipped)", self.name),
            axes: self.axes.clone(),
            radial: self.radial,
            map: Arc::new(move |t: &[Jet]| {
                let mut s = t.to_vec();
                s[k] = -t[k] + (lo + hi);
                map(&s)
            }),
        }
    }

    /// The same map over a modified parameter range on axis `k`.
    pub fn with_axis(&self, k: usize, axis: Axis) -> Self {
        let mut out = self.clone();
        out.axes[k] = axis;
        out
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn radial(&self) -> Option<usize> {
        self.radial
    }

    /// Axes after excising `δ` along the radial axis.
    pub fn excised_axes(&self, delta: f64) -> Vec<Axis> {
        let mut axes = self.axes.clone();
        if let Some(r) = self.radial {
            axes[r].lo += delta;
        }
        axes
    }

    /// Point and tangent vectors `∂x/∂t_b` at parameters `t`.
    pub fn push(&self, t: &[f64]) -> ([f64; NVARS], Vec<[f64; NVARS]>) {
        let seeded: Vec<Jet> = t.iter().enumerate().map(|(i, &v)| Jet::variable(v, i, 1)).collect();
        let x = (self.map)(&seeded);
        let point = x.map(|c| c.v.re);
        let tangents = (0..t.len()).map(|b| x.map(|c| c.g[b].re)).collect();
        (point, tangents)
    }
}

fn identity_map(t: &[Jet]) -> [Jet; NVARS] {
    let mut out = [Jet::real(0.0); NVARS];
    out[..t.len()].copy_from_slice(t);
    out
}

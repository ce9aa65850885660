//! Run configuration. Every field has a default; a TOML document may
//! override any subset, and unknown keys are rejected.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub seed: u64,
    pub quaternion: IdentityConfig,
    pub forms: IdentityConfig,
    pub group: GroupConfig,
    pub bundle: BundleConfig,
    pub chern_simons: ChernSimonsConfig,
    pub tubular: TubularConfig,
    pub abel_curve: CurveConfig,
    pub abel_threefold: ThreefoldConfig,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 42,
            quaternion: IdentityConfig { points: 100, tolerance: 1e-12 },
            forms: IdentityConfig { points: 100, tolerance: 1e-9 },
            group: GroupConfig::default(),
            bundle: BundleConfig::default(),
            chern_simons: ChernSimonsConfig::default(),
            tubular: TubularConfig::default(),
            abel_curve: CurveConfig::default(),
            abel_threefold: ThreefoldConfig::default(),
        }
    }
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Config> {
        let c: Config = toml::from_str(text).map_err(|e| Error::Invalid(format!("config: {e}")))?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Invalid(format!("config: {what}")));
        let positive = [
            self.quaternion.tolerance,
            self.forms.tolerance,
            self.group.tolerance,
            self.group.s3_tolerance,
            self.group.volume_tolerance,
            self.bundle.tolerance,
            self.bundle.excision_radius,
            self.chern_simons.closed_form_tolerance,
            self.chern_simons.additivity_tolerance,
            self.chern_simons.flat_tolerance,
            self.chern_simons.amplitude,
            self.tubular.exponent_tolerance,
            self.tubular.limit_tolerance,
            self.abel_curve.pairing_tolerance,
            self.abel_curve.period_tolerance,
            self.abel_threefold.ratio_tolerance,
            self.abel_threefold.algebraic_tolerance,
            self.abel_threefold.control_sigmas,
        ];
        if positive.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
            return bad("tolerances, radii and amplitudes must be positive and finite");
        }
        let counts = [
            self.quaternion.points,
            self.forms.points,
            self.group.points,
            self.bundle.points,
            self.chern_simons.points,
            self.chern_simons.triples,
            self.chern_simons.test_forms,
            self.abel_curve.twists,
            self.abel_threefold.bumps,
        ];
        if counts.contains(&0) {
            return bad("point, triple, twist and bump counts must be at least 1");
        }
        let rs = &self.tubular.radii;
        if rs.len() < 4 || rs.iter().any(|r| !(*r > 0.0)) || rs.windows(2).any(|w| w[1] >= w[0]) {
            return bad("tubular.radii needs at least 4 positive, strictly decreasing radii");
        }
        if self.abel_curve.lattices.iter().any(|t| !(t[1] > 0.0)) || self.abel_curve.lattices.is_empty() {
            return bad("abel_curve.lattices must be nonempty with Im τ > 0");
        }
        if self.abel_curve.degrees.is_empty() || self.abel_curve.degrees.contains(&0) {
            return bad("abel_curve.degrees must be nonempty and positive");
        }
        if !self.abel_curve.grid.is_power_of_two() || self.abel_curve.grid < 8 {
            return bad("abel_curve.grid must be a power of two, at least 8");
        }
        let sched = &self.abel_threefold.schedule;
        if sched.iter().any(|d| !(*d > 0.0) || *d >= crate::abel_threefold::TUBE_RADIUS) {
            return bad("abel_threefold.schedule radii must lie in (0, tube radius)");
        }
        if self.abel_threefold.samples < 1000 {
            return bad("abel_threefold.samples must be at least 1000");
        }
        Ok(())
    }
}

/// Pointwise identity checks: how many random points and the residual bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IdentityConfig {
    pub points: usize,
    pub tolerance: f64,
}

impl Default for IdentityConfig {
    fn default() -> Self {
        IdentityConfig { points: 100, tolerance: 1e-9 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GroupConfig {
    pub points: usize,
    pub tolerance: f64,
    /// Gauss nodes per axis for the sphere integral.
    pub s3_nodes: usize,
    /// Relative tolerance on `24π²`.
    pub s3_tolerance: f64,
    /// Absolute tolerance on `vol(S³) = 2π²`.
    pub volume_tolerance: f64,
}

impl Default for GroupConfig {
    fn default() -> Self {
        GroupConfig { points: 100, tolerance: 1e-9, s3_nodes: 16, s3_tolerance: 1e-6, volume_tolerance: 1e-8 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BundleConfig {
    pub points: usize,
    pub tolerance: f64,
    /// Sample points closer than this to a zero of a section are skipped.
    pub excision_radius: f64,
}

impl Default for BundleConfig {
    fn default() -> Self {
        BundleConfig { points: 100, tolerance: 1e-9, excision_radius: 1e-2 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChernSimonsConfig {
    /// Points for the pointwise transgression identities.
    pub points: usize,
    /// Gauss nodes for the `t`-integral.
    pub t_nodes: usize,
    pub triples: usize,
    pub test_forms: usize,
    /// Amplitude of the random torus connections.
    pub amplitude: f64,
    /// Periodic nodes per axis on `T⁶`.
    pub torus_nodes: usize,
    pub closed_form_tolerance: f64,
    pub additivity_tolerance: f64,
    pub flat_tolerance: f64,
}

impl Default for ChernSimonsConfig {
    fn default() -> Self {
        ChernSimonsConfig {
            points: 20,
            t_nodes: 32,
            triples: 5,
            test_forms: 5,
            amplitude: 0.5,
            torus_nodes: 5,
            closed_form_tolerance: 1e-8,
            additivity_tolerance: 1e-6,
            flat_tolerance: 1e-10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TubularConfig {
    pub radii: Vec<f64>,
    /// Gauss nodes per axis on each tube boundary.
    pub nodes: usize,
    pub expected_exponent: f64,
    /// Relative tolerance on the fitted exponent.
    pub exponent_tolerance: f64,
    /// Bound on `|limit|` relative to the test-form scale.
    pub limit_tolerance: f64,
}

impl Default for TubularConfig {
    fn default() -> Self {
        TubularConfig {
            radii: vec![0.05, 0.025, 0.0125, 0.00625, 0.003125],
            nodes: 6,
            expected_exponent: 1.0,
            exponent_tolerance: 0.2,
            limit_tolerance: 1e-4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CurveConfig {
    /// `τ` as `[re, im]`.
    pub lattices: Vec<[f64; 2]>,
    pub degrees: Vec<usize>,
    /// Twists per (lattice, degree); the first is always the zero twist.
    pub twists: usize,
    pub twist_modes: usize,
    pub twist_amplitude: f64,
    /// Periodic grid for the pairing and the `∂̄`-solve.
    pub grid: usize,
    pub pairing_tolerance: f64,
    pub period_tolerance: f64,
}

impl Default for CurveConfig {
    fn default() -> Self {
        CurveConfig {
            lattices: vec![[0.0, 1.0], [0.3, 1.1]],
            degrees: vec![1, 2],
            twists: 4,
            twist_modes: 3,
            twist_amplitude: 0.3,
            grid: 32,
            pairing_tolerance: 1e-3,
            period_tolerance: 1e-5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ThreefoldConfig {
    pub samples: usize,
    pub bumps: usize,
    /// Excision radii of the reported partial integrals.
    pub schedule: Vec<f64>,
    pub ratio_tolerance: f64,
    pub algebraic_tolerance: f64,
    /// Controls pass within this many standard errors of zero.
    pub control_sigmas: f64,
}

impl Default for ThreefoldConfig {
    fn default() -> Self {
        ThreefoldConfig {
            samples: 20_000_000,
            bumps: 3,
            schedule: vec![0.2, 0.1, 0.05],
            ratio_tolerance: 0.05,
            algebraic_tolerance: 0.05,
            control_sigmas: 4.0,
        }
    }
}

/// Parses `a+bi`, `a-bi`, `bi`, `i`, `-i` or `a`.
pub fn parse_complex(s: &str) -> Result<num_complex::Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Invalid(format!("not a complex number: {s:?}"));
    let num = |x: &str| -> Result<f64> {
        match x {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => x.parse::<f64>().map_err(|_| bad()),
        }
    };
    let Some(body) = t.strip_suffix('i') else {
        return Ok(num_complex::Complex64::new(t.parse::<f64>().map_err(|_| bad())?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (body[..k].parse::<f64>().map_err(|_| bad())?, num(&body[k..])?),
        None => (0.0, num(body)?),
    };
    if !(re.is_finite() && im.is_finite()) {
        return Err(bad());
    }
    Ok(num_complex::Complex64::new(re, im))
}

/// A comma-separated list of complex numbers.
pub fn parse_complex_list(s: &str) -> Result<Vec<num_complex::Complex64>> {
    s.split(',').map(parse_complex).collect()
}

//! Verification suites. Each suite appends its records to a [`Recorder`]
//! in a fixed order and draws its randomness from its own seeded stream,
//! so reports depend only on the configuration.

mod abel;
mod cs;
mod identity;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use abel::{abel_curve, abel_curve_single, abel_threefold};
pub use cs::{chern_simons, tubular};
pub use identity::{bundle, forms, group, quaternion};

use crate::config::Config;
use crate::report::{Recorder, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Quaternion,
    Forms,
    Group,
    Bundle,
    ChernSimons,
    Tubular,
    AbelCurve,
    AbelThreefold,
}

impl Suite {
    /// The suites run by `verify all`.
    pub const VERIFY: [Suite; 6] = [Suite::Quaternion, Suite::Forms, Suite::Group, Suite::Bundle, Suite::ChernSimons, Suite::Tubular];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Quaternion => "quaternion",
            Suite::Forms => "forms",
            Suite::Group => "group",
            Suite::Bundle => "bundle",
            Suite::ChernSimons => "chern-simons",
            Suite::Tubular => "tubular",
            Suite::AbelCurve => "curve",
            Suite::AbelThreefold => "threefold",
        }
    }

    /// Prefix of the ids of this suite's records.
    pub fn prefix(self) -> &'static str {
        match self {
            Suite::ChernSimons => "cs",
            s => s.name(),
        }
    }

    pub fn run(self, cfg: &Config, rec: &mut Recorder) {
        match self {
            Suite::Quaternion => quaternion(cfg, rec),
            Suite::Forms => forms(cfg, rec),
            Suite::Group => group(cfg, rec),
            Suite::Bundle => bundle(cfg, rec),
            Suite::ChernSimons => chern_simons(cfg, rec),
            Suite::Tubular => tubular(cfg, rec),
            Suite::AbelCurve => abel_curve(cfg, rec),
            Suite::AbelThreefold => abel_threefold(cfg, rec),
        }
    }
}

/// Independent stream per suite.
pub(crate) fn suite_rng(seed: u64, suite: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(suite);
    rng
}

/// What `verify TARGET` selects: a suite, or a single check by id with or
/// without its suite prefix (`s3-constant`, `group.s3-constant`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    All,
    Suite(Suite),
    Check(Suite, String),
}

const CHECKS: &[(Suite, &str)] = &[
    (Suite::Quaternion, "quaternion.algebra"),
    (Suite::Forms, "forms.triple-wedge"),
    (Suite::Forms, "forms.d-squared"),
    (Suite::Forms, "forms.leibniz"),
    (Suite::Forms, "forms.graded-cyclicity"),
    (Suite::Group, "group.s3-constant"),
    (Suite::Group, "group.s3-volume"),
    (Suite::Group, "group.maurer-cartan"),
    (Suite::Group, "group.three-form"),
    (Suite::Group, "group.decomposition"),
    (Suite::Bundle, "bundle.quaternionic"),
    (Suite::Bundle, "bundle.frame-matrix"),
    (Suite::Bundle, "bundle.constraint"),
    (Suite::Bundle, "bundle.curvature"),
    (Suite::Bundle, "bundle.operators"),
    (Suite::ChernSimons, "cs.closed-form"),
    (Suite::ChernSimons, "cs.additivity"),
    (Suite::ChernSimons, "cs.flat"),
    (Suite::ChernSimons, "cs.form-03"),
    (Suite::ChernSimons, "cs.primed-pairing"),
    (Suite::Tubular, "tubular.exponent"),
    (Suite::Tubular, "tubular.limit"),
    (Suite::Tubular, "tubular.log-model-limit"),
];

impl Target {
    pub fn parse(s: &str) -> Option<Target> {
        if s == "all" {
            return Some(Target::All);
        }
        if let Some(suite) = Suite::VERIFY.into_iter().find(|v| v.name() == s) {
            return Some(Target::Suite(suite));
        }
        CHECKS
            .iter()
            .find(|(suite, id)| *id == s || id.strip_prefix(suite.prefix()).and_then(|r| r.strip_prefix('.')) == Some(s))
            .map(|(suite, id)| Target::Check(*suite, id.to_string()))
    }

    pub fn names() -> Vec<&'static str> {
        let mut v = vec!["all"];
        v.extend(Suite::VERIFY.iter().map(|s| s.name()));
        v.extend(CHECKS.iter().map(|c| c.1));
        v
    }
}

pub fn run_suite(suite: Suite, cfg: &Config, mut rec: Recorder) -> Report {
    suite.run(cfg, &mut rec);
    rec.finish()
}

/// Runs the selected suites in their fixed order.
pub fn run(target: &Target, cfg: &Config, mut rec: Recorder) -> Report {
    match target {
        Target::All => Suite::VERIFY.iter().for_each(|s| s.run(cfg, &mut rec)),
        Target::Suite(s) => s.run(cfg, &mut rec),
        Target::Check(s, id) => {
            s.run(cfg, &mut rec);
            rec.records.retain(|r| &r.id == id);
        }
    }
    rec.finish()
}

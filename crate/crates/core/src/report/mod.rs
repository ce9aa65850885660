//! Check records and their JSON and text renderings.
//!
//! A record compares a measured value with an expected one under a
//! tolerance. The comparison rule is kept on the record (not serialized) so
//! a global tolerance override can re-derive the status.

use std::fmt::Write as _;
use std::time::Instant;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        }
    }
}

/// A real number or a complex one, serialized as `x` or `[re, im]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Real(f64),
    Complex([f64; 2]),
}

impl Value {
    pub fn complex(z: C64) -> Value {
        Value::Complex([z.re, z.im])
    }

    fn as_complex(self) -> C64 {
        match self {
            Value::Real(x) => C64::new(x, 0.0),
            Value::Complex([re, im]) => C64::new(re, im),
        }
    }

    fn render(self) -> String {
        match self {
            Value::Real(x) => format!("{x:.6e}"),
            Value::Complex([re, im]) => format!("{re:.4e}{im:+.4e}i"),
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Value {
        Value::Real(x)
    }
}

impl From<C64> for Value {
    fn from(z: C64) -> Value {
        Value::complex(z)
    }
}

/// How `measured` is held against `expected`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Compare {
    /// `|measured − expected| ≤ tolerance`.
    Absolute,
    /// `|measured − expected| ≤ tolerance·|expected|`.
    Relative,
    /// Status fixed by the check (reported values only).
    Fixed(Status),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    /// The mathematical statement being checked.
    pub anchor: String,
    pub status: Status,
    pub measured: Option<Value>,
    pub expected: Option<Value>,
    pub tolerance: f64,
    pub error_estimate: Option<f64>,
    pub samples: u64,
    pub seed: u64,
    pub runtime_ms: Option<u64>,
    #[serde(skip)]
    pub compare: Compare,
}

impl CheckRecord {
    pub fn new(id: &str, anchor: &str, measured: impl Into<Value>, expected: impl Into<Value>, tolerance: f64) -> Self {
        let mut r = CheckRecord {
            id: id.to_string(),
            anchor: anchor.to_string(),
            status: Status::Fail,
            measured: Some(measured.into()),
            expected: Some(expected.into()),
            tolerance,
            error_estimate: None,
            samples: 0,
            seed: 0,
            runtime_ms: None,
            compare: Compare::Absolute,
        };
        r.judge();
        r
    }

    /// A residual that should vanish.
    pub fn residual(id: &str, anchor: &str, residual: f64, tolerance: f64) -> Self {
        CheckRecord::new(id, anchor, residual, 0.0, tolerance)
    }

    /// A check that could not produce a value.
    pub fn failed(id: &str, anchor: &str, tolerance: f64, err: &Error) -> Self {
        let mut r = CheckRecord::new(id, anchor, f64::NAN, f64::NAN, tolerance);
        r.measured = None;
        r.expected = None;
        r.anchor = format!("{anchor} [error: {err}]");
        r.compare = Compare::Fixed(Status::Fail);
        r.judge();
        r
    }

    pub fn relative(mut self) -> Self {
        self.compare = Compare::Relative;
        self.judge();
        self
    }

    pub fn fixed(mut self, status: Status) -> Self {
        self.compare = Compare::Fixed(status);
        self.judge();
        self
    }

    pub fn with_error(mut self, error: f64) -> Self {
        self.error_estimate = Some(error);
        self
    }

    pub fn with_samples(mut self, samples: u64) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.judge();
        self
    }

    fn judge(&mut self) {
        self.status = match (self.compare, self.measured, self.expected) {
            (Compare::Fixed(s), _, _) => s,
            (_, Some(m), Some(e)) => {
                let gap = (m.as_complex() - e.as_complex()).norm();
                let bound = match self.compare {
                    Compare::Relative => self.tolerance * e.as_complex().norm(),
                    _ => self.tolerance,
                };
                if gap <= bound {
                    Status::Pass
                } else {
                    Status::Fail
                }
            }
            _ => Status::Fail,
        };
    }
}

/// Collects records for one run.
pub struct Recorder {
    pub seed: u64,
    pub timings: bool,
    pub tolerance: Option<f64>,
    pub records: Vec<CheckRecord>,
}

impl Recorder {
    pub fn new(seed: u64, timings: bool, tolerance: Option<f64>) -> Self {
        Recorder { seed, timings, tolerance, records: Vec::new() }
    }

    /// Runs one check producing one or more records; an error becomes a
    /// single failing record under `id`.
    pub fn run(&mut self, id: &str, anchor: &str, tolerance: f64, check: impl FnOnce() -> crate::error::Result<Vec<CheckRecord>>) {
        let start = Instant::now();
        let out = check().unwrap_or_else(|e| vec![CheckRecord::failed(id, anchor, tolerance, &e)]);
        let elapsed = start.elapsed().as_millis() as u64;
        for mut r in out {
            r.seed = self.seed;
            if self.timings {
                r.runtime_ms = Some(elapsed);
            }
            if let Some(t) = self.tolerance {
                r = r.with_tolerance(t);
            }
            self.records.push(r);
        }
    }

    pub fn finish(self) -> Report {
        Report { records: self.records }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Report {
    pub records: Vec<CheckRecord>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.records.iter().any(|r| r.status == Status::Fail) {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("records serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<34} {:<12} {:>26} {:>26} {:>10} {:>10} {:>10}",
            "id", "status", "measured", "expected", "tolerance", "error", "samples"
        );
        for r in &self.records {
            let show = |v: Option<Value>| v.map_or("-".to_string(), Value::render);
            let _ = writeln!(
                s,
                "{:<34} {:<12} {:>26} {:>26} {:>10.2e} {:>10} {:>10}",
                r.id,
                r.status.label(),
                show(r.measured),
                show(r.expected),
                r.tolerance,
                r.error_estimate.map_or("-".to_string(), |e| format!("{e:.2e}")),
                r.samples
            );
        }
        s
    }
}

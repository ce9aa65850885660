#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use abel_lab::config::{parse_complex, parse_complex_list, Config};
use abel_lab::report::{Recorder, Report};
use abel_lab::suites::{self, Suite, Target};

#[derive(Parser)]
#[command(name = "abel-lab", version, about = "Numerical checks of Chern-Simons currents and Abel pairings")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Seed for every random choice; overrides the config file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Replaces the tolerance of every emitted check.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// QMC samples for `abel threefold`; random points for the pointwise
    /// identity suites otherwise.
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// TOML configuration; unspecified keys keep their defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Record wall-clock runtimes (makes reports run-dependent).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite or a single check.
    Verify {
        /// all | quaternion | forms | group | bundle | chern-simons | tubular, or a check id
        target: String,
    },
    /// Abel pairing experiments.
    #[command(subcommand)]
    Abel(AbelCommand),
}

#[derive(Subcommand)]
enum AbelCommand {
    /// Elliptic curve: the configured sweep, or one divisor pair.
    Curve {
        /// Lattice parameter, e.g. `1i` or `0.3+1.1i`.
        #[arg(long, default_value = "1i")]
        tau: String,
        /// Points of P, comma separated.
        #[arg(long = "P", short = 'P')]
        p: Option<String>,
        /// Points of Q, comma separated.
        #[arg(long = "Q", short = 'Q')]
        q: Option<String>,
    },
    /// Threefold local model: localization, controls, algebraic equivalence.
    Threefold,
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn load_config(g: &Global, command: &Command) -> Result<Config, String> {
    let mut cfg = match &g.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            Config::from_toml(&text).map_err(|e| e.to_string())?
        }
        None => Config::default(),
    };
    if let Some(seed) = g.seed {
        cfg.seed = seed;
    }
    match (g.samples, command) {
        (Some(n), Command::Abel(AbelCommand::Threefold)) => cfg.abel_threefold.samples = n,
        (Some(n), _) => {
            for points in [&mut cfg.quaternion.points, &mut cfg.forms.points, &mut cfg.group.points, &mut cfg.bundle.points] {
                *points = n;
            }
        }
        (None, _) => {}
    }
    if g.tolerance.is_some_and(|t| !(t >= 0.0)) {
        return Err("--tolerance must be non-negative".into());
    }
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn run(cli: &Cli, cfg: &Config) -> Result<Report, String> {
    let rec = Recorder::new(cfg.seed, cli.global.timings, cli.global.tolerance);
    match &cli.command {
        Command::Verify { target } => {
            let t = Target::parse(target)
                .ok_or_else(|| format!("unknown verify target {target:?}; expected one of {}", Target::names().join(", ")))?;
            Ok(suites::run(&t, cfg, rec))
        }
        Command::Abel(AbelCommand::Threefold) => Ok(suites::run_suite(Suite::AbelThreefold, cfg, rec)),
        Command::Abel(AbelCommand::Curve { tau, p, q }) => match (p, q) {
            (None, None) => Ok(suites::run_suite(Suite::AbelCurve, cfg, rec)),
            (Some(p), Some(q)) => {
                let tau = parse_complex(tau).map_err(|e| e.to_string())?;
                if !(tau.im > 0.0) {
                    return Err("--tau needs a positive imaginary part".into());
                }
                let (p, q) = (parse_complex_list(p).map_err(|e| e.to_string())?, parse_complex_list(q).map_err(|e| e.to_string())?);
                if p.len() != q.len() {
                    return Err(format!("P has {} points and Q has {}; degrees must match", p.len(), q.len()));
                }
                let mut rec = rec;
                suites::abel_curve_single(cfg, tau, &p, &q, &mut rec);
                Ok(rec.finish())
            }
            _ => Err("--P and --Q must be given together".into()),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match load_config(&cli.global, &cli.command) {
        Ok(c) => c,
        Err(e) => return usage(e),
    };
    let report = match run(&cli, &cfg) {
        Ok(r) => r,
        Err(e) => return usage(e),
    };
    let text = match cli.global.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    match &cli.global.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                return usage(format!("{}: {e}", path.display()));
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(report.exit_code() as u8)
}

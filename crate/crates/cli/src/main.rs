use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use aqh_core::classifier::{ClassLabel, CLASS_TOL};
use aqh_core::components::{census, inject, ComponentLabel};
use aqh_core::io::{lie_to_file, mixed_to_file, parse_input, tensor_report, Input, LieFixture};
use aqh_core::lie::search_reachable;
use aqh_core::report::classify_algebra;
use aqh_core::verify::{self, VERIFY_TOL};
use aqh_core::QuatStructure;

mod render;

#[derive(Parser)]
#[command(name = "aqh", version, about = "Intrinsic torsion of almost quaternion-Hermitian structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run the identity suite.
    Verify {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=3))]
        n: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Override the tolerance of every numerical check.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Dimensions of the six summands of the torsion space.
    Dims {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=4))]
        n: u32,
    },
    /// Classify a torsion tensor or a Lie algebra from JSON.
    Classify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = CLASS_TOL)]
        tol: f64,
    },
    /// Write one random component of the torsion space to a file.
    Inject {
        /// One of L3EH, KH, EH, L3ES3H, KS3H, ES3H.
        #[arg(long)]
        component: String,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=4))]
        n: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Destination; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full report for a metric Lie algebra, or a search for reachable classes.
    Liealg {
        #[arg(long, conflicts_with = "search")]
        input: Option<PathBuf>,
        /// Number of random sparse algebras to try.
        #[arg(long, requires = "n")]
        search: Option<u64>,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=3))]
        n: Option<u32>,
        /// Directory receiving one fixture per class found.
        #[arg(long, requires = "search")]
        out: Option<PathBuf>,
    },
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Pass,
    IdentityFailure,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::IdentityFailure) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Writes to stdout, treating a closed pipe as success.
fn print_out(text: &str) -> anyhow::Result<()> {
    let mut stdout = std::io::stdout().lock();
    match stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) -> anyhow::Result<()> {
    match format {
        Format::Json => print_out(&format!("{}\n", serde_json::to_string_pretty(value)?)),
        Format::Text => print_out(&text()),
    }
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    let format = cli.format;
    match cli.command {
        Command::Verify { n, seed, tol } => {
            let mut report = verify::run(n as usize, seed)?;
            if let Some(t) = tol {
                if !(t > 0.0 && t.is_finite()) {
                    bail!("--tol must be a positive number");
                }
                report = report.with_tolerance(t);
            }
            emit(format, &report, || report.to_text())?;
            Ok(if report.passed() { Outcome::Pass } else { Outcome::IdentityFailure })
        }
        Command::Dims { n } => {
            let q = QuatStructure::standard(n as usize)?;
            let c = census(&q);
            emit(format, &c, || render::census(&c))?;
            let exact = c
                .components
                .iter()
                .all(|e| (e.trace - e.dimension as f64).abs() < 1e-6);
            Ok(if exact { Outcome::Pass } else { Outcome::IdentityFailure })
        }
        Command::Classify { input, tol } => classify(&input, tol, format),
        Command::Inject { component, n, seed, out } => {
            let x = ComponentLabel::parse(&component)?;
            let q = QuatStructure::standard(n as usize)?;
            let a = inject(&q, x, seed)?;
            let text = serde_json::to_string_pretty(&mixed_to_file(q.n(), &a))?;
            match out {
                Some(path) => write(&path, &text)?,
                None => print_out(&format!("{text}\n"))?,
            }
            Ok(Outcome::Pass)
        }
        Command::Liealg { input, search, n, out } => match (input, search) {
            (Some(path), None) => classify(&path, CLASS_TOL, format),
            (None, Some(count)) => {
                let q = QuatStructure::standard(n.expect("required by clap") as usize)?;
                search_classes(&q, count, out.as_deref(), format)
            }
            _ => bail!("liealg needs --input FILE or --search COUNT --n N"),
        },
    }
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display()))
}

fn classify(path: &Path, tol: f64, format: Format) -> anyhow::Result<Outcome> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    match parse_input(&text)? {
        Input::Torsion { q, a } => {
            let report = tensor_report(&q, &a, tol)?;
            emit(format, &report, || render::tensor(&report))?;
            Ok(Outcome::Pass)
        }
        Input::Algebra(g) => {
            let report = classify_algebra(&g)?;
            let failures = report.failures(VERIFY_TOL);
            emit(format, &report, || render::algebra(&report, &failures))?;
            Ok(if failures.is_empty() { Outcome::Pass } else { Outcome::IdentityFailure })
        }
    }
}

#[derive(Serialize)]
struct SearchSummary {
    n: usize,
    tried: u64,
    classes: Vec<String>,
}

fn search_classes(q: &QuatStructure, count: u64, out: Option<&Path>, format: Format) -> anyhow::Result<Outcome> {
    let found = search_reachable(q, 0..count);
    if let Some(dir) = out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for (i, (bits, g)) in found.iter().enumerate() {
            let fixture = LieFixture {
                algebra: lie_to_file(g),
                class: ClassLabel::from_bits(*bits).ascii(),
            };
            let path = dir.join(format!("n{}_{i:02}.json", q.n()));
            write(&path, &serde_json::to_string_pretty(&fixture)?)?;
        }
    }
    let summary = SearchSummary {
        n: q.n(),
        tried: count,
        classes: found.keys().map(|b| ClassLabel::from_bits(*b).ascii()).collect(),
    };
    emit(format, &summary, || {
        let mut s = format!("{} classes reached at n={} from {} algebras\n", summary.classes.len(), summary.n, count);
        for c in &summary.classes {
            s.push_str(&format!("  {c}\n"));
        }
        s
    })?;
    Ok(Outcome::Pass)
}

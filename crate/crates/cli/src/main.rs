//! Command-line front end: theorem-truth suites, grade falsification, the
//! introductory counterexamples and matrix means on files.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use loewner::harness::{
    demo_paper, read_matrix, run_suite, write_matrix, DemoCase, SuiteReport, DEFAULT_TRIALS,
};
use loewner::linalg::{HermitianView, Tolerances};
use loewner::maps::{falsify_grade, Grade, MapSpec, WitnessSource};
use loewner::means::{mean, MeanKind};
use loewner::Error;

const USAGE: u8 = 2;
const FAILED: u8 = 1;

#[derive(Parser)]
#[command(name = "loewner", version, about = "Operator inequalities for 2-positive and weakly 2-positive maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run theorem-truth suites on seeded random instances.
    Verify {
        /// Inequality identifier, or `all`.
        #[arg(long)]
        suite: String,
        #[arg(long, env = "LOEWNER_SEED", default_value_t = 0)]
        seed: u64,
        /// Trials per dimension.
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [2, 3, 4, 6])]
        dims: Vec<usize>,
        /// Margin tolerance, relative to max(1, scale).
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Search for a PSD block whose image under the ampliated map is not PSD.
    Falsify {
        /// Map descriptor, e.g. `transpose:3`, `det-shift:0.5`, `pinching:1|2,3`.
        #[arg(long)]
        map: String,
        /// `weak2` or `two`.
        #[arg(long)]
        grade: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, env = "LOEWNER_SEED", default_value_t = 0)]
        seed: u64,
        /// Matrix size for maps that do not state it.
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Expected result; defaults to `found` exactly when the map's
        /// claimed grade is below the tested one.
        #[arg(long, value_enum)]
        expect: Option<Expect>,
    },
    /// Reproduce one of the introductory counterexamples.
    Demo {
        #[arg(long, value_enum)]
        case: Case,
        /// Parameter of the det-shift map.
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
    },
    /// Mean of two PSD matrices read from JSON files.
    Mean {
        #[arg(long, value_enum)]
        kind: Kind,
        a: PathBuf,
        b: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Expect {
    Found,
    None,
}

#[derive(Clone, Copy, ValueEnum)]
enum Case {
    MoorePenrose,
    DetShift,
    Transpose,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Geometric,
    Harmonic,
    ParallelSum,
}

/// An error with the exit status it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn usage(error: impl Into<anyhow::Error>) -> Failure {
    Failure { code: USAGE, error: error.into() }
}

fn failed(error: impl Into<anyhow::Error>) -> Failure {
    Failure { code: FAILED, error: error.into() }
}

/// Input problems count as usage errors, numerical refusals as failures.
fn classify(e: Error) -> Failure {
    match e {
        Error::UnknownSuite(_) | Error::InvalidArgument(_) | Error::Format(_) | Error::Io { .. } => usage(e),
        other => failed(other),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Verify { suite, seed, trials, dims, tol, report } => verify(&suite, seed, trials, &dims, tol, report.as_deref()),
        Command::Falsify { map, grade, trials, seed, dim, expect } => falsify(&map, &grade, trials, seed, dim, expect),
        Command::Demo { case, alpha } => demo(case, alpha),
        Command::Mean { kind, a, b, output } => mean_files(kind, &a, &b, &output),
    }
}

fn print_summary(r: &SuiteReport) {
    let margin = r.min_margin.map_or("n/a".to_string(), |m| format!("{m:e}"));
    println!(
        "{:<14} checks {:>6}  failures {:>4}  min margin {margin}",
        r.suite_id,
        r.checks_run,
        r.failures.len()
    );
}

fn verify(suite: &str, seed: u64, trials: usize, dims: &[usize], margin: f64, report: Option<&Path>) -> Result<u8, Failure> {
    let tol = Tolerances::default().with_margin(margin);
    let r = run_suite(suite, seed, trials, dims, &tol).map_err(classify)?;
    for sub in &r.suites {
        print_summary(sub);
    }
    print_summary(&r);
    for f in r.failures.iter().take(20) {
        match (&f.margin, &f.error) {
            (_, Some(e)) => println!("FAIL {} trial {} dim {}: {e}", f.suite_id, f.trial_index, f.dim),
            (m, None) => println!(
                "FAIL {} trial {} dim {} digest {}: margin {:e}",
                f.suite_id,
                f.trial_index,
                f.dim,
                f.instance_digest,
                m.unwrap_or(f64::NAN)
            ),
        }
    }
    println!("wall time {:.3} s", r.wall_time);
    if let Some(path) = report {
        let mut text = serde_json::to_string_pretty(&r).map_err(failed)?;
        text.push('\n');
        std::fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(usage)?;
    }
    Ok(if r.passed() { 0 } else { FAILED })
}

fn falsify(map: &str, grade: &str, trials: usize, seed: u64, dim: usize, expect: Option<Expect>) -> Result<u8, Failure> {
    let tol = Tolerances::default();
    let grade = Grade::parse(grade).map_err(usage)?;
    let spec: MapSpec = map.parse().map_err(usage)?;
    let map = spec
        .resolve(dim, |p| read_matrix(p), &tol)
        .map_err(usage)?;
    let outcome = falsify_grade(&map, grade, trials, seed, &tol).map_err(classify)?;
    let expected = match expect {
        Some(Expect::Found) => true,
        Some(Expect::None) => false,
        None => map.claimed_grade() < grade,
    };
    println!("map {map} (claimed {}), tested grade {grade}", map.claimed_grade());
    match (&outcome.witness, &outcome.image, &outcome.source) {
        (Some(w), Some(img), Some(src)) => {
            let source = match src {
                WitnessSource::Canonical(name) => format!("canonical block {name}"),
                WitnessSource::Random { trial } => format!("random trial {trial}"),
            };
            println!("witness found: {source}");
            println!("block:\n{}", w.assembled());
            println!("image:\n{}", img.assembled());
            println!("image min eigenvalue {:e}", outcome.min_eig);
        }
        _ => println!(
            "no witness in {} trials (smallest image eigenvalue {:e}); inconclusive",
            outcome.trials_run, outcome.min_eig
        ),
    }
    let matched = outcome.found == expected;
    println!("expected {}: {}", if expected { "a witness" } else { "none" }, if matched { "ok" } else { "MISMATCH" });
    Ok(if matched { 0 } else { FAILED })
}

fn demo(case: Case, alpha: f64) -> Result<u8, Failure> {
    let case = match case {
        Case::MoorePenrose => DemoCase::MoorePenrose,
        Case::DetShift => DemoCase::DetShift,
        Case::Transpose => DemoCase::Transpose,
    };
    let r = demo_paper(case, alpha).map_err(classify)?;
    println!("case {} with map {}", r.case, r.map);
    println!("block:\n{}", r.input);
    println!("block eigenvalues {:?}", r.input_eigenvalues);
    println!("image:\n{}", r.image);
    println!("image eigenvalues {:?}", r.image_eigenvalues);
    println!("image min eigenvalue {:?}", r.image_min_eig);
    println!("image determinant {:?}", r.image_determinant);
    println!("block PSD {}, image PSD {}", r.input_psd, r.image_psd);
    Ok(if r.is_witness() { 0 } else { FAILED })
}

fn mean_files(kind: Kind, a: &Path, b: &Path, output: &Path) -> Result<u8, Failure> {
    let tol = Tolerances::default();
    let load = |p: &Path| -> Result<HermitianView, Failure> {
        let m = read_matrix(p).map_err(classify)?;
        HermitianView::new(&m, &tol)
            .with_context(|| format!("{} is not Hermitian", p.display()))
            .map_err(usage)
    };
    let (va, vb) = (load(a)?, load(b)?);
    let kind = match kind {
        Kind::Geometric => MeanKind::Geometric,
        Kind::Harmonic => MeanKind::Harmonic,
        Kind::ParallelSum => MeanKind::ParallelSum,
    };
    let m = mean(kind, &va, &vb, &tol).map_err(classify)?;
    write_matrix(output, &m).map_err(classify)?;
    println!("{}:\n{m}", kind.name());
    Ok(0)
}

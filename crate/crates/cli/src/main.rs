//! `nngr`: exterior algebra queries, containment constructions, chamber charts and convexoid
//! maps for the totally nonnegative Grassmannian.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 for malformed input.

mod commands;
mod convexoid_map;
mod input;
mod report;
mod sweep;

use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use nngr_core::lemmas::EpsilonSearch;
use nngr_core::rational;

use report::RunReport;
use sweep::SweepParams;

#[derive(Parser, Debug)]
#[command(name = "nngr", version, about = "Toolkit for the totally nonnegative Grassmannian G(k,n)≥0")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed for sampled sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of samples for sweeps.
    #[arg(long, global = true, default_value_t = 100)]
    samples: usize,
    /// Grade k.
    #[arg(long, global = true)]
    k: Option<usize>,
    /// Ambient dimension n.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Round-trip tolerance.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,
    /// Worker threads for sample evaluation (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Write the JSON output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    /// Per-sample CSV for `roundtrip` and `selftest`.
    #[arg(long, global = true)]
    csv: Option<std::path::PathBuf>,
    /// First ε tried by the positive constructions, as "p/q".
    #[arg(long, global = true, default_value = "1/2")]
    epsilon_initial: String,
    /// Ratio between successive ε candidates, as "p/q".
    #[arg(long, global = true, default_value = "1/2")]
    epsilon_factor: String,
    /// Maximum number of ε candidates.
    #[arg(long, global = true, default_value_t = 64)]
    epsilon_max_iter: usize,
    /// Use the strictly positive constructions.
    #[arg(long, global = true)]
    positive: bool,
    /// Include wall time in reports (reports are then no longer byte-reproducible).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Wedge product of multivectors.
    Wedge { inputs: Vec<String> },
    /// Maximal minors of a plane matrix.
    Plucker {
        input: String,
        /// Rescale to coefficient sum one (or leading coefficient one).
        #[arg(long)]
        normalize: bool,
    },
    /// Decomposability, sign class and normalization of a k-vector. Fails unless it is a point of G(k,n)≥0.
    Check { input: String },
    /// Contained (k−1)-vector of the same sign class.
    Shrink { input: String },
    /// Containing (k+1)-vector of the same sign class.
    Extend { input: String },
    /// Chamber coordinates (t, η, ω) of a point.
    Split { input: String },
    /// Point from chamber coordinates.
    Assemble { input: String },
    /// Ball chart of a point.
    Chart { input: String },
    /// Point of G(k,n)≥0 from ball coordinates (needs --k and --n).
    ChartInverse { input: String },
    /// Chart round trips on seeded samples.
    Roundtrip,
    /// Map points of a grid-interpolated convexoid onto the half-ball.
    ConvexoidMap { input: String },
    /// Whole-pipeline checks on seeded samples.
    Selftest,
}

enum Outcome {
    Value(Value, bool),
    Report(RunReport),
}

fn require(x: Option<usize>, flag: &str) -> Result<usize> {
    x.with_context(|| format!("{flag} is required"))
}

fn sweep_params(cli: &Cli) -> Result<SweepParams> {
    let p = SweepParams { k: require(cli.k, "--k")?, n: require(cli.n, "--n")?, samples: cli.samples, seed: cli.seed, tol: cli.tol };
    p.validate()?;
    Ok(p)
}

fn epsilon(cli: &Cli) -> Result<EpsilonSearch> {
    Ok(EpsilonSearch {
        initial: rational::parse(&cli.epsilon_initial).context("--epsilon-initial")?,
        shrink_factor: rational::parse(&cli.epsilon_factor).context("--epsilon-factor")?,
        max_iterations: cli.epsilon_max_iter,
    })
}

fn lemma_params(cli: &Cli) -> Value {
    json!({
        "epsilon_initial": cli.epsilon_initial,
        "epsilon_factor": cli.epsilon_factor,
        "epsilon_max_iter": cli.epsilon_max_iter,
    })
}

fn run(cli: &Cli) -> Result<Outcome> {
    let value = |v: Value| Ok(Outcome::Value(v, true));
    match &cli.command {
        Command::Wedge { inputs } => value(commands::wedge(inputs)?),
        Command::Plucker { input, normalize } => value(commands::plucker(input, *normalize)?),
        Command::Check { input } => {
            let (v, ok) = commands::check(input)?;
            Ok(Outcome::Value(v, ok))
        }
        Command::Shrink { input } => value(commands::shrink(input, cli.positive, &commands::lemmas(epsilon(cli)?)?)?),
        Command::Extend { input } => value(commands::extend(input, cli.positive, &commands::lemmas(epsilon(cli)?)?)?),
        Command::Split { input } => value(commands::split_point(input)?),
        Command::Assemble { input } => value(commands::assemble_triple(input)?),
        Command::Chart { input } => value(commands::chart(input)?),
        Command::ChartInverse { input } => value(commands::chart_inverse(input, require(cli.k, "--k")?, require(cli.n, "--n")?)?),
        Command::Roundtrip => {
            let p = sweep_params(cli)?;
            let (checks, samples) = sweep::roundtrip(&p)?;
            write_csv(cli, &p, &samples)?;
            Ok(Outcome::Report(RunReport::new("roundtrip", p.to_json(), checks, None)))
        }
        Command::Selftest => {
            let p = sweep_params(cli)?;
            let lemmas = commands::lemmas(epsilon(cli)?)?;
            let mut params = p.to_json();
            params["lemmas"] = lemma_params(cli);
            let (checks, samples) = sweep::selftest(&p, &lemmas)?;
            write_csv(cli, &p, &samples)?;
            Ok(Outcome::Report(RunReport::new("selftest", params, checks, None)))
        }
        Command::ConvexoidMap { input } => {
            let spec: convexoid_map::MapInput = input::parse(input, "convexoid map input")?;
            let params = json!({"tol": cli.tol, "points": spec.points.len()});
            let (checks, mapped) = convexoid_map::run(spec, cli.tol)?;
            Ok(Outcome::Report(RunReport::new("convexoid-map", params, checks, Some(mapped))))
        }
    }
}

fn write_csv(cli: &Cli, p: &SweepParams, samples: &[sweep::ChartSample]) -> Result<()> {
    if let Some(path) = &cli.csv {
        let bytes = sweep::csv_bytes(p, samples)?;
        std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let outcome = match pool.install(|| run(&cli)) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let (text, ok) = match outcome {
        Outcome::Value(v, ok) => (v.to_string(), ok),
        Outcome::Report(mut r) => {
            if cli.timing {
                r.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
            }
            let ok = r.pass;
            (serde_json::to_string_pretty(&r).expect("reports serialize"), ok)
        }
    };
    if let Err(e) = emit(&cli, &text) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

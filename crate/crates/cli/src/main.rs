use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::Value;
use tnormed::verify::{self, Config, Fault, Sizes, Suite};
use tnormed::{parse_model, Approx, Exact, Model, Policy};

mod commands;

/// Possibility capacities, t-normed integrals and max-* convexity on finite models.
#[derive(Parser)]
#[command(name = "tnormed", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    opts: Opts,
}

#[derive(Args, Clone, Debug)]
pub struct Opts {
    /// T-norm: min, product or lukasiewicz. Overrides the model's choice.
    /// For verify-laws, a comma-separated list restricting the lanes.
    #[arg(long, global = true)]
    tnorm: Option<String>,

    /// Grid resolution: ambient grid for `hull`, value grid for `verify-laws`.
    #[arg(long, global = true)]
    grid: Option<u32>,

    /// Arithmetic: `grid:<n>` (exact rationals on {0, 1/n, ..., 1}) or `float`.
    #[arg(long, global = true, value_parser = parse_policy)]
    policy: Option<Policy>,

    /// Write a JSON report to this path.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Integral of a function against a capacity or density, with the threshold trace.
    Integrate {
        model: PathBuf,
        /// Capacity or density to integrate against (default: the first one).
        #[arg(long)]
        capacity: Option<String>,
        /// Function to integrate (default: the first one).
        #[arg(long)]
        function: Option<String>,
    },
    /// Possibility, necessity and maxitivity verdicts for a capacity.
    /// Exits 1 when a witness pair breaks maxitivity of the integral.
    CheckCapacity {
        model: PathBuf,
        #[arg(long)]
        capacity: Option<String>,
    },
    /// The dual capacity `1 - nu(X \ A)`.
    Dual {
        model: PathBuf,
        #[arg(long)]
        capacity: Option<String>,
    },
    /// Image of a capacity under a map of spaces.
    Pushforward {
        model: PathBuf,
        #[arg(long)]
        capacity: Option<String>,
        #[arg(long)]
        map: Option<String>,
    },
    /// Flattens an outer possibility into a capacity table.
    MonadMul {
        model: PathBuf,
        #[arg(long)]
        outer: Option<String>,
    },
    /// Barycenter of a normal form over coordinate points.
    Barycenter {
        model: PathBuf,
        #[arg(long)]
        measure: Option<String>,
    },
    /// Hull of a point set, or membership of a query point with its weights.
    Hull {
        model: PathBuf,
        #[arg(long)]
        points: Option<String>,
        /// Query point (default: the first `point` declaration, if any).
        #[arg(long)]
        query: Option<String>,
    },
    /// Runs a seeded law-verification suite. Exits 1 on any counterexample.
    VerifyLaws {
        #[arg(long, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// `key=value,...` over capacities, instances, closed-form,
        /// residuation, algebra, hull, quotient, preimage; or one number
        /// for all of them.
        #[arg(long)]
        sizes: Option<Sizes>,
        /// Mutates one site of the implementation to test the suite itself:
        /// broken-monotonicity, wrong-merge-policy or off-by-one.
        #[arg(long)]
        inject_fault: Option<Fault>,
        /// Reruns a single instance, given as `check#instance`.
        #[arg(long)]
        replay: Option<String>,
    },
}

fn parse_policy(s: &str) -> Result<Policy, String> {
    Policy::parse(s).map_err(|e| e.to_string())
}

/// What a command produced: text for stdout, a JSON document, and whether
/// it found a counterexample.
pub struct Outcome {
    pub text: String,
    pub json: Value,
    pub counterexample: bool,
}

fn load(path: &Path) -> anyhow::Result<Model> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_model(&text).with_context(|| format!("parsing {}", path.display()))
}

/// The policy a model runs under: the flag, else the model's own, else
/// exact rationals.
fn effective_policy(opts: &Opts, model: &Model) -> anyhow::Result<Option<Policy>> {
    let policy = opts.policy.or(model.policy);
    if let Some(Policy::ExactGrid(n)) = policy {
        let d = model.common_denominator();
        if n % d != 0 {
            bail!("model values lie on the grid of resolution {d}, which does not refine to {n}");
        }
    }
    Ok(policy)
}

fn run_model(opts: &Opts, command: &Command) -> anyhow::Result<Outcome> {
    let path = match command {
        Command::Integrate { model, .. }
        | Command::CheckCapacity { model, .. }
        | Command::Dual { model, .. }
        | Command::Pushforward { model, .. }
        | Command::MonadMul { model, .. }
        | Command::Barycenter { model, .. }
        | Command::Hull { model, .. } => model,
        Command::VerifyLaws { .. } => unreachable!(),
    };
    let model = load(path)?;
    match effective_policy(opts, &model)? {
        Some(Policy::Float) => commands::run::<Approx>(opts, &model, None, command),
        Some(Policy::ExactGrid(n)) => commands::run::<Exact>(opts, &model, Some(n), command),
        None => commands::run::<Exact>(opts, &model, None, command),
    }
}

fn run_verify(opts: &Opts, command: &Command) -> anyhow::Result<Outcome> {
    let Command::VerifyLaws { suite, seed, sizes, inject_fault, replay } = command else {
        unreachable!()
    };
    let config = Config {
        seed: *seed,
        sizes: sizes.unwrap_or_default(),
        policy: opts.policy,
        grid: opts.grid,
        tnorms: opts.tnorm.as_ref().map(|t| t.split(',').map(|s| s.trim().to_string()).collect()),
        fault: *inject_fault,
    };
    if let Some(target) = replay {
        let (check, instance) = target
            .rsplit_once('#')
            .and_then(|(c, i)| Some((c, i.parse::<usize>().ok()?)))
            .with_context(|| format!("replay target `{target}` is not `check#instance`"))?;
        let report = verify::replay(&config, check, instance)?;
        let mut text = format!("{check}#{instance}: {} evaluations", report.checked);
        if report.is_clean() {
            text.push_str(", pass");
        }
        for v in &report.violations {
            text.push_str(&format!("\n  {}: {} | left {} | right {}", v.law, v.inputs, v.left, v.right));
        }
        return Ok(Outcome {
            text,
            json: serde_json::to_value(&report)?,
            counterexample: !report.is_clean(),
        });
    }
    let report = verify::run_suite(*suite, &config)?;
    Ok(Outcome {
        text: report.to_string(),
        json: serde_json::to_value(&report)?,
        counterexample: !report.passed(),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::VerifyLaws { .. } => run_verify(&cli.opts, &cli.command),
        _ => run_model(&cli.opts, &cli.command),
    };
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    println!("{}", outcome.text);
    if let Some(path) = &cli.opts.report {
        let written = serde_json::to_string_pretty(&outcome.json)
            .map_err(anyhow::Error::from)
            .and_then(|s| fs::write(path, s + "\n").with_context(|| format!("writing {}", path.display())));
        if let Err(e) = written {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(u8::from(outcome.counterexample))
}

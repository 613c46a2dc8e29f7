//! Library half of the `augustin` command-line tool.

pub mod checks;
pub mod format;

use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context};
use augustin::channels::RNG_ALGORITHM;
use augustin::{
    channels::example1_closed_form, solve_augustin_mean, Example1, ExtendedReal, Order, SolveReport,
    SolverOptions, TiltingOrder,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::checks::{run_check, CheckConfig, Property};
use crate::format::{csv_ext, csv_number, json_ext, report_csv, report_json, ChannelFile, Units};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "augustin", version, about = "Augustin information and Augustin means of finite channels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the Augustin mean and information at one order.
    Solve(SolveArgs),
    /// Compute the Augustin information over a list of orders.
    Sweep(SweepArgs),
    /// Run a randomized property check.
    Check(CheckArgs),
    /// Discretized partially noiseless channel against its closed form.
    Example1(Example1Args),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Tilting order in (0, 1]; defaults to min(1, 1/alpha).
    #[arg(long)]
    pub beta: Option<f64>,
    /// Stop once the total-variation residual is at most this.
    #[arg(long, default_value_t = augustin::augustin::DEFAULT_TOLERANCE)]
    pub tol: f64,
    #[arg(long, default_value_t = augustin::augustin::DEFAULT_MAX_ITER)]
    pub max_iter: usize,
}

impl SolverArgs {
    fn options(&self) -> anyhow::Result<SolverOptions> {
        let mut options = SolverOptions::default().with_tol(self.tol).with_max_iter(self.max_iter);
        if let Some(beta) = self.beta {
            options = options.with_beta(TiltingOrder::new(beta)?);
        }
        Ok(options)
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Report information in bits instead of nats.
    #[arg(long)]
    pub bits: bool,
}

impl OutputArgs {
    fn units(&self) -> Units {
        if self.bits {
            Units::Bits
        } else {
            Units::Nats
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Channel file: {"W": [[...], ...], "P": [...]}.
    pub channel: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub channel: PathBuf,
    /// Comma-separated orders, or a range `start:step:stop`.
    #[arg(long, allow_hyphen_values = true)]
    pub alphas: String,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// One of pinsker, monotonicity, sandwich, homogeneity, uniqueness, restriction.
    pub property: String,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Alphabet sizes as `INPUTSxOUTPUTS`.
    #[arg(long, default_value = "3x3")]
    pub sizes: String,
    #[arg(long, default_value_t = augustin::augustin::DEFAULT_TOLERANCE)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Example1Args {
    #[arg(long)]
    pub gamma: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Comma-separated grid sizes; each uses n = m.
    #[arg(long, default_value = "16,32,64,128")]
    pub grid: String,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Text produced by a command, plus its exit code and any warnings.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub output: String,
    pub warnings: Vec<String>,
    pub code: i32,
}

/// Parses `0.5,1,2` or `0.5:0.5:2.0` into sorted, deduplicated orders.
pub fn parse_alphas(spec: &str) -> anyhow::Result<Vec<f64>> {
    let spec = spec.trim();
    if spec.is_empty() {
        bail!("the alpha list is empty");
    }
    let mut alphas = if spec.contains(':') {
        let parts: Vec<f64> = spec
            .split(':')
            .map(|s| s.trim().parse::<f64>().with_context(|| format!("bad number {s:?} in range")))
            .collect::<anyhow::Result<_>>()?;
        let [start, step, stop] = parts[..] else {
            bail!("a range must look like start:step:stop, got {spec:?}");
        };
        if !(step > 0.0) || !step.is_finite() || !start.is_finite() || !stop.is_finite() {
            bail!("range {spec:?} needs a positive step and finite endpoints");
        }
        if stop < start {
            bail!("range {spec:?} is empty");
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize;
        (0..=count).map(|k| start + k as f64 * step).collect()
    } else {
        spec.split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().parse::<f64>().with_context(|| format!("bad order {s:?}")))
            .collect::<anyhow::Result<Vec<_>>>()?
    };
    if alphas.is_empty() {
        bail!("the alpha list is empty");
    }
    for &a in &alphas {
        Order::new(a)?;
    }
    alphas.sort_by(f64::total_cmp);
    alphas.dedup();
    Ok(alphas)
}

fn parse_sizes(spec: &str) -> anyhow::Result<(usize, usize)> {
    let (a, b) = spec
        .split_once(['x', 'X'])
        .ok_or_else(|| anyhow!("sizes must look like 3x4, got {spec:?}"))?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

fn parse_grid(spec: &str) -> anyhow::Result<Vec<usize>> {
    let grid: Vec<usize> = spec
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<usize>().with_context(|| format!("bad grid size {s:?}")))
        .collect::<anyhow::Result<_>>()?;
    if grid.is_empty() {
        bail!("the grid list is empty");
    }
    Ok(grid)
}

fn convergence_code(reports: &[&SolveReport]) -> i32 {
    if reports.iter().all(|r| r.converged) {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    }
}

pub fn solve(args: &SolveArgs) -> anyhow::Result<Outcome> {
    let alpha = Order::new(args.alpha)?;
    let (channel, input) = ChannelFile::read(&args.channel)?;
    let report = solve_augustin_mean(alpha, &input, &channel, &args.solver.options()?)?;
    let units = args.output.units();
    let output = match args.format {
        OutputFormat::Json => report_json(&report, &channel, &input, units),
        OutputFormat::Csv => report_csv(&report, units),
    };
    let mut warnings = Vec::new();
    if !report.converged {
        warnings.push(format!(
            "did not converge after {} iterations (residual {:e})",
            report.iterations, report.residual_tv
        ));
    }
    Ok(Outcome {
        output,
        warnings,
        code: convergence_code(&[&report]),
    })
}

pub fn sweep(args: &SweepArgs) -> anyhow::Result<Outcome> {
    let alphas = parse_alphas(&args.alphas)?;
    let (channel, input) = ChannelFile::read(&args.channel)?;
    let options = args.solver.options()?;
    let reports = alphas
        .par_iter()
        .map(|&a| solve_augustin_mean(Order::new(a)?, &input, &channel, &options))
        .collect::<augustin::Result<Vec<_>>>()?;
    let units = args.output.units();
    let output = match args.format {
        OutputFormat::Csv => {
            let mut out = String::from("alpha,information,iterations,residual_tv,converged\n");
            for r in &reports {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    csv_number(r.alpha.value()),
                    csv_ext(units.convert_ext(r.information)),
                    r.iterations,
                    csv_number(r.residual_tv),
                    r.converged
                )
                .unwrap();
            }
            out
        }
        OutputFormat::Json => {
            let rows: Vec<_> = reports
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "alpha": r.alpha.value(),
                        "information": json_ext(units.convert_ext(r.information)),
                        "iterations": r.iterations,
                        "residual_tv": r.residual_tv,
                        "converged": r.converged,
                        "mean": r.mean.as_slice(),
                    })
                })
                .collect();
            let value = serde_json::json!({ "units": units.name(), "sweep": rows });
            serde_json::to_string_pretty(&value)? + "\n"
        }
    };
    let warnings = reports
        .iter()
        .filter(|r| !r.converged)
        .map(|r| format!("alpha = {} did not converge after {} iterations", r.alpha, r.iterations))
        .collect();
    Ok(Outcome {
        output,
        warnings,
        code: convergence_code(&reports.iter().collect::<Vec<_>>()),
    })
}

pub fn check(args: &CheckArgs) -> anyhow::Result<Outcome> {
    let property: Property = args.property.parse()?;
    let (inputs, outputs) = parse_sizes(&args.sizes)?;
    let config = CheckConfig {
        trials: args.trials,
        seed: args.seed,
        inputs,
        outputs,
        tol: args.tol,
    };
    let trials = run_check(property, &config)?;
    let mut out = String::new();
    writeln!(
        out,
        "# property={property} trials={} seed={} sizes={inputs}x{outputs} rng={RNG_ALGORITHM} threshold={:e}",
        config.trials,
        config.seed,
        property.threshold()
    )
    .unwrap();
    out.push_str("trial,alpha,worst_slack,pass\n");
    for t in &trials {
        let alpha = t.alpha.map(csv_number).unwrap_or_default();
        writeln!(out, "{},{alpha},{},{}", t.trial, csv_number(t.worst_slack), t.pass).unwrap();
    }
    let passed = trials.iter().filter(|t| t.pass).count();
    let worst = trials.iter().map(|t| t.worst_slack).fold(f64::INFINITY, f64::min);
    writeln!(
        out,
        "# {property}: {passed}/{} passed, worst slack {}",
        trials.len(),
        csv_number(worst)
    )
    .unwrap();
    Ok(Outcome {
        output: out,
        warnings: Vec::new(),
        code: if passed == trials.len() { EXIT_OK } else { EXIT_INPUT },
    })
}

pub fn example1(args: &Example1Args) -> anyhow::Result<Outcome> {
    let alpha = Order::new(args.alpha)?.require_finite()?;
    let grid = parse_grid(&args.grid)?;
    let closed = example1_closed_form(args.gamma, alpha.value())?;
    let options = args.solver.options()?;
    let reports = grid
        .par_iter()
        .map(|&n| {
            let ex = Example1::new(args.gamma, n, n)?;
            solve_augustin_mean(alpha, &ex.input, &ex.channel, &options)
        })
        .collect::<augustin::Result<Vec<_>>>()?;

    let mut warnings = Vec::new();
    if alpha.value() >= 1.0 {
        warnings.push(format!(
            "alpha = {alpha} >= 1: the limit is infinite, so only the discretized values are reported"
        ));
    }
    let mut out = String::from("n,m,I_computed,I_closed_form,rel_error\n");
    for (&n, r) in grid.iter().zip(&reports) {
        let rel = match (r.information, closed) {
            (ExtendedReal::Finite(i), ExtendedReal::Finite(c)) => csv_number((i - c).abs() / c.abs()),
            _ => String::new(),
        };
        writeln!(out, "{n},{n},{},{},{rel}", csv_ext(r.information), csv_ext(closed)).unwrap();
        if !r.converged {
            warnings.push(format!("n = {n} did not converge after {} iterations", r.iterations));
        }
    }
    Ok(Outcome {
        output: out,
        warnings,
        code: convergence_code(&reports.iter().collect::<Vec<_>>()),
    })
}

fn out_path(command: &Command) -> Option<&PathBuf> {
    match command {
        Command::Solve(a) => a.output.out.as_ref(),
        Command::Sweep(a) => a.output.out.as_ref(),
        Command::Check(a) => a.out.as_ref(),
        Command::Example1(a) => a.out.as_ref(),
    }
}

pub fn execute(cli: &Cli) -> anyhow::Result<Outcome> {
    match &cli.command {
        Command::Solve(a) => solve(a),
        Command::Sweep(a) => sweep(a),
        Command::Check(a) => check(a),
        Command::Example1(a) => example1(a),
    }
}

/// Runs the tool on already-parsed arguments and returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    match execute(cli) {
        Ok(outcome) => {
            for w in &outcome.warnings {
                eprintln!("warning: {w}");
            }
            let written = match out_path(&cli.command) {
                Some(path) => std::fs::write(path, &outcome.output)
                    .with_context(|| format!("cannot write {}", path.display())),
                None => {
                    print!("{}", outcome.output);
                    Ok(())
                }
            };
            match written {
                Ok(()) => outcome.code,
                Err(e) => {
                    eprintln!("error: {e:#}");
                    EXIT_INPUT
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_INPUT
        }
    }
}

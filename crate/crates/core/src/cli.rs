//! Command-line front end. [`run_cli`] does all the work and returns the
//! exit code with captured output, so the binary is a thin wrapper and the
//! whole interface is testable in-process.
//!
//! Exit codes: 0 on success, 1 on domain or computation errors (stderr
//! starts with an `E_…:` code), 2 on usage errors.

use std::fs;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bias_variance::Params;
use crate::config::parse_config;
use crate::decomposition::decompose;
use crate::divergence::divergence;
use crate::error::{Error, Result};
use crate::exp_family::{builtin_family, log_likelihood_bregman, log_likelihood_direct};
use crate::generator::{builtin_generator, check_membership};
use crate::io::{parse_samples, write_report_csv, ReportRow, SamplesFile};
use crate::minimizers::{left_minimizer, right_minimizer, Side};
use crate::numeric::{fmt_g17, fmt_point};

#[derive(Debug, Parser)]
#[command(name = "bregman", version, about = "Bregman divergences, their decompositions, and bias-variance experiments")]
struct Cli {
    /// Worker threads for parallel sections (default: one per core).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate D_F(x‖y).
    Divergence(DivergenceArgs),
    /// Left or right minimizer of expected divergence over a sample file.
    Minimize(MinimizeArgs),
    /// Split expected divergence into total,proximity,spread,residual.
    Decompose(DecomposeArgs),
    /// Run a bias-variance experiment described by a config file.
    BiasVariance(BiasVarianceArgs),
    /// Compare the direct and divergence-based exponential-family log-likelihoods.
    Expfam(ExpfamArgs),
}

#[derive(Debug, Args)]
struct DivergenceArgs {
    #[arg(long)]
    generator: String,
    /// First argument, comma-separated coordinates.
    #[arg(long, required = true, value_delimiter = ',', allow_hyphen_values = true)]
    x: Vec<f64>,
    /// Second argument, comma-separated coordinates.
    #[arg(long, required = true, value_delimiter = ',', allow_hyphen_values = true)]
    y: Vec<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MinimizerSide {
    Left,
    Right,
}

#[derive(Debug, Args)]
struct MinimizeArgs {
    #[arg(long)]
    generator: String,
    #[arg(long, value_enum)]
    side: MinimizerSide,
    /// CSV with one point per row and an optional trailing `weight` column.
    #[arg(long)]
    samples: String,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RandomSide {
    First,
    Second,
}

#[derive(Debug, Args)]
struct DecomposeArgs {
    #[arg(long)]
    generator: String,
    #[arg(long)]
    samples: String,
    /// The fixed point s, comma-separated coordinates.
    #[arg(long, required = true, value_delimiter = ',', allow_hyphen_values = true)]
    point: Vec<f64>,
    /// Which divergence argument is random.
    #[arg(long, value_enum)]
    side: RandomSide,
}

#[derive(Debug, Args)]
struct BiasVarianceArgs {
    #[arg(long)]
    config: String,
}

#[derive(Debug, Args)]
struct ExpfamArgs {
    /// bernoulli, poisson or gaussian_fixed_var.
    #[arg(long)]
    family: String,
    #[arg(long, allow_hyphen_values = true)]
    eta: f64,
    #[arg(long, allow_hyphen_values = true)]
    x: f64,
    /// Variance of gaussian_fixed_var (default 1).
    #[arg(long)]
    sigma2: Option<f64>,
}

/// Exit code and captured output of one CLI invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the CLI on `args` (without the program name).
pub fn run_cli<I, T>(args: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("bregman")).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            return if code == 0 {
                CliOutput { code, stdout: text, stderr: String::new() }
            } else {
                CliOutput { code: 2, stdout: String::new(), stderr: text }
            };
        }
    };
    let mut stderr = String::new();
    let result = match cli.threads {
        None => execute(&cli.command, &mut stderr),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build()
            .map_err(|e| Error::Io(format!("cannot start thread pool: {}", e)))
            .and_then(|pool| pool.install(|| execute(&cli.command, &mut stderr))),
    };
    match result {
        Ok(stdout) => CliOutput { code: 0, stdout, stderr },
        Err(e) => {
            stderr.push_str(&format!("{}: {}\n", e.code(), e));
            CliOutput { code: 1, stdout: String::new(), stderr }
        }
    }
}

fn read_file(path: &str) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {}", path, e)))
}

fn read_samples(path: &str, stderr: &mut String) -> Result<SamplesFile> {
    let samples = parse_samples(&read_file(path)?)?;
    if let Some(w) = &samples.warning {
        stderr.push_str(&format!("warning: {}: {}\n", path, w));
    }
    Ok(samples)
}

fn execute(command: &Command, stderr: &mut String) -> Result<String> {
    match command {
        Command::Divergence(a) => {
            let gen = builtin_generator(&a.generator, a.x.len())?;
            Ok(format!("{}\n", fmt_g17(divergence(&gen, &a.x, &a.y)?)))
        }
        Command::Minimize(a) => {
            let dist = read_samples(&a.samples, stderr)?.distribution;
            let gen = builtin_generator(&a.generator, dist.dimension())?;
            let point = match a.side {
                MinimizerSide::Left => left_minimizer(&gen, &dist)?,
                MinimizerSide::Right => {
                    for (i, p) in dist.support().iter().enumerate() {
                        check_membership(gen.domain(), p).map_err(|e| Error::at(i, e))?;
                    }
                    right_minimizer(&dist)?
                }
            };
            Ok(format!("{}\n", fmt_point(&point)))
        }
        Command::Decompose(a) => {
            let dist = read_samples(&a.samples, stderr)?.distribution;
            let gen = builtin_generator(&a.generator, dist.dimension())?;
            let side = match a.side {
                RandomSide::First => Side::FirstArgRandom,
                RandomSide::Second => Side::SecondArgRandom,
            };
            let r = decompose(&gen, side, &dist, &a.point)?;
            Ok(format!(
                "{},{},{},{}\n",
                fmt_g17(r.total),
                fmt_g17(r.proximity),
                fmt_g17(r.spread),
                fmt_g17(r.residual)
            ))
        }
        Command::BiasVariance(a) => {
            let config = parse_config(&read_file(&a.config)?)?;
            let rows: Vec<ReportRow> = config
                .run()?
                .iter()
                .map(|(grid, report)| ReportRow::new(*grid, report))
                .collect();
            Ok(write_report_csv(&rows))
        }
        Command::Expfam(a) => {
            let mut fixed = Params::new();
            if let Some(s2) = a.sigma2 {
                fixed.insert("sigma2".to_string(), s2);
            }
            let spec = builtin_family(&a.family, &fixed)?;
            let eta = [a.eta];
            let direct = log_likelihood_direct(&spec, &eta, a.x)?;
            let bregman = log_likelihood_bregman(&spec, &eta, a.x)?;
            Ok(format!(
                "{},{},{}\n",
                fmt_g17(direct),
                fmt_g17(bregman),
                fmt_g17((direct - bregman).abs())
            ))
        }
    }
}

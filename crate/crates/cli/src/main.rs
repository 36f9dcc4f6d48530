//! `bjpc`: fit, interval, region, design and table-reproduction commands for
//! two Weibull populations under balanced joint progressive censoring.
//!
//! Exit status: 0 success, 1 I/O, 2 usage, 3 invalid input, 4 numerical failure.

mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use bjpc::dataset::Dataset;
use bjpc::estimate::{fit_amle_with, fit_mle, XiRule};
use bjpc::intervals::{asymptotic_ci, bootstrap_ci, IntervalEstimate};
use bjpc::ocs::{
    enumerate_schemes, search_schemes, SchemeFamily, SearchConfig, DEFAULT_ENUMERATION_CAP,
};
use bjpc::region::{joint_region, BoundaryRow, DEFAULT_GRID};
use bjpc::reproduce::{reproduce, ReproOptions};
use bjpc::rng::RngStream;
use bjpc::simulate::{scheme_id, simulate_spacings};
use bjpc::{CensoringScheme, Error, Execution, Probability, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use input::{parse_list, parse_params, DataArgs};
use report::{sig, Output};

#[derive(Debug, Parser)]
#[command(
    name = "bjpc",
    version,
    about = "Weibull inference under balanced joint progressive censoring"
)]
struct Cli {
    /// Seed for every random draw.
    #[arg(long, global = true, env = "BJPC_SEED", default_value_t = 2017)]
    seed: u64,
    /// Run Monte-Carlo loops on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    /// Print the machine-readable result instead of the summary.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the machine-readable result to this file.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Draw a BJPC sample from known parameters.
    Simulate {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        /// `R_1,...,R_{k-1}` (default all zero).
        #[arg(long, value_name = "R1,R2,...")]
        removals: Option<String>,
        /// `alpha,lambda1,lambda2`.
        #[arg(long, value_name = "A,L1,L2")]
        params: String,
    },
    /// Point estimates.
    Fit {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, value_enum, default_value_t = MethodChoice::Both)]
        method: MethodChoice,
        /// AMLE expansion points.
        #[arg(long, value_enum, default_value_t = XiChoice::LogOfMean)]
        xi: XiChoice,
    },
    /// Asymptotic and bootstrap confidence intervals.
    Ci {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value_t = 0.9)]
        level: f64,
        #[arg(long, value_enum, default_value_t = IntervalChoice::Both)]
        method: IntervalChoice,
        #[arg(long, default_value_t = 1000)]
        boot_reps: usize,
    },
    /// Exact joint confidence region and its volume.
    Region {
        #[command(flatten)]
        data: DataArgs,
        /// Overall region level is `1 - gamma`.
        #[arg(long, default_value_t = 0.1)]
        gamma: f64,
        /// Shape-interval share; the default balances both parts.
        #[arg(long)]
        gamma1: Option<f64>,
        /// Trapezoid share (required with `--gamma1`).
        #[arg(long, requires = "gamma1")]
        gamma2: Option<f64>,
        /// Quadrature nodes for the volume integral.
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        /// Write `(alpha, lower, upper)` rows of the trapezoid bounds as CSV.
        #[arg(long, value_name = "CSV")]
        emit_boundary: Option<PathBuf>,
        /// Extra shape values for the boundary output.
        #[arg(long, value_name = "A1,A2,...")]
        alpha: Option<String>,
    },
    /// Rank censoring schemes by expected region volume.
    Ocs {
        /// Total units per population.
        #[arg(long)]
        m: usize,
        /// Number of observed failures.
        #[arg(long)]
        k: usize,
        /// Every admissible plan, or one removal block at each position.
        #[arg(long, value_enum, default_value_t = FamilyChoice::Exhaustive)]
        family: FamilyChoice,
        /// Removals in the single block.
        #[arg(long, required_if_eq("family", "single-block"))]
        block_size: Option<usize>,
        /// Region level is `1 - gamma`, split evenly between its parts.
        #[arg(long, default_value_t = 0.1)]
        gamma: f64,
        /// Monte-Carlo samples per scheme.
        #[arg(long, default_value_t = 5000)]
        reps: usize,
        /// Parameters at which the volume is averaged: `alpha,lambda1,lambda2`.
        #[arg(long, value_name = "A,L1,L2")]
        design_params: String,
        /// Quadrature nodes for each volume integral.
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        /// Refuse an exhaustive search over more schemes than this.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: u128,
    },
    /// Regenerate a reference table and compare.
    Reproduce {
        /// Table number, 1-13.
        table: u8,
        /// Fraction of the reference replication count.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        /// Bootstrap replications (default scales 1000).
        #[arg(long)]
        boot_reps: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodChoice {
    Mle,
    Amle,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum IntervalChoice {
    Asymptotic,
    Bootstrap,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum XiChoice {
    LogOfMean,
    MeanOfLog,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyChoice {
    Exhaustive,
    SingleBlock,
}

fn probability(v: f64, what: &str) -> Result<Probability> {
    Probability::new(v).map_err(|_| Error::Domain(format!("{what} must lie in (0, 1), got {v}")))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => match out.emit(cli.json, cli.out.as_deref()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => fail(&e),
        },
        Err(e) => fail(&e),
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(match e {
        Error::Io(_) => 1,
        Error::Parse(_) => 2,
        e if e.is_numerical() => 4,
        _ => 3,
    })
}

fn run(cli: &Cli) -> Result<Output> {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    match &cli.command {
        Command::Simulate {
            m,
            k,
            removals,
            params,
        } => {
            let removals = match removals {
                Some(r) => parse_list(r, "removals")?,
                None => vec![0; k.saturating_sub(1)],
            };
            let scheme = CensoringScheme::new(*m, *k, removals)?;
            let params = parse_params(params)?;
            let mut rng = RngStream::for_replication(cli.seed, scheme_id(&scheme), 0).rng();
            let sample = simulate_spacings(&scheme, &params, &mut rng);
            let data = Dataset::from_sample(&sample);
            let summary = format!(
                "simulated {scheme}: k1={}, k2={}, w_k={}",
                sample.k1(),
                sample.k2(),
                sig(*sample.times().last().unwrap())
            );
            Ok(Output::json(summary, serde_json::to_value(&data)?))
        }
        Command::Fit { data, method, xi } => {
            let sample = data.load()?;
            let rule = match xi {
                XiChoice::LogOfMean => XiRule::LogOfMean,
                XiChoice::MeanOfLog => XiRule::MeanOfLog,
            };
            let mut result = serde_json::Map::new();
            let mut lines = vec![format!(
                "{} (k1={}, k2={})",
                sample.scheme(),
                sample.k1(),
                sample.k2()
            )];
            lines.push(format!(
                "{:<6} {:>12} {:>12} {:>12}",
                "", "alpha", "lambda1", "lambda2"
            ));
            if matches!(method, MethodChoice::Mle | MethodChoice::Both) {
                let (fit, _) = fit_mle(&sample)?;
                lines.push(format!(
                    "{:<6} {:>12} {:>12} {:>12}",
                    "MLE",
                    sig(fit.alpha),
                    sig(fit.lambda1),
                    sig(fit.lambda2)
                ));
                result.insert("mle".into(), serde_json::to_value(fit)?);
            }
            if matches!(method, MethodChoice::Amle | MethodChoice::Both) {
                let fit = fit_amle_with(&sample, rule)?;
                lines.push(format!(
                    "{:<6} {:>12} {:>12} {:>12}",
                    "AMLE",
                    sig(fit.alpha),
                    sig(fit.lambda1),
                    sig(fit.lambda2)
                ));
                result.insert("amle".into(), serde_json::to_value(fit)?);
            }
            Ok(Output::json(lines.join("\n"), result.into()))
        }
        Command::Ci {
            data,
            level,
            method,
            boot_reps,
        } => {
            let sample = data.load()?;
            let level = probability(*level, "level")?;
            let (fit, _) = fit_mle(&sample)?;
            let mut intervals: Vec<IntervalEstimate> = Vec::new();
            let mut failed = None;
            if matches!(method, IntervalChoice::Asymptotic | IntervalChoice::Both) {
                intervals.extend(asymptotic_ci(&sample, &fit, level)?);
            }
            if matches!(method, IntervalChoice::Bootstrap | IntervalChoice::Both) {
                let boot = bootstrap_ci(&sample, &fit, level, *boot_reps, cli.seed, exec)?;
                failed = Some(boot.failed);
                intervals.extend(boot.intervals);
            }
            let mut lines = vec![format!(
                "{}% intervals at the MLE",
                sig(100.0 * level.value())
            )];
            for iv in &intervals {
                lines.push(format!(
                    "{:<8} {:<11} ({}, {})",
                    iv.parameter.to_string(),
                    format!("{:?}", iv.method).to_lowercase(),
                    sig(iv.lower),
                    sig(iv.upper)
                ));
            }
            if let Some(f) = failed.filter(|&f| f > 0) {
                lines.push(format!(
                    "{f} of {boot_reps} bootstrap refits failed and were dropped"
                ));
            }
            Ok(Output::json(
                lines.join("\n"),
                json!({ "mle": fit, "intervals": intervals, "bootstrap_failed": failed }),
            ))
        }
        Command::Region {
            data,
            gamma,
            gamma1,
            gamma2,
            grid,
            emit_boundary,
            alpha,
        } => {
            let sample = data.load()?;
            let gamma = probability(*gamma, "gamma")?;
            let split = match (gamma1, gamma2) {
                (Some(g1), Some(g2)) => {
                    Some((probability(*g1, "gamma1")?, probability(*g2, "gamma2")?))
                }
                (Some(_), None) => return Err(Error::Parse("--gamma1 needs --gamma2".into())),
                _ => None,
            };
            let region = joint_region(&sample, gamma, split, *grid)?;
            let mut rows = bjpc::region::default_boundary(&sample, &region)?;
            if let Some(extra) = alpha {
                for a in parse_list::<f64>(extra, "alpha")? {
                    if !(a > 0.0 && a.is_finite()) {
                        return Err(Error::Domain(format!(
                            "boundary alpha must be positive, got {a}"
                        )));
                    }
                    let (lower, upper) = region.sum_bounds(&sample, a);
                    rows.push(BoundaryRow {
                        alpha: a,
                        lower,
                        upper,
                    });
                }
            }
            if let Some(path) = emit_boundary {
                report::write_boundary(path, &rows)?;
            }
            let (lo, hi) = region.alpha_interval;
            let mut lines = vec![
                format!(
                    "joint region at level {} (gamma1={}, gamma2={})",
                    sig(1.0 - gamma.value()),
                    sig(region.gamma1().value()),
                    sig(region.gamma2().value())
                ),
                format!("alpha in ({}, {})", sig(lo), sig(hi)),
                format!("volume {}", sig(region.volume)),
                "alpha, lambda1+lambda2 lower, upper:".into(),
            ];
            for r in &rows {
                lines.push(format!(
                    "  {} {} {}",
                    sig(r.alpha),
                    sig(r.lower),
                    sig(r.upper)
                ));
            }
            Ok(Output::json(
                lines.join("\n"),
                json!({ "region": region, "boundary": rows }),
            ))
        }
        Command::Ocs {
            m,
            k,
            family,
            block_size,
            gamma,
            reps,
            design_params,
            grid,
            cap,
        } => {
            let params = parse_params(design_params)?;
            let family = match family {
                FamilyChoice::Exhaustive => SchemeFamily::Exhaustive,
                FamilyChoice::SingleBlock => SchemeFamily::SingleBlock {
                    size: block_size
                        .ok_or_else(|| Error::Parse("--block-size is required".into()))?,
                },
            };
            let schemes = enumerate_schemes(*m, *k, family, *cap)?;
            let config = SearchConfig {
                gamma: probability(*gamma, "gamma")?,
                reps: *reps,
                seed: cli.seed,
                grid: *grid,
                exec,
            };
            let ranked = search_schemes(&schemes, &params, &config)?;
            let mut lines = vec![format!(
                "{} schemes, {} reps each, ranked by expected volume",
                ranked.len(),
                reps
            )];
            for (i, e) in ranked.iter().enumerate().take(10) {
                lines.push(format!(
                    "{:>3}. R={:<24} E(Vol)={} (se {})  ETOT={}",
                    i + 1,
                    e.scheme.notation(),
                    sig(e.expected_volume),
                    sig(e.volume_se),
                    sig(e.etot)
                ));
            }
            Ok(Output::csv(
                lines.join("\n"),
                report::ranking_csv(&ranked)?,
                serde_json::to_value(&ranked)?,
            ))
        }
        Command::Reproduce {
            table,
            scale,
            boot_reps,
        } => {
            let opts = ReproOptions {
                scale: *scale,
                seed: cli.seed,
                boot_reps: *boot_reps,
                exec,
            };
            let rep = reproduce(*table, &opts)?;
            Ok(Output::json(
                report::table_summary(&rep),
                serde_json::to_value(&rep)?,
            ))
        }
    }
}

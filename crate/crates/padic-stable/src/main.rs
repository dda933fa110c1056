//! Command-line driver: exact verification suites, path simulation,
//! dimension analysis, and bundled reports.
//!
//! Exit codes: 0 = success, 1 = a check failed or a numerical identity
//! broke, 2 = configuration error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use padic_stable::analyze::DimensionReport;
use padic_stable::report::{
    dimension_csv, dimension_json, exit_stats_csv, exit_stats_json, levy_csv, verify_csv,
    verify_json, write_artifact, OutputFormat, RunManifest,
};
use padic_stable::simulate::{DeltaCache, ExitStats, StopRule};
use padic_stable::verify::all_passed;
use padic_stable::{Error, Result, TowerConfig, TowerSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Command {
    /// Run the exact identity suites and print a pass/fail table.
    Verify,
    /// Simulate path ensembles; write path records and exit statistics.
    Simulate,
    /// Estimate box dimension and gauge-weighted cover sums from paths.
    Analyze,
    /// Run everything and bundle the artifacts with a manifest.
    Report,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "padic-stable", version, about = "Stable-like jump process on a p-adic tower")]
struct Cli {
    /// TOML tower configuration.
    #[arg(long)]
    config: PathBuf,
    /// What to run.
    #[arg(long, value_enum)]
    command: Command,
    /// Working level n (defaults to the deepest enumerable level).
    #[arg(long)]
    level: Option<usize>,
    /// Override the stability index α from the config.
    #[arg(long)]
    alpha: Option<f64>,
    /// Monte Carlo sample count (paths, or draws for the verify MC arm).
    #[arg(long)]
    samples: Option<usize>,
    /// Simulation horizon T.
    #[arg(long)]
    horizon: Option<f64>,
    /// Override the RNG master seed from the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for artifacts; stdout-only when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Artifact format.
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::Io(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn run(cli: &Cli) -> Result<bool> {
    let mut cfg = TowerConfig::from_path(&cli.config)?;
    if let Some(a) = cli.alpha {
        cfg.alpha = a;
    }
    if let Some(s) = cli.seed {
        cfg.seed = Some(s);
    }
    if let Some(k) = cli.samples {
        if k == 0 {
            return Err(Error::Config("--samples must be positive".into()));
        }
    }
    let tw = TowerSpec::build(&cfg)?;
    let format = match cli.format {
        Format::Csv => OutputFormat::Csv,
        Format::Json => OutputFormat::Json,
    };
    let level = match cli.level {
        Some(0) => return Err(Error::Config("--level must be positive".into())),
        Some(n) if n > tw.num_levels() => {
            return Err(Error::Config(format!(
                "--level {n} exceeds the {} configured levels",
                tw.num_levels()
            )))
        }
        Some(n) => n,
        None => tw.n_enum.min(tw.n_arith),
    };
    let horizon = cli.horizon.unwrap_or(1.0);
    if !(horizon > 0.0) {
        return Err(Error::Config("--horizon must be positive".into()));
    }
    let command_name = format!("{:?}", cli.command).to_lowercase();
    let manifest = RunManifest::new(&tw, &cfg, &command_name);
    if let Some(dir) = &cli.out {
        write_artifact(dir, "manifest.json", &manifest.to_json())?;
    }
    let ok = match cli.command {
        Command::Verify => cmd_verify(cli, &tw, format, cli.samples.unwrap_or(0))?,
        Command::Simulate => cmd_simulate(cli, &tw, format, level, horizon)?,
        Command::Analyze => cmd_analyze(cli, &tw, format, level, horizon)?,
        Command::Report => {
            let v = cmd_verify(cli, &tw, format, cli.samples.unwrap_or(2000))?;
            cmd_simulate(cli, &tw, format, level, horizon)?;
            cmd_analyze(cli, &tw, format, level, horizon)?;
            if let Some(dir) = &cli.out {
                write_artifact(dir, "levy.csv", &levy_csv(&tw)?)?;
            }
            v
        }
    };
    Ok(ok)
}

fn cmd_verify(cli: &Cli, tw: &TowerSpec, format: OutputFormat, mc: usize) -> Result<bool> {
    let results = tw.verify_suite(mc)?;
    for r in &results {
        let tag = if r.passed { "PASS" } else { "FAIL" };
        println!("{tag}  {:<28}  {}", r.name, r.detail);
    }
    if let Some(dir) = &cli.out {
        match format {
            OutputFormat::Csv => write_artifact(dir, "verify.csv", &verify_csv(&results))?,
            OutputFormat::Json => write_artifact(dir, "verify.json", &verify_json(&results))?,
        }
    }
    Ok(all_passed(&results))
}

fn cmd_simulate(
    cli: &Cli,
    tw: &TowerSpec,
    format: OutputFormat,
    level: usize,
    horizon: f64,
) -> Result<bool> {
    let samples = cli.samples.unwrap_or(100);
    let levy = tw.levy_table(level)?;
    let mut paths_text = String::new();
    let mut cache = DeltaCache::new();
    for i in 0..samples {
        let path = tw.simulate_path_with(&levy, StopRule::Horizon(horizon), i as u64, &mut cache)?;
        paths_text.push_str(&path.to_lines(tw)?);
    }
    let mut stats: Vec<ExitStats> = Vec::new();
    for depth in 1..level {
        stats.push(tw.exit_ensemble(level, depth, samples, 1_000_000, f64::INFINITY)?);
    }
    for st in &stats {
        println!(
            "level {} depth {}: mean exit {:.4} (rate {:.4}), avoidance {:.4} in [{:.4}, {:.4}]",
            st.level,
            st.depth,
            st.pi_mean,
            tw.total_mass(st.depth)?,
            st.q_estimate,
            st.q_ci.0,
            st.q_ci.1
        );
    }
    if stats.is_empty() {
        println!(
            "level {level}: {samples} paths to horizon {horizon}, jump rate {:.4}",
            levy.total
        );
    }
    if let Some(dir) = &cli.out {
        write_artifact(dir, "paths.txt", &paths_text)?;
        match format {
            OutputFormat::Csv => write_artifact(dir, "exit_stats.csv", &exit_stats_csv(&stats))?,
            OutputFormat::Json => {
                write_artifact(dir, "exit_stats.json", &exit_stats_json(&stats, false))?
            }
        }
    }
    Ok(true)
}

fn cmd_analyze(
    cli: &Cli,
    tw: &TowerSpec,
    format: OutputFormat,
    level: usize,
    horizon: f64,
) -> Result<bool> {
    let samples = cli.samples.unwrap_or(100);
    let levels: Vec<usize> = (1..=level).collect();
    let rep: DimensionReport = tw.dimension_report(level, &levels, horizon, samples, 2_000_000)?;
    for (i, &n) in rep.levels.iter().enumerate() {
        println!(
            "level {n}: box-dimension median {:.4} [{:.4}, {:.4}], gauge sum median {}",
            rep.box_median[i],
            rep.box_q1[i],
            rep.box_q3[i],
            if rep.phi_sums[i].is_empty() {
                "n/a (first gauge block)".to_string()
            } else {
                format!("{:.6}", padic_stable::stats::median(&rep.phi_sums[i]))
            }
        );
    }
    if let Some(dir) = &cli.out {
        match format {
            OutputFormat::Csv => write_artifact(dir, "dimension.csv", &dimension_csv(&rep))?,
            OutputFormat::Json => write_artifact(dir, "dimension.json", &dimension_json(&rep))?,
        }
    }
    Ok(true)
}

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use ddm_bench::config::ExperimentConfig;
use ddm_bench::report::{derive_report, emit, render};
use ddm_bench::results_io::{load_results, save_results};
use ddm_bench::{run_experiment, OutputFormat, ResultSet};

#[derive(Parser)]
#[command(name = "ddm-bench", version, about = "Domain-decomposition scaling experiments and efficiency reports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the timing protocols and write raw results plus reports
    Run(RunArgs),
    /// Derive reports from a saved results file
    Report(ReportArgs),
}

/// Every flag mirrors a config-file key of the same name.
#[derive(Args)]
struct RunArgs {
    /// Flat `key = value` file; flags given here override it
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    nx: Option<String>,
    #[arg(long)]
    ny: Option<String>,
    /// Comma list such as `2x2,4x4,8x8`
    #[arg(long)]
    partitions: Option<String>,
    /// Repetitions per cell; the minimum is reported
    #[arg(long)]
    reps: Option<String>,
    /// Relative residual tolerance of the interface solve
    #[arg(long)]
    tol: Option<String>,
    /// Worker threads, 0 for all available cores
    #[arg(long)]
    workers: Option<String>,
    /// Subset of `monolithic,parallel,single-local`
    #[arg(long)]
    protocols: Option<String>,
    /// Output directory
    #[arg(long)]
    out: Option<String>,
    /// Subset of `table,csv,json`
    #[arg(long)]
    format: Option<String>,
}

impl RunArgs {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut config = ExperimentConfig::default();
        if let Some(path) = &self.config {
            config.apply_file(path)?;
        }
        let flags = [
            ("nx", &self.nx),
            ("ny", &self.ny),
            ("partitions", &self.partitions),
            ("reps", &self.reps),
            ("tol", &self.tol),
            ("workers", &self.workers),
            ("protocols", &self.protocols),
            ("out", &self.out),
            ("format", &self.format),
        ];
        for (key, value) in flags {
            if let Some(value) = value {
                config
                    .set(key, value)
                    .map_err(|e| anyhow::anyhow!("--{key}: {e}"))?;
            }
        }
        config.validate()?;
        Ok(config)
    }
}

#[derive(Args)]
struct ReportArgs {
    /// Results file, CSV or JSON
    input: PathBuf,
    /// Comma list of `table,csv,json`
    #[arg(long, default_value = "table")]
    format: String,
    /// Directory for report files; standard output if absent
    #[arg(long)]
    out: Option<PathBuf>,
}

fn formats(list: &str) -> Result<Vec<OutputFormat>> {
    let mut config = ExperimentConfig::default();
    config.set("format", list).map_err(anyhow::Error::msg)?;
    Ok(config.formats)
}

fn write_reports(rs: &ResultSet, formats: &[OutputFormat], out: Option<&Path>) -> Result<()> {
    let report = derive_report(rs)?;
    for &format in formats {
        match out {
            Some(dir) => {
                let path = dir.join(format!("report.{}", format.extension()));
                emit(&report, format, &path)?;
                eprintln!("wrote {}", path.display());
            }
            None => print!("{}", render(&report, format)?),
        }
    }
    Ok(())
}

fn run(args: RunArgs) -> Result<()> {
    let config = args.config()?;
    std::fs::create_dir_all(&config.out)
        .with_context(|| format!("creating {}", config.out.display()))?;
    let rs = run_experiment(&config, |r| match r.seconds {
        Some(s) => eprintln!(
            "{:>12} p={:<4} rep={} {:.4}s iterations={}",
            r.kind.as_str(),
            r.p,
            r.rep,
            s,
            r.iterations.unwrap_or(0)
        ),
        None => eprintln!("{:>12} p={:<4} rep={} FAILED", r.kind.as_str(), r.p, r.rep),
    })?;
    save_results(&rs, &config.out.join("results.csv"))?;
    save_results(&rs, &config.out.join("results.json"))?;
    if let Some(env) = &rs.env {
        eprintln!("{} ({})", env.hardware, env.timestamp);
    }
    for cell in &rs.unreliable {
        eprintln!(
            "warning: {} p={} took {:.3e}s, near the timer resolution",
            cell.kind, cell.p, cell.seconds
        );
    }
    if config.formats.contains(&OutputFormat::Table) {
        print!("{}", render(&derive_report(&rs)?, OutputFormat::Table)?);
    }
    write_reports(&rs, &config.formats, Some(&config.out))
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run(args) => run(args),
        Command::Report(args) => {
            let rs = load_results(&args.input)?;
            write_reports(&rs, &formats(&args.format)?, args.out.as_deref())
        }
    }
}

use std::collections::BTreeMap;
use std::time::Instant;

use ddm_core::{
    build_grid, classify_nodes, decompose, make_partition, restrict_to_internal, solve_dd,
    solve_monolithic, solve_single_local, SolveReport, TimingKind, TimingRecord, WorkerPool,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, PlannedRun};
use crate::error::Result;

/// Seed of the load vector shared by every run at a given grid size.
pub const LOAD_SEED: u64 = 0x5eed_0f_10ad;

/// Timings below this many timer ticks are flagged unreliable.
pub const RELIABLE_TICKS: f64 = 100.0;

/// One repetition of one cell. A failed solve has no `seconds`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub kind: TimingKind,
    pub p: usize,
    pub n: usize,
    pub local_n: usize,
    pub workers: usize,
    pub rep: usize,
    pub seconds: Option<f64>,
    pub iterations: Option<usize>,
    pub residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvStamp {
    pub hardware: String,
    pub physical_cores: usize,
    pub logical_cores: usize,
    pub timestamp: String,
    pub timer_resolution_seconds: f64,
}

impl EnvStamp {
    pub fn capture() -> Self {
        let physical_cores = num_cpus::get_physical();
        let logical_cores = num_cpus::get();
        let model = cpu_model().unwrap_or_else(|| "unknown cpu".into());
        Self {
            hardware: format!(
                "{model}; {physical_cores} physical / {logical_cores} logical cores; {}-{}",
                std::env::consts::OS,
                std::env::consts::ARCH
            ),
            physical_cores,
            logical_cores,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            timer_resolution_seconds: timer_resolution(),
        }
    }
}

fn cpu_model() -> Option<String> {
    let info = std::fs::read_to_string("/proc/cpuinfo").ok()?;
    info.lines()
        .find(|l| l.starts_with("model name"))
        .and_then(|l| l.split_once(':'))
        .map(|(_, v)| v.trim().to_string())
}

/// Smallest non-zero step observed on the monotonic clock.
pub fn timer_resolution() -> f64 {
    let mut best = f64::INFINITY;
    for _ in 0..1000 {
        let t0 = Instant::now();
        let mut dt = t0.elapsed();
        while dt.is_zero() {
            dt = t0.elapsed();
        }
        best = best.min(dt.as_secs_f64());
    }
    best
}

/// An aggregated cell whose time is too close to the timer resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnreliableCell {
    pub kind: TimingKind,
    pub p: usize,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultSet {
    /// Absent when loaded from CSV.
    pub config: Option<ExperimentConfig>,
    pub env: Option<EnvStamp>,
    pub runs: Vec<RunRow>,
    #[serde(default)]
    pub unreliable: Vec<UnreliableCell>,
}

impl ResultSet {
    pub fn from_runs(runs: Vec<RunRow>) -> Self {
        Self {
            config: None,
            env: None,
            runs,
            unreliable: Vec::new(),
        }
    }

    /// Minimum over repetitions for every `(kind, p)` cell. Cells with a
    /// failed repetition are left out.
    pub fn records(&self) -> Result<Vec<TimingRecord>> {
        let mut cells: BTreeMap<(usize, TimingKind), Vec<&RunRow>> = BTreeMap::new();
        for row in &self.runs {
            cells.entry((row.p, row.kind)).or_default().push(row);
        }
        let mut out = Vec::new();
        for ((p, kind), rows) in cells {
            if rows.iter().any(|r| r.seconds.is_none()) {
                continue;
            }
            let best = rows
                .iter()
                .min_by(|a, b| a.seconds.unwrap().total_cmp(&b.seconds.unwrap()))
                .unwrap();
            out.push(TimingRecord::new(
                kind,
                p,
                best.n,
                best.local_n,
                best.workers,
                rows.len(),
                best.seconds.unwrap(),
            )?);
        }
        Ok(out)
    }

    /// Cells with a failed repetition.
    pub fn failures(&self) -> Vec<(TimingKind, usize)> {
        let mut f: Vec<_> = self
            .runs
            .iter()
            .filter(|r| r.seconds.is_none())
            .map(|r| (r.kind, r.p))
            .collect();
        f.sort();
        f.dedup();
        f
    }

    fn flag_unreliable(&mut self, resolution: f64) -> Result<()> {
        self.unreliable = self
            .records()?
            .into_iter()
            .filter(|r| r.seconds < RELIABLE_TICKS * resolution)
            .map(|r| UnreliableCell {
                kind: r.kind,
                p: r.p,
                seconds: r.seconds,
            })
            .collect();
        Ok(())
    }
}

/// Uniform `[-1, 1]` load from the fixed seed.
pub fn load_vector(n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(LOAD_SEED);
    (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect()
}

fn row(run: &PlannedRun, n: usize, local_n: usize, workers: usize, rep: usize) -> RunRow {
    RunRow {
        kind: run.kind,
        p: run.partition.p(),
        n,
        local_n,
        workers,
        rep,
        seconds: None,
        iterations: None,
        residual: None,
    }
}

fn fill(mut row: RunRow, report: &SolveReport) -> RunRow {
    row.seconds = Some(report.total_seconds);
    row.iterations = Some(report.iterations);
    row.residual = Some(report.final_relative_residual);
    row
}

/// Runs every planned cell `R` times. A solver error records a failure row
/// and skips the remaining repetitions of that cell only. `progress` sees
/// each row as it is produced.
pub fn run_experiment(
    config: &ExperimentConfig,
    mut progress: impl FnMut(&RunRow),
) -> Result<ResultSet> {
    config.validate()?;
    let env = EnvStamp::capture();
    let grid = build_grid(config.nx, config.ny)?;
    let n = grid.n();
    let f = load_vector(n);
    let pool = WorkerPool::new(config.workers)?;
    let mut runs = Vec::new();

    for run in config.planned_runs() {
        let part = make_partition(&grid, run.partition.px, run.partition.py)?;
        let center = part.center_subdomain();
        let derived = match run.kind {
            TimingKind::Parallel => Some(decompose(&grid, &part, &classify_nodes(&grid, &part))),
            _ => None,
        };
        let f_local = restrict_to_internal(&grid, &part, center, &f);
        let workers = if run.kind == TimingKind::Parallel { pool.workers() } else { 1 };
        let local_n = if run.kind == TimingKind::SingleLocal { f_local.len() } else { n };
        for rep in 0..config.repetitions {
            let outcome = match run.kind {
                TimingKind::Monolithic => solve_monolithic(&grid, &f),
                TimingKind::Parallel => {
                    let ds = derived.clone().expect("decomposed above");
                    solve_dd(ds, &f, config.tolerance, &pool)
                }
                TimingKind::SingleLocal => solve_single_local(&grid, &part, center, &f_local),
            };
            let blank = row(&run, n, local_n, workers, rep);
            let failed = outcome.is_err();
            let r = match outcome {
                Ok((_, report)) => fill(blank, &report),
                Err(_) => blank,
            };
            progress(&r);
            runs.push(r);
            if failed {
                break;
            }
        }
    }

    let mut rs = ResultSet {
        config: Some(config.clone()),
        env: Some(env),
        runs,
        unreliable: Vec::new(),
    };
    let resolution = rs.env.as_ref().map_or(0.0, |e| e.timer_resolution_seconds);
    rs.flag_unreliable(resolution)?;
    Ok(rs)
}

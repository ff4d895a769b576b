//! Experiment configuration. The flat `key = value` file format uses the same
//! keys as the command-line flags, and both go through [`ExperimentConfig::set`].

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ddm_core::TimingKind;
use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};

/// Keys accepted in config files and as `--key` flags.
pub const KEYS: [&str; 9] = [
    "nx",
    "ny",
    "partitions",
    "reps",
    "tol",
    "workers",
    "protocols",
    "out",
    "format",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PartitionSpec {
    pub px: usize,
    pub py: usize,
}

impl PartitionSpec {
    pub fn p(&self) -> usize {
        self.px * self.py
    }
}

impl fmt::Display for PartitionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.px, self.py)
    }
}

impl FromStr for PartitionSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (a, b) = s
            .trim()
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("partition `{s}` is not of the form PXxPY"))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<usize>()
                .map_err(|_| format!("partition `{s}`: `{v}` is not a count"))
        };
        Ok(Self {
            px: parse(a)?,
            py: parse(b)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Table,
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            Self::Table => "txt",
            Self::Csv => "csv",
            Self::Json => "json",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "table" => Ok(Self::Table),
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(format!("unknown format `{other}` (expected table, csv or json)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub nx: usize,
    pub ny: usize,
    pub partitions: Vec<PartitionSpec>,
    pub repetitions: usize,
    pub tolerance: f64,
    /// Worker threads for the parallel protocol; 0 picks the hardware default.
    pub workers: usize,
    pub protocols: Vec<TimingKind>,
    pub out: PathBuf,
    pub formats: Vec<OutputFormat>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            nx: 128,
            ny: 128,
            partitions: vec![PartitionSpec { px: 2, py: 2 }, PartitionSpec { px: 4, py: 4 }],
            repetitions: 3,
            tolerance: 1e-8,
            workers: 0,
            protocols: TimingKind::ALL.to_vec(),
            out: PathBuf::from("results"),
            formats: vec![OutputFormat::Table],
        }
    }
}

fn list<T: FromStr<Err = String>>(value: &str) -> std::result::Result<Vec<T>, String> {
    value
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse())
        .collect()
}

fn number<T: FromStr>(key: &str, value: &str) -> std::result::Result<T, String> {
    value
        .trim()
        .parse()
        .map_err(|_| format!("`{key}` expects a number, got `{value}`"))
}

impl ExperimentConfig {
    /// Sets one key. Values are not validated against each other here.
    pub fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        match key {
            "nx" => self.nx = number(key, value)?,
            "ny" => self.ny = number(key, value)?,
            "partitions" => self.partitions = list(value)?,
            "reps" => self.repetitions = number(key, value)?,
            "tol" => self.tolerance = number(key, value)?,
            "workers" => self.workers = number(key, value)?,
            "protocols" => self.protocols = list(value)?,
            "out" => self.out = PathBuf::from(value.trim()),
            "format" => self.formats = list(value)?,
            other => return Err(format!("unknown key `{other}`")),
        }
        Ok(())
    }

    /// Applies a config file's `key = value` lines. Blank lines and lines
    /// starting with `#` are skipped.
    pub fn apply_file_text(&mut self, text: &str, origin: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| BenchError::ConfigLine {
                origin: origin.to_string(),
                line: i + 1,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
            self.set(key.trim(), value).map_err(err)?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|source| BenchError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        self.apply_file_text(&text, &path.display().to_string())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(BenchError::Config(m));
        if self.nx == 0 || self.ny == 0 {
            return bad(format!("grid {}x{} is empty", self.nx, self.ny));
        }
        if self.repetitions == 0 {
            return bad("reps must be at least 1".into());
        }
        if !(self.tolerance > 0.0 && self.tolerance < 1.0) {
            return bad(format!("tol must lie in (0, 1), got {}", self.tolerance));
        }
        if self.protocols.is_empty() {
            return bad("at least one protocol is required".into());
        }
        if self.formats.is_empty() {
            return bad("at least one output format is required".into());
        }
        for part in &self.partitions {
            if part.px == 0 || part.py == 0 || part.px > self.nx + 1 || part.py > self.ny + 1 {
                return bad(format!(
                    "partition {part} does not fit a {}x{} grid ({}x{} cells)",
                    self.nx,
                    self.ny,
                    self.nx + 1,
                    self.ny + 1
                ));
            }
        }
        let mut ps: Vec<usize> = self.partitions.iter().map(PartitionSpec::p).collect();
        ps.sort_unstable();
        if let Some(w) = ps.windows(2).find(|w| w[0] == w[1]) {
            return bad(format!("two partitions with p = {}", w[0]));
        }
        Ok(())
    }

    pub fn has(&self, kind: TimingKind) -> bool {
        self.protocols.contains(&kind)
    }

    /// Cells to be measured, in execution order. The 1x1 partition is covered
    /// by the monolithic run and produces no cell of its own.
    pub fn planned_runs(&self) -> Vec<PlannedRun> {
        let mut runs = Vec::new();
        if self.has(TimingKind::Monolithic) {
            runs.push(PlannedRun {
                kind: TimingKind::Monolithic,
                partition: PartitionSpec { px: 1, py: 1 },
            });
        }
        for &partition in self.partitions.iter().filter(|s| s.p() > 1) {
            for kind in [TimingKind::Parallel, TimingKind::SingleLocal] {
                if self.has(kind) {
                    runs.push(PlannedRun { kind, partition });
                }
            }
        }
        runs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlannedRun {
    pub kind: TimingKind,
    pub partition: PartitionSpec,
}

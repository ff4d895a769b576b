//! Speedup and efficiency algebra, goal-relative efficiencies and the
//! divide-and-conquer (DC) goals.
//!
//! Notation: `T(p, n)` is the execution time on `p` processors for a problem
//! with `n` degrees of freedom and `S(p, n) = T(1, n) / T(p, n)`. A goal fixes
//! either a speedup `S_G` or a time `T_G`; the two are dual through
//! `T_G S_G = T(1, n)`. The DC goal takes `T_DC(p, n) = T(1, n / p)`, the
//! sequential time of a single local problem, so
//! `S_DC = T(1, n) / T(1, n / p)` and `E_DC = S / S_DC = T_DC / T(p, n)`.
//!
//! Efficiencies are fractions; formatting as percentages happens at output.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative slack allowed when checking `T_G S_G = T(1, n)`.
pub const GOAL_CONSISTENCY_TOLERANCE: f64 = 1e-9;

fn positive_time(t: f64) -> Result<f64> {
    if t > 0.0 && t.is_finite() {
        Ok(t)
    } else {
        Err(Error::InvalidTiming(t))
    }
}

/// `S = T(1, n) / T(p, n)`.
pub fn speedup(t1: f64, tp: f64) -> Result<f64> {
    Ok(positive_time(t1)? / positive_time(tp)?)
}

/// `E_S = S / p`, the efficiency relative to the standard goal `S_s = p`.
pub fn standard_efficiency(s: f64, p: usize) -> Result<f64> {
    if p == 0 {
        return Err(Error::ZeroProcessors);
    }
    Ok(s / p as f64)
}

/// `E_G = S / S_G` for the goal entry at `(p, n)`. Values above 1 mean the goal
/// was exceeded.
pub fn relative_efficiency(s: f64, goal: &GoalSpec, p: usize, n: usize) -> Result<f64> {
    let sg = goal
        .get(p, n)
        .and_then(|g| g.speedup)
        .ok_or(Error::MissingGoal { p, n })?;
    Ok(s / positive_time(sg)?)
}

/// `E_G = T_G / T`, the time form of the goal-relative efficiency.
pub fn relative_efficiency_from_time(t_goal: f64, t: f64) -> Result<f64> {
    Ok(positive_time(t_goal)? / positive_time(t)?)
}

/// Fills the missing side of every goal entry from `T(1, n) = t1`; entries
/// with both sides must already satisfy `T_G S_G = t1`.
pub fn dualize_goal(t1: f64, goal: &GoalSpec) -> Result<GoalSpec> {
    let t1 = positive_time(t1)?;
    let mut out = goal.clone();
    for (&(p, n), value) in out.entries.iter_mut() {
        match (value.speedup, value.time) {
            (Some(s), Some(t)) => {
                let product = s * t;
                if ((product - t1) / t1).abs() > GOAL_CONSISTENCY_TOLERANCE {
                    return Err(Error::InconsistentGoal { p, n, product, t1 });
                }
            }
            (Some(s), None) => value.time = Some(t1 / positive_time(s)?),
            (None, Some(t)) => value.speedup = Some(t1 / positive_time(t)?),
            (None, None) => return Err(Error::MissingGoal { p, n }),
        }
    }
    Ok(out)
}

/// `S_DC = T(1, n) / T(1, n / p)`.
pub fn dc_speedup_goal(t1_n: f64, t1_n_over_p: f64) -> Result<f64> {
    speedup(t1_n, t1_n_over_p)
}

/// `E_DC = S / S_DC`.
pub fn dc_efficiency(s: f64, s_dc: f64) -> Result<f64> {
    Ok(positive_time(s)? / positive_time(s_dc)?)
}

/// `p / S_DC`: the largest DC-efficiency reachable by any code with `S <= p`.
pub fn standard_bound_on_dc_efficiency(p: usize, s_dc: f64) -> f64 {
    p as f64 / s_dc
}

/// `(p^2 - S_DC) / p^2`; negative when the DC goal exceeds `p^2`.
pub fn p_squared_deviation(p: usize, s_dc: f64) -> f64 {
    let p2 = (p * p) as f64;
    (p2 - s_dc) / p2
}

pub fn speedup_multiple_of_p(s: f64, p: usize) -> f64 {
    s / p as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexityFit {
    pub exponent: f64,
    pub constant: f64,
    /// Largest `|c n^a - t| / t` over the data.
    pub max_relative_residual: f64,
}

/// Least-squares fit of `log t = a log n + log c`.
pub fn fit_complexity(sizes: &[f64], times: &[f64]) -> Result<ComplexityFit> {
    if sizes.len() != times.len() {
        return Err(Error::DimensionMismatch {
            expected: sizes.len(),
            got: times.len(),
        });
    }
    let mut distinct: Vec<f64> = sizes.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if sizes.len() < 3 || distinct.len() != sizes.len() {
        return Err(Error::InsufficientData(distinct.len().min(sizes.len())));
    }
    for &v in sizes.iter().chain(times) {
        positive_time(v)?;
    }
    let xs: Vec<f64> = sizes.iter().map(|v| v.ln()).collect();
    let ys: Vec<f64> = times.iter().map(|v| v.ln()).collect();
    let m = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let exponent = sxy / sxx;
    let constant = (my - exponent * mx).exp();
    let max_relative_residual = sizes
        .iter()
        .zip(times)
        .map(|(n, t)| ((constant * n.powf(exponent) - t) / t).abs())
        .fold(0.0, f64::max);
    Ok(ComplexityFit {
        exponent,
        constant,
        max_relative_residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimingKind {
    /// `T(1, n)`, the whole problem on one processor.
    Monolithic,
    /// `T(p, n)`.
    Parallel,
    /// `T(1, n / p)`, one local problem on one processor.
    SingleLocal,
}

impl TimingKind {
    pub const ALL: [TimingKind; 3] = [Self::Monolithic, Self::Parallel, Self::SingleLocal];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Monolithic => "monolithic",
            Self::Parallel => "parallel",
            Self::SingleLocal => "single-local",
        }
    }
}

impl fmt::Display for TimingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TimingKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown timing kind `{s}`"))
    }
}

/// One aggregated timing observation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimingRecord {
    pub kind: TimingKind,
    pub p: usize,
    pub n: usize,
    /// Unknowns in the problem actually timed (`n` for monolithic and parallel runs).
    pub local_n: usize,
    pub workers: usize,
    pub repetitions: usize,
    pub seconds: f64,
}

impl TimingRecord {
    pub fn new(
        kind: TimingKind,
        p: usize,
        n: usize,
        local_n: usize,
        workers: usize,
        repetitions: usize,
        seconds: f64,
    ) -> Result<Self> {
        positive_time(seconds)?;
        if p == 0 || n == 0 {
            return Err(Error::InvalidRecord(format!("p = {p} and n = {n} must be positive")));
        }
        if kind == TimingKind::Monolithic && p != 1 {
            return Err(Error::InvalidRecord(format!("monolithic record with p = {p}")));
        }
        Ok(Self {
            kind,
            p,
            n,
            local_n,
            workers,
            repetitions,
            seconds,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GoalKind {
    /// `S_G = p`.
    Standard,
    /// `T_G = T(1, n / p)`.
    DivideAndConquer,
    /// User-supplied `S_A` values.
    Absolute,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct GoalValue {
    pub speedup: Option<f64>,
    pub time: Option<f64>,
}

/// A speedup or time goal per `(p, n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoalSpec {
    pub name: String,
    pub kind: GoalKind,
    entries: BTreeMap<(usize, usize), GoalValue>,
}

impl GoalSpec {
    pub fn new(name: impl Into<String>, kind: GoalKind) -> Self {
        Self {
            name: name.into(),
            kind,
            entries: BTreeMap::new(),
        }
    }

    /// The standard goal `S_s(p, n) = p`.
    pub fn standard(ps: &[usize], n: usize) -> Self {
        let mut g = Self::new("standard", GoalKind::Standard);
        for &p in ps {
            g = g.with_speedup(p, n, p as f64);
        }
        g
    }

    /// The DC goal from measured local times `(p, n, T(1, n/p))`.
    pub fn divide_and_conquer(local_times: &[(usize, usize, f64)]) -> Self {
        let mut g = Self::new("divide-and-conquer", GoalKind::DivideAndConquer);
        for &(p, n, t) in local_times {
            g = g.with_time(p, n, t);
        }
        g
    }

    /// A user-supplied absolute goal `S_A(p, n)`.
    pub fn absolute(name: impl Into<String>, values: &[(usize, usize, f64)]) -> Self {
        let mut g = Self::new(name, GoalKind::Absolute);
        for &(p, n, s) in values {
            g = g.with_speedup(p, n, s);
        }
        g
    }

    pub fn with_speedup(mut self, p: usize, n: usize, s: f64) -> Self {
        self.entries.insert((p, n), GoalValue {
            speedup: Some(s),
            time: None,
        });
        self
    }

    pub fn with_time(mut self, p: usize, n: usize, t: f64) -> Self {
        self.entries.insert((p, n), GoalValue {
            speedup: None,
            time: Some(t),
        });
        self
    }

    pub fn get(&self, p: usize, n: usize) -> Option<&GoalValue> {
        self.entries.get(&(p, n))
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &GoalValue)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }
}

/// One `(p, n)` row of the derived-metric tables. DC columns are `None` when
/// no single-local timing exists for that `p`; speedup columns are `None`
/// when no parallel timing exists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub p: usize,
    pub n: usize,
    /// Size of the timed local problem, when one was measured.
    pub local_n: Option<usize>,
    pub workers: Option<usize>,
    /// `T(1, n)`.
    pub t1: f64,
    pub t_p: Option<f64>,
    pub speedup: Option<f64>,
    /// `S / p`, also the standard efficiency `E_S`.
    pub speedup_over_p: Option<f64>,
    pub p_over_speedup: Option<f64>,
    /// Lower bound `T(1, n) / p` on the time of any code with `S <= p`.
    pub standard_time_bound: f64,
    pub t_dc: Option<f64>,
    pub s_dc: Option<f64>,
    pub e_dc: Option<f64>,
    pub p_squared: f64,
    pub p_squared_deviation: Option<f64>,
    pub s_dc_over_p: Option<f64>,
    /// `p / S_DC`, the DC-efficiency ceiling of standard software.
    pub standard_dc_bound: Option<f64>,
    /// `S / p^2`: the DC-efficiency with `S_DC` approximated by `p^2`.
    pub speedup_over_p_squared: Option<f64>,
}

impl ReportRow {
    /// Builds a row from raw timings. `t_p` and `t_dc` are optional.
    pub fn from_times(
        p: usize,
        n: usize,
        t1: f64,
        t_p: Option<f64>,
        t_dc: Option<f64>,
    ) -> Result<Self> {
        if p == 0 {
            return Err(Error::ZeroProcessors);
        }
        positive_time(t1)?;
        let speedup = t_p.map(|tp| speedup(t1, tp)).transpose()?;
        let s_dc = t_dc.map(|t| dc_speedup_goal(t1, t)).transpose()?;
        let e_dc = match (t_p, t_dc) {
            (Some(tp), Some(tdc)) => Some(relative_efficiency_from_time(tdc, tp)?),
            _ => None,
        };
        let p2 = (p * p) as f64;
        Ok(Self {
            p,
            n,
            local_n: None,
            workers: None,
            t1,
            t_p,
            speedup,
            speedup_over_p: speedup.map(|s| speedup_multiple_of_p(s, p)),
            p_over_speedup: speedup.map(|s| p as f64 / s),
            standard_time_bound: t1 / p as f64,
            t_dc,
            s_dc,
            e_dc,
            p_squared: p2,
            p_squared_deviation: s_dc.map(|s| p_squared_deviation(p, s)),
            s_dc_over_p: s_dc.map(|s| s / p as f64),
            standard_dc_bound: s_dc.map(|s| standard_bound_on_dc_efficiency(p, s)),
            speedup_over_p_squared: speedup.map(|s| s / p2),
        })
    }

    /// `E_S`, identical in value to `S / p`.
    pub fn standard_efficiency(&self) -> Option<f64> {
        self.speedup_over_p
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct EfficiencyReport {
    pub rows: Vec<ReportRow>,
    /// Free-text disclosures carried into every output format.
    pub notes: Vec<String>,
}

impl EfficiencyReport {
    pub fn row(&self, p: usize) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.p == p)
    }

    pub fn filter(&self, keep: impl Fn(&ReportRow) -> bool) -> Self {
        Self {
            rows: self.rows.iter().filter(|r| keep(r)).cloned().collect(),
            notes: self.notes.clone(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

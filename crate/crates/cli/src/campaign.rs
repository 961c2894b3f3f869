//! Paired benchmark campaigns: both planners on the same scenario and seed.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use sectorplan::{generate_custom, generate_scenario, PlannerKind, Scenario, ScenarioKind, ScenarioParams};

use crate::error::CliError;
use crate::records::MetricsRecord;
use crate::settings::{run_to_outcome, PlannerTuning};

/// A scenario family: a distribution plus an obstacle count. Written
/// `S4` (the kind's own count) or `S4:100`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellSpec {
    pub distribution: ScenarioKind,
    pub obstacle_count: usize,
}

impl CellSpec {
    pub fn named(kind: ScenarioKind) -> Self {
        Self {
            distribution: kind,
            obstacle_count: kind.obstacle_count().expect("generated kinds have a count"),
        }
    }

    pub fn scenario(&self, seed: u64, params: ScenarioParams) -> Result<Scenario, CliError> {
        let own = self.distribution.obstacle_count() == Some(self.obstacle_count);
        let s = if own {
            generate_scenario(self.distribution, seed, params)
        } else {
            generate_custom(self.distribution, self.obstacle_count, seed, params)
        };
        Ok(s?)
    }
}

impl fmt::Display for CellSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.distribution.obstacle_count() == Some(self.obstacle_count) {
            write!(f, "{}", self.distribution)
        } else {
            write!(f, "{}:{}", self.distribution, self.obstacle_count)
        }
    }
}

impl FromStr for CellSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, count) = match s.split_once(':') {
            Some((k, c)) => (k, Some(c)),
            None => (s, None),
        };
        let kind: ScenarioKind = kind.parse().map_err(|e: sectorplan::WorldError| e.to_string())?;
        if kind == ScenarioKind::Custom {
            return Err("cells need one of S1..S6 as their distribution".into());
        }
        let mut cell = Self::named(kind);
        if let Some(c) = count {
            cell.obstacle_count = c.parse().map_err(|_| format!("bad obstacle count {c:?}"))?;
        }
        Ok(cell)
    }
}

#[derive(Debug, Clone)]
pub struct CampaignSpec {
    pub cells: Vec<CellSpec>,
    pub trials: u64,
    pub base_seed: u64,
    pub params: ScenarioParams,
    pub tuning: PlannerTuning,
    /// Worker count; `None` lets the pool pick.
    pub threads: Option<usize>,
}

impl CampaignSpec {
    pub fn new(cells: Vec<CellSpec>, trials: u64) -> Self {
        Self {
            cells,
            trials,
            base_seed: 0,
            params: ScenarioParams::default(),
            tuning: PlannerTuning::default(),
            threads: None,
        }
    }
}

const PLANNERS: [PlannerKind; 2] = [PlannerKind::RrtStar, PlannerKind::AdRrtStar];

fn run_pair(spec: &CampaignSpec, cell: CellSpec, trial: u64) -> Result<[MetricsRecord; 2], CliError> {
    let seed = spec.base_seed.wrapping_add(trial);
    let scenario = cell.scenario(seed, spec.params)?;
    let label = cell.distribution.to_string();
    let run = |planner| -> Result<MetricsRecord, CliError> {
        let settings = spec.tuning.settings(planner, &scenario, seed);
        let result = run_to_outcome(&settings, &scenario)?;
        Ok(MetricsRecord::from_result(
            &result,
            &label,
            cell.obstacle_count,
            settings.digest(),
        ))
    };
    Ok([run(PLANNERS[0])?, run(PLANNERS[1])?])
}

/// Runs every (cell, trial) pair and returns rows ordered by cell, trial
/// and planner regardless of worker count.
pub fn run_campaign(spec: &CampaignSpec) -> Result<Vec<MetricsRecord>, CliError> {
    if spec.trials == 0 {
        return Err(CliError::Usage("trials must be at least 1".into()));
    }
    let jobs: Vec<(usize, CellSpec, u64)> = spec
        .cells
        .iter()
        .enumerate()
        .flat_map(|(i, &c)| (0..spec.trials).map(move |t| (i, c, t)))
        .collect();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = spec.threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Usage(e.to_string()))?;
    let mut pairs = pool.install(|| {
        jobs.par_iter()
            .map(|&(i, cell, t)| run_pair(spec, cell, t).map(|rows| (i, t, rows)))
            .collect::<Result<Vec<_>, _>>()
    })?;
    pairs.sort_by_key(|&(i, t, _)| (i, t));
    Ok(pairs.into_iter().flat_map(|(_, _, rows)| rows).collect())
}

/// Per-cell, per-planner medians.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub scenario_kind: String,
    pub obstacle_count: usize,
    pub planner: PlannerKind,
    pub trials: usize,
    pub successes: usize,
    pub median_nodes: f64,
    pub median_total_cost: Option<f64>,
    pub median_average_cost: Option<f64>,
    pub median_seconds: f64,
}

pub fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let n = values.len();
    Some(if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    })
}

/// Groups rows by (kind, obstacle count, planner) in first-seen order.
pub fn summarize(records: &[MetricsRecord]) -> Vec<SummaryRow> {
    let mut keys: Vec<(String, usize, PlannerKind)> = Vec::new();
    for r in records {
        let k = (r.scenario_kind.clone(), r.obstacle_count, r.planner);
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    keys.into_iter()
        .map(|(kind, count, planner)| {
            let rows: Vec<_> = records
                .iter()
                .filter(|r| r.scenario_kind == kind && r.obstacle_count == count && r.planner == planner)
                .collect();
            let mut nodes: Vec<f64> = rows.iter().map(|r| r.node_count as f64).collect();
            let mut total: Vec<f64> = rows.iter().filter_map(|r| r.total_path_cost).collect();
            let mut avg: Vec<f64> = rows.iter().filter_map(|r| r.average_path_cost).collect();
            let mut secs: Vec<f64> = rows.iter().map(|r| r.elapsed_seconds).collect();
            SummaryRow {
                scenario_kind: kind,
                obstacle_count: count,
                planner,
                trials: rows.len(),
                successes: rows.iter().filter(|r| r.success).count(),
                median_nodes: median(&mut nodes).expect("groups are non-empty"),
                median_total_cost: median(&mut total),
                median_average_cost: median(&mut avg),
                median_seconds: median(&mut secs).expect("groups are non-empty"),
            }
        })
        .collect()
}

pub const SUMMARY_HEADER: &str = "scenario_kind,obstacle_count,planner,trials,successes,median_node_count,\
median_total_path_cost,median_average_path_cost,median_elapsed_seconds";

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    let mut out = format!("{SUMMARY_HEADER}\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.scenario_kind,
            r.obstacle_count,
            r.planner,
            r.trials,
            r.successes,
            r.median_nodes,
            opt(r.median_total_cost),
            opt(r.median_average_cost),
            r.median_seconds
        ));
    }
    out
}

/// Fixed-width table for the terminal; time is the last column.
pub fn summary_table(rows: &[SummaryRow]) -> String {
    let opt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |x| format!("{x:.2}"));
    let mut out = format!(
        "{:<6} {:>9} {:<12} {:>8} {:>10} {:>12} {:>12} {:>10}\n",
        "kind", "obstacles", "planner", "success", "nodes", "total_cost", "avg_cost", "time_s"
    );
    for r in rows {
        out.push_str(&format!(
            "{:<6} {:>9} {:<12} {:>8} {:>10} {:>12} {:>12} {:>10.3}\n",
            r.scenario_kind,
            r.obstacle_count,
            r.planner.as_str(),
            format!("{}/{}", r.successes, r.trials),
            r.median_nodes,
            opt(r.median_total_cost),
            opt(r.median_average_cost),
            r.median_seconds
        ));
    }
    out
}

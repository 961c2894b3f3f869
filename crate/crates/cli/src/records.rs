//! Per-run metrics rows and their CSV encoding.

use std::fmt::Write as _;

use sectorplan::{PlanResult, PlannerKind};

pub const CSV_HEADER: &str = "planner,scenario_kind,obstacle_count,seed,node_count,total_path_cost,\
average_path_cost,success,config_digest,elapsed_seconds";

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRecord {
    pub planner: PlannerKind,
    pub scenario_kind: String,
    pub obstacle_count: usize,
    pub seed: u64,
    pub node_count: usize,
    pub total_path_cost: Option<f64>,
    pub average_path_cost: Option<f64>,
    pub success: bool,
    pub config_digest: String,
    pub elapsed_seconds: f64,
    /// Kept for pairing checks; not a CSV column.
    pub scenario_digest: String,
}

impl MetricsRecord {
    pub fn from_result(r: &PlanResult, scenario_kind: &str, obstacle_count: usize, config_digest: String) -> Self {
        Self {
            planner: r.planner,
            scenario_kind: scenario_kind.to_string(),
            obstacle_count,
            seed: r.seed,
            node_count: r.metrics.node_count,
            total_path_cost: r.metrics.total_path_cost,
            average_path_cost: r.metrics.average_path_cost,
            success: r.success(),
            config_digest,
            elapsed_seconds: r.metrics.elapsed.as_secs_f64(),
            scenario_digest: r.scenario_digest.clone(),
        }
    }

    /// One CSV line without the trailing newline. Reals use the shortest
    /// representation that round-trips; absent costs are empty fields.
    pub fn csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.planner,
            self.scenario_kind,
            self.obstacle_count,
            self.seed,
            self.node_count,
            opt(self.total_path_cost),
            opt(self.average_path_cost),
            self.success,
            self.config_digest,
            self.elapsed_seconds,
        )
    }
}

pub fn to_csv(records: &[MetricsRecord]) -> String {
    let mut out = String::with_capacity(128 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        writeln!(out, "{}", r.csv_row()).expect("writing to a String cannot fail");
    }
    out
}

/// Drops the final column of every line; used to compare campaign outputs
/// while ignoring wall time.
pub fn mask_last_column(text: &str) -> String {
    text.lines()
        .map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head))
        .collect::<Vec<_>>()
        .join("\n")
}

//! Result records shared by both planners.

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::geometry::{Point2, Sector};
use crate::global_planner::GlobalPath;
use crate::tree::Tree;
use crate::world::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlannerKind {
    RrtStar,
    AdRrtStar,
}

impl PlannerKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PlannerKind::RrtStar => "rrt_star",
            PlannerKind::AdRrtStar => "ad_rrt_star",
        }
    }
}

impl fmt::Display for PlannerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PlannerKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rrt_star" | "rrt-star" => Ok(PlannerKind::RrtStar),
            "ad_rrt_star" | "ad-rrt-star" => Ok(PlannerKind::AdRrtStar),
            other => Err(format!("unknown planner {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanMetrics {
    pub node_count: usize,
    pub iterations: usize,
    /// Wall time of the planning call; the only nondeterministic field.
    pub elapsed: Duration,
    pub total_path_cost: Option<f64>,
    pub average_path_cost: Option<f64>,
    /// Samples redrawn because they fell outside free space or the sector.
    pub rejected_samples: u64,
    /// Iterations whose extension did not add a vertex.
    pub failed_extensions: usize,
}

/// Best goal-reaching cost, recorded whenever it changes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostSample {
    pub iteration: usize,
    pub cost: f64,
}

/// Inserted vertex together with the sample and sector that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleAudit {
    pub iteration: usize,
    pub sector: Sector,
    pub sample: Point2,
    pub vertex: Point2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionChange {
    Start,
    Advance,
    Widen,
    Refine,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionEvent {
    pub iteration: usize,
    pub change: RegionChange,
    pub anchor_index: usize,
    pub half_angle: f64,
}

/// Extra state recorded by the directed planner.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectedTrace {
    pub global_path: GlobalPath,
    /// The grid search failed and a straight source-destination route seeded
    /// the headings instead.
    pub used_fallback: bool,
    pub final_sector: Sector,
    pub audit: Vec<SampleAudit>,
    pub regions: Vec<RegionEvent>,
}

#[derive(Debug, Clone)]
pub struct PlanResult {
    pub planner: PlannerKind,
    pub seed: u64,
    pub rng_algorithm: &'static str,
    pub scenario_digest: String,
    /// Final reported path (shortcut when the planner prunes).
    pub path: Option<Path>,
    /// Literal root-to-goal parent walk.
    pub raw_path: Option<Path>,
    pub goal_vertex: Option<usize>,
    pub metrics: PlanMetrics,
    pub tree: Tree,
    pub best_cost_trace: Vec<CostSample>,
    pub directed: Option<DirectedTrace>,
}

impl PlanResult {
    pub fn success(&self) -> bool {
        self.path.is_some()
    }

    /// Equality on everything except wall time.
    pub fn same_outcome(&self, other: &PlanResult) -> bool {
        let mut a = self.metrics.clone();
        let mut b = other.metrics.clone();
        a.elapsed = Duration::ZERO;
        b.elapsed = Duration::ZERO;
        self.planner == other.planner
            && self.seed == other.seed
            && self.scenario_digest == other.scenario_digest
            && self.path == other.path
            && self.raw_path == other.raw_path
            && self.goal_vertex == other.goal_vertex
            && a == b
            && self.tree == other.tree
            && self.best_cost_trace == other.best_cost_trace
            && self.directed == other.directed
    }
}

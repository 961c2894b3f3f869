//! JSON record written by `plan` and read back by `render`.

use std::path::Path as FsPath;

use serde::{Deserialize, Serialize};

use sectorplan::{PlanResult, PlannerKind, Point2, Scenario};

use crate::error::CliError;
use crate::settings::PlannerSettings;

pub const RESULT_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultFile {
    pub format: u32,
    pub planner: PlannerKind,
    pub scenario_kind: String,
    pub obstacle_count: usize,
    pub seed: u64,
    pub scenario_digest: String,
    pub rng: String,
    pub config_digest: String,
    pub success: bool,
    pub node_count: usize,
    pub iterations: usize,
    pub rejected_samples: u64,
    pub failed_extensions: usize,
    pub total_path_cost: Option<f64>,
    pub average_path_cost: Option<f64>,
    pub path: Option<Vec<Point2>>,
    pub raw_path: Option<Vec<Point2>>,
    pub config: PlannerSettings,
    /// Wall time; only written on request so files stay reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_seconds: Option<f64>,
}

impl ResultFile {
    pub fn new(result: &PlanResult, scenario: &Scenario, settings: &PlannerSettings, record_elapsed: bool) -> Self {
        Self {
            format: RESULT_FORMAT_VERSION,
            planner: result.planner,
            scenario_kind: scenario.kind().to_string(),
            obstacle_count: scenario.obstacles().len(),
            seed: result.seed,
            scenario_digest: result.scenario_digest.clone(),
            rng: result.rng_algorithm.to_string(),
            config_digest: settings.digest(),
            success: result.success(),
            node_count: result.metrics.node_count,
            iterations: result.metrics.iterations,
            rejected_samples: result.metrics.rejected_samples,
            failed_extensions: result.metrics.failed_extensions,
            total_path_cost: result.metrics.total_path_cost,
            average_path_cost: result.metrics.average_path_cost,
            path: result.path.as_ref().map(|p| p.waypoints().to_vec()),
            raw_path: result.raw_path.as_ref().map(|p| p.waypoints().to_vec()),
            config: settings.clone(),
            elapsed_seconds: record_elapsed.then_some(result.metrics.elapsed.as_secs_f64()),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("result serializes");
        s.push('\n');
        s
    }

    pub fn load(path: &FsPath) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let bad = |message: String| CliError::ResultFormat {
            path: path.to_path_buf(),
            message,
        };
        let file: ResultFile =
            serde_json::from_str(&text).map_err(|e| bad(format!("line {} column {}: {e}", e.line(), e.column())))?;
        if file.format != RESULT_FORMAT_VERSION {
            return Err(bad(format!("unsupported format {}", file.format)));
        }
        if file.config.kind() != file.planner {
            return Err(bad("planner field disagrees with the configuration".into()));
        }
        if file.config.digest() != file.config_digest {
            return Err(bad("configuration digest does not match the configuration".into()));
        }
        Ok(file)
    }
}

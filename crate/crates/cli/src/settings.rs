//! Planner tuning flags and the serialized configuration echo.

use std::f64::consts::PI;

use clap::Args;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use sectorplan::{
    plan_ad_rrt_star, plan_rrt_star, AdRrtStarConfig, AdvanceRule, AngleSchedule, NearParams, PlanError, PlanResult,
    PlannerConfig, PlannerKind, Scenario,
};

/// Flags shared by `plan` and `bench`. Both planners in a pair are built
/// from the same values so their common fields always agree.
#[derive(Debug, Clone, Args)]
pub struct PlannerTuning {
    /// Sampling iterations per run.
    #[arg(long, default_value_t = 10_000)]
    pub iterations: usize,
    /// Maximum steering distance.
    #[arg(long, default_value_t = sectorplan::rrt_star::DEFAULT_STEP)]
    pub step: f64,
    #[arg(long, default_value_t = sectorplan::rrt_star::DEFAULT_GOAL_RADIUS)]
    pub goal_radius: f64,
    /// Probability of sampling the destination directly.
    #[arg(long, default_value_t = sectorplan::rrt_star::DEFAULT_GOAL_BIAS)]
    pub goal_bias: f64,
    /// Near-ball constant; defaults to 2 * diagonal / sqrt(pi).
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Near-ball lower bound; defaults to two steps.
    #[arg(long)]
    pub radius_floor: Option<f64>,
    /// A* grid resolution.
    #[arg(long, default_value_t = sectorplan::global_planner::DEFAULT_CELL_SIZE)]
    pub cell_size: f64,
    #[arg(long, default_value_t = 0.0)]
    pub initial_angle_deg: f64,
    #[arg(long, default_value_t = 15.0)]
    pub angle_increment_deg: f64,
    #[arg(long, default_value_t = 180.0)]
    pub max_angle_deg: f64,
    /// Iterations without progress before the sector widens.
    #[arg(long, default_value_t = 200)]
    pub stall_iterations: usize,
    /// Distance at which a waypoint counts as reached; defaults to 1.5 steps.
    #[arg(long)]
    pub reach_distance: Option<f64>,
    /// Sector length floor is map extent divided by this.
    #[arg(long, default_value_t = sectorplan::ad_rrt_star::DEFAULT_EXPANSION_FACTOR)]
    pub expansion_factor: f64,
    /// Keep the sector anchored at the source.
    #[arg(long)]
    pub no_advance: bool,
    /// Report the literal parent walk instead of the shortcut path.
    #[arg(long)]
    pub no_shortcut: bool,
}

impl Default for PlannerTuning {
    fn default() -> Self {
        use clap::Parser;
        #[derive(Parser)]
        struct Wrapper {
            #[command(flatten)]
            tuning: PlannerTuning,
        }
        Wrapper::parse_from(["defaults"]).tuning
    }
}

/// Half-angle in radians; 180 degrees maps to exactly pi.
fn half_angle(deg: f64) -> f64 {
    if deg >= 180.0 {
        PI
    } else {
        deg.to_radians()
    }
}

impl PlannerTuning {
    pub fn base(&self, s: &Scenario, seed: u64) -> PlannerConfig {
        let mut near = NearParams::for_scenario(s, self.step);
        if let Some(g) = self.gamma {
            near.gamma = g;
        }
        if let Some(f) = self.radius_floor {
            near.radius_floor = f;
        }
        PlannerConfig {
            max_iterations: self.iterations,
            step: self.step,
            near,
            goal_radius: self.goal_radius,
            goal_bias: self.goal_bias,
            seed,
        }
    }

    pub fn directed(&self, s: &Scenario, seed: u64) -> AdRrtStarConfig {
        AdRrtStarConfig {
            base: self.base(s, seed),
            cell_size: self.cell_size,
            schedule: AngleSchedule {
                initial_half_angle: half_angle(self.initial_angle_deg),
                increment: self.angle_increment_deg.to_radians(),
                max_half_angle: half_angle(self.max_angle_deg),
                stall_iterations: self.stall_iterations,
            },
            advance: AdvanceRule {
                reach_distance: self.reach_distance.unwrap_or(1.5 * self.step),
                enabled: !self.no_advance,
            },
            expansion_factor: self.expansion_factor,
            shortcut: !self.no_shortcut,
        }
    }

    pub fn settings(&self, planner: PlannerKind, s: &Scenario, seed: u64) -> PlannerSettings {
        match planner {
            PlannerKind::RrtStar => PlannerSettings::RrtStar(self.base(s, seed)),
            PlannerKind::AdRrtStar => PlannerSettings::AdRrtStar(self.directed(s, seed)),
        }
    }
}

/// Full configuration of one run, as echoed into result files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "planner", rename_all = "snake_case")]
pub enum PlannerSettings {
    RrtStar(PlannerConfig),
    AdRrtStar(AdRrtStarConfig),
}

impl PlannerSettings {
    pub fn kind(&self) -> PlannerKind {
        match self {
            PlannerSettings::RrtStar(_) => PlannerKind::RrtStar,
            PlannerSettings::AdRrtStar(_) => PlannerKind::AdRrtStar,
        }
    }

    pub fn seed(&self) -> u64 {
        match self {
            PlannerSettings::RrtStar(c) => c.seed,
            PlannerSettings::AdRrtStar(c) => c.base.seed,
        }
    }

    /// SHA-256 of the compact JSON encoding.
    pub fn digest(&self) -> String {
        let json = serde_json::to_string(self).expect("settings serialize");
        hex::encode(Sha256::digest(json.as_bytes()))
    }

    pub fn run(&self, s: &Scenario) -> Result<PlanResult, PlanError> {
        match self {
            PlannerSettings::RrtStar(c) => plan_rrt_star(s, c),
            PlannerSettings::AdRrtStar(c) => plan_ad_rrt_star(s, c),
        }
    }
}

/// Splits a planner run into its result, treating an unreachable goal as a
/// regular (unsuccessful) outcome.
pub fn run_to_outcome(settings: &PlannerSettings, s: &Scenario) -> Result<PlanResult, PlanError> {
    match settings.run(s) {
        Ok(r) => Ok(r),
        Err(PlanError::NoPathFound(r)) => Ok(*r),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use sectorplan::{generate_scenario, ScenarioKind};

    #[test]
    fn defaults_match_core_defaults() {
        let s = generate_scenario(ScenarioKind::S2, 1, Default::default()).unwrap();
        let t = PlannerTuning::default();
        assert_eq!(t.base(&s, 4), PlannerConfig::for_scenario(&s, 10_000, 4));
        assert_eq!(t.directed(&s, 4), AdRrtStarConfig::for_scenario(&s, 10_000, 4));
    }

    #[test]
    fn digest_tracks_every_field() {
        let s = generate_scenario(ScenarioKind::S2, 1, Default::default()).unwrap();
        let t = PlannerTuning::default();
        let a = t.settings(PlannerKind::AdRrtStar, &s, 1);
        assert_eq!(a.digest(), t.settings(PlannerKind::AdRrtStar, &s, 1).digest());
        assert_ne!(a.digest(), t.settings(PlannerKind::AdRrtStar, &s, 2).digest());
        assert_ne!(a.digest(), t.settings(PlannerKind::RrtStar, &s, 1).digest());
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(serde_json::from_str::<PlannerSettings>(&json).unwrap(), a);
    }
}

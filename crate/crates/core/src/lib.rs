//! Sampling-based path planning on 2D maps with circular obstacles.
//!
//! Two planners share one tree and collision model: a baseline RRT*
//! ([`plan_rrt_star`]) and a directed variant ([`plan_ad_rrt_star`]) that
//! confines sampling to a sector aimed along an A* route.
//!
//! ```
//! use sectorplan::{generate_scenario, plan_ad_rrt_star, AdRrtStarConfig, ScenarioKind};
//!
//! let s = generate_scenario(ScenarioKind::S4, 7, Default::default()).unwrap();
//! let cfg = AdRrtStarConfig::for_scenario(&s, 2_000, 1);
//! if let Ok(result) = plan_ad_rrt_star(&s, &cfg) {
//!     assert!(result.path.unwrap().total_cost() > 0.0);
//! }
//! ```

pub mod ad_rrt_star;
pub mod collision;
pub mod error;
pub mod geometry;
pub mod global_planner;
pub mod kdtree;
pub mod plan;
pub mod rng;
pub mod rrt_star;
pub mod tree;
pub mod world;

pub use ad_rrt_star::{
    advance_anchor, bounded_sample, build_region, expansion_scale, plan_ad_rrt_star, prune_path, should_widen,
    AdRrtStarConfig, AdvanceRule, AngleSchedule, ConnectivityRegion, RegionParams,
};
pub use collision::{edge_is_free, CollisionChecker};
pub use error::{GeometryError, GlobalPlanError, PlanError, WorldError};
pub use geometry::{
    angle_of, angular_deviation, euclidean_distance, normalize_angle, point_in_sector, segment_hits_disc, Disc, Point2,
    Sector, Segment,
};
pub use global_planner::{astar, dijkstra_oracle, plan_global_path, rasterize, Cell, GlobalPath, GridMap};
pub use plan::{
    CostSample, DirectedTrace, PlanMetrics, PlanResult, PlannerKind, RegionChange, RegionEvent, SampleAudit,
};
pub use rng::{planner_rng, PlannerRng, RNG_ALGORITHM};
pub use rrt_star::{choose_parent, near_radius, plan_rrt_star, rewire, steer, NearParams, PlannerConfig, SteerParams};
pub use tree::{initialize_tree, Tree, TreeViolation, Vertex};
pub use world::{
    generate_custom, generate_scenario, is_free, load_scenario, polyline_length, save_scenario, Path, Scenario,
    ScenarioKind, ScenarioParams,
};

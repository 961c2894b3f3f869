//! RRT* building blocks shared by both planners, and the baseline planner
//! that samples the whole free space.

use std::f64::consts::PI;
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::collision::CollisionChecker;
use crate::error::{GeometryError, PlanError};
use crate::geometry::{euclidean_distance, Point2};
use crate::plan::{CostSample, PlanMetrics, PlanResult, PlannerKind};
use crate::rng::{planner_rng, PlannerRng, RNG_ALGORITHM};
use crate::tree::Tree;
use crate::world::{Path, Scenario};

/// Consecutive rejections tolerated while drawing one free-space sample.
pub const MAX_SAMPLE_REJECTIONS: usize = 10_000;

pub const DEFAULT_STEP: f64 = 30.0;
pub const DEFAULT_GOAL_RADIUS: f64 = 25.0;
pub const DEFAULT_GOAL_BIAS: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteerParams {
    pub step: f64,
}

/// Shrinking-ball neighbourhood: `max(floor, gamma * (ln n / n)^(1/dim))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NearParams {
    pub gamma: f64,
    pub dim: u32,
    pub radius_floor: f64,
}

impl NearParams {
    /// `gamma = 2 * diagonal / sqrt(pi)`, floor of two steps.
    pub fn for_scenario(s: &Scenario, step: f64) -> Self {
        Self {
            gamma: 2.0 * s.diagonal() / PI.sqrt(),
            dim: 2,
            radius_floor: 2.0 * step,
        }
    }
}

pub fn near_radius(p: &NearParams, n: usize) -> f64 {
    let n = n.max(1) as f64;
    let shrink = p.gamma * (n.ln() / n).powf(1.0 / p.dim as f64);
    shrink.max(p.radius_floor)
}

/// Moves from `from` towards `toward` by at most `p.step`.
pub fn steer(from: Point2, toward: Point2, p: &SteerParams) -> Result<Point2, GeometryError> {
    let d = euclidean_distance(from, toward);
    if d == 0.0 {
        return Err(GeometryError::ZeroVector);
    }
    if d <= p.step {
        return Ok(toward);
    }
    let k = p.step / d;
    Ok(Point2::new(
        from.x() + k * (toward.x() - from.x()),
        from.y() + k * (toward.y() - from.y()),
    ))
}

/// Lowest through-cost parent among `candidates` with a free edge to
/// `new_pos`, falling back to `fallback` (whose edge is already known free).
/// Ties resolve to the lowest index.
pub fn choose_parent(
    tree: &Tree,
    candidates: &[usize],
    fallback: usize,
    new_pos: Point2,
    checker: &CollisionChecker,
) -> usize {
    let through = |v: usize| tree.cost(v) + euclidean_distance(tree.position(v), new_pos);
    let mut ranked: Vec<(f64, usize)> = candidates
        .iter()
        .copied()
        .chain(std::iter::once(fallback))
        .map(|v| (through(v), v))
        .collect();
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    ranked.dedup_by_key(|e| e.1);
    ranked
        .into_iter()
        .find(|&(_, v)| v == fallback || checker.edge_is_free(tree.position(v), new_pos))
        .map(|(_, v)| v)
        .unwrap_or(fallback)
}

/// Reparents each vertex in `near` under `new_vertex` when that strictly
/// lowers its cost over a free edge. Returns the number of rewired vertices.
pub fn rewire(tree: &mut Tree, near: &[usize], new_vertex: usize, checker: &CollisionChecker) -> usize {
    let new_pos = tree.position(new_vertex);
    let new_parent = tree.parent(new_vertex);
    let mut count = 0;
    for &v in near {
        if v == new_vertex || Some(v) == new_parent || v == Tree::ROOT {
            continue;
        }
        let through = tree.cost(new_vertex) + euclidean_distance(new_pos, tree.position(v));
        if through < tree.cost(v) && checker.edge_is_free(new_pos, tree.position(v)) {
            debug_assert!(!tree.is_ancestor(v, new_vertex), "rewire would create a cycle");
            tree.reparent(v, new_vertex);
            count += 1;
        }
    }
    count
}

/// Result of one tree-extension attempt.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Extension {
    Inserted {
        vertex: usize,
        rewired: usize,
    },
    /// The sample coincides with its nearest vertex.
    Degenerate,
    /// The steered point was refused by the caller's acceptance test.
    Refused,
    /// The edge from the nearest vertex collides.
    Blocked,
}

/// Nearest, steer, collision check, near, choose parent, insert, rewire.
pub(crate) fn extend(
    tree: &mut Tree,
    sample: Point2,
    step: &SteerParams,
    near_params: &NearParams,
    checker: &CollisionChecker,
    accept: impl Fn(Point2) -> bool,
) -> Extension {
    let nearest = tree.nearest(sample);
    let Ok(new_pos) = steer(tree.position(nearest), sample, step) else {
        return Extension::Degenerate;
    };
    if !accept(new_pos) {
        return Extension::Refused;
    }
    if !checker.edge_is_free(tree.position(nearest), new_pos) {
        return Extension::Blocked;
    }
    let radius = near_radius(near_params, tree.len());
    let near = tree.near(new_pos, radius);
    let parent = choose_parent(tree, &near, nearest, new_pos, checker);
    let vertex = tree.insert(parent, new_pos);
    debug_assert!(tree.check_vertex(vertex).is_ok());
    let rewired = rewire(tree, &near, vertex, checker);
    Extension::Inserted { vertex, rewired }
}

/// Uniform draw over the map rectangle, redrawn until free.
pub(crate) fn sample_uniform_free(
    checker: &CollisionChecker,
    width: f64,
    height: f64,
    rng: &mut PlannerRng,
    rejected: &mut u64,
) -> Result<Point2, PlanError> {
    for _ in 0..MAX_SAMPLE_REJECTIONS {
        let p = Point2::new(rng.random::<f64>() * width, rng.random::<f64>() * height);
        if checker.is_free(p) {
            return Ok(p);
        }
        *rejected += 1;
    }
    Err(PlanError::SamplingExhausted(MAX_SAMPLE_REJECTIONS))
}

/// Settings shared by both planners.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlannerConfig {
    pub max_iterations: usize,
    pub step: f64,
    pub near: NearParams,
    pub goal_radius: f64,
    /// Probability of sampling the destination itself.
    pub goal_bias: f64,
    pub seed: u64,
}

impl PlannerConfig {
    pub fn for_scenario(s: &Scenario, max_iterations: usize, seed: u64) -> Self {
        Self {
            max_iterations,
            step: DEFAULT_STEP,
            near: NearParams::for_scenario(s, DEFAULT_STEP),
            goal_radius: DEFAULT_GOAL_RADIUS,
            goal_bias: DEFAULT_GOAL_BIAS,
            seed,
        }
    }

    pub fn validate(&self, s: &Scenario) -> Result<(), PlanError> {
        let bad = |m: &str| Err(PlanError::InvalidConfig(m.to_string()));
        if !(self.step.is_finite() && self.step > 0.0) {
            return bad("step must be positive");
        }
        if !(self.near.gamma.is_finite() && self.near.gamma > 0.0) {
            return bad("gamma must be positive");
        }
        if self.near.dim != 2 {
            return bad("near dimension must be 2");
        }
        if !(self.near.radius_floor.is_finite() && self.near.radius_floor >= 0.0) {
            return bad("radius floor must be non-negative");
        }
        if !(self.goal_radius.is_finite() && self.goal_radius > 0.0) {
            return bad("goal radius must be positive");
        }
        if !(0.0..=1.0).contains(&self.goal_bias) {
            return bad("goal bias must lie in [0, 1]");
        }
        if euclidean_distance(s.source(), s.destination()) <= self.goal_radius {
            return bad("source already lies inside the goal region");
        }
        Ok(())
    }
}

/// Tracks goal-region vertices and the cheapest of them.
#[derive(Debug, Clone)]
pub(crate) struct GoalTracker {
    center: Point2,
    radius: f64,
    members: Vec<usize>,
    best: Option<usize>,
    pub trace: Vec<CostSample>,
}

impl GoalTracker {
    pub fn new(center: Point2, radius: f64) -> Self {
        Self {
            center,
            radius,
            members: Vec::new(),
            best: None,
            trace: Vec::new(),
        }
    }

    pub fn in_goal(&self, p: Point2) -> bool {
        euclidean_distance(p, self.center) <= self.radius
    }

    /// Registers a new vertex (if any) and refreshes the best cost, which
    /// rewiring may have lowered. Returns true if the goal was reached for
    /// the first time.
    pub fn update(&mut self, tree: &Tree, iteration: usize, inserted: Option<usize>) -> bool {
        let first = self.best.is_none();
        if let Some(v) = inserted {
            if self.in_goal(tree.position(v)) {
                self.members.push(v);
            }
        }
        let best = self
            .members
            .iter()
            .copied()
            .min_by(|&a, &b| tree.cost(a).total_cmp(&tree.cost(b)).then(a.cmp(&b)));
        if let Some(b) = best {
            let cost = tree.cost(b);
            if self.trace.last().is_none_or(|s| s.cost != cost) {
                self.trace.push(CostSample { iteration, cost });
            }
        }
        self.best = best;
        first && best.is_some()
    }

    pub fn best(&self) -> Option<usize> {
        self.best
    }
}

/// Baseline RRT*: uniform sampling over free space for `max_iterations`.
pub fn plan_rrt_star(s: &Scenario, cfg: &PlannerConfig) -> Result<PlanResult, PlanError> {
    cfg.validate(s)?;
    let started = Instant::now();
    let checker = CollisionChecker::new(s);
    let mut rng = planner_rng(cfg.seed);
    let step = SteerParams { step: cfg.step };
    let mut tree = Tree::new(s.source());
    let mut goal = GoalTracker::new(s.destination(), cfg.goal_radius);
    let mut rejected = 0u64;
    let mut failed = 0usize;

    for it in 0..cfg.max_iterations {
        let sample = if cfg.goal_bias > 0.0 && rng.random::<f64>() < cfg.goal_bias {
            s.destination()
        } else {
            sample_uniform_free(&checker, s.width(), s.height(), &mut rng, &mut rejected)?
        };
        let inserted = match extend(&mut tree, sample, &step, &cfg.near, &checker, |_| true) {
            Extension::Inserted { vertex, .. } => Some(vertex),
            _ => {
                failed += 1;
                None
            }
        };
        goal.update(&tree, it, inserted);
    }

    let raw_path = goal.best().map(|g| Path::new(tree.path_to(g)));
    let elapsed = started.elapsed();
    let result = PlanResult {
        planner: PlannerKind::RrtStar,
        seed: cfg.seed,
        rng_algorithm: RNG_ALGORITHM,
        scenario_digest: s.digest(),
        metrics: PlanMetrics {
            node_count: tree.len(),
            iterations: cfg.max_iterations,
            elapsed,
            total_path_cost: raw_path.as_ref().map(Path::total_cost),
            average_path_cost: raw_path.as_ref().map(Path::average_cost),
            rejected_samples: rejected,
            failed_extensions: failed,
        },
        path: raw_path.clone(),
        raw_path,
        goal_vertex: goal.best(),
        tree,
        best_cost_trace: goal.trace,
        directed: None,
    };
    if result.success() {
        Ok(result)
    } else {
        Err(PlanError::NoPathFound(Box::new(result)))
    }
}

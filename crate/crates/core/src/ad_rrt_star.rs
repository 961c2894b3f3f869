//! Angle-based directed RRT*.
//!
//! Sampling is confined to a sector whose apex sits on the current anchor
//! and whose heading points at the next waypoint of an A* route. The sector
//! starts as a ray and widens symmetrically whenever the tree stops making
//! progress toward its target waypoint. Once the tree gets within reach of
//! that waypoint the anchor moves up to it and the sector snaps back to its
//! initial width. After the goal region is first reached, the sector is
//! re-seeded from the source towards the destination and refinement
//! continues until the iteration budget is spent. The final path is the
//! parent walk to the best goal vertex, shortcut where edges allow.
//!
//! New vertices must land inside the current sector. The baseline's goal
//! bias applies only while the destination lies inside it.

use std::f64::consts::PI;
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::collision::CollisionChecker;
use crate::error::PlanError;
use crate::geometry::{angle_of, euclidean_distance, point_in_sector, Point2, Sector};
use crate::global_planner::{plan_global_path, GlobalPath, DEFAULT_CELL_SIZE};
use crate::plan::{DirectedTrace, PlanMetrics, PlanResult, PlannerKind, RegionChange, RegionEvent, SampleAudit};
use crate::rng::{planner_rng, PlannerRng, RNG_ALGORITHM};
use crate::rrt_star::{
    extend, sample_uniform_free, Extension, GoalTracker, PlannerConfig, SteerParams, MAX_SAMPLE_REJECTIONS,
};
use crate::tree::Tree;
use crate::world::{polyline_length, Path, Scenario};

pub const DEFAULT_EXPANSION_FACTOR: f64 = 10.0;

/// Sector length floor: map extent over the expansion factor.
pub fn expansion_scale(map_extent: f64, m: f64) -> f64 {
    map_extent / m
}

/// How the sector half-angle evolves while the tree stalls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AngleSchedule {
    pub initial_half_angle: f64,
    pub increment: f64,
    pub max_half_angle: f64,
    /// Iterations without progress before the sector widens.
    pub stall_iterations: usize,
}

impl Default for AngleSchedule {
    fn default() -> Self {
        Self {
            initial_half_angle: 0.0,
            increment: 15f64.to_radians(),
            max_half_angle: PI,
            stall_iterations: 200,
        }
    }
}

impl AngleSchedule {
    pub fn widen(&self, half_angle: f64) -> f64 {
        (half_angle + self.increment).min(self.max_half_angle)
    }

    fn validate(&self) -> Result<(), PlanError> {
        let ok = 0.0 <= self.initial_half_angle
            && self.initial_half_angle <= self.max_half_angle
            && self.max_half_angle <= PI
            && self.increment > 0.0
            && self.increment.is_finite()
            && self.stall_iterations > 0;
        if ok {
            Ok(())
        } else {
            Err(PlanError::InvalidConfig("angle schedule out of range".into()))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdvanceRule {
    pub reach_distance: f64,
    pub enabled: bool,
}

impl AdvanceRule {
    pub fn for_step(step: f64) -> Self {
        Self {
            reach_distance: 1.5 * step,
            enabled: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdRrtStarConfig {
    pub base: PlannerConfig,
    pub cell_size: f64,
    pub schedule: AngleSchedule,
    pub advance: AdvanceRule,
    pub expansion_factor: f64,
    pub shortcut: bool,
}

impl AdRrtStarConfig {
    pub fn from_base(base: PlannerConfig) -> Self {
        let advance = AdvanceRule::for_step(base.step);
        Self {
            base,
            cell_size: DEFAULT_CELL_SIZE,
            schedule: AngleSchedule::default(),
            advance,
            expansion_factor: DEFAULT_EXPANSION_FACTOR,
            shortcut: true,
        }
    }

    pub fn for_scenario(s: &Scenario, max_iterations: usize, seed: u64) -> Self {
        Self::from_base(PlannerConfig::for_scenario(s, max_iterations, seed))
    }

    fn validate(&self, s: &Scenario) -> Result<(), PlanError> {
        self.base.validate(s)?;
        self.schedule.validate()?;
        if !(self.cell_size.is_finite() && self.cell_size > 0.0) {
            return Err(PlanError::InvalidConfig("cell size must be positive".into()));
        }
        if !(self.advance.reach_distance.is_finite() && self.advance.reach_distance > 0.0) {
            return Err(PlanError::InvalidConfig("reach distance must be positive".into()));
        }
        if !(self.expansion_factor.is_finite() && self.expansion_factor > 0.0) {
            return Err(PlanError::InvalidConfig("expansion factor must be positive".into()));
        }
        Ok(())
    }
}

/// Lengths that shape every sector of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionParams {
    pub expansion_scale: f64,
    pub step: f64,
    pub reach_distance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectivityRegion {
    pub sector: Sector,
    pub anchor_waypoint_index: usize,
    /// Global waypoint the sector currently points at.
    pub target_index: usize,
    pub expansion_scale: f64,
}

impl ConnectivityRegion {
    pub fn anchor(&self) -> Point2 {
        self.sector.apex()
    }
}

/// First waypoint after `anchor_idx` farther than the reach distance from
/// the anchor, or the final waypoint if every remaining one is within reach.
fn target_after(anchor: Point2, gpath: &GlobalPath, anchor_idx: usize, reach: f64) -> usize {
    let last = gpath.waypoints.len() - 1;
    (anchor_idx + 1..=last)
        .find(|&j| euclidean_distance(anchor, gpath.waypoints[j]) > reach)
        .unwrap_or(last)
}

fn heading_to(anchor: Point2, target: Point2, destination: Point2) -> f64 {
    angle_of(anchor, target)
        .or_else(|_| angle_of(anchor, destination))
        .unwrap_or(0.0)
}

/// Sector anchored at `anchor`, pointing at the next global waypoint beyond
/// the reach distance (the destination when none remains). Its length is
/// the distance to that waypoint plus one step, but never below the
/// expansion scale.
pub fn build_region(
    anchor: Point2,
    gpath: &GlobalPath,
    anchor_idx: usize,
    half_angle: f64,
    params: &RegionParams,
) -> ConnectivityRegion {
    let destination = *gpath.waypoints.last().expect("global path is non-empty");
    let target_index = target_after(anchor, gpath, anchor_idx, params.reach_distance);
    let target = gpath.waypoints[target_index];
    let length = params
        .expansion_scale
        .max(euclidean_distance(anchor, target) + params.step);
    let sector = Sector::new(anchor, heading_to(anchor, target, destination), half_angle, length)
        .expect("region parameters are validated");
    ConnectivityRegion {
        sector,
        anchor_waypoint_index: anchor_idx,
        target_index,
        expansion_scale: params.expansion_scale,
    }
}

/// Region used once a path exists: from the source towards the destination.
fn refinement_region(s: &Scenario, gpath: &GlobalPath, half_angle: f64, params: &RegionParams) -> ConnectivityRegion {
    let (src, dst) = (s.source(), s.destination());
    let length = params.expansion_scale.max(euclidean_distance(src, dst) + params.step);
    let last = gpath.waypoints.len() - 1;
    ConnectivityRegion {
        sector: Sector::new(src, heading_to(src, dst, dst), half_angle, length)
            .expect("region parameters are validated"),
        anchor_waypoint_index: last,
        target_index: last,
        expansion_scale: params.expansion_scale,
    }
}

/// True when the sector contains the whole map rectangle.
fn covers_map(sector: &Sector, width: f64, height: f64) -> bool {
    if !sector.is_full_disc() {
        return false;
    }
    let a = sector.apex();
    let far_x = a.x().max(width - a.x());
    let far_y = a.y().max(height - a.y());
    far_x.hypot(far_y) <= sector.length()
}

/// Draws a point uniformly from sector ∩ map ∩ free space.
///
/// The angle is uniform across the sector and the radius is `length * sqrt(u)`
/// so density is uniform in area; a zero half-angle samples uniformly along
/// the ray. When the sector swallows the whole map the draw is made over the
/// map rectangle instead, which has the same law.
pub fn bounded_sample(
    region: &ConnectivityRegion,
    checker: &CollisionChecker,
    s: &Scenario,
    rng: &mut PlannerRng,
    rejected: &mut u64,
) -> Result<Point2, PlanError> {
    let sector = &region.sector;
    if covers_map(sector, s.width(), s.height()) {
        return sample_uniform_free(checker, s.width(), s.height(), rng, rejected);
    }
    let half = sector.half_angle();
    for _ in 0..MAX_SAMPLE_REJECTIONS {
        let (theta, r) = if half == 0.0 {
            (sector.heading(), sector.length() * rng.random::<f64>())
        } else {
            let theta = sector.heading() + half * (2.0 * rng.random::<f64>() - 1.0);
            (theta, sector.length() * rng.random::<f64>().sqrt())
        };
        let p = sector.apex().offset_polar(theta, r);
        if checker.is_free(p) && point_in_sector(p, sector) {
            return Ok(p);
        }
        *rejected += 1;
    }
    Err(PlanError::SamplingExhausted(MAX_SAMPLE_REJECTIONS))
}

pub fn should_widen(iterations_since_progress: usize, schedule: &AngleSchedule) -> bool {
    iterations_since_progress >= schedule.stall_iterations
}

/// Moves the anchor to the tree vertex nearest the target waypoint once
/// one lies within reach of it; the new region starts at the schedule's
/// initial half-angle. Returns `None` when nothing changes.
pub fn advance_anchor(
    tree: &Tree,
    gpath: &GlobalPath,
    current: &ConnectivityRegion,
    rule: &AdvanceRule,
    schedule: &AngleSchedule,
    params: &RegionParams,
) -> Option<ConnectivityRegion> {
    if !rule.enabled || current.target_index <= current.anchor_waypoint_index {
        return None;
    }
    let target = gpath.waypoints[current.target_index];
    let reached = tree.near(target, rule.reach_distance).into_iter().min_by(|&a, &b| {
        euclidean_distance(tree.position(a), target)
            .total_cmp(&euclidean_distance(tree.position(b), target))
            .then(a.cmp(&b))
    })?;
    Some(build_region(
        tree.position(reached),
        gpath,
        current.target_index,
        schedule.initial_half_angle,
        params,
    ))
}

/// Root-to-goal path. With `shortcut`, each waypoint connects straight to
/// the farthest later waypoint it can see.
pub fn prune_path(tree: &Tree, goal_vertex: usize, shortcut: bool, checker: &CollisionChecker) -> Path {
    let raw = tree.path_to(goal_vertex);
    if !shortcut || raw.len() <= 2 {
        return Path::new(raw);
    }
    let mut out = vec![raw[0]];
    let mut i = 0;
    while i < raw.len() - 1 {
        let mut j = raw.len() - 1;
        while j > i + 1 && !checker.edge_is_free(raw[i], raw[j]) {
            j -= 1;
        }
        out.push(raw[j]);
        i = j;
    }
    // Summation order differs between the two; never report a longer route.
    if polyline_length(&out) > polyline_length(&raw) {
        return Path::new(raw);
    }
    Path::new(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Seeking,
    Refining,
}

/// Per-run sector state machine.
struct RegionState<'a> {
    scenario: &'a Scenario,
    gpath: &'a GlobalPath,
    schedule: AngleSchedule,
    params: RegionParams,
    phase: Phase,
    region: ConnectivityRegion,
    stall: usize,
    phase_best: f64,
    events: Vec<RegionEvent>,
}

impl<'a> RegionState<'a> {
    fn new(scenario: &'a Scenario, gpath: &'a GlobalPath, schedule: AngleSchedule, params: RegionParams) -> Self {
        let region = build_region(scenario.source(), gpath, 0, schedule.initial_half_angle, &params);
        let mut state = Self {
            scenario,
            gpath,
            schedule,
            params,
            phase: Phase::Seeking,
            region,
            stall: 0,
            phase_best: f64::INFINITY,
            events: Vec::new(),
        };
        state.log(0, RegionChange::Start);
        state
    }

    fn log(&mut self, iteration: usize, change: RegionChange) {
        self.events.push(RegionEvent {
            iteration,
            change,
            anchor_index: self.region.anchor_waypoint_index,
            half_angle: self.region.sector.half_angle(),
        });
    }

    fn target(&self) -> Point2 {
        match self.phase {
            Phase::Seeking => self.gpath.waypoints[self.region.target_index],
            Phase::Refining => self.scenario.destination(),
        }
    }

    fn reset_progress(&mut self) {
        self.stall = 0;
        self.phase_best = f64::INFINITY;
    }

    fn replace(&mut self, region: ConnectivityRegion, iteration: usize, change: RegionChange) {
        self.region = region;
        self.reset_progress();
        self.log(iteration, change);
    }

    fn widen(&mut self, iteration: usize) {
        self.stall = 0;
        let current = self.region.sector.half_angle();
        let half = self.schedule.widen(current);
        if half == current {
            return;
        }
        self.region = match self.phase {
            Phase::Seeking => build_region(
                self.region.anchor(),
                self.gpath,
                self.region.anchor_waypoint_index,
                half,
                &self.params,
            ),
            Phase::Refining => refinement_region(self.scenario, self.gpath, half, &self.params),
        };
        self.log(iteration, RegionChange::Widen);
    }

    fn record_progress(&mut self, inserted: Option<Point2>) {
        let target = self.target();
        match inserted.map(|p| euclidean_distance(p, target)) {
            Some(d) if d < self.phase_best => {
                self.phase_best = d;
                self.stall = 0;
            }
            _ => self.stall += 1,
        }
    }
}

/// Two-stage planner: A* route, then angle-bounded RRT* along it.
pub fn plan_ad_rrt_star(s: &Scenario, cfg: &AdRrtStarConfig) -> Result<PlanResult, PlanError> {
    cfg.validate(s)?;
    let base = &cfg.base;
    let started = Instant::now();
    let checker = CollisionChecker::new(s);
    let (gpath, used_fallback) = match plan_global_path(s, cfg.cell_size) {
        Ok(p) => (p, false),
        Err(_) => (GlobalPath::straight(s.source(), s.destination()), true),
    };
    let params = RegionParams {
        expansion_scale: expansion_scale(s.extent(), cfg.expansion_factor),
        step: base.step,
        reach_distance: cfg.advance.reach_distance,
    };
    let step = SteerParams { step: base.step };
    let mut rng = planner_rng(base.seed);
    let mut tree = Tree::new(s.source());
    let mut goal = GoalTracker::new(s.destination(), base.goal_radius);
    let mut state = RegionState::new(s, &gpath, cfg.schedule, params);
    let mut audit = Vec::new();
    let mut rejected = 0u64;
    let mut failed = 0usize;

    for it in 0..base.max_iterations {
        // Goal bias as in the baseline, honoured only while the destination
        // is inside the sector.
        let goal_draw = base.goal_bias > 0.0 && rng.random::<f64>() < base.goal_bias;
        let drawn = if goal_draw && point_in_sector(s.destination(), &state.region.sector) {
            Ok(s.destination())
        } else {
            bounded_sample(&state.region, &checker, s, &mut rng, &mut rejected)
        };
        let sample = match drawn {
            Ok(p) => p,
            Err(_) => {
                failed += 1;
                state.widen(it);
                continue;
            }
        };
        let sector = state.region.sector;
        let inserted = match extend(&mut tree, sample, &step, &base.near, &checker, |q| {
            point_in_sector(q, &sector)
        }) {
            Extension::Inserted { vertex, .. } => {
                audit.push(SampleAudit {
                    iteration: it,
                    sector,
                    sample,
                    vertex: tree.position(vertex),
                });
                Some(vertex)
            }
            _ => {
                failed += 1;
                None
            }
        };
        let first_arrival = goal.update(&tree, it, inserted);
        state.record_progress(inserted.map(|v| tree.position(v)));

        if first_arrival && state.phase == Phase::Seeking {
            state.phase = Phase::Refining;
            let region = refinement_region(s, &gpath, cfg.schedule.initial_half_angle, &params);
            state.replace(region, it, RegionChange::Refine);
        } else if state.phase == Phase::Seeking {
            if let Some(next) = advance_anchor(&tree, &gpath, &state.region, &cfg.advance, &cfg.schedule, &params) {
                state.replace(next, it, RegionChange::Advance);
            }
        }
        if should_widen(state.stall, &cfg.schedule) {
            state.widen(it);
        }
    }

    let goal_vertex = goal.best();
    let raw_path = goal_vertex.map(|g| Path::new(tree.path_to(g)));
    let path = goal_vertex.map(|g| prune_path(&tree, g, cfg.shortcut, &checker));
    let elapsed = started.elapsed();
    let final_sector = state.region.sector;
    let regions = std::mem::take(&mut state.events);
    let result = PlanResult {
        planner: PlannerKind::AdRrtStar,
        seed: base.seed,
        rng_algorithm: RNG_ALGORITHM,
        scenario_digest: s.digest(),
        metrics: PlanMetrics {
            node_count: tree.len(),
            iterations: base.max_iterations,
            elapsed,
            total_path_cost: path.as_ref().map(Path::total_cost),
            average_path_cost: path.as_ref().map(Path::average_cost),
            rejected_samples: rejected,
            failed_extensions: failed,
        },
        path,
        raw_path,
        goal_vertex,
        tree,
        best_cost_trace: goal.trace,
        directed: Some(DirectedTrace {
            global_path: gpath,
            used_fallback,
            final_sector,
            audit,
            regions,
        }),
    };
    if result.success() {
        Ok(result)
    } else {
        Err(PlanError::NoPathFound(Box::new(result)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Disc;
    use crate::world::ScenarioKind;
    use std::f64::consts::FRAC_PI_2;

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    fn params() -> RegionParams {
        RegionParams {
            expansion_scale: 100.0,
            step: 30.0,
            reach_distance: 45.0,
        }
    }

    fn route(points: &[(f64, f64)]) -> GlobalPath {
        GlobalPath {
            waypoints: points.iter().map(|&(x, y)| p(x, y)).collect(),
            cells: Vec::new(),
            grid_cost: 0.0,
        }
    }

    fn empty(w: f64, h: f64) -> Scenario {
        Scenario::new(
            w,
            h,
            vec![],
            p(50.0, 50.0),
            p(w - 50.0, h - 50.0),
            ScenarioKind::Custom,
            0,
        )
        .unwrap()
    }

    #[test]
    fn expansion_scale_examples() {
        assert_eq!(expansion_scale(1000.0, 10.0), 100.0);
        assert_eq!(expansion_scale(1000.0, 1.0), 1000.0);
        assert!((expansion_scale(707.1, 4.0) - 176.775).abs() < 1e-12);
    }

    #[test]
    fn region_examples() {
        let g = route(&[(0.0, 0.0), (100.0, 0.0)]);
        let r = build_region(p(0.0, 0.0), &g, 0, 0.0, &params());
        assert_eq!(r.sector.heading(), 0.0);
        assert_eq!(r.sector.half_angle(), 0.0);
        assert_eq!(r.sector.length(), 130.0);

        let g = route(&[(0.0, 0.0), (60.0, 80.0)]);
        let r = build_region(p(0.0, 0.0), &g, 0, 0.0, &params());
        assert_eq!(r.sector.heading(), 80f64.atan2(60.0));
        assert_eq!(r.sector.length(), 130.0);
        assert_eq!(r.target_index, 1);

        let r = build_region(p(0.0, 0.0), &g, 0, PI, &params());
        assert!(r.sector.is_full_disc());
        for q in [p(-50.0, -50.0), p(0.0, -129.0), p(91.0, 91.0)] {
            assert_eq!(r.sector.contains(q), euclidean_distance(q, p(0.0, 0.0)) <= 130.0);
        }
    }

    #[test]
    fn region_skips_waypoints_within_reach() {
        let g = route(&[(0.0, 0.0), (20.0, 0.0), (40.0, 0.0), (60.0, 0.0), (80.0, 0.0)]);
        let r = build_region(p(0.0, 0.0), &g, 0, 0.0, &params());
        assert_eq!(r.target_index, 3);
        // Nothing beyond reach: target the final waypoint.
        let r = build_region(p(50.0, 0.0), &g, 3, 0.0, &params());
        assert_eq!(r.target_index, 4);
        assert_eq!(r.sector.length(), 100.0);
    }

    #[test]
    fn ray_samples_stay_on_ray() {
        let s = empty(1000.0, 1000.0);
        let cc = CollisionChecker::new(&s);
        let g = route(&[(100.0, 100.0), (400.0, 500.0)]);
        let r = build_region(p(100.0, 100.0), &g, 0, 0.0, &params());
        let mut rng = planner_rng(5);
        let mut rej = 0;
        let (c, sn) = (r.sector.heading().cos(), r.sector.heading().sin());
        for _ in 0..10_000 {
            let q = bounded_sample(&r, &cc, &s, &mut rng, &mut rej).unwrap();
            let cross = (q.x() - 100.0) * sn - (q.y() - 100.0) * c;
            assert!(cross.abs() < 1e-9);
            assert!(r.sector.contains(q) && s.is_free(q));
        }
    }

    #[test]
    fn sector_samples_are_members() {
        let s = crate::world::generate_scenario(ScenarioKind::S4, 3, Default::default()).unwrap();
        let cc = CollisionChecker::new(&s);
        let g = route(&[(500.0, 500.0), (900.0, 500.0)]);
        let mut rng = planner_rng(9);
        let mut rej = 0;
        for half in [0.0, 0.1, FRAC_PI_2, 3.0, PI] {
            let r = build_region(p(500.0, 500.0), &g, 0, half, &params());
            for _ in 0..2_000 {
                let q = bounded_sample(&r, &cc, &s, &mut rng, &mut rej).unwrap();
                assert!(point_in_sector(q, &r.sector) && s.is_free(q));
            }
        }
    }

    #[test]
    fn blocked_sector_exhausts() {
        let s = Scenario::new(
            1000.0,
            1000.0,
            vec![Disc::new(p(500.0, 500.0), 300.0).unwrap()],
            p(50.0, 50.0),
            p(950.0, 950.0),
            ScenarioKind::Custom,
            0,
        )
        .unwrap();
        let cc = CollisionChecker::new(&s);
        let g = route(&[(450.0, 450.0), (550.0, 550.0)]);
        let r = build_region(p(450.0, 450.0), &g, 0, 0.5, &params());
        let mut rej = 0;
        let out = bounded_sample(&r, &cc, &s, &mut planner_rng(0), &mut rej);
        assert!(matches!(out, Err(PlanError::SamplingExhausted(_))));
        assert_eq!(rej, MAX_SAMPLE_REJECTIONS as u64);
    }

    #[test]
    fn widening_schedule() {
        let sched = AngleSchedule::default();
        assert!(!should_widen(0, &sched));
        assert!(should_widen(sched.stall_iterations, &sched));
        assert!(!should_widen(sched.stall_iterations - 1, &sched));
        let mut half = 0.0;
        let mut steps = 0;
        while half < PI {
            half = sched.widen(half);
            steps += 1;
        }
        assert_eq!(steps, 12);
        assert_eq!(half, PI);
    }

    #[test]
    fn advance_cases() {
        let g = route(&[(0.0, 0.0), (60.0, 0.0), (120.0, 0.0), (180.0, 0.0)]);
        let sched = AngleSchedule::default();
        let rule = AdvanceRule::for_step(30.0);
        let mut tree = Tree::new(p(0.0, 0.0));
        let start = build_region(p(0.0, 0.0), &g, 0, 0.4, &params());
        assert_eq!(start.target_index, 1);
        assert!(advance_anchor(&tree, &g, &start, &rule, &sched, &params()).is_none());

        let v = tree.insert(0, p(60.0, 0.0));
        let next = advance_anchor(&tree, &g, &start, &rule, &sched, &params()).unwrap();
        assert_eq!(next.anchor(), tree.position(v));
        assert_eq!(next.anchor_waypoint_index, 1);
        assert_eq!(next.target_index, 2);
        assert_eq!(next.sector.half_angle(), 0.0);

        let disabled = AdvanceRule { enabled: false, ..rule };
        assert!(advance_anchor(&tree, &g, &start, &disabled, &sched, &params()).is_none());
    }

    #[test]
    fn advance_is_monotone_along_route() {
        let g = route(&[(0.0, 0.0), (60.0, 0.0), (120.0, 0.0), (180.0, 0.0), (240.0, 0.0)]);
        let sched = AngleSchedule::default();
        let rule = AdvanceRule::for_step(30.0);
        let mut tree = Tree::new(p(0.0, 0.0));
        let mut region = build_region(p(0.0, 0.0), &g, 0, 0.0, &params());
        let mut seen = vec![region.anchor_waypoint_index];
        let mut last = 0;
        for k in 1..=24 {
            last = tree.insert(last, p(10.0 * k as f64, 0.0));
            if let Some(r) = advance_anchor(&tree, &g, &region, &rule, &sched, &params()) {
                region = r;
                seen.push(region.anchor_waypoint_index);
            }
        }
        assert!(seen.windows(2).all(|w| w[0] < w[1]), "{seen:?}");
        assert_eq!(*seen.last().unwrap(), 4);
    }

    #[test]
    fn prune_cases() {
        let s = empty(1000.0, 1000.0);
        let cc = CollisionChecker::new(&s);
        let mut t = Tree::new(p(0.0, 0.0));
        let mut last = 0;
        for k in 1..=5 {
            last = t.insert(last, p(10.0 * k as f64, 3.0 * (k % 2) as f64));
        }
        let raw = prune_path(&t, last, false, &cc);
        assert_eq!(raw.waypoints(), t.path_to(last).as_slice());
        let cut = prune_path(&t, last, true, &cc);
        assert_eq!(cut.waypoints().len(), 2);
        assert_eq!(cut.total_cost(), euclidean_distance(p(0.0, 0.0), p(50.0, 3.0)));

        // Dog-leg around a disc: the direct chord is blocked.
        let s = Scenario::new(
            1000.0,
            1000.0,
            vec![Disc::new(p(200.0, 200.0), 40.0).unwrap()],
            p(50.0, 50.0),
            p(950.0, 950.0),
            ScenarioKind::Custom,
            0,
        )
        .unwrap();
        let cc = CollisionChecker::new(&s);
        let mut t = Tree::new(p(100.0, 100.0));
        let a = t.insert(0, p(150.0, 100.0));
        let b = t.insert(a, p(260.0, 130.0));
        let c = t.insert(b, p(270.0, 200.0));
        let d = t.insert(c, p(300.0, 300.0));
        let raw = prune_path(&t, d, false, &cc);
        let cut = prune_path(&t, d, true, &cc);
        assert!(cut.total_cost() <= raw.total_cost());
        assert!(cut.waypoints().len() < raw.waypoints().len());
        assert!(cut.edges().all(|e| cc.edge_is_free(e.a, e.b)));
    }

    #[test]
    fn open_field_plan_is_directed_and_deterministic() {
        let s = empty(1000.0, 1000.0);
        let cfg = AdRrtStarConfig::for_scenario(&s, 3_000, 4);
        let a = plan_ad_rrt_star(&s, &cfg).unwrap();
        let b = plan_ad_rrt_star(&s, &cfg).unwrap();
        assert!(a.same_outcome(&b));
        a.tree.check_invariants().unwrap();
        let trace = a.directed.as_ref().unwrap();
        assert!(!trace.used_fallback);
        assert!(trace
            .audit
            .iter()
            .all(|e| e.sector.contains(e.sample) && e.sector.contains(e.vertex)));
        assert!(a.path.unwrap().total_cost() <= 1.05 * euclidean_distance(s.source(), s.destination()));
    }
}

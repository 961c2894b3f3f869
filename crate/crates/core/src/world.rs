//! Scenario model: map bounds, disc obstacles, source and destination,
//! plus the seeded S1 to S6 generators and the scenario file format.

use std::fmt;
use std::path::Path as FsPath;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::WorldError;
use crate::geometry::{euclidean_distance, Disc, Point2, Segment};

pub const SCENARIO_FILE_VERSION: u32 = 1;

/// Rejection budget for placing a single obstacle.
pub const MAX_PLACEMENT_ATTEMPTS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ScenarioKind {
    S1,
    S2,
    S3,
    S4,
    S5,
    S6,
    Custom,
}

impl ScenarioKind {
    pub const GENERATED: [ScenarioKind; 6] = [
        ScenarioKind::S1,
        ScenarioKind::S2,
        ScenarioKind::S3,
        ScenarioKind::S4,
        ScenarioKind::S5,
        ScenarioKind::S6,
    ];

    /// Obstacle count fixed for each generated kind; `None` for `Custom`.
    pub fn obstacle_count(self) -> Option<usize> {
        match self {
            ScenarioKind::S1 => Some(50),
            ScenarioKind::S2 => Some(50),
            ScenarioKind::S3 => Some(68),
            ScenarioKind::S4 => Some(70),
            ScenarioKind::S5 => Some(80),
            ScenarioKind::S6 => Some(85),
            ScenarioKind::Custom => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::S1 => "S1",
            ScenarioKind::S2 => "S2",
            ScenarioKind::S3 => "S3",
            ScenarioKind::S4 => "S4",
            ScenarioKind::S5 => "S5",
            ScenarioKind::S6 => "S6",
            ScenarioKind::Custom => "Custom",
        }
    }

    fn stream_id(self) -> u64 {
        match self {
            ScenarioKind::S1 => 1,
            ScenarioKind::S2 => 2,
            ScenarioKind::S3 => 3,
            ScenarioKind::S4 => 4,
            ScenarioKind::S5 => 5,
            ScenarioKind::S6 => 6,
            ScenarioKind::Custom => 0,
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioKind {
    type Err = WorldError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "S1" => Ok(ScenarioKind::S1),
            "S2" => Ok(ScenarioKind::S2),
            "S3" => Ok(ScenarioKind::S3),
            "S4" => Ok(ScenarioKind::S4),
            "S5" => Ok(ScenarioKind::S5),
            "S6" => Ok(ScenarioKind::S6),
            "Custom" => Ok(ScenarioKind::Custom),
            other => Err(WorldError::Parse(format!("unknown scenario kind {other:?}"))),
        }
    }
}

/// Map size and obstacle radius used by the generators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioParams {
    pub width: f64,
    pub height: f64,
    pub obstacle_radius: f64,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        Self {
            width: 1000.0,
            height: 1000.0,
            obstacle_radius: 15.0,
        }
    }
}

impl ScenarioParams {
    fn validate(&self) -> Result<(), WorldError> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !ok(self.width) || !ok(self.height) {
            return Err(WorldError::Validation("map dimensions must be positive".into()));
        }
        if !ok(self.obstacle_radius) {
            return Err(WorldError::Validation("obstacle radius must be positive".into()));
        }
        Ok(())
    }

    pub fn default_source(&self) -> Point2 {
        Point2::new(0.05 * self.width, 0.05 * self.height)
    }

    pub fn default_destination(&self) -> Point2 {
        Point2::new(0.95 * self.width, 0.95 * self.height)
    }
}

/// Planning problem on the rectangle `[0, width] × [0, height]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    width: f64,
    height: f64,
    obstacles: Vec<Disc>,
    source: Point2,
    destination: Point2,
    kind: ScenarioKind,
    seed: u64,
}

impl Scenario {
    pub fn new(
        width: f64,
        height: f64,
        obstacles: Vec<Disc>,
        source: Point2,
        destination: Point2,
        kind: ScenarioKind,
        seed: u64,
    ) -> Result<Self, WorldError> {
        let s = Self {
            width,
            height,
            obstacles,
            source,
            destination,
            kind,
            seed,
        };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<(), WorldError> {
        let pos = |v: f64| v.is_finite() && v > 0.0;
        if !pos(self.width) || !pos(self.height) {
            return Err(WorldError::Validation(format!(
                "map dimensions must be positive, got {}x{}",
                self.width, self.height
            )));
        }
        for (i, d) in self.obstacles.iter().enumerate() {
            if !self.in_bounds(d.center()) {
                return Err(WorldError::Validation(format!(
                    "obstacle {i} center {} outside map",
                    d.center()
                )));
            }
        }
        for (name, p) in [("source", self.source), ("destination", self.destination)] {
            if !self.in_bounds(p) {
                return Err(WorldError::Validation(format!("{name} {p} outside map")));
            }
            if let Some(i) = self.obstacles.iter().position(|d| d.contains(p)) {
                return Err(WorldError::Validation(format!("{name} {p} lies inside obstacle {i}")));
            }
        }
        if let Some(expected) = self.kind.obstacle_count() {
            if expected != self.obstacles.len() {
                return Err(WorldError::Validation(format!(
                    "kind {} requires {expected} obstacles, found {}",
                    self.kind,
                    self.obstacles.len()
                )));
            }
        }
        Ok(())
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn obstacles(&self) -> &[Disc] {
        &self.obstacles
    }

    pub fn source(&self) -> Point2 {
        self.source
    }

    pub fn destination(&self) -> Point2 {
        self.destination
    }

    pub fn kind(&self) -> ScenarioKind {
        self.kind
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn diagonal(&self) -> f64 {
        self.width.hypot(self.height)
    }

    /// Larger map side; the environment extent used for the expansion scale.
    pub fn extent(&self) -> f64 {
        self.width.max(self.height)
    }

    #[inline]
    pub fn in_bounds(&self, p: Point2) -> bool {
        (0.0..=self.width).contains(&p.x()) && (0.0..=self.height).contains(&p.y())
    }

    pub fn is_free(&self, p: Point2) -> bool {
        is_free(p, self)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&ScenarioFile::from(self)).expect("scenario serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, WorldError> {
        let file: ScenarioFile = serde_json::from_str(text)
            .map_err(|e| WorldError::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
        file.into_scenario()
    }

    /// SHA-256 of the canonical serialized form, hex encoded.
    pub fn digest(&self) -> String {
        let canonical = serde_json::to_string(&ScenarioFile::from(self)).expect("scenario serializes");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }
}

/// Inside the map and strictly outside every obstacle.
pub fn is_free(p: Point2, s: &Scenario) -> bool {
    s.in_bounds(p) && !s.obstacles.iter().any(|d| d.contains(p))
}

pub fn load_scenario(path: impl AsRef<FsPath>) -> Result<Scenario, WorldError> {
    let text = std::fs::read_to_string(path)?;
    Scenario::from_json(&text)
}

pub fn save_scenario(s: &Scenario, path: impl AsRef<FsPath>) -> Result<(), WorldError> {
    std::fs::write(path, s.to_json())?;
    Ok(())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    version: u32,
    kind: ScenarioKind,
    seed: u64,
    map: MapRecord,
    source: Point2,
    destination: Point2,
    obstacles: Vec<ObstacleRecord>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapRecord {
    width: f64,
    height: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObstacleRecord {
    x: f64,
    y: f64,
    r: f64,
}

impl From<&Scenario> for ScenarioFile {
    fn from(s: &Scenario) -> Self {
        ScenarioFile {
            version: SCENARIO_FILE_VERSION,
            kind: s.kind,
            seed: s.seed,
            map: MapRecord {
                width: s.width,
                height: s.height,
            },
            source: s.source,
            destination: s.destination,
            obstacles: s
                .obstacles
                .iter()
                .map(|d| ObstacleRecord {
                    x: d.center().x(),
                    y: d.center().y(),
                    r: d.radius(),
                })
                .collect(),
        }
    }
}

impl ScenarioFile {
    fn into_scenario(self) -> Result<Scenario, WorldError> {
        if self.version != SCENARIO_FILE_VERSION {
            return Err(WorldError::Validation(format!(
                "version: expected {SCENARIO_FILE_VERSION}, found {}",
                self.version
            )));
        }
        let obstacles = self
            .obstacles
            .iter()
            .enumerate()
            .map(|(i, o)| {
                let c =
                    Point2::try_new(o.x, o.y).map_err(|e| WorldError::Validation(format!("obstacles[{i}]: {e}")))?;
                Disc::new(c, o.r).map_err(|e| WorldError::Validation(format!("obstacles[{i}].r: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Scenario::new(
            self.map.width,
            self.map.height,
            obstacles,
            self.source,
            self.destination,
            self.kind,
            self.seed,
        )
    }
}

/// Spatial law for obstacle centers, one per generated kind.
#[derive(Debug, Clone, Copy, PartialEq)]
enum CenterLaw {
    Uniform,
    Gaussian(Point2),
    Corridor,
}

/// Deterministic stream of obstacle centers for a kind.
///
/// Every center lies inside the map and keeps at least two obstacle radii
/// from the source and destination.
#[derive(Debug, Clone)]
pub struct ObstacleSampler {
    kind: ScenarioKind,
    params: ScenarioParams,
    source: Point2,
    destination: Point2,
    count: usize,
    sigma: f64,
    rng: ChaCha8Rng,
}

impl ObstacleSampler {
    /// `count` drives the mixture proportions for S1 and S6.
    pub fn new(kind: ScenarioKind, count: usize, seed: u64, params: ScenarioParams) -> Result<Self, WorldError> {
        if kind == ScenarioKind::Custom {
            return Err(WorldError::Validation("Custom has no obstacle distribution".into()));
        }
        params.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(kind.stream_id());
        Ok(Self {
            kind,
            params,
            source: params.default_source(),
            destination: params.default_destination(),
            count,
            sigma: 0.15 * params.width.hypot(params.height),
            rng,
        })
    }

    fn law(&self, index: usize) -> CenterLaw {
        let center = Point2::new(0.5 * self.params.width, 0.5 * self.params.height);
        match self.kind {
            ScenarioKind::S1 => {
                let clustered = (0.8 * self.count as f64).round() as usize;
                if index < clustered {
                    CenterLaw::Gaussian(self.source)
                } else {
                    CenterLaw::Uniform
                }
            }
            ScenarioKind::S2 | ScenarioKind::S3 => CenterLaw::Corridor,
            ScenarioKind::S4 | ScenarioKind::Custom => CenterLaw::Uniform,
            ScenarioKind::S5 => CenterLaw::Gaussian(center),
            ScenarioKind::S6 => match index % 3 {
                0 => CenterLaw::Gaussian(self.source),
                1 => CenterLaw::Gaussian(center),
                _ => CenterLaw::Gaussian(self.destination),
            },
        }
    }

    fn draw(&mut self, law: CenterLaw) -> Option<Point2> {
        let (w, h) = (self.params.width, self.params.height);
        let p = match law {
            CenterLaw::Uniform | CenterLaw::Corridor => {
                Point2::new(self.rng.random_range(0.0..=w), self.rng.random_range(0.0..=h))
            }
            CenterLaw::Gaussian(mu) => {
                let n = Normal::new(0.0, self.sigma).expect("sigma is positive");
                Point2::new(mu.x() + n.sample(&mut self.rng), mu.y() + n.sample(&mut self.rng))
            }
        };
        if !(0.0..=w).contains(&p.x()) || !(0.0..=h).contains(&p.y()) {
            return None;
        }
        if law == CenterLaw::Corridor {
            let axis = Segment::new(self.source, self.destination);
            if axis.distance_to_point(p) > 0.2 * w {
                return None;
            }
        }
        let keep_out = 2.0 * self.params.obstacle_radius;
        if euclidean_distance(p, self.source) <= keep_out || euclidean_distance(p, self.destination) <= keep_out {
            return None;
        }
        Some(p)
    }

    /// Center of obstacle `index`, rejection-sampled from its law.
    pub fn center(&mut self, index: usize) -> Result<Point2, WorldError> {
        let law = self.law(index);
        for _ in 0..MAX_PLACEMENT_ATTEMPTS {
            if let Some(p) = self.draw(law) {
                return Ok(p);
            }
        }
        Err(WorldError::GenerationFailed {
            index,
            attempts: MAX_PLACEMENT_ATTEMPTS,
        })
    }
}

/// Seeded S1 to S6 scenario; a pure function of its arguments.
pub fn generate_scenario(kind: ScenarioKind, seed: u64, params: ScenarioParams) -> Result<Scenario, WorldError> {
    let count = kind
        .obstacle_count()
        .ok_or_else(|| WorldError::Validation("cannot generate a Custom scenario without a distribution".into()))?;
    generate_obstacles(kind, count, kind, seed, params)
}

/// Scenario whose obstacles follow `distribution` but with an arbitrary
/// count; the result is tagged `Custom`.
pub fn generate_custom(
    distribution: ScenarioKind,
    count: usize,
    seed: u64,
    params: ScenarioParams,
) -> Result<Scenario, WorldError> {
    generate_obstacles(distribution, count, ScenarioKind::Custom, seed, params)
}

fn generate_obstacles(
    distribution: ScenarioKind,
    count: usize,
    tag: ScenarioKind,
    seed: u64,
    params: ScenarioParams,
) -> Result<Scenario, WorldError> {
    let mut sampler = ObstacleSampler::new(distribution, count, seed, params)?;
    let obstacles = (0..count)
        .map(|i| {
            let c = sampler.center(i)?;
            Disc::new(c, params.obstacle_radius).map_err(|e| WorldError::Validation(e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Scenario::new(
        params.width,
        params.height,
        obstacles,
        params.default_source(),
        params.default_destination(),
        tag,
        seed,
    )
}

/// A feasible route: ordered waypoints and the summed edge length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Path {
    waypoints: Vec<Point2>,
    total_cost: f64,
}

impl Path {
    /// Panics when fewer than two waypoints are given.
    pub fn new(waypoints: Vec<Point2>) -> Self {
        assert!(waypoints.len() >= 2, "a path needs at least two waypoints");
        let total_cost = polyline_length(&waypoints);
        Self { waypoints, total_cost }
    }

    pub fn waypoints(&self) -> &[Point2] {
        &self.waypoints
    }

    pub fn total_cost(&self) -> f64 {
        self.total_cost
    }

    pub fn edge_count(&self) -> usize {
        self.waypoints.len() - 1
    }

    pub fn average_cost(&self) -> f64 {
        self.total_cost / self.edge_count() as f64
    }

    pub fn edges(&self) -> impl Iterator<Item = Segment> + '_ {
        self.waypoints.windows(2).map(|w| Segment::new(w[0], w[1]))
    }
}

pub fn polyline_length(points: &[Point2]) -> f64 {
    points.windows(2).map(|w| euclidean_distance(w[0], w[1])).sum()
}

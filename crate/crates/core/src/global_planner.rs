//! Coarse global routing: obstacle rasterization onto an occupancy grid and
//! 8-connected A* over it. The resulting waypoints seed the headings of the
//! directed local planner.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::GlobalPlanError;
use crate::geometry::{euclidean_distance, Point2};
use crate::world::Scenario;

pub const DEFAULT_CELL_SIZE: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridMap {
    cols: usize,
    rows: usize,
    cell_size: f64,
    blocked: Vec<bool>,
}

impl GridMap {
    /// Row-major occupancy, `blocked[row * cols + col]`.
    pub fn from_blocked(cols: usize, rows: usize, cell_size: f64, blocked: Vec<bool>) -> Self {
        assert!(cols > 0 && rows > 0, "grid must be non-empty");
        assert_eq!(blocked.len(), cols * rows, "occupancy size mismatch");
        assert!(cell_size.is_finite() && cell_size > 0.0, "cell size must be positive");
        Self {
            cols,
            rows,
            cell_size,
            blocked,
        }
    }

    pub fn empty(cols: usize, rows: usize, cell_size: f64) -> Self {
        Self::from_blocked(cols, rows, cell_size, vec![false; cols * rows])
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn contains(&self, c: Cell) -> bool {
        c.row < self.rows && c.col < self.cols
    }

    #[inline]
    pub fn is_blocked(&self, c: Cell) -> bool {
        self.blocked[c.row * self.cols + c.col]
    }

    pub fn set_blocked(&mut self, c: Cell, blocked: bool) {
        self.blocked[c.row * self.cols + c.col] = blocked;
    }

    pub fn blocked_count(&self) -> usize {
        self.blocked.iter().filter(|b| **b).count()
    }

    pub fn center(&self, c: Cell) -> Point2 {
        Point2::new(
            (c.col as f64 + 0.5) * self.cell_size,
            (c.row as f64 + 0.5) * self.cell_size,
        )
    }

    /// Cell containing `p`, clamped onto the grid.
    pub fn cell_of(&self, p: Point2) -> Cell {
        let col = (p.x() / self.cell_size).floor().clamp(0.0, (self.cols - 1) as f64) as usize;
        let row = (p.y() / self.cell_size).floor().clamp(0.0, (self.rows - 1) as f64) as usize;
        Cell::new(row, col)
    }

    /// Unblocked 8-neighbours with their move kind. A diagonal is dropped
    /// only when both axial cells it squeezes between are blocked.
    fn neighbours(&self, c: Cell, out: &mut Vec<(Cell, Move)>) {
        out.clear();
        let (r, k) = (c.row as isize, c.col as isize);
        let open = |dr: isize, dc: isize| -> Option<Cell> {
            let (nr, nc) = (r + dr, k + dc);
            if nr < 0 || nc < 0 || nr >= self.rows as isize || nc >= self.cols as isize {
                return None;
            }
            let cell = Cell::new(nr as usize, nc as usize);
            (!self.is_blocked(cell)).then_some(cell)
        };
        for (dr, dc) in [(-1, 0), (1, 0), (0, -1), (0, 1)] {
            if let Some(n) = open(dr, dc) {
                out.push((n, Move::Axial));
            }
        }
        for (dr, dc) in [(-1, -1), (-1, 1), (1, -1), (1, 1)] {
            if let Some(n) = open(dr, dc) {
                if open(dr, 0).is_none() && open(0, dc).is_none() {
                    continue;
                }
                out.push((n, Move::Diagonal));
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Move {
    Axial,
    Diagonal,
}

/// Path cost as a count of axial and diagonal moves. Costs are always
/// evaluated from the counts, so equal move multisets give bit-identical
/// costs regardless of the order the moves were taken in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
struct MoveCount {
    axial: u32,
    diagonal: u32,
}

impl MoveCount {
    fn step(self, m: Move) -> Self {
        match m {
            Move::Axial => Self {
                axial: self.axial + 1,
                ..self
            },
            Move::Diagonal => Self {
                diagonal: self.diagonal + 1,
                ..self
            },
        }
    }

    fn cost(self, cell_size: f64) -> f64 {
        self.axial as f64 * cell_size + self.diagonal as f64 * (SQRT_2 * cell_size)
    }
}

/// Waypoints from A*, cell centers with the endpoints snapped to the
/// exact source and destination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlobalPath {
    pub waypoints: Vec<Point2>,
    pub cells: Vec<Cell>,
    pub grid_cost: f64,
}

impl GlobalPath {
    /// Fallback route used when the grid search fails.
    pub fn straight(src: Point2, dst: Point2) -> Self {
        Self {
            waypoints: vec![src, dst],
            cells: Vec::new(),
            grid_cost: euclidean_distance(src, dst),
        }
    }
}

/// Occupancy grid covering the scenario. A cell is blocked when its center
/// is outside the map or within `radius + inflation` of a disc center.
/// `inflation = None` inflates each disc by its own radius.
pub fn rasterize_with(s: &Scenario, cell_size: f64, inflation: Option<f64>) -> Result<GridMap, GlobalPlanError> {
    if !(cell_size.is_finite() && cell_size > 0.0) {
        return Err(GlobalPlanError::InvalidCellSize);
    }
    let cols = ((s.width() / cell_size).ceil() as usize).max(1);
    let rows = ((s.height() / cell_size).ceil() as usize).max(1);
    let mut grid = GridMap::empty(cols, rows, cell_size);
    for row in 0..rows {
        for col in 0..cols {
            let cell = Cell::new(row, col);
            let c = grid.center(cell);
            let blocked = !s.in_bounds(c)
                || s.obstacles().iter().any(|d| {
                    let pad = inflation.unwrap_or(d.radius());
                    euclidean_distance(c, d.center()) <= d.radius() + pad
                });
            grid.set_blocked(cell, blocked);
        }
    }
    if grid.is_blocked(grid.cell_of(s.source())) {
        return Err(GlobalPlanError::SourceBlocked);
    }
    if grid.is_blocked(grid.cell_of(s.destination())) {
        return Err(GlobalPlanError::DestinationBlocked);
    }
    Ok(grid)
}

pub fn rasterize(s: &Scenario, cell_size: f64) -> Result<GridMap, GlobalPlanError> {
    rasterize_with(s, cell_size, None)
}

/// One node popped from the A* open list.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expansion {
    pub cell: Cell,
    pub g: f64,
    pub h: f64,
}

#[derive(Debug, Clone, Copy)]
struct OpenEntry {
    f: f64,
    g: f64,
    cell: Cell,
}

impl PartialEq for OpenEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for OpenEntry {}

impl PartialOrd for OpenEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OpenEntry {
    // BinaryHeap is a max-heap: "greater" pops first. Lowest f wins, then
    // highest g, then the lexicographically smallest (row, col).
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .total_cmp(&self.f)
            .then(self.g.total_cmp(&other.g))
            .then(other.cell.cmp(&self.cell))
    }
}

fn check_endpoints(g: &GridMap, src: Cell, dst: Cell) -> Result<(), GlobalPlanError> {
    for c in [src, dst] {
        if !g.contains(c) {
            return Err(GlobalPlanError::OutOfGrid((c.row, c.col)));
        }
    }
    if g.is_blocked(src) {
        return Err(GlobalPlanError::SourceBlocked);
    }
    if g.is_blocked(dst) {
        return Err(GlobalPlanError::DestinationBlocked);
    }
    Ok(())
}

fn heuristic(g: &GridMap, a: Cell, b: Cell) -> f64 {
    let dr = a.row as f64 - b.row as f64;
    let dc = a.col as f64 - b.col as f64;
    dr.hypot(dc) * g.cell_size
}

/// Best-first search shared by A* (`use_heuristic`) and the uniform-cost
/// oracle. Returns the cell sequence, its cost and the expansion trace.
fn search(
    g: &GridMap,
    src: Cell,
    dst: Cell,
    use_heuristic: bool,
) -> Result<(Vec<Cell>, f64, Vec<Expansion>), GlobalPlanError> {
    check_endpoints(g, src, dst)?;
    let n = g.cols * g.rows;
    let idx = |c: Cell| c.row * g.cols + c.col;
    let h = |c: Cell| if use_heuristic { heuristic(g, c, dst) } else { 0.0 };

    let mut best: Vec<Option<MoveCount>> = vec![None; n];
    let mut parent: Vec<Option<Cell>> = vec![None; n];
    let mut closed = vec![false; n];
    let mut open = BinaryHeap::new();
    let mut trace = Vec::new();
    let mut nbrs = Vec::with_capacity(8);

    best[idx(src)] = Some(MoveCount::default());
    open.push(OpenEntry {
        f: h(src),
        g: 0.0,
        cell: src,
    });
    while let Some(entry) = open.pop() {
        let i = idx(entry.cell);
        let counts = best[i].expect("queued cells have a cost");
        let g_here = counts.cost(g.cell_size);
        if closed[i] || entry.g > g_here {
            continue;
        }
        closed[i] = true;
        trace.push(Expansion {
            cell: entry.cell,
            g: g_here,
            h: h(entry.cell),
        });
        if entry.cell == dst {
            let mut cells = vec![dst];
            let mut cur = dst;
            while let Some(p) = parent[idx(cur)] {
                cells.push(p);
                cur = p;
            }
            cells.reverse();
            return Ok((cells, g_here, trace));
        }
        g.neighbours(entry.cell, &mut nbrs);
        for &(nb, mv) in &nbrs {
            let j = idx(nb);
            let cand = counts.step(mv);
            let cand_cost = cand.cost(g.cell_size);
            let improves = best[j].is_none_or(|old| cand_cost < old.cost(g.cell_size));
            if improves {
                best[j] = Some(cand);
                parent[j] = Some(entry.cell);
                // Reopen if a closed cell is improved; keeps the search exact
                // even if rounding makes the heuristic marginally inconsistent.
                closed[j] = false;
                open.push(OpenEntry {
                    f: cand_cost + h(nb),
                    g: cand_cost,
                    cell: nb,
                });
            }
        }
    }
    Err(GlobalPlanError::NoGlobalPath)
}

fn to_global_path(g: &GridMap, cells: Vec<Cell>, cost: f64) -> GlobalPath {
    let waypoints = cells.iter().map(|&c| g.center(c)).collect();
    GlobalPath {
        waypoints,
        cells,
        grid_cost: cost,
    }
}

/// Minimum-cost 8-connected route; axial moves cost one cell, diagonals √2.
pub fn astar(g: &GridMap, src: Cell, dst: Cell) -> Result<GlobalPath, GlobalPlanError> {
    let (cells, cost, _) = search(g, src, dst, true)?;
    Ok(to_global_path(g, cells, cost))
}

/// [`astar`] plus the sequence of expanded nodes.
pub fn astar_traced(g: &GridMap, src: Cell, dst: Cell) -> Result<(GlobalPath, Vec<Expansion>), GlobalPlanError> {
    let (cells, cost, trace) = search(g, src, dst, true)?;
    Ok((to_global_path(g, cells, cost), trace))
}

/// Uniform-cost search with no heuristic; the reference for [`astar`].
pub fn dijkstra_oracle(g: &GridMap, src: Cell, dst: Cell) -> Result<f64, GlobalPlanError> {
    search(g, src, dst, false).map(|(_, cost, _)| cost)
}

/// Rasterizes the scenario and routes source to destination.
pub fn plan_global_path(s: &Scenario, cell_size: f64) -> Result<GlobalPath, GlobalPlanError> {
    let grid = rasterize(s, cell_size)?;
    let src = grid.cell_of(s.source());
    let dst = grid.cell_of(s.destination());
    let mut path = astar(&grid, src, dst)?;
    if src == dst {
        path.waypoints = vec![s.source(), s.destination()];
    } else {
        let last = path.waypoints.len() - 1;
        path.waypoints[0] = s.source();
        path.waypoints[last] = s.destination();
    }
    Ok(path)
}

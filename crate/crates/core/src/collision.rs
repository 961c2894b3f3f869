//! Edge and point validity against a scenario.
//!
//! [`edge_is_free`] is the direct definition: a scan over every obstacle.
//! [`CollisionChecker`] answers the same questions through a uniform bucket
//! grid and is what the planners use in their inner loops.

use crate::geometry::{segment_hits_disc, Disc, Point2, Segment};
use crate::world::Scenario;

/// True iff both endpoints are inside the map and the segment touches no
/// obstacle.
pub fn edge_is_free(a: Point2, b: Point2, s: &Scenario) -> bool {
    if !s.in_bounds(a) || !s.in_bounds(b) {
        return false;
    }
    let seg = Segment::new(a, b);
    !s.obstacles().iter().any(|d| segment_hits_disc(&seg, d))
}

/// Bucketed obstacle lookup over a scenario.
#[derive(Debug, Clone)]
pub struct CollisionChecker {
    width: f64,
    height: f64,
    obstacles: Vec<Disc>,
    bucket: f64,
    cols: usize,
    rows: usize,
    cells: Vec<Vec<u32>>,
}

impl CollisionChecker {
    pub fn new(s: &Scenario) -> Self {
        let obstacles = s.obstacles().to_vec();
        let max_r = obstacles.iter().map(Disc::radius).fold(0.0, f64::max);
        // Buckets a few radii wide keep each disc in at most a handful of cells.
        let bucket = (4.0 * max_r).max(s.extent() / 256.0).max(1e-6);
        let cols = ((s.width() / bucket).ceil() as usize).max(1);
        let rows = ((s.height() / bucket).ceil() as usize).max(1);
        let mut cells = vec![Vec::new(); cols * rows];
        for (i, d) in obstacles.iter().enumerate() {
            let c = d.center();
            let (c0, r0) = bucket_of(c.x() - d.radius(), c.y() - d.radius(), bucket, cols, rows);
            let (c1, r1) = bucket_of(c.x() + d.radius(), c.y() + d.radius(), bucket, cols, rows);
            for row in r0..=r1 {
                for col in c0..=c1 {
                    cells[row * cols + col].push(i as u32);
                }
            }
        }
        Self {
            width: s.width(),
            height: s.height(),
            obstacles,
            bucket,
            cols,
            rows,
            cells,
        }
    }

    #[inline]
    pub fn in_bounds(&self, p: Point2) -> bool {
        (0.0..=self.width).contains(&p.x()) && (0.0..=self.height).contains(&p.y())
    }

    pub fn is_free(&self, p: Point2) -> bool {
        if !self.in_bounds(p) {
            return false;
        }
        let (col, row) = bucket_of(p.x(), p.y(), self.bucket, self.cols, self.rows);
        !self.cells[row * self.cols + col]
            .iter()
            .any(|&i| self.obstacles[i as usize].contains(p))
    }

    pub fn edge_is_free(&self, a: Point2, b: Point2) -> bool {
        if !self.in_bounds(a) || !self.in_bounds(b) {
            return false;
        }
        let seg = Segment::new(a, b);
        let (c0, r0) = bucket_of(a.x().min(b.x()), a.y().min(b.y()), self.bucket, self.cols, self.rows);
        let (c1, r1) = bucket_of(a.x().max(b.x()), a.y().max(b.y()), self.bucket, self.cols, self.rows);
        let span = (c1 - c0 + 1) * (r1 - r0 + 1);
        if span > self.obstacles.len() {
            return !self.obstacles.iter().any(|d| segment_hits_disc(&seg, d));
        }
        for row in r0..=r1 {
            for col in c0..=c1 {
                for &i in &self.cells[row * self.cols + col] {
                    if segment_hits_disc(&seg, &self.obstacles[i as usize]) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

#[inline]
fn bucket_of(x: f64, y: f64, bucket: f64, cols: usize, rows: usize) -> (usize, usize) {
    let col = (x / bucket).floor().clamp(0.0, (cols - 1) as f64) as usize;
    let row = (y / bucket).floor().clamp(0.0, (rows - 1) as f64) as usize;
    (col, row)
}

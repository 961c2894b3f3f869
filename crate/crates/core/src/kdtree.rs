//! Incrementally built 2-d tree over vertex positions.
//!
//! Distances are computed with [`euclidean_distance`] so results agree
//! bit-for-bit with a linear scan, including the lowest-id tie-break.

use crate::geometry::{euclidean_distance, Point2};

const NIL: u32 = u32::MAX;

#[derive(Debug, Clone)]
struct KdNode {
    point: Point2,
    id: u32,
    left: u32,
    right: u32,
}

#[derive(Debug, Clone, Default)]
pub struct KdIndex {
    nodes: Vec<KdNode>,
}

#[inline]
fn coord(p: &Point2, axis: usize) -> f64 {
    if axis == 0 {
        p.x()
    } else {
        p.y()
    }
}

/// Widens plane-distance pruning so that rounding in the distance formula
/// can never hide a point that a linear scan would report.
#[inline]
fn slack(r: f64) -> f64 {
    1e-9 * (1.0 + r)
}

impl KdIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn insert(&mut self, point: Point2, id: usize) {
        let new = self.nodes.len() as u32;
        self.nodes.push(KdNode {
            point,
            id: id as u32,
            left: NIL,
            right: NIL,
        });
        if new == 0 {
            return;
        }
        let mut cur = 0u32;
        let mut axis = 0;
        loop {
            let node = &self.nodes[cur as usize];
            let go_left = coord(&point, axis) < coord(&node.point, axis);
            let next = if go_left { node.left } else { node.right };
            if next == NIL {
                let node = &mut self.nodes[cur as usize];
                if go_left {
                    node.left = new;
                } else {
                    node.right = new;
                }
                return;
            }
            cur = next;
            axis ^= 1;
        }
    }

    /// Closest stored point; ties resolve to the lowest id.
    pub fn nearest(&self, q: Point2) -> Option<(usize, f64)> {
        if self.nodes.is_empty() {
            return None;
        }
        let mut best = (f64::INFINITY, u32::MAX);
        let mut stack = vec![(0u32, 0usize)];
        while let Some((ni, axis)) = stack.pop() {
            let node = &self.nodes[ni as usize];
            let d = euclidean_distance(q, node.point);
            if d < best.0 || (d == best.0 && node.id < best.1) {
                best = (d, node.id);
            }
            let diff = coord(&q, axis) - coord(&node.point, axis);
            let (near, far) = if diff < 0.0 {
                (node.left, node.right)
            } else {
                (node.right, node.left)
            };
            // Push far first so the near side is explored first.
            if far != NIL && diff.abs() <= best.0 + slack(best.0) {
                stack.push((far, axis ^ 1));
            }
            if near != NIL {
                stack.push((near, axis ^ 1));
            }
        }
        Some((best.1 as usize, best.0))
    }

    /// Ids of all points within the closed ball, ascending.
    pub fn within(&self, q: Point2, radius: f64) -> Vec<usize> {
        let mut out = Vec::new();
        if self.nodes.is_empty() {
            return out;
        }
        let reach = radius + slack(radius);
        let mut stack = vec![(0u32, 0usize)];
        while let Some((ni, axis)) = stack.pop() {
            let node = &self.nodes[ni as usize];
            if euclidean_distance(q, node.point) <= radius {
                out.push(node.id as usize);
            }
            let diff = coord(&q, axis) - coord(&node.point, axis);
            if node.left != NIL && diff <= reach {
                stack.push((node.left, axis ^ 1));
            }
            if node.right != NIL && -diff <= reach {
                stack.push((node.right, axis ^ 1));
            }
        }
        out.sort_unstable();
        out
    }

    /// Every stored (id, point) pair, ordered by id.
    pub fn entries(&self) -> Vec<(usize, Point2)> {
        let mut v: Vec<_> = self.nodes.iter().map(|n| (n.id as usize, n.point)).collect();
        v.sort_by_key(|e| e.0);
        v
    }
}

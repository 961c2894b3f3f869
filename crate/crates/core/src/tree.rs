//! Search tree storage: vertices with parent links and cost-from-root,
//! child lists for cost propagation, and a k-d index for proximity queries.

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{euclidean_distance, Point2};
use crate::kdtree::KdIndex;

/// Relative tolerance used when checking stored costs against edge sums.
pub const COST_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Vertex {
    pub position: Point2,
    pub parent: Option<usize>,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TreeViolation {
    #[error("tree has no root")]
    Empty,
    #[error("root has a parent or non-zero cost")]
    BadRoot,
    #[error("vertex {0} has no parent")]
    Orphan(usize),
    #[error("vertex {0} has out-of-range parent")]
    DanglingParent(usize),
    #[error("vertex {vertex}: cost {stored} but parent cost + edge = {expected}")]
    CostMismatch { vertex: usize, stored: f64, expected: f64 },
    #[error("vertex {0} does not reach the root")]
    Cycle(usize),
    #[error("child lists disagree with parent links at vertex {0}")]
    ChildLinks(usize),
    #[error("spatial index out of sync with vertex list")]
    IndexMismatch,
}

#[derive(Debug, Clone)]
pub struct Tree {
    vertices: Vec<Vertex>,
    children: Vec<Vec<usize>>,
    index: KdIndex,
}

/// Structural equality: positions, parents and costs.
impl PartialEq for Tree {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}

impl Tree {
    /// Tree holding only the root at `root`, with cost 0.
    pub fn new(root: Point2) -> Self {
        let mut index = KdIndex::new();
        index.insert(root, 0);
        Self {
            vertices: vec![Vertex {
                position: root,
                parent: None,
                cost: 0.0,
            }],
            children: vec![Vec::new()],
            index,
        }
    }

    pub const ROOT: usize = 0;

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &Vertex {
        &self.vertices[i]
    }

    pub fn position(&self, i: usize) -> Point2 {
        self.vertices[i].position
    }

    pub fn cost(&self, i: usize) -> f64 {
        self.vertices[i].cost
    }

    pub fn parent(&self, i: usize) -> Option<usize> {
        self.vertices[i].parent
    }

    pub fn children(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    /// Vertex closest to `q`; ties go to the lowest index.
    pub fn nearest(&self, q: Point2) -> usize {
        self.index.nearest(q).expect("tree always has a root").0
    }

    /// All vertices in the closed ball around `q`, ascending by index.
    pub fn near(&self, q: Point2, radius: f64) -> Vec<usize> {
        if radius < 0.0 {
            return Vec::new();
        }
        self.index.within(q, radius)
    }

    /// Appends `pos` under `parent`. The caller is responsible for having
    /// checked the connecting edge.
    pub fn insert(&mut self, parent: usize, pos: Point2) -> usize {
        assert!(parent < self.vertices.len(), "parent {parent} does not exist");
        let id = self.vertices.len();
        let cost = self.vertices[parent].cost + euclidean_distance(self.vertices[parent].position, pos);
        self.vertices.push(Vertex {
            position: pos,
            parent: Some(parent),
            cost,
        });
        self.children.push(Vec::new());
        self.children[parent].push(id);
        self.index.insert(pos, id);
        id
    }

    /// Moves `v` under `new_parent` and refreshes the costs of its whole
    /// subtree. Returns the change in `v`'s cost.
    pub fn reparent(&mut self, v: usize, new_parent: usize) -> f64 {
        assert!(v != Self::ROOT, "the root cannot be reparented");
        assert!(v != new_parent, "a vertex cannot parent itself");
        let old_parent = self.vertices[v].parent.expect("non-root vertices have parents");
        let siblings = &mut self.children[old_parent];
        let pos = siblings.iter().position(|&c| c == v).expect("child link present");
        siblings.remove(pos);
        self.children[new_parent].push(v);
        self.vertices[v].parent = Some(new_parent);
        let before = self.vertices[v].cost;
        self.refresh_subtree_costs(v);
        self.vertices[v].cost - before
    }

    fn refresh_subtree_costs(&mut self, from: usize) {
        let mut stack = vec![from];
        while let Some(u) = stack.pop() {
            let p = self.vertices[u].parent.expect("subtree vertices have parents");
            self.vertices[u].cost =
                self.vertices[p].cost + euclidean_distance(self.vertices[p].position, self.vertices[u].position);
            stack.extend_from_slice(&self.children[u]);
        }
    }

    /// Root-to-`v` positions by walking parent links.
    pub fn path_to(&self, v: usize) -> Vec<Point2> {
        let mut out = vec![self.vertices[v].position];
        let mut cur = v;
        while let Some(p) = self.vertices[cur].parent {
            out.push(self.vertices[p].position);
            cur = p;
        }
        out.reverse();
        out
    }

    /// True if `ancestor` lies on the parent chain of `v` (or equals it).
    pub fn is_ancestor(&self, ancestor: usize, v: usize) -> bool {
        let mut cur = Some(v);
        while let Some(c) = cur {
            if c == ancestor {
                return true;
            }
            cur = self.vertices[c].parent;
        }
        false
    }

    /// Parent link and cost consistency of a single vertex.
    pub fn check_vertex(&self, v: usize) -> Result<(), TreeViolation> {
        let vert = &self.vertices[v];
        match vert.parent {
            None if v == Self::ROOT => {
                if vert.cost != 0.0 {
                    return Err(TreeViolation::BadRoot);
                }
            }
            None => return Err(TreeViolation::Orphan(v)),
            Some(p) if p >= self.vertices.len() || v == Self::ROOT => {
                return Err(if v == Self::ROOT {
                    TreeViolation::BadRoot
                } else {
                    TreeViolation::DanglingParent(v)
                })
            }
            Some(p) => {
                let parent = &self.vertices[p];
                let expected = parent.cost + euclidean_distance(parent.position, vert.position);
                if (vert.cost - expected).abs() > COST_TOLERANCE * expected.abs().max(1.0) {
                    return Err(TreeViolation::CostMismatch {
                        vertex: v,
                        stored: vert.cost,
                        expected,
                    });
                }
            }
        }
        Ok(())
    }

    /// Full structural audit: single root, cost consistency, acyclicity,
    /// child/parent agreement and spatial-index agreement.
    pub fn check_invariants(&self) -> Result<(), TreeViolation> {
        let n = self.vertices.len();
        if n == 0 {
            return Err(TreeViolation::Empty);
        }
        for v in 0..n {
            self.check_vertex(v)?;
        }
        // Reachability: memoized walk towards the root.
        let mut reaches = vec![false; n];
        reaches[Self::ROOT] = true;
        let mut chain = Vec::new();
        for v in 0..n {
            chain.clear();
            let mut cur = v;
            while !reaches[cur] {
                chain.push(cur);
                if chain.len() > n {
                    return Err(TreeViolation::Cycle(v));
                }
                cur = self.vertices[cur].parent.ok_or(TreeViolation::Orphan(cur))?;
            }
            for &c in &chain {
                reaches[c] = true;
            }
        }
        let mut child_count = 0;
        for (p, kids) in self.children.iter().enumerate() {
            for &c in kids {
                if self.vertices.get(c).and_then(|v| v.parent) != Some(p) {
                    return Err(TreeViolation::ChildLinks(c));
                }
            }
            child_count += kids.len();
        }
        if child_count != n - 1 {
            return Err(TreeViolation::ChildLinks(Self::ROOT));
        }
        let entries = self.index.entries();
        if entries.len() != n || entries.iter().any(|&(id, p)| self.vertices[id].position != p) {
            return Err(TreeViolation::IndexMismatch);
        }
        Ok(())
    }
}

/// Fresh tree rooted at the source.
pub fn initialize_tree(src: Point2) -> Tree {
    Tree::new(src)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    #[test]
    fn root_only() {
        let t = initialize_tree(p(50.0, 50.0));
        assert_eq!(t.len(), 1);
        assert_eq!(t.cost(0), 0.0);
        assert_eq!(t.parent(0), None);
        assert_eq!(t, initialize_tree(p(50.0, 50.0)));
        t.check_invariants().unwrap();
        assert_eq!(t.nearest(p(1000.0, -3.0)), 0);
    }

    #[test]
    fn insert_costs() {
        let mut t = Tree::new(p(0.0, 0.0));
        let a = t.insert(0, p(3.0, 4.0));
        assert_eq!(t.cost(a), 5.0);
        let mut t = Tree::new(p(0.0, 0.0));
        let mut last = 0;
        for i in 1..=3 {
            last = t.insert(last, p(i as f64, 0.0));
        }
        assert_eq!(t.cost(last), 3.0);
        t.check_invariants().unwrap();
    }

    #[test]
    fn nearest_and_near_basics() {
        let mut t = Tree::new(p(0.0, 0.0));
        t.insert(0, p(10.0, 0.0));
        assert_eq!(t.nearest(p(4.0, 0.0)), 0);
        // Equidistant: lowest index wins.
        assert_eq!(t.nearest(p(5.0, 0.0)), 0);
        assert!(t.near(p(3.0, 3.0), 0.0).is_empty());
        assert_eq!(t.near(p(0.0, 0.0), 0.0), vec![0]);
        assert_eq!(t.near(p(3.0, 3.0), 2000.0), vec![0, 1]);
    }

    #[test]
    fn reparent_propagates_costs() {
        let mut t = Tree::new(p(0.0, 0.0));
        let a = t.insert(0, p(0.0, 10.0));
        let b = t.insert(a, p(10.0, 10.0));
        let c = t.insert(b, p(20.0, 10.0));
        assert_eq!(t.cost(c), 30.0);
        let delta = t.reparent(b, 0);
        let direct = 200f64.sqrt();
        assert_eq!(delta, direct - 20.0);
        assert_eq!(t.cost(b), direct);
        assert_eq!(t.cost(c), direct + 10.0);
        t.check_invariants().unwrap();
        assert!(t.is_ancestor(0, c));
        assert!(t.children(a).is_empty());
        assert!(!t.is_ancestor(a, c));
    }

    #[test]
    fn checker_detects_corruption() {
        let mut t = Tree::new(p(0.0, 0.0));
        let a = t.insert(0, p(1.0, 0.0));
        let b = t.insert(a, p(2.0, 0.0));
        let mut bad = t.clone();
        bad.vertices[b].cost = 7.0;
        assert!(matches!(
            bad.check_invariants(),
            Err(TreeViolation::CostMismatch { .. })
        ));
        let mut bad = t.clone();
        bad.vertices[a].parent = Some(b);
        assert!(bad.check_invariants().is_err());
        let mut bad = t.clone();
        bad.vertices[0].cost = 1.0;
        assert_eq!(bad.check_invariants(), Err(TreeViolation::BadRoot));
        let mut bad = t.clone();
        bad.index = KdIndex::new();
        assert_eq!(bad.check_invariants(), Err(TreeViolation::IndexMismatch));
        t.check_invariants().unwrap();
    }
}

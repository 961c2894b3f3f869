use std::f64::consts::PI;

use proptest::prelude::*;
use sectorplan::{
    angle_of, angular_deviation, euclidean_distance, point_in_sector, segment_hits_disc, Disc, Point2, Sector, Segment,
    Tree,
};

/// Dense point sampling along the segment at 1e-4 of its length.
fn sampled_hit(s: &Segment, d: &Disc) -> bool {
    let steps = 10_000;
    (0..=steps).any(|i| {
        let t = i as f64 / steps as f64;
        let p = Point2::new(s.a.x() + t * (s.b.x() - s.a.x()), s.a.y() + t * (s.b.y() - s.a.y()));
        euclidean_distance(p, d.center()) <= d.radius()
    })
}

fn coord() -> impl Strategy<Value = f64> {
    -100.0..100.0f64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn segment_disc_matches_dense_sampling(
        ax in coord(), ay in coord(), bx in coord(), by in coord(),
        cx in coord(), cy in coord(), r in 0.5..40.0f64,
    ) {
        let seg = Segment::new(Point2::new(ax, ay), Point2::new(bx, by));
        let disc = Disc::new(Point2::new(cx, cy), r).unwrap();
        let clearance = seg.distance_to_point(disc.center());
        // Sampling resolution cannot decide near-tangent pairs.
        prop_assume!((clearance - r).abs() > 1e-6 * (1.0 + seg.length()) + seg.length() * 1e-4);
        prop_assert_eq!(segment_hits_disc(&seg, &disc), sampled_hit(&seg, &disc));
    }

    #[test]
    fn sector_membership_matches_angle_oracle(
        px in coord(), py in coord(), heading in -PI..PI, half in 0.0..3.1f64, len in 1.0..150.0f64,
    ) {
        let apex = Point2::new(0.0, 0.0);
        let p = Point2::new(px, py);
        let sector = Sector::new(apex, heading, half, len).unwrap();
        let dist = euclidean_distance(apex, p);
        let dev = angular_deviation(angle_of(apex, p).unwrap(), heading).abs();
        prop_assume!((dev - half).abs() > 1e-6 && (dist - len).abs() > 1e-6);
        prop_assert_eq!(point_in_sector(p, &sector), dist <= len && dev <= half);
    }

    #[test]
    fn tree_queries_match_linear_scan(
        pts in prop::collection::vec((0.0..50.0f64, 0.0..50.0f64), 1..200),
        parents in prop::collection::vec(any::<prop::sample::Index>(), 200),
        qx in 0.0..50.0f64, qy in 0.0..50.0f64, radius in 0.0..20.0f64,
    ) {
        let mut tree = Tree::new(Point2::new(25.0, 25.0));
        for (i, &(x, y)) in pts.iter().enumerate() {
            let parent = parents[i].index(tree.len());
            tree.insert(parent, Point2::new(x, y));
        }
        tree.check_invariants().unwrap();
        let q = Point2::new(qx, qy);
        let mut best = 0;
        for v in 0..tree.len() {
            if euclidean_distance(q, tree.position(v)) < euclidean_distance(q, tree.position(best)) {
                best = v;
            }
        }
        prop_assert_eq!(tree.nearest(q), best);
        let expect: Vec<usize> = (0..tree.len()).filter(|&v| euclidean_distance(q, tree.position(v)) <= radius).collect();
        prop_assert_eq!(tree.near(q, radius), expect);
    }
}

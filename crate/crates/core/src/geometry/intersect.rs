use super::Vec2;

const REL_EPS: f64 = 1e-12;

/// Sign of the turn `a -> b -> c`, with near-zero areas snapped to 0.
fn orientation(a: Vec2, b: Vec2, c: Vec2) -> i8 {
    let ab = b - a;
    let ac = c - a;
    let area = ab.cross(ac);
    let tol = REL_EPS * ab.norm() * ac.norm();
    if area > tol {
        1
    } else if area < -tol {
        -1
    } else {
        0
    }
}

/// True when the open segments `(a0, a1)` and `(b0, b1)` share a point.
///
/// Shared endpoints and T-junctions (an endpoint touching the other interior)
/// do not count; proper crossings and collinear overlaps of positive length do.
pub fn segments_intersect(a0: Vec2, a1: Vec2, b0: Vec2, b1: Vec2) -> bool {
    if a0.x.max(a1.x) < b0.x.min(b1.x)
        || b0.x.max(b1.x) < a0.x.min(a1.x)
        || a0.y.max(a1.y) < b0.y.min(b1.y)
        || b0.y.max(b1.y) < a0.y.min(a1.y)
    {
        return false;
    }
    let d1 = orientation(b0, b1, a0);
    let d2 = orientation(b0, b1, a1);
    let d3 = orientation(a0, a1, b0);
    let d4 = orientation(a0, a1, b1);

    if d1 * d2 < 0 && d3 * d4 < 0 {
        return true;
    }
    if d1 == 0 && d2 == 0 && d3 == 0 && d4 == 0 {
        let dir = a1 - a0;
        let len2 = dir.dot(dir);
        if len2 == 0.0 {
            return false;
        }
        let tb0 = (b0 - a0).dot(dir) / len2;
        let tb1 = (b1 - a0).dot(dir) / len2;
        let lo = tb0.min(tb1).max(0.0);
        let hi = tb0.max(tb1).min(1.0);
        return hi - lo > REL_EPS;
    }
    false
}

/// All intersecting index pairs `(i, j)` with `i < j`, sorted.
pub(crate) fn intersecting_pairs(segments: &[(Vec2, Vec2)]) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..segments.len()).collect();
    let min_x = |i: usize| segments[i].0.x.min(segments[i].1.x);
    let max_x = |i: usize| segments[i].0.x.max(segments[i].1.x);
    order.sort_by(|&a, &b| min_x(a).total_cmp(&min_x(b)).then(a.cmp(&b)));

    let mut pairs = Vec::new();
    for (k, &i) in order.iter().enumerate() {
        let reach = max_x(i);
        for &j in &order[k + 1..] {
            if min_x(j) > reach {
                break;
            }
            let (a0, a1) = segments[i];
            let (b0, b1) = segments[j];
            if segments_intersect(a0, a1, b0, b1) {
                pairs.push((i.min(j), i.max(j)));
            }
        }
    }
    pairs.sort_unstable();
    pairs
}

/// Intersecting edge pairs of the closed polyline through `points`.
pub fn polyline_self_intersections(points: &[Vec2]) -> Vec<(usize, usize)> {
    if points.len() < 3 {
        return Vec::new();
    }
    let edges: Vec<(Vec2, Vec2)> = (0..points.len())
        .map(|i| (points[i], points[(i + 1) % points.len()]))
        .collect();
    intersecting_pairs(&edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(x: f64, y: f64) -> Vec2 {
        Vec2::new(x, y)
    }

    #[test]
    fn crossing_touching_and_overlap() {
        assert!(segments_intersect(
            v(0., 0.),
            v(2., 2.),
            v(0., 2.),
            v(2., 0.)
        ));
        // shared endpoint
        assert!(!segments_intersect(
            v(0., 0.),
            v(1., 0.),
            v(1., 0.),
            v(2., 1.)
        ));
        // T-junction
        assert!(!segments_intersect(
            v(0., 0.),
            v(2., 0.),
            v(1., 0.),
            v(1., 1.)
        ));
        // collinear, disjoint
        assert!(!segments_intersect(
            v(0., 0.),
            v(1., 0.),
            v(2., 0.),
            v(3., 0.)
        ));
        // collinear, end-to-end
        assert!(!segments_intersect(
            v(0., 0.),
            v(1., 0.),
            v(1., 0.),
            v(3., 0.)
        ));
        // collinear overlap
        assert!(segments_intersect(
            v(0., 0.),
            v(2., 0.),
            v(1., 0.),
            v(3., 0.)
        ));
        // parallel
        assert!(!segments_intersect(
            v(0., 0.),
            v(2., 0.),
            v(0., 1.),
            v(2., 1.)
        ));
    }

    #[test]
    fn square_and_bowtie() {
        let square = [v(0., 0.), v(1., 0.), v(1., 1.), v(0., 1.)];
        assert!(polyline_self_intersections(&square).is_empty());
        let bowtie = [v(0., 0.), v(1., 1.), v(1., 0.), v(0., 1.)];
        assert_eq!(polyline_self_intersections(&bowtie), vec![(0, 2)]);
    }

    fn brute(segs: &[(Vec2, Vec2)]) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..segs.len() {
            for j in i + 1..segs.len() {
                if segments_intersect(segs[i].0, segs[i].1, segs[j].0, segs[j].1) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    proptest! {
        #[test]
        fn sweep_matches_all_pairs(raw in prop::collection::vec(
            ((-10i32..10, -10i32..10), (-10i32..10, -10i32..10)), 0..30)) {
            let segs: Vec<_> = raw
                .iter()
                .map(|&((a, b), (c, d))| (v(a as f64, b as f64), v(c as f64, d as f64)))
                .collect();
            prop_assert_eq!(intersecting_pairs(&segs), brute(&segs));
        }

        #[test]
        fn intersection_is_symmetric(a in (-5.0..5.0f64, -5.0..5.0f64), b in (-5.0..5.0f64, -5.0..5.0f64),
                                     c in (-5.0..5.0f64, -5.0..5.0f64), d in (-5.0..5.0f64, -5.0..5.0f64)) {
            let (a, b, c, d) = (v(a.0, a.1), v(b.0, b.1), v(c.0, c.1), v(d.0, d.1));
            prop_assert_eq!(segments_intersect(a, b, c, d), segments_intersect(c, d, a, b));
            prop_assert_eq!(segments_intersect(a, b, c, d), segments_intersect(b, a, d, c));
        }
    }
}

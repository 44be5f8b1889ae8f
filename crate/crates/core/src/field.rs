//! The sign field: signed Euclidean distance to a closed curve.
//!
//! Values are negative strictly inside, positive strictly outside and exactly
//! zero within `1e-9 × diameter` of the curve.

use crate::curve::{bounds_of, ClosedCurve};
use crate::geometry::{segment_distance, wrap01, Point2};

/// Relative on-curve tolerance (multiplied by the curve diameter).
pub const ON_CURVE_RELATIVE_TOLERANCE: f64 = 1e-9;

/// Spatial index over the segments of a closed polyline.
///
/// Nearest-segment queries descend a bounding-box tree built over runs of
/// consecutive segments; inside/outside queries cast a ray through a single
/// horizontal strip of a bucket grid.
#[derive(Clone, Debug)]
pub struct SegmentIndex {
    segments: Vec<(Point2, Point2)>,
    nodes: Vec<BoxNode>,
    origin_y: f64,
    strip: f64,
    row_start: Vec<u32>,
    row_items: Vec<u32>,
}

#[derive(Clone, Copy, Debug)]
struct BoxNode {
    lo: Point2,
    hi: Point2,
    /// Segment range for leaves, child node indices otherwise.
    first: u32,
    second: u32,
    leaf: bool,
}

const LEAF_SIZE: usize = 8;

/// Nearest point on the polyline.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Nearest {
    pub distance: f64,
    pub segment: usize,
    /// Position along the segment in `[0, 1]`.
    pub t: f64,
}

#[inline]
fn box_distance_sq(p: Point2, lo: Point2, hi: Point2) -> f64 {
    let dx = (lo.x - p.x).max(0.0).max(p.x - hi.x);
    let dy = (lo.y - p.y).max(0.0).max(p.y - hi.y);
    dx * dx + dy * dy
}

impl SegmentIndex {
    pub fn new(points: &[Point2]) -> Self {
        let n = points.len();
        let segments: Vec<_> = (0..n).map(|i| (points[i], points[(i + 1) % n])).collect();
        let mut nodes = Vec::with_capacity(2 * n / LEAF_SIZE + 2);
        if n > 0 {
            build_node(&segments, 0, n, &mut nodes);
        }

        let (lo, hi) = bounds_of(points);
        let rows_wanted = (2.0 * (n as f64).sqrt()).ceil().max(1.0);
        let strip = ((hi.y - lo.y) / rows_wanted).max(f64::MIN_POSITIVE);
        let ny = (((hi.y - lo.y) / strip).floor() as usize + 1).max(1);
        let row_of = |y: f64| (((y - lo.y) / strip).floor().max(0.0) as usize).min(ny - 1);
        let mut rows: Vec<Vec<u32>> = vec![Vec::new(); ny];
        for (k, (a, b)) in segments.iter().enumerate() {
            for row in rows
                .iter_mut()
                .take(row_of(a.y.max(b.y)) + 1)
                .skip(row_of(a.y.min(b.y)))
            {
                row.push(k as u32);
            }
        }
        let (row_start, row_items) = flatten(rows);
        Self {
            segments,
            nodes,
            origin_y: lo.y,
            strip,
            row_start,
            row_items,
        }
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    fn row(&self, iy: usize) -> &[u32] {
        &self.row_items[self.row_start[iy] as usize..self.row_start[iy + 1] as usize]
    }

    /// Closest point of the polyline to `p`.
    pub fn nearest(&self, p: Point2) -> Nearest {
        let mut best = Nearest {
            distance: f64::INFINITY,
            segment: 0,
            t: 0.0,
        };
        if self.nodes.is_empty() {
            return best;
        }
        let mut best_sq = f64::INFINITY;
        let mut stack: Vec<u32> = Vec::with_capacity(32);
        stack.push(0);
        while let Some(k) = stack.pop() {
            let node = self.nodes[k as usize];
            if box_distance_sq(p, node.lo, node.hi) > best_sq {
                continue;
            }
            if node.leaf {
                for s in node.first as usize..node.second as usize {
                    let (a, b) = self.segments[s];
                    let (d, t) = segment_distance(p, a, b);
                    if d < best.distance || (d == best.distance && s < best.segment) {
                        best = Nearest {
                            distance: d,
                            segment: s,
                            t,
                        };
                        best_sq = d * d;
                    }
                }
            } else {
                let (l, r) = (self.nodes[node.first as usize], self.nodes[node.second as usize]);
                let dl = box_distance_sq(p, l.lo, l.hi);
                let dr = box_distance_sq(p, r.lo, r.hi);
                // visit the nearer child first
                if dl <= dr {
                    stack.push(node.second);
                    stack.push(node.first);
                } else {
                    stack.push(node.first);
                    stack.push(node.second);
                }
            }
        }
        best
    }

    /// Even-odd test with a ray towards `+x`.
    pub fn contains(&self, p: Point2) -> bool {
        let row = ((p.y - self.origin_y) / self.strip).floor();
        if !(row >= 0.0) || row >= (self.row_start.len() - 1) as f64 {
            return false;
        }
        let mut inside = false;
        for &k in self.row(row as usize) {
            let (a, b) = self.segments[k as usize];
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if x > p.x {
                    inside = !inside;
                }
            }
        }
        inside
    }
}

fn build_node(segments: &[(Point2, Point2)], lo: usize, hi: usize, nodes: &mut Vec<BoxNode>) -> u32 {
    let idx = nodes.len();
    let pts = segments[lo..hi].iter().flat_map(|&(a, b)| [a, b]);
    let mut bl = Point2::new(f64::INFINITY, f64::INFINITY);
    let mut bh = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for q in pts {
        bl = Point2::new(bl.x.min(q.x), bl.y.min(q.y));
        bh = Point2::new(bh.x.max(q.x), bh.y.max(q.y));
    }
    nodes.push(BoxNode {
        lo: bl,
        hi: bh,
        first: lo as u32,
        second: hi as u32,
        leaf: true,
    });
    if hi - lo > LEAF_SIZE {
        let mid = lo + (hi - lo) / 2;
        let left = build_node(segments, lo, mid, nodes);
        let right = build_node(segments, mid, hi, nodes);
        nodes[idx].first = left;
        nodes[idx].second = right;
        nodes[idx].leaf = false;
    }
    idx as u32
}

fn flatten(buckets: Vec<Vec<u32>>) -> (Vec<u32>, Vec<u32>) {
    let mut start = Vec::with_capacity(buckets.len() + 1);
    let mut items = Vec::new();
    start.push(0);
    for b in buckets {
        items.extend(b);
        start.push(items.len() as u32);
    }
    (start, items)
}

/// Continuous function that is negative inside, zero on, and positive outside a curve.
#[derive(Clone, Debug)]
pub struct SignField {
    index: SegmentIndex,
    samples: usize,
    on_curve_tol: f64,
    scale: f64,
}

impl SignField {
    /// Signed Euclidean distance to `curve`.
    pub fn new(curve: &ClosedCurve) -> Self {
        Self::scaled(curve, 1.0)
    }

    /// Signed distance multiplied by a positive `scale`; used to spot-check
    /// that results do not depend on the particular choice of field.
    pub fn scaled(curve: &ClosedCurve, scale: f64) -> Self {
        assert!(scale > 0.0, "field scale must be positive");
        Self {
            index: SegmentIndex::new(curve.samples()),
            samples: curve.len(),
            on_curve_tol: ON_CURVE_RELATIVE_TOLERANCE * curve.diameter(),
            scale,
        }
    }

    pub fn on_curve_tolerance(&self) -> f64 {
        self.on_curve_tol
    }

    pub fn index(&self) -> &SegmentIndex {
        &self.index
    }

    /// Field value at `p`.
    #[inline]
    pub fn value(&self, p: Point2) -> f64 {
        let near = self.index.nearest(p);
        if near.distance <= self.on_curve_tol {
            return 0.0;
        }
        let d = self.scale * near.distance;
        if self.index.contains(p) {
            -d
        } else {
            d
        }
    }

    /// Curve parameter of the closest point on the curve.
    pub fn project(&self, p: Point2) -> f64 {
        let near = self.index.nearest(p);
        wrap01((near.segment as f64 + near.t) / self.samples as f64)
    }
}

/// Free-function form of [`SignField::value`].
#[inline]
pub fn field_value(f: &SignField, p: Point2) -> f64 {
    f.value(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::random_generic_curve;
    use crate::geometry::winding_number;

    fn brute_distance(c: &ClosedCurve, p: Point2) -> f64 {
        (0..c.len())
            .map(|i| {
                let (a, b) = c.segment(i);
                segment_distance(p, a, b).0
            })
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn unit_circle_values() {
        let c = ClosedCurve::circle(1.0, 360).unwrap();
        let f = SignField::new(&c);
        // the 360-gon's inradius is cos(π/360)
        let inradius = (std::f64::consts::PI / 360.0).cos();
        assert!((f.value(Point2::ORIGIN) + inradius).abs() < 1e-12);
        assert!((f.value(Point2::new(2.0, 0.0)) - 1.0).abs() < 1e-12);
        for p in c.samples() {
            assert_eq!(f.value(*p), 0.0);
        }
    }

    #[test]
    fn index_matches_brute_force() {
        let c = random_generic_curve(3, 6, 0.2).unwrap();
        let f = SignField::new(&c);
        let mut state = 12345u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 6.0 - 3.0
        };
        for _ in 0..2000 {
            let p = Point2::new(next(), next());
            let d = brute_distance(&c, p);
            let v = f.value(p);
            assert!((v.abs() - d).abs() < 1e-14, "{p:?}: {v} vs {d}");
            let w = winding_number(c.samples(), p, 0.0).unwrap();
            assert_eq!(v < 0.0, w == 1, "{p:?}");
        }
        // far away points exercise the out-of-grid ring start
        let far = Point2::new(1e3, -2e3);
        assert!((f.value(far) - brute_distance(&c, far)).abs() < 1e-9);
    }

    #[test]
    fn projection_recovers_parameter() {
        let c = random_generic_curve(4, 4, 0.1).unwrap();
        let f = SignField::new(&c);
        for k in 0..50 {
            let u = (k as f64 + 0.37) / 50.0;
            let back = f.project(c.point_at(u));
            assert!(crate::geometry::dist_mod1(u, back) < 1e-12);
        }
    }

    #[test]
    fn sign_changes_once_across_curve() {
        let c = ClosedCurve::ellipse(2.0, 1.0, 512).unwrap();
        let f = SignField::new(&c);
        // a segment from the centre to well outside crosses the ellipse once
        let mut changes = 0;
        let mut prev = f.value(Point2::ORIGIN).signum();
        for k in 1..=4000 {
            let p = Point2::new(3.0 * k as f64 / 4000.0, 0.77 * k as f64 / 4000.0);
            let s = f.value(p).signum();
            if s != 0.0 && s != prev {
                changes += 1;
                prev = s;
            }
        }
        assert_eq!(changes, 1);
    }
}

//! Plane primitives: points, the quarter-turn, square corners and winding numbers.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A point (or vector) in the plane.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the cross product; positive when `other` is counterclockwise of `self`.
    #[inline]
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn dist(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    #[inline]
    pub fn lerp(self, other: Point2, t: f64) -> Point2 {
        self + (other - self) * t
    }
}

impl Add for Point2 {
    type Output = Point2;
    #[inline]
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    #[inline]
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    #[inline]
    fn mul(self, rhs: f64) -> Point2 {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    #[inline]
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

impl From<[f64; 2]> for Point2 {
    fn from(v: [f64; 2]) -> Self {
        Point2::new(v[0], v[1])
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

/// Counterclockwise quarter-turn.
#[inline]
pub fn rotate90(v: Point2) -> Point2 {
    Point2::new(-v.y, v.x)
}

/// The two far corners `(S1, S2)` of the square erected on the left of `a -> b`.
///
/// For `a != b` the points `a, b, S2, S1` are the vertices of a square in
/// counterclockwise order. `a == b` gives the degenerate pair `(a, a)`.
#[inline]
pub fn square_corners(a: Point2, b: Point2) -> (Point2, Point2) {
    let side = rotate90(b - a);
    (a + side, b + side)
}

/// Distance from `p` to the segment `[a, b]` together with the clamped segment parameter.
#[inline]
pub fn segment_distance(p: Point2, a: Point2, b: Point2) -> (f64, f64) {
    let d = b - a;
    let len_sq = d.norm_sq();
    let t = if len_sq > 0.0 {
        ((p - a).dot(d) / len_sq).clamp(0.0, 1.0)
    } else {
        0.0
    };
    ((a + d * t).dist(p), t)
}

/// Shoelace signed area of a closed polyline; positive for counterclockwise loops.
pub fn signed_area(points: &[Point2]) -> f64 {
    if points.len() < 3 {
        return 0.0;
    }
    let n = points.len();
    let mut acc = 0.0;
    for i in 0..n {
        acc += points[i].cross(points[(i + 1) % n]);
    }
    0.5 * acc
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WindingError {
    #[error("point lies within {distance:e} of loop segment {segment}")]
    PointOnLoop { segment: usize, distance: f64 },
    #[error("loop needs at least two points")]
    EmptyLoop,
}

/// Default distance below which a probe is considered to sit on the loop.
pub const WINDING_TOLERANCE: f64 = 1e-12;

/// Winding number of the closed polyline `points` (last point joins the first) around `p`.
///
/// Computed by summing signed angle increments. Fails when `p` is within
/// `tol` of any segment, since the rounding would then be meaningless.
pub fn winding_number(points: &[Point2], p: Point2, tol: f64) -> Result<i64, WindingError> {
    if points.len() < 2 {
        return Err(WindingError::EmptyLoop);
    }
    let n = points.len();
    let mut total = 0.0;
    for i in 0..n {
        let a = points[i];
        let b = points[(i + 1) % n];
        let (dist, _) = segment_distance(p, a, b);
        if dist <= tol {
            return Err(WindingError::PointOnLoop {
                segment: i,
                distance: dist,
            });
        }
        let u = a - p;
        let v = b - p;
        total += u.cross(v).atan2(u.dot(v));
    }
    Ok((total / (2.0 * PI)).round() as i64)
}

/// Distance between parameters on the unit circle `R/Z`.
#[inline]
pub fn dist_mod1(u: f64, v: f64) -> f64 {
    let d = (u - v).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Wraps a parameter into `[0, 1)`.
#[inline]
pub fn wrap01(u: f64) -> f64 {
    let w = u.rem_euclid(1.0);
    // rem_euclid may round up to exactly 1.0 for tiny negative inputs
    if w >= 1.0 {
        0.0
    } else {
        w
    }
}

/// Segment intersection test (closed segments, including touching and collinear overlap).
pub fn segments_intersect(p1: Point2, p2: Point2, q1: Point2, q2: Point2) -> bool {
    let d1 = (p2 - p1).cross(q1 - p1);
    let d2 = (p2 - p1).cross(q2 - p1);
    let d3 = (q2 - q1).cross(p1 - q1);
    let d4 = (q2 - q1).cross(p2 - q1);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on_segment = |a: Point2, b: Point2, c: Point2| {
        c.x >= a.x.min(b.x) && c.x <= a.x.max(b.x) && c.y >= a.y.min(b.y) && c.y <= a.y.max(b.y)
    };
    (d1 == 0.0 && on_segment(p1, p2, q1))
        || (d2 == 0.0 && on_segment(p1, p2, q2))
        || (d3 == 0.0 && on_segment(q1, q2, p1))
        || (d4 == 0.0 && on_segment(q1, q2, p2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(n: usize) -> Vec<Point2> {
        (0..n)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / n as f64;
                Point2::new(t.cos(), t.sin())
            })
            .collect()
    }

    #[test]
    fn rotate90_examples() {
        assert_eq!(rotate90(Point2::new(1.0, 0.0)), Point2::new(0.0, 1.0));
        assert_eq!(rotate90(Point2::new(0.0, 1.0)), Point2::new(-1.0, 0.0));
        assert_eq!(rotate90(Point2::ORIGIN), Point2::ORIGIN);
    }

    #[test]
    fn square_corner_examples() {
        let (s1, s2) = square_corners(Point2::new(0.0, 0.0), Point2::new(1.0, 0.0));
        assert_eq!((s1, s2), (Point2::new(0.0, 1.0), Point2::new(1.0, 1.0)));
        let (s1, s2) = square_corners(Point2::new(1.0, 0.0), Point2::new(0.0, 1.0));
        assert_eq!((s1, s2), (Point2::new(0.0, -1.0), Point2::new(-1.0, 0.0)));
        let p = Point2::new(3.0, 4.0);
        assert_eq!(square_corners(p, p), (p, p));
    }

    #[test]
    fn winding_examples() {
        let lp = circle(360);
        assert_eq!(winding_number(&lp, Point2::ORIGIN, 1e-9), Ok(1));
        assert_eq!(winding_number(&lp, Point2::new(5.0, 0.0), 1e-9), Ok(0));
        let rev: Vec<_> = lp.iter().rev().copied().collect();
        assert_eq!(winding_number(&rev, Point2::ORIGIN, 1e-9), Ok(-1));
        assert!(matches!(
            winding_number(&lp, Point2::new(1.0, 0.0), 1e-9),
            Err(WindingError::PointOnLoop { .. })
        ));
    }

    #[test]
    fn double_loop_winds_twice() {
        let mut lp = circle(100);
        lp.extend(circle(100));
        assert_eq!(winding_number(&lp, Point2::ORIGIN, 1e-9), Ok(2));
    }

    #[test]
    fn intersection_cases() {
        let o = Point2::ORIGIN;
        assert!(segments_intersect(
            o,
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
            Point2::new(1.0, 0.0)
        ));
        assert!(!segments_intersect(
            o,
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
            Point2::new(1.0, 1.0)
        ));
        // touching at an endpoint counts
        assert!(segments_intersect(
            o,
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(2.0, 5.0)
        ));
    }

    #[test]
    fn mod1_helpers() {
        assert!((dist_mod1(0.05, 0.95) - 0.1).abs() < 1e-12);
        assert_eq!(wrap01(-1e-20), 0.0);
        assert!((wrap01(1.25) - 0.25).abs() < 1e-15);
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        fn pt() -> impl Strategy<Value = Point2> {
            (-100.0..100.0f64, -100.0..100.0f64).prop_map(|(x, y)| Point2::new(x, y))
        }

        proptest! {
            #[test]
            fn rotate_four_times_is_identity(v in pt()) {
                let w = rotate90(rotate90(rotate90(rotate90(v))));
                prop_assert_eq!(v, w);
            }

            #[test]
            fn corners_form_ccw_square(a in pt(), b in pt()) {
                prop_assume!(a.dist(b) > 1e-6);
                let (s1, s2) = square_corners(a, b);
                let quad = [a, b, s2, s1];
                let side = a.dist(b);
                for i in 0..4 {
                    let l = quad[i].dist(quad[(i + 1) % 4]);
                    prop_assert!((l - side).abs() <= 1e-9 * side.max(1.0));
                }
                let d1 = a.dist(s2);
                let d2 = b.dist(s1);
                prop_assert!((d1 - d2).abs() <= 1e-9 * d1.max(1.0));
                prop_assert!(signed_area(&quad) > 0.0);
            }
        }
    }
}

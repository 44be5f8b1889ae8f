//! Sampled simple closed curves: validation, parameterization and generators.
//!
//! A [`ClosedCurve`] is the piecewise-linear closure of its samples. The curve
//! parameter `u` lives in `[0, 1)`; sample `k` sits at `u = k / N` and the
//! curve is linear in `u` between samples.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{segments_intersect, signed_area, wrap01, Point2};

/// Default sample count for generated curves.
pub const DEFAULT_SAMPLES: usize = 1024;
/// Minimum number of samples a curve may have.
pub const MIN_SAMPLES: usize = 8;
/// Attempts made by [`random_generic_curve`] before giving up.
pub const MAX_REJECTIONS: usize = 1000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurveError {
    #[error("segments {first} and {second} intersect")]
    NotSimple { first: usize, second: usize },
    #[error("degenerate samples: {0}")]
    DegenerateSamples(String),
    #[error("curve is clockwise (signed area {0:e})")]
    Clockwise(f64),
    #[error("no simple curve after {0} attempts")]
    RejectionLimitExceeded(usize),
}

/// Outcome of [`validate_curve`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub samples: usize,
    pub simple: bool,
    /// Shoelace area after any normalization.
    pub signed_area: f64,
    pub counterclockwise: bool,
    /// Whether the sample order was reversed to make the curve counterclockwise.
    pub reversed: bool,
    /// Shortest edge; the smallest resolvable feature of the polyline.
    pub min_edge_length: f64,
    pub diameter: f64,
}

/// A simple, counterclockwise, piecewise-linear closed curve.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedCurve {
    samples: Vec<Point2>,
    diameter: f64,
}

impl ClosedCurve {
    /// Builds a curve, rejecting anything that is not simple and counterclockwise.
    pub fn new(samples: Vec<Point2>) -> Result<Self, CurveError> {
        let report = validate_curve(&samples, false)?;
        if !report.counterclockwise {
            return Err(CurveError::Clockwise(report.signed_area));
        }
        Ok(Self {
            samples,
            diameter: report.diameter,
        })
    }

    /// Builds a curve, reversing clockwise input. Returns whether it was reversed.
    pub fn new_normalized(mut samples: Vec<Point2>) -> Result<(Self, bool), CurveError> {
        let report = validate_curve(&samples, true)?;
        if report.reversed {
            samples.reverse();
        }
        Ok((
            Self {
                samples,
                diameter: report.diameter,
            },
            report.reversed,
        ))
    }

    /// Axis-aligned ellipse `x²/a² + y²/b² = 1`, sampled uniformly in angle.
    pub fn ellipse(a: f64, b: f64, n: usize) -> Result<Self, CurveError> {
        let samples = (0..n)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / n as f64;
                Point2::new(a * t.cos(), b * t.sin())
            })
            .collect();
        Self::new(samples)
    }

    pub fn circle(radius: f64, n: usize) -> Result<Self, CurveError> {
        Self::ellipse(radius, radius, n)
    }

    pub fn samples(&self) -> &[Point2] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Endpoints of segment `i` (from sample `i` to sample `i + 1`, wrapping).
    #[inline]
    pub fn segment(&self, i: usize) -> (Point2, Point2) {
        let n = self.samples.len();
        (self.samples[i % n], self.samples[(i + 1) % n])
    }

    /// Splits a parameter into segment index and fraction along it.
    #[inline]
    fn locate(&self, u: f64) -> (usize, f64) {
        let n = self.samples.len();
        let s = wrap01(u) * n as f64;
        let i = (s.floor() as usize).min(n - 1);
        (i, s - i as f64)
    }

    /// The curve point at parameter `u` (taken mod 1).
    #[inline]
    pub fn point_at(&self, u: f64) -> Point2 {
        let (i, frac) = self.locate(u);
        let (a, b) = self.segment(i);
        a.lerp(b, frac)
    }

    /// Unit direction of the segment containing parameter `u`.
    pub fn tangent_at(&self, u: f64) -> Point2 {
        let (i, _) = self.locate(u);
        let (a, b) = self.segment(i);
        let d = b - a;
        d * (1.0 / d.norm())
    }

    /// Outward unit normal (right-hand side for a counterclockwise curve).
    pub fn outward_normal_at(&self, u: f64) -> Point2 {
        let t = self.tangent_at(u);
        Point2::new(t.y, -t.x)
    }

    /// Axis-aligned bounding box as `(min, max)`.
    pub fn bounds(&self) -> (Point2, Point2) {
        bounds_of(&self.samples)
    }

    pub fn signed_area(&self) -> f64 {
        signed_area(&self.samples)
    }
}

pub(crate) fn bounds_of(points: &[Point2]) -> (Point2, Point2) {
    let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    (lo, hi)
}

fn diameter_of(points: &[Point2]) -> f64 {
    let mut best = 0.0f64;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            best = best.max(p.dist(*q));
        }
    }
    best
}

/// Checks a sample loop for degeneracy and self-intersection.
///
/// Simplicity uses a sweep over segment x-extents: segments are sorted by
/// their left end and only pairs with overlapping extents are tested.
/// With `normalize` set, a clockwise loop is reported as reversed and its
/// area sign flipped; the caller owns the samples and applies the reversal.
pub fn validate_curve(samples: &[Point2], normalize: bool) -> Result<ValidationReport, CurveError> {
    let n = samples.len();
    if n < MIN_SAMPLES {
        return Err(CurveError::DegenerateSamples(format!(
            "{n} samples, need at least {MIN_SAMPLES}"
        )));
    }
    if let Some(k) = samples.iter().position(|p| !p.is_finite()) {
        return Err(CurveError::DegenerateSamples(format!(
            "sample {k} is not finite"
        )));
    }
    let mut min_edge = f64::INFINITY;
    for i in 0..n {
        let len = samples[i].dist(samples[(i + 1) % n]);
        if len == 0.0 {
            return Err(CurveError::DegenerateSamples(format!(
                "samples {i} and {} coincide",
                (i + 1) % n
            )));
        }
        min_edge = min_edge.min(len);
    }

    if let Some((first, second)) = find_self_intersection(samples) {
        return Err(CurveError::NotSimple { first, second });
    }

    let area = signed_area(samples);
    if area == 0.0 {
        return Err(CurveError::DegenerateSamples("zero enclosed area".into()));
    }
    let reversed = normalize && area < 0.0;
    let signed_area = if reversed { -area } else { area };
    Ok(ValidationReport {
        samples: n,
        simple: true,
        signed_area,
        counterclockwise: signed_area > 0.0,
        reversed,
        min_edge_length: min_edge,
        diameter: diameter_of(samples),
    })
}

/// Returns the first intersecting pair of segments `(i, j)` with `i < j`, if any.
fn find_self_intersection(samples: &[Point2]) -> Option<(usize, usize)> {
    let n = samples.len();
    let seg = |i: usize| (samples[i], samples[(i + 1) % n]);
    let mut order: Vec<usize> = (0..n).collect();
    let xmin = |i: usize| {
        let (a, b) = seg(i);
        a.x.min(b.x)
    };
    order.sort_by(|&i, &j| xmin(i).total_cmp(&xmin(j)).then(i.cmp(&j)));

    let mut hits: Vec<(usize, usize)> = Vec::new();
    for (k, &i) in order.iter().enumerate() {
        let (a, b) = seg(i);
        let xmax = a.x.max(b.x);
        let (ylo, yhi) = (a.y.min(b.y), a.y.max(b.y));
        for &j in &order[k + 1..] {
            let (c, d) = seg(j);
            if c.x.min(d.x) > xmax {
                break;
            }
            if c.y.max(d.y) < ylo || c.y.min(d.y) > yhi {
                continue;
            }
            let adjacent = (i + 1) % n == j || (j + 1) % n == i;
            let hit = if adjacent {
                // adjacent segments may only share their common endpoint
                let (first, second) = if (i + 1) % n == j { (i, j) } else { (j, i) };
                let (p0, p1) = seg(first);
                let (_, p2) = seg(second);
                let u = p1 - p0;
                let v = p2 - p1;
                u.cross(v) == 0.0 && u.dot(v) < 0.0
            } else {
                segments_intersect(a, b, c, d)
            };
            if hit {
                hits.push((i.min(j), i.max(j)));
            }
        }
        if !hits.is_empty() {
            break;
        }
    }
    hits.into_iter().min()
}

/// Star-shaped random curve `r(θ) = 1 + Σ_k (a_k cos kθ + b_k sin kθ)`.
///
/// Coefficients are uniform in `[-amplitude, amplitude]`, drawn from a
/// ChaCha8 stream seeded with `seed`. Draws whose radius dips below `0.05` or
/// whose polyline fails validation are discarded and redrawn from the same
/// stream, so the output depends only on the arguments.
pub fn random_generic_curve(
    seed: u64,
    harmonics: usize,
    amplitude: f64,
) -> Result<ClosedCurve, CurveError> {
    random_generic_curve_with(seed, harmonics, amplitude, DEFAULT_SAMPLES)
}

pub fn random_generic_curve_with(
    seed: u64,
    harmonics: usize,
    amplitude: f64,
    samples: usize,
) -> Result<ClosedCurve, CurveError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_REJECTIONS {
        let coeffs: Vec<(f64, f64)> = (1..=harmonics)
            .map(|_| {
                (
                    amplitude * rng.gen_range(-1.0..=1.0),
                    amplitude * rng.gen_range(-1.0..=1.0),
                )
            })
            .collect();
        let radius = |theta: f64| {
            1.0 + coeffs
                .iter()
                .enumerate()
                .map(|(k, (a, b))| {
                    let kt = (k + 1) as f64 * theta;
                    a * kt.cos() + b * kt.sin()
                })
                .sum::<f64>()
        };
        let pts: Vec<Point2> = (0..samples)
            .map(|j| {
                let theta = 2.0 * PI * j as f64 / samples as f64;
                let r = radius(theta);
                Point2::new(r * theta.cos(), r * theta.sin())
            })
            .collect();
        let r_min = (0..samples)
            .map(|j| radius(2.0 * PI * j as f64 / samples as f64))
            .fold(f64::INFINITY, f64::min);
        if r_min < 0.05 {
            continue;
        }
        if let Ok(curve) = ClosedCurve::new(pts) {
            return Ok(curve);
        }
    }
    Err(CurveError::RejectionLimitExceeded(MAX_REJECTIONS))
}

//! One-dimensional relation-avoiding paths and the split-pair calculus.
//!
//! A path `p(t) → 0` in `ℂ \ {0}` is lifted through `z ↦ e^{2πiz}` to a path
//! `ℓ` in the upper half-plane. Points to the left of `ℓ` (even ray-crossing
//! parity) form the region `U`. Also houses the two `ℂ²` fragments: the
//! square relation and the swept-area pair of a pure spiral.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default `k` scan window `[-K, K]` for [`k_index`].
pub const K_WINDOW: i64 = 64;
/// Minimum strip count for [`swept_area_pair`].
pub const MIN_AREA_STEPS: usize = 1000;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpiralError {
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("invalid relation: {0}")]
    InvalidRelation(String),
    #[error("e^(2πi·base) misses p(0) by {0:e}")]
    BaseMismatch(f64),
    #[error("lift jumps by {step} between samples {index} and {}; sample more densely", index + 1)]
    BranchJump { index: usize, step: f64 },
    #[error("point lies on the lifted path (distance {0:e})")]
    OnPath(f64),
    #[error("query height {height} is within {margin} of the lift's top {top}")]
    TruncationTooShort { height: f64, top: f64, margin: f64 },
    #[error("no monotone membership change for k in [{lo}, {hi}]")]
    WindowExhausted { lo: i64, hi: i64 },
    #[error("split pair element is zero")]
    ZeroElement,
    #[error("split pair element {0} is not in the upper half-plane")]
    NotUpperHalfPlane(Complex64),
    #[error("swept area needs Re(a) < 0, got {0}")]
    NotDecaying(f64),
    #[error("need at least {MIN_AREA_STEPS} steps, got {0}")]
    TooFewSteps(usize),
}

/// The symmetric relation `x ~ y` iff `x = α_i y` or `y = α_i x` for some `i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplierRelation {
    multipliers: Vec<Complex64>,
}

impl MultiplierRelation {
    pub fn new(multipliers: Vec<Complex64>) -> Result<Self, SpiralError> {
        for (k, a) in multipliers.iter().enumerate() {
            if !(a.re.is_finite() && a.im.is_finite()) || *a == Complex64::new(0.0, 0.0) {
                return Err(SpiralError::InvalidRelation(format!("multiplier {k} is zero or not finite")));
            }
            if a.norm() > 1.0 + 1e-12 {
                return Err(SpiralError::InvalidRelation(format!("multiplier {k} has modulus {} > 1", a.norm())));
            }
        }
        Ok(Self { multipliers })
    }

    pub fn multipliers(&self) -> &[Complex64] {
        &self.multipliers
    }
}

/// Samples `(t, p(t))` of a path with `t ≥ 0` strictly increasing and `p ≠ 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OriginPath1D {
    samples: Vec<(f64, Complex64)>,
}

impl OriginPath1D {
    pub fn new(samples: Vec<(f64, Complex64)>) -> Result<Self, SpiralError> {
        if samples.len() < 2 {
            return Err(SpiralError::InvalidPath("need at least two samples".into()));
        }
        for (k, &(t, z)) in samples.iter().enumerate() {
            if !(t.is_finite() && z.re.is_finite() && z.im.is_finite()) {
                return Err(SpiralError::InvalidPath(format!("sample {k} is not finite")));
            }
            if t < 0.0 {
                return Err(SpiralError::InvalidPath(format!("sample {k} has negative time {t}")));
            }
            if z.norm() == 0.0 {
                return Err(SpiralError::InvalidPath(format!("sample {k} is zero")));
            }
            if k > 0 && t <= samples[k - 1].0 {
                return Err(SpiralError::InvalidPath(format!("time is not increasing at sample {k}")));
            }
        }
        Ok(Self { samples })
    }

    /// Samples `f` at `n + 1` evenly spaced times in `[0, t_max]`.
    pub fn from_fn(t_max: f64, n: usize, f: impl Fn(f64) -> Complex64) -> Result<Self, SpiralError> {
        Self::new(
            (0..=n)
                .map(|k| {
                    let t = t_max * k as f64 / n as f64;
                    (t, f(t))
                })
                .collect(),
        )
    }

    pub fn samples(&self) -> &[(f64, Complex64)] {
        &self.samples
    }

    pub fn scaled(&self, alpha: Complex64) -> Result<Self, SpiralError> {
        Self::new(self.samples.iter().map(|&(t, z)| (t, alpha * z)).collect())
    }
}

/// A pair of sample times related by a multiplier.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationWitness {
    pub t1: f64,
    pub t2: f64,
    /// Index of the multiplier; the relation reads `p(t1) ≈ α p(t2)`.
    pub multiplier: usize,
    /// `|p(t1) − α p(t2)| / max(|p(t1)|, |α p(t2)|)`.
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AvoidanceCheck {
    pub avoiding: bool,
    /// Closest pair found, whether or not it is below tolerance.
    pub closest: Option<RelationWitness>,
}

/// Searches all sample pairs for `p(t1) ≈ α_i p(t2)`, in both orders.
///
/// Distances are relative to the larger modulus, since the path shrinks to
/// the origin. Neighbouring samples are skipped so that `α = 1` does not
/// flag the path against itself.
pub fn is_relation_avoiding(path: &OriginPath1D, rel: &MultiplierRelation, tol: f64) -> AvoidanceCheck {
    let s = path.samples();
    let mut closest: Option<RelationWitness> = None;
    for (m, &alpha) in rel.multipliers().iter().enumerate() {
        for (i, &(t1, p1)) in s.iter().enumerate() {
            for (j, &(t2, p2)) in s.iter().enumerate() {
                if i.abs_diff(j) <= 1 {
                    continue;
                }
                let q = alpha * p2;
                let d = (p1 - q).norm() / p1.norm().max(q.norm());
                if closest.is_none_or(|c| d < c.distance) {
                    closest = Some(RelationWitness {
                        t1,
                        t2,
                        multiplier: m,
                        distance: d,
                    });
                }
            }
        }
    }
    AvoidanceCheck {
        avoiding: closest.is_none_or(|c| c.distance >= tol),
        closest,
    }
}

/// A continuous lift `ℓ` with `e^{2πiℓ(t)} = p(t)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftedPath {
    pub samples: Vec<(f64, Complex64)>,
    pub branch_base: Complex64,
}

impl LiftedPath {
    /// Largest `|e^{2πiℓ} − p| / |p|` over the samples.
    pub fn round_trip_error(&self, path: &OriginPath1D) -> f64 {
        self.samples
            .iter()
            .zip(path.samples())
            .map(|(&(_, l), &(_, p))| ((TAU * I * l).exp() - p).norm() / p.norm())
            .fold(0.0, f64::max)
    }

    pub fn start(&self) -> Complex64 {
        self.samples[0].1
    }

    /// Height of the last sample.
    pub fn top(&self) -> f64 {
        self.samples[self.samples.len() - 1].1.im
    }
}

/// `log(z) / 2πi` on the principal branch: real part `arg z / 2π`, imaginary
/// part `−ln|z| / 2π`.
pub fn principal_lift(z: Complex64) -> Complex64 {
    Complex64::new(z.arg() / TAU, -z.norm().ln() / TAU)
}

/// Lifts `path` through `z ↦ e^{2πiz}` starting at `base`, choosing at each
/// sample the preimage nearest the previous one.
pub fn lift_log(path: &OriginPath1D, base: Complex64) -> Result<LiftedPath, SpiralError> {
    let s = path.samples();
    let p0 = s[0].1;
    let mismatch = ((TAU * I * base).exp() - p0).norm() / p0.norm();
    if mismatch > 1e-9 {
        return Err(SpiralError::BaseMismatch(mismatch));
    }
    let mut out = Vec::with_capacity(s.len());
    out.push((s[0].0, base));
    let mut prev = base;
    for (k, &(t, z)) in s.iter().enumerate().skip(1) {
        let mut l = principal_lift(z);
        l.re += (prev.re - l.re).round();
        let step = (l - prev).norm();
        if step >= 0.5 {
            return Err(SpiralError::BranchJump { index: k - 1, step });
        }
        out.push((t, l));
        prev = l;
    }
    Ok(LiftedPath {
        samples: out,
        branch_base: base,
    })
}

fn point_segment_distance(z: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    let t = if len2 > 0.0 {
        (((z - a) * d.conj()).re / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (a + d * t - z).norm()
}

/// Tolerance for [`in_region_u`]'s on-path test.
pub const ON_PATH_TOLERANCE: f64 = 1e-9;
/// Required clearance between a query and the top of the truncated lift.
pub const TRUNCATION_MARGIN: f64 = 1.0;

/// Membership in `U`: a leftward horizontal ray from `z` crosses `ℓ` an even
/// number of times. Crossings use the half-open rule on segment heights.
pub fn in_region_u(z: Complex64, ell: &LiftedPath) -> Result<bool, SpiralError> {
    let top = ell.top();
    if z.im > top - TRUNCATION_MARGIN {
        return Err(SpiralError::TruncationTooShort {
            height: z.im,
            top,
            margin: TRUNCATION_MARGIN,
        });
    }
    let mut crossings = 0usize;
    for w in ell.samples.windows(2) {
        let (a, b) = (w[0].1, w[1].1);
        let dist = point_segment_distance(z, a, b);
        if dist <= ON_PATH_TOLERANCE {
            return Err(SpiralError::OnPath(dist));
        }
        if (a.im > z.im) != (b.im > z.im) {
            let x = a.re + (z.im - a.im) * (b.re - a.re) / (b.im - a.im);
            if x < z.re {
                crossings += 1;
            }
        }
    }
    Ok(crossings.is_multiple_of(2))
}

/// Largest `k` in `[-K_WINDOW, K_WINDOW]` with `start + k ∈ U`.
///
/// Fails when no such `k` exists or when the top of the window is still in
/// `U`, since the true maximum could then lie outside it.
pub fn k_index(start: Complex64, ell: &LiftedPath) -> Result<i64, SpiralError> {
    k_index_in(start, ell, K_WINDOW)
}

pub fn k_index_in(start: Complex64, ell: &LiftedPath, window: i64) -> Result<i64, SpiralError> {
    let exhausted = SpiralError::WindowExhausted { lo: -window, hi: window };
    for k in (-window..=window).rev() {
        if in_region_u(start + k as f64, ell)? {
            return if k == window { Err(exhausted) } else { Ok(k) };
        }
    }
    Err(exhausted)
}

/// Two upper-half-plane points, `p ∈ U` and `q ∉ U` in the paper's setting.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitPair {
    pub p: Complex64,
    pub q: Complex64,
}

impl SplitPair {
    pub fn new(p: Complex64, q: Complex64) -> Result<Self, SpiralError> {
        for z in [p, q] {
            if !(z.im > 0.0) {
                return Err(SpiralError::NotUpperHalfPlane(z));
            }
        }
        Ok(Self { p, q })
    }
}

/// Result of one derivation step.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Derivation {
    Pair(SplitPair),
    /// Equal imaginary parts: the difference is real and the chain stops.
    Terminal { p: Complex64, q: Complex64 },
    /// `p = q`: the difference is zero.
    Degenerate,
}

/// Subtracts the element with smaller imaginary part from the other.
pub fn derived_split_pair(sp: SplitPair) -> Derivation {
    let SplitPair { p, q } = sp;
    if p == q {
        return Derivation::Degenerate;
    }
    let (np, nq) = if p.im >= q.im { (p - q, q) } else { (p, q - p) };
    if np.im > 0.0 && nq.im > 0.0 {
        Derivation::Pair(SplitPair { p: np, q: nq })
    } else {
        Derivation::Terminal { p: np, q: nq }
    }
}

/// Argument in `[0, π]`; real elements take `0` (positive) or `π` (negative).
fn split_arg(z: Complex64) -> f64 {
    if z.im == 0.0 {
        if z.re > 0.0 {
            0.0
        } else {
            PI
        }
    } else {
        z.arg()
    }
}

/// `arg p > arg q`. Real elements are allowed, so a terminal pair from a
/// good pair is again good.
pub fn is_good(p: Complex64, q: Complex64) -> Result<bool, SpiralError> {
    if p.norm() == 0.0 || q.norm() == 0.0 {
        return Err(SpiralError::ZeroElement);
    }
    for z in [p, q] {
        if z.im < 0.0 {
            return Err(SpiralError::NotUpperHalfPlane(z));
        }
    }
    Ok(split_arg(p) > split_arg(q))
}

/// Derives repeatedly until the chain stops or `max_steps` is reached.
pub fn derivation_trajectory(sp: SplitPair, max_steps: usize) -> Vec<Derivation> {
    let mut out = Vec::new();
    let mut cur = sp;
    for _ in 0..max_steps {
        let d = derived_split_pair(cur);
        out.push(d);
        match d {
            Derivation::Pair(next) => cur = next,
            _ => break,
        }
    }
    out
}

/// Outcome of the θ search.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum SpiralAngle {
    Angle {
        theta: f64,
        low: f64,
        high: f64,
    },
    /// `arg(ℓ_j(0) + k_j + 1) > arg(ℓ_i(0) + k_i)`.
    Infeasible {
        i: usize,
        j: usize,
        low: f64,
        high: f64,
    },
}

/// Finds `θ ∈ (0, π)` with `arg(ℓ_j(0) + k_j + 1) ≤ θ ≤ arg(ℓ_i(0) + k_i)` for all `i, j`.
pub fn find_spiral_angle(offsets: &[(Complex64, i64)]) -> Result<SpiralAngle, SpiralError> {
    if offsets.is_empty() {
        return Ok(SpiralAngle::Angle {
            theta: PI / 2.0,
            low: 0.0,
            high: PI,
        });
    }
    let (mut low, mut j) = (f64::NEG_INFINITY, 0);
    let (mut high, mut i) = (f64::INFINITY, 0);
    for (k, &(l, kk)) in offsets.iter().enumerate() {
        let at = l + kk as f64;
        let next = at + 1.0;
        if at.norm() == 0.0 || next.norm() == 0.0 {
            return Err(SpiralError::ZeroElement);
        }
        if next.arg() > low {
            low = next.arg();
            j = k;
        }
        if at.arg() < high {
            high = at.arg();
            i = k;
        }
    }
    let (lo, hi) = (low.max(0.0), high.min(PI));
    if low <= high && lo <= hi && hi > 0.0 && lo < PI {
        Ok(SpiralAngle::Angle {
            theta: 0.5 * (lo + hi),
            low,
            high,
        })
    } else {
        Ok(SpiralAngle::Infeasible { i, j, low, high })
    }
}

fn corners(x: Complex64, y: Complex64) -> [Complex64; 2] {
    let side = I * (y - x);
    [x + side, y + side]
}

/// Whether `{x1, y1, x2, y2}` meets the far corners of the squares erected on
/// `x1 → y1` and `x2 → y2`. `tol` is relative to the largest modulus, floored at 1.
pub fn square_relation_holds(x1: Complex64, y1: Complex64, x2: Complex64, y2: Complex64, tol: f64) -> bool {
    let points = [x1, y1, x2, y2];
    let [c1, c2] = corners(x1, y1);
    let [c3, c4] = corners(x2, y2);
    let far = [c1, c2, c3, c4];
    let scale = points.iter().chain(&far).map(|z| z.norm()).fold(1.0, f64::max);
    points.iter().any(|p| far.iter().any(|c| (p - c).norm() <= tol * scale))
}

fn triangle_area(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    0.5 * ((b - a).conj() * (c - a)).im.abs()
}

/// Unsigned area of the strip between two positions of a moving segment,
/// averaged over both diagonal splits of the quadrilateral.
fn strip_area(p0: Complex64, q0: Complex64, p1: Complex64, q1: Complex64) -> f64 {
    let a = triangle_area(p0, q0, q1) + triangle_area(p0, q1, p1);
    let b = triangle_area(p0, q0, p1) + triangle_area(q0, q1, p1);
    0.5 * (a + b)
}

/// Areas swept over `[0, t_max]` by the segment `[f1, f2]` and by the
/// segment of far corners `[f1 + i(f2 − f1), f2 + i(f2 − f1)]`, where
/// `f = (x1, x2) e^{at}`. Overlapping strips are counted with multiplicity.
pub fn swept_area_pair(x: (Complex64, Complex64), a: Complex64, t_max: f64, steps: usize) -> Result<(f64, f64), SpiralError> {
    if !(a.re < 0.0) {
        return Err(SpiralError::NotDecaying(a.re));
    }
    if steps < MIN_AREA_STEPS {
        return Err(SpiralError::TooFewSteps(steps));
    }
    let at = |t: f64| {
        let e = (a * t).exp();
        let (f1, f2) = (x.0 * e, x.1 * e);
        let [c1, c2] = corners(f1, f2);
        (f1, f2, c1, c2)
    };
    let (mut edge, mut corner) = (0.0, 0.0);
    let mut prev = at(0.0);
    for k in 1..=steps {
        let cur = at(t_max * k as f64 / steps as f64);
        edge += strip_area(prev.0, prev.1, cur.0, cur.1);
        corner += strip_area(prev.2, prev.3, cur.2, cur.3);
        prev = cur;
    }
    Ok((edge, corner))
}

/// Random pure spiral `(x1, x2) e^{at}`: `x1, x2` uniform in `[-1, 1]²`,
/// `Re a ∈ [-0.5, -0.05]`, `Im a ∈ [-2, 2]`.
pub fn random_pure_spiral(rng: &mut impl rand::Rng) -> ((Complex64, Complex64), Complex64) {
    let mut unit = || rng.gen_range(-1.0..=1.0);
    let x1 = Complex64::new(unit(), unit());
    let x2 = Complex64::new(unit(), unit());
    let a = Complex64::new(-0.05 - 0.45 * (unit() + 1.0) / 2.0, 2.0 * unit());
    ((x1, x2), a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn spiral(t_max: f64, n: usize) -> OriginPath1D {
        OriginPath1D::from_fn(t_max, n, |t| (c(-1.0, 1.0) * t).exp()).unwrap()
    }

    #[test]
    fn spiral_against_full_turn_multiplier() {
        // samples land exactly on the lag 2π
        let path = spiral(4.0 * PI, 800);
        let rel = MultiplierRelation::new(vec![c((-TAU).exp(), 0.0)]).unwrap();
        let r = is_relation_avoiding(&path, &rel, 1e-6);
        assert!(!r.avoiding);
        let w = r.closest.unwrap();
        assert!(((w.t2 - w.t1).abs() - TAU).abs() < 1e-9, "{w:?}");
    }

    #[test]
    fn spiral_against_half_turn_multiplier() {
        let path = spiral(4.0 * PI, 800);
        let rel = MultiplierRelation::new(vec![c((-PI).exp(), 0.0)]).unwrap();
        let r = is_relation_avoiding(&path, &rel, 1e-3);
        assert!(r.avoiding, "{r:?}");
    }

    #[test]
    fn injective_spiral_avoids_identity() {
        let path = spiral(3.0, 300);
        let rel = MultiplierRelation::new(vec![c(1.0, 0.0)]).unwrap();
        assert!(is_relation_avoiding(&path, &rel, 1e-3).avoiding);
        // a path that revisits a value does not
        let back = OriginPath1D::new(vec![
            (0.0, c(1.0, 0.0)),
            (1.0, c(0.5, 0.5)),
            (2.0, c(0.2, 0.0)),
            (3.0, c(0.5, 0.5)),
        ])
        .unwrap();
        assert!(!is_relation_avoiding(&back, &rel, 1e-9).avoiding);
    }

    #[test]
    fn relation_rejects_bad_multipliers() {
        assert!(MultiplierRelation::new(vec![c(0.0, 0.0)]).is_err());
        assert!(MultiplierRelation::new(vec![c(1.5, 0.0)]).is_err());
    }

    #[test]
    fn lift_examples() {
        let path = OriginPath1D::from_fn(3.0, 300, |t| c((-TAU * t).exp(), 0.0)).unwrap();
        let l = lift_log(&path, c(0.0, 0.0)).unwrap();
        for &(t, z) in &l.samples {
            assert!((z - c(0.0, t)).norm() < 1e-12);
        }

        let theta = 0.37;
        let path = OriginPath1D::from_fn(2.0, 200, |t| (TAU * I * c(theta, t)).exp()).unwrap();
        let l = lift_log(&path, c(theta, 0.0)).unwrap();
        for &(t, z) in &l.samples {
            assert!((z - c(theta, t)).norm() < 1e-12);
        }

        let base = c(0.3, 0.5);
        let alpha = (TAU * I * base).exp();
        let scaled = spiral(6.0, 600).scaled(alpha).unwrap();
        let l = lift_log(&scaled, base).unwrap();
        assert_eq!(l.start(), base);
        assert!(l.round_trip_error(&scaled) < 1e-9);
    }

    #[test]
    fn lift_detects_sparse_sampling_and_bad_base() {
        let path = OriginPath1D::from_fn(4.0, 4, |t| (TAU * I * c(0.45 * t, 0.3 * t)).exp()).unwrap();
        assert!(matches!(
            lift_log(&path, c(0.0, 0.0)),
            Err(SpiralError::BranchJump { .. })
        ));
        let path = spiral(1.0, 10);
        assert!(matches!(
            lift_log(&path, c(0.25, 0.0)),
            Err(SpiralError::BaseMismatch(_))
        ));
    }

    /// The lift `{i t : t ∈ [0, 10]}`.
    fn vertical() -> LiftedPath {
        let path = OriginPath1D::from_fn(10.0, 1000, |t| c((-TAU * t).exp(), 0.0)).unwrap();
        lift_log(&path, c(0.0, 0.0)).unwrap()
    }

    #[test]
    fn region_u_examples() {
        let ell = vertical();
        assert_eq!(in_region_u(c(-1.0, 1.0), &ell), Ok(true));
        assert_eq!(in_region_u(c(1.0, 1.0), &ell), Ok(false));
        assert!(matches!(in_region_u(c(0.0, 1.0), &ell), Err(SpiralError::OnPath(_))));
        assert!(matches!(
            in_region_u(c(1.0, 9.5), &ell),
            Err(SpiralError::TruncationTooShort { .. })
        ));
    }

    #[test]
    fn k_index_examples() {
        let ell = vertical();
        assert_eq!(k_index(c(-0.3, 0.5), &ell), Ok(0));
        assert_eq!(k_index(c(-2.2, 0.5), &ell), Ok(2));
        assert_eq!(k_index(c(0.4, 0.5), &ell), Ok(-1));
        // below the start of the lift every translate is in U
        assert!(matches!(
            k_index(c(0.4, -0.5), &ell),
            Err(SpiralError::WindowExhausted { .. })
        ));
    }

    #[test]
    fn derivation_examples() {
        let sp = SplitPair::new(c(1.0, 3.0), c(2.0, 1.0)).unwrap();
        assert_eq!(
            derived_split_pair(sp),
            Derivation::Pair(SplitPair {
                p: c(-1.0, 2.0),
                q: c(2.0, 1.0)
            })
        );
        let sp = SplitPair::new(c(2.0, 1.0), c(1.0, 3.0)).unwrap();
        assert_eq!(
            derived_split_pair(sp),
            Derivation::Pair(SplitPair {
                p: c(2.0, 1.0),
                q: c(-1.0, 2.0)
            })
        );
        let sp = SplitPair::new(c(1.0, 1.0), c(1.0, 1.0)).unwrap();
        assert_eq!(derived_split_pair(sp), Derivation::Degenerate);
        assert!(SplitPair::new(c(1.0, 0.0), c(1.0, 1.0)).is_err());
    }

    #[test]
    fn goodness_examples() {
        assert_eq!(is_good(c(-1.0, 2.0), c(2.0, 1.0)), Ok(true));
        assert_eq!(is_good(c(2.0, 1.0), c(-1.0, 2.0)), Ok(false));
        assert_eq!(is_good(c(1.0, 1.0), c(1.0, 1.0)), Ok(false));
        assert_eq!(is_good(c(0.0, 0.0), c(1.0, 1.0)), Err(SpiralError::ZeroElement));
        // real elements: negative reals sit at π, positive at 0
        assert_eq!(is_good(c(-2.0, 0.0), c(1.0, 1.0)), Ok(true));
        assert_eq!(is_good(c(1.0, 1.0), c(3.0, 0.0)), Ok(true));
    }

    #[test]
    fn integer_heights_terminate_good() {
        // Euclid on heights 7 and 3 takes at most 7 + 3 steps
        let sp = SplitPair::new(c(-0.25, 7.0), c(1.5, 3.0)).unwrap();
        assert!(is_good(sp.p, sp.q).unwrap());
        let traj = derivation_trajectory(sp, 10);
        match traj.last().unwrap() {
            Derivation::Terminal { p, q } => assert!(is_good(*p, *q).unwrap()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn spiral_angle_examples() {
        match find_spiral_angle(&[(c(0.3, 0.5), 0)]).unwrap() {
            SpiralAngle::Angle { theta, low, high } => {
                assert!((low - 0.3672).abs() < 1e-4);
                assert!((high - 1.0304).abs() < 1e-4);
                assert!((theta - 0.6988).abs() < 1e-4);
            }
            other => panic!("{other:?}"),
        }
        // arg(-2 + 0.2i) exceeds arg(0.3 + 0.5i)
        let r = find_spiral_angle(&[(c(0.3, 0.5), 0), (c(-3.0, 0.2), 0)]).unwrap();
        assert!(matches!(r, SpiralAngle::Infeasible { i: 0, j: 1, .. }), "{r:?}");
        assert_eq!(
            find_spiral_angle(&[]).unwrap(),
            SpiralAngle::Angle {
                theta: PI / 2.0,
                low: 0.0,
                high: PI
            }
        );
    }

    #[test]
    fn square_relation_examples() {
        let z = c(0.0, 0.0);
        assert!(square_relation_holds(z, z, z, z, 1e-12));
        assert!(square_relation_holds(z, c(1.0, 0.0), c(0.0, 1.0), c(0.0, 2.0), 1e-12));
        assert!(!square_relation_holds(z, c(1.0, 0.0), c(10.0, 0.0), c(11.0, 0.0), 1e-12));
    }

    #[test]
    fn swept_area_examples() {
        let (e, s) = swept_area_pair((c(1.0, 0.0), c(0.0, 1.0)), c(-0.2, 1.0), 40.0, 200_000).unwrap();
        assert!(e > 0.0 && s > 0.0);
        assert!((e - s).abs() / e.max(s) < 5e-3, "{e} {s}");

        let x = c(0.7, -0.2);
        assert_eq!(swept_area_pair((x, x), c(-0.5, 2.0), 10.0, 1000).unwrap(), (0.0, 0.0));

        // pure shrinking toward the origin: both sweep the triangle on the origin
        let a: f64 = -0.3;
        let t_max = 5.0;
        let closed = 0.5 * (1.0 - (2.0 * a * t_max).exp());
        let (e, s) = swept_area_pair((c(1.0, 0.0), c(0.0, 1.0)), c(a, 0.0), t_max, 2000).unwrap();
        assert!((e - closed).abs() < 1e-9 && (s - closed).abs() < 1e-9, "{e} {s} {closed}");

        assert!(matches!(
            swept_area_pair((x, z_one()), c(0.1, 1.0), 1.0, 1000),
            Err(SpiralError::NotDecaying(_))
        ));
    }

    #[test]
    fn strip_sum_matches_endpoint_rate() {
        // As dt → 0 the two triangles of a strip tend to |L(0)| and |L(1)| times dt/2,
        // where L(s) = Im(a·conj(D)·(P + sD)) e^{2 Re(a) t} is the sweep rate at s.
        let (x1, x2, a) = (c(0.3, -0.8), c(0.9, 0.4), c(-0.25, 1.3));
        let t_max = 30.0;
        let decay = (1.0 - (2.0 * a.re * t_max).exp()) / (-2.0 * a.re);
        let rate = |p: Complex64, d: Complex64| {
            let l = |s: f64| (a * d.conj() * (p + d * s)).im;
            0.5 * (l(0.0).abs() + l(1.0).abs()) * decay
        };
        let d = x2 - x1;
        let expect = (rate(x1, d), rate(x1 + I * d, d));
        let got = swept_area_pair((x1, x2), a, t_max, 400_000).unwrap();
        assert!((got.0 - expect.0).abs() < 1e-4 * expect.0, "{got:?} {expect:?}");
        assert!((got.1 - expect.1).abs() < 1e-4 * expect.1, "{got:?} {expect:?}");
    }

    fn z_one() -> Complex64 {
        c(1.0, 0.0)
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn upper() -> impl Strategy<Value = Complex64> {
            (-5.0..5.0f64, 0.01..5.0f64).prop_map(|(re, im)| c(re, im))
        }

        proptest! {
            #[test]
            fn derivation_preserves_goodness(p in upper(), q in upper()) {
                prop_assume!(p != q);
                let good = is_good(p, q).unwrap();
                match derived_split_pair(SplitPair::new(p, q).unwrap()) {
                    Derivation::Pair(d) => prop_assert_eq!(is_good(d.p, d.q).unwrap(), good),
                    Derivation::Terminal { p, q } => {
                        if good {
                            prop_assert!(is_good(p, q).unwrap());
                        }
                    }
                    Derivation::Degenerate => {}
                }
            }

            #[test]
            fn square_relation_is_swap_symmetric(v in proptest::array::uniform8(-3i32..3)) {
                let z: Vec<Complex64> = v.chunks(2).map(|w| c(w[0] as f64, w[1] as f64)).collect();
                prop_assert_eq!(
                    square_relation_holds(z[0], z[1], z[2], z[3], 1e-12),
                    square_relation_holds(z[2], z[3], z[0], z[1], 1e-12)
                );
            }

            #[test]
            fn lift_round_trips(re in -1.5..-0.05f64, im in -6.0..6.0f64, phase in 0.0..1.0f64) {
                let a = c(re, im);
                let start = (TAU * I * c(phase, 0.0)).exp();
                let path = OriginPath1D::from_fn(8.0, 4000, |t| start * (a * t).exp()).unwrap();
                let l = lift_log(&path, c(phase, 0.0)).unwrap();
                prop_assert!(l.round_trip_error(&path) < 1e-9);
            }

            #[test]
            fn region_u_is_locally_constant(x in -3.0..3.0f64, y in 0.2..6.0f64, dx in -1.0..1.0f64, dy in -1.0..1.0f64) {
                let ell = vertical();
                let z = c(x, y);
                let clearance = x.abs().min(y);
                prop_assume!(clearance > 1e-6);
                let w = z + c(dx, dy) * (0.99 * clearance / c(dx, dy).norm().max(1.0));
                prop_assert_eq!(in_region_u(z, &ell), in_region_u(w, &ell));
            }
        }
    }
}

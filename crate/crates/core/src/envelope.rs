//! Square-envelope machinery on the cylinder `C = torus \ diagonal`.
//!
//! Positions on `C` are measured by the gap `(v - u) mod 1`. Near gap `0⁺`
//! the far corners `S1, S2` of a short chord fall inside the curve, near
//! gap `1⁻` they fall outside. A square envelope would need a component of
//! `{g1 < 0, g2 < 0}` reaching both ends.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::ClosedCurve;
use crate::field::SignField;
use crate::geometry::{square_corners, winding_number, Point2, WindingError};
use crate::squares::{g_map, lattice_values, TorusParam, MIN_GRID};

/// Cap on bisection depth when following the anti-diagonal loop.
const MAX_LOOP_DEPTH: u32 = 24;
/// Largest turning angle allowed between consecutive loop samples.
const MAX_TURN: f64 = std::f64::consts::FRAC_PI_4;
/// Default number of outermost truncation indices inspected for σ limits.
pub const DEFAULT_TAIL: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnvelopeError {
    #[error("g vanishes on the anti-diagonal near u = {u} (|g| = {magnitude:e})")]
    ZeroOnLoop { u: f64, magnitude: f64 },
    #[error("need at least {min} samples, got {got}")]
    TooFewSamples { got: usize, min: usize },
    #[error("grid {0} is below the minimum of {MIN_GRID}")]
    GridTooSmall(usize),
    #[error("probe lies on the loop: {0}")]
    PointOnLoop(#[from] WindingError),
    #[error("e1 has {0} samples but e2 has {1}")]
    LengthMismatch(usize, usize),
    #[error("truncation index {index} exceeds the available {available}")]
    TruncationOutOfRange { index: usize, available: usize },
}

fn g_point(c: &ClosedCurve, f: &SignField, u: f64) -> Point2 {
    let (g1, g2) = g_map(c, f, TorusParam::new(u, u + 0.5));
    Point2::new(g1, g2)
}

fn turn(a: Point2, b: Point2) -> f64 {
    a.cross(b).atan2(a.dot(b)).abs()
}

/// Winding number around the origin of `u ↦ g(u, u + 1/2)`, `u ∈ [0, 1)`.
///
/// Starts from `samples` equally spaced values and bisects any step that
/// turns by more than a quarter of a right angle. A loop point within the
/// field's on-curve tolerance of the origin is reported as [`EnvelopeError::ZeroOnLoop`].
pub fn antidiagonal_winding(c: &ClosedCurve, f: &SignField, samples: usize) -> Result<i64, EnvelopeError> {
    if samples < 4 {
        return Err(EnvelopeError::TooFewSamples { got: samples, min: 4 });
    }
    let zero_tol = f.on_curve_tolerance().max(f64::MIN_POSITIVE);
    let check = |u: f64, p: Point2| {
        if p.norm() <= zero_tol {
            Err(EnvelopeError::ZeroOnLoop {
                u,
                magnitude: p.norm(),
            })
        } else {
            Ok(p)
        }
    };

    let base: Vec<(f64, Point2)> = (0..samples)
        .map(|k| {
            let u = k as f64 / samples as f64;
            check(u, g_point(c, f, u)).map(|p| (u, p))
        })
        .collect::<Result<_, _>>()?;

    let mut total = 0.0;
    for k in 0..samples {
        let (u0, p0) = base[k];
        let (u1, p1) = if k + 1 < samples {
            base[k + 1]
        } else {
            (1.0, base[0].1)
        };
        // explicit stack of subintervals, processed left to right
        let mut stack = vec![(u0, p0, u1, p1, 0u32)];
        while let Some((a, pa, b, pb, depth)) = stack.pop() {
            if turn(pa, pb) <= MAX_TURN || depth >= MAX_LOOP_DEPTH {
                if depth >= MAX_LOOP_DEPTH && turn(pa, pb) > MAX_TURN {
                    // the loop swings through the origin faster than we can resolve
                    return Err(EnvelopeError::ZeroOnLoop {
                        u: 0.5 * (a + b),
                        magnitude: pa.norm().min(pb.norm()),
                    });
                }
                total += pa.cross(pb).atan2(pa.dot(pb));
                continue;
            }
            let m = 0.5 * (a + b);
            let pm = check(m, g_point(c, f, m))?;
            stack.push((m, pm, b, pb, depth + 1));
            stack.push((a, pa, m, pm, depth + 1));
        }
    }
    Ok((total / std::f64::consts::TAU).round() as i64)
}

/// A thinned component of the lower-left quadrant region on the cylinder.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CylinderPath {
    pub points: Vec<TorusParam>,
    /// Reaches both ends of the cylinder.
    pub spanning: bool,
    /// Lattice nodes in the full component.
    pub nodes: usize,
    /// Smallest and largest gap `(v - u) mod 1` reached by the component.
    pub gap_range: (f64, f64),
}

/// Connected components of `{g1 < -tol, g2 < -tol}` on the `grid × grid`
/// lattice, each thinned to a shortest lattice path between its extreme gaps.
///
/// Nodes within two lattice steps of the diagonal are excluded. A component
/// spans when it reaches gap `2/grid` and gap `1 - 2/grid`. Components are
/// ordered by their first node in row-major order.
pub fn trace_quadrant_components(
    c: &ClosedCurve,
    f: &SignField,
    grid: usize,
    tol: f64,
) -> Result<Vec<CylinderPath>, EnvelopeError> {
    if grid < MIN_GRID {
        return Err(EnvelopeError::GridTooSmall(grid));
    }
    let n = grid;
    let values = lattice_values(c, f, n);
    let gap = |idx: usize| (idx % n + n - idx / n) % n;
    let inside: Vec<bool> = values
        .iter()
        .enumerate()
        .map(|(idx, &(g1, g2))| {
            let d = gap(idx);
            d.min(n - d) >= 2 && g1 < -tol && g2 < -tol
        })
        .collect();

    let neighbours = |idx: usize| {
        let (i, j) = (idx / n, idx % n);
        [
            ((i + 1) % n) * n + j,
            ((i + n - 1) % n) * n + j,
            i * n + (j + 1) % n,
            i * n + (j + n - 1) % n,
        ]
    };

    let mut label = vec![usize::MAX; n * n];
    let mut paths = Vec::new();
    for start in 0..n * n {
        if !inside[start] || label[start] != usize::MAX {
            continue;
        }
        let id = paths.len();
        let mut members = vec![start];
        label[start] = id;
        let mut head = 0;
        while head < members.len() {
            let idx = members[head];
            head += 1;
            for nb in neighbours(idx) {
                if inside[nb] && label[nb] == usize::MAX {
                    label[nb] = id;
                    members.push(nb);
                }
            }
        }
        let lo = *members
            .iter()
            .min_by_key(|&&m| (gap(m), m))
            .expect("component is nonempty");
        let hi = *members
            .iter()
            .max_by_key(|&&m| (gap(m), std::cmp::Reverse(m)))
            .expect("component is nonempty");
        let route = lattice_route(lo, hi, &label, id, &neighbours);
        let (dmin, dmax) = (gap(lo), gap(hi));
        paths.push(CylinderPath {
            points: route
                .into_iter()
                .map(|m| TorusParam::new((m / n) as f64 / n as f64, (m % n) as f64 / n as f64))
                .collect(),
            spanning: dmin < 3 && dmax > n - 3,
            nodes: members.len(),
            gap_range: (dmin as f64 / n as f64, dmax as f64 / n as f64),
        });
    }
    Ok(paths)
}

/// Breadth-first shortest path between two nodes of one component.
fn lattice_route(
    from: usize,
    to: usize,
    label: &[usize],
    id: usize,
    neighbours: &impl Fn(usize) -> [usize; 4],
) -> Vec<usize> {
    let mut prev = std::collections::HashMap::new();
    prev.insert(from, from);
    let mut queue = VecDeque::from([from]);
    while let Some(idx) = queue.pop_front() {
        if idx == to {
            break;
        }
        for nb in neighbours(idx) {
            if label[nb] == id && !prev.contains_key(&nb) {
                prev.insert(nb, idx);
                queue.push_back(nb);
            }
        }
    }
    let mut route = vec![to];
    let mut cur = to;
    while cur != from {
        cur = prev[&cur];
        route.push(cur);
    }
    route.reverse();
    route
}

/// A pair of plane paths sampled at common indices; index `len / 2` plays `t = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeCandidate {
    pub e1: Vec<Point2>,
    pub e2: Vec<Point2>,
    pub source: CylinderPath,
}

impl EnvelopeCandidate {
    /// Builds a candidate from explicit samples, with an empty source path.
    pub fn from_parts(e1: Vec<Point2>, e2: Vec<Point2>) -> Result<Self, EnvelopeError> {
        if e1.len() != e2.len() {
            return Err(EnvelopeError::LengthMismatch(e1.len(), e2.len()));
        }
        if e1.is_empty() {
            return Err(EnvelopeError::TooFewSamples { got: 0, min: 1 });
        }
        Ok(Self {
            e1,
            e2,
            source: CylinderPath {
                points: Vec::new(),
                spanning: false,
                nodes: 0,
                gap_range: (0.0, 0.0),
            },
        })
    }

    /// Images `γ(u), γ(v)` of a traced path. With `push` each point moves
    /// along the outward normal by `min(|f(S1)|, |f(S2)|) / (2(1 + √2))`,
    /// small enough that the corners keep their sign.
    pub fn from_path(path: &CylinderPath, c: &ClosedCurve, f: &SignField, push: bool) -> Result<Self, EnvelopeError> {
        if path.points.is_empty() {
            return Err(EnvelopeError::TooFewSamples { got: 0, min: 1 });
        }
        let mut e1 = Vec::with_capacity(path.points.len());
        let mut e2 = Vec::with_capacity(path.points.len());
        for t in &path.points {
            let (mut a, mut b) = (c.point_at(t.u), c.point_at(t.v));
            if push {
                let (s1, s2) = square_corners(a, b);
                let eps = f.value(s1).abs().min(f.value(s2).abs()) / (2.0 * (1.0 + std::f64::consts::SQRT_2));
                a = a + c.outward_normal_at(t.u) * eps;
                b = b + c.outward_normal_at(t.v) * eps;
            }
            e1.push(a);
            e2.push(b);
        }
        Ok(Self {
            e1,
            e2,
            source: path.clone(),
        })
    }

    pub fn len(&self) -> usize {
        self.e1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.e1.is_empty()
    }

    /// Sample index standing for `t = 0`.
    pub fn zero_index(&self) -> usize {
        self.e1.len() / 2
    }

    /// Largest truncation `λ` such that indices `zero ± λ` both exist.
    pub fn max_truncation(&self) -> usize {
        let z = self.zero_index();
        z.min(self.len() - 1 - z)
    }

    /// Largest truncation available in one direction.
    pub fn max_truncation_toward(&self, dir: Direction) -> usize {
        match dir {
            Direction::Plus => self.len() - 1 - self.zero_index(),
            Direction::Minus => self.zero_index(),
        }
    }

    fn at(&self, dir: Direction, lambda: usize) -> usize {
        match dir {
            Direction::Plus => self.zero_index() + lambda,
            Direction::Minus => self.zero_index() - lambda,
        }
    }

    fn extent(&self) -> f64 {
        let pts: Vec<Point2> = self.e1.iter().chain(&self.e2).copied().collect();
        let (lo, hi) = crate::curve::bounds_of(&pts);
        (hi - lo).norm()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Corner {
    S1,
    S2,
}

/// A σ value, or `Undetermined` when the tail of `(-1)^{n(λ)}` oscillates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sigma {
    #[serde(rename = "+1")]
    Plus,
    #[serde(rename = "-1")]
    Minus,
    #[serde(rename = "undetermined")]
    Undetermined,
}

impl Sigma {
    fn from_sign(s: i8) -> Self {
        if s > 0 {
            Sigma::Plus
        } else {
            Sigma::Minus
        }
    }

    pub fn value(self) -> Option<i8> {
        match self {
            Sigma::Plus => Some(1),
            Sigma::Minus => Some(-1),
            Sigma::Undetermined => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaSigns {
    pub s1_plus: Sigma,
    pub s1_minus: Sigma,
    pub s2_plus: Sigma,
    pub s2_minus: Sigma,
}

fn probe_corner(env: &EnvelopeCandidate, corner: Corner) -> Point2 {
    let z = env.zero_index();
    let (s1, s2) = square_corners(env.e1[z], env.e2[z]);
    match corner {
        Corner::S1 => s1,
        Corner::S2 => s2,
    }
}

/// The loop `P_λ`: `e1` from index `λ` back to the zero index, across to
/// `e2`, out along `e2` to index `λ`, and closed by a segment.
fn p_loop(env: &EnvelopeCandidate, dir: Direction, lambda: usize) -> Vec<Point2> {
    let z = env.zero_index();
    let end = env.at(dir, lambda);
    let mut pts = Vec::with_capacity(2 * lambda + 2);
    let forward: Vec<usize> = if end >= z { (z..=end).collect() } else { (end..=z).rev().collect() };
    pts.extend(forward.iter().rev().map(|&k| env.e1[k]));
    pts.extend(forward.iter().map(|&k| env.e2[k]));
    pts
}

/// `(-1)^{n(λ)}` where `n(λ)` is the winding number of `P_λ` around the
/// probe corner `S_p(e1(0), e2(0))`.
pub fn sigma_sign(env: &EnvelopeCandidate, corner: Corner, dir: Direction, lambda: usize) -> Result<i8, EnvelopeError> {
    let available = env.max_truncation_toward(dir);
    if lambda > available {
        return Err(EnvelopeError::TruncationOutOfRange { index: lambda, available });
    }
    let probe = probe_corner(env, corner);
    let tol = 1e-12 * env.extent().max(f64::MIN_POSITIVE);
    let n = winding_number(&p_loop(env, dir, lambda), probe, tol)?;
    Ok(if n.rem_euclid(2) == 0 { 1 } else { -1 })
}

/// Signs at the outermost truncation indices of one direction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SigmaTail {
    /// `(λ, sign)` pairs in increasing `λ`.
    pub signs: Vec<(usize, i8)>,
    pub limit: Sigma,
}

/// Evaluates `sigma_sign` over the last `tail` truncation indices. The limit
/// is determined only when every inspected sign agrees.
pub fn sigma_tail(env: &EnvelopeCandidate, corner: Corner, dir: Direction, tail: usize) -> Result<SigmaTail, EnvelopeError> {
    let top = env.max_truncation_toward(dir);
    let first = (top + 1).saturating_sub(tail.max(1)).max(1.min(top));
    let signs = (first..=top)
        .map(|l| sigma_sign(env, corner, dir, l).map(|s| (l, s)))
        .collect::<Result<Vec<_>, _>>()?;
    let limit = match signs.first() {
        Some(&(_, s)) if signs.iter().all(|&(_, t)| t == s) => Sigma::from_sign(s),
        _ => Sigma::Undetermined,
    };
    Ok(SigmaTail { signs, limit })
}

pub fn sigma_signs(env: &EnvelopeCandidate, tail: usize) -> Result<SigmaSigns, EnvelopeError> {
    let get = |corner, dir| sigma_tail(env, corner, dir, tail).map(|t| t.limit);
    Ok(SigmaSigns {
        s1_plus: get(Corner::S1, Direction::Plus)?,
        s1_minus: get(Corner::S1, Direction::Minus)?,
        s2_plus: get(Corner::S2, Direction::Plus)?,
        s2_minus: get(Corner::S2, Direction::Minus)?,
    })
}

/// Pass/fail for one pointwise item, with the first offending index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ItemCheck {
    pub pass: bool,
    pub violations: usize,
    pub first_violation: Option<usize>,
}

impl ItemCheck {
    fn from_flags(ok: impl Iterator<Item = bool>) -> Self {
        let mut violations = 0;
        let mut first = None;
        for (k, good) in ok.enumerate() {
            if !good {
                violations += 1;
                first.get_or_insert(k);
            }
        }
        Self {
            pass: violations == 0,
            violations,
            first_violation: first,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosingCheck {
    pub pass: bool,
    pub gap_start: f64,
    pub gap_end: f64,
    pub threshold: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindingCheck {
    pub pass: bool,
    pub probe: Point2,
    pub probe_valid: bool,
    pub truncation: usize,
    pub winding: Option<i64>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeReport {
    pub samples: usize,
    pub outside: ItemCheck,
    pub corners_inside: ItemCheck,
    pub closing: ClosingCheck,
    pub winding: WindingCheck,
}

impl EnvelopeReport {
    pub fn all_pass(&self) -> bool {
        self.outside.pass && self.corners_inside.pass && self.closing.pass && self.winding.pass
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    /// Interior probe; defaults to the deepest interior point of a coarse raster.
    pub probe: Option<Point2>,
    /// Largest end gap `‖e2 − e1‖` accepted, relative to the curve diameter.
    pub closing_relative: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            probe: None,
            closing_relative: 1e-2,
        }
    }
}

/// Deepest point of a 64 × 64 raster over the curve's bounding box.
pub fn default_probe(c: &ClosedCurve, f: &SignField) -> Point2 {
    let (lo, hi) = c.bounds();
    let mut best = (f64::INFINITY, lo);
    for i in 0..64 {
        for j in 0..64 {
            let p = Point2::new(
                lo.x + (hi.x - lo.x) * (i as f64 + 0.5) / 64.0,
                lo.y + (hi.y - lo.y) * (j as f64 + 0.5) / 64.0,
            );
            let v = f.value(p);
            if v < best.0 {
                best = (v, p);
            }
        }
    }
    best.1
}

/// The loop `ℓ_λ`: `e1` over `[-λ, λ]`, across to `e2`, `e2` back over `[λ, -λ]`, closed.
fn ell_loop(env: &EnvelopeCandidate, lambda: usize) -> Vec<Point2> {
    let z = env.zero_index();
    let mut pts: Vec<Point2> = (z - lambda..=z + lambda).map(|k| env.e1[k]).collect();
    pts.extend((z - lambda..=z + lambda).rev().map(|k| env.e2[k]));
    pts
}

/// Checks the four defining conditions of a square envelope at every sample.
pub fn verify_envelope(env: &EnvelopeCandidate, c: &ClosedCurve, f: &SignField, opts: &VerifyOptions) -> EnvelopeReport {
    let outside = ItemCheck::from_flags(env.e1.iter().zip(&env.e2).map(|(a, b)| f.value(*a) > 0.0 && f.value(*b) > 0.0));
    let corners_inside = ItemCheck::from_flags(env.e1.iter().zip(&env.e2).map(|(a, b)| {
        let (s1, s2) = square_corners(*a, *b);
        f.value(s1) < 0.0 && f.value(s2) < 0.0
    }));

    let last = env.len() - 1;
    let threshold = opts.closing_relative * c.diameter();
    let gap_start = env.e1[0].dist(env.e2[0]);
    let gap_end = env.e1[last].dist(env.e2[last]);
    let closing = ClosingCheck {
        pass: gap_start <= threshold && gap_end <= threshold,
        gap_start,
        gap_end,
        threshold,
    };

    let probe = opts.probe.unwrap_or_else(|| default_probe(c, f));
    let probe_valid = f.value(probe) < 0.0;
    let truncation = env.max_truncation();
    let winding = if !probe_valid {
        WindingCheck {
            pass: false,
            probe,
            probe_valid,
            truncation,
            winding: None,
            note: Some("probe is not inside the curve".into()),
        }
    } else {
        match winding_number(&ell_loop(env, truncation), probe, 1e-12 * c.diameter()) {
            Ok(w) => WindingCheck {
                pass: w == 1,
                probe,
                probe_valid,
                truncation,
                winding: Some(w),
                note: None,
            },
            Err(e) => WindingCheck {
                pass: false,
                probe,
                probe_valid,
                truncation,
                winding: None,
                note: Some(e.to_string()),
            },
        }
    };

    EnvelopeReport {
        samples: env.len(),
        outside,
        corners_inside,
        closing,
        winding,
    }
}

/// Whether `e1` and `e2` close up towards one end of the samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterCheck {
    pub direction: Direction,
    pub pass: bool,
    /// `‖e2 − e1‖` over the inspected tail, innermost first.
    pub gaps: Vec<f64>,
    pub threshold: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lemma2Report {
    pub truncation_plus: usize,
    pub truncation_minus: usize,
    pub signs: SigmaSigns,
    pub plus_corners_agree: bool,
    pub minus_corners_agree: bool,
    pub directions_opposite: bool,
    pub clustering: Vec<ClusterCheck>,
}

impl Lemma2Report {
    pub fn all_pass(&self) -> bool {
        self.plus_corners_agree
            && self.minus_corners_agree
            && self.directions_opposite
            && self.clustering.iter().all(|c| c.pass)
    }
}

fn agree(a: Sigma, b: Sigma) -> bool {
    a != Sigma::Undetermined && a == b
}

/// Checks the sign relations between the four σ values and, in every
/// direction where σ is `-1`, that `e1` and `e2` converge to a common point:
/// the gap shrinks monotonically over the last `tail` samples and ends below
/// `cluster_relative` times the extent of the samples.
pub fn lemma2_check(env: &EnvelopeCandidate, tail: usize, cluster_relative: f64) -> Result<Lemma2Report, EnvelopeError> {
    let signs = sigma_signs(env, tail)?;
    let threshold = cluster_relative * env.extent();
    let mut clustering = Vec::new();
    for (dir, s1, s2) in [
        (Direction::Plus, signs.s1_plus, signs.s2_plus),
        (Direction::Minus, signs.s1_minus, signs.s2_minus),
    ] {
        if s1 != Sigma::Minus && s2 != Sigma::Minus {
            continue;
        }
        let top = env.max_truncation_toward(dir);
        let first = (top + 1).saturating_sub(tail.max(2));
        let gaps: Vec<f64> = (first..=top)
            .map(|l| {
                let k = env.at(dir, l);
                env.e1[k].dist(env.e2[k])
            })
            .collect();
        let shrinking = gaps.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12));
        let pass = shrinking && gaps.last().is_some_and(|&g| g <= threshold);
        clustering.push(ClusterCheck {
            direction: dir,
            pass,
            gaps,
            threshold,
        });
    }
    Ok(Lemma2Report {
        truncation_plus: env.max_truncation_toward(Direction::Plus),
        truncation_minus: env.max_truncation_toward(Direction::Minus),
        plus_corners_agree: agree(signs.s1_plus, signs.s2_plus),
        minus_corners_agree: agree(signs.s1_minus, signs.s2_minus),
        directions_opposite: signs.s1_plus != Sigma::Undetermined
            && signs.s1_minus != Sigma::Undetermined
            && signs.s1_plus != signs.s1_minus,
        signs,
        clustering,
    })
}

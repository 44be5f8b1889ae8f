//! Epitrochoid arcs `a e^{it} + b e^{iκt}`, their filled hulls and the
//! exponential equation they parameterize.
//!
//! With `α = α1 − α2`, `t = p(t1 − t0)` and `p(t2 − t0) = κt + s`, the equation
//!
//! ```text
//! e^{α1 + β1 p(t1−t0)} (1 + λ r1 e^{ip(t1−t0)}) = e^{α2 + β2 p(t2−t0)} (1 + λ r2 e^{ip(t2−t0)})
//! ```
//!
//! becomes `c(s) = λ (r1 e^{it} + b(s) e^{iκt})` with
//! `b(s) = −r2 e^{−α + (β2 + i)s}` and `c(s) = e^{−α + β2 s} − 1`.

use std::collections::VecDeque;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Relative tolerance for `β1/β2` being a positive real.
pub const KAPPA_TOLERANCE: f64 = 1e-9;
/// Minimum trace samples for hull membership.
pub const MIN_HULL_SAMPLES: usize = 256;
/// Raster resolution used for hull membership.
pub const HULL_RASTER: usize = 512;
pub const DEFAULT_SOLVER_GRID: usize = 512;
const REFINE_ROUNDS: usize = 3;
const REFINE_CANDIDATES: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrochoidError {
    #[error("β1/β2 = {0} is not a positive real")]
    KappaNotPositiveReal(Complex64),
    #[error("p must be nonzero and finite, got {0}")]
    InvalidP(f64),
    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("t-interval is empty (endpoints {0} and {1})")]
    EmptyInterval(f64, f64),
    #[error("need at least {MIN_HULL_SAMPLES} trace samples, got {0}")]
    InsufficientSamples(usize),
    #[error("grid must be at least 2, got {0}")]
    GridTooSmall(usize),
}

/// Parameters of the exponential equation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrochoidInstance {
    pub alpha1: Complex64,
    pub alpha2: Complex64,
    pub beta1: Complex64,
    pub beta2: Complex64,
    pub t0: f64,
    pub p: f64,
    pub lambda: f64,
    pub r1: f64,
    pub r2: f64,
}

impl TrochoidInstance {
    pub fn validate(&self) -> Result<(), TrochoidError> {
        self.kappa()?;
        if !(self.p != 0.0 && self.p.is_finite()) {
            return Err(TrochoidError::InvalidP(self.p));
        }
        if !(0.0..=1.0).contains(&self.lambda) {
            return Err(TrochoidError::OutOfRange {
                name: "lambda",
                value: self.lambda,
                range: "[0, 1]",
            });
        }
        for (name, value) in [("r1", self.r1), ("r2", self.r2)] {
            if !(0.0..1.0).contains(&value) {
                return Err(TrochoidError::OutOfRange {
                    name,
                    value,
                    range: "[0, 1)",
                });
            }
        }
        Ok(())
    }

    /// `κ = β1/β2`, required to be a positive real.
    pub fn kappa(&self) -> Result<f64, TrochoidError> {
        let k = self.beta1 / self.beta2;
        if k.re.is_finite() && k.re > 0.0 && k.im.abs() <= KAPPA_TOLERANCE * k.re {
            Ok(k.re)
        } else {
            Err(TrochoidError::KappaNotPositiveReal(k))
        }
    }

    pub fn with_lambda(&self, lambda: f64) -> Self {
        Self { lambda, ..*self }
    }

    /// The two sides of the equation at `(t1, t2)`.
    pub fn sides(&self, t1: f64, t2: f64) -> (Complex64, Complex64) {
        let side = |alpha: Complex64, beta: Complex64, r: f64, t: f64| {
            let x = self.p * (t - self.t0);
            (alpha + beta * x).exp() * (1.0 + self.lambda * r * (I * x).exp())
        };
        (
            side(self.alpha1, self.beta1, self.r1, t1),
            side(self.alpha2, self.beta2, self.r2, t2),
        )
    }

    /// `|L − R| / max(|L|, |R|)`; zero when both sides vanish.
    pub fn relative_residual(&self, t1: f64, t2: f64) -> f64 {
        let (l, r) = self.sides(t1, t2);
        let scale = l.norm().max(r.norm());
        if scale == 0.0 {
            0.0
        } else if !scale.is_finite() {
            f64::INFINITY
        } else {
            (l - r).norm() / scale
        }
    }

    /// `c(s) = e^{−α + β2 s} − 1`.
    pub fn c_of(&self, s: f64) -> Complex64 {
        (-(self.alpha1 - self.alpha2) + self.beta2 * s).exp() - 1.0
    }
}

/// A half-line of real numbers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", content = "endpoint")]
pub enum HalfLine {
    /// `[z, ∞)`
    AtLeast(f64),
    /// `(−∞, z]`
    AtMost(f64),
}

impl HalfLine {
    pub fn contains(&self, t: f64) -> bool {
        match *self {
            HalfLine::AtLeast(z) => t >= z,
            HalfLine::AtMost(z) => t <= z,
        }
    }

    pub fn endpoint(&self) -> f64 {
        match *self {
            HalfLine::AtLeast(z) | HalfLine::AtMost(z) => z,
        }
    }

    /// `+1` if unbounded above, `−1` if unbounded below.
    pub fn direction(&self) -> f64 {
        match self {
            HalfLine::AtLeast(_) => 1.0,
            HalfLine::AtMost(_) => -1.0,
        }
    }
}

/// Values `t = p(t1 − t0)` for which some `t1, t2 ≥ 0` give `p(t2 − t0) = κt + s`.
///
/// Both constraints are half-lines pointing the way `p` does, so the
/// intersection is the one with the further endpoint.
pub fn t_interval(s: f64, inst: &TrochoidInstance) -> Result<HalfLine, TrochoidError> {
    if !(inst.p != 0.0 && inst.p.is_finite()) {
        return Err(TrochoidError::InvalidP(inst.p));
    }
    let kappa = inst.kappa()?;
    let from_t1 = -inst.p * inst.t0;
    let from_t2 = (-inst.p * inst.t0 - s) / kappa;
    if !(from_t1.is_finite() && from_t2.is_finite()) {
        return Err(TrochoidError::EmptyInterval(from_t1, from_t2));
    }
    Ok(if inst.p > 0.0 {
        HalfLine::AtLeast(from_t1.max(from_t2))
    } else {
        HalfLine::AtMost(from_t1.min(from_t2))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrochoidArc {
    pub a: f64,
    pub b: Complex64,
    pub kappa: f64,
    pub t_interval: HalfLine,
}

impl TrochoidArc {
    /// The arc attached to `inst` at shift `s`.
    pub fn for_instance(inst: &TrochoidInstance, s: f64) -> Result<Self, TrochoidError> {
        let kappa = inst.kappa()?;
        let alpha = inst.alpha1 - inst.alpha2;
        Ok(Self {
            a: inst.r1,
            b: -inst.r2 * (-alpha + (inst.beta2 + I) * s).exp(),
            kappa,
            t_interval: t_interval(s, inst)?,
        })
    }

    /// Radius of the disk containing the whole trace.
    pub fn outer_radius(&self) -> f64 {
        self.a.abs() + self.b.norm()
    }

    /// Length of `t` the hull trace covers: two turns of the slower rotation.
    pub fn trace_span(&self) -> f64 {
        2.0 * TAU / self.kappa.min(1.0)
    }
}

/// `a e^{it} + b e^{iκt}`. Callers should keep `t` inside `arc.t_interval`.
pub fn trochoid_point(arc: &TrochoidArc, t: f64) -> Complex64 {
    arc.a * (I * t).exp() + arc.b * (I * arc.kappa * t).exp()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    Inside,
    Outside,
    /// Within a raster cell of the boundary.
    Inconclusive,
}

/// A planar region that answers membership queries.
pub trait Region {
    fn membership(&self, z: Complex64) -> Membership;
    /// Every member lies within this distance of the origin.
    fn radius(&self) -> f64;
}

/// Raster of the smallest simply connected set containing a sampled trace.
///
/// The trace is joined to the origin at both ends, drawn onto a square
/// raster covering the bounding disk, and everything the outside cannot
/// reach by a 4-connected flood counts as filled.
#[derive(Clone, Debug)]
pub struct HullRaster {
    radius: f64,
    cell: f64,
    n: usize,
    filled: Vec<bool>,
}

impl HullRaster {
    pub fn from_trace(trace: &[Complex64], n: usize) -> Self {
        let radius = trace.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        // one spare cell around the disk so the flood starts outside it
        let cell = 2.0 * radius / (n - 2) as f64;
        let origin = -radius - cell;
        let mut wall = vec![false; n * n];
        let idx = |z: Complex64| {
            let i = (((z.re - origin) / cell).floor() as isize).clamp(0, n as isize - 1) as usize;
            let j = (((z.im - origin) / cell).floor() as isize).clamp(0, n as isize - 1) as usize;
            j * n + i
        };
        let mut draw = |a: Complex64, b: Complex64| {
            let steps = ((b - a).norm() / (0.25 * cell)).ceil().max(1.0) as usize;
            for k in 0..=steps {
                wall[idx(a + (b - a) * (k as f64 / steps as f64))] = true;
            }
        };
        let zero = Complex64::new(0.0, 0.0);
        if let (Some(&first), Some(&last)) = (trace.first(), trace.last()) {
            draw(zero, first);
            draw(last, zero);
        }
        for w in trace.windows(2) {
            draw(w[0], w[1]);
        }

        let mut outside = vec![false; n * n];
        let mut queue = VecDeque::from([0usize]);
        outside[0] = true;
        while let Some(k) = queue.pop_front() {
            let (i, j) = (k % n, k / n);
            let mut visit = |ni: usize, nj: usize| {
                let m = nj * n + ni;
                if !wall[m] && !outside[m] {
                    outside[m] = true;
                    queue.push_back(m);
                }
            };
            if i > 0 {
                visit(i - 1, j);
            }
            if i + 1 < n {
                visit(i + 1, j);
            }
            if j > 0 {
                visit(i, j - 1);
            }
            if j + 1 < n {
                visit(i, j + 1);
            }
        }
        Self {
            radius,
            cell,
            n,
            filled: outside.iter().map(|o| !o).collect(),
        }
    }

    pub fn cell_size(&self) -> f64 {
        self.cell
    }
}

impl Region for HullRaster {
    fn membership(&self, z: Complex64) -> Membership {
        if z.norm() > self.radius * (1.0 + 1e-12) {
            return Membership::Outside;
        }
        let origin = -self.radius - self.cell;
        let i = ((z.re - origin) / self.cell).floor() as isize;
        let j = ((z.im - origin) / self.cell).floor() as isize;
        let (mut any_in, mut any_out) = (false, false);
        for dj in -1..=1 {
            for di in -1..=1 {
                let (ci, cj) = (i + di, j + dj);
                let filled = ci >= 0
                    && cj >= 0
                    && (ci as usize) < self.n
                    && (cj as usize) < self.n
                    && self.filled[cj as usize * self.n + ci as usize];
                if filled {
                    any_in = true;
                } else {
                    any_out = true;
                }
            }
        }
        match (any_in, any_out) {
            (true, false) => Membership::Inside,
            (false, _) => Membership::Outside,
            (true, true) => Membership::Inconclusive,
        }
    }

    fn radius(&self) -> f64 {
        self.radius
    }
}

/// Samples the arc over [`TrochoidArc::trace_span`] from the interval's endpoint.
pub fn arc_trace(arc: &TrochoidArc, samples: usize) -> Result<Vec<Complex64>, TrochoidError> {
    if samples < MIN_HULL_SAMPLES {
        return Err(TrochoidError::InsufficientSamples(samples));
    }
    let start = arc.t_interval.endpoint();
    let span = arc.trace_span() * arc.t_interval.direction();
    Ok((0..samples)
        .map(|k| trochoid_point(arc, start + span * k as f64 / (samples - 1) as f64))
        .collect())
}

pub fn hull_raster(arc: &TrochoidArc, samples: usize) -> Result<HullRaster, TrochoidError> {
    Ok(HullRaster::from_trace(&arc_trace(arc, samples)?, HULL_RASTER))
}

/// Three-way membership of `z` in the hull `H` of the arc.
pub fn hull_membership(z: Complex64, arc: &TrochoidArc, samples: usize) -> Result<Membership, TrochoidError> {
    if z.norm() > arc.outer_radius() {
        return Ok(Membership::Outside);
    }
    Ok(hull_raster(arc, samples)?.membership(z))
}

/// Membership in `H`; points within a raster cell of the boundary count as members.
pub fn in_hull_h(z: Complex64, arc: &TrochoidArc, samples: usize) -> Result<bool, TrochoidError> {
    Ok(hull_membership(z, arc, samples)? != Membership::Outside)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialReport {
    pub pass: bool,
    pub rays: usize,
    pub steps: usize,
    pub members_checked: usize,
    pub inconclusive: usize,
    /// `(z, λz)` with `z` inside and `λz` outside.
    pub violations: Vec<(Complex64, Complex64)>,
}

/// Checks `z ∈ R ⇒ λz ∈ R` along `rays` directions, with `steps` radii
/// per ray and `steps` values of `λ ∈ [0, 1]` per member.
pub fn radial_check_region(region: &dyn Region, rays: usize, steps: usize) -> RadialReport {
    let r = region.radius();
    let mut report = RadialReport {
        pass: true,
        rays,
        steps,
        members_checked: 0,
        inconclusive: 0,
        violations: Vec::new(),
    };
    for k in 0..rays {
        let dir = (I * (TAU * k as f64 / rays as f64)).exp();
        for m in 1..=steps {
            let z = dir * (r * m as f64 / steps as f64);
            match region.membership(z) {
                Membership::Inside => {}
                Membership::Inconclusive => {
                    report.inconclusive += 1;
                    continue;
                }
                Membership::Outside => continue,
            }
            report.members_checked += 1;
            for j in 0..steps {
                let w = z * (j as f64 / steps as f64);
                if region.membership(w) == Membership::Outside {
                    report.violations.push((z, w));
                }
            }
        }
    }
    report.pass = report.violations.is_empty();
    report
}

pub fn radial_property_check(arc: &TrochoidArc, rays: usize, steps: usize, samples: usize) -> Result<RadialReport, TrochoidError> {
    Ok(radial_check_region(&hull_raster(arc, samples)?, rays, steps))
}

/// Verdict of the bounded search for `(t1, t2)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveVerdict {
    pub found: bool,
    pub witness: Option<(f64, f64)>,
    /// Smallest relative residual reached, whether or not below `tol`.
    pub residual: f64,
    pub best: (f64, f64),
    pub t_max: f64,
    pub grid: usize,
    pub tol: f64,
}

/// Brute grid over `[0, t_max]²`, then three rounds of 10× finer local grids
/// around the best cells and a final Newton polish.
pub fn exists_solution(inst: &TrochoidInstance, t_max: f64, grid: usize, tol: f64) -> Result<SolveVerdict, TrochoidError> {
    inst.validate()?;
    if grid < 2 {
        return Err(TrochoidError::GridTooSmall(grid));
    }
    let h = t_max / grid as f64;
    let node = |k: usize| t_max * k as f64 / grid as f64;

    // per row best few nodes, reduced deterministically
    let mut cands: Vec<(f64, usize, usize)> = (0..=grid)
        .into_par_iter()
        .flat_map_iter(|i| {
            let t1 = node(i);
            let mut row: Vec<(f64, usize, usize)> = (0..=grid).map(|j| (inst.relative_residual(t1, node(j)), i, j)).collect();
            row.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.2.cmp(&b.2)));
            row.truncate(REFINE_CANDIDATES);
            row
        })
        .collect();
    cands.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));
    cands.truncate(REFINE_CANDIDATES);

    let mut points: Vec<(f64, f64, f64)> = cands.iter().map(|&(r, i, j)| (r, node(i), node(j))).collect();
    let mut step = h;
    for _ in 0..REFINE_ROUNDS {
        let fine = step / 10.0;
        let mut next: Vec<(f64, f64, f64)> = Vec::new();
        for &(_, c1, c2) in &points {
            for di in -10i32..=10 {
                for dj in -10i32..=10 {
                    let t1 = (c1 + di as f64 * fine).clamp(0.0, t_max);
                    let t2 = (c2 + dj as f64 * fine).clamp(0.0, t_max);
                    next.push((inst.relative_residual(t1, t2), t1, t2));
                }
            }
        }
        next.extend(points.iter().copied());
        next.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.total_cmp(&b.2)));
        next.dedup_by(|a, b| a.1 == b.1 && a.2 == b.2);
        next.truncate(REFINE_CANDIDATES);
        points = next;
        step = fine;
    }

    let mut best = points[0];
    for &(_, t1, t2) in &points {
        let polished = polish(inst, t1, t2, t_max);
        if polished.0 < best.0 {
            best = polished;
        }
    }
    let found = best.0 < tol;
    Ok(SolveVerdict {
        found,
        witness: found.then_some((best.1, best.2)),
        residual: best.0,
        best: (best.1, best.2),
        t_max,
        grid,
        tol,
    })
}

/// Damped Newton on `L − R = 0`, confined to `[0, t_max]²`.
fn polish(inst: &TrochoidInstance, t1: f64, t2: f64, t_max: f64) -> (f64, f64, f64) {
    let f = |a: f64, b: f64| {
        let (l, r) = inst.sides(a, b);
        let scale = l.norm().max(r.norm()).max(f64::MIN_POSITIVE);
        (l - r) / scale
    };
    let (mut a, mut b) = (t1, t2);
    let mut res = inst.relative_residual(a, b);
    let h = 1e-7;
    for _ in 0..30 {
        let g = f(a, b);
        let da = (f(a + h, b) - f(a - h, b)) / (2.0 * h);
        let db = (f(a, b + h) - f(a, b - h)) / (2.0 * h);
        // real 2×2 system [Re; Im]
        let det = da.re * db.im - db.re * da.im;
        if det.abs() < 1e-300 || !det.is_finite() {
            break;
        }
        let sa = -(g.re * db.im - db.re * g.im) / det;
        let sb = -(da.re * g.im - g.re * da.im) / det;
        let mut damp = 1.0;
        let mut improved = false;
        while damp > 1e-4 {
            let na = (a + damp * sa).clamp(0.0, t_max);
            let nb = (b + damp * sb).clamp(0.0, t_max);
            let nr = inst.relative_residual(na, nb);
            if nr < res {
                a = na;
                b = nb;
                res = nr;
                improved = true;
                break;
            }
            damp *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (res, a, b)
}

/// One rotation period of the equation's phase factors, `2π/|p|`.
pub fn period(inst: &TrochoidInstance) -> f64 {
    TAU / inst.p.abs()
}

/// Random instance with `|α| ≤ 2`, `κ ∈ [0.25, 4]`, `r ∈ [0, 0.9]`.
pub fn random_instance(rng: &mut impl rand::Rng) -> TrochoidInstance {
    let mut disk = || {
        let (r, th): (f64, f64) = (2.0 * rng.gen::<f64>().sqrt(), TAU * rng.gen::<f64>());
        Complex64::from_polar(r, th)
    };
    let alpha1 = disk();
    let alpha2 = disk();
    let beta2 = Complex64::new(rng.gen_range(-0.3..0.3), rng.gen_range(-1.0..1.0));
    let kappa = rng.gen_range(0.25..4.0);
    let p = rng.gen_range(0.5..2.0) * if rng.gen::<bool>() { 1.0 } else { -1.0 };
    TrochoidInstance {
        alpha1,
        alpha2,
        beta1: beta2 * kappa,
        beta2,
        t0: rng.gen_range(-2.0..2.0),
        p,
        lambda: rng.gen_range(0.0..1.0),
        r1: rng.gen_range(0.0..0.9),
        r2: rng.gen_range(0.0..0.9),
    }
}

/// Solvability at `inst.lambda` and at `λ = 1` over the same window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityCheck {
    pub lambda: f64,
    pub at_lambda: SolveVerdict,
    pub at_one: SolveVerdict,
    /// `λ`-solvable implies `1`-solvable.
    pub holds: bool,
}

pub fn monotonicity_check(inst: &TrochoidInstance, t_max: f64, grid: usize, tol: f64) -> Result<MonotonicityCheck, TrochoidError> {
    let at_lambda = exists_solution(inst, t_max, grid, tol)?;
    let at_one = exists_solution(&inst.with_lambda(1.0), t_max, grid, tol)?;
    Ok(MonotonicityCheck {
        lambda: inst.lambda,
        holds: !at_lambda.found || at_one.found,
        at_lambda,
        at_one,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn base_instance() -> TrochoidInstance {
        TrochoidInstance {
            alpha1: c(0.0, 0.0),
            alpha2: c(0.0, 0.0),
            beta1: c(1.0, 0.0),
            beta2: c(1.0, 0.0),
            t0: 0.0,
            p: 1.0,
            lambda: 0.7,
            r1: 0.5,
            r2: 0.5,
        }
    }

    fn arc(a: f64, b: Complex64, kappa: f64) -> TrochoidArc {
        TrochoidArc {
            a,
            b,
            kappa,
            t_interval: HalfLine::AtLeast(0.0),
        }
    }

    #[test]
    fn interval_examples() {
        let mut inst = base_instance();
        assert_eq!(t_interval(0.0, &inst), Ok(HalfLine::AtLeast(0.0)));
        inst.p = -1.0;
        assert_eq!(t_interval(0.0, &inst), Ok(HalfLine::AtMost(0.0)));
        inst.p = 1.0;
        inst.t0 = 2.0;
        inst.beta1 = c(2.0, 0.0);
        assert_eq!(t_interval(1.0, &inst), Ok(HalfLine::AtLeast(-1.5)));
    }

    /// Whether `t` is realized by grid values `t1, t2 ∈ {0, 0.01, …, 200}`.
    fn brute_feasible(inst: &TrochoidInstance, s: f64, t: f64) -> bool {
        let kappa = inst.kappa().unwrap();
        let on_grid = |target: f64| (0..=20_000).any(|k| (k as f64 * 0.01 - target).abs() <= 0.005);
        on_grid(t / inst.p + inst.t0) && on_grid((kappa * t + s) / inst.p + inst.t0)
    }

    #[test]
    fn interval_matches_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let inst = random_instance(&mut rng);
            let s = rand::Rng::gen_range(&mut rng, -3.0..3.0);
            let iv = t_interval(s, &inst).unwrap();
            let z = iv.endpoint();
            // probe on both sides of the endpoint, away from the grid's resolution
            for off in [-2.0, -0.5, 0.5, 2.0] {
                let t = z + off;
                assert_eq!(iv.contains(t), brute_feasible(&inst, s, t), "{inst:?} s={s} t={t}");
            }
        }
    }

    #[test]
    fn point_examples() {
        let a1 = arc(1.0, c(0.5, 0.0), 1.0);
        assert!((trochoid_point(&a1, 0.0) - c(1.5, 0.0)).norm() < 1e-15);
        assert!((trochoid_point(&a1, PI) - c(-1.5, 0.0)).norm() < 1e-15);
        let a2 = arc(1.0, c(0.0, 0.3), 2.0);
        assert!((trochoid_point(&a2, PI / 2.0) - c(0.0, 0.7)).norm() < 1e-15);
    }

    #[test]
    fn arc_matches_original_equation() {
        // L − R = e^{α1 + β1 t} (λ·arc(t) − c(s)) for every (t1, t2)
        let inst = TrochoidInstance {
            alpha1: c(0.3, -0.4),
            alpha2: c(-0.1, 0.2),
            beta1: c(0.2, 0.6),
            beta2: c(0.1, 0.3),
            t0: 0.5,
            p: 1.3,
            lambda: 0.6,
            r1: 0.4,
            r2: 0.7,
        };
        let kappa = inst.kappa().unwrap();
        for (t1, t2) in [(0.7, 1.9), (3.0, 0.2), (5.5, 4.4)] {
            let t = inst.p * (t1 - inst.t0);
            let s = inst.p * (t2 - inst.t0) - kappa * t;
            let arc = TrochoidArc::for_instance(&inst, s).unwrap();
            assert!(arc.t_interval.contains(t));
            let (l, r) = inst.sides(t1, t2);
            let predicted = (inst.alpha1 + inst.beta1 * t).exp() * (inst.lambda * trochoid_point(&arc, t) - inst.c_of(s));
            assert!(((l - r) - predicted).norm() < 1e-12 * l.norm().max(r.norm()), "{t1} {t2}");
        }
    }

    #[test]
    fn hull_examples() {
        let disk = arc(1.0, c(0.5, 0.0), 1.0);
        assert_eq!(in_hull_h(c(0.0, 0.0), &disk, 2048), Ok(true));
        assert_eq!(in_hull_h(c(1.4, 0.0), &disk, 2048), Ok(true));
        assert_eq!(in_hull_h(c(2.0, 0.0), &disk, 2048), Ok(false));
        let epi = arc(1.0, c(0.3, 0.0), 2.0);
        assert_eq!(hull_membership(c(0.0, 0.0), &epi, 4096), Ok(Membership::Inside));
        assert_eq!(in_hull_h(c(1.31, 0.0), &epi, 4096), Ok(false));
        assert_eq!(in_hull_h(c(0.5, 0.0), &disk, 16), Err(TrochoidError::InsufficientSamples(16)));
    }

    struct Annulus(f64, f64);

    impl Region for Annulus {
        fn membership(&self, z: Complex64) -> Membership {
            if (self.0..=self.1).contains(&z.norm()) {
                Membership::Inside
            } else {
                Membership::Outside
            }
        }
        fn radius(&self) -> f64 {
            self.1
        }
    }

    #[test]
    fn radial_examples() {
        let disk = arc(1.0, c(0.5, 0.0), 1.0);
        assert!(radial_property_check(&disk, 32, 40, 2048).unwrap().pass);
        let epi = arc(1.0, c(0.3, 0.0), 2.0);
        let r = radial_property_check(&epi, 32, 40, 4096).unwrap();
        assert!(r.pass, "{:?}", r.violations.first());
        assert!(r.members_checked > 0);
        assert!(!radial_check_region(&Annulus(0.5, 1.0), 16, 20).pass);
    }

    #[test]
    fn solver_examples() {
        let v = exists_solution(&base_instance(), 4.0 * TAU, 128, 1e-9).unwrap();
        assert!(v.found);
        let (t1, t2) = v.witness.unwrap();
        let (l, r) = base_instance().sides(t1, t2);
        assert!((l - r).norm() < 1e-8 * l.norm());
        let (l0, _) = base_instance().sides(0.0, 0.0);
        assert!((l0 - c(1.35, 0.0)).norm() < 1e-15);

        let far = TrochoidInstance {
            alpha2: c(10.0, 0.0),
            ..base_instance()
        };
        let v = exists_solution(&far, 3.0, 128, 1e-9).unwrap();
        assert!(!v.found);
        assert!(v.residual > 0.5);
    }

    #[test]
    fn validation_rejects_bad_instances() {
        let mut inst = base_instance();
        inst.beta1 = c(0.0, 1.0);
        assert!(matches!(inst.validate(), Err(TrochoidError::KappaNotPositiveReal(_))));
        let mut inst = base_instance();
        inst.r1 = 1.0;
        assert!(inst.validate().is_err());
        let mut inst = base_instance();
        inst.p = 0.0;
        assert!(inst.validate().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn trace_stays_in_annulus(a in 0.0..2.0f64, br in -2.0..2.0f64, bi in -2.0..2.0f64, kappa in 0.1..5.0f64, t in -50.0..50.0f64) {
                let arc = arc(a, c(br, bi), kappa);
                let z = trochoid_point(&arc, t).norm();
                let (ra, rb) = (a, c(br, bi).norm());
                prop_assert!(z <= ra + rb + 1e-12);
                prop_assert!(z >= (ra - rb).abs() - 1e-12);
            }
        }
    }
}

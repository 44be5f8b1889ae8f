//! Inscribed squares as zeros of the torus map
//! `g(u, v) = (f(S1(γ(u), γ(v))), f(S2(γ(u), γ(v))))`.
//!
//! The diagonal `u = v` is a continuum of trivial zeros. Every other zero is
//! one side `(a, b)` of an inscribed square whose remaining corners `S2, S1`
//! lie on the curve, so a generic square shows up as four zeros. The search
//! scans a `grid × grid` lattice on the torus, refines every cell in which
//! both coordinates change sign, and groups the refined zeros by the square
//! they span.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::ClosedCurve;
use crate::field::SignField;
use crate::geometry::{dist_mod1, square_corners, wrap01, Point2};

pub const DEFAULT_GRID: usize = 512;
pub const DEFAULT_TOL: f64 = 1e-8;
pub const MIN_GRID: usize = 64;
/// Central-difference step (in curve parameter units) for the Jacobian of `g`.
pub const FD_STEP: f64 = 1e-6;
/// Relative spatial tolerance (× diameter) for deciding two zeros span the same square.
pub const GROUPING_RELATIVE_TOLERANCE: f64 = 1e-6;

const MAX_ITERATIONS: usize = 60;
const MAX_SUBDIVISION_DEPTH: u32 = 5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SquareError {
    #[error("grid {0} is below the minimum of {MIN_GRID}")]
    GridTooSmall(usize),
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("refined zeros form a curve ({chain} linked zeros out of {zeros}); the curve has a continuum of squares")]
    ContinuumSuspected { chain: usize, zeros: usize },
    #[error("corner parameters {0} and {1} coincide")]
    DegenerateParams(usize, usize),
    #[error("parameters ({u}, {v}) lie on the diagonal or anti-diagonal")]
    OnBoundary { u: f64, v: f64 },
    #[error("not a permutation of a, b, c, d starting at a: {0:?}")]
    InvalidPermutation(Vec<usize>),
}

/// A point `(u, v)` of the torus `S¹ × S¹`, both coordinates in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusParam {
    pub u: f64,
    pub v: f64,
}

impl TorusParam {
    pub fn new(u: f64, v: f64) -> Self {
        Self {
            u: wrap01(u),
            v: wrap01(v),
        }
    }

    /// Distance from the diagonal, `dist_mod1(u, v)`.
    pub fn diagonal_distance(&self) -> f64 {
        dist_mod1(self.u, self.v)
    }

    /// `(v - u) mod 1`: how far the second point runs ahead of the first.
    pub fn gap(&self) -> f64 {
        wrap01(self.v - self.u)
    }

    /// Geodesic distance on the flat torus.
    pub fn torus_distance(&self, other: &TorusParam) -> f64 {
        dist_mod1(self.u, other.u).hypot(dist_mod1(self.v, other.v))
    }
}

/// Gracing (I), interleaved (II) and reversed (III) inscribed squares.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SquareType {
    I,
    II,
    III,
}

impl std::fmt::Display for SquareType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SquareType::I => "I",
            SquareType::II => "II",
            SquareType::III => "III",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeCounts {
    #[serde(rename = "I")]
    pub count_i: usize,
    #[serde(rename = "II")]
    pub count_ii: usize,
    #[serde(rename = "III")]
    pub count_iii: usize,
}

impl TypeCounts {
    pub fn add(&mut self, t: SquareType) {
        match t {
            SquareType::I => self.count_i += 1,
            SquareType::II => self.count_ii += 1,
            SquareType::III => self.count_iii += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.count_i + self.count_ii + self.count_iii
    }

    /// Type I odd, types II and III even.
    pub fn parity_holds(&self) -> bool {
        self.count_i % 2 == 1 && self.count_ii.is_multiple_of(2) && self.count_iii.is_multiple_of(2)
    }
}

/// A refined off-diagonal zero of `g`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusZero {
    pub param: TorusParam,
    /// `max(|g1|, |g2|)` at `param`.
    pub residual: f64,
    /// Smallest singular value of the finite-difference Jacobian; near zero
    /// means the zero is not transverse.
    pub min_singular_value: f64,
}

/// An inscribed square together with the zeros of `g` that produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SquareCandidate {
    /// Curve parameters of `vertices`, index for index.
    pub corner_params: [f64; 4],
    /// Counterclockwise, starting at the vertex with the smallest parameter.
    pub vertices: [Point2; 4],
    pub residual: f64,
    pub side_zeros: Vec<TorusZero>,
}

impl SquareCandidate {
    pub fn side_length(&self) -> f64 {
        self.vertices[0].dist(self.vertices[1])
    }
}

/// A cell where refinement did not reach the tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefinementFailure {
    pub cell: (usize, usize),
    pub best: TorusParam,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub grid: usize,
    pub tol: f64,
    pub candidate_cells: usize,
    /// Distinct off-diagonal zeros, sorted by `(u, v)`.
    pub zeros: Vec<TorusZero>,
    pub squares: Vec<SquareCandidate>,
    pub failures: Vec<RefinementFailure>,
}

impl SearchOutcome {
    /// Number of zeros with `(v - u) mod 1 < 1/2`.
    pub fn zeros_in_region_a(&self) -> usize {
        self.zeros
            .iter()
            .filter(|z| in_region_a(z.param).unwrap_or(false))
            .count()
    }
}

/// Evaluates `g` at `t`.
#[inline]
pub fn g_map(c: &ClosedCurve, f: &SignField, t: TorusParam) -> (f64, f64) {
    g_at(c, f, t.u, t.v)
}

#[inline]
fn g_at(c: &ClosedCurve, f: &SignField, u: f64, v: f64) -> (f64, f64) {
    g_points(f, c.point_at(u), c.point_at(v))
}

#[inline]
fn g_points(f: &SignField, a: Point2, b: Point2) -> (f64, f64) {
    let (s1, s2) = square_corners(a, b);
    (f.value(s1), f.value(s2))
}

/// Values of `g` on the `n × n` lattice `(i/n, j/n)`, row-major in `i`.
pub(crate) fn lattice_values(c: &ClosedCurve, f: &SignField, n: usize) -> Vec<(f64, f64)> {
    let pts: Vec<Point2> = (0..n).map(|i| c.point_at(i as f64 / n as f64)).collect();
    (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let a = pts[i];
            let pts = &pts;
            (0..n).map(move |j| g_points(f, a, pts[j]))
        })
        .collect()
}

/// Central-difference Jacobian `[[∂g1/∂u, ∂g1/∂v], [∂g2/∂u, ∂g2/∂v]]`.
fn jacobian(c: &ClosedCurve, f: &SignField, u: f64, v: f64) -> [[f64; 2]; 2] {
    let h = FD_STEP;
    let (a1, a2) = g_at(c, f, u + h, v);
    let (b1, b2) = g_at(c, f, u - h, v);
    let (c1, c2) = g_at(c, f, u, v + h);
    let (d1, d2) = g_at(c, f, u, v - h);
    let s = 0.5 / h;
    [[(a1 - b1) * s, (c1 - d1) * s], [(a2 - b2) * s, (c2 - d2) * s]]
}

fn min_singular_value(j: [[f64; 2]; 2]) -> f64 {
    // eigenvalues of JᵀJ
    let a = j[0][0] * j[0][0] + j[1][0] * j[1][0];
    let b = j[0][0] * j[0][1] + j[1][0] * j[1][1];
    let d = j[0][1] * j[0][1] + j[1][1] * j[1][1];
    let tr = a + d;
    let det = a * d - b * b;
    let disc = (0.25 * tr * tr - det).max(0.0).sqrt();
    (0.5 * tr - disc).max(0.0).sqrt()
}

#[inline]
fn residual_of(g: (f64, f64)) -> f64 {
    g.0.abs().max(g.1.abs())
}

/// Damped Newton (Levenberg–Marquardt) from `start`, steps capped at `max_step`.
///
/// The damping keeps the iteration well-defined where the Jacobian is rank
/// deficient, which is exactly what happens along a continuum of zeros.
fn refine(
    c: &ClosedCurve,
    f: &SignField,
    start: (f64, f64),
    tol: f64,
    max_step: f64,
) -> Result<TorusZero, (TorusParam, f64)> {
    let (mut u, mut v) = start;
    let mut g = g_at(c, f, u, v);
    let mut res = residual_of(g);
    let mut mu = 1e-9;
    for _ in 0..MAX_ITERATIONS {
        if res < tol {
            break;
        }
        let j = jacobian(c, f, u, v);
        let a = j[0][0] * j[0][0] + j[1][0] * j[1][0];
        let b = j[0][0] * j[0][1] + j[1][0] * j[1][1];
        let d = j[0][1] * j[0][1] + j[1][1] * j[1][1];
        let r0 = -(j[0][0] * g.0 + j[1][0] * g.1);
        let r1 = -(j[0][1] * g.0 + j[1][1] * g.1);
        let scale = (a + d).max(f64::MIN_POSITIVE);
        let mut accepted = false;
        while mu < 1e6 {
            let (aa, dd) = (a + mu * scale, d + mu * scale);
            let det = aa * dd - b * b;
            if det.abs() > 0.0 && det.is_finite() {
                let mut du = (dd * r0 - b * r1) / det;
                let mut dv = (aa * r1 - b * r0) / det;
                let len = du.hypot(dv);
                if len > max_step {
                    du *= max_step / len;
                    dv *= max_step / len;
                }
                let g_new = g_at(c, f, u + du, v + dv);
                let res_new = residual_of(g_new);
                if res_new < res {
                    u += du;
                    v += dv;
                    g = g_new;
                    res = res_new;
                    mu = (mu * 0.1).max(1e-12);
                    accepted = true;
                    break;
                }
            }
            mu *= 10.0;
        }
        if !accepted {
            break;
        }
    }
    let param = TorusParam::new(u, v);
    if res < tol {
        Ok(TorusZero {
            param,
            residual: res,
            min_singular_value: min_singular_value(jacobian(c, f, param.u, param.v)),
        })
    } else {
        Err((param, res))
    }
}

#[inline]
fn brackets_zero(vals: &[(f64, f64); 4]) -> bool {
    let (mut lo1, mut hi1, mut lo2, mut hi2) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(a, b) in vals {
        lo1 = lo1.min(a);
        hi1 = hi1.max(a);
        lo2 = lo2.min(b);
        hi2 = hi2.max(b);
    }
    lo1 <= 0.0 && hi1 >= 0.0 && lo2 <= 0.0 && hi2 >= 0.0
}

/// Newton from the centre of `[u0, u0+h] × [v0, v0+h]`, falling back to
/// recursive quartering of the cell when the iteration stalls.
fn refine_cell(
    c: &ClosedCurve,
    f: &SignField,
    u0: f64,
    v0: f64,
    h: f64,
    tol: f64,
    depth: u32,
) -> Result<TorusZero, (TorusParam, f64)> {
    let first = refine(c, f, (u0 + 0.5 * h, v0 + 0.5 * h), tol, 4.0 * h);
    let mut best = match first {
        Ok(z) => return Ok(z),
        Err(e) => e,
    };
    if depth >= MAX_SUBDIVISION_DEPTH {
        return Err(best);
    }
    let half = 0.5 * h;
    for (du, dv) in [(0.0, 0.0), (half, 0.0), (0.0, half), (half, half)] {
        let (su, sv) = (u0 + du, v0 + dv);
        let corners = [
            g_at(c, f, su, sv),
            g_at(c, f, su + half, sv),
            g_at(c, f, su, sv + half),
            g_at(c, f, su + half, sv + half),
        ];
        if !brackets_zero(&corners) {
            continue;
        }
        match refine_cell(c, f, su, sv, half, tol, depth + 1) {
            Ok(z) => return Ok(z),
            Err(e) if e.1 < best.1 => best = e,
            Err(_) => {}
        }
    }
    Err(best)
}

/// Winding number of `g` around the origin along the boundary of a cell.
/// Returns `i64::MAX` when `g` vanishes on the boundary.
fn cell_degree(c: &ClosedCurve, f: &SignField, u0: f64, v0: f64, h: f64) -> i64 {
    const PER_EDGE: usize = 16;
    let corners = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
    let mut pts = Vec::with_capacity(4 * PER_EDGE);
    for k in 0..4 {
        let (a, b) = (corners[k], corners[(k + 1) % 4]);
        for s in 0..PER_EDGE {
            let t = s as f64 / PER_EDGE as f64;
            let (du, dv) = (a.0 + (b.0 - a.0) * t, a.1 + (b.1 - a.1) * t);
            let (g1, g2) = g_at(c, f, u0 + du * h, v0 + dv * h);
            pts.push(Point2::new(g1, g2));
        }
    }
    crate::geometry::winding_number(&pts, Point2::ORIGIN, 0.0).unwrap_or(i64::MAX)
}

fn find_root(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find_root(parent, a), find_root(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

/// Largest set of zeros linked by hops shorter than `link`.
fn longest_chain(zeros: &[TorusZero], link: f64) -> usize {
    let mut parent: Vec<usize> = (0..zeros.len()).collect();
    for i in 0..zeros.len() {
        for j in i + 1..zeros.len() {
            if zeros[i].param.torus_distance(&zeros[j].param) < link {
                union(&mut parent, i, j);
            }
        }
    }
    let mut sizes = vec![0usize; zeros.len()];
    for i in 0..zeros.len() {
        let r = find_root(&mut parent, i);
        sizes[r] += 1;
    }
    sizes.into_iter().max().unwrap_or(0)
}

/// Locates, refines and groups the inscribed squares of `c`.
///
/// Cells within two lattice steps of the diagonal are skipped, so squares
/// whose vertices are closer than that in parameter are not found.
/// Refinement failures are returned in the outcome rather than aborting.
pub fn find_inscribed_squares(
    c: &ClosedCurve,
    f: &SignField,
    grid: usize,
    tol: f64,
) -> Result<SearchOutcome, SquareError> {
    if grid < MIN_GRID {
        return Err(SquareError::GridTooSmall(grid));
    }
    if !(tol > 0.0) {
        return Err(SquareError::InvalidTolerance(tol));
    }
    let n = grid;
    let h = 1.0 / n as f64;
    let values = lattice_values(c, f, n);
    let at = |i: usize, j: usize| values[(i % n) * n + (j % n)];

    let cells: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| {
            let d = (j + n - i) % n;
            d.min(n - d) >= 2
        })
        .filter(|&(i, j)| brackets_zero(&[at(i, j), at(i + 1, j), at(i, j + 1), at(i + 1, j + 1)]))
        .collect();

    let results: Vec<((usize, usize), Result<TorusZero, (TorusParam, f64)>)> = cells
        .par_iter()
        .map(|&(i, j)| {
            let r = refine_cell(c, f, i as f64 * h, j as f64 * h, h, tol, 0);
            ((i, j), r)
        })
        .collect();

    let mut raw = Vec::new();
    let mut failures = Vec::new();
    for (cell, r) in results {
        match r {
            Ok(z) if z.param.diagonal_distance() >= h => raw.push(z),
            Ok(_) => {}
            Err((best, residual)) => failures.push(RefinementFailure {
                cell,
                best,
                residual,
            }),
        }
    }

    raw.sort_by(|a, b| {
        a.param
            .u
            .total_cmp(&b.param.u)
            .then(a.param.v.total_cmp(&b.param.v))
    });
    let mut zeros: Vec<TorusZero> = Vec::with_capacity(raw.len());
    for z in raw {
        match zeros
            .iter_mut()
            .find(|k| k.param.torus_distance(&z.param) < 1e-7)
        {
            Some(k) if z.residual < k.residual => *k = z,
            Some(_) => {}
            None => zeros.push(z),
        }
    }

    let chain = longest_chain(&zeros, 4.0 * h);
    if chain > n / 4 {
        return Err(SquareError::ContinuumSuspected {
            chain,
            zeros: zeros.len(),
        });
    }

    // a bracketing cell whose boundary degree vanishes holds no zero: the two
    // zero curves pass through it without crossing
    failures.retain(|fail| {
        let (i, j) = fail.cell;
        cell_degree(c, f, i as f64 * h, j as f64 * h, h) != 0
            && !zeros
                .iter()
                .any(|z| z.param.torus_distance(&fail.best) < 2.0 * h)
    });

    let squares = group_squares(c, f, &zeros);
    Ok(SearchOutcome {
        grid,
        tol,
        candidate_cells: cells.len(),
        zeros,
        squares,
        failures,
    })
}

/// The four counterclockwise vertices `a, b, S2, S1` spanned by a zero.
fn vertices_of(c: &ClosedCurve, t: TorusParam) -> [Point2; 4] {
    let a = c.point_at(t.u);
    let b = c.point_at(t.v);
    let (s1, s2) = square_corners(a, b);
    [a, b, s2, s1]
}

fn same_vertex_set(p: &[Point2; 4], q: &[Point2; 4], eps: f64) -> bool {
    p.iter().all(|x| q.iter().any(|y| x.dist(*y) <= eps))
        && q.iter().all(|y| p.iter().any(|x| x.dist(*y) <= eps))
}

fn group_squares(c: &ClosedCurve, f: &SignField, zeros: &[TorusZero]) -> Vec<SquareCandidate> {
    let eps = GROUPING_RELATIVE_TOLERANCE * c.diameter();
    let verts: Vec<[Point2; 4]> = zeros.iter().map(|z| vertices_of(c, z.param)).collect();
    let mut parent: Vec<usize> = (0..zeros.len()).collect();
    for i in 0..zeros.len() {
        for j in i + 1..zeros.len() {
            if same_vertex_set(&verts[i], &verts[j], eps) {
                union(&mut parent, i, j);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; zeros.len()];
    for i in 0..zeros.len() {
        let r = find_root(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }

    let mut squares: Vec<SquareCandidate> = groups
        .into_iter()
        .map(|members| {
            let rep = members[0];
            let vertices = verts[rep];
            let on_curve: Vec<(Point2, f64)> = members
                .iter()
                .flat_map(|&k| {
                    let t = zeros[k].param;
                    [(verts[k][0], t.u), (verts[k][1], t.v)]
                })
                .collect();
            let mut params = [0.0; 4];
            for (slot, p) in params.iter_mut().zip(vertices.iter()) {
                *slot = on_curve
                    .iter()
                    .find(|(q, _)| q.dist(*p) <= eps)
                    .map(|&(_, u)| u)
                    .unwrap_or_else(|| f.project(*p));
            }
            let start = (0..4)
                .min_by(|&i, &j| params[i].total_cmp(&params[j]))
                .unwrap_or(0);
            let vertices = std::array::from_fn(|k| vertices[(start + k) % 4]);
            let corner_params = std::array::from_fn(|k| params[(start + k) % 4]);
            let side_zeros: Vec<TorusZero> = members.iter().map(|&k| zeros[k]).collect();
            let residual = side_zeros.iter().map(|z| z.residual).fold(0.0, f64::max);
            SquareCandidate {
                corner_params,
                vertices,
                residual,
                side_zeros,
            }
        })
        .collect();
    squares.sort_by(|a, b| a.corner_params[0].total_cmp(&b.corner_params[0]));
    squares
}

/// Reads the type off the cyclic order in which the counterclockwise square
/// labels appear along the curve. `curve_order[k]` is the square label
/// (0 = first counterclockwise vertex) of the `k`-th vertex met along the curve.
fn type_from_curve_order(curve_order: &[usize; 4]) -> SquareType {
    let start = curve_order.iter().position(|&l| l == 0).unwrap_or(0);
    let seq: [usize; 4] = std::array::from_fn(|k| curve_order[(start + k) % 4]);
    match seq {
        [0, 1, 2, 3] => SquareType::I,
        [0, 3, 2, 1] => SquareType::III,
        _ => SquareType::II,
    }
}

/// Type of an inscribed square from the order of its vertices along the curve.
pub fn classify_square(q: &SquareCandidate) -> Result<SquareType, SquareError> {
    for i in 0..4 {
        for j in i + 1..4 {
            if dist_mod1(q.corner_params[i], q.corner_params[j]) < 1e-12 {
                return Err(SquareError::DegenerateParams(i, j));
            }
        }
    }
    let mut labels = [0usize, 1, 2, 3];
    labels.sort_by(|&i, &j| {
        q.corner_params[i]
            .total_cmp(&q.corner_params[j])
            .then(i.cmp(&j))
    });
    Ok(type_from_curve_order(&labels))
}

/// Finds the squares of `c` and tallies them by type.
pub fn count_by_type(
    c: &ClosedCurve,
    f: &SignField,
    grid: usize,
    tol: f64,
) -> Result<(TypeCounts, SearchOutcome), SquareError> {
    let outcome = find_inscribed_squares(c, f, grid, tol)?;
    let mut counts = TypeCounts::default();
    for q in &outcome.squares {
        counts.add(classify_square(q)?);
    }
    Ok((counts, outcome))
}

const BOUNDARY_TOL: f64 = 1e-12;

/// Whether `t` lies in the component `A` of the torus minus diagonal and
/// anti-diagonal, i.e. `(v - u) mod 1 ∈ (0, 1/2)`.
pub fn in_region_a(t: TorusParam) -> Result<bool, SquareError> {
    let d = t.diagonal_distance();
    if d < BOUNDARY_TOL || (d - 0.5).abs() < BOUNDARY_TOL {
        return Err(SquareError::OnBoundary { u: t.u, v: t.v });
    }
    Ok(t.gap() < 0.5)
}

/// Square type and number of side-zeros in `A` for a small square whose
/// vertices, met in the order `w < x < y < z` inside a short arc, carry the
/// counterclockwise labels `order_map = [label(w), label(x), label(y), label(z)]`
/// (0 = a, 1 = b, 2 = c, 3 = d, with `label(w) = a`).
///
/// A side-zero is an ordered pair `(P, Q)` of counterclockwise-consecutive
/// vertices; inside a short arc it lies in `A` exactly when `P` comes before `Q`.
pub fn prop2_case(order_map: [usize; 4]) -> Result<(SquareType, usize), SquareError> {
    let mut seen = [false; 4];
    for &l in &order_map {
        if l > 3 || seen[l] {
            return Err(SquareError::InvalidPermutation(order_map.to_vec()));
        }
        seen[l] = true;
    }
    if order_map[0] != 0 {
        return Err(SquareError::InvalidPermutation(order_map.to_vec()));
    }
    let mut position = [0usize; 4];
    for (pos, &label) in order_map.iter().enumerate() {
        position[label] = pos;
    }
    let in_a = (0..4)
        .filter(|&l| position[l] < position[(l + 1) % 4])
        .count();
    Ok((type_from_curve_order(&order_map), in_a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::random_generic_curve;

    fn circle() -> (ClosedCurve, SignField) {
        let c = ClosedCurve::circle(1.0, 1024).unwrap();
        let f = SignField::new(&c);
        (c, f)
    }

    fn synthetic(params: [f64; 4]) -> SquareCandidate {
        let unit = [
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
            Point2::new(-1.0, 0.0),
            Point2::new(0.0, -1.0),
        ];
        SquareCandidate {
            corner_params: params,
            vertices: unit,
            residual: 0.0,
            side_zeros: vec![],
        }
    }

    #[test]
    fn g_map_on_circle() {
        let (c, f) = circle();
        let (g1, g2) = g_map(&c, &f, TorusParam::new(0.0, 0.25));
        assert!(g1.abs() < 1e-5 && g2.abs() < 1e-5, "{g1} {g2}");
        let (g1, g2) = g_map(&c, &f, TorusParam::new(0.0, 0.5));
        let expect = 5f64.sqrt() - 1.0;
        assert!((g1 - expect).abs() < 1e-5 && (g2 - expect).abs() < 1e-5);
        for k in 0..10 {
            let u = k as f64 / 10.0 + 0.013;
            assert_eq!(g_map(&c, &f, TorusParam::new(u, u)), (0.0, 0.0));
        }
    }

    #[test]
    fn circle_is_a_continuum() {
        let (c, f) = circle();
        assert!(matches!(
            find_inscribed_squares(&c, &f, 128, 1e-8),
            Err(SquareError::ContinuumSuspected { .. })
        ));
        assert!(matches!(
            count_by_type(&c, &f, 128, 1e-8),
            Err(SquareError::ContinuumSuspected { .. })
        ));
    }

    #[test]
    fn rejects_bad_arguments() {
        let (c, f) = circle();
        assert_eq!(
            find_inscribed_squares(&c, &f, 32, 1e-8).unwrap_err(),
            SquareError::GridTooSmall(32)
        );
        assert!(matches!(
            find_inscribed_squares(&c, &f, 64, 0.0),
            Err(SquareError::InvalidTolerance(_))
        ));
    }

    #[test]
    fn ellipse_has_one_gracing_square() {
        let c = ClosedCurve::ellipse(2.0, 1.0, 1024).unwrap();
        let f = SignField::new(&c);
        let (counts, out) = count_by_type(&c, &f, 256, 1e-8).unwrap();
        assert_eq!(
            counts,
            TypeCounts {
                count_i: 1,
                count_ii: 0,
                count_iii: 0
            }
        );
        let q = &out.squares[0];
        assert_eq!(q.side_zeros.len(), 4);
        let s = 2.0 / 5f64.sqrt();
        for v in q.vertices {
            assert!((v.x.abs() - s).abs() < 1e-4 && (v.y.abs() - s).abs() < 1e-4);
        }
        assert!(q.residual < 1e-8);
        // every side lies in A for this large square
        assert_eq!(out.zeros_in_region_a(), 4);
    }

    #[test]
    fn classify_synthetic() {
        assert_eq!(
            classify_square(&synthetic([0.0, 0.25, 0.5, 0.75])),
            Ok(SquareType::I)
        );
        // labels 1,2,3,4 met along the curve as 1,3,2,4
        assert_eq!(
            classify_square(&synthetic([0.0, 0.5, 0.25, 0.75])),
            Ok(SquareType::II)
        );
        assert_eq!(
            classify_square(&synthetic([0.0, 0.75, 0.5, 0.25])),
            Ok(SquareType::III)
        );
        assert_eq!(
            classify_square(&synthetic([0.1, 0.2, 0.1, 0.3])),
            Err(SquareError::DegenerateParams(0, 2))
        );
    }

    #[test]
    fn classification_is_rotation_invariant() {
        // cyclic shift of the curve parameters does not change the type
        for shift in [0.1, 0.3, 0.55, 0.9] {
            let p = |x: f64| wrap01(x + shift);
            let q = synthetic([p(0.0), p(0.5), p(0.25), p(0.75)]);
            assert_eq!(classify_square(&q), Ok(SquareType::II));
            let q = synthetic([p(0.0), p(0.1), p(0.2), p(0.3)]);
            assert_eq!(classify_square(&q), Ok(SquareType::I));
        }
    }

    #[test]
    fn region_a_examples() {
        assert_eq!(in_region_a(TorusParam::new(0.1, 0.3)), Ok(true));
        assert_eq!(in_region_a(TorusParam::new(0.3, 0.1)), Ok(false));
        assert!(matches!(
            in_region_a(TorusParam::new(0.0, 0.5)),
            Err(SquareError::OnBoundary { .. })
        ));
        assert!(matches!(
            in_region_a(TorusParam::new(0.4, 0.4)),
            Err(SquareError::OnBoundary { .. })
        ));
    }

    #[test]
    fn prop2_examples() {
        assert_eq!(prop2_case([0, 1, 2, 3]), Ok((SquareType::I, 3)));
        assert_eq!(prop2_case([0, 3, 2, 1]), Ok((SquareType::III, 1)));
        assert_eq!(prop2_case([0, 2, 1, 3]), Ok((SquareType::II, 2)));
        assert!(prop2_case([1, 0, 2, 3]).is_err());
        assert!(prop2_case([0, 1, 1, 3]).is_err());
        assert!(prop2_case([0, 1, 2, 4]).is_err());
    }

    #[test]
    fn generic_curve_squares_are_genuine() {
        let c = random_generic_curve(1, 5, 0.15).unwrap();
        let f = SignField::new(&c);
        let out = find_inscribed_squares(&c, &f, 256, 1e-8).unwrap();
        assert!(!out.squares.is_empty());
        let eps = 1e-6 * c.diameter();
        for q in &out.squares {
            assert!(q.residual < 1e-8);
            for v in q.vertices {
                assert!(f.value(v).abs() < 1e-8);
            }
            let side = q.side_length();
            for k in 0..4 {
                let l = q.vertices[k].dist(q.vertices[(k + 1) % 4]);
                assert!((l - side).abs() < eps);
            }
            let d1 = q.vertices[0].dist(q.vertices[2]);
            let d2 = q.vertices[1].dist(q.vertices[3]);
            assert!((d1 - d2).abs() < eps);
            assert!(crate::geometry::signed_area(&q.vertices) > 0.0);
            for z in &q.side_zeros {
                let (g1, g2) = g_map(&c, &f, z.param);
                assert!(g1.abs() < 1e-8 && g2.abs() < 1e-8);
            }
        }
    }

    #[test]
    fn min_singular_value_of_known_matrices() {
        assert!((min_singular_value([[3.0, 0.0], [0.0, 2.0]]) - 2.0).abs() < 1e-12);
        assert!(min_singular_value([[1.0, 2.0], [2.0, 4.0]]) < 1e-7);
    }
}

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;
use squarescope_core::io::{InstanceFile, OffsetsFile, PathFile, RelationFile, SpiralFile, SplitPairFile};
use squarescope_core::spiral::{
    derivation_trajectory, find_spiral_angle, is_good, is_relation_avoiding, lift_log, principal_lift,
    random_pure_spiral, swept_area_pair, AvoidanceCheck, Derivation, SpiralAngle, SplitPair,
};
use squarescope_core::trochoid::{
    monotonicity_check, period, radial_property_check, random_instance, MonotonicityCheck, RadialReport,
    TrochoidArc, TrochoidInstance,
};
use squarescope_core::{Complex64, Point2};

use crate::render::Layer;
use crate::report::{to_value, verdict, CliError, Ctx};

fn parse<T: for<'de> serde::Deserialize<'de>>(ctx: &mut Ctx, path: &Path) -> Result<T, CliError> {
    let text = ctx.read_text(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn plane(z: Complex64) -> Point2 {
    Point2::new(z.re, z.im)
}

#[derive(Serialize)]
struct LiftSummary {
    base: Complex64,
    start: Complex64,
    top: f64,
    round_trip_error: f64,
}

#[derive(Serialize)]
struct CheckResults {
    samples: usize,
    multipliers: usize,
    avoidance: AvoidanceCheck,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    lift: Option<LiftSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lift_error: Option<String>,
}

pub fn check(ctx: &mut Ctx, path: &Path, relation: &Path) -> Result<(Value, Option<String>), CliError> {
    let path_file: PathFile = parse(ctx, path)?;
    let rel_file: RelationFile = parse(ctx, relation)?;
    let p = path_file.to_path().map_err(CliError::input)?;
    let rel = rel_file.to_relation().map_err(CliError::input)?;
    let avoidance = is_relation_avoiding(&p, &rel, ctx.config.tol);
    let base = principal_lift(p.samples()[0].1);
    let (lift, lift_error) = match lift_log(&p, base) {
        Ok(l) => (
            Some(LiftSummary {
                base,
                start: l.start(),
                top: l.top(),
                round_trip_error: l.round_trip_error(&p),
            }),
            None,
        ),
        Err(e) => {
            ctx.warn(format!("lift failed: {e}"));
            (None, Some(e.to_string()))
        }
    };
    let svg = ctx.svg.then(|| {
        let pts: Vec<Point2> = p.samples().iter().map(|&(_, z)| plane(z)).collect();
        let mut frame = pts.clone();
        frame.push(Point2::new(0.0, 0.0));
        crate::render::render(
            &frame,
            &[
                Layer::Open {
                    points: pts,
                    stroke: "black",
                },
                Layer::Dots {
                    points: vec![Point2::new(0.0, 0.0)],
                    fill: "#d62728",
                },
            ],
        )
    });
    let results = CheckResults {
        samples: p.samples().len(),
        multipliers: rel.multipliers().len(),
        verdict: verdict(avoidance.avoiding),
        avoidance,
        lift,
        lift_error,
    };
    Ok((to_value(&results)?, svg))
}

#[derive(Serialize)]
struct Step {
    step: usize,
    outcome: &'static str,
    p: Option<Complex64>,
    q: Option<Complex64>,
    good: Option<bool>,
}

#[derive(Serialize)]
struct SplitPairResults {
    initial: SplitPair,
    initial_good: bool,
    iterations: usize,
    trajectory: Vec<Step>,
    all_good: bool,
    terminated_at: Option<usize>,
}

pub fn splitpair(ctx: &mut Ctx, file: &Path, iterations: Option<usize>) -> Result<(Value, Option<String>), CliError> {
    let f: SplitPairFile = parse(ctx, file)?;
    let sp = f.to_pair().map_err(CliError::input)?;
    let iterations = iterations.unwrap_or(f.iterations);
    ctx.param("iterations", iterations);
    let initial_good = is_good(sp.p, sp.q).map_err(CliError::input)?;
    let mut trajectory = Vec::new();
    let mut terminated_at = None;
    for (k, d) in derivation_trajectory(sp, iterations).into_iter().enumerate() {
        let step = k + 1;
        trajectory.push(match d {
            Derivation::Pair(pair) => Step {
                step,
                outcome: "pair",
                p: Some(pair.p),
                q: Some(pair.q),
                good: is_good(pair.p, pair.q).ok(),
            },
            Derivation::Terminal { p, q } => {
                terminated_at = Some(step);
                Step {
                    step,
                    outcome: "terminal",
                    p: Some(p),
                    q: Some(q),
                    good: is_good(p, q).ok(),
                }
            }
            Derivation::Degenerate => {
                terminated_at = Some(step);
                Step {
                    step,
                    outcome: "degenerate",
                    p: None,
                    q: None,
                    good: None,
                }
            }
        });
    }
    let results = SplitPairResults {
        initial: sp,
        initial_good,
        iterations,
        all_good: initial_good && trajectory.iter().all(|s| s.good == Some(true)),
        trajectory,
        terminated_at,
    };
    Ok((to_value(&results)?, None))
}

#[derive(Serialize)]
struct AngleResults {
    offsets: usize,
    feasible: bool,
    outcome: SpiralAngle,
}

pub fn angle(ctx: &mut Ctx, file: &Path) -> Result<(Value, Option<String>), CliError> {
    let f: OffsetsFile = parse(ctx, file)?;
    let offsets = f.offsets();
    let outcome = find_spiral_angle(&offsets).map_err(CliError::input)?;
    let results = AngleResults {
        offsets: offsets.len(),
        feasible: matches!(outcome, SpiralAngle::Angle { .. }),
        outcome,
    };
    Ok((to_value(&results)?, None))
}

/// Seeded stream for item `k` of a sweep; `stream` separates independent sweeps.
pub fn item_rng(seed: u64, k: usize, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
    rng.set_stream(stream);
    rng
}

#[derive(Serialize)]
struct InstanceResult {
    index: usize,
    instance: TrochoidInstance,
    t_max: f64,
    check: MonotonicityCheck,
}

#[derive(Serialize)]
struct ArcResult {
    index: usize,
    shift: f64,
    arc: TrochoidArc,
    report: RadialReport,
}

#[derive(Serialize)]
struct RadialSummary {
    arcs: usize,
    passed: usize,
    inconclusive_points: usize,
    verdict: &'static str,
    results: Vec<ArcResult>,
}

#[derive(Serialize)]
struct TrochoidResults {
    instances: usize,
    solvable_at_lambda: usize,
    solvable_at_one: usize,
    pass_count: usize,
    violations: Vec<usize>,
    monotonicity: &'static str,
    results: Vec<InstanceResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    radial: Option<RadialSummary>,
}

pub struct TrochoidOptions<'a> {
    pub file: Option<&'a Path>,
    pub random: Option<usize>,
    pub periods: f64,
    pub arcs: usize,
    pub rays: usize,
    pub steps: usize,
    pub hull_samples: usize,
}

pub fn trochoid(ctx: &mut Ctx, o: &TrochoidOptions) -> Result<(Value, Option<String>), CliError> {
    if !(o.periods > 0.0 && o.periods.is_finite()) {
        return Err(CliError::input(format!("--periods must be positive, got {}", o.periods)));
    }
    let seed = ctx.config.seed;
    let instances: Vec<TrochoidInstance> = match (o.file, o.random) {
        (Some(p), _) => parse::<InstanceFile>(ctx, p)?.instances(),
        (None, Some(n)) => {
            ctx.param("random", n);
            (0..n).map(|k| random_instance(&mut item_rng(seed, k, 0))).collect()
        }
        (None, None) if o.arcs > 0 => Vec::new(),
        (None, None) => return Err(CliError::input("give an instance file, --random N or --arcs N")),
    };
    for (k, inst) in instances.iter().enumerate() {
        inst.validate()
            .map_err(|e| CliError::input(format!("instance {k}: {e}")))?;
    }
    ctx.param("periods", o.periods);
    ctx.param("arcs", o.arcs);
    ctx.param("rays", o.rays);
    ctx.param("steps", o.steps);
    ctx.param("hull_samples", o.hull_samples);

    let (grid, tol, t_fixed) = (ctx.config.grid, ctx.config.tol, ctx.config.t_max);
    let results: Vec<InstanceResult> = instances
        .par_iter()
        .enumerate()
        .map(|(index, inst)| {
            let t_max = t_fixed.unwrap_or(o.periods * period(inst));
            monotonicity_check(inst, t_max, grid, tol).map(|check| InstanceResult {
                index,
                instance: *inst,
                t_max,
                check,
            })
        })
        .collect::<Result<_, _>>()
        .map_err(CliError::input)?;

    let radial = if o.arcs > 0 {
        let arcs: Vec<ArcResult> = (0..o.arcs)
            .into_par_iter()
            .map(|index| {
                let mut rng = item_rng(seed, index, 1);
                let inst = random_instance(&mut rng);
                let shift = rng.gen_range(-2.0..2.0);
                let arc = TrochoidArc::for_instance(&inst, shift)?;
                let report = radial_property_check(&arc, o.rays, o.steps, o.hull_samples)?;
                Ok(ArcResult {
                    index,
                    shift,
                    arc,
                    report,
                })
            })
            .collect::<Result<_, squarescope_core::trochoid::TrochoidError>>()
            .map_err(CliError::input)?;
        let passed = arcs.iter().filter(|a| a.report.pass).count();
        Some(RadialSummary {
            arcs: arcs.len(),
            passed,
            inconclusive_points: arcs.iter().map(|a| a.report.inconclusive).sum(),
            verdict: verdict(passed == arcs.len()),
            results: arcs,
        })
    } else {
        None
    };

    let violations: Vec<usize> = results.iter().filter(|r| !r.check.holds).map(|r| r.index).collect();
    let out = TrochoidResults {
        instances: results.len(),
        solvable_at_lambda: results.iter().filter(|r| r.check.at_lambda.found).count(),
        solvable_at_one: results.iter().filter(|r| r.check.at_one.found).count(),
        pass_count: results.len() - violations.len(),
        monotonicity: verdict(violations.is_empty()),
        violations,
        results,
        radial,
    };
    Ok((to_value(&out)?, None))
}

#[derive(Serialize)]
struct AreaEntry {
    index: usize,
    x1: Complex64,
    x2: Complex64,
    a: Complex64,
    side_area: f64,
    corner_area: f64,
    relative_gap: f64,
    equal: bool,
}

#[derive(Serialize)]
struct AreaResults {
    t_max: f64,
    steps: usize,
    rel_tol: f64,
    spirals: usize,
    equal_count: usize,
    verdict: &'static str,
    results: Vec<AreaEntry>,
}

/// Default horizon for swept areas; `e^{2 Re(a) t}` is negligible by then
/// for the generated spirals.
pub const DEFAULT_AREA_T_MAX: f64 = 40.0;

pub fn area(
    ctx: &mut Ctx,
    file: Option<&Path>,
    random: Option<usize>,
    steps: usize,
    rel_tol: f64,
) -> Result<(Value, Option<String>), CliError> {
    let spirals: Vec<((Complex64, Complex64), Complex64)> = match (file, random) {
        (Some(p), _) => vec![parse::<SpiralFile>(ctx, p)?.parts()],
        (None, Some(n)) => {
            ctx.param("random", n);
            (0..n)
                .map(|k| random_pure_spiral(&mut item_rng(ctx.config.seed, k, 2)))
                .collect()
        }
        (None, None) => return Err(CliError::input("give a spiral file or --random N")),
    };
    ctx.param("steps", steps);
    ctx.param("rel_tol", rel_tol);
    let t_max = ctx.config.t_max.unwrap_or(DEFAULT_AREA_T_MAX);
    let results: Vec<AreaEntry> = spirals
        .par_iter()
        .enumerate()
        .map(|(index, &(x, a))| {
            swept_area_pair(x, a, t_max, steps).map(|(s, c)| {
                let gap = (s - c).abs() / s.abs().max(c.abs()).max(f64::MIN_POSITIVE);
                AreaEntry {
                    index,
                    x1: x.0,
                    x2: x.1,
                    a,
                    side_area: s,
                    corner_area: c,
                    relative_gap: gap,
                    equal: gap <= rel_tol,
                }
            })
        })
        .collect::<Result<_, _>>()
        .map_err(CliError::input)?;
    let equal_count = results.iter().filter(|r| r.equal).count();
    let out = AreaResults {
        t_max,
        steps,
        rel_tol,
        spirals: results.len(),
        equal_count,
        verdict: verdict(equal_count == results.len()),
        results,
    };
    Ok((to_value(&out)?, None))
}

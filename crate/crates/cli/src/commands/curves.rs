use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use squarescope_core::curve::{random_generic_curve_with, validate_curve, ClosedCurve, ValidationReport};
use squarescope_core::envelope::{
    antidiagonal_winding, lemma2_check, trace_quadrant_components, verify_envelope, EnvelopeCandidate,
    EnvelopeError, EnvelopeReport, Lemma2Report, VerifyOptions,
};
use squarescope_core::io::{curve_from_csv, curve_from_json, curve_to_csv, curve_to_json};
use squarescope_core::squares::{classify_square, count_by_type, SquareError, TorusParam, TorusZero, TypeCounts};
use squarescope_core::{Point2, SignField};

use crate::args::{CurveFormat, GenCurveArgs, Shape};
use crate::render::Layer;
use crate::report::{sha256_hex, to_value, verdict, CliError, Ctx, ExitKind};

pub struct LoadedCurve {
    pub curve: ClosedCurve,
    pub validation: ValidationReport,
}

/// Reads, validates and orients a curve file.
pub fn load_curve(ctx: &mut Ctx, path: &Path) -> Result<LoadedCurve, CliError> {
    let text = ctx.read_text(path)?;
    let is_csv = path
        .extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let points = if is_csv {
        curve_from_csv(&text)
    } else {
        curve_from_json(&text)
    }
    .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let validation = validate_curve(&points, true).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let (curve, reversed) = ClosedCurve::new_normalized(points).map_err(CliError::input)?;
    if reversed {
        ctx.warn("curve was clockwise; sample order reversed");
    }
    Ok(LoadedCurve { curve, validation })
}

fn square_error(e: SquareError) -> CliError {
    match e {
        SquareError::ContinuumSuspected { .. } => CliError::new(ExitKind::Continuum, e),
        _ => CliError::input(e),
    }
}

#[derive(Serialize)]
struct Parity {
    type_i_odd: bool,
    type_ii_even: bool,
    type_iii_even: bool,
    verdict: &'static str,
}

impl Parity {
    fn of(c: &TypeCounts) -> Self {
        let (i, ii, iii) = (c.count_i % 2 == 1, c.count_ii.is_multiple_of(2), c.count_iii.is_multiple_of(2));
        Self {
            type_i_odd: i,
            type_ii_even: ii,
            type_iii_even: iii,
            verdict: verdict(i && ii && iii),
        }
    }
}

#[derive(Serialize)]
struct SquareEntry {
    #[serde(rename = "type")]
    kind: String,
    params: [f64; 4],
    vertices: [[f64; 2]; 4],
    side_length: f64,
    residual: f64,
    side_zeros: Vec<TorusZero>,
}

#[derive(Serialize)]
struct SquaresResults {
    curve: ValidationReport,
    grid: usize,
    tol: f64,
    candidate_cells: usize,
    zeros: usize,
    zeros_in_a: usize,
    counts: TypeCounts,
    parity: Parity,
    squares: Vec<SquareEntry>,
    failures: Vec<squarescope_core::squares::RefinementFailure>,
}

pub fn squares(ctx: &mut Ctx, path: &Path) -> Result<(Value, Option<String>), CliError> {
    let loaded = load_curve(ctx, path)?;
    let c = &loaded.curve;
    let f = SignField::new(c);
    let (grid, tol) = (ctx.config.grid, ctx.config.tol);
    let (counts, outcome) = count_by_type(c, &f, grid, tol).map_err(square_error)?;
    if !outcome.failures.is_empty() {
        ctx.warn(format!(
            "{} cells did not refine below tol; see failures for their residuals",
            outcome.failures.len()
        ));
    }
    let mut entries = Vec::new();
    for q in &outcome.squares {
        entries.push(SquareEntry {
            kind: classify_square(q).map_err(square_error)?.to_string(),
            params: q.corner_params,
            vertices: q.vertices.map(<[f64; 2]>::from),
            side_length: q.side_length(),
            residual: q.residual,
            side_zeros: q.side_zeros.clone(),
        });
    }
    let svg = ctx.svg.then(|| {
        let mut layers = vec![Layer::Closed {
            points: c.samples().to_vec(),
            stroke: "black",
            fill: "none",
        }];
        for e in &entries {
            layers.push(Layer::Closed {
                points: e.vertices.map(Point2::from).to_vec(),
                stroke: type_colour(&e.kind),
                fill: "none",
            });
            layers.push(Layer::Dots {
                points: e.vertices.map(Point2::from).to_vec(),
                fill: type_colour(&e.kind),
            });
        }
        crate::render::render(c.samples(), &layers)
    });
    let results = SquaresResults {
        curve: loaded.validation,
        grid,
        tol,
        candidate_cells: outcome.candidate_cells,
        zeros: outcome.zeros.len(),
        zeros_in_a: outcome.zeros_in_region_a(),
        parity: Parity::of(&counts),
        counts,
        squares: entries,
        failures: outcome.failures,
    };
    Ok((to_value(&results)?, svg))
}

fn type_colour(kind: &str) -> &'static str {
    match kind {
        "I" => "#d62728",
        "II" => "#1f77b4",
        _ => "#2ca02c",
    }
}

#[derive(Serialize)]
struct ComponentSummary {
    nodes: usize,
    path_length: usize,
    spanning: bool,
    gap_range: (f64, f64),
    start: Option<TorusParam>,
    end: Option<TorusParam>,
}

#[derive(Serialize)]
struct CandidateResult {
    source: String,
    samples: usize,
    verify: EnvelopeReport,
    verify_verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    lemma2: Option<Lemma2Report>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lemma2_error: Option<String>,
}

#[derive(Serialize)]
struct Consistency {
    winding_parity: &'static str,
    zeros_in_a: usize,
    zeros_in_a_parity: &'static str,
    verdict: &'static str,
}

#[derive(Serialize)]
struct EnvelopeResults {
    curve: ValidationReport,
    loop_samples: usize,
    winding: i64,
    grid: usize,
    tol: f64,
    consistency: Consistency,
    components: Vec<ComponentSummary>,
    spanning_components: usize,
    candidates: Vec<CandidateResult>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CandidateFile {
    e1: Vec<[f64; 2]>,
    e2: Vec<[f64; 2]>,
}

fn parity_word(n: u64) -> &'static str {
    if n.is_multiple_of(2) {
        "even"
    } else {
        "odd"
    }
}

fn envelope_error(e: EnvelopeError) -> CliError {
    match e {
        EnvelopeError::ZeroOnLoop { .. } => CliError::new(ExitKind::ZeroOnLoop, e),
        _ => CliError::input(e),
    }
}

fn check_candidate(
    env: &EnvelopeCandidate,
    source: String,
    c: &ClosedCurve,
    f: &SignField,
    tail: usize,
    cluster: f64,
) -> CandidateResult {
    let verify = verify_envelope(env, c, f, &VerifyOptions::default());
    let (lemma2, lemma2_error) = match lemma2_check(env, tail, cluster) {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e.to_string())),
    };
    CandidateResult {
        source,
        samples: env.len(),
        verify_verdict: verdict(verify.all_pass()),
        verify,
        lemma2,
        lemma2_error,
    }
}

pub fn envelope(
    ctx: &mut Ctx,
    path: &Path,
    candidate: Option<&Path>,
    tail: usize,
    cluster: f64,
) -> Result<(Value, Option<String>), CliError> {
    let loaded = load_curve(ctx, path)?;
    let c = &loaded.curve;
    let f = SignField::new(c);
    let (grid, tol, samples) = (ctx.config.grid, ctx.config.tol, ctx.config.samples);
    ctx.param("tail", tail);
    ctx.param("cluster", cluster);

    let explicit = match candidate {
        Some(p) => {
            let text = ctx.read_text(p)?;
            let file: CandidateFile =
                serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", p.display())))?;
            let pts = |v: &[[f64; 2]]| v.iter().map(|&q| Point2::from(q)).collect::<Vec<_>>();
            Some(EnvelopeCandidate::from_parts(pts(&file.e1), pts(&file.e2)).map_err(CliError::input)?)
        }
        None => None,
    };

    let winding = antidiagonal_winding(c, &f, samples).map_err(envelope_error)?;
    let paths = trace_quadrant_components(c, &f, grid, tol).map_err(envelope_error)?;
    let (_, outcome) = count_by_type(c, &f, grid, tol).map_err(square_error)?;
    if !outcome.failures.is_empty() {
        ctx.warn(format!(
            "{} cells did not refine below tol; the zero count may be incomplete",
            outcome.failures.len()
        ));
    }
    let zeros_in_a = outcome.zeros_in_region_a();
    let consistent = winding.rem_euclid(2) as usize == zeros_in_a % 2;

    let mut candidates = Vec::new();
    let mut overlays = Vec::new();
    for (k, p) in paths.iter().enumerate().filter(|(_, p)| p.spanning) {
        match EnvelopeCandidate::from_path(p, c, &f, true) {
            Ok(env) => {
                candidates.push(check_candidate(&env, format!("component {k}"), c, &f, tail, cluster));
                overlays.push(env);
            }
            Err(e) => ctx.warn(format!("component {k}: {e}")),
        }
    }
    if let Some(env) = explicit {
        candidates.push(check_candidate(&env, "file".into(), c, &f, tail, cluster));
        overlays.push(env);
    }

    let svg = ctx.svg.then(|| {
        let mut layers = vec![Layer::Closed {
            points: c.samples().to_vec(),
            stroke: "black",
            fill: "none",
        }];
        for q in &outcome.squares {
            layers.push(Layer::Closed {
                points: q.vertices.to_vec(),
                stroke: "#999999",
                fill: "none",
            });
        }
        for env in &overlays {
            layers.push(Layer::Open {
                points: env.e1.clone(),
                stroke: "#d62728",
            });
            layers.push(Layer::Open {
                points: env.e2.clone(),
                stroke: "#1f77b4",
            });
        }
        crate::render::render(c.samples(), &layers)
    });

    let components: Vec<ComponentSummary> = paths
        .iter()
        .map(|p| ComponentSummary {
            nodes: p.nodes,
            path_length: p.points.len(),
            spanning: p.spanning,
            gap_range: p.gap_range,
            start: p.points.first().copied(),
            end: p.points.last().copied(),
        })
        .collect();
    let results = EnvelopeResults {
        curve: loaded.validation,
        loop_samples: samples,
        winding,
        grid,
        tol,
        consistency: Consistency {
            winding_parity: parity_word(winding.unsigned_abs()),
            zeros_in_a,
            zeros_in_a_parity: parity_word(zeros_in_a as u64),
            verdict: verdict(consistent),
        },
        spanning_components: components.iter().filter(|p| p.spanning).count(),
        components,
        candidates,
    };
    Ok((to_value(&results)?, svg))
}

#[derive(Serialize)]
struct GenCurveResults {
    shape: String,
    file: String,
    sha256: String,
    curve: ValidationReport,
}

/// Builds the requested curve. Returns the encoded file and, when a target
/// file was given, the report payload.
pub fn gen_curve(ctx: &mut Ctx, args: &GenCurveArgs) -> Result<(String, Option<(Value, Option<String>)>), CliError> {
    let n = ctx.config.samples;
    let curve = match args.shape {
        Shape::Random => {
            ctx.param("harmonics", args.harmonics);
            ctx.param("amplitude", args.amplitude);
            if !(args.amplitude >= 0.0 && args.amplitude.is_finite()) {
                return Err(CliError::input(format!("--amplitude must be nonnegative, got {}", args.amplitude)));
            }
            random_generic_curve_with(ctx.config.seed, args.harmonics, args.amplitude, n)
        }
        Shape::Ellipse => {
            ctx.param("a", args.a);
            ctx.param("b", args.b);
            ClosedCurve::ellipse(args.a, args.b, n)
        }
        Shape::Circle => {
            ctx.param("radius", args.radius);
            ClosedCurve::circle(args.radius, n)
        }
    }
    .map_err(CliError::input)?;
    let text = match args.format {
        CurveFormat::Json => curve_to_json(curve.samples()),
        CurveFormat::Csv => curve_to_csv(curve.samples()),
    }
    .map_err(CliError::input)?;
    let Some(file) = &args.file else {
        return Ok((text, None));
    };
    std::fs::write(file, &text).map_err(|e| CliError::input(format!("{}: {e}", file.display())))?;
    let validation = validate_curve(curve.samples(), false).map_err(CliError::input)?;
    let svg = ctx.svg.then(|| {
        crate::render::render(
            curve.samples(),
            &[Layer::Closed {
                points: curve.samples().to_vec(),
                stroke: "black",
                fill: "none",
            }],
        )
    });
    let results = GenCurveResults {
        shape: format!("{:?}", args.shape).to_lowercase(),
        file: file.display().to_string(),
        sha256: sha256_hex(text.as_bytes()),
        curve: validation,
    };
    Ok((text, Some((to_value(&results)?, svg))))
}

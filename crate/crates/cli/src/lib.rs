//! Command-line driver: parses arguments, runs one command and emits a JSON
//! report (and optionally an SVG) with a process exit code.

pub mod args;
pub mod commands;
pub mod render;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Parser;
use serde_json::Value;

use args::{Cli, Command, SpiralCommand};
use commands::spiral::TrochoidOptions;
use report::{CliError, Ctx, Report, RunConfig};

pub const THREADS_ENV: &str = "SQUARESCOPE_THREADS";

/// Everything a run produced, before anything is written.
pub struct Outcome {
    pub report: Option<Report>,
    /// Text for stdout when there is no report (`gen-curve` without a file).
    pub raw: Option<String>,
    pub svg: Option<String>,
}

fn configure_threads(warnings: &mut Vec<String>) {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return;
    };
    match v.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            // a second call in the same process keeps the first pool
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        _ => warnings.push(format!("ignoring {THREADS_ENV}={v:?}; expected a positive integer")),
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Squares { .. } => "squares",
        Command::Envelope { .. } => "envelope",
        Command::GenCurve(_) => "gen-curve",
        Command::Spiral(s) => match s {
            SpiralCommand::Check { .. } => "spiral check",
            SpiralCommand::Splitpair { .. } => "spiral splitpair",
            SpiralCommand::Angle { .. } => "spiral angle",
            SpiralCommand::Trochoid { .. } => "spiral trochoid",
            SpiralCommand::Area { .. } => "spiral area",
        },
    }
}

type Payload = Result<(Value, Option<String>), CliError>;

fn dispatch(ctx: &mut Ctx, cmd: &Command) -> (Payload, Option<String>) {
    use commands::{curves, spiral};
    let payload = match cmd {
        Command::Squares { curve } => curves::squares(ctx, curve),
        Command::Envelope {
            curve,
            candidate,
            tail,
            cluster,
        } => curves::envelope(ctx, curve, candidate.as_deref(), *tail, *cluster),
        Command::GenCurve(a) => match curves::gen_curve(ctx, a) {
            Ok((text, None)) => return (Ok((Value::Null, None)), Some(text)),
            Ok((_, Some(payload))) => Ok(payload),
            Err(e) => Err(e),
        },
        Command::Spiral(s) => match s {
            SpiralCommand::Check { path, relation } => spiral::check(ctx, path, relation),
            SpiralCommand::Splitpair { file, iterations } => spiral::splitpair(ctx, file, *iterations),
            SpiralCommand::Angle { file } => spiral::angle(ctx, file),
            SpiralCommand::Trochoid {
                file,
                random,
                periods,
                arcs,
                rays,
                steps,
                hull_samples,
            } => spiral::trochoid(
                ctx,
                &TrochoidOptions {
                    file: file.as_deref(),
                    random: *random,
                    periods: *periods,
                    arcs: *arcs,
                    rays: *rays,
                    steps: *steps,
                    hull_samples: *hull_samples,
                },
            ),
            SpiralCommand::Area {
                file,
                random,
                steps,
                rel_tol,
            } => spiral::area(ctx, file.as_deref(), *random, *steps, *rel_tol),
        },
    };
    (payload, None)
}

/// Runs a parsed command line without touching stdout or the filesystem
/// beyond reading inputs (and writing a `gen-curve` target file).
pub fn execute(cli: &Cli) -> Outcome {
    let name = command_name(&cli.command);
    let mut early = Vec::new();
    configure_threads(&mut early);
    let config = match RunConfig::from_args(&cli.global) {
        Ok(c) => c,
        Err(e) => {
            let mut report = Ctx::new(placeholder_config(&cli.global), false).finish(name, Err(e));
            report.inputs.config = None;
            report.warnings.extend(early);
            return Outcome {
                report: Some(report),
                raw: None,
                svg: None,
            };
        }
    };
    let mut ctx = Ctx::new(config, cli.global.svg);
    for w in early {
        ctx.warn(w);
    }
    let (payload, raw) = dispatch(&mut ctx, &cli.command);
    if raw.is_some() {
        return Outcome {
            report: None,
            raw,
            svg: None,
        };
    }
    let (result, svg) = match payload {
        Ok((v, svg)) => (Ok(v), svg),
        Err(e) => (Err(e), None),
    };
    if cli.global.svg && svg.is_none() && result.is_ok() {
        ctx.warn(format!("{name} has no SVG rendering"));
    }
    Outcome {
        report: Some(ctx.finish(name, result)),
        raw: None,
        svg,
    }
}

fn placeholder_config(g: &args::GlobalArgs) -> RunConfig {
    RunConfig {
        grid: g.grid,
        tol: g.tol,
        seed: g.seed,
        t_max: g.t_max,
        samples: g.samples,
        output_dir: None,
    }
}

fn file_stem(name: &str) -> String {
    name.replace(' ', "-")
}

fn write_file(path: &Path, text: &str) -> Result<(), String> {
    std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Writes the report and SVG where requested. Returns the report text.
fn emit(cli: &Cli, report: &mut Report, svg: Option<String>) -> Result<String, String> {
    let stem = file_stem(&report.command);
    if let Some(svg) = svg {
        let dir = cli.global.out.clone().unwrap_or_else(|| PathBuf::from("."));
        std::fs::create_dir_all(&dir).map_err(|e| format!("{}: {e}", dir.display()))?;
        let path = dir.join(format!("{stem}.svg"));
        write_file(&path, &svg)?;
        if let Some(Value::Object(map)) = report.results.as_mut() {
            map.insert("svg".into(), Value::String(path.display().to_string()));
        }
    }
    let text = squarescope_core::io::to_json(report).map_err(|e| e.to_string())?;
    if let Some(dir) = &cli.global.out {
        std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
        write_file(&dir.join(format!("{stem}.json")), &text)?;
    }
    Ok(text)
}

/// Full command-line entry point; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = execute(&cli);
    let mut stdout = std::io::stdout().lock();
    if let Some(raw) = outcome.raw {
        return match stdout.write_all(raw.as_bytes()) {
            Ok(()) => 0,
            Err(_) => 2,
        };
    }
    let Some(mut report) = outcome.report else {
        return 2;
    };
    if let Some(err) = &report.error {
        eprintln!("error: {}", err.message);
    }
    match emit(&cli, &mut report, outcome.svg) {
        Ok(text) => {
            let _ = stdout.write_all(text.as_bytes());
            report.exit_code()
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

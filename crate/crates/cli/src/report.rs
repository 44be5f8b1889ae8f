use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::args::GlobalArgs;

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitKind {
    Input = 2,
    Continuum = 3,
    ZeroOnLoop = 4,
}

impl ExitKind {
    fn label(self) -> &'static str {
        match self {
            ExitKind::Input => "input",
            ExitKind::Continuum => "continuum",
            ExitKind::ZeroOnLoop => "zero-on-loop",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CliError {
    pub kind: ExitKind,
    pub message: String,
}

impl CliError {
    pub fn input(e: impl Display) -> Self {
        Self {
            kind: ExitKind::Input,
            message: e.to_string(),
        }
    }

    pub fn new(kind: ExitKind, e: impl Display) -> Self {
        Self {
            kind,
            message: e.to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub grid: usize,
    pub tol: f64,
    pub seed: u64,
    pub t_max: Option<f64>,
    pub samples: usize,
    pub output_dir: Option<String>,
}

impl RunConfig {
    pub fn from_args(g: &GlobalArgs) -> Result<Self, CliError> {
        if g.grid < 64 {
            return Err(CliError::input(format!("--grid must be at least 64, got {}", g.grid)));
        }
        if !(g.tol > 0.0 && g.tol.is_finite()) {
            return Err(CliError::input(format!("--tol must be positive, got {}", g.tol)));
        }
        if let Some(t) = g.t_max {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::input(format!("--t-max must be positive, got {t}")));
            }
        }
        if g.samples < 4 {
            return Err(CliError::input(format!("--samples must be at least 4, got {}", g.samples)));
        }
        Ok(Self {
            grid: g.grid,
            tol: g.tol,
            seed: g.seed,
            t_max: g.t_max,
            samples: g.samples,
            output_dir: g.out.as_ref().map(|p| p.display().to_string()),
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Inputs {
    pub config: Option<RunConfig>,
    pub files: Vec<FileDigest>,
    pub params: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub kind: &'static str,
    pub exit_code: i32,
    pub message: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Inputs,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub results: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<Failure>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        self.error.as_ref().map_or(0, |e| e.exit_code)
    }
}

/// State shared by a command while it runs.
pub struct Ctx {
    pub config: RunConfig,
    pub svg: bool,
    files: Vec<FileDigest>,
    params: BTreeMap<String, Value>,
    warnings: Vec<String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

impl Ctx {
    pub fn new(config: RunConfig, svg: bool) -> Self {
        Self {
            config,
            svg,
            files: Vec::new(),
            params: BTreeMap::new(),
            warnings: Vec::new(),
        }
    }

    /// Reads an input file as UTF-8 and records its digest.
    pub fn read_text(&mut self, path: &Path) -> Result<String, CliError> {
        let bytes = std::fs::read(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        self.files.push(FileDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(&bytes),
        });
        String::from_utf8(bytes).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.params.insert(key.to_string(), v);
    }

    pub fn warn(&mut self, w: impl Into<String>) {
        self.warnings.push(w.into());
    }

    pub fn finish(self, command: &str, outcome: Result<Value, CliError>) -> Report {
        let (results, error) = match outcome {
            Ok(v) => (Some(v), None),
            Err(e) => (
                None,
                Some(Failure {
                    kind: e.kind.label(),
                    exit_code: e.kind as i32,
                    message: e.message,
                }),
            ),
        };
        Report {
            command: command.to_string(),
            inputs: Inputs {
                config: Some(self.config),
                files: self.files,
                params: self.params,
            },
            results,
            error,
            warnings: self.warnings,
        }
    }
}

/// Serializes a typed result for the report.
pub fn to_value(v: &impl Serialize) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(CliError::input)
}

pub fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

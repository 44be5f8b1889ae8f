//! File formats and deterministic JSON output.
//!
//! Every float is written with 17 significant digits so that a value read
//! back is bit-identical to the one written.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};
use thiserror::Error;

use crate::geometry::Point2;
use crate::spiral::{MultiplierRelation, OriginPath1D, SpiralError, SplitPair};
use crate::trochoid::TrochoidInstance;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Spiral(#[from] SpiralError),
}

/// Pretty JSON formatter that prints floats as `{:.16e}`.
pub struct Digits17<'a> {
    inner: PrettyFormatter<'a>,
}

impl Default for Digits17<'_> {
    fn default() -> Self {
        Self {
            inner: PrettyFormatter::with_indent(b"  "),
        }
    }
}

impl Formatter for Digits17<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.inner.begin_array(writer)
    }

    fn end_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.inner.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> std::io::Result<()> {
        self.inner.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.inner.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.inner.begin_object(writer)
    }

    fn end_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.inner.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> std::io::Result<()> {
        self.inner.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.inner.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.inner.end_object_value(writer)
    }
}

/// Serializes `value` as indented JSON with 17-digit floats and a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String, IoError> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Digits17::default());
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| IoError::Format(e.to_string()))
}

fn read_text(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveFile {
    pub samples: Vec<[f64; 2]>,
    #[serde(default = "yes")]
    pub closed: bool,
}

fn yes() -> bool {
    true
}

impl CurveFile {
    pub fn from_points(points: &[Point2]) -> Self {
        Self {
            samples: points.iter().map(|&p| p.into()).collect(),
            closed: true,
        }
    }

    pub fn points(&self) -> Vec<Point2> {
        self.samples.iter().map(|&s| s.into()).collect()
    }
}

pub fn curve_to_json(points: &[Point2]) -> Result<String, IoError> {
    to_json(&CurveFile::from_points(points))
}

pub fn curve_from_json(text: &str) -> Result<Vec<Point2>, IoError> {
    let file: CurveFile = serde_json::from_str(text)?;
    if !file.closed {
        return Err(IoError::Format("curve file must have \"closed\": true".into()));
    }
    Ok(file.points())
}

/// CSV with an `x,y` header, one sample per row.
pub fn curve_to_csv(points: &[Point2]) -> Result<String, IoError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["x", "y"])?;
    for p in points {
        w.write_record([format!("{:.16e}", p.x), format!("{:.16e}", p.y)])?;
    }
    let bytes = w.into_inner().map_err(|e| IoError::Format(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| IoError::Format(e.to_string()))
}

pub fn curve_from_csv(text: &str) -> Result<Vec<Point2>, IoError> {
    #[derive(Deserialize)]
    struct Row {
        x: f64,
        y: f64,
    }
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    r.deserialize::<Row>()
        .map(|row| row.map(|r| Point2::new(r.x, r.y)).map_err(IoError::from))
        .collect()
}

/// Reads a curve from a `.csv` file or, for any other extension, JSON.
pub fn read_curve(path: &Path) -> Result<Vec<Point2>, IoError> {
    let text = read_text(path)?;
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("csv") => curve_from_csv(&text),
        _ => curve_from_json(&text),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathFile {
    /// `[t, re, im]` triples.
    pub samples: Vec<[f64; 3]>,
}

impl PathFile {
    pub fn from_path(path: &OriginPath1D) -> Self {
        Self {
            samples: path.samples().iter().map(|&(t, z)| [t, z.re, z.im]).collect(),
        }
    }

    pub fn to_path(&self) -> Result<OriginPath1D, IoError> {
        Ok(OriginPath1D::new(
            self.samples
                .iter()
                .map(|&[t, re, im]| (t, Complex64::new(re, im)))
                .collect(),
        )?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationFile {
    pub multipliers: Vec<[f64; 2]>,
}

impl RelationFile {
    pub fn to_relation(&self) -> Result<MultiplierRelation, IoError> {
        Ok(MultiplierRelation::new(
            self.multipliers
                .iter()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect(),
        )?)
    }
}

/// A split pair to derive, with the number of derivation steps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitPairFile {
    pub p: [f64; 2],
    pub q: [f64; 2],
    #[serde(default = "ten")]
    pub iterations: usize,
}

fn ten() -> usize {
    10
}

impl SplitPairFile {
    pub fn to_pair(&self) -> Result<SplitPair, IoError> {
        Ok(SplitPair::new(
            Complex64::new(self.p[0], self.p[1]),
            Complex64::new(self.q[0], self.q[1]),
        )?)
    }
}

/// Lift offsets `ℓ_i(0)` with their `k_i`, as `[re, im, k]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OffsetsFile {
    pub offsets: Vec<(f64, f64, i64)>,
}

impl OffsetsFile {
    pub fn offsets(&self) -> Vec<(Complex64, i64)> {
        self.offsets
            .iter()
            .map(|&(re, im, k)| (Complex64::new(re, im), k))
            .collect()
    }
}

/// A pure spiral `(x1, x2) e^{at}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpiralFile {
    pub x1: [f64; 2],
    pub x2: [f64; 2],
    pub a: [f64; 2],
}

impl SpiralFile {
    pub fn parts(&self) -> ((Complex64, Complex64), Complex64) {
        let c = |v: [f64; 2]| Complex64::new(v[0], v[1]);
        ((c(self.x1), c(self.x2)), c(self.a))
    }
}

/// One instance, or a list of them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InstanceFile {
    One(TrochoidInstance),
    Many { instances: Vec<TrochoidInstance> },
}

impl InstanceFile {
    pub fn instances(&self) -> Vec<TrochoidInstance> {
        match self {
            InstanceFile::One(i) => vec![*i],
            InstanceFile::Many { instances } => instances.clone(),
        }
    }
}

/// Reads any of the JSON input formats above.
pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, IoError> {
    Ok(serde_json::from_str(&read_text(path)?)?)
}

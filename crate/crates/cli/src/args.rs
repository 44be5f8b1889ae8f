use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "squarescope", version, about = "Inscribed squares, envelopes and spiral checks on plane curves")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Lattice resolution for torus and solver grids (at least 64).
    #[arg(long, global = true, default_value_t = 512)]
    pub grid: usize,
    /// Residual tolerance.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    /// Base seed for generated curves, instances and spirals.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Time horizon for spiral and trochoid commands.
    #[arg(long = "t-max", global = true)]
    pub t_max: Option<f64>,
    /// Sample count for curves and loops.
    #[arg(long, global = true, default_value_t = 1024)]
    pub samples: usize,
    /// Also write an SVG rendering.
    #[arg(long, global = true)]
    pub svg: bool,
    /// Directory for the JSON report and SVG.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Find and classify the inscribed squares of a curve.
    Squares {
        /// Curve file (.json or .csv).
        curve: PathBuf,
    },
    /// Anti-diagonal winding, quadrant components and degree consistency.
    Envelope {
        curve: PathBuf,
        /// Envelope candidate `{"e1": [[x, y], ...], "e2": [...]}` to verify.
        #[arg(long)]
        candidate: Option<PathBuf>,
        /// Truncation indices inspected for σ limits.
        #[arg(long, default_value_t = 8)]
        tail: usize,
        /// Clustering threshold relative to the envelope's extent.
        #[arg(long, default_value_t = 1e-2)]
        cluster: f64,
    },
    /// One-dimensional spiral and trochoid checks.
    #[command(subcommand)]
    Spiral(SpiralCommand),
    /// Write a curve file.
    GenCurve(GenCurveArgs),
}

#[derive(Debug, Subcommand)]
pub enum SpiralCommand {
    /// Relation avoidance and log lift of an origin path.
    Check {
        /// Path file `{"samples": [[t, re, im], ...]}`.
        path: PathBuf,
        /// Relation file `{"multipliers": [[re, im], ...]}`.
        relation: PathBuf,
    },
    /// Derivation trajectory of a split pair.
    Splitpair {
        /// Split-pair file `{"p": [re, im], "q": [re, im], "iterations": n}`.
        file: PathBuf,
        /// Overrides the file's iteration count.
        #[arg(long)]
        iterations: Option<usize>,
    },
    /// Search for a spiral angle θ.
    Angle {
        /// Offsets file `{"offsets": [[re, im, k], ...]}`.
        file: PathBuf,
    },
    /// Solvability at λ and at 1, and radial checks of hull arcs.
    Trochoid {
        /// Instance file: one instance or `{"instances": [...]}`.
        file: Option<PathBuf>,
        /// Number of seeded random instances instead of a file.
        #[arg(long, conflicts_with = "file")]
        random: Option<usize>,
        /// Search window in rotation periods when --t-max is not given.
        #[arg(long, default_value_t = 8.0)]
        periods: f64,
        /// Number of seeded random arcs for the radial check.
        #[arg(long, default_value_t = 0)]
        arcs: usize,
        #[arg(long, default_value_t = 32)]
        rays: usize,
        #[arg(long, default_value_t = 32)]
        steps: usize,
        /// Trace samples per hull.
        #[arg(long, default_value_t = 8192)]
        hull_samples: usize,
    },
    /// Areas swept by a side and by the opposite side of the induced square.
    Area {
        /// Spiral file `{"x1": [re, im], "x2": [re, im], "a": [re, im]}`.
        file: Option<PathBuf>,
        /// Number of seeded random spirals instead of a file.
        #[arg(long, conflicts_with = "file")]
        random: Option<usize>,
        /// Quadrature strips.
        #[arg(long, default_value_t = 100_000)]
        steps: usize,
        /// Relative gap accepted as equal.
        #[arg(long, default_value_t = 5e-3)]
        rel_tol: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Shape {
    Random,
    Ellipse,
    Circle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurveFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct GenCurveArgs {
    #[arg(long, value_enum, default_value_t = Shape::Random)]
    pub shape: Shape,
    #[arg(long, default_value_t = 4)]
    pub harmonics: usize,
    #[arg(long, default_value_t = 0.15)]
    pub amplitude: f64,
    /// Ellipse semi-axis along x.
    #[arg(long, default_value_t = 2.0)]
    pub a: f64,
    /// Ellipse semi-axis along y.
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, value_enum, default_value_t = CurveFormat::Json)]
    pub format: CurveFormat,
    /// Write the curve here and print a report; otherwise print the curve.
    #[arg(short = 'o', long = "file")]
    pub file: Option<PathBuf>,
}

//! Inscribed squares on sampled Jordan curves, the degree and envelope
//! machinery around them, and the one-dimensional spiral and epitrochoid
//! checks used by the relation-avoiding path argument.

pub mod curve;
pub mod envelope;
pub mod field;
pub mod geometry;
pub mod io;
pub mod spiral;
pub mod squares;
pub mod trochoid;

pub use curve::{random_generic_curve, validate_curve, ClosedCurve, CurveError, ValidationReport};
pub use envelope::{
    antidiagonal_winding, lemma2_check, sigma_sign, trace_quadrant_components, verify_envelope, CylinderPath,
    EnvelopeCandidate, EnvelopeError, SigmaSigns,
};
pub use field::SignField;
pub use geometry::{rotate90, square_corners, winding_number, Point2};
pub use num_complex::Complex64;
pub use spiral::{
    derived_split_pair, find_spiral_angle, in_region_u, is_good, is_relation_avoiding, k_index, lift_log,
    random_pure_spiral, square_relation_holds, swept_area_pair, LiftedPath, MultiplierRelation, OriginPath1D, SplitPair,
};
pub use squares::{
    classify_square, count_by_type, find_inscribed_squares, g_map, in_region_a, prop2_case, SquareCandidate,
    SquareError, SquareType, TorusParam, TypeCounts,
};
pub use trochoid::{
    exists_solution, in_hull_h, monotonicity_check, radial_property_check, t_interval, trochoid_point, TrochoidArc, TrochoidInstance,
};

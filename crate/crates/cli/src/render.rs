//! Static SVG scenes. The view box is the frame's bounding box plus a 5%
//! margin on every side, with `y` pointing up.

use std::fmt::Write;

use squarescope_core::Point2;
use svg::node::element::{Circle, Group, Polygon, Polyline, Rectangle};
use svg::Document;

pub enum Layer {
    Closed { points: Vec<Point2>, stroke: &'static str, fill: &'static str },
    Open { points: Vec<Point2>, stroke: &'static str },
    Dots { points: Vec<Point2>, fill: &'static str },
}

const WIDTH_PX: f64 = 800.0;
const MARGIN: f64 = 0.05;

fn points_attr(points: &[Point2]) -> String {
    let mut s = String::new();
    for (k, p) in points.iter().enumerate() {
        if k > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{:.6},{:.6}", p.x, -p.y);
    }
    s
}

fn bounds(points: &[Point2]) -> (Point2, Point2) {
    let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points.iter().filter(|p| p.is_finite()) {
        lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    if !lo.is_finite() {
        return (Point2::new(-1.0, -1.0), Point2::new(1.0, 1.0));
    }
    (lo, hi)
}

/// View box `(x, y, w, h)` in SVG coordinates for a frame.
pub fn view_box(frame: &[Point2]) -> (f64, f64, f64, f64) {
    let (lo, hi) = bounds(frame);
    let w = (hi.x - lo.x).max(1e-12);
    let h = (hi.y - lo.y).max(1e-12);
    let (mx, my) = (MARGIN * w, MARGIN * h);
    (lo.x - mx, -(hi.y + my), w + 2.0 * mx, h + 2.0 * my)
}

/// Renders `layers` framed by `frame`.
pub fn render(frame: &[Point2], layers: &[Layer]) -> String {
    let (x, y, w, h) = view_box(frame);
    let height_px = (WIDTH_PX * h / w).clamp(50.0, 4000.0);
    let dot = 0.006 * w.max(h);
    let mut group = Group::new()
        .set("stroke-width", 1.5)
        .set("vector-effect", "non-scaling-stroke");
    for layer in layers {
        group = match layer {
            Layer::Closed { points, stroke, fill } => group.add(
                Polygon::new()
                    .set("points", points_attr(points))
                    .set("stroke", *stroke)
                    .set("fill", *fill)
                    .set("vector-effect", "non-scaling-stroke"),
            ),
            Layer::Open { points, stroke } => group.add(
                Polyline::new()
                    .set("points", points_attr(points))
                    .set("stroke", *stroke)
                    .set("fill", "none")
                    .set("vector-effect", "non-scaling-stroke"),
            ),
            Layer::Dots { points, fill } => points.iter().fold(group, |g, p| {
                g.add(
                    Circle::new()
                        .set("cx", format!("{:.6}", p.x))
                        .set("cy", format!("{:.6}", -p.y))
                        .set("r", dot)
                        .set("fill", *fill),
                )
            }),
        };
    }
    Document::new()
        .set("viewBox", (x, y, w, h))
        .set("width", WIDTH_PX)
        .set("height", height_px.round())
        .add(
            Rectangle::new()
                .set("x", x)
                .set("y", y)
                .set("width", w)
                .set("height", h)
                .set("fill", "white"),
        )
        .add(group)
        .to_string()
}

//! SVG output: dissections with optional vertex labels, and the chart of
//! all 3-self-affine parameters.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::dissection::{verify, Dissection};
use crate::error::{Error, Result};
use crate::families::{sample_curve, table1_solutions, Family, FamilyCurve};
use crate::geometry::{Point2, DEFAULT_TOL};
use crate::solver::Catalogue;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LabelMode {
    None,
    VertexNumbers,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RenderOptions {
    pub width: u32,
    pub height: u32,
    /// Stroke widths in pixels.
    pub piece_stroke: f64,
    pub outline_stroke: f64,
    pub labels: LabelMode,
    /// Blank border around the drawing, as a fraction of its extent.
    pub margin: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            width: 600,
            height: 600,
            piece_stroke: 1.0,
            outline_stroke: 2.5,
            labels: LabelMode::None,
            margin: 0.05,
        }
    }
}

impl RenderOptions {
    fn check(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::InvalidParams("image size must be positive".into()));
        }
        if !(self.piece_stroke > 0.0 && self.outline_stroke > 0.0) {
            return Err(Error::InvalidParams("stroke widths must be positive".into()));
        }
        if !(0.0..0.5).contains(&self.margin) {
            return Err(Error::InvalidParams("margin must lie in [0, 0.5)".into()));
        }
        Ok(())
    }
}

/// Fixed six-decimal number, with negative zero printed as zero.
fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn polyline(pts: &[Point2], close: bool) -> String {
    let mut d = String::new();
    for (i, p) in pts.iter().enumerate() {
        let _ = write!(d, "{}{} {}", if i == 0 { "M" } else { " L" }, num(p.x), num(p.y));
    }
    if close {
        d.push_str(" Z");
    }
    d
}

/// World-space canvas: the viewBox is in world units with `y` negated, and
/// drawing happens inside one `scale(1,-1)` group.
struct Canvas {
    min: Point2,
    max: Point2,
    /// World units per pixel.
    unit: f64,
    body: String,
}

impl Canvas {
    fn new(min: Point2, max: Point2, opts: &RenderOptions) -> Canvas {
        let (w, h) = ((max.x - min.x).max(1e-12), (max.y - min.y).max(1e-12));
        let grow = opts.margin / (1.0 - 2.0 * opts.margin);
        let min = Point2::new(min.x - grow * w, min.y - grow * h);
        let max = Point2::new(max.x + grow * w, max.y + grow * h);
        let unit = ((max.x - min.x) / opts.width as f64).max((max.y - min.y) / opts.height as f64);
        Canvas {
            min,
            max,
            unit,
            body: String::new(),
        }
    }

    fn path(&mut self, d: &str, class: &str, stroke_px: f64, fill: &str) {
        let _ = writeln!(
            self.body,
            "    <path class=\"{class}\" d=\"{d}\" fill=\"{fill}\" stroke=\"black\" stroke-width=\"{}\" stroke-linejoin=\"round\"/>",
            num(stroke_px * self.unit)
        );
    }

    fn dot(&mut self, p: Point2, radius_px: f64, class: &str) {
        let _ = writeln!(
            self.body,
            "    <circle class=\"{class}\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"black\"/>",
            num(p.x),
            num(p.y),
            num(radius_px * self.unit)
        );
    }

    fn finish(self, opts: &RenderOptions, labels: &[(Point2, String)]) -> Vec<u8> {
        let mut out = String::new();
        out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"{} {} {} {}\">",
            opts.width,
            opts.height,
            num(self.min.x),
            num(-self.max.y),
            num(self.max.x - self.min.x),
            num(self.max.y - self.min.y)
        );
        out.push_str("  <g transform=\"scale(1,-1)\">\n");
        out.push_str(&self.body);
        out.push_str("  </g>\n");
        if !labels.is_empty() {
            let _ = writeln!(
                out,
                "  <g font-family=\"sans-serif\" font-size=\"{}\" text-anchor=\"middle\" dominant-baseline=\"central\">",
                num(12.0 * self.unit)
            );
            for (p, text) in labels {
                let _ = writeln!(out, "    <text x=\"{}\" y=\"{}\">{text}</text>", num(p.x), num(-p.y));
            }
            out.push_str("  </g>\n");
        }
        out.push_str("</svg>\n");
        out.into_bytes()
    }
}

/// One path per piece plus the parent outline. With vertex numbers, the
/// corner of each piece that is the image of parent vertex `i` carries the
/// digit `i`, drawn slightly inside the piece.
pub fn render_dissection(d: &Dissection, opts: &RenderOptions) -> Result<Vec<u8>> {
    opts.check()?;
    let report = verify(d, DEFAULT_TOL);
    if !report.passed {
        return Err(Error::UnverifiedDissection);
    }
    let all: Vec<Point2> = d
        .parent
        .vertices
        .iter()
        .chain(d.pieces.iter().flat_map(|p| p.quad.vertices.iter()))
        .copied()
        .collect();
    let min = all.iter().fold(Point2::new(f64::INFINITY, f64::INFINITY), |m, p| {
        Point2::new(m.x.min(p.x), m.y.min(p.y))
    });
    let max = all.iter().fold(Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY), |m, p| {
        Point2::new(m.x.max(p.x), m.y.max(p.y))
    });
    let mut canvas = Canvas::new(min, max, opts);
    for p in &d.pieces {
        canvas.path(&polyline(&p.quad.vertices, true), "piece", opts.piece_stroke, "none");
    }
    canvas.path(&polyline(&d.parent.vertices, true), "parent", opts.outline_stroke, "none");

    let mut labels = Vec::new();
    if opts.labels == LabelMode::VertexNumbers {
        for p in &d.pieces {
            let vs = p.quad.vertices;
            let c = Point2::new(
                vs.iter().map(|v| v.x).sum::<f64>() / 4.0,
                vs.iter().map(|v| v.y).sum::<f64>() / 4.0,
            );
            for i in 0..4 {
                let corner = vs[p.perm.image(i)];
                labels.push((corner.lerp(c, 0.2), (i + 1).to_string()));
            }
        }
    }
    Ok(canvas.finish(opts, &labels))
}

/// Families whose curves are drawn: those traced in some catalogue, plus
/// `T` when trapezoids were shelved.
fn witnessed_families(catalogues: &[Catalogue]) -> BTreeSet<Family> {
    let mut out = BTreeSet::new();
    for c in catalogues {
        out.extend(c.curve_families().into_keys().flatten());
        if c.entries.iter().any(|e| e.solutions.trapezoidal_hits > 0) {
            out.insert(Family::T);
        }
    }
    out
}

/// Distance in which a catalogue point is identified with a singular value.
const DOT_MATCH: f64 = 1e-6;

/// The region of normalized parameters, each family curve witnessed by the
/// catalogues (polylines through 400 samples), and a dot for each singular
/// value some catalogue reached.
pub fn render_parameter_chart(catalogues: &[Catalogue], opts: &RenderOptions) -> Result<Vec<u8>> {
    opts.check()?;
    let mut canvas = Canvas::new(Point2::new(0.0, 0.5), Point2::new(1.0, 1.0), opts);
    let region = [Point2::new(0.0, 1.0), Point2::new(0.5, 0.5), Point2::new(1.0, 1.0)];
    canvas.path(&polyline(&region, true), "region", opts.piece_stroke, "#eeeeee");

    for fam in witnessed_families(catalogues) {
        let mut pts = vec![Point2::new(0.0, 1.0)];
        pts.extend(
            sample_curve(&FamilyCurve::new(fam), 400)
                .into_iter()
                .map(|(x, y)| Point2::new(x, y)),
        );
        if fam != Family::T {
            pts.push(Point2::new(1.0, 1.0));
        }
        canvas.path(&polyline(&pts, false), &format!("curve-{fam}"), opts.outline_stroke, "none");
    }

    for s in table1_solutions()? {
        let hit = catalogues.iter().any(|c| {
            c.isolated()
                .any(|(_, p)| (p.normalized[0] - s.value.0).hypot(p.normalized[1] - s.value.1) < DOT_MATCH)
        });
        if hit {
            canvas.dot(Point2::new(s.value.0, s.value.1), 3.0, &format!("singular S{}", s.id));
        }
    }
    Ok(canvas.finish(opts, &[]))
}

/// Piece outlines read back from a rendered dissection, in document order.
pub fn parse_piece_paths(svg: &str) -> Vec<Vec<Point2>> {
    let mut out = Vec::new();
    for line in svg.lines().filter(|l| l.contains("class=\"piece\"")) {
        let Some(start) = line.find(" d=\"") else { continue };
        let rest = &line[start + 4..];
        let d = &rest[..rest.find('"').unwrap_or(rest.len())];
        let nums: Vec<f64> = d
            .split(|c: char| c == 'M' || c == 'L' || c == 'Z' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .filter_map(|t| t.parse().ok())
            .collect();
        out.push(nums.chunks(2).map(|c| Point2::new(c[0], c[1])).collect());
    }
    out
}

//! Planar primitives: points, affine maps and quadrangles.
//!
//! Everything is plain `f64`. Predicates that need a tolerance take it
//! explicitly; [`DEFAULT_TOL`] is the library-wide default.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Default geometric tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn lerp(self, o: Point2, t: f64) -> Point2 {
        self + (o - self) * t
    }
}

impl From<(f64, f64)> for Point2 {
    fn from((x, y): (f64, f64)) -> Self {
        Point2 { x, y }
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// `(a11 a12; a21 a22) p + (a13, a23)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineMap2 {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
    pub a13: f64,
    pub a23: f64,
}

impl AffineMap2 {
    pub const IDENTITY: AffineMap2 = AffineMap2 {
        a11: 1.0,
        a12: 0.0,
        a21: 0.0,
        a22: 1.0,
        a13: 0.0,
        a23: 0.0,
    };

    pub const fn new(a11: f64, a12: f64, a21: f64, a22: f64, a13: f64, a23: f64) -> Self {
        AffineMap2 {
            a11,
            a12,
            a21,
            a22,
            a13,
            a23,
        }
    }

    /// Linear map with the given matrix rows and no translation.
    pub const fn linear(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Self::new(a11, a12, a21, a22, 0.0, 0.0)
    }

    /// The unique affine map sending `src[i]` to `dst[i]`.
    pub fn from_triples(src: [Point2; 3], dst: [Point2; 3]) -> Result<Self> {
        let e1 = src[1] - src[0];
        let e2 = src[2] - src[0];
        let det = e1.cross(e2);
        let scale = e1.norm() * e2.norm();
        if !(scale > 0.0) || (det / scale).abs() < DEFAULT_TOL {
            return Err(Error::CollinearSource);
        }
        let d1 = dst[1] - dst[0];
        let d2 = dst[2] - dst[0];
        // L = [d1 d2] [e1 e2]^-1
        let inv = 1.0 / det;
        let (i11, i12, i21, i22) = (e2.y * inv, -e2.x * inv, -e1.y * inv, e1.x * inv);
        let a11 = d1.x * i11 + d2.x * i21;
        let a12 = d1.x * i12 + d2.x * i22;
        let a21 = d1.y * i11 + d2.y * i21;
        let a22 = d1.y * i12 + d2.y * i22;
        let a13 = dst[0].x - (a11 * src[0].x + a12 * src[0].y);
        let a23 = dst[0].y - (a21 * src[0].x + a22 * src[0].y);
        Ok(Self::new(a11, a12, a21, a22, a13, a23))
    }

    pub fn apply(&self, p: Point2) -> Point2 {
        Point2::new(
            self.a11 * p.x + self.a12 * p.y + self.a13,
            self.a21 * p.x + self.a22 * p.y + self.a23,
        )
    }

    pub fn apply_all<const N: usize>(&self, ps: &[Point2; N]) -> [Point2; N] {
        ps.map(|p| self.apply(p))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &AffineMap2) -> AffineMap2 {
        let t = self.apply(Point2::new(other.a13, other.a23));
        AffineMap2::new(
            self.a11 * other.a11 + self.a12 * other.a21,
            self.a11 * other.a12 + self.a12 * other.a22,
            self.a21 * other.a11 + self.a22 * other.a21,
            self.a21 * other.a12 + self.a22 * other.a22,
            t.x,
            t.y,
        )
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn inverse(&self) -> Result<AffineMap2> {
        let det = self.det();
        let scale = self.a11.abs() + self.a12.abs() + self.a21.abs() + self.a22.abs();
        if !(det.abs() > 1e-12 * scale * scale) || !det.is_finite() {
            return Err(Error::SingularMap(det));
        }
        let (b11, b12, b21, b22) = (
            self.a22 / det,
            -self.a12 / det,
            -self.a21 / det,
            self.a11 / det,
        );
        Ok(AffineMap2::new(
            b11,
            b12,
            b21,
            b22,
            -(b11 * self.a13 + b12 * self.a23),
            -(b21 * self.a13 + b22 * self.a23),
        ))
    }

    /// `self` composed with itself `m` times (`m = 0` is the identity).
    pub fn pow(&self, m: usize) -> AffineMap2 {
        (0..m).fold(AffineMap2::IDENTITY, |acc, _| self.compose(&acc))
    }

    /// Coefficients in the order `[a11, a12, a21, a22, a13, a23]`.
    pub fn to_array(&self) -> [f64; 6] {
        [self.a11, self.a12, self.a21, self.a22, self.a13, self.a23]
    }

    pub fn from_array(a: [f64; 6]) -> Self {
        Self::new(a[0], a[1], a[2], a[3], a[4], a[5])
    }

    /// Largest coefficient difference.
    pub fn max_abs_diff(&self, o: &AffineMap2) -> f64 {
        self.to_array()
            .iter()
            .zip(o.to_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Signed doubled area of triangle `abc` (positive when counter-clockwise).
pub fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b - a).cross(c - a)
}

/// Signed area of a closed polygon (shoelace).
pub fn signed_area(ps: &[Point2]) -> f64 {
    let n = ps.len();
    0.5 * (0..n).map(|i| ps[i].cross(ps[(i + 1) % n])).sum::<f64>()
}

/// Distance from `p` to segment `ab`.
pub fn segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.dist(a + ab * t)
}

/// True when the open segments `p1p2` and `q1q2` cross at a single point
/// interior to both, with every endpoint at least `tol` away from the other
/// segment's supporting line. Touching and collinear overlap do not count.
pub fn segments_cross_properly(p1: Point2, p2: Point2, q1: Point2, q2: Point2, tol: f64) -> bool {
    let lq = q1.dist(q2);
    let lp = p1.dist(p2);
    if lq == 0.0 || lp == 0.0 {
        return false;
    }
    let d1 = orient(q1, q2, p1) / lq;
    let d2 = orient(q1, q2, p2) / lq;
    let d3 = orient(p1, p2, q1) / lp;
    let d4 = orient(p1, p2, q2) / lp;
    let separated = |a: f64, b: f64| (a > tol && b < -tol) || (a < -tol && b > tol);
    separated(d1, d2) && separated(d3, d4)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Containment {
    Inside,
    Boundary,
    Outside,
}

/// Locates `p` relative to the simple polygon `ps`; points within `tol` of
/// an edge are on the boundary.
pub fn locate(p: Point2, ps: &[Point2], tol: f64) -> Containment {
    let n = ps.len();
    for i in 0..n {
        if segment_distance(p, ps[i], ps[(i + 1) % n]) <= tol {
            return Containment::Boundary;
        }
    }
    let mut inside = false;
    for i in 0..n {
        let (a, b) = (ps[i], ps[(i + 1) % n]);
        if (a.y > p.y) != (b.y > p.y) {
            let xc = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < xc {
                inside = !inside;
            }
        }
    }
    if inside {
        Containment::Inside
    } else {
        Containment::Outside
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadKind {
    Convex,
    /// Non-convex with the reflex vertex at this (0-based) index.
    NonConvex { reflex: usize },
    Degenerate,
}

/// Four vertices in the given order together with their classification.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrangle {
    pub vertices: [Point2; 4],
    pub kind: QuadKind,
}

fn turn_signs(vs: &[Point2; 4]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (i, o) in out.iter_mut().enumerate() {
        let prev = vs[i] - vs[(i + 3) % 4];
        let next = vs[(i + 1) % 4] - vs[i];
        let scale = prev.norm() * next.norm();
        *o = if scale > 0.0 { prev.cross(next) / scale } else { 0.0 };
    }
    out
}

fn kind_of(vs: &[Point2; 4], tol: f64) -> std::result::Result<QuadKind, String> {
    if vs.iter().any(|p| !p.is_finite()) {
        return Err("non-finite vertex".into());
    }
    let turns = turn_signs(vs);
    if let Some(i) = turns.iter().position(|c| c.abs() < tol) {
        return Err(format!("vertex {} is collinear with its neighbours", i + 1));
    }
    for (a, b) in [(0, 2), (1, 3)] {
        if segments_cross_properly(vs[a], vs[(a + 1) % 4], vs[b], vs[(b + 1) % 4], 0.0) {
            return Err("boundary self-intersects".into());
        }
    }
    let pos = turns.iter().filter(|c| **c > 0.0).count();
    match pos {
        0 | 4 => Ok(QuadKind::Convex),
        1 => Ok(QuadKind::NonConvex {
            reflex: turns.iter().position(|c| *c > 0.0).unwrap(),
        }),
        3 => Ok(QuadKind::NonConvex {
            reflex: turns.iter().position(|c| *c < 0.0).unwrap(),
        }),
        _ => Err("boundary self-intersects".into()),
    }
}

impl Quadrangle {
    /// Classifies four vertices, rejecting degenerate input.
    pub fn classify(vertices: [Point2; 4], tol: f64) -> Result<Self> {
        let kind = kind_of(&vertices, tol).map_err(Error::DegenerateQuadrangle)?;
        Ok(Quadrangle { vertices, kind })
    }

    /// Like [`Quadrangle::classify`] but records degeneracy in `kind`.
    pub fn lenient(vertices: [Point2; 4], tol: f64) -> Self {
        let kind = kind_of(&vertices, tol).unwrap_or(QuadKind::Degenerate);
        Quadrangle { vertices, kind }
    }

    pub fn is_convex(&self) -> bool {
        self.kind == QuadKind::Convex
    }

    pub fn reflex_index(&self) -> Option<usize> {
        match self.kind {
            QuadKind::NonConvex { reflex } => Some(reflex),
            _ => None,
        }
    }

    pub fn signed_area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn edges(&self) -> [(Point2, Point2); 4] {
        let v = self.vertices;
        [(v[0], v[1]), (v[1], v[2]), (v[2], v[3]), (v[3], v[0])]
    }

    pub fn diameter(&self) -> f64 {
        let v = self.vertices;
        let mut d: f64 = 0.0;
        for i in 0..4 {
            for j in i + 1..4 {
                d = d.max(v[i].dist(v[j]));
            }
        }
        d
    }

    pub fn locate(&self, p: Point2, tol: f64) -> Containment {
        locate(p, &self.vertices, tol)
    }

    /// Two points strictly inside the quadrangle: the centroids of the
    /// triangles on either side of the diagonal through the reflex vertex
    /// (vertex 0 for convex quadrangles).
    pub fn interior_witnesses(&self) -> [Point2; 2] {
        let r = self.reflex_index().unwrap_or(0);
        let v = |k: usize| self.vertices[(r + k) % 4];
        let c1 = (v(0) + v(1) + v(2)) * (1.0 / 3.0);
        let c2 = (v(0) + v(2) + v(3)) * (1.0 / 3.0);
        [c1, c2]
    }

    pub fn map(&self, f: &AffineMap2) -> Quadrangle {
        Quadrangle {
            vertices: f.apply_all(&self.vertices),
            kind: self.kind,
        }
    }
}

//! Reduced dissection systems: piece layouts for the type-C analytic model
//! and the glass-cut templates, and the six residuals they induce.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::dual::{Dual, Scalar};
use crate::dissection::{Dissection, Perm, Piece};
use crate::error::{Error, Result};
use crate::geometry::{orient, Point2, Quadrangle, DEFAULT_TOL};

/// Piece layout of a three-piece dissection of `(0,0), (1,0), (x,y), (0,1)`.
///
/// Unknowns are always `(x, y)` followed by four layout parameters:
/// - `C`: interior vertex `(s,t)` and cut points `(m,0)`, `(0,n)`.
/// - `A13` / `A24`: two cuts joining the bottom and top sides (resp. the
///   right and left sides) at fractions `u1 < u2`, `v1 < v2`.
/// - `B13R`, `B13L`, `B24B`, `B24T`: a full cut (bottom–top or right–left)
///   at fractions `u`, `v`, and a sub-cut from the point at fraction `λ` of
///   the full cut to the right, left, bottom or top side at fraction `μ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Template {
    C,
    A13,
    A24,
    B13R,
    B13L,
    B24B,
    B24T,
}

impl Template {
    pub const ALL: [Template; 7] = [
        Template::C,
        Template::A13,
        Template::A24,
        Template::B13R,
        Template::B13L,
        Template::B24B,
        Template::B24T,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Template::C => "C",
            Template::A13 => "A13",
            Template::A24 => "A24",
            Template::B13R => "B13R",
            Template::B13L => "B13L",
            Template::B24B => "B24B",
            Template::B24T => "B24T",
        }
    }

    pub fn unknown_names(self) -> [&'static str; 6] {
        match self {
            Template::C => ["x", "y", "s", "t", "m", "n"],
            Template::A13 | Template::A24 => ["x", "y", "u1", "u2", "v1", "v2"],
            _ => ["x", "y", "u", "v", "lambda", "mu"],
        }
    }

    pub fn is_glass_cut(self) -> bool {
        self != Template::C
    }

    fn index(self) -> u64 {
        Template::ALL.iter().position(|t| *t == self).unwrap() as u64
    }

    /// Seed salt separating the templates' start sequences.
    pub(crate) fn salt(self) -> u64 {
        self.index()
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Template families selectable from the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TemplateGroup {
    A,
    B,
    C,
}

impl TemplateGroup {
    pub fn templates(self) -> &'static [Template] {
        match self {
            TemplateGroup::A => &[Template::A13, Template::A24],
            TemplateGroup::B => &[Template::B13R, Template::B13L, Template::B24B, Template::B24T],
            TemplateGroup::C => &[Template::C],
        }
    }
}

impl FromStr for TemplateGroup {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(TemplateGroup::A),
            "b" => Ok(TemplateGroup::B),
            "c" => Ok(TemplateGroup::C),
            _ => Err(Error::Format(format!("unknown template {s:?} (expected a, b or c)"))),
        }
    }
}

impl fmt::Display for TemplateGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TemplateGroup::A => "a",
            TemplateGroup::B => "b",
            TemplateGroup::C => "c",
        })
    }
}

/// Correspondences of the three pieces, in layout order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PermTriple(pub [Perm; 3]);

impl PermTriple {
    /// All 512 triples, ordered lexicographically by dihedral index.
    pub fn all() -> Vec<PermTriple> {
        let mut out = Vec::with_capacity(512);
        for a in Perm::DIHEDRAL {
            for b in Perm::DIHEDRAL {
                for c in Perm::DIHEDRAL {
                    out.push(PermTriple([a, b, c]));
                }
            }
        }
        out
    }

    pub fn index(self) -> usize {
        let i = |p: Perm| Perm::DIHEDRAL.iter().position(|q| *q == p).unwrap();
        i(self.0[0]) * 64 + i(self.0[1]) * 8 + i(self.0[2])
    }
}

impl fmt::Display for PermTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.0[0], self.0[1], self.0[2])
    }
}

impl FromStr for PermTriple {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split(',')
            .collect();
        if parts.len() != 3 {
            return Err(Error::Format(format!("expected three correspondences, got {s:?}")));
        }
        Ok(PermTriple([parts[0].parse()?, parts[1].parse()?, parts[2].parse()?]))
    }
}

impl Serialize for PermTriple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PermTriple {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

type Pt<S> = (S, S);

fn lerp<S: Scalar>(a: Pt<S>, b: Pt<S>, t: S) -> Pt<S> {
    (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1))
}

/// Vertices of the three pieces, each counter-clockwise.
pub fn layout<S: Scalar>(template: Template, u: &[S; 6]) -> [[Pt<S>; 4]; 3] {
    let (zero, one) = (S::cst(0.0), S::cst(1.0));
    let (x, y) = (u[0], u[1]);
    let q1 = (zero, zero);
    let q2 = (one, zero);
    let q3 = (x, y);
    let q4 = (zero, one);
    // Points at a fraction along the bottom (from q1), right (from q2),
    // top (from q4) and left (from q1) sides.
    let bot = |a: S| (a, zero);
    let right = |a: S| lerp(q2, q3, a);
    let top = |a: S| lerp(q4, q3, a);
    let left = |a: S| (zero, a);
    match template {
        Template::C => {
            let (s, m, n) = ((u[2], u[3]), u[4], u[5]);
            [
                [q1, bot(m), s, left(n)],
                [q2, q3, s, bot(m)],
                [q4, left(n), s, q3],
            ]
        }
        Template::A13 => {
            let (b1, b2, t1, t2) = (bot(u[2]), bot(u[3]), top(u[4]), top(u[5]));
            [[q1, b1, t1, q4], [b1, b2, t2, t1], [b2, q2, q3, t2]]
        }
        Template::A24 => {
            let (r1, r2, l1, l2) = (right(u[2]), right(u[3]), left(u[4]), left(u[5]));
            [[q1, q2, r1, l1], [l1, r1, r2, l2], [l2, r2, q3, q4]]
        }
        Template::B13R | Template::B13L => {
            let (b, t) = (bot(u[2]), top(u[3]));
            let w = lerp(b, t, u[4]);
            if template == Template::B13R {
                let e = right(u[5]);
                [[q1, b, t, q4], [b, q2, e, w], [w, e, q3, t]]
            } else {
                let e = left(u[5]);
                [[b, q2, q3, t], [q1, b, w, e], [e, w, t, q4]]
            }
        }
        Template::B24B | Template::B24T => {
            let (r, l) = (right(u[2]), left(u[3]));
            let w = lerp(l, r, u[4]);
            if template == Template::B24B {
                let e = bot(u[5]);
                [[l, r, q3, q4], [q1, e, w, l], [e, q2, r, w]]
            } else {
                let e = top(u[5]);
                [[q1, q2, r, l], [l, w, e, q4], [w, r, q3, e]]
            }
        }
    }
}

/// The six residuals: for each piece `P` with correspondence `π`, the map
/// fixed by `q1, q2, q4 -> P[π1], P[π2], P[π4]` must send `q3 = (x,y)` to
/// `P[π3]`.
pub fn residuals<S: Scalar>(template: Template, triple: PermTriple, u: &[S; 6]) -> [S; 6] {
    let pieces = layout(template, u);
    let (x, y) = (u[0], u[1]);
    let mut r = [S::cst(0.0); 6];
    for (k, (piece, perm)) in pieces.iter().zip(triple.0).enumerate() {
        let v = |i: usize| piece[perm.image(i)];
        let (a, b, c, d) = (v(0), v(1), v(2), v(3));
        r[2 * k] = a.0 + x * (b.0 - a.0) + y * (d.0 - a.0) - c.0;
        r[2 * k + 1] = a.1 + x * (b.1 - a.1) + y * (d.1 - a.1) - c.1;
    }
    r
}

/// Residuals and Jacobian (row-major) at `u`.
pub fn residuals_and_jacobian(template: Template, triple: PermTriple, u: &[f64; 6]) -> ([f64; 6], [[f64; 6]; 6]) {
    let du: [Dual; 6] = std::array::from_fn(|i| Dual::var(u[i], i));
    let r = residuals(template, triple, &du);
    (r.map(|d| d.v), r.map(|d| d.d))
}

/// A dissection system for one template and one triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReducedSystem {
    pub template: Template,
    pub triple: PermTriple,
}

/// Builds the reduced 6×6 system.
pub fn build_system(triple: PermTriple, template: Template) -> ReducedSystem {
    ReducedSystem { template, triple }
}

impl ReducedSystem {
    pub fn residual(&self, u: &[f64; 6]) -> [f64; 6] {
        residuals(self.template, self.triple, u)
    }

    pub fn residual_norm(&self, u: &[f64; 6]) -> f64 {
        self.residual(u).iter().fold(0.0, |m, r| m.max(r.abs()))
    }

    pub fn jacobian(&self, u: &[f64; 6]) -> ([f64; 6], [[f64; 6]; 6]) {
        residuals_and_jacobian(self.template, self.triple, u)
    }

    /// Whether `u` describes a genuine layout with every part at least
    /// `margin` away from degenerating: convex parent with `x <= y`, cut
    /// parameters strictly inside their ranges, every piece with positive
    /// area.
    pub fn admissible(&self, u: &[f64; 6], margin: f64) -> bool {
        let (x, y) = (u[0], u[1]);
        if !(x > margin && y > margin && x + y > 1.0 + margin && x <= y + 1e-9) {
            return false;
        }
        let inside = |t: f64| t > margin && t < 1.0 - margin;
        let ok = match self.template {
            Template::C => {
                let s = Point2::new(u[2], u[3]);
                let q = [
                    Point2::new(0.0, 0.0),
                    Point2::new(1.0, 0.0),
                    Point2::new(x, y),
                    Point2::new(0.0, 1.0),
                ];
                inside(u[4])
                    && inside(u[5])
                    && (0..4).all(|i| {
                        let (a, b) = (q[i], q[(i + 1) % 4]);
                        orient(a, b, s) / a.dist(b) > margin
                    })
            }
            Template::A13 | Template::A24 => {
                inside(u[2])
                    && inside(u[3])
                    && inside(u[4])
                    && inside(u[5])
                    && u[3] - u[2] > margin
                    && u[5] - u[4] > margin
            }
            _ => u[2..].iter().all(|t| inside(*t)),
        };
        ok && layout(self.template, u).iter().all(|piece| {
            let pts = piece.map(|(a, b)| Point2::new(a, b));
            crate::geometry::signed_area(&pts) > margin
        })
    }

    /// The parent quadrangle `(0,0), (1,0), (x,y), (0,1)`.
    pub fn parent(&self, u: &[f64; 6]) -> Quadrangle {
        Quadrangle::lenient(
            [
                Point2::new(0.0, 0.0),
                Point2::new(1.0, 0.0),
                Point2::new(u[0], u[1]),
                Point2::new(0.0, 1.0),
            ],
            DEFAULT_TOL,
        )
    }

    /// Pieces with maps computed from three correspondences each.
    pub fn materialize(&self, u: &[f64; 6]) -> Result<Dissection> {
        let parent = self.parent(u);
        let pieces = layout(self.template, u)
            .iter()
            .zip(self.triple.0)
            .map(|(piece, perm)| {
                let vs = piece.map(|(a, b)| Point2::new(a, b));
                Piece::from_vertices(&parent, vs, perm)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Dissection::new(parent, None, pieces))
    }
}

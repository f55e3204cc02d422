//! Dissections of a quadrangle into affine images of a prototile: data model,
//! verifier, combinatorial type, refinement, congruence signatures and the
//! JSON exchange format.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    segment_distance, segments_cross_properly, AffineMap2, Containment, Point2, Quadrangle,
    DEFAULT_TOL,
};

/// Smallest admissible `|det|` of a piece map.
pub const MIN_DET: f64 = 1e-12;

/// A vertex correspondence `(ijkl)` meaning `1 -> i, 2 -> j, 3 -> k, 4 -> l`.
/// Only the eight symmetries of the square are allowed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm([u8; 4]);

impl Perm {
    pub const IDENTITY: Perm = Perm([1, 2, 3, 4]);

    /// Rotations first, then reflections.
    pub const DIHEDRAL: [Perm; 8] = [
        Perm([1, 2, 3, 4]),
        Perm([2, 3, 4, 1]),
        Perm([3, 4, 1, 2]),
        Perm([4, 1, 2, 3]),
        Perm([1, 4, 3, 2]),
        Perm([2, 1, 4, 3]),
        Perm([3, 2, 1, 4]),
        Perm([4, 3, 2, 1]),
    ];

    /// Builds a correspondence from 0-based images, rejecting anything outside
    /// the dihedral set.
    pub fn from_images(images: [usize; 4]) -> Option<Perm> {
        let digits = images.map(|i| i as u8 + 1);
        Perm::DIHEDRAL.into_iter().find(|p| p.0 == digits)
    }

    /// 0-based image of the 0-based index `i`.
    pub fn image(self, i: usize) -> usize {
        self.0[i] as usize - 1
    }

    pub fn digits(self) -> [u8; 4] {
        self.0
    }

    pub fn inverse(self) -> Perm {
        let mut out = [0u8; 4];
        for i in 0..4 {
            out[self.image(i)] = i as u8 + 1;
        }
        Perm(out)
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(self, other: Perm) -> Perm {
        let mut out = [0u8; 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.0[other.image(i)];
        }
        Perm(out)
    }

    /// Whether the correspondence keeps the cyclic orientation of the labels.
    pub fn is_rotation(self) -> bool {
        Perm::DIHEDRAL[..4].contains(&self)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl FromStr for Perm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Perm> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        let bad = || Error::Format(format!("invalid vertex correspondence {s:?}"));
        let digits: Vec<u8> = s
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(bad))
            .collect::<Result<_>>()?;
        let digits: [u8; 4] = digits.try_into().map_err(|_| bad())?;
        Perm::DIHEDRAL.into_iter().find(|p| p.0 == digits).ok_or_else(bad)
    }
}

impl Serialize for Perm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Perm, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CType {
    A,
    B,
    C,
    #[serde(rename = "other")]
    Other,
}

impl fmt::Display for CType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CType::A => "A",
            CType::B => "B",
            CType::C => "C",
            CType::Other => "other",
        })
    }
}

/// One piece: its own vertex labelling, the map from the prototile and the
/// correspondence, with `map(prototile[i]) = vertices[perm(i)]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Piece {
    pub quad: Quadrangle,
    pub map: AffineMap2,
    pub perm: Perm,
}

impl Piece {
    /// The piece `map(source)` labelled in the source's order.
    pub fn from_map(source: &Quadrangle, map: AffineMap2) -> Piece {
        Piece {
            quad: source.map(&map),
            map,
            perm: Perm::IDENTITY,
        }
    }

    /// Computes the map from three of the four correspondences.
    pub fn from_vertices(source: &Quadrangle, vertices: [Point2; 4], perm: Perm) -> Result<Piece> {
        let src = [source.vertices[0], source.vertices[1], source.vertices[2]];
        let dst = [0, 1, 2].map(|i| vertices[perm.image(i)]);
        let map = AffineMap2::from_triples(src, dst)?;
        Ok(Piece {
            quad: Quadrangle {
                vertices,
                kind: source.kind,
            },
            map,
            perm,
        })
    }

    /// Largest distance between `map(source[i])` and `vertices[perm(i)]`.
    pub fn affine_residual(&self, source: &Quadrangle) -> f64 {
        (0..4)
            .map(|i| self.map.apply(source.vertices[i]).dist(self.quad.vertices[self.perm.image(i)]))
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dissection {
    pub parent: Quadrangle,
    /// The quadrangle whose images form the pieces, when it differs from the
    /// parent (e.g. a chain of copies of a smaller non-convex quadrangle).
    pub prototile: Option<Quadrangle>,
    pub pieces: Vec<Piece>,
    pub ctype: CType,
}

impl Dissection {
    /// Assembles a dissection and detects its combinatorial type
    /// (`Other` unless there are exactly three pieces).
    pub fn new(parent: Quadrangle, prototile: Option<Quadrangle>, pieces: Vec<Piece>) -> Self {
        let mut d = Dissection {
            parent,
            prototile,
            pieces,
            ctype: CType::Other,
        };
        d.ctype = combinatorial_type(&d).unwrap_or(CType::Other);
        d
    }

    /// The quadrangle mapped onto every piece.
    pub fn source(&self) -> &Quadrangle {
        self.prototile.as_ref().unwrap_or(&self.parent)
    }

    pub fn is_self_affine(&self) -> bool {
        self.prototile.is_none()
    }

    /// Applies `f` to everything; maps are conjugated so they keep sending
    /// the (transformed) prototile onto the (transformed) pieces.
    pub fn transformed(&self, f: &AffineMap2) -> Result<Dissection> {
        let finv = f.inverse()?;
        Ok(Dissection {
            parent: self.parent.map(f),
            prototile: self.prototile.map(|q| q.map(f)),
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece {
                    quad: p.quad.map(f),
                    map: f.compose(&p.map).compose(&finv),
                    perm: p.perm,
                })
                .collect(),
            ctype: self.ctype,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&DissectionJson::from(self)).expect("dissection serializes")
    }

    pub fn from_json(s: &str) -> Result<Dissection> {
        let j: DissectionJson = serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
        j.try_into()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    SingularMap { piece: usize, det: f64 },
    EdgeCrossing { piece: usize, other: usize },
    Overlap { piece: usize, other: usize },
    CrossesBoundary { piece: usize },
    OutsideParent { piece: usize, vertex: usize },
    AreaDefect { relative: f64 },
    NoPieces,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub passed: bool,
    /// `|area(parent) - Σ area(pieces)| / area(parent)`.
    pub area_defect: f64,
    /// Largest vertex mismatch, relative to the parent diameter.
    pub max_affine_residual: f64,
    pub disjointness_violations: Vec<Violation>,
    pub coverage_violations: Vec<Violation>,
}

/// Checks that the pieces are affine copies of the prototile with matching
/// vertices, that their interiors are pairwise disjoint and that they tile
/// the parent. Distances are measured relative to the parent diameter.
pub fn verify(d: &Dissection, tol: f64) -> VerificationReport {
    let src = d.source();
    let scale = d.parent.diameter().max(f64::MIN_POSITIVE);
    let dtol = tol * scale;
    let mut disjoint = Vec::new();
    let mut coverage = Vec::new();

    if d.pieces.is_empty() {
        coverage.push(Violation::NoPieces);
    }

    let mut max_res: f64 = 0.0;
    for (k, p) in d.pieces.iter().enumerate() {
        max_res = max_res.max(p.affine_residual(src) / scale);
        let det = p.map.det();
        if !(det.abs() > MIN_DET) {
            coverage.push(Violation::SingularMap { piece: k, det });
        }
    }

    let parent_area = d.parent.area();
    let total: f64 = d.pieces.iter().map(|p| p.quad.area()).sum();
    let area_defect = if parent_area > 0.0 {
        (parent_area - total).abs() / parent_area
    } else {
        f64::INFINITY
    };
    if !(area_defect <= tol) {
        coverage.push(Violation::AreaDefect {
            relative: area_defect,
        });
    }

    for (k, p) in d.pieces.iter().enumerate() {
        for (i, v) in p.quad.vertices.iter().enumerate() {
            if d.parent.locate(*v, dtol) == Containment::Outside {
                coverage.push(Violation::OutsideParent { piece: k, vertex: i });
            }
        }
        let crosses = p.quad.edges().iter().any(|(a, b)| {
            d.parent
                .edges()
                .iter()
                .any(|(c, e)| segments_cross_properly(*a, *b, *c, *e, dtol))
        });
        if crosses {
            coverage.push(Violation::CrossesBoundary { piece: k });
        }
    }

    for a in 0..d.pieces.len() {
        for b in a + 1..d.pieces.len() {
            let (pa, pb) = (&d.pieces[a].quad, &d.pieces[b].quad);
            let crossing = pa.edges().iter().any(|(p1, p2)| {
                pb.edges()
                    .iter()
                    .any(|(q1, q2)| segments_cross_properly(*p1, *p2, *q1, *q2, dtol))
            });
            if crossing {
                disjoint.push(Violation::EdgeCrossing { piece: a, other: b });
            }
            let inside = |x: &Quadrangle, y: &Quadrangle| {
                x.interior_witnesses()
                    .iter()
                    .chain(x.vertices.iter())
                    .any(|w| y.locate(*w, dtol) == Containment::Inside)
            };
            if inside(pa, pb) || inside(pb, pa) {
                disjoint.push(Violation::Overlap { piece: a, other: b });
            }
        }
    }

    let passed = max_res <= tol && disjoint.is_empty() && coverage.is_empty();
    VerificationReport {
        passed,
        area_defect,
        max_affine_residual: max_res,
        disjointness_violations: disjoint,
        coverage_violations: coverage,
    }
}

/// Distinct dissection vertices after merging points closer than `tol`.
/// Each entry lists the pieces having the point as a vertex.
fn unified_vertices(d: &Dissection, tol: f64) -> Vec<(Point2, BTreeSet<usize>)> {
    let mut out: Vec<(Point2, BTreeSet<usize>)> = Vec::new();
    for (k, p) in d.pieces.iter().enumerate() {
        for v in p.quad.vertices {
            match out.iter_mut().find(|(q, _)| q.dist(v) <= tol) {
                Some((_, set)) => {
                    set.insert(k);
                }
                None => out.push((v, BTreeSet::from([k]))),
            }
        }
    }
    out
}

/// Incidence pattern of a three-piece dissection: `A` has no interior
/// vertex and four cut points on the open sides, `B` one interior vertex
/// shared by two pieces, `C` one interior vertex shared by all three.
pub fn combinatorial_type(d: &Dissection) -> Result<CType> {
    if d.pieces.len() != 3 {
        return Err(Error::NotThreePieces(d.pieces.len()));
    }
    let tol = DEFAULT_TOL * d.parent.diameter();
    let mut interior = Vec::new();
    let mut side_points = 0;
    for (p, pieces) in unified_vertices(d, tol) {
        let corner = d.parent.vertices.iter().any(|v| v.dist(p) <= tol);
        if corner {
            continue;
        }
        let on_side = d
            .parent
            .edges()
            .iter()
            .any(|(a, b)| segment_distance(p, *a, *b) <= tol);
        if on_side {
            side_points += 1;
        } else {
            interior.push(pieces.len());
        }
    }
    Ok(match (interior.as_slice(), side_points) {
        ([], 4) => CType::A,
        ([2], _) => CType::B,
        ([3], _) => CType::C,
        _ => CType::Other,
    })
}

/// An affine map sending `src` onto `dst` with `map(src[i]) = dst[perm(i)]`,
/// trying the eight correspondences in order.
pub fn map_onto(src: &Quadrangle, dst: &Quadrangle, tol: f64) -> Result<(AffineMap2, Perm)> {
    let scale = dst.diameter().max(f64::MIN_POSITIVE);
    for perm in Perm::DIHEDRAL {
        let s = [src.vertices[0], src.vertices[1], src.vertices[2]];
        let t = [0, 1, 2].map(|i| dst.vertices[perm.image(i)]);
        let Ok(map) = AffineMap2::from_triples(s, t) else {
            continue;
        };
        if map.apply(src.vertices[3]).dist(dst.vertices[perm.image(3)]) <= tol * scale {
            return Ok((map, perm));
        }
    }
    Err(Error::TypeMismatch)
}

/// Correspondence of `vertices` against `map(source)`.
fn match_perm(source: &Quadrangle, map: &AffineMap2, vertices: &[Point2; 4], tol: f64) -> Option<Perm> {
    let images = source.vertices.map(|v| map.apply(v));
    let mut idx = [0usize; 4];
    for (i, img) in images.iter().enumerate() {
        idx[i] = vertices.iter().position(|v| v.dist(*img) <= tol)?;
    }
    Perm::from_images(idx)
}

/// Replaces piece `piece_index` of `d` by an affine image of the dissection
/// `sub`, whose parent must be of the same affine type as that piece.
pub fn refine(d: &Dissection, piece_index: usize, sub: &Dissection) -> Result<Dissection> {
    let target = d
        .pieces
        .get(piece_index)
        .ok_or_else(|| Error::InvalidParams(format!("no piece {piece_index}")))?;
    let src = d.source();
    let tol = 1e-7;
    // phi: sub.parent -> d's prototile, psi: d's prototile -> sub's prototile.
    let (phi, _) = map_onto(&sub.parent, src, tol)?;
    let (psi, _) = map_onto(src, sub.source(), tol)?;
    let outer = target.map.compose(&phi);
    let scale = d.parent.diameter();

    let mut pieces: Vec<Piece> = Vec::with_capacity(d.pieces.len() + sub.pieces.len() - 1);
    for (k, p) in d.pieces.iter().enumerate() {
        if k != piece_index {
            pieces.push(p.clone());
            continue;
        }
        for sp in &sub.pieces {
            let map = outer.compose(&sp.map).compose(&psi);
            let quad = sp.quad.map(&outer);
            let perm = match_perm(src, &map, &quad.vertices, 1e-7 * scale).ok_or(Error::TypeMismatch)?;
            pieces.push(Piece { quad, map, perm });
        }
    }
    Ok(Dissection::new(d.parent, d.prototile, pieces))
}

/// The same dissection carried by an affine map onto `target` (a
/// quadrangle of the same affine type), with `target`'s vertex order as the
/// new parent order. Only for self-affine dissections.
pub fn relabel_onto(d: &Dissection, target: &Quadrangle) -> Result<Dissection> {
    if !d.is_self_affine() {
        return Err(Error::NotApplicable("dissection has a separate prototile".into()));
    }
    let (f, _) = map_onto(&d.parent, target, 1e-7)?;
    let moved = d.transformed(&f)?;
    let scale = target.diameter();
    let pieces = moved
        .pieces
        .iter()
        .map(|p| {
            let perm = match_perm(target, &p.map, &p.quad.vertices, 1e-7 * scale).ok_or(Error::TypeMismatch)?;
            Ok(Piece {
                quad: p.quad,
                map: p.map,
                perm,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Dissection::new(*target, None, pieces))
}

/// Canonical text identifying a dissection up to affine maps and piece
/// order: for each of the eight ways to pin three consecutive parent
/// vertices to `(0,1), (0,0), (1,0)`, every piece is written as its four
/// vertices (in prototile order, relabelled alongside the parent) quantized
/// at 1e-6; pieces are sorted and the smallest of the eight texts wins.
pub fn equivalence_signature(d: &Dissection) -> String {
    const Q: f64 = 1e6;
    let frame = [Point2::new(0.0, 1.0), Point2::ORIGIN, Point2::new(1.0, 0.0)];
    let src = d.source();
    let mut best: Option<String> = None;
    for sigma in Perm::DIHEDRAL {
        let pv = [0, 1, 2].map(|i| d.parent.vertices[sigma.image(i)]);
        let Ok(f) = AffineMap2::from_triples(pv, frame) else {
            continue;
        };
        let mut records: Vec<String> = d
            .pieces
            .iter()
            .map(|p| {
                (0..4)
                    .map(|i| {
                        let v = f.apply(p.map.apply(src.vertices[sigma.image(i)]));
                        let qx = (v.x * Q).round() as i64;
                        let qy = (v.y * Q).round() as i64;
                        format!("{qx},{qy}")
                    })
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        records.sort();
        let text = records.join("|");
        if best.as_ref().is_none_or(|b| text < *b) {
            best = Some(text);
        }
    }
    best.unwrap_or_default()
}

#[derive(Serialize, Deserialize)]
struct PieceJson {
    vertices: [[f64; 2]; 4],
    map: [f64; 6],
    perm: Perm,
}

#[derive(Serialize, Deserialize)]
struct DissectionJson {
    parent: [[f64; 2]; 4],
    pieces: Vec<PieceJson>,
    ctype: CType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    prototile: Option<[[f64; 2]; 4]>,
}

fn pts(q: &Quadrangle) -> [[f64; 2]; 4] {
    q.vertices.map(|p| [p.x, p.y])
}

fn quad(v: [[f64; 2]; 4]) -> Quadrangle {
    Quadrangle::lenient(v.map(|[x, y]| Point2::new(x, y)), DEFAULT_TOL)
}

impl Serialize for Dissection {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DissectionJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Dissection {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Dissection, D::Error> {
        DissectionJson::deserialize(d)?.try_into().map_err(serde::de::Error::custom)
    }
}

impl From<&Dissection> for DissectionJson {
    fn from(d: &Dissection) -> Self {
        DissectionJson {
            parent: pts(&d.parent),
            pieces: d
                .pieces
                .iter()
                .map(|p| PieceJson {
                    vertices: pts(&p.quad),
                    map: p.map.to_array(),
                    perm: p.perm,
                })
                .collect(),
            ctype: d.ctype,
            prototile: d.prototile.as_ref().map(pts),
        }
    }
}

impl TryFrom<DissectionJson> for Dissection {
    type Error = Error;
    fn try_from(j: DissectionJson) -> Result<Dissection> {
        let finite = |v: &[[f64; 2]; 4]| v.iter().flatten().all(|c| c.is_finite());
        if !finite(&j.parent)
            || j.pieces.iter().any(|p| !finite(&p.vertices) || p.map.iter().any(|c| !c.is_finite()))
        {
            return Err(Error::Format("non-finite coordinate".into()));
        }
        Ok(Dissection {
            parent: quad(j.parent),
            prototile: j.prototile.map(quad),
            pieces: j
                .pieces
                .into_iter()
                .map(|p| Piece {
                    quad: quad(p.vertices),
                    map: AffineMap2::from_array(p.map),
                    perm: p.perm,
                })
                .collect(),
            ctype: j.ctype,
        })
    }
}

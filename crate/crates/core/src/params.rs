//! Natural parametrization `Q[x,y]` of affine types of convex quadrangles.
//!
//! An affine type is encoded by the image `(x, y)` of the fourth vertex once
//! three consecutive vertices are sent to `(0,1)`, `(0,0)`, `(1,0)`. The
//! eight choices of three consecutive vertices give eight encodings related by
//! the substitutions implemented on [`Region`]; exactly one of them lies in the
//! canonical region `P = {x+y > 1, y <= 1, x <= y}`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The eight canonical regions, one per parametrization of an affine type.
/// A region also names the substitution taking the `P` representative into it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Region {
    #[serde(rename = "P")]
    P,
    #[serde(rename = "Pprime")]
    P1,
    #[serde(rename = "P2prime")]
    P2,
    #[serde(rename = "P3prime")]
    P3,
    #[serde(rename = "Pbar")]
    PBar,
    #[serde(rename = "Pbarprime")]
    PBar1,
    #[serde(rename = "Pbar2prime")]
    PBar2,
    #[serde(rename = "Pbar3prime")]
    PBar3,
}

impl Region {
    pub const ALL: [Region; 8] = [
        Region::P,
        Region::P1,
        Region::P2,
        Region::P3,
        Region::PBar,
        Region::PBar1,
        Region::PBar2,
        Region::PBar3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Region::P => "P",
            Region::P1 => "Pprime",
            Region::P2 => "P2prime",
            Region::P3 => "P3prime",
            Region::PBar => "Pbar",
            Region::PBar1 => "Pbarprime",
            Region::PBar2 => "Pbar2prime",
            Region::PBar3 => "Pbar3prime",
        }
    }

    /// The substitution named by this region, applied to `(x, y)`.
    pub fn substitute(self, x: f64, y: f64) -> (f64, f64) {
        let s = x + y - 1.0;
        match self {
            Region::P => (x, y),
            Region::P1 => (1.0 / y, s / y),
            Region::P2 => (y / s, x / s),
            Region::P3 => (s / x, 1.0 / x),
            Region::PBar => (y, x),
            Region::PBar1 => (s / y, 1.0 / y),
            Region::PBar2 => (x / s, y / s),
            Region::PBar3 => (1.0 / x, s / x),
        }
    }

    /// The substitution undoing this one. `'` and `'''` are mutually inverse
    /// rotations; all others are involutions.
    pub fn inverse(self) -> Region {
        match self {
            Region::P1 => Region::P3,
            Region::P3 => Region::P1,
            r => r,
        }
    }

    /// Membership in the region's inequality system, relaxed by `tol` on the
    /// non-strict inequalities.
    pub fn contains(self, x: f64, y: f64, tol: f64) -> bool {
        match self {
            Region::P => x + y > 1.0 && y <= 1.0 + tol && x <= y + tol,
            Region::P1 => y > 0.0 && x >= 1.0 - tol && x + y <= 2.0 + tol,
            Region::P2 => y >= 1.0 - tol && x >= y - tol,
            Region::P3 => x > 0.0 && x <= 1.0 + tol && x + y >= 2.0 - tol,
            Region::PBar => x + y > 1.0 && x <= 1.0 + tol && x >= y - tol,
            Region::PBar1 => x > 0.0 && y >= 1.0 - tol && x + y <= 2.0 + tol,
            Region::PBar2 => x >= 1.0 - tol && x <= y + tol,
            Region::PBar3 => y > 0.0 && y <= 1.0 + tol && x + y >= 2.0 - tol,
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Region {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Region::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::Format(format!("unknown region {s:?}")))
    }
}

/// A parameter pair with the region it is labelled with.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NaturalParams {
    pub x: f64,
    pub y: f64,
    pub region: Region,
}

/// Checks `x > 0, y > 0, x + y > 1` (the convexity domain).
pub fn check_convex_domain(x: f64, y: f64) -> Result<()> {
    if x.is_finite() && y.is_finite() && x > 0.0 && y > 0.0 && x + y > 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!(
            "({x}, {y}) violates x > 0, y > 0, x + y > 1"
        )))
    }
}

const SNAP: f64 = 1e-9;

fn snap_canonical(x: f64, y: f64) -> (f64, f64) {
    let y = if (y - 1.0).abs() < SNAP { 1.0 } else { y };
    let x = if (x - 1.0).abs() < SNAP && y == 1.0 { 1.0 } else { x };
    let x = if (x - y).abs() < SNAP { y } else { x };
    (x, y)
}

/// All eight parametrizations of the affine type `Q[x,y]`, in the order
/// identity, `'`, `''`, `'''`, bar, bar`'`, bar`''`, bar`'''` applied to the
/// input. Each is labelled with the region it falls in.
pub fn eight_parametrizations(x: f64, y: f64) -> Result<[NaturalParams; 8]> {
    let canon = normalize_to_p(x, y)?;
    let (cx, cy) = (canon.params.x, canon.params.y);
    Ok(Region::ALL.map(|sub| {
        let (u, v) = sub.substitute(x, y);
        let region = Region::ALL
            .into_iter()
            .find(|r| {
                let (a, b) = r.substitute(cx, cy);
                (a - u).abs() <= 1e-9 * a.abs().max(1.0) && (b - v).abs() <= 1e-9 * b.abs().max(1.0)
            })
            .unwrap_or(sub);
        NaturalParams { x: u, y: v, region }
    }))
}

/// Result of reducing a parameter pair to the canonical region.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Normalized {
    /// The representative in `P` (region label `P`).
    pub params: NaturalParams,
    /// Region of the input, i.e. `input = input_region.substitute(params)`.
    pub input_region: Region,
    /// The substitution that was applied to the input.
    pub applied: Region,
}

/// Reduces `(x, y)` to its unique representative in `P`. Values within 1e-9
/// of the boundaries `y = 1` and `x = y` are snapped onto them.
pub fn normalize_to_p(x: f64, y: f64) -> Result<Normalized> {
    check_convex_domain(x, y)?;
    for sub in Region::ALL {
        let (u, v) = sub.substitute(x, y);
        if Region::P.contains(u, v, SNAP) {
            let (u, v) = snap_canonical(u, v);
            return Ok(Normalized {
                params: NaturalParams {
                    x: u,
                    y: v,
                    region: Region::P,
                },
                input_region: sub.inverse(),
                applied: sub,
            });
        }
    }
    // Unreachable for inputs in the convex domain; kept as an error rather
    // than a panic because the inputs are floating point.
    Err(Error::InvalidParams(format!(
        "no parametrization of ({x}, {y}) lies in P"
    )))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeClass {
    Parallelogram,
    Trapezoid,
    AffineKite,
    Generic,
}

impl fmt::Display for ShapeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ShapeClass::Parallelogram => "parallelogram",
            ShapeClass::Trapezoid => "trapezoid",
            ShapeClass::AffineKite => "affine_kite",
            ShapeClass::Generic => "generic",
        })
    }
}

pub fn classify_shape(x: f64, y: f64) -> Result<ShapeClass> {
    let n = normalize_to_p(x, y)?.params;
    let eq = |a: f64, b: f64| (a - b).abs() < SNAP;
    Ok(if eq(n.x, 1.0) && eq(n.y, 1.0) {
        ShapeClass::Parallelogram
    } else if eq(n.y, 1.0) {
        ShapeClass::Trapezoid
    } else if eq(n.x, n.y) || eq(n.x + n.y, 2.0) {
        ShapeClass::AffineKite
    } else {
        ShapeClass::Generic
    })
}

/// gc-parametrization `Q(alpha, beta)` of a non-trapezoid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GcParams {
    pub alpha: f64,
    pub beta: f64,
}

impl GcParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if alpha.is_finite() && beta.is_finite() && 0.0 < alpha && alpha < beta && beta < 1.0 {
            Ok(GcParams { alpha, beta })
        } else {
            Err(Error::InvalidParams(format!(
                "gc parameters ({alpha}, {beta}) violate 0 < alpha < beta < 1"
            )))
        }
    }

    /// The other gc-parametrization of the same affine type, obtained by
    /// exchanging the two erected triangles.
    pub fn dual(self) -> GcParams {
        let (a, b) = (self.alpha, self.beta);
        GcParams {
            alpha: (1.0 - b) * a / ((1.0 - a) * b),
            beta: (1.0 - b) / (1.0 - a),
        }
    }
}

pub fn gc_to_natural(g: GcParams) -> NaturalParams {
    let x = (1.0 - g.beta) / (1.0 - g.alpha);
    let y = g.beta;
    let region = if x <= y { Region::P } else { Region::PBar };
    NaturalParams { x, y, region }
}

pub fn natural_to_gc(x: f64, y: f64) -> Result<GcParams> {
    check_convex_domain(x, y)?;
    if (x - 1.0).abs() < SNAP || (y - 1.0).abs() < SNAP {
        return Err(Error::NotApplicable(format!(
            "({x}, {y}) is a trapezoid; the gc-parametrization covers non-trapezoids only"
        )));
    }
    if !(x < 1.0 && y < 1.0) {
        return Err(Error::InvalidParams(format!(
            "({x}, {y}) must satisfy x < 1 and y < 1"
        )));
    }
    GcParams::new((x + y - 1.0) / x, y)
}

//! The characterized 3-self-affine affine types: the trapezoid line `T`, the
//! glass-cut curves `A`, `B1`, `B2`, the type-C curve `C`, and the thirteen
//! isolated type-C solutions `S1..S13`.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::normalize_to_p;
use crate::poly::{bisect, isolate_roots, BiPoly};

/// Default membership tolerance in parameter space.
pub const MEMBER_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    T,
    A,
    B1,
    B2,
    C,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::T, Family::A, Family::B1, Family::B2, Family::C];

    pub fn name(self) -> &'static str {
        match self {
            Family::T => "T",
            Family::A => "A",
            Family::B1 => "B1",
            Family::B2 => "B2",
            Family::C => "C",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Format(format!("unknown family {s:?}")))
    }
}

/// `a*x + b*y + c > 0` (strict) or `>= 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearConstraint {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub strict: bool,
}

impl LinearConstraint {
    const fn gt(a: f64, b: f64, c: f64) -> Self {
        LinearConstraint { a, b, c, strict: true }
    }
    const fn ge(a: f64, b: f64, c: f64) -> Self {
        LinearConstraint { a, b, c, strict: false }
    }

    pub fn holds(&self, x: f64, y: f64, tol: f64) -> bool {
        let v = self.a * x + self.b * y + self.c;
        if self.strict {
            v > 0.0
        } else {
            v >= -tol
        }
    }
}

/// A family as an algebraic curve restricted by linear constraints.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyCurve {
    pub family: Family,
    pub poly: BiPoly,
    pub constraints: Vec<LinearConstraint>,
}

// x + y > 1, y < 1, x < y
const INSIDE_P: [LinearConstraint; 3] = [
    LinearConstraint::gt(1.0, 1.0, -1.0),
    LinearConstraint::gt(0.0, -1.0, 1.0),
    LinearConstraint::gt(-1.0, 1.0, 0.0),
];

impl FamilyCurve {
    pub fn new(family: Family) -> Self {
        let (poly, constraints) = match family {
            // y - 1, 0 < x <= 1
            Family::T => (
                BiPoly::new(&[(1, 0, 1), (-1, 0, 0)]),
                vec![
                    LinearConstraint::gt(1.0, 0.0, 0.0),
                    LinearConstraint::ge(-1.0, 0.0, 1.0),
                ],
            ),
            // y^3 + x y^2 - x^2 - y^2
            Family::A => (
                BiPoly::new(&[(1, 0, 3), (1, 1, 2), (-1, 2, 0), (-1, 0, 2)]),
                INSIDE_P.to_vec(),
            ),
            // (x+1) y^2 - (x+1) y + x (1-x)
            Family::B1 => (
                BiPoly::new(&[
                    (1, 1, 2),
                    (1, 0, 2),
                    (-1, 1, 1),
                    (-1, 0, 1),
                    (1, 1, 0),
                    (-1, 2, 0),
                ]),
                INSIDE_P.to_vec(),
            ),
            // x^3 + (-y^2 + y - 2) x^2 + (-y^3 + 2y^2 - y + 1) x + y^2 - y
            Family::B2 => (
                BiPoly::new(&[
                    (1, 3, 0),
                    (-1, 2, 2),
                    (1, 2, 1),
                    (-2, 2, 0),
                    (-1, 1, 3),
                    (2, 1, 2),
                    (-1, 1, 1),
                    (1, 1, 0),
                    (1, 0, 2),
                    (-1, 0, 1),
                ]),
                INSIDE_P.to_vec(),
            ),
            // y - (x^2 - x + 1), 0 < x < 1
            Family::C => (
                BiPoly::new(&[(1, 0, 1), (-1, 2, 0), (1, 1, 0), (-1, 0, 0)]),
                vec![
                    LinearConstraint::gt(1.0, 0.0, 0.0),
                    LinearConstraint::gt(-1.0, 0.0, 1.0),
                ],
            ),
        };
        FamilyCurve {
            family,
            poly,
            constraints,
        }
    }

    pub fn all() -> Vec<FamilyCurve> {
        Family::ALL.into_iter().map(FamilyCurve::new).collect()
    }

    /// Value of the defining polynomial; domain constraints are not checked.
    pub fn residual(&self, x: f64, y: f64) -> f64 {
        self.poly.eval(x, y)
    }

    /// `|residual| / |gradient|`, a first-order estimate of the distance to
    /// the curve.
    pub fn distance_estimate(&self, x: f64, y: f64) -> f64 {
        let r = self.residual(x, y);
        let (gx, gy) = self.poly.gradient(x, y);
        let g = gx.hypot(gy);
        if g > 0.0 {
            r.abs() / g
        } else {
            r.abs()
        }
    }

    pub fn in_domain(&self, x: f64, y: f64, tol: f64) -> bool {
        self.constraints.iter().all(|c| c.holds(x, y, tol))
    }

    /// The point of the curve above `x`, for `x` in `(0, 1)`. Every curve is
    /// a graph over `(0, 1)` with exactly one valid `y` in
    /// `(max(x, 1-x), 1)`; `T` returns `y = 1` for `x` in `(0, 1]`.
    pub fn point_at(&self, x: f64) -> Option<(f64, f64)> {
        if self.family == Family::T {
            return (x > 0.0 && x <= 1.0).then_some((x, 1.0));
        }
        if !(x > 0.0 && x < 1.0) {
            return None;
        }
        if self.family == Family::C {
            return Some((x, x * x - x + 1.0));
        }
        let lo = x.max(1.0 - x);
        let f = |y: f64| self.poly.eval(x, y);
        let (flo, fhi) = (f(lo), f(1.0));
        let y = if flo != 0.0 && fhi != 0.0 && (flo < 0.0) != (fhi < 0.0) {
            bisect(f, lo, 1.0, 0.0)
        } else {
            *isolate_roots(f, lo, 1.0, 256, 0.0)
                .iter()
                .find(|y| self.in_domain(x, **y, 0.0))?
        };
        self.in_domain(x, y, 0.0).then_some((x, y))
    }

    /// All valid points on the horizontal line at height `y` (`x` in `(0, y)`).
    pub fn points_at_height(&self, y: f64) -> Vec<(f64, f64)> {
        isolate_roots(|x| self.poly.eval(x, y), 0.0, y, 4096, 0.0)
            .into_iter()
            .map(|x| (x, y))
            .filter(|(x, y)| self.in_domain(*x, *y, 0.0))
            .collect()
    }
}

/// Evaluates `curve` at `(x, y)`.
pub fn curve_residual(curve: &FamilyCurve, x: f64, y: f64) -> f64 {
    curve.residual(x, y)
}

/// `n` points on the curve at `x = i/(n+1)`, `i = 1..=n` (`x = i/n` for
/// `T`, whose domain includes `x = 1`).
pub fn sample_curve(curve: &FamilyCurve, n: usize) -> Vec<(f64, f64)> {
    let n = n.max(1);
    (1..=n)
        .filter_map(|i| {
            let x = if curve.family == Family::T {
                i as f64 / n as f64
            } else {
                i as f64 / (n + 1) as f64
            };
            curve.point_at(x)
        })
        .collect()
}

/// Exact value of a Table-1 row that has a closed form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClosedForm {
    pub text: &'static str,
    pub x: f64,
    pub y: f64,
}

/// One isolated type-C solution.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularSolution {
    pub id: u8,
    pub eq1: BiPoly,
    pub eq2: BiPoly,
    pub value: (f64, f64),
    /// Value as printed (five decimals), used as the Newton seed.
    pub printed: (f64, f64),
    pub closed_form: Option<ClosedForm>,
}

type Terms = &'static [(i64, u32, u32)];

struct Row {
    eq1: Terms,
    eq2: Terms,
    printed: (f64, f64),
}

const ROWS: [Row; 13] = [
    Row {
        eq1: &[(1, 3, 1), (-1, 1, 1), (1, 0, 2), (-1, 1, 0), (-1, 0, 1), (1, 0, 0)],
        eq2: &[
            (1, 2, 2), (1, 3, 0), (-1, 1, 2), (-2, 2, 0), (-1, 1, 1), (-1, 0, 2), (2, 1, 0),
            (2, 0, 1), (-1, 0, 0),
        ],
        printed: (0.54368, 0.83928),
    },
    Row {
        eq1: &[(1, 3, 1), (1, 2, 2), (-1, 2, 1), (-1, 1, 2), (-1, 1, 0), (1, 0, 1)],
        eq2: &[
            (1, 3, 1), (1, 2, 2), (-1, 2, 1), (-2, 1, 2), (-1, 0, 3), (-1, 2, 0), (1, 1, 1),
            (2, 0, 2), (1, 1, 0), (-1, 0, 1),
        ],
        printed: (0.55706, 0.85490),
    },
    Row {
        eq1: &[
            (1, 3, 1), (1, 2, 2), (-1, 2, 1), (1, 1, 2), (-1, 2, 0), (-2, 1, 1), (-1, 0, 2),
            (1, 1, 0), (1, 0, 1),
        ],
        eq2: &[
            (1, 3, 1), (1, 2, 2), (-1, 3, 0), (-4, 2, 1), (-1, 1, 2), (2, 2, 0), (3, 1, 1),
            (1, 0, 2), (-1, 1, 0), (-1, 0, 1),
        ],
        printed: (0.54660, 0.72669),
    },
    Row {
        eq1: &[
            (1, 2, 2), (1, 1, 3), (1, 2, 1), (-1, 1, 2), (-1, 2, 0), (-2, 1, 1), (-1, 0, 2),
            (1, 1, 0), (1, 0, 1),
        ],
        eq2: &[
            (1, 4, 0), (1, 3, 1), (-3, 3, 0), (-2, 2, 1), (-1, 1, 2), (2, 2, 0), (3, 1, 1),
            (1, 0, 2), (-1, 1, 0), (-1, 0, 1),
        ],
        printed: (0.50678, 0.67567),
    },
    Row {
        eq1: &[
            (1, 3, 1), (2, 2, 2), (1, 1, 3), (-2, 2, 1), (-3, 1, 2), (-1, 0, 3), (-1, 2, 0),
            (2, 1, 1), (1, 0, 2),
        ],
        eq2: &[
            (1, 3, 1), (2, 2, 2), (1, 1, 3), (-1, 3, 0), (-3, 2, 1), (-3, 1, 2), (-1, 0, 3),
            (2, 2, 0), (1, 1, 1), (1, 0, 2),
        ],
        printed: (0.47759, 0.81530),
    },
    Row {
        eq1: &[(1, 2, 2), (1, 1, 3), (-1, 1, 2), (-1, 0, 3), (-1, 1, 0), (1, 0, 1)],
        eq2: &[
            (1, 2, 2), (1, 1, 3), (1, 3, 0), (-1, 2, 1), (-3, 1, 2), (-1, 0, 3), (-1, 2, 0),
            (1, 1, 1), (2, 0, 2), (1, 1, 0), (-1, 0, 1),
        ],
        printed: (0.25805, 0.84781),
    },
    Row {
        eq1: &[(1, 3, 0), (1, 2, 1), (-1, 2, 0), (1, 0, 2), (-2, 1, 0), (-2, 0, 1), (2, 0, 0)],
        eq2: &[
            (1, 1, 2), (1, 0, 3), (-1, 2, 0), (-3, 1, 1), (-2, 0, 2), (3, 1, 0), (3, 0, 1),
            (-2, 0, 0),
        ],
        printed: (0.58750, 0.78257),
    },
    Row {
        eq1: &[
            (1, 2, 1), (1, 1, 2), (-2, 2, 0), (-3, 1, 1), (-1, 0, 2), (3, 1, 0), (3, 0, 1),
            (-2, 0, 0),
        ],
        eq2: &[(1, 2, 1), (1, 1, 2), (-2, 1, 0), (-2, 0, 1), (2, 0, 0)],
        printed: (0.5, 0.71922),
    },
    Row {
        eq1: &[(1, 2, 1), (2, 1, 2), (1, 0, 3), (-4, 1, 1), (-4, 0, 2), (1, 1, 0), (3, 0, 1)],
        eq2: &[(1, 2, 0), (1, 1, 1), (-1, 0, 1)],
        printed: (0.59100, 0.85403),
    },
    Row {
        eq1: &[(1, 2, 1), (1, 0, 3), (-2, 1, 1), (-2, 0, 2), (1, 1, 0), (1, 0, 1)],
        eq2: &[
            (1, 3, 0), (1, 2, 1), (2, 1, 2), (-2, 2, 0), (-3, 1, 1), (-1, 0, 2), (1, 1, 0),
            (1, 0, 1),
        ],
        printed: (0.41803, 0.71831),
    },
    Row {
        eq1: &[
            (1, 1, 3), (1, 2, 1), (-1, 0, 3), (-1, 1, 1), (1, 0, 2), (-1, 1, 0), (-1, 0, 1),
            (1, 0, 0),
        ],
        eq2: &[
            (1, 3, 1), (-1, 2, 2), (-1, 1, 3), (-2, 3, 0), (2, 1, 2), (2, 2, 0), (1, 1, 1),
            (1, 0, 2), (-2, 1, 0), (-2, 0, 1), (1, 0, 0),
        ],
        printed: (0.33133, 0.78783),
    },
    Row {
        eq1: &[(2, 1, 2), (-2, 1, 1), (-2, 0, 2), (1, 1, 0), (1, 0, 1)],
        eq2: &[
            (3, 2, 1), (1, 1, 2), (-2, 2, 0), (-3, 1, 1), (-1, 0, 2), (1, 1, 0), (1, 0, 1),
        ],
        printed: (0.4, 0.66666),
    },
    Row {
        eq1: &[
            (1, 0, 4), (1, 2, 1), (-1, 0, 3), (-1, 1, 1), (1, 0, 2), (-1, 1, 0), (-1, 0, 1),
            (1, 0, 0),
        ],
        eq2: &[
            (1, 4, 0), (-1, 2, 2), (-1, 1, 3), (-2, 3, 0), (2, 1, 2), (2, 2, 0), (1, 1, 1),
            (1, 0, 2), (-2, 1, 0), (-2, 0, 1), (1, 0, 0),
        ],
        printed: (0.59717, 0.87586),
    },
];

fn closed_form(id: u8) -> Option<ClosedForm> {
    let sqrt2 = std::f64::consts::SQRT_2;
    match id {
        5 => Some(ClosedForm {
            text: "((9-4*sqrt(2))/7, (10+sqrt(2))/14)",
            x: (9.0 - 4.0 * sqrt2) / 7.0,
            y: (10.0 + sqrt2) / 14.0,
        }),
        8 => Some(ClosedForm {
            text: "(1/2, (7-sqrt(17))/4)",
            x: 0.5,
            y: (7.0 - 17f64.sqrt()) / 4.0,
        }),
        12 => Some(ClosedForm {
            text: "(2/5, 2/3)",
            x: 0.4,
            y: 2.0 / 3.0,
        }),
        _ => None,
    }
}

/// Outcome of refining one Table-1 row.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Refinement {
    pub id: u8,
    pub value: (f64, f64),
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// 2-D Newton on `{eq1 = 0, eq2 = 0}` from `seed` until the max-norm
/// residual drops below `tol` (or 50 iterations).
pub fn newton2(eq1: &BiPoly, eq2: &BiPoly, seed: (f64, f64), tol: f64) -> ((f64, f64), f64, usize, bool) {
    let (mut x, mut y) = seed;
    let res = |x: f64, y: f64| eq1.eval(x, y).abs().max(eq2.eval(x, y).abs());
    let mut r = res(x, y);
    let mut it = 0;
    // Keep stepping past `tol` until the update stalls at rounding level.
    while it < 50 {
        let (f, g) = (eq1.eval(x, y), eq2.eval(x, y));
        let (fx, fy) = eq1.gradient(x, y);
        let (gx, gy) = eq2.gradient(x, y);
        let det = fx * gy - fy * gx;
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let dx = (f * gy - fy * g) / det;
        let dy = (fx * g - f * gx) / det;
        x -= dx;
        y -= dy;
        r = res(x, y);
        it += 1;
        if r < tol && dx.abs().max(dy.abs()) < 1e-15 {
            break;
        }
    }
    ((x, y), r, it, r < tol)
}

/// Refines every Table-1 row at the given residual tolerance.
pub fn refine_table1(tol: f64) -> Vec<Refinement> {
    ROWS.iter()
        .enumerate()
        .map(|(i, row)| {
            let (e1, e2) = (BiPoly::new(row.eq1), BiPoly::new(row.eq2));
            let (value, residual, iterations, converged) = newton2(&e1, &e2, row.printed, tol);
            Refinement {
                id: i as u8 + 1,
                value,
                residual,
                iterations,
                converged,
            }
        })
        .collect()
}

fn build_table1() -> Result<Vec<SingularSolution>> {
    ROWS.iter()
        .zip(refine_table1(1e-12))
        .map(|(row, r)| {
            if !r.converged {
                return Err(Error::ConvergenceFailure(format!(
                    "isolated solution S{} (residual {:e})",
                    r.id, r.residual
                )));
            }
            Ok(SingularSolution {
                id: r.id,
                eq1: BiPoly::new(row.eq1),
                eq2: BiPoly::new(row.eq2),
                value: r.value,
                printed: row.printed,
                closed_form: closed_form(r.id),
            })
        })
        .collect()
}

/// The thirteen isolated solutions, refined once and cached.
pub fn table1_solutions() -> Result<&'static [SingularSolution]> {
    static TABLE: OnceLock<Result<Vec<SingularSolution>>> = OnceLock::new();
    match TABLE.get_or_init(build_table1) {
        Ok(v) => Ok(v.as_slice()),
        Err(e) => Err(e.clone()),
    }
}

/// CSV with columns `id,eq1,eq2,x,y,closed_form`.
pub fn table1_csv() -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Format(e.to_string());
    w.write_record(["id", "eq1", "eq2", "x", "y", "closed_form"]).map_err(io)?;
    for s in table1_solutions()? {
        w.write_record([
            s.id.to_string(),
            s.eq1.to_string(),
            s.eq2.to_string(),
            format!("{:.6}", s.value.0),
            format!("{:.6}", s.value.1),
            s.closed_form.map(|c| c.text.to_string()).unwrap_or_default(),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
}

/// Root of `x^3 - 2x^2 + 3x - 1` in `(0, 1)`: the `x` of the affine type
/// with eight distinct type-C realizations.
pub fn special_x() -> f64 {
    bisect(|x| ((x - 2.0) * x + 3.0) * x - 1.0, 0.0, 1.0, 0.0)
}

/// The special affine type `(x0, x0^2 - x0 + 1)` in `P`.
pub fn special_point() -> (f64, f64) {
    let x = special_x();
    (x, x * x - x + 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(into = "String")]
pub enum Member {
    Family(Family),
    Singular(u8),
}

impl fmt::Display for Member {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Member::Family(fam) => write!(f, "{fam}"),
            Member::Singular(id) => write!(f, "S{id}"),
        }
    }
}

impl From<Member> for String {
    fn from(m: Member) -> String {
        m.to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Membership {
    /// Canonical parameters the tests were run on.
    #[serde(skip)]
    pub canonical: (f64, f64),
    pub families: Vec<Member>,
    /// Set when the point is the special type on curve `C` with eight
    /// distinct type-C realizations.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub special: bool,
}

impl Membership {
    pub fn contains(&self, m: Member) -> bool {
        self.families.contains(&m)
    }
}

/// Every family containing the affine type of `(x, y)`, within `tol` in
/// parameter space. An empty list means the type is not 3-self-affine.
pub fn is_member(x: f64, y: f64, tol: f64) -> Result<Membership> {
    let n = normalize_to_p(x, y)?.params;
    let (cx, cy) = (n.x, n.y);
    let mut families: Vec<Member> = FamilyCurve::all()
        .into_iter()
        .filter(|c| c.distance_estimate(cx, cy) < tol && c.in_domain(cx, cy, tol))
        .map(|c| Member::Family(c.family))
        .collect();
    for s in table1_solutions()? {
        if (s.value.0 - cx).hypot(s.value.1 - cy) < tol {
            families.push(Member::Singular(s.id));
        }
    }
    families.sort();
    let (sx, sy) = special_point();
    Ok(Membership {
        canonical: (cx, cy),
        families,
        special: (sx - cx).hypot(sy - cy) < tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residual_examples() {
        let c = FamilyCurve::new(Family::C);
        assert!(curve_residual(&c, 0.5, 0.75).abs() < 1e-15);
        let a = FamilyCurve::new(Family::A);
        assert!((curve_residual(&a, 0.5, 0.5) + 0.25).abs() < 1e-15);
        let b1 = FamilyCurve::new(Family::B1);
        assert!(curve_residual(&b1, 0.5, 0.78868).abs() < 1e-4);
    }

    #[test]
    fn a_curve_factorization() {
        // y^3 + x y^2 - x^2 - y^2 == (x + y - 1) y^2 - x^2
        let a = FamilyCurve::new(Family::A).poly;
        let lin = BiPoly::new(&[(1, 1, 0), (1, 0, 1), (-1, 0, 0)]);
        let y2 = BiPoly::new(&[(1, 0, 2)]);
        let x2 = BiPoly::new(&[(1, 2, 0)]);
        assert!(a.sub(&lin.mul(&y2).sub(&x2)).is_zero());
    }

    #[test]
    fn sampling_examples() {
        let pts = sample_curve(&FamilyCurve::new(Family::C), 3);
        let expected = [(0.25, 0.8125), (0.5, 0.75), (0.75, 0.8125)];
        assert_eq!(pts.len(), 3);
        for (p, e) in pts.iter().zip(expected) {
            assert!((p.0 - e.0).abs() < 1e-15 && (p.1 - e.1).abs() < 1e-15);
        }

        let a = FamilyCurve::new(Family::A).points_at_height(0.9);
        assert_eq!(a.len(), 2);
        // x² - 0.81x + 0.081 = 0
        let disc = (0.81f64 * 0.81 - 4.0 * 0.081).sqrt();
        assert!((a[0].0 - (0.81 - disc) / 2.0).abs() < 1e-9);
        assert!((a[1].0 - (0.81 + disc) / 2.0).abs() < 1e-9);

        let b1 = FamilyCurve::new(Family::B1).point_at(0.5).unwrap();
        assert!((b1.1 - 0.78868).abs() < 1e-5);
    }

    #[test]
    fn sampled_points_are_on_curves_inside_p() {
        for fam in [Family::A, Family::B1, Family::B2, Family::C] {
            let c = FamilyCurve::new(fam);
            let pts = sample_curve(&c, 200);
            assert_eq!(pts.len(), 200, "{fam}");
            for (x, y) in pts {
                assert!(c.residual(x, y).abs() < 1e-12, "{fam} at ({x}, {y})");
                assert!(x < y && y < 1.0 && x + y > 1.0, "{fam} at ({x}, {y})");
            }
        }
        let t = sample_curve(&FamilyCurve::new(Family::T), 4);
        assert_eq!(t.last(), Some(&(1.0, 1.0)));
    }

    #[test]
    fn table1_rows() {
        let t = table1_solutions().unwrap();
        assert_eq!(t.len(), 13);
        for s in t {
            assert!(s.eq1.eval(s.value.0, s.value.1).abs() < 1e-12);
            assert!(s.eq2.eval(s.value.0, s.value.1).abs() < 1e-12);
            assert!((s.value.0 - s.printed.0).abs() < 1e-5, "row {}", s.id);
            assert!((s.value.1 - s.printed.1).abs() < 1e-5, "row {}", s.id);
        }
        assert!((t[0].value.0 - 0.54368).abs() < 1e-5 && (t[0].value.1 - 0.83928).abs() < 1e-5);
        assert_eq!(t[8].eq2.to_string(), "x^2 + x*y - y");
        let cf = t[4].closed_form.unwrap();
        assert!((cf.x - 0.47759).abs() < 1e-5 && (cf.y - 0.81530).abs() < 1e-5);
        for id in [5usize, 8, 12] {
            let s = &t[id - 1];
            let cf = s.closed_form.unwrap();
            assert!((s.value.0 - cf.x).abs() < 1e-14 && (s.value.1 - cf.y).abs() < 1e-14);
        }
    }

    #[test]
    fn membership_examples() {
        let m = is_member(0.5, (7.0 - 17f64.sqrt()) / 4.0, MEMBER_TOL).unwrap();
        assert_eq!(m.families, vec![Member::Singular(8)]);
        let m = is_member(0.4, 2.0 / 3.0, MEMBER_TOL).unwrap();
        assert_eq!(m.families, vec![Member::Singular(12)]);

        // Printed decimals of the special point sit ~1e-5 off the curve.
        let m = is_member(0.43015, 0.75487, 1e-4).unwrap();
        assert_eq!(m.families, vec![Member::Family(Family::C)]);
        assert!(m.special);
        let (sx, sy) = special_point();
        let m = is_member(sx, sy, MEMBER_TOL).unwrap();
        assert_eq!(m.families, vec![Member::Family(Family::C)]);
        assert!(m.special);

        let m = is_member(0.5, 0.75, MEMBER_TOL).unwrap();
        assert_eq!(m.families, vec![Member::Family(Family::C)]);
        assert!(!m.special);

        // Trapezoid given in another region.
        let m = is_member(1.0, 0.7, MEMBER_TOL).unwrap();
        assert_eq!(m.families, vec![Member::Family(Family::T)]);

        let m = is_member(2.0 / 3.0, 5.0 / 6.0, MEMBER_TOL).unwrap();
        assert!(m.families.is_empty());
    }

    #[test]
    fn curves_are_disjoint_on_a_sweep() {
        // All curves meet at (0, 1) and (1, 1) with high-order contact (A and C
        // separate like 2x^3), so the sweep stays 0.01 away from both ends.
        let curves: Vec<FamilyCurve> = [Family::A, Family::B1, Family::B2, Family::C]
            .into_iter()
            .map(FamilyCurve::new)
            .collect();
        for i in 0..10_000 {
            let x = 0.01 + 0.98 * i as f64 / 9_999.0;
            let ys: Vec<f64> = curves.iter().map(|c| c.point_at(x).unwrap().1).collect();
            for a in 0..ys.len() {
                for b in a + 1..ys.len() {
                    assert!(
                        (ys[a] - ys[b]).abs() > 1e-9,
                        "{} meets {} at x = {x}",
                        curves[a].family,
                        curves[b].family
                    );
                }
            }
        }
    }
}

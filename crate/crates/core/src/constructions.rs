//! Explicit self-affine dissections: the three trapezoid constructions and
//! the non-convex chain, split and `n`-piece assembly.

use crate::dissection::{map_onto, Dissection, Piece};
use crate::error::{Error, Result};
use crate::geometry::{AffineMap2, Point2, Quadrangle, DEFAULT_TOL};
use crate::poly::isolate_roots;

/// Ratio of the parallel sides of a trapezoid, `0 < z <= 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrapezoidParam(f64);

impl TrapezoidParam {
    pub fn new(z: f64) -> Result<Self> {
        if z > 0.0 && z <= 1.0 {
            Ok(TrapezoidParam(z))
        } else {
            Err(Error::InvalidParams(format!("trapezoid ratio z = {z} is not in (0, 1]")))
        }
    }

    pub fn z(self) -> f64 {
        self.0
    }
}

fn p(x: f64, y: f64) -> Point2 {
    Point2::new(x, y)
}

/// `(0,0), (1,0), (z,1), (0,1)`.
pub fn standard_trapezoid(z: TrapezoidParam) -> Quadrangle {
    let z = z.z();
    Quadrangle::lenient([p(0.0, 0.0), p(1.0, 0.0), p(z, 1.0), p(0.0, 1.0)], DEFAULT_TOL)
}

/// The piece with the given vertices, with map and correspondence found by
/// matching against `source`.
fn piece_onto(source: &Quadrangle, vertices: [Point2; 4]) -> Result<Piece> {
    let quad = Quadrangle {
        vertices,
        kind: source.kind,
    };
    let (map, perm) = map_onto(source, &quad, 1e-9)?;
    Ok(Piece { quad, map, perm })
}

/// Two cuts joining the parallel sides, dividing both in the proportions
/// `weights`.
pub fn trapezoid_a(z: TrapezoidParam, weights: [f64; 3]) -> Result<Dissection> {
    if weights.iter().any(|w| !(*w > 0.0)) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidWeights(format!(
            "{weights:?} must be positive and sum to 1"
        )));
    }
    let t = standard_trapezoid(z);
    let zz = z.z();
    let b = [0.0, weights[0], weights[0] + weights[1], 1.0];
    let pieces = (0..3)
        .map(|k| {
            piece_onto(
                &t,
                [p(b[k], 0.0), p(b[k + 1], 0.0), p(b[k + 1] * zz, 1.0), p(b[k] * zz, 1.0)],
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Dissection::new(t, None, pieces))
}

/// `ζ = z / (1 + z + z²)`.
pub fn zeta(z: f64) -> f64 {
    z / (1.0 + z + z * z)
}

/// `z - ζ - z²(1 - zζ)`, which vanishes identically.
pub fn zeta_identity_residual(z: f64) -> f64 {
    let s = zeta(z);
    z - s - z * z * (1.0 - z * s)
}

/// A full cut from `(zζ, 0)` to `(ζ, 1)` and a horizontal sub-cut from it
/// to the right-hand side.
pub fn trapezoid_b(z: TrapezoidParam) -> Result<Dissection> {
    let t = standard_trapezoid(z);
    let zz = z.z();
    let s = zeta(zz);
    let h = (1.0 - zz * s) / (1.0 + s);
    let w = p(zz * s + h * (s - zz * s), h);
    let e = p(1.0 + h * (zz - 1.0), h);
    let pieces = vec![
        piece_onto(&t, [p(0.0, 0.0), p(zz * s, 0.0), p(s, 1.0), p(0.0, 1.0)])?,
        piece_onto(&t, [p(zz * s, 0.0), p(1.0, 0.0), e, w])?,
        piece_onto(&t, [w, e, p(zz, 1.0), p(s, 1.0)])?,
    ];
    Ok(Dissection::new(t, None, pieces))
}

/// The lower-left piece is the `z`-dilation about `(0,0)`; the two others
/// meet it at the interior vertex `(z², z)`. Parallelograms admit no such
/// dissection.
pub fn trapezoid_c(z: f64) -> Result<Dissection> {
    if z >= 1.0 - DEFAULT_TOL {
        return Err(Error::ParallelogramExcluded(z));
    }
    let zp = TrapezoidParam::new(z)?;
    let t = standard_trapezoid(zp);
    let c = p(z * z, z);
    let pieces = vec![
        piece_onto(&t, [p(0.0, 0.0), p(z, 0.0), c, p(0.0, z)])?,
        piece_onto(&t, [p(z, 0.0), p(1.0, 0.0), p(z, 1.0), c])?,
        piece_onto(&t, [p(0.0, z), c, p(z, 1.0), p(0.0, 1.0)])?,
    ];
    Ok(Dissection::new(t, None, pieces))
}

/// Reflex vertex `(x, y)` of the non-convex quadrangle
/// `(0,1), (0,0), (1,0), (x,y)`; requires `x, y > 0` and `x + y < 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NonconvexParams {
    pub x: f64,
    pub y: f64,
}

impl NonconvexParams {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if x > 0.0 && y > 0.0 && x + y < 1.0 {
            Ok(NonconvexParams { x, y })
        } else {
            Err(Error::InvalidParams(format!(
                "non-convex parameters need x, y > 0 and x + y < 1, got ({x}, {y})"
            )))
        }
    }

    /// The only other parametrization of the same affine type.
    pub fn swapped(self) -> Self {
        NonconvexParams { x: self.y, y: self.x }
    }

    pub fn quadrangle(self) -> Quadrangle {
        nonconvex_quad(self.x, self.y)
    }
}

fn nonconvex_quad(x: f64, y: f64) -> Quadrangle {
    Quadrangle::lenient([p(0.0, 1.0), p(0.0, 0.0), p(1.0, 0.0), p(x, y)], DEFAULT_TOL)
}

/// `α = ((1-x, -x), (-y, 1-y)) + (x, y)`; it fixes `(1,0)` and `(0,1)`.
pub fn chain_map(np: NonconvexParams) -> AffineMap2 {
    let (x, y) = (np.x, np.y);
    AffineMap2::new(1.0 - x, -x, -y, 1.0 - y, x, y)
}

/// `(1 - (1 - (x+y))^k) / (x+y)`: the chain parent's reflex vertex is this
/// multiple of `(x, y)`.
pub fn chain_factor(np: NonconvexParams, k: usize) -> f64 {
    let s = np.x + np.y;
    (1.0 - (1.0 - s).powi(k as i32)) / s
}

/// `Q[c·(x,y)]` dissected into `α^m(Q[x,y])`, `m = 0..k`.
pub fn nonconvex_chain(np: NonconvexParams, k: usize) -> Result<Dissection> {
    if k == 0 {
        return Err(Error::InvalidParams("chain length must be at least 1".into()));
    }
    let np = NonconvexParams::new(np.x, np.y)?;
    let c = chain_factor(np, k);
    let proto = np.quadrangle();
    let parent = nonconvex_quad(c * np.x, c * np.y);
    let alpha = chain_map(np);
    let pieces = (0..k).map(|m| Piece::from_map(&proto, alpha.pow(m))).collect();
    let prototile = (k > 1).then_some(proto);
    Ok(Dissection::new(parent, prototile, pieces))
}

/// `β = ((x, 0), (y-1, -1)) + (0, 1)`.
pub fn split_map(np: NonconvexParams) -> AffineMap2 {
    AffineMap2::new(np.x, 0.0, np.y - 1.0, -1.0, 0.0, 1.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Split {
    pub piece: Quadrangle,
    pub map: AffineMap2,
    /// `(0,0), (1,0), (x,y), (x², (1-x)(1-y))`.
    pub remainder: Quadrangle,
    /// The remainder collapses to a triangle.
    pub degenerate: bool,
}

/// Cuts `β(Q[x,y])` off `Q[x,y]`.
pub fn nonconvex_split(np: NonconvexParams) -> Result<Split> {
    let np = NonconvexParams::new(np.x, np.y)?;
    let (x, y) = (np.x, np.y);
    let map = split_map(np);
    let piece = np.quadrangle().map(&map);
    let remainder = Quadrangle::lenient(
        [p(0.0, 0.0), p(1.0, 0.0), p(x, y), p(x * x, (1.0 - x) * (1.0 - y))],
        DEFAULT_TOL,
    );
    Ok(Split {
        piece,
        map,
        degenerate: remainder.kind == crate::geometry::QuadKind::Degenerate,
        remainder,
    })
}

/// `f_n(x) = (1 - (1-x)^(2n-2)) (1 - x + x²) - x (2 - x)`.
pub fn f_n(n: u32, x: f64) -> f64 {
    (1.0 - (1.0 - x).powi(2 * n as i32 - 2)) * (1.0 - x + x * x) - x * (2.0 - x)
}

/// Every sign change of `f_n` on `(0, 1)` (a 10⁴-cell scan refined by
/// bisection). `f_n` vanishes at both endpoints, which are excluded.
pub fn solve_f_n(n: u32) -> Result<Vec<f64>> {
    if n < 3 {
        return Err(Error::InvalidParams(format!("n = {n}; need n >= 3")));
    }
    Ok(isolate_roots(|x| f_n(n, x), 0.0, 1.0, 10_000, 0.0))
}

/// `γ = ((x₀², 1), ((1-x₀)(1-x₀+x₀²), 0))`, no translation.
pub fn assembly_map(x0: f64) -> AffineMap2 {
    AffineMap2::linear(x0 * x0, 1.0, (1.0 - x0) * (1.0 - x0 + x0 * x0), 0.0)
}

/// Distance between `γ` applied to the reflex vertex of the chain of
/// `n - 1` copies of `Q[x₀, x₀(1-x₀)]` and the reflex vertex `(x₀, y₀)`
/// itself. Zero exactly at roots of `f_n`.
pub fn gamma_closure_residual(n: u32, x0: f64) -> f64 {
    let np = NonconvexParams {
        x: x0,
        y: x0 * (1.0 - x0),
    };
    let c = chain_factor(np, n as usize - 1);
    assembly_map(x0)
        .apply(p(c * np.x, c * np.y))
        .dist(p(np.x, np.y))
}

/// The `n`-self-affine non-convex quadrangle `Q[x₀, x₀(1-x₀)]`, `x₀` the
/// smallest root of `f_n`: one split piece plus the chain of `n - 1` copies
/// placed by `γ` into the remainder.
pub fn nonconvex_n_self_affine(n: u32) -> Result<Dissection> {
    let x0 = *solve_f_n(n)?
        .first()
        .ok_or_else(|| Error::ConvergenceFailure(format!("no root of f_{n} in (0, 1)")))?;
    let np = NonconvexParams::new(x0, x0 * (1.0 - x0))?;
    let q = np.quadrangle();
    let alpha = chain_map(np);
    let gamma = assembly_map(x0);
    let mut pieces = vec![Piece::from_map(&q, split_map(np))];
    for m in 0..n as usize - 1 {
        pieces.push(Piece::from_map(&q, gamma.compose(&alpha.pow(m))));
    }
    Ok(Dissection::new(q, None, pieces))
}

/// `|v₁v₃| / |v₁d|` where `v₃` is the reflex vertex, `v₁` the opposite one
/// and `d` the intersection of line `v₁v₃` with the outer diagonal `v₂v₄`.
/// Affine invariant; equals `x + y` (so lies in `(0, 1)`) for `Q[x,y]`.
pub fn diagonal_invariant(q: &Quadrangle) -> Result<f64> {
    let r = q
        .reflex_index()
        .ok_or_else(|| Error::NotApplicable("quadrangle is not non-convex".into()))?;
    let v = |k: usize| q.vertices[(r + k) % 4];
    let (v3, v4, v1, v2) = (v(0), v(1), v(2), v(3));
    let dir = v3 - v1;
    let side = v4 - v2;
    let denom = dir.cross(side);
    if denom.abs() <= DEFAULT_TOL * dir.norm() * side.norm() {
        return Err(Error::DegenerateDiagonals);
    }
    // v1 + t·dir lies on line v2v4.
    let t = (v2 - v1).cross(side) / denom;
    Ok(1.0 / t)
}

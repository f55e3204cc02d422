//! Multistart solution of one reduced system and classification of what it
//! finds into isolated points, traced curves and shelved trapezoids.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::newton::{advances_along_curve, levenberg_marquardt, polish, trace_curve, Free};
use super::system::{ReducedSystem, Template};
use crate::dissection::{verify, Dissection};
use crate::error::{Error, Result};
use crate::families::{Family, FamilyCurve};
use crate::params::{normalize_to_p, Region};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub seed: u64,
    pub starts: usize,
    /// Jacobian evaluations per start.
    pub max_iter: usize,
    /// Converged points closer than this (in unknown space) are merged.
    pub dedup_radius: f64,
    /// Strictness margin for the open search region.
    pub margin: f64,
    /// Residual (max-norm) every recorded solution must reach.
    pub residual_tol: f64,
    /// Residual a converged start must reach after Newton polishing. Regular
    /// roots get there quadratically; spurious near-degenerate minima stall
    /// far above it.
    pub polish_tol: f64,
    /// Upper bound on `x` and `y` in the search box.
    pub box_max: f64,
    /// Cap on stored trapezoidal solutions per system (all are counted).
    pub keep_trapezoidal: usize,
    /// Smallest piece area, as a fraction of the parent's, of a recorded
    /// solution. Rejects degenerate limits where pieces shrink to segments.
    pub min_piece_area: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            seed: 0,
            starts: 2000,
            max_iter: 100,
            dedup_radius: 1e-7,
            margin: 1e-6,
            residual_tol: 1e-10,
            polish_tol: 1e-13,
            box_max: 5.0,
            keep_trapezoidal: 8,
            min_piece_area: 1e-4,
        }
    }
}

/// Distance of a normalized point to the trapezoid line below which a
/// solution is shelved.
pub const TRAPEZOID_TOL: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsolatedSolution {
    pub unknowns: [f64; 6],
    pub residual: f64,
    /// `(x, y)` reduced to the canonical region.
    pub normalized: [f64; 2],
    /// Region of the raw `(x, y)`.
    pub region: Region,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracedCurve {
    pub points: Vec<[f64; 6]>,
    pub normalized: Vec<[f64; 2]>,
    /// Largest max-norm residual along the trace.
    pub max_residual: f64,
    /// Family polynomial vanishing (to 1e-8) at every non-trapezoidal point.
    pub family: Option<Family>,
    /// Largest `|polynomial|` of the best-fitting family.
    pub family_residual: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolutionSet {
    pub isolated: Vec<IsolatedSolution>,
    pub curves: Vec<TracedCurve>,
    pub trapezoidal: Vec<IsolatedSolution>,
    pub trapezoidal_hits: usize,
}

impl SolutionSet {
    /// True when some non-trapezoidal solution was found.
    pub fn has_solutions(&self) -> bool {
        !self.isolated.is_empty() || !self.curves.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        !self.has_solutions() && self.trapezoidal.is_empty()
    }
}

/// Radical inverse of `i` in `base`.
fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Randomly shifted Halton points in `[0,1)^6`, seeded per system.
pub struct StartSequence {
    shift: [f64; 6],
    next: u64,
}

impl StartSequence {
    pub fn new(seed: u64, template: Template, triple_index: usize) -> Self {
        let mut bytes = [0u8; 32];
        bytes[..8].copy_from_slice(&seed.to_le_bytes());
        bytes[8..16].copy_from_slice(&template.salt().to_le_bytes());
        bytes[16..24].copy_from_slice(&(triple_index as u64).to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(bytes);
        StartSequence {
            shift: std::array::from_fn(|_| rng.random::<f64>()),
            next: 1,
        }
    }

    pub fn next_point(&mut self) -> [f64; 6] {
        const BASES: [u64; 6] = [2, 3, 5, 7, 11, 13];
        let i = self.next;
        self.next += 1;
        std::array::from_fn(|k| (radical_inverse(i, BASES[k]) + self.shift[k]).fract())
    }
}

/// Maps a unit-cube point into the search box, or `None` when `(x, y)`
/// falls outside the convex domain.
fn start_in_box(template: Template, h: [f64; 6], box_max: f64) -> Option<[f64; 6]> {
    let (mut x, mut y) = (box_max * h[0], box_max * h[1]);
    if x > y {
        std::mem::swap(&mut x, &mut y);
    }
    if x + y <= 1.0 {
        return None;
    }
    Some(match template {
        Template::C => [x, y, h[2] * x.max(1.0), h[3] * y.max(1.0), h[4], h[5]],
        Template::A13 | Template::A24 => [
            x,
            y,
            h[2].min(h[3]),
            h[2].max(h[3]),
            h[4].min(h[5]),
            h[4].max(h[5]),
        ],
        _ => [x, y, h[2], h[3], h[4], h[5]],
    })
}

fn in_box(u: &[f64; 6], cfg: &SolverConfig) -> bool {
    u[0] < cfg.box_max && u[1] < cfg.box_max
}

/// Every piece keeps at least `cfg.min_piece_area` of the parent's area.
fn substantial(sys: &ReducedSystem, u: &[f64; 6], cfg: &SolverConfig) -> bool {
    let Ok(d) = sys.materialize(u) else { return false };
    let total = d.parent.area().abs();
    d.pieces.iter().all(|p| p.quad.area().abs() > cfg.min_piece_area * total)
}

fn dist(a: &[f64; 6], b: &[f64; 6]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt()
}

fn point_segment_dist(p: &[f64; 6], a: &[f64; 6], b: &[f64; 6]) -> f64 {
    let ab: [f64; 6] = std::array::from_fn(|k| b[k] - a[k]);
    let len2: f64 = ab.iter().map(|v| v * v).sum();
    let t = if len2 > 0.0 {
        (0..6).map(|k| (p[k] - a[k]) * ab[k]).sum::<f64>() / len2
    } else {
        0.0
    };
    let t = t.clamp(0.0, 1.0);
    let proj: [f64; 6] = std::array::from_fn(|k| a[k] + t * ab[k]);
    dist(p, &proj)
}

fn near_curve(curve: &TracedCurve, u: &[f64; 6], tol: f64) -> bool {
    if curve.points.len() == 1 {
        return dist(&curve.points[0], u) < tol;
    }
    curve
        .points
        .windows(2)
        .any(|w| point_segment_dist(u, &w[0], &w[1]) < tol)
}

fn record(u: [f64; 6], residual: f64) -> Result<IsolatedSolution> {
    let n = normalize_to_p(u[0], u[1])?;
    Ok(IsolatedSolution {
        unknowns: u,
        residual,
        normalized: [n.params.x, n.params.y],
        region: n.input_region,
    })
}

fn is_trapezoidal(s: &IsolatedSolution) -> bool {
    s.normalized[1] > 1.0 - TRAPEZOID_TOL
}

/// Verifies the materialized dissection of `u`.
fn sound(sys: &ReducedSystem, u: &[f64; 6]) -> bool {
    sys.materialize(u).map(|d| verify(&d, 1e-9).passed).unwrap_or(false)
}

/// Best-fitting family for normalized curve points away from the
/// trapezoid line.
pub fn fit_family(points: &[[f64; 2]]) -> (Option<Family>, f64) {
    let pts: Vec<&[f64; 2]> = points.iter().filter(|p| p[1] < 1.0 - 1e-6).collect();
    if pts.is_empty() {
        return (Some(Family::T), 0.0);
    }
    let mut best = (None, f64::INFINITY);
    for fam in [Family::A, Family::B1, Family::B2, Family::C] {
        let c = FamilyCurve::new(fam);
        let worst = pts.iter().map(|p| c.residual(p[0], p[1]).abs()).fold(0.0, f64::max);
        if worst < best.1 {
            best = (Some(fam), worst);
        }
    }
    if best.1 < 1e-8 {
        best
    } else {
        (None, best.1)
    }
}

fn build_curve(sys: &ReducedSystem, u: &[f64; 6], cfg: &SolverConfig) -> TracedCurve {
    let keep = |v: &[f64; 6]| in_box(v, cfg) && sys.admissible(v, cfg.margin) && substantial(sys, v, cfg);
    let raw = trace_curve(sys, u, &keep, 1e-3, 2e-2, 4000, 1e-12);
    let mut points = Vec::with_capacity(raw.len());
    let mut normalized = Vec::with_capacity(raw.len());
    let mut max_residual: f64 = 0.0;
    for p in raw {
        let (p, res) = polish(sys, p, Free::ALL, 3);
        if !(res < cfg.residual_tol) || !sound(sys, &p) {
            continue;
        }
        let Ok(n) = normalize_to_p(p[0], p[1]) else { continue };
        max_residual = max_residual.max(res);
        points.push(p);
        normalized.push([n.params.x, n.params.y]);
    }
    let (family, family_residual) = fit_family(&normalized);
    TracedCurve {
        points,
        normalized,
        max_residual,
        family,
        family_residual,
    }
}

/// Runs `cfg.starts` damped-Newton starts on `sys`, keeping converged,
/// admissible, verified solutions: isolated points are deduplicated,
/// points on a solution branch are traced once, trapezoids are shelved.
pub fn solve_template(sys: &ReducedSystem, cfg: &SolverConfig) -> SolutionSet {
    let mut set = SolutionSet::default();
    let mut seq = StartSequence::new(cfg.seed, sys.template, sys.triple.index());
    let mut used = 0;
    let mut draws = 0;
    while used < cfg.starts && draws < 20 * cfg.starts {
        draws += 1;
        let Some(u0) = start_in_box(sys.template, seq.next_point(), cfg.box_max) else {
            continue;
        };
        used += 1;
        let out = levenberg_marquardt(sys, u0, Free::ALL, cfg.max_iter, 100.0, 1e-12);
        if !(out.residual < 1e-6) {
            continue;
        }
        let (u, res) = polish(sys, out.u, Free::ALL, 8);
        if !(res < cfg.polish_tol)
            || !in_box(&u, cfg)
            || !sys.admissible(&u, cfg.margin)
            || !substantial(sys, &u, cfg)
        {
            continue;
        }
        let Ok(sol) = record(u, res) else { continue };
        if is_trapezoidal(&sol) {
            set.trapezoidal_hits += 1;
            if set.trapezoidal.len() < cfg.keep_trapezoidal
                && set.trapezoidal.iter().all(|s| dist(&s.unknowns, &u) > cfg.dedup_radius)
                && sound(sys, &u)
            {
                set.trapezoidal.push(sol);
            }
            continue;
        }
        if set.isolated.iter().any(|s| dist(&s.unknowns, &u) < cfg.dedup_radius)
            || set.curves.iter().any(|c| near_curve(c, &u, 1e-4))
        {
            continue;
        }
        if advances_along_curve(sys, &u, 20, 1e-3, cfg.residual_tol) {
            let curve = build_curve(sys, &u, cfg);
            if !curve.points.is_empty() {
                set.curves.push(curve);
            }
        } else if sound(sys, &u) {
            set.isolated.push(sol);
        }
    }
    set
}

/// Solves for the layout unknowns with `(x, y)` pinned, from `starts`
/// quasi-random layouts. Returns every distinct verified lift.
pub fn solve_pinned(sys: &ReducedSystem, x: f64, y: f64, starts: usize, seed: u64) -> Vec<[f64; 6]> {
    let mut seq = StartSequence::new(seed, sys.template, sys.triple.index());
    let mut found: Vec<[f64; 6]> = Vec::new();
    for _ in 0..starts {
        let h = seq.next_point();
        let mut u0 = match sys.template {
            Template::C => [x, y, h[2] * x.max(1.0), h[3] * y.max(1.0), h[4], h[5]],
            _ => [x, y, h[2], h[3], h[4], h[5]],
        };
        if matches!(sys.template, Template::A13 | Template::A24) {
            u0 = [x, y, h[2].min(h[3]), h[2].max(h[3]), h[4].min(h[5]), h[4].max(h[5])];
        }
        let out = levenberg_marquardt(sys, u0, Free::LAYOUT, 100, 100.0, 1e-13);
        let (u, res) = polish(sys, out.u, Free::LAYOUT, 8);
        if res < 1e-12
            && sys.admissible(&u, 1e-6)
            && found.iter().all(|f| dist(f, &u) > 1e-7)
            && sound(sys, &u)
        {
            found.push(u);
        }
    }
    found
}

/// The verified dissection described by a solution vector.
pub fn dissection_from_solution(sys: &ReducedSystem, u: &[f64; 6]) -> Result<Dissection> {
    let res = sys.residual_norm(u);
    if !(res < 1e-10) {
        return Err(Error::VerificationFailure(format!("residual {res:e} is not below 1e-10")));
    }
    let d = sys.materialize(u)?;
    let report = verify(&d, 1e-9);
    if !report.passed {
        return Err(Error::VerificationFailure(format!("{report:?}")));
    }
    Ok(d)
}

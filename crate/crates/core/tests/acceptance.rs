//! Acceptance suite: one pass/fail line per criterion. Reference values are
//! recomputed here from first principles or transcribed from published
//! figures and tables; library output is only ever the thing under test.
//!
//! Set `SELFAFFINE_BLESS=1` to (re)write the SVG goldens.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use selfaffine::constructions::{
    diagonal_invariant, f_n, gamma_closure_residual, nonconvex_chain, nonconvex_n_self_affine,
    solve_f_n, trapezoid_a, trapezoid_b, trapezoid_c, zeta, NonconvexParams, TrapezoidParam,
};
use selfaffine::dissection::{equivalence_signature, refine, verify, Dissection, Perm};
use selfaffine::families::table1_solutions;
use selfaffine::params::{eight_parametrizations, normalize_to_p};
use selfaffine::render::{render_dissection, render_parameter_chart, LabelMode, RenderOptions};
use selfaffine::solver::{
    special_quadrangle_realizations, sweep, sweep_all, Catalogue, PermTriple, SolverConfig, Template,
    TemplateGroup,
};
use selfaffine::{AffineMap2, Point2, Quadrangle, DEFAULT_TOL};

type Poly = fn(f64, f64) -> f64;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn pt(x: f64, y: f64) -> Point2 {
    Point2::new(x, y)
}

/// Printed values are the leading five decimals, so the exact value lies in
/// `[printed, printed + 1e-5)`.
fn matches_printed(v: f64, printed: f64) -> bool {
    let d = v - printed;
    d > -1e-12 && d < 1e-5
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    assert!(flo * f(hi) < 0.0, "bracket [{lo}, {hi}] does not straddle a root");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) < 0.0) == (flo < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn shoelace(vs: &[Point2]) -> f64 {
    let n = vs.len();
    (0..n)
        .map(|i| vs[i].x * vs[(i + 1) % n].y - vs[(i + 1) % n].x * vs[i].y)
        .sum::<f64>()
        / 2.0
}

/// Coarse checks that do not rely on the library verifier: piece areas add
/// up to the parent's, and every piece is the image of the prototile under
/// its map with the recorded correspondence.
fn independent_check(d: &Dissection) -> Result<(), String> {
    let proto = d.prototile.as_ref().unwrap_or(&d.parent);
    let parent_area = shoelace(&d.parent.vertices).abs();
    let total: f64 = d.pieces.iter().map(|p| shoelace(&p.quad.vertices).abs()).sum();
    if (total - parent_area).abs() > 1e-9 * parent_area {
        return Err(format!("area defect {:.2e}", (total - parent_area).abs() / parent_area));
    }
    for (k, p) in d.pieces.iter().enumerate() {
        for i in 0..4 {
            let img = p.map.apply(proto.vertices[i]);
            let want = p.quad.vertices[p.perm.image(i)];
            if img.dist(want) > 1e-9 {
                return Err(format!("piece {k} vertex {i} off by {:.2e}", img.dist(want)));
            }
        }
    }
    Ok(())
}

fn check_dissection(d: &Dissection) -> Result<(), String> {
    let r = verify(d, DEFAULT_TOL);
    if !r.passed {
        return Err(format!("verifier rejected: {r:?}"));
    }
    independent_check(d)
}

fn triples(list: &[&str]) -> Vec<PermTriple> {
    list.iter().map(|s| s.parse().expect("triple literal")).collect()
}

const CURVE_TRIPLES: [&str; 6] = [
    "1432,1234,4321",
    "1432,3214,2341",
    "3214,1234,1432",
    "3214,4123,2143",
    "3214,2143,4123",
    "3214,3214,3412",
];

const ISOLATED_TRIPLES: [&str; 15] = [
    "2341,1234,1234",
    "2341,1234,2143",
    "2341,2341,1234",
    "2341,2341,1432",
    "2341,2341,2143",
    "2341,1432,2143",
    "2341,2143,1234",
    "2341,2143,1432",
    "2341,2143,2143",
    "4123,1234,4321",
    "4123,3214,1432",
    "4123,3214,4321",
    "2143,1234,3412",
    "2143,2341,1432",
    "2143,2143,3412",
];

/// The thirteen polynomial systems with their printed solutions.
fn table1_oracle() -> [(Poly, Poly, (f64, f64)); 13] {
    [
        (
            |x, y| x.powi(3) * y - x * y + y * y - x - y + 1.0,
            |x, y| x * x * y * y + x.powi(3) - y * y * x - 2.0 * x * x - x * y - y * y + 2.0 * x + 2.0 * y - 1.0,
            (0.54368, 0.83928),
        ),
        (
            |x, y| x.powi(3) * y + x * x * y * y - x * x * y - y * y * x - x + y,
            |x, y| {
                x.powi(3) * y + x * x * y * y - x * x * y - 2.0 * y * y * x - y.powi(3) - x * x + x * y
                    + 2.0 * y * y
                    + x
                    - y
            },
            (0.55706, 0.85490),
        ),
        (
            |x, y| {
                x.powi(3) * y + x * x * y * y - x * x * y + y * y * x - x * x - 2.0 * x * y - y * y + x + y
            },
            |x, y| {
                x.powi(3) * y + x * x * y * y - x.powi(3) - 4.0 * x * x * y - y * y * x + 2.0 * x * x
                    + 3.0 * x * y
                    + y * y
                    - x
                    - y
            },
            (0.54660, 0.72669),
        ),
        (
            |x, y| x * x * y * y + y.powi(3) * x + x * x * y - y * y * x - x * x - 2.0 * x * y - y * y + x + y,
            |x, y| {
                x.powi(4) + x.powi(3) * y - 3.0 * x.powi(3) - 2.0 * x * x * y - y * y * x + 2.0 * x * x
                    + 3.0 * x * y
                    + y * y
                    - x
                    - y
            },
            (0.50678, 0.67567),
        ),
        (
            |x, y| {
                x.powi(3) * y + 2.0 * x * x * y * y + y.powi(3) * x - 2.0 * x * x * y - 3.0 * y * y * x
                    - y.powi(3)
                    - x * x
                    + 2.0 * x * y
                    + y * y
            },
            |x, y| {
                x.powi(3) * y + 2.0 * x * x * y * y + y.powi(3) * x - x.powi(3) - 3.0 * x * x * y
                    - 3.0 * y * y * x
                    - y.powi(3)
                    + 2.0 * x * x
                    + x * y
                    + y * y
            },
            (0.47759, 0.81530),
        ),
        (
            |x, y| x * x * y * y + y.powi(3) * x - y * y * x - y.powi(3) - x + y,
            |x, y| {
                x * x * y * y + y.powi(3) * x + x.powi(3) - x * x * y - 3.0 * y * y * x - y.powi(3) - x * x
                    + x * y
                    + 2.0 * y * y
                    + x
                    - y
            },
            (0.25805, 0.84781),
        ),
        (
            |x, y| x.powi(3) + x * x * y - x * x + y * y - 2.0 * x - 2.0 * y + 2.0,
            |x, y| y * y * x + y.powi(3) - x * x - 3.0 * x * y - 2.0 * y * y + 3.0 * x + 3.0 * y - 2.0,
            (0.58750, 0.78257),
        ),
        (
            |x, y| x * x * y + y * y * x - 2.0 * x * x - 3.0 * x * y - y * y + 3.0 * x + 3.0 * y - 2.0,
            |x, y| x * x * y + y * y * x - 2.0 * x - 2.0 * y + 2.0,
            (0.5, 0.71922),
        ),
        (
            |x, y| x * x * y + 2.0 * y * y * x + y.powi(3) - 4.0 * x * y - 4.0 * y * y + x + 3.0 * y,
            |x, y| x * x + x * y - y,
            (0.59100, 0.85403),
        ),
        (
            |x, y| x * x * y + y.powi(3) - 2.0 * x * y - 2.0 * y * y + x + y,
            |x, y| x.powi(3) + x * x * y + 2.0 * y * y * x - 2.0 * x * x - 3.0 * x * y - y * y + x + y,
            (0.41803, 0.71831),
        ),
        (
            |x, y| y.powi(3) * x + x * x * y - y.powi(3) - x * y + y * y - x - y + 1.0,
            |x, y| {
                x.powi(3) * y - x * x * y * y - y.powi(3) * x - 2.0 * x.powi(3) + 2.0 * y * y * x + 2.0 * x * x
                    + x * y
                    + y * y
                    - 2.0 * x
                    - 2.0 * y
                    + 1.0
            },
            (0.33133, 0.78783),
        ),
        (
            |x, y| 2.0 * y * y * x - 2.0 * y * x - 2.0 * y * y + x + y,
            |x, y| 3.0 * x * x * y + y * y * x - 2.0 * x * x - 3.0 * y * x - y * y + x + y,
            (0.4, 0.66666),
        ),
        (
            |x, y| y.powi(4) + x * x * y - y.powi(3) - x * y + y * y - x - y + 1.0,
            |x, y| {
                x.powi(4) - x * x * y * y - y.powi(3) * x - 2.0 * x.powi(3) + 2.0 * y * y * x + 2.0 * x * x
                    + x * y
                    + y * y
                    - 2.0 * x
                    - 2.0 * y
                    + 1.0
            },
            (0.59717, 0.87586),
        ),
    ]
}

fn criterion_table1() -> Outcome {
    let start = Instant::now();
    let table = match table1_solutions() {
        Ok(t) => t,
        Err(e) => return outcome(false, e.to_string()),
    };
    let elapsed = start.elapsed();
    let oracle = table1_oracle();
    let s2 = 2f64.sqrt();
    let closed: BTreeMap<u8, (f64, f64)> = [
        (5, ((9.0 - 4.0 * s2) / 7.0, (10.0 + s2) / 14.0)),
        (8, (0.5, (7.0 - 17f64.sqrt()) / 4.0)),
        (12, (0.4, 2.0 / 3.0)),
    ]
    .into();
    let mut worst: f64 = 0.0;
    let mut bad = Vec::new();
    if table.len() != 13 {
        bad.push(format!("{} rows", table.len()));
    }
    for (s, (f, g, printed)) in table.iter().zip(oracle) {
        let (x, y) = s.value;
        let res = f(x, y).abs().max(g(x, y).abs());
        worst = worst.max(res);
        let mut ok = res < 1e-12 && matches_printed(x, printed.0) && matches_printed(y, printed.1);
        if let Some((cx, cy)) = closed.get(&s.id) {
            ok &= (x - cx).abs() < 1e-12 && (y - cy).abs() < 1e-12;
        }
        if !ok {
            bad.push(format!("S{} = ({x}, {y})", s.id));
        }
    }
    let fast = elapsed < Duration::from_secs(1);
    outcome(
        bad.is_empty() && fast,
        format!(
            "max residual {worst:.1e}, refined in {:.0} ms{}",
            elapsed.as_secs_f64() * 1e3,
            if bad.is_empty() { String::new() } else { format!("; off: {}", bad.join(", ")) }
        ),
    )
}

fn criterion_census(c: &Catalogue, elapsed: Duration) -> Outcome {
    let census: Vec<_> = c.census().into_iter().filter(|e| e.template == Template::C).collect();
    let found: BTreeSet<PermTriple> = census.iter().map(|e| e.triple).collect();
    let curves: BTreeSet<PermTriple> = census.iter().filter(|e| e.curves > 0).map(|e| e.triple).collect();
    let want_curves: BTreeSet<PermTriple> = triples(&CURVE_TRIPLES).into_iter().collect();
    let want_isolated = triples(&ISOLATED_TRIPLES);
    let want: BTreeSet<PermTriple> = want_curves.iter().chain(want_isolated.iter()).copied().collect();
    let mut problems = Vec::new();
    for t in want.difference(&found) {
        problems.push(format!("missing {t}"));
    }
    for t in found.difference(&want) {
        problems.push(format!("unexpected {t}"));
    }
    if curves != want_curves {
        problems.push("curve triples differ".into());
    }
    // The first thirteen isolated triples give the table rows in order.
    for (i, (t, (_, _, printed))) in want_isolated.iter().zip(table1_oracle()).enumerate() {
        let hit = c
            .entries
            .iter()
            .filter(|e| e.template == Template::C && e.triple == *t)
            .flat_map(|e| e.solutions.isolated.iter())
            .any(|s| matches_printed(s.normalized[0], printed.0) && matches_printed(s.normalized[1], printed.1));
        if !hit {
            problems.push(format!("{t} does not give row {}", i + 1));
        }
    }
    let fast = elapsed < Duration::from_secs(600);
    outcome(
        problems.is_empty() && c.systems == 512 && fast,
        format!(
            "{} triples with solutions ({} curves) in {:.1} s{}",
            found.len(),
            curves.len(),
            elapsed.as_secs_f64(),
            if problems.is_empty() { String::new() } else { format!("; {}", problems.join("; ")) }
        ),
    )
}

fn criterion_family_c(c: &Catalogue) -> Outcome {
    let curve_set: BTreeSet<PermTriple> = triples(&CURVE_TRIPLES).into_iter().collect();
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for e in c.entries.iter().filter(|e| curve_set.contains(&e.triple)) {
        for [x, y] in e.solutions.curves.iter().flat_map(|cv| cv.normalized.iter().copied()) {
            if y > 1.0 - 1e-7 {
                continue;
            }
            worst = worst.max((y - (x * x - x + 1.0)).abs());
            n += 1;
        }
    }
    // The special point solves y² + x = 1 on the curve y = x² - x + 1.
    let x0 = bisect(|x| (x * x - x + 1.0).powi(2) + x - 1.0, 0.3, 0.6);
    let y0 = x0 * x0 - x0 + 1.0;
    let mut special_dev: f64 = 0.0;
    let mut special_res: f64 = 0.0;
    let mut special_hits = 0;
    for t in triples(&ISOLATED_TRIPLES[13..]) {
        for s in c.entries.iter().filter(|e| e.triple == t).flat_map(|e| e.solutions.isolated.iter()) {
            let [x, y] = s.normalized;
            special_dev = special_dev.max((x - x0).abs()).max((y - y0).abs());
            special_res = special_res.max((y * y + x - 1.0).abs()).max((x * x - x - y + 1.0).abs());
            special_hits += 1;
            if !(matches_printed(x, 0.43015) && matches_printed(y, 0.75487)) {
                special_dev = f64::INFINITY;
            }
        }
    }
    outcome(
        n > 0 && worst < 1e-8 && special_hits >= 2 && special_dev < 1e-8 && special_res < 1e-10,
        format!(
            "{n} curve points, max |y - (x²-x+1)| {worst:.1e}; special point ({x0:.10}, {y0:.10}) \
             matched by {special_hits} solutions, residual {special_res:.1e}"
        ),
    )
}

fn glass_points(cat: &Catalogue) -> Vec<[f64; 2]> {
    cat.entries
        .iter()
        .flat_map(|e| {
            e.solutions
                .isolated
                .iter()
                .map(|s| s.normalized)
                .chain(e.solutions.curves.iter().flat_map(|c| c.normalized.iter().copied()))
        })
        .filter(|p| p[1] <= 1.0 - 1e-7)
        .collect()
}

fn criterion_glass_cut(a: &Catalogue, b: &Catalogue) -> Outcome {
    let fa: Poly = |x, y| y.powi(3) + x * y * y - x * x - y * y;
    let fb1: Poly = |x, y| (x + 1.0) * y * y - (x + 1.0) * y + x * (1.0 - x);
    let fb2: Poly = |x, y| {
        x.powi(3) + (-y * y + y - 2.0) * x * x + (-y.powi(3) + 2.0 * y * y - y + 1.0) * x + y * y - y
    };
    let pa = glass_points(a);
    let pb = glass_points(b);
    let wa = pa.iter().map(|p| fa(p[0], p[1]).abs()).fold(0.0, f64::max);
    let (mut wb, mut n1, mut n2) = (0.0f64, 0, 0);
    for p in &pb {
        let (r1, r2) = (fb1(p[0], p[1]).abs(), fb2(p[0], p[1]).abs());
        if r1 <= r2 {
            n1 += 1;
        } else {
            n2 += 1;
        }
        wb = wb.max(r1.min(r2));
    }
    outcome(
        !pa.is_empty() && !pb.is_empty() && wa < 1e-8 && wb < 1e-8,
        format!(
            "{} A points (max {wa:.1e}); {} B points (max {wb:.1e}; {n1} on B1, {n2} on B2)",
            pa.len(),
            pb.len()
        ),
    )
}

fn criterion_constructions() -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    let mut record = |label: String, d: selfaffine::Result<Dissection>| {
        count += 1;
        match d {
            Ok(d) => {
                if let Err(e) = check_dissection(&d) {
                    failures.push(format!("{label}: {e}"));
                }
            }
            Err(e) => failures.push(format!("{label}: {e}")),
        }
    };
    let weights = [[1.0 / 3.0; 3], [0.1, 0.2, 0.7], [0.5, 0.25, 0.25], [0.05, 0.9, 0.05]];
    for k in 1..=20 {
        let z = k as f64 / 20.0;
        for w in weights {
            record(format!("trapezoid A z={z} w={w:?}"), TrapezoidParam::new(z).and_then(|p| trapezoid_a(p, w)));
        }
        record(format!("trapezoid B z={z}"), TrapezoidParam::new(z).and_then(trapezoid_b));
        if k < 20 {
            record(format!("trapezoid C z={z}"), trapezoid_c(z));
        }
    }
    for n in 3..=8 {
        record(format!("non-convex n={n}"), nonconvex_n_self_affine(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut chain_failures = Vec::new();
    for i in 0..50 {
        // Each copy has determinant 1 - (x + y); keep the smallest piece
        // well above the verifier's singularity threshold.
        let (x, y) = loop {
            let (x, y) = (rng.random_range(0.02..0.88), rng.random_range(0.02..0.88));
            if x + y < 0.9 {
                break (x, y);
            }
        };
        let k = rng.random_range(1..=6);
        let d = NonconvexParams::new(x, y).and_then(|np| nonconvex_chain(np, k));
        // The chain parent's reflex vertex: partial sums of the geometric
        // series in 1 - (x + y).
        if let Ok(d) = &d {
            let c: f64 = (0..k).map(|m| (1.0 - x - y).powi(m as i32)).sum();
            let r = d.parent.vertices[3];
            if (r.x - c * x).abs() > 1e-12 || (r.y - c * y).abs() > 1e-12 {
                chain_failures.push(format!("chain #{i}: parent reflex vertex off"));
            }
        }
        record(format!("chain #{i} ({x:.4}, {y:.4}) k={k}"), d);
    }
    failures.extend(chain_failures);
    let mut zeta_res: f64 = 0.0;
    for k in 1..=100 {
        let z = k as f64 / 100.0;
        let s = z / (1.0 + z + z * z);
        zeta_res = zeta_res.max((zeta(z) - s).abs()).max((z - s - z * z * (1.0 - z * s)).abs());
    }
    let mut gamma_res: f64 = 0.0;
    for n in 3..=8 {
        match solve_f_n(n).ok().and_then(|r| r.first().copied()) {
            Some(x0) => gamma_res = gamma_res.max(gamma_closure_residual(n, x0)),
            None => failures.push(format!("no root for n={n}")),
        }
    }
    let worst = zeta_res.max(gamma_res);
    outcome(
        failures.is_empty() && worst < 1e-12,
        format!(
            "{count} dissections verified; ζ residual {zeta_res:.1e}, γ residual {gamma_res:.1e}{}",
            if failures.is_empty() { String::new() } else { format!("; {}", failures.join("; ")) }
        ),
    )
}

/// Smallest root of `f_n` in `(0, 1)`: first sign change on a fine grid,
/// then bisection.
fn smallest_root(n: u32) -> Option<f64> {
    let f = |x: f64| (1.0 - (1.0 - x).powi(2 * n as i32 - 2)) * (1.0 - x + x * x) - x * (2.0 - x);
    let cells = 100_000;
    let mut prev = (1e-9, f(1e-9));
    for i in 1..=cells {
        let x = i as f64 / cells as f64 * (1.0 - 2e-9) + 1e-9;
        let v = f(x);
        if v == 0.0 {
            return Some(x);
        }
        if v * prev.1 < 0.0 {
            return Some(bisect(f, prev.0, x));
        }
        prev = (x, v);
    }
    None
}

fn has_vertex(d: &Dissection, p: (f64, f64), tol: f64) -> bool {
    d.parent
        .vertices
        .iter()
        .chain(d.pieces.iter().flat_map(|q| q.quad.vertices.iter()))
        .any(|v| (v.x - p.0).abs() < tol && (v.y - p.1).abs() < tol)
}

fn criterion_nonconvex_roots() -> Outcome {
    let mut problems = Vec::new();
    let cubic_root = bisect(|x| x.powi(3) - 2.0 * x * x + 3.0 * x - 1.0, 0.0, 1.0);
    let mut worst: f64 = 0.0;
    for n in 3..=8 {
        let lib = solve_f_n(n).ok().and_then(|r| r.first().copied());
        match (lib, smallest_root(n)) {
            (Some(a), Some(b)) => {
                worst = worst.max((a - b).abs());
                if f_n(n, a).abs() > 1e-12 {
                    problems.push(format!("f_{n} not zero at root"));
                }
            }
            _ => problems.push(format!("n={n}: root missing")),
        }
    }
    let x3 = solve_f_n(3).ok().and_then(|r| r.first().copied()).unwrap_or(f64::NAN);
    let x4 = solve_f_n(4).ok().and_then(|r| r.first().copied()).unwrap_or(f64::NAN);
    worst = worst.max((x3 - cubic_root).abs());
    if !(matches_printed(x3, 0.43015) && matches_printed(x4, 0.48662)) {
        problems.push(format!("roots {x3}, {x4} disagree with 0.43015…, 0.48662…"));
    }
    if !(matches_printed(x3 * (1.0 - x3), 0.24512) && matches_printed(x4 * (1.0 - x4), 0.24982)) {
        problems.push("reflex heights disagree".into());
    }
    let drawn: [(u32, &[(f64, f64)]); 2] = [
        (3, &[(0.43015, 0.24512), (0.18503, 0.43015), (0.32471, 0.18503)]),
        (4, &[(0.48662, 0.24982), (0.23680, 0.38512), (0.36505, 0.18741), (0.46126, 0.23680)]),
    ];
    for (n, pts) in drawn {
        match nonconvex_n_self_affine(n) {
            Ok(d) => {
                for p in pts {
                    if !has_vertex(&d, *p, 1e-4) {
                        problems.push(format!("n={n}: no vertex near {p:?}"));
                    }
                }
            }
            Err(e) => problems.push(e.to_string()),
        }
    }
    outcome(
        problems.is_empty() && worst < 1e-12,
        format!(
            "x0(3) = {x3:.12}, x0(4) = {x4:.12}, max deviation from bisection {worst:.1e}{}",
            if problems.is_empty() { String::new() } else { format!("; {}", problems.join("; ")) }
        ),
    )
}

/// Cut vertices of the eight dissections of the special quadrangle, read
/// off the published drawing (four decimals).
fn drawn_realizations() -> Vec<(&'static str, [(f64, f64); 4])> {
    vec![
        ("1432,1234,4321", [(0.2451, 0.0), (0.1850, 0.3247), (0.0, 0.7548), (0.4301, 0.7548)]),
        ("1432,3214,2341", [(0.5698, 0.5698), (0.2451, 0.4301), (0.1054, 0.9399), (0.0, 0.0)]),
        ("3214,1234,1432", [(0.0, 0.2451), (0.4301, 0.5698), (0.3247, 0.8149), (1.0, 0.0)]),
        ("3214,4123,2143", [(0.5698, 0.0), (0.2451, 0.7548), (0.7548, 0.3247), (0.0, 1.0)]),
        ("3214,2143,4123", [(0.7548, 0.0), (0.5698, 0.4301), (0.8603, 0.1850), (0.0, 1.0)]),
        ("3214,3214,3412", [(0.0, 0.5698), (0.2451, 0.7548), (0.1850, 0.8945), (1.0, 0.0)]),
        ("2143,2341,1432", [(0.7548, 0.0), (0.1850, 0.3247), (0.0, 0.2451), (0.4301, 0.7548)]),
        ("2143,2143,3412", [(0.7548, 0.0), (0.5698, 0.4301), (0.5698, 0.5698), (0.0, 1.0)]),
    ]
}

fn criterion_realizations() -> Outcome {
    let rs = match special_quadrangle_realizations() {
        Ok(rs) => rs,
        Err(e) => return outcome(false, e.to_string()),
    };
    let mut problems = Vec::new();
    let sigs: BTreeSet<String> = rs.iter().map(|r| equivalence_signature(&r.dissection)).collect();
    for r in &rs {
        if let Err(e) = check_dissection(&r.dissection) {
            problems.push(format!("{}: {e}", r.triple));
        }
    }
    for (t, pts) in drawn_realizations() {
        let t: PermTriple = t.parse().expect("triple literal");
        match rs.iter().find(|r| r.triple == t) {
            Some(r) => {
                for p in pts {
                    if !has_vertex(&r.dissection, p, 2e-4) {
                        problems.push(format!("{t}: no vertex near {p:?}"));
                    }
                }
            }
            None => problems.push(format!("{t} missing")),
        }
    }
    outcome(
        rs.len() == 8 && sigs.len() == 8 && problems.is_empty(),
        format!(
            "{} dissections, {} inequivalent{}",
            rs.len(),
            sigs.len(),
            if problems.is_empty() { String::new() } else { format!("; {}", problems.join("; ")) }
        ),
    )
}

fn criterion_refinement() -> Outcome {
    let base = match nonconvex_n_self_affine(3) {
        Ok(d) => d,
        Err(e) => return outcome(false, e.to_string()),
    };
    let mut d = base.clone();
    let mut counts = Vec::new();
    let mut problems = Vec::new();
    for k in 1..=3 {
        // Refine the newest piece each time, so the pieces keep shrinking.
        let last = d.pieces.len() - 1;
        match refine(&d, last, &base) {
            Ok(next) => d = next,
            Err(e) => {
                problems.push(e.to_string());
                break;
            }
        }
        counts.push(d.pieces.len());
        if d.pieces.len() != 3 + 2 * k {
            problems.push(format!("step {k}: {} pieces", d.pieces.len()));
        }
        if let Err(e) = check_dissection(&d) {
            problems.push(format!("step {k}: {e}"));
        }
    }
    outcome(
        problems.is_empty() && counts == [5, 7, 9],
        format!(
            "piece counts {counts:?}{}",
            if problems.is_empty() { String::new() } else { format!("; {}", problems.join("; ")) }
        ),
    )
}

fn random_map(rng: &mut ChaCha8Rng) -> AffineMap2 {
    loop {
        let a: [f64; 6] = std::array::from_fn(|_| rng.random_range(-3.0..3.0));
        let m = AffineMap2::from_array(a);
        if m.det().abs() > 0.2 {
            return m;
        }
    }
}

/// The eight parametrizations read off directly: for each way of walking
/// the boundary, the coordinates of the fourth vertex in the frame spanned
/// by the second vertex and the edges to its neighbours.
fn parametrizations_oracle(vs: [Point2; 4]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for r in 0..4 {
        for s in [1usize, 3] {
            let at = |k: usize| vs[(r + k * s) % 4];
            let (a, b, c, d) = (at(0), at(1), at(2), at(3));
            let (e1, e2, w) = (c - b, a - b, d - b);
            let det = e1.cross(e2);
            out.push((w.cross(e2) / det, e1.cross(w) / det));
        }
    }
    out
}

#[derive(Clone, Copy, Debug)]
enum Fault {
    NudgeVertex,
    Drop,
    Duplicate,
    Shrink,
    Slide,
    Relabel,
}

fn centroid(q: &Quadrangle) -> Point2 {
    let s = q.vertices.iter().fold((0.0, 0.0), |a, v| (a.0 + v.x, a.1 + v.y));
    pt(s.0 / 4.0, s.1 / 4.0)
}

fn inject(d: &Dissection, fault: Fault, rng: &mut ChaCha8Rng) -> Dissection {
    let mut out = d.clone();
    let i = rng.random_range(0..d.pieces.len());
    let size = d
        .parent
        .vertices
        .iter()
        .flat_map(|a| d.parent.vertices.iter().map(move |b| a.dist(*b)))
        .fold(0.0, f64::max);
    let warp = |out: &mut Dissection, f: AffineMap2| {
        let p = &mut out.pieces[i];
        p.quad = p.quad.map(&f);
        p.map = f.compose(&p.map);
    };
    match fault {
        Fault::NudgeVertex => {
            let k = rng.random_range(0..4);
            let t: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let len = size * rng.random_range(2e-3..3e-2);
            let v = out.pieces[i].quad.vertices[k];
            out.pieces[i].quad.vertices[k] = pt(v.x + len * t.cos(), v.y + len * t.sin());
        }
        Fault::Drop => {
            out.pieces.remove(i);
        }
        Fault::Duplicate => {
            let p = out.pieces[i].clone();
            out.pieces.insert(0, p);
        }
        Fault::Shrink => {
            let c = centroid(&d.pieces[i].quad);
            let s = rng.random_range(0.85..0.97);
            warp(&mut out, AffineMap2::new(s, 0.0, 0.0, s, c.x * (1.0 - s), c.y * (1.0 - s)));
        }
        Fault::Slide => {
            let t: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let len = size * rng.random_range(2e-2..8e-2);
            warp(&mut out, AffineMap2::new(1.0, 0.0, 0.0, 1.0, len * t.cos(), len * t.sin()));
        }
        Fault::Relabel => {
            let cur = out.pieces[i].perm;
            let choices: Vec<Perm> = Perm::DIHEDRAL.into_iter().filter(|p| *p != cur).collect();
            out.pieces[i].perm = choices[rng.random_range(0..choices.len())];
        }
    }
    out
}

fn criterion_invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut problems = Vec::new();

    // Diagonal invariant of non-convex quadrangles under affine maps and
    // relabelling.
    let mut inv_dev: f64 = 0.0;
    for _ in 0..1000 {
        let (x, y) = loop {
            let (x, y) = (rng.random_range(0.01..0.98), rng.random_range(0.01..0.98));
            if x + y < 0.99 {
                break (x, y);
            }
        };
        let f = random_map(&mut rng);
        let shift = rng.random_range(0..4);
        let base = [pt(0.0, 1.0), pt(0.0, 0.0), pt(1.0, 0.0), pt(x, y)];
        let vs: [Point2; 4] = std::array::from_fn(|k| f.apply(base[(k + shift) % 4]));
        match Quadrangle::classify(vs, DEFAULT_TOL).and_then(|q| diagonal_invariant(&q)) {
            Ok(v) => inv_dev = inv_dev.max((v - (x + y)).abs()),
            Err(e) => {
                problems.push(format!("I(Q) failed: {e}"));
                break;
            }
        }
    }

    // The eight parametrizations of a convex quadrangle, from any affine
    // image; exactly one lies in the canonical region.
    let mut param_dev: f64 = 0.0;
    let mut param_fail = 0;
    let mut samples = 0;
    while samples < 1000 {
        let (x, y) = (rng.random_range(0.05..4.0), rng.random_range(0.05..4.0));
        if x + y < 1.05 {
            continue;
        }
        samples += 1;
        let f = random_map(&mut rng);
        let vs = [pt(0.0, 0.0), pt(1.0, 0.0), pt(x, y), pt(0.0, 1.0)].map(|v| f.apply(v));
        let oracle = parametrizations_oracle(vs);
        let lib = match eight_parametrizations(x, y) {
            Ok(ps) => ps,
            Err(_) => {
                param_fail += 1;
                continue;
            }
        };
        for (u, v) in &oracle {
            let best = lib
                .iter()
                .map(|p| ((p.x - u).abs().max((p.y - v).abs())) / u.abs().max(v.abs()).max(1.0))
                .fold(f64::INFINITY, f64::min);
            param_dev = param_dev.max(best);
        }
        let canonical: Vec<_> = oracle
            .iter()
            .filter(|(u, v)| u + v > 1.0 + 1e-9 && *v < 1.0 - 1e-9 && u < &(v - 1e-9))
            .collect();
        let near_boundary = oracle.iter().any(|(u, v)| {
            (u + v - 1.0).abs() < 1e-9 || (v - 1.0).abs() < 1e-9 || (u - v).abs() < 1e-9
        });
        if !near_boundary {
            match (canonical.as_slice(), normalize_to_p(x, y)) {
                ([(u, v)], Ok(n)) => {
                    param_dev = param_dev.max((n.params.x - u).abs().max((n.params.y - v).abs()));
                }
                _ => param_fail += 1,
            }
        }
    }

    // Fault injection against verified dissections.
    let mut targets: Vec<Dissection> = Vec::new();
    let trapezoids = [
        TrapezoidParam::new(0.7).and_then(|z| trapezoid_a(z, [0.3, 0.3, 0.4])),
        TrapezoidParam::new(0.45).and_then(trapezoid_b),
        trapezoid_c(0.6),
        nonconvex_n_self_affine(3),
        nonconvex_n_self_affine(6),
        NonconvexParams::new(0.3, 0.2).and_then(|np| nonconvex_chain(np, 4)),
    ];
    for d in trapezoids {
        match d {
            Ok(d) => targets.push(d),
            Err(e) => problems.push(e.to_string()),
        }
    }
    match special_quadrangle_realizations() {
        Ok(rs) => targets.extend(rs.into_iter().map(|r| r.dissection)),
        Err(e) => problems.push(e.to_string()),
    }
    let faults = [Fault::NudgeVertex, Fault::Drop, Fault::Duplicate, Fault::Shrink, Fault::Slide, Fault::Relabel];
    let mut false_passes = Vec::new();
    let mut injected = 0;
    if !targets.is_empty() {
        for k in 0..500 {
            let d = &targets[k % targets.len()];
            let fault = faults[k % faults.len()];
            injected += 1;
            if verify(&inject(d, fault, &mut rng), DEFAULT_TOL).passed {
                false_passes.push(format!("{fault:?} on target {}", k % targets.len()));
            }
        }
    }
    let passed = problems.is_empty()
        && inv_dev < 1e-9
        && param_dev < 1e-9
        && param_fail == 0
        && injected == 500
        && false_passes.is_empty();
    outcome(
        passed,
        format!(
            "I(Q) dev {inv_dev:.1e} over 1000 maps; parametrization dev {param_dev:.1e} over 1000 samples \
             ({param_fail} failures); {} false passes in {injected} corruptions{}",
            false_passes.len(),
            if problems.is_empty() && false_passes.is_empty() {
                String::new()
            } else {
                format!("; {}", problems.iter().chain(false_passes.iter().take(5)).cloned().collect::<Vec<_>>().join("; "))
            }
        ),
    )
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

fn criterion_determinism(c: &Catalogue) -> Outcome {
    let mut problems = Vec::new();
    let cfg = SolverConfig::default();
    match sweep(&[Template::C], &PermTriple::all(), &cfg, Some(2)) {
        Ok(again) if again.to_json() == c.to_json() => {}
        Ok(_) => problems.push("second sweep differs".to_string()),
        Err(e) => problems.push(e.to_string()),
    }

    let mut svgs: Vec<(String, Vec<u8>)> = Vec::new();
    let opts = RenderOptions::default();
    let labelled = RenderOptions {
        labels: LabelMode::VertexNumbers,
        ..opts
    };
    let mut render = |name: &str, d: selfaffine::Result<Dissection>, o: &RenderOptions| match d
        .and_then(|d| Ok((render_dissection(&d, o)?, render_dissection(&d, o)?)))
    {
        Ok((a, b)) if a == b => svgs.push((name.to_string(), a)),
        Ok(_) => problems.push(format!("{name}: renders differ")),
        Err(e) => problems.push(format!("{name}: {e}")),
    };
    render("nonconvex3.svg", nonconvex_n_self_affine(3), &labelled);
    render("trapezoid_b.svg", TrapezoidParam::new(0.5).and_then(trapezoid_b), &opts);
    match special_quadrangle_realizations() {
        Ok(rs) => {
            for (k, r) in rs.into_iter().enumerate() {
                render(&format!("special{}.svg", k + 1), Ok(r.dissection), &opts);
            }
        }
        Err(e) => problems.push(e.to_string()),
    }
    match (render_parameter_chart(std::slice::from_ref(c), &opts), render_parameter_chart(std::slice::from_ref(c), &opts)) {
        (Ok(a), Ok(b)) if a == b => svgs.push(("chart_c.svg".into(), a)),
        (Ok(_), Ok(_)) => problems.push("chart renders differ".into()),
        (Err(e), _) | (_, Err(e)) => problems.push(e.to_string()),
    }

    let bless = std::env::var_os("SELFAFFINE_BLESS").is_some();
    let dir = golden_dir();
    for (name, bytes) in &svgs {
        let path = dir.join(name);
        if bless {
            if let Err(e) = std::fs::create_dir_all(&dir).and_then(|_| std::fs::write(&path, bytes)) {
                problems.push(format!("{name}: {e}"));
            }
            continue;
        }
        match std::fs::read(&path) {
            Ok(g) if &g == bytes => {}
            Ok(_) => problems.push(format!("{name} differs from golden")),
            Err(e) => problems.push(format!("{name}: {e}")),
        }
    }
    outcome(
        problems.is_empty(),
        format!(
            "catalogue JSON identical across thread counts; {} SVGs {}{}",
            svgs.len(),
            if bless { "written" } else { "match goldens" },
            if problems.is_empty() { String::new() } else { format!("; {}", problems.join("; ")) }
        ),
    )
}

fn main() -> ExitCode {
    let cfg = SolverConfig::default();
    let mut results: Vec<(u8, &str, Outcome)> = Vec::new();
    let mut report = |id: u8, name: &'static str, o: Outcome| {
        println!("[{}] {id:>2} {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
        results.push((id, name, o));
    };

    report(1, "Table-1 reproduction", criterion_table1());

    let t = Instant::now();
    let c = sweep(&[Template::C], &PermTriple::all(), &cfg, None);
    let c_time = t.elapsed();
    match &c {
        Ok(c) => {
            report(2, "Permutation census", criterion_census(c, c_time));
            report(3, "Family-C recovery", criterion_family_c(c));
        }
        Err(e) => {
            report(2, "Permutation census", outcome(false, e.to_string()));
            report(3, "Family-C recovery", outcome(false, e.to_string()));
        }
    }

    let a = sweep_all(TemplateGroup::A, &cfg, None);
    let b = sweep_all(TemplateGroup::B, &cfg, None);
    let glass = match (&a, &b) {
        (Ok(a), Ok(b)) => criterion_glass_cut(a, b),
        (Err(e), _) | (_, Err(e)) => outcome(false, e.to_string()),
    };
    report(4, "Glass-cut theorem validation", glass);
    report(5, "Construction verification", criterion_constructions());
    report(6, "Non-convex roots", criterion_nonconvex_roots());
    report(7, "Eight realizations", criterion_realizations());
    report(8, "Refinement corollary", criterion_refinement());
    report(9, "Invariant suites", criterion_invariants());
    let det = match &c {
        Ok(c) => criterion_determinism(c),
        Err(e) => outcome(false, e.to_string()),
    };
    report(10, "Determinism", det);

    let failed: Vec<_> = results.iter().filter(|r| !r.2.passed).map(|r| r.0).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", results.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}

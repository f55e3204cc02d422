//! Levenberg–Marquardt multistart kernel, minimum-norm Newton polishing and
//! pseudo-arclength continuation along one-dimensional solution sets.

use nalgebra::{Matrix6, Vector6};

use super::system::ReducedSystem;

fn mat(j: &[[f64; 6]; 6]) -> Matrix6<f64> {
    Matrix6::from_fn(|r, c| j[r][c])
}

fn vec6(a: &[f64; 6]) -> Vector6<f64> {
    Vector6::from_column_slice(a)
}

fn arr(v: &Vector6<f64>) -> [f64; 6] {
    [v[0], v[1], v[2], v[3], v[4], v[5]]
}

fn sq(r: &[f64; 6]) -> f64 {
    r.iter().map(|v| v * v).sum()
}

/// Which unknowns may move; pinned ones keep their start value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Free(pub [bool; 6]);

impl Free {
    pub const ALL: Free = Free([true; 6]);
    /// `x` and `y` fixed.
    pub const LAYOUT: Free = Free([false, false, true, true, true, true]);

    fn mask(self, j: &mut Matrix6<f64>) {
        for (c, free) in self.0.iter().enumerate() {
            if !free {
                j.column_mut(c).fill(0.0);
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LmOutcome {
    pub u: [f64; 6],
    /// Max-norm residual at `u`.
    pub residual: f64,
    pub iterations: usize,
}

/// Damped least squares from `u0`. Gives up when the damping explodes
/// (a local minimum of the residual), when an unknown leaves `[-bound,
/// bound]`, or after `max_iter` Jacobian evaluations.
pub fn levenberg_marquardt(
    sys: &ReducedSystem,
    u0: [f64; 6],
    free: Free,
    max_iter: usize,
    bound: f64,
    target: f64,
) -> LmOutcome {
    let mut u = u0;
    let mut lambda = 1e-3;
    let (mut r, mut j) = sys.jacobian(&u);
    let mut cost = sq(&r);
    let mut it = 0;
    let max_abs = |r: &[f64; 6]| r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    while it < max_iter {
        if max_abs(&r) < target {
            break;
        }
        it += 1;
        let mut jm = mat(&j);
        free.mask(&mut jm);
        let jt = jm.transpose();
        let jtj = jt * jm;
        let g = jt * vec6(&r);
        let mut accepted = false;
        while lambda < 1e12 {
            let mut a = jtj;
            for k in 0..6 {
                a[(k, k)] += lambda * (1.0 + jtj[(k, k)]);
            }
            let Some(chol) = a.cholesky() else {
                lambda *= 10.0;
                continue;
            };
            let step = chol.solve(&(-g));
            let trial: [f64; 6] = std::array::from_fn(|k| u[k] + step[k]);
            let rt = sys.residual(&trial);
            let ct = sq(&rt);
            if ct.is_finite() && ct < cost {
                u = trial;
                cost = ct;
                lambda = (lambda / 5.0).max(1e-12);
                accepted = true;
                break;
            }
            lambda *= 4.0;
        }
        if !accepted || u.iter().any(|v| v.abs() > bound) {
            break;
        }
        (r, j) = sys.jacobian(&u);
    }
    LmOutcome {
        u,
        residual: max_abs(&r),
        iterations: it,
    }
}

/// Minimum-norm step `-J⁺ r` (singular values below `1e-10·σ_max` dropped).
fn pinv_step(j: &Matrix6<f64>, r: &[f64; 6]) -> Option<Vector6<f64>> {
    let svd = j.svd(true, true);
    let smax = svd.singular_values.max();
    if !(smax > 0.0) {
        return None;
    }
    svd.solve(&vec6(r), 1e-10 * smax).ok().map(|s| -s)
}

/// Newton with minimum-norm steps; quadratically convergent at isolated
/// roots, and projects onto solution curves where the Jacobian drops rank.
pub fn polish(sys: &ReducedSystem, u0: [f64; 6], free: Free, iters: usize) -> ([f64; 6], f64) {
    let mut u = u0;
    let mut res = sys.residual_norm(&u);
    for _ in 0..iters {
        let (r, j) = sys.jacobian(&u);
        let mut jm = mat(&j);
        free.mask(&mut jm);
        let Some(step) = pinv_step(&jm, &r) else { break };
        let trial: [f64; 6] = std::array::from_fn(|k| u[k] + step[k]);
        let rt = sys.residual_norm(&trial);
        if !(rt < res) {
            break;
        }
        u = trial;
        res = rt;
        if res < 1e-15 {
            break;
        }
    }
    (u, res)
}

/// Unit null direction of `J(u)` and the ratio `σ_min / σ_max`.
pub fn tangent(sys: &ReducedSystem, u: &[f64; 6]) -> (Vector6<f64>, f64) {
    let (_, j) = sys.jacobian(u);
    let svd = mat(&j).svd(false, true);
    let (mut imin, mut smin, mut smax) = (0, f64::INFINITY, 0.0f64);
    for (i, s) in svd.singular_values.iter().enumerate() {
        smax = smax.max(*s);
        if *s < smin {
            smin = *s;
            imin = i;
        }
    }
    let vt = svd.v_t.expect("v_t requested");
    let t = vt.row(imin).transpose().normalize();
    (t, if smax > 0.0 { smin / smax } else { 1.0 })
}

/// One predictor–corrector step of length `h` along `dir`. The corrector
/// solves the bordered system `[J; dirᵀ] δ = -[r; (u - pred)·dir]`, so the
/// new point stays on the hyperplane through the prediction orthogonal to
/// `dir`.
fn continuation_step(sys: &ReducedSystem, u: &[f64; 6], dir: &Vector6<f64>, h: f64, tol: f64) -> Option<([f64; 6], usize)> {
    let pred = vec6(u) + dir * h;
    let mut v = pred;
    for it in 0..8 {
        let (r, j) = sys.jacobian(&arr(&v));
        let res = r.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if res < tol {
            return Some((arr(&v), it));
        }
        // 7x6 least squares through the normal equations of the bordered
        // system.
        let jm = mat(&j);
        let a = jm.transpose() * jm + dir * dir.transpose();
        let rhs = -(jm.transpose() * vec6(&r) + dir * (v - pred).dot(dir));
        let delta = a.lu().solve(&rhs)?;
        v += delta;
        if !v.iter().all(|x| x.is_finite()) {
            return None;
        }
    }
    let res = sys.residual_norm(&arr(&v));
    (res < tol).then(|| (arr(&v), 8))
}

/// Whether `u` lies on a one-dimensional solution branch: continuation must
/// advance `steps` steps of length `h`, each corrected to `tol` and moving
/// at least `h/2` away from the previous point.
pub fn advances_along_curve(sys: &ReducedSystem, u: &[f64; 6], steps: usize, h: f64, tol: f64) -> bool {
    let (mut dir, _) = tangent(sys, u);
    let mut cur = *u;
    for _ in 0..steps {
        let Some((next, _)) = continuation_step(sys, &cur, &dir, h, tol) else {
            return false;
        };
        let moved = vec6(&next) - vec6(&cur);
        if moved.norm() < 0.5 * h {
            return false;
        }
        let (t, _) = tangent(sys, &next);
        dir = if t.dot(&moved) < 0.0 { -t } else { t };
        cur = next;
    }
    true
}

/// Traces a solution curve through `u` in both directions while `keep`
/// holds, with adaptive steps in `[h_min, h_max]`. Points are returned in
/// curve order.
pub fn trace_curve(
    sys: &ReducedSystem,
    u: &[f64; 6],
    keep: &dyn Fn(&[f64; 6]) -> bool,
    h_min: f64,
    h_max: f64,
    max_points: usize,
    tol: f64,
) -> Vec<[f64; 6]> {
    let (t0, _) = tangent(sys, u);
    let mut halves: Vec<Vec<[f64; 6]>> = Vec::with_capacity(2);
    let mut closed = false;
    for sign in [1.0, -1.0] {
        let mut pts = Vec::new();
        if closed {
            halves.push(pts);
            continue;
        }
        let mut dir = t0 * sign;
        let mut cur = *u;
        let mut h = h_min;
        while pts.len() < max_points / 2 {
            match continuation_step(sys, &cur, &dir, h, tol) {
                Some((next, its)) if keep(&next) => {
                    let moved = vec6(&next) - vec6(&cur);
                    if moved.norm() < 0.25 * h {
                        h *= 0.5;
                        if h < h_min * 1e-3 {
                            break;
                        }
                        continue;
                    }
                    let (t, _) = tangent(sys, &next);
                    let ndir = if t.dot(&moved) < 0.0 { -t } else { t };
                    // Sharp turns suggest a jump between branches.
                    if ndir.dot(&dir) < 0.9 && h > h_min {
                        h *= 0.5;
                        continue;
                    }
                    dir = ndir;
                    cur = next;
                    pts.push(next);
                    if pts.len() > 10 && (vec6(&next) - vec6(u)).norm() < 0.5 * h {
                        closed = true;
                        break;
                    }
                    if its <= 2 {
                        h = (h * 1.5).min(h_max);
                    }
                }
                _ => {
                    h *= 0.5;
                    if h < h_min * 1e-3 {
                        break;
                    }
                }
            }
        }
        halves.push(pts);
    }
    let mut back = halves.pop().unwrap_or_default();
    let fwd = halves.pop().unwrap_or_default();
    back.reverse();
    back.push(*u);
    back.extend(fwd);
    back
}

#[cfg(test)]
mod tests {
    use super::super::system::{build_system, Template};
    use super::*;

    #[test]
    fn lm_finds_row_12() {
        let sys = build_system("4123,3214,4321".parse().unwrap(), Template::C);
        // A start near the known raw parameters (1/10, 3/2).
        let out = levenberg_marquardt(&sys, [0.12, 1.4, 0.1, 0.5, 0.5, 0.5], Free::ALL, 100, 100.0, 1e-12);
        let (u, res) = polish(&sys, out.u, Free::ALL, 10);
        assert!(res < 1e-12, "{res} at {u:?}");
        assert!((u[0] - 0.1).abs() < 1e-9 && (u[1] - 1.5).abs() < 1e-9, "{u:?}");
        assert!(!advances_along_curve(&sys, &u, 20, 1e-3, 1e-10));
    }

    #[test]
    fn family_triple_gives_a_curve() {
        let sys = build_system("1432,1234,4321".parse().unwrap(), Template::C);
        let mut found = None;
        for k in 0..40 {
            let a = 0.1 + 0.02 * k as f64;
            let out = levenberg_marquardt(&sys, [a, 0.8, 0.3, 0.3, 0.4, 0.6], Free::ALL, 100, 100.0, 1e-12);
            let (u, res) = polish(&sys, out.u, Free::ALL, 10);
            if res < 1e-12 && sys.admissible(&u, 1e-6) {
                found = Some(u);
                break;
            }
        }
        let u = found.expect("a solution on the family curve");
        assert!(advances_along_curve(&sys, &u, 20, 1e-3, 1e-10));
        let pts = trace_curve(&sys, &u, &|v| sys.admissible(v, 1e-6), 1e-3, 2e-2, 4000, 1e-12);
        assert!(pts.len() > 20);
        for p in pts {
            assert!((p[1] - (p[0] * p[0] - p[0] + 1.0)).abs() < 1e-9, "{p:?}");
        }
    }
}

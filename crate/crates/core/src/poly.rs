//! Bivariate polynomials with integer coefficients and univariate root
//! isolation by sign scan plus bisection.

use std::collections::BTreeMap;
use std::fmt;

/// `coeff * x^px * y^py`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: i64,
    pub px: u32,
    pub py: u32,
}

/// Polynomial in `(x, y)` stored as a normalized list of terms (sorted by
/// descending total degree, then descending `x` power; no zero coefficients).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiPoly {
    terms: Vec<Term>,
}

impl BiPoly {
    /// Builds a polynomial from `(coeff, px, py)` triples; like terms merge.
    pub fn new(terms: &[(i64, u32, u32)]) -> Self {
        let mut map: BTreeMap<(u32, u32), i64> = BTreeMap::new();
        for &(c, px, py) in terms {
            *map.entry((px, py)).or_default() += c;
        }
        Self::from_map(map)
    }

    fn from_map(map: BTreeMap<(u32, u32), i64>) -> Self {
        let mut terms: Vec<Term> = map
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|((px, py), coeff)| Term { coeff, px, py })
            .collect();
        terms.sort_by_key(|t| std::cmp::Reverse((t.px + t.py, t.px)));
        BiPoly { terms }
    }

    fn to_map(&self) -> BTreeMap<(u32, u32), i64> {
        self.terms.iter().map(|t| ((t.px, t.py), t.coeff)).collect()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coeff as f64 * x.powi(t.px as i32) * y.powi(t.py as i32))
            .sum()
    }

    /// `(d/dx, d/dy)` at `(x, y)`.
    pub fn gradient(&self, x: f64, y: f64) -> (f64, f64) {
        let mut gx = 0.0;
        let mut gy = 0.0;
        for t in &self.terms {
            let c = t.coeff as f64;
            if t.px > 0 {
                gx += c * t.px as f64 * x.powi(t.px as i32 - 1) * y.powi(t.py as i32);
            }
            if t.py > 0 {
                gy += c * t.py as f64 * x.powi(t.px as i32) * y.powi(t.py as i32 - 1);
            }
        }
        (gx, gy)
    }

    pub fn add(&self, o: &BiPoly) -> BiPoly {
        let mut m = self.to_map();
        for t in &o.terms {
            *m.entry((t.px, t.py)).or_default() += t.coeff;
        }
        Self::from_map(m)
    }

    pub fn sub(&self, o: &BiPoly) -> BiPoly {
        self.add(&o.scale(-1))
    }

    pub fn scale(&self, k: i64) -> BiPoly {
        Self::from_map(self.to_map().into_iter().map(|(e, c)| (e, c * k)).collect())
    }

    pub fn mul(&self, o: &BiPoly) -> BiPoly {
        let mut m: BTreeMap<(u32, u32), i64> = BTreeMap::new();
        for a in &self.terms {
            for b in &o.terms {
                *m.entry((a.px + b.px, a.py + b.py)).or_default() += a.coeff * b.coeff;
            }
        }
        Self::from_map(m)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for BiPoly {
    /// Plain-text form such as `x^3*y - x*y + y^2 - x - y + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let mag = t.coeff.unsigned_abs();
            match (i, t.coeff < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            let monomial = t.px + t.py > 0;
            if mag != 1 || !monomial {
                factors.push(mag.to_string());
            }
            for (v, p) in [("x", t.px), ("y", t.py)] {
                match p {
                    0 => {}
                    1 => factors.push(v.to_string()),
                    _ => factors.push(format!("{v}^{p}")),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

/// Bisection on `[lo, hi]` where `f(lo)` and `f(hi)` have opposite signs;
/// stops when the bracket is narrower than `xtol` or stops shrinking.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, xtol: f64) -> f64 {
    let mut flo = f(lo);
    if flo == 0.0 {
        return lo;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= xtol || mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// All sign changes of `f` on the open interval `(lo, hi)`, located on a
/// uniform grid of `cells` cells and refined by bisection to `xtol`. Roots of
/// even multiplicity between grid points are not detected.
pub fn isolate_roots<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, cells: usize, xtol: f64) -> Vec<f64> {
    let h = (hi - lo) / cells as f64;
    let mut roots = Vec::new();
    let mut prev_x = lo + h;
    let mut prev_f = f(prev_x);
    if prev_f == 0.0 {
        roots.push(prev_x);
    }
    for i in 2..cells {
        let x = lo + h * i as f64;
        let fx = f(x);
        if fx == 0.0 {
            roots.push(x);
        } else if prev_f != 0.0 && (fx < 0.0) != (prev_f < 0.0) {
            roots.push(bisect(&f, prev_x, x, xtol));
        }
        prev_x = x;
        prev_f = fx;
    }
    roots
}

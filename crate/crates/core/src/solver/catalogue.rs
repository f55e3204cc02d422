//! Sweeps over all 512 correspondence triples, the resulting catalogue, and
//! the eight type-C realizations of the special affine type.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::solve::{solve_pinned, solve_template, IsolatedSolution, SolutionSet, SolverConfig};
use super::system::{build_system, PermTriple, Template, TemplateGroup};
use crate::dissection::{relabel_onto, Dissection};
use crate::error::{Error, Result};
use crate::families::{special_point, Family};
use crate::geometry::{Point2, Quadrangle, DEFAULT_TOL};
use crate::params::eight_parametrizations;

/// Type-C triples whose solutions form curves (all on `y = x² - x + 1`
/// after normalization).
pub const FAMILY_TRIPLES: [&str; 6] = [
    "1432,1234,4321",
    "1432,3214,2341",
    "3214,1234,1432",
    "3214,4123,2143",
    "3214,2143,4123",
    "3214,3214,3412",
];

/// Type-C triples with isolated solutions. The first thirteen give the
/// isolated affine types `S1..S13` in order; the last two both give the
/// special type on curve `C`.
pub const SINGULAR_TRIPLES: [&str; 15] = [
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

fn parse_all(list: &[&str]) -> Vec<PermTriple> {
    list.iter().map(|s| s.parse().expect("valid triple literal")).collect()
}

pub fn family_triples() -> Vec<PermTriple> {
    parse_all(&FAMILY_TRIPLES)
}

pub fn singular_triples() -> Vec<PermTriple> {
    parse_all(&SINGULAR_TRIPLES)
}

/// The eight triples realizing the special type: the last two singular
/// triples followed by the six family triples.
pub fn special_triples() -> Vec<PermTriple> {
    let mut out = parse_all(&SINGULAR_TRIPLES[13..]);
    out.extend(family_triples());
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TripleResult {
    pub template: Template,
    pub triple: PermTriple,
    #[serde(flatten)]
    pub solutions: SolutionSet,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Catalogue {
    pub templates: Vec<Template>,
    pub config: SolverConfig,
    /// Number of (template, triple) systems solved.
    pub systems: usize,
    /// Systems with any solution, trapezoidal ones included, in sweep order.
    pub entries: Vec<TripleResult>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusEntry {
    pub template: Template,
    pub triple: PermTriple,
    pub curves: usize,
    pub isolated: usize,
}

/// A normalized isolated solution and every system producing it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CataloguePoint {
    pub normalized: [f64; 2],
    pub sources: Vec<(Template, PermTriple)>,
}

impl Catalogue {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("catalogue serializes")
    }

    pub fn from_json(s: &str) -> Result<Catalogue> {
        serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))
    }

    /// Systems with non-trapezoidal solutions.
    pub fn census(&self) -> Vec<CensusEntry> {
        self.entries
            .iter()
            .filter(|e| e.solutions.has_solutions())
            .map(|e| CensusEntry {
                template: e.template,
                triple: e.triple,
                curves: e.solutions.curves.len(),
                isolated: e.solutions.isolated.len(),
            })
            .collect()
    }

    /// Distinct normalized isolated solutions (merged within `tol`).
    pub fn points(&self, tol: f64) -> Vec<CataloguePoint> {
        let mut out: Vec<CataloguePoint> = Vec::new();
        for e in &self.entries {
            for s in &e.solutions.isolated {
                let [x, y] = s.normalized;
                match out
                    .iter_mut()
                    .find(|p| (p.normalized[0] - x).hypot(p.normalized[1] - y) < tol)
                {
                    Some(p) => {
                        if !p.sources.contains(&(e.template, e.triple)) {
                            p.sources.push((e.template, e.triple));
                        }
                    }
                    None => out.push(CataloguePoint {
                        normalized: s.normalized,
                        sources: vec![(e.template, e.triple)],
                    }),
                }
            }
        }
        out
    }

    /// Fitted family of every traced curve, with its sources.
    pub fn curve_families(&self) -> BTreeMap<Option<Family>, Vec<(Template, PermTriple)>> {
        let mut out: BTreeMap<Option<Family>, Vec<(Template, PermTriple)>> = BTreeMap::new();
        for e in &self.entries {
            for c in &e.solutions.curves {
                let v = out.entry(c.family).or_default();
                if !v.contains(&(e.template, e.triple)) {
                    v.push((e.template, e.triple));
                }
            }
        }
        out
    }

    pub fn isolated(&self) -> impl Iterator<Item = (&TripleResult, &IsolatedSolution)> {
        self.entries
            .iter()
            .flat_map(|e| e.solutions.isolated.iter().map(move |s| (e, s)))
    }
}

/// Solves every listed system with `cfg`, in parallel on `jobs` threads
/// (all cores when `None`). Output order follows the input order.
pub fn sweep(templates: &[Template], triples: &[PermTriple], cfg: &SolverConfig, jobs: Option<usize>) -> Result<Catalogue> {
    let systems: Vec<(Template, PermTriple)> = templates
        .iter()
        .flat_map(|t| triples.iter().map(move |p| (*t, *p)))
        .collect();
    let run = || -> Vec<TripleResult> {
        systems
            .par_iter()
            .map(|(t, p)| TripleResult {
                template: *t,
                triple: *p,
                solutions: solve_template(&build_system(*p, *t), cfg),
            })
            .collect()
    };
    let results = match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidParams(e.to_string()))?
            .install(run),
        None => run(),
    };
    Ok(Catalogue {
        templates: templates.to_vec(),
        config: *cfg,
        systems: systems.len(),
        entries: results.into_iter().filter(|r| !r.solutions.is_empty()).collect(),
    })
}

/// All 512 triples for every template of `group`.
pub fn sweep_all(group: TemplateGroup, cfg: &SolverConfig, jobs: Option<usize>) -> Result<Catalogue> {
    sweep(group.templates(), &PermTriple::all(), cfg, jobs)
}

/// The natural representative `(0,0), (1,0), (x,y), (0,1)`.
pub fn natural_representative(x: f64, y: f64) -> Quadrangle {
    Quadrangle::lenient(
        [
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(x, y),
            Point2::new(0.0, 1.0),
        ],
        DEFAULT_TOL,
    )
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Realization {
    pub triple: PermTriple,
    pub dissection: Dissection,
}

/// A verified type-C dissection of `Q[x, y]` for `triple`, trying every
/// parametrization with `x <= y` of the type; the result is carried onto
/// the natural representative of `(x, y)`.
pub fn realize(triple: PermTriple, x: f64, y: f64) -> Result<Dissection> {
    let target = natural_representative(x, y);
    let sys = build_system(triple, Template::C);
    let mut tried: Vec<(f64, f64)> = Vec::new();
    for np in eight_parametrizations(x, y)? {
        let (px, py) = (np.x, np.y);
        if px > py + 1e-12 || tried.iter().any(|(a, b)| (a - px).abs() + (b - py).abs() < 1e-12) {
            continue;
        }
        tried.push((px, py));
        if let Some(u) = solve_pinned(&sys, px, py, 200, 0).first() {
            let d = super::solve::dissection_from_solution(&sys, u)?;
            return relabel_onto(&d, &target);
        }
    }
    Err(Error::ConvergenceFailure(format!("no type-C realization of Q[{x}, {y}] for {triple}")))
}

/// The eight type-C dissections of the special affine type, one per
/// triple of [`special_triples`].
pub fn special_quadrangle_realizations() -> Result<Vec<Realization>> {
    let (x, y) = special_point();
    special_triples()
        .into_iter()
        .map(|triple| {
            Ok(Realization {
                triple,
                dissection: realize(triple, x, y)?,
            })
        })
        .collect()
}

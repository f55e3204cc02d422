//! Numerical solution of the dissection systems.

pub mod catalogue;
pub mod dual;
pub mod newton;
pub mod solve;
pub mod system;

pub use solve::{
    dissection_from_solution, fit_family, solve_pinned, solve_template, IsolatedSolution,
    SolutionSet, SolverConfig, TracedCurve,
};
pub use system::{build_system, PermTriple, ReducedSystem, Template, TemplateGroup};
pub use catalogue::{
    family_triples, realize, singular_triples, special_quadrangle_realizations, special_triples,
    sweep, sweep_all, Catalogue, Realization,
};

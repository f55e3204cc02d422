//! Full reproduction run: sweeps every template group and prints the
//! pass/fail line of each acceptance criterion.

use selfaffine::report::{report_reproduction, ReportInput};
use selfaffine::solver::{sweep_all, SolverConfig, TemplateGroup};

fn main() -> selfaffine::Result<()> {
    let cfg = SolverConfig::default();
    let c = sweep_all(TemplateGroup::C, &cfg, None)?;
    let a = sweep_all(TemplateGroup::A, &cfg, None)?;
    let b = sweep_all(TemplateGroup::B, &cfg, None)?;
    let report = report_reproduction(&ReportInput {
        c: Some(&c),
        a: Some(&a),
        b: Some(&b),
        tolerance: 1e-12,
        seed: cfg.seed,
        samples: 1000,
    })?;
    print!("{report}");
    if !report.passed() {
        std::process::exit(2);
    }
    Ok(())
}

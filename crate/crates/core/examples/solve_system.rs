// Solving one type-C dissection system: an isolated solution, a solution
// curve, and a system without solutions.

use selfaffine::dissection::verify;
use selfaffine::solver::{build_system, dissection_from_solution, solve_template, SolverConfig, Template};

pub fn run_example() -> selfaffine::Result<()> {
    let cfg = SolverConfig {
        starts: 300,
        ..SolverConfig::default()
    };
    for triple in ["4123,3214,4321", "1432,1234,4321", "1234,1234,1234"] {
        let sys = build_system(triple.parse()?, Template::C);
        let set = solve_template(&sys, &cfg);
        println!("triple {triple}:");
        for s in &set.isolated {
            let d = dissection_from_solution(&sys, &s.unknowns)?;
            println!(
                "  isolated: raw (x, y) = ({:.6}, {:.6}) in {}, normalized ({:.6}, {:.6}), residual {:.1e}, verified {}",
                s.unknowns[0],
                s.unknowns[1],
                s.region,
                s.normalized[0],
                s.normalized[1],
                s.residual,
                verify(&d, 1e-9).passed
            );
        }
        for c in &set.curves {
            let fam = c.family.map(|f| f.to_string()).unwrap_or_else(|| "unknown".into());
            println!(
                "  curve: {} points on family {fam} (polynomial residual {:.1e})",
                c.points.len(),
                c.family_residual
            );
        }
        if !set.has_solutions() {
            println!("  no non-trapezoidal solutions ({} trapezoidal hits)", set.trapezoidal_hits);
        }
    }
    Ok(())
}

fn main() -> selfaffine::Result<()> {
    run_example()
}

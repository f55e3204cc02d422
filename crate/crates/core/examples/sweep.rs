//! Sweep all 512 correspondence triples of a template group and print the
//! census. Usage: `sweep [a|b|c] [starts] [out.json]`.

use selfaffine::solver::{sweep_all, SolverConfig, TemplateGroup};

fn main() -> selfaffine::Result<()> {
    let mut args = std::env::args().skip(1);
    let group: TemplateGroup = args.next().as_deref().unwrap_or("c").parse()?;
    let starts = args.next().and_then(|s| s.parse().ok()).unwrap_or(2000);
    let out = args.next();
    let cfg = SolverConfig {
        starts,
        ..SolverConfig::default()
    };
    let cat = sweep_all(group, &cfg, None)?;
    println!("template group {group}: {} systems", cat.systems);
    for e in cat.census() {
        println!("  {:<5} {}  curves {}  isolated {}", e.template.name(), e.triple, e.curves, e.isolated);
    }
    for p in cat.points(1e-7) {
        println!("  point ({:.6}, {:.6}) from {} system(s)", p.normalized[0], p.normalized[1], p.sources.len());
    }
    for (fam, sources) in cat.curve_families() {
        let fam = fam.map(|f| f.to_string()).unwrap_or_else(|| "unfitted".into());
        println!("  curves on {fam}: {} system(s)", sources.len());
    }
    if let Some(path) = out {
        std::fs::write(&path, cat.to_json()).map_err(|e| selfaffine::Error::Format(e.to_string()))?;
        println!("catalogue written to {path}");
    }
    Ok(())
}

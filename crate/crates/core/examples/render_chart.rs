//! The chart of all 3-self-affine parameters, drawn from fresh sweeps of
//! the three template groups. Usage: `render_chart [starts] [out.svg]`.

use selfaffine::render::{render_parameter_chart, RenderOptions};
use selfaffine::solver::{sweep_all, SolverConfig, TemplateGroup};

fn main() -> selfaffine::Result<()> {
    let mut args = std::env::args().skip(1);
    let starts = args.next().and_then(|s| s.parse().ok()).unwrap_or(2000);
    let out = args.next().unwrap_or_else(|| "chart.svg".into());
    let cfg = SolverConfig {
        starts,
        ..SolverConfig::default()
    };
    let mut cats = Vec::new();
    for g in [TemplateGroup::A, TemplateGroup::B, TemplateGroup::C] {
        let c = sweep_all(g, &cfg, None)?;
        println!("template group {g}: {} systems with solutions", c.census().len());
        cats.push(c);
    }
    let svg = render_parameter_chart(&cats, &RenderOptions::default())?;
    std::fs::write(&out, svg).map_err(|e| selfaffine::Error::Format(e.to_string()))?;
    println!("chart written to {out}");
    Ok(())
}

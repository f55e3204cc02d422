// The eight type-C dissections of the special quadrangle, their
// congruence signatures, and one labelled SVG per dissection.

use std::collections::BTreeSet;

use selfaffine::dissection::{equivalence_signature, verify};
use selfaffine::families::special_point;
use selfaffine::render::{render_dissection, LabelMode, RenderOptions};
use selfaffine::solver::special_quadrangle_realizations;

pub fn run_example() -> selfaffine::Result<()> {
    let (x, y) = special_point();
    println!("special quadrangle Q[{x:.10}, {y:.10}]");
    let rs = special_quadrangle_realizations()?;
    let dir = std::env::temp_dir().join("selfaffine-examples");
    std::fs::create_dir_all(&dir).map_err(|e| selfaffine::Error::Format(e.to_string()))?;
    let opts = RenderOptions {
        labels: LabelMode::VertexNumbers,
        ..RenderOptions::default()
    };
    let mut sigs = BTreeSet::new();
    for (i, r) in rs.iter().enumerate() {
        let d = &r.dissection;
        let interior = d.pieces[0].quad.vertices[2];
        println!(
            "  {} interior vertex ({:.5}, {:.5}) verified {}",
            r.triple,
            interior.x,
            interior.y,
            verify(d, 1e-9).passed
        );
        sigs.insert(equivalence_signature(d));
        let svg = render_dissection(d, &opts)?;
        std::fs::write(dir.join(format!("special_{i}.svg")), svg).map_err(|e| selfaffine::Error::Format(e.to_string()))?;
    }
    println!("{} distinct up to affine congruence; SVGs in {}", sigs.len(), dir.display());
    Ok(())
}

fn main() -> selfaffine::Result<()> {
    run_example()
}

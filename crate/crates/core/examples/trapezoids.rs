// The explicit 3-self-affinities of trapezoids of types A, B and C, each
// checked by the verifier and written as dissection JSON.

use selfaffine::constructions::{trapezoid_a, trapezoid_b, trapezoid_c, zeta, TrapezoidParam};
use selfaffine::dissection::verify;

pub fn run_example() -> selfaffine::Result<()> {
    let z = 0.6;
    let dissections = [
        ("type A", trapezoid_a(TrapezoidParam::new(z)?, [0.2, 0.3, 0.5])?),
        ("type B", trapezoid_b(TrapezoidParam::new(z)?)?),
        ("type C", trapezoid_c(z)?),
    ];
    println!("trapezoid with side ratio z = {z} (zeta = {:.6})", zeta(z));
    let dir = std::env::temp_dir().join("selfaffine-examples");
    std::fs::create_dir_all(&dir).map_err(|e| selfaffine::Error::Format(e.to_string()))?;
    for (name, d) in &dissections {
        let r = verify(d, 1e-9);
        println!(
            "  {name}: {} pieces, ctype {}, verified {}, area defect {:.1e}",
            d.pieces.len(),
            d.ctype,
            r.passed,
            r.area_defect
        );
        for p in &d.pieces {
            println!("    perm {}  det {:.6}", p.perm, p.map.det());
        }
        let path = dir.join(format!("trapezoid_{}.json", name.replace(' ', "_")));
        std::fs::write(&path, d.to_json()).map_err(|e| selfaffine::Error::Format(e.to_string()))?;
    }
    println!("JSON written to {}", dir.display());
    Ok(())
}

fn main() -> selfaffine::Result<()> {
    run_example()
}

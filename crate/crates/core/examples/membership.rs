// Which 3-self-affine families contain a given affine type, the
// thirteen isolated solutions, and samples along the family curves.

use selfaffine::families::{is_member, sample_curve, special_point, table1_solutions, FamilyCurve, MEMBER_TOL};

pub fn run_example() -> selfaffine::Result<()> {
    let (sx, sy) = special_point();
    for (x, y) in [(0.5, 0.75), (0.4, 1.0), (0.4, 2.0 / 3.0), (sx, sy), (0.6, 0.8)] {
        let m = is_member(x, y, MEMBER_TOL)?;
        let names: Vec<String> = m.families.iter().map(|f| f.to_string()).collect();
        let verdict = if names.is_empty() { "not 3-self-affine".to_string() } else { names.join(", ") };
        println!("Q[{x:.6}, {y:.6}]: {verdict}{}", if m.special { " (eight type-C realizations)" } else { "" });
    }

    println!("\nisolated type-C solutions:");
    for s in table1_solutions()? {
        let exact = s.closed_form.map(|c| format!("  = {}", c.text)).unwrap_or_default();
        println!("  S{:<2} ({:.9}, {:.9}){exact}", s.id, s.value.0, s.value.1);
    }

    println!("\nfive points on each family:");
    for c in FamilyCurve::all() {
        let pts: Vec<String> = sample_curve(&c, 5).iter().map(|(x, y)| format!("({x:.3}, {y:.3})")).collect();
        println!("  {:<2} {}", c.family.to_string(), pts.join(" "));
    }
    Ok(())
}

fn main() -> selfaffine::Result<()> {
    run_example()
}

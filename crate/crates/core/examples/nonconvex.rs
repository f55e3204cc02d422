// Non-convex self-affine quadrangles: roots of f_n, the n-piece
// dissections built from them, chains, and refinement into more pieces.

use selfaffine::constructions::{
    diagonal_invariant, nonconvex_chain, nonconvex_n_self_affine, nonconvex_split, solve_f_n, NonconvexParams,
};
use selfaffine::dissection::{refine, verify};

pub fn run_example() -> selfaffine::Result<()> {
    for n in 3..=8 {
        let roots = solve_f_n(n)?;
        let d = nonconvex_n_self_affine(n)?;
        let inv = diagonal_invariant(&d.parent)?;
        println!(
            "n = {n}: x0 = {:.11}, parent reflex vertex ({:.5}, {:.5}), I(Q) = {inv:.6}, verified {}",
            roots[0],
            d.parent.vertices[3].x,
            d.parent.vertices[3].y,
            verify(&d, 1e-9).passed
        );
    }

    let np = NonconvexParams::new(0.3, 0.2)?;
    let split = nonconvex_split(np)?;
    println!("\nsplitting Q[0.3, 0.2]: remainder {:?}", split.remainder.vertices);
    for k in [1, 3, 6] {
        let d = nonconvex_chain(np, k)?;
        println!("chain of {k}: parent reflex vertex ({:.6}, {:.6})", d.parent.vertices[3].x, d.parent.vertices[3].y);
    }

    let base = nonconvex_n_self_affine(3)?;
    let mut d = base.clone();
    for _ in 0..3 {
        d = refine(&d, 0, &base)?;
        println!("refined: {} pieces, verified {}", d.pieces.len(), verify(&d, 1e-9).passed);
    }
    Ok(())
}

fn main() -> selfaffine::Result<()> {
    run_example()
}

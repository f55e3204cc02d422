// The eight parametrizations of one affine type, its canonical
// representative, shape class and gc-parameters.

use selfaffine::params::{classify_shape, eight_parametrizations, natural_to_gc, normalize_to_p};

pub fn run_example() -> selfaffine::Result<()> {
    let (x, y) = (2.0 / 3.0, 5.0 / 6.0);
    println!("parametrizations of Q[{x:.4}, {y:.4}]:");
    for p in eight_parametrizations(x, y)? {
        println!("  {:<11} ({:.6}, {:.6})", p.region.to_string(), p.x, p.y);
    }

    let n = normalize_to_p(1.5, 0.75)?;
    println!(
        "Q[1.5, 0.75] is Q[{:.6}, {:.6}] in P (input lies in {})",
        n.params.x, n.params.y, n.input_region
    );

    for (x, y) in [(1.0, 1.0), (0.4, 1.0), (0.7, 0.7), (0.6, 0.8)] {
        println!("Q[{x}, {y}]: {}", classify_shape(x, y)?);
    }

    let g = natural_to_gc(0.6, 0.8)?;
    println!("gc-parameters of Q[0.6, 0.8]: alpha = {:.6}, beta = {:.6}", g.alpha, g.beta);
    Ok(())
}

fn main() -> selfaffine::Result<()> {
    run_example()
}

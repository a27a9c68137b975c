//! Cross-checks with the numerical oracles: Monte-Carlo sizes against the
//! closed form, and a grid search against the intersection's μ₀.

use conceptual_spaces::measure::concept_size;
use conceptual_spaces::oracle::{grid_argmax_min_membership, mc_measure, McConfig};
use conceptual_spaces::space_io::fruit_space;
use conceptual_spaces::Result;

pub fn run_example() -> Result<()> {
    let space = fruit_space();
    let cfg = McConfig::new(200_000, 2024);
    for (name, concept) in space.concepts() {
        let exact = concept_size(concept)?;
        let est = mc_measure(concept, &cfg)?;
        println!(
            "{name:>12}: closed form {exact:.5}, {} estimate {:.5} ± {:.5} ({:+.2}%)",
            est.algorithm,
            est.estimate,
            est.stderr,
            100.0 * (est.estimate / exact - 1.0)
        );
    }

    let apple = space.concept("apple")?;
    let pear = space.concept("pear")?;
    let (alpha, at) = grid_argmax_min_membership(apple, pear, 5e-3)?;
    println!(
        "grid best min-membership {alpha:.6} at {at:?}; intersect gives {:.6}",
        apple.intersect(pear)?.mu0()
    );
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}

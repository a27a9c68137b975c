//! The fruit-space session: subsethood, implication, similarity and an
//! intersection on the bundled fruit concepts.

use conceptual_spaces::relations::{concept_similarity, implication, subsethood};
use conceptual_spaces::space_io::fruit_space;
use conceptual_spaces::Result;

pub fn run_example() -> Result<()> {
    let space = fruit_space();
    let apple = space.concept("apple")?;
    let pear = space.concept("pear")?;

    println!("granny_smith ⊆ apple: {}", subsethood(space.concept("granny_smith")?, apple)?);
    println!("apple ⇒ red: {}", implication(apple, space.concept("red")?)?);
    println!(
        "similarity(pear, apple) = {}, similarity(pear, lemon) = {}",
        concept_similarity(pear, apple)?,
        concept_similarity(pear, space.concept("lemon")?)?
    );

    let both = apple.intersect(pear)?;
    for cuboid in both.core().cuboids() {
        println!("core: {:?}-{:?}", cuboid.p_min(), cuboid.p_max());
    }
    println!("mu: {:.10}", both.mu0());
    println!("c: {}", both.c());
    println!("weights: {:?}", both.weights().domain_weights());
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}

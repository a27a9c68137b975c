//! Subspace projection and axis-parallel cuts.

use conceptual_spaces::geometry::domain_set;
use conceptual_spaces::space_io::fruit_space;
use conceptual_spaces::Result;

pub fn run_example() -> Result<()> {
    let space = fruit_space();
    let apple = space.concept("apple")?;

    let apple_color = apple.project(&domain_set(["color"]))?;
    println!("apple on color: weights {:?}", apple_color.weights().domain_weights());
    let apple_body = apple.project(&domain_set(["shape", "taste"]))?;
    println!("apple on shape+taste: weights {:?}", apple_body.weights().domain_weights());

    // "purple banana": drop banana's color, then add purple's
    let banana = space.concept("banana")?;
    let colorless = banana.project(&domain_set(["shape", "taste"]))?;
    println!("colorless banana covers {:?}", colorless.domains());

    // sweet and less sweet bananas
    let sweet = space.structure().dimension_index("sweet").expect("fruit space has sweetness");
    let (upper, lower) = banana.cut(sweet, 0.6)?;
    let (upper, lower) = (upper.expect("banana reaches above 0.6"), lower.expect("and below"));
    println!("sweet banana: {} cuboid(s)", upper.core().cuboids().len());
    println!("less sweet banana: {} cuboid(s)", lower.core().cuboids().len());

    let back = lower.unify(&upper)?;
    let probe = [0.78, 0.2, 0.75];
    println!(
        "membership at {probe:?}: banana {}, reunified {}",
        banana.membership(&probe),
        back.membership(&probe)
    );
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}

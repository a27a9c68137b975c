//! Concept sizes: hyperball volumes, α-cut volumes and the integral of the
//! membership function.

use conceptual_spaces::measure::{alpha_cut_volume, concept_size, hyperball_volume, MeasureContext};
use conceptual_spaces::space_io::fruit_space;
use conceptual_spaces::{DomainStructure, Result, Weights};

pub fn run_example() -> Result<()> {
    // a disk in one fused two-dimensional domain and a diamond across two
    let fused = DomainStructure::new([("plane", vec![0, 1])], vec!["x".into(), "y".into()])?;
    let w = Weights::uniform(&fused, &fused.all_domains())?;
    println!("fused disk, r = 1: {}", hyperball_volume(1.0, &fused, &w)?);
    let split = DomainStructure::new([("a", vec![0]), ("b", vec![1])], vec!["x".into(), "y".into()])?;
    let w = Weights::uniform(&split, &split.all_domains())?;
    println!("Manhattan diamond, r = 1: {}", hyperball_volume(1.0, &split, &w)?);

    let space = fruit_space();
    let pear = space.concept("pear")?;
    let ctx = MeasureContext::of(pear);
    let cuboid = &pear.core().cuboids()[0];
    for alpha in [1.0, 0.75, 0.5, 0.25] {
        println!("pear α-cut volume at {alpha}: {:.6}", alpha_cut_volume(&ctx, cuboid, alpha)?);
    }
    for (name, concept) in space.concepts() {
        println!("size of {name}: {:.6}", concept_size(concept)?);
    }
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}

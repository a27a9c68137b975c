//! Conjunction and disjunction of concepts.
//!
//! Intersection keeps the highest nonempty α-cut overlap; unification keeps
//! every cuboid and repairs the core when the central regions miss each
//! other.

use conceptual_spaces::geometry::domain_set;
use conceptual_spaces::space_io::fruit_space;
use conceptual_spaces::{Concept, Core, Cuboid, Result, Weights};

fn describe(name: &str, c: &Concept) {
    println!("{name}: mu0 = {:.6}, c = {}, {} cuboid(s)", c.mu0(), c.c(), c.core().cuboids().len());
    for cuboid in c.core().cuboids() {
        println!("    {:?} - {:?}", cuboid.p_min(), cuboid.p_max());
    }
}

pub fn run_example() -> Result<()> {
    let space = fruit_space();
    let s = space.structure();

    // "green banana": a color property intersected with a full concept
    let color = domain_set(["color"]);
    let green = Concept::new(
        Core::new(vec![Cuboid::on_domains(&[0.45, 0.0, 0.0], &[0.6, 0.0, 0.0], color.clone(), s)?])?,
        1.0,
        20.0,
        Weights::uniform(s, &color)?,
    )?;
    let banana = space.concept("banana")?;
    describe("green banana", &banana.intersect(&green)?);

    // a purple banana keeps only a sliver of membership
    let purple = Concept::new(
        Core::new(vec![Cuboid::on_domains(&[0.0, 0.0, 0.0], &[0.1, 0.0, 0.0], color.clone(), s)?])?,
        1.0,
        20.0,
        Weights::uniform(s, &color)?,
    )?;
    describe("purple banana", &banana.intersect(&purple)?);

    // citrus fruit from lemon and orange; the disjoint cores get repaired
    let citrus = space.concept("lemon")?.unify(space.concept("orange")?)?;
    describe("citrus", &citrus);
    let midpoint = citrus.core().midpoint();
    println!("citrus prototype: {midpoint:?}, membership {}", citrus.membership(&midpoint));
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}

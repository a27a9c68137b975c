//! Building a space by hand, saving it and loading it back.

use conceptual_spaces::geometry::domain_set;
use conceptual_spaces::space_io::{load_space, save_space, Space};
use conceptual_spaces::{Concept, Core, Cuboid, DomainStructure, Result, Weights};

pub fn run_example() -> Result<()> {
    let structure = DomainStructure::new(
        [("age", vec![0]), ("body", vec![1, 2])],
        vec!["years".into(), "height".into(), "weight".into()],
    )?;
    let all = structure.all_domains();

    // two cuboids give the age/height correlation a single box would lose
    let child = Concept::new(
        Core::new(vec![
            Cuboid::new(vec![0.0, 0.5, 3.0], vec![6.0, 1.2, 22.0], all.clone(), &structure)?,
            Cuboid::new(vec![5.0, 1.1, 18.0], vec![12.0, 1.6, 50.0], all.clone(), &structure)?,
        ])?,
        1.0,
        2.0,
        Weights::with_uniform_dimensions(&structure, [("age", 1.2), ("body", 0.8)])?,
    )?;
    let tall = domain_set(["body"]);
    let tall = Concept::new(
        Core::new(vec![Cuboid::on_domains(&[0.0, 1.8, 60.0], &[0.0, 2.2, 110.0], tall.clone(), &structure)?])?,
        1.0,
        1.5,
        Weights::uniform(&structure, &tall)?,
    )?;

    let mut space = Space::new(structure);
    space.insert("child", child)?;
    space.insert("tall", tall)?;

    let path = std::env::temp_dir().join("people_space.json");
    save_space(&space, &path)?;
    let loaded = load_space(&path)?;
    assert_eq!(loaded, space);
    println!("{}", loaded.to_json());
    println!("child membership at (9, 1.5, 35): {}", loaded.concept("child")?.membership(&[9.0, 1.5, 35.0]));
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}

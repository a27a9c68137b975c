//! Writes SVG views of the fruit space, one per pair of dimensions, with
//! the 0.5-cuts and 0.25-cuts drawn around the cores.

use std::path::PathBuf;

use conceptual_spaces::space_io::{export_plot, fruit_space};
use conceptual_spaces::Result;

pub fn run_example() -> Result<Vec<PathBuf>> {
    let space = fruit_space();
    let names: Vec<&str> = space.concepts().keys().map(String::as_str).collect();
    let dir = std::env::temp_dir();
    let mut written = Vec::new();
    for (x, y) in [("hue", "round"), ("hue", "sweet"), ("round", "sweet")] {
        let path = dir.join(format!("fruit_{x}_{y}.svg"));
        export_plot(&space, &names, (x, y), &[0.5, 0.25], &path)?;
        println!("wrote {}", path.display());
        written.push(path);
    }
    Ok(written)
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}

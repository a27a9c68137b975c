//! Fuzzy star-shaped concepts in conceptual spaces.
//!
//! A conceptual space is a set of quality dimensions grouped into domains.
//! Concepts are fuzzy sets whose core is a union of axis-parallel cuboids
//! with a common central region; membership decays exponentially with the
//! weighted distance to that core.
//!
//! ```
//! use conceptual_spaces::space_io::fruit_space;
//!
//! let space = fruit_space();
//! let apple = space.concept("apple").unwrap();
//! let pear = space.concept("pear").unwrap();
//! let both = apple.intersect(pear).unwrap();
//! assert!((both.mu0() - 0.6872892788).abs() < 1e-9);
//! ```

pub mod cli;
pub mod concepts;
pub mod error;
pub mod geometry;
pub mod measure;
pub mod oracle;
pub mod regions;
pub mod relations;
pub mod space_io;

pub use concepts::Concept;
pub use error::{Error, Result};
pub use geometry::{DomainSet, DomainStructure, Weights};
pub use regions::{Core, Cuboid};

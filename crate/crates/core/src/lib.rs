pub mod algebra;
pub mod checks;
pub mod diagrams;
pub mod error;
pub mod mesh;
pub mod overlay;
pub mod render;
pub mod series;
pub mod squish;

pub use error::{Error, Result};

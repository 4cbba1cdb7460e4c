pub mod checks;
pub mod convergence;
pub mod error;
pub mod filter;
pub mod pointset;
pub mod product;
pub mod space;
pub mod theorem;

pub use error::{LabError, Result};
pub use pointset::PointSet;

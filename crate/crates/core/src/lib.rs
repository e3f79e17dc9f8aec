pub mod catalog;
pub mod cli;
pub mod error;
pub mod oracle;
pub mod quadrature;
pub mod quantizer;
pub mod residues;
pub mod roots;
pub mod semiclassical;

pub use catalog::{Family, MaxLevel, PotentialSpec, UnitSystem};
pub use error::{QhjError, Result};

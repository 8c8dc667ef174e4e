//! Bordered Floer bimodule calculus over F2.

pub mod ainfty;
pub mod algebra;
pub mod cli;
pub mod diagrams;
pub mod error;
pub mod f2;
pub mod grading;
pub mod pmc;
pub mod strands;
pub mod torus;

pub use algebra::{Algebra, Elem};
pub use error::{Error, Result};
pub use pmc::PointedMatchedCircle;

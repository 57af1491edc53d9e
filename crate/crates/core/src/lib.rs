pub mod bihss;
pub mod coeffs;
pub mod cohomolab;
pub mod error;
pub mod forms;
pub mod functionals;
pub mod jetring;
pub mod linalg;
pub mod syntax;

pub use error::{Error, Result};

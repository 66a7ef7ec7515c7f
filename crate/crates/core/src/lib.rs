pub mod error;
pub mod formulas;
pub mod functions;
pub mod gen;
pub mod geometry;
pub mod io;
pub mod num;
pub mod optimality;
pub mod oracle;
pub mod parallel;
pub mod suite;
pub mod verify;

pub use error::{Error, Result};
pub use num::{ExtValue, Rational, Vector};

pub mod arith;
pub mod coefficients;
pub mod corpus;
pub mod equivalence;
pub mod error;
pub mod exponents;
pub mod expr;
pub mod kronecker;
pub mod precision;
pub mod rigidity;
pub mod series;
pub mod specfile;
pub mod twist;

pub use error::{Error, Result};

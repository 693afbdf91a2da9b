pub mod ambient;
pub mod coinvariant;
pub mod error;
pub mod exactalg;
pub mod invariants;
pub mod firstorder;
pub mod linalg;
pub mod membership;
pub mod random;
pub mod univariate;

pub use error::{Error, Result};

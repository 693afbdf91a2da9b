//! Exact scalars (`Z[i]`, `Q(i)`, `F2`, `Z/4Z`) and sparse multivariate polynomials.

mod gaussian;
mod modular;
mod poly;
mod ring;

pub use gaussian::{gint_gcd, val_one_plus_i, GaussianInt, GaussianRational};
pub use modular::{ZMod, F2, Z4};
pub use poly::{lift_f2, vars_from, Monomial, MultiPoly, Poly, TermJson, Vars};
pub use ring::Ring;

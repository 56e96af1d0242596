//! Representation, construction, and high-throughput evaluation of
//! completely multiplicative functions with values in the closed unit disk.

pub mod character;
pub mod factor;
pub mod prime_table;
pub mod spec;

pub use character::DirichletCharacter;
pub use factor::{big_omega, factorize, is_prime_u64};
pub use prime_table::PrimeTable;
pub use spec::{builtin, MultFnSpec};

//! Finite metric spaces whose distances lie in a prescribed set of
//! nonnegative rationals.
//!
//! The crate is organised bottom-up:
//!
//! - [`values`]: value sets, the four-values condition, residuation and the
//!   canonical distance on a value set.
//! - [`space`]: validated finite metric spaces, sup-products, combinatorial
//!   lines and isometric-embedding search.
//! - [`amalgam`]: amalgamation, distance sockets and finite Urysohn
//!   approximants.
//! - [`ultra`]: ultrametric spaces and their valued trees.
//! - [`connect`]: ε-chains, Cantor connectivity and the subdominant
//!   ultrametric.
//! - [`divide`]: rings, stripes and the partition constructions used to
//!   divide spaces.
//!
//! All arithmetic is exact.
//!
//! ```
//! use vmetric::values::{four_values_check, FourValues, ValueSet};
//!
//! let v = ValueSet::from_integers(&[1, 3, 5]);
//! assert_eq!(four_values_check(&v), FourValues::Holds);
//! ```

mod rational;
mod union_find;

pub mod amalgam;
pub mod connect;
pub mod divide;
pub mod space;
pub mod ultra;
pub mod values;

pub use rational::{q, ParseRationalError, Rational};
pub use space::FiniteMetricSpace;
pub use values::ValueSet;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/values.md")]
    mod values {}
    #[doc = include_str!("../../../book/src/spaces.md")]
    mod spaces {}
    #[doc = include_str!("../../../book/src/amalgamation.md")]
    mod amalgamation {}
    #[doc = include_str!("../../../book/src/ultrametric.md")]
    mod ultrametric {}
    #[doc = include_str!("../../../book/src/connectivity.md")]
    mod connectivity {}
    #[doc = include_str!("../../../book/src/divisibility.md")]
    mod divisibility {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

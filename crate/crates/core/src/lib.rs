//! Totally nonfree actions of the infinite symmetric group.
//!
//! The crate samples random signed Young subgroups from Bernoulli label
//! sequences, evaluates closed-form fixed-point measures and characters
//! through Newton and super-Newton power sums, classifies the resulting
//! measures, and checks the general definitions against exhaustively
//! enumerated subgroup lattices of small symmetric groups.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod lattice;
pub mod measures;
pub mod numeric;
pub mod perm;
pub mod young;

pub use error::{Error, Result};
pub use numeric::{NumericMode, Rational, Weight};
pub use perm::{CycleType, Permutation};

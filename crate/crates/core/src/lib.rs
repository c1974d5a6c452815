//! Exact computer algebra for tau functions of the KP and BKP hierarchies.
//!
//! Everything is exact rational arithmetic over truncated graded power
//! series. The crate provides Schur and Schur Q-functions, expansion of a
//! series in those bases, Hirota-residue and addition-formula checks, and
//! Giambelli-type synthesis and verification of coefficient tables.

pub mod checks;
pub mod giambelli;
pub mod linalg;
pub mod partitions;
pub mod rational;
pub mod report;
pub mod schur_kp;
pub mod schur_q;
pub mod series;
pub mod table;

#[cfg(test)]
mod test_util;

pub use rational::Rational;
pub use report::{CheckMode, CheckReport, Witness};
pub use series::{GradedSeries, LaurentSeries, Monomial, SeriesError, SeriesRing, VarKind};

//! Exact enumeration of derangements whose descents are confined to
//! prescribed blocks, λ-factorial counting formulas, generalized Euler
//! difference tables with the bijections behind their recurrences, and a
//! correlation inequality between block sizes.

pub mod bijections;
pub mod correlation;
pub mod counting;
pub mod euler;
pub mod lambda;
pub mod perm;
pub mod poly;
pub mod series;
pub mod verify;

pub(crate) mod decimal {
    use num_bigint::BigInt;

    pub fn serialize<S: serde::Serializer>(value: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(value)
    }
}

pub use perm::{ColouredPermutation, Composition, PermError, Permutation};
pub use poly::LambdaPolynomial;

/// Bumped whenever a computed value could change.
pub const ENGINE_VERSION: &str = "1";

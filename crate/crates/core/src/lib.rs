//! Finite combinatorics of circular structures and their partitioned-order
//! expansions.
//!
//! The library works over two families of finite objects:
//!
//! * members of the age of the circular structure `S(n)` — finite relational
//!   structures with `n` binary sector relations realized by generic rational
//!   points on the unit circle, and
//! * finite `n`-partitioned linear orders (the age of `Q_n`), represented as
//!   label words.
//!
//! The bridge between the two is the projection functor in [`expansion`],
//! which turns a partitioned order into a circular structure. On top of that
//! sit exact counts of expansions, small/big Ramsey degree formulas backed by
//! brute-force oracles ([`degrees`]), and a desk-scale arrow-relation checker
//! ([`arrow`]). Everything is exact: rational arithmetic for angles, big
//! integers for degree values, exhaustive search for every count.

pub mod arrow;
pub mod circular;
pub mod degrees;
pub mod error;
pub mod expansion;
pub mod partitioned;
pub mod structure;

pub use error::Error;

/// Exact rational scalar used for circle angles and census arithmetic.
pub type Rational = num_rational::BigRational;

/// Convenience result alias for fallible library operations.
pub type Result<T> = std::result::Result<T, Error>;

#[cfg(test)]
pub(crate) fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Reduce a rational to its representative in `[0, 1)`.
pub(crate) fn mod_one(r: &Rational) -> Rational {
    r - r.floor()
}

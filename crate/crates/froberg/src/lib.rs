//! Hilbert series of ideals generated by generic forms of one degree.
//!
//! For `z` generic forms of degree `d` in `n` variables, Fröberg's conjecture
//! predicts the Hilbert series of the quotient ring: the power series
//! `(1 - t^d)^z / (1 - t)^n` truncated at its first non-positive coefficient.
//! When every multiplication map `(f_1, ..., f_z) -> sum f_i g_i` from degree
//! `k` into degree `d + k` has maximal rank, the prediction is exact.
//!
//! This crate computes the conjectured series exactly ([`series`]), decides
//! for which `z` the equal-degree case is certified by an injectivity /
//! surjectivity criterion and how much of the range `1..=dim S_d` those
//! certificates cover ([`criteria`]), and checks predictions empirically by
//! computing ranks of multiplication matrices for randomly sampled forms over
//! a prime field ([`gfp`], [`verifier`]).
//!
//! Rank computations and verification trials run on a rayon thread pool when
//! the `parallel` feature (enabled by default) is active; disabling it yields
//! a fully sequential build with the same API and bit-identical results.

pub mod combinatorics;
pub mod criteria;
mod exec;
pub mod gfp;
pub mod series;
pub mod verifier;

use num_bigint::BigUint;

/// Errors shared across the crate.
///
/// Resource errors ([`Error::MonomialCapExceeded`], [`Error::MatrixTooLarge`])
/// carry the offending dimensions so callers can report exactly what blew the
/// budget rather than a generic "too big".
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A monomial basis was requested whose size exceeds the enumeration cap.
    #[error(
        "monomial basis for n={n}, degree={degree} has {size} elements, over the cap of {cap}"
    )]
    MonomialCapExceeded {
        n: usize,
        degree: usize,
        size: BigUint,
        cap: usize,
    },

    /// A matrix dimension exceeds the dense-representation cap.
    #[error("{rows} x {cols} matrix exceeds the dimension cap of {cap}")]
    MatrixTooLarge {
        rows: usize,
        cols: usize,
        cap: usize,
    },

    /// Matrices must have at least one row and one column.
    #[error("matrix dimensions {rows} x {cols} must both be positive")]
    EmptyMatrix { rows: usize, cols: usize },

    /// The requested modulus is composite (or < 2).
    #[error("modulus {0} is not prime")]
    NotPrime(u64),

    /// The requested modulus does not fit the arithmetic word size.
    #[error("modulus {0} exceeds the maximum supported prime 2^31 - 1")]
    ModulusTooLarge(u64),

    /// Attempted to invert zero in GF(p).
    #[error("attempted to invert 0 modulo {0}")]
    DivisionByZero(u64),
}

impl Error {
    /// True for errors that mean "the requested computation is too large",
    /// as opposed to malformed input.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            Error::MonomialCapExceeded { .. } | Error::MatrixTooLarge { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

//! Exact counting and enumeration for the monomial bases of a polynomial ring.
//!
//! Everything here is about `S = K[x_1, ..., x_n]`: how large its graded
//! pieces are, and how to walk the monomials of a fixed degree in a canonical
//! order. Counts are exact [`BigUint`] values — interval endpoints downstream
//! are ratios of these numbers and must not lose precision — while enumeration
//! is capped so a typo in a degree cannot ask for a petabyte of exponent
//! vectors.
//!
//! The canonical order is graded lexicographic: within one total degree,
//! exponent vectors are listed in descending lexicographic order, so `x_1^m`
//! comes first and `x_n^m` last. [`monomial_index`] inverts the enumeration in
//! closed form without materializing the basis.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// Largest monomial basis [`monomials`] will materialize.
pub const DEFAULT_MONOMIAL_CAP: usize = 5_000_000;

/// Binomial coefficient `C(a, b)`, exactly.
///
/// Returns 0 when `b > a`, and `C(a, 0) = 1` (including `a = 0`). Computed by
/// the multiplicative formula; each intermediate division is exact because
/// every prefix product is itself a binomial coefficient.
pub fn binomial(a: u64, b: u64) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigUint::one();
    for i in 0..b {
        acc = acc * BigUint::from(a - i) / BigUint::from(i + 1);
    }
    acc
}

/// Dimension of the degree-`m` graded piece of `K[x_1, ..., x_n]`:
/// `C(m + n - 1, n - 1)`, the number of degree-`m` monomials in `n` variables.
///
/// # Panics
///
/// Panics if `n == 0`; the ring must have at least one variable.
pub fn dim_graded(n: usize, m: usize) -> BigUint {
    assert!(n >= 1, "dim_graded requires at least one variable");
    binomial((m + n - 1) as u64, (n - 1) as u64)
}

/// [`dim_graded`] as a machine integer, for sizing matrices and index spaces.
///
/// Fails with [`Error::MonomialCapExceeded`] when the dimension is over `cap`,
/// reporting the exact size that was requested.
pub fn dim_graded_capped(n: usize, m: usize, cap: usize) -> Result<usize> {
    let size = dim_graded(n, m);
    usize::try_from(&size)
        .ok()
        .filter(|&s| s <= cap)
        .ok_or(Error::MonomialCapExceeded {
            n,
            degree: m,
            size,
            cap,
        })
}

/// A monomial, stored as its exponent vector with the total degree cached.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExponentVector {
    exponents: Vec<u32>,
    degree: u32,
}

impl ExponentVector {
    /// Wraps an exponent vector. Must be non-empty (at least one variable).
    pub fn new(exponents: Vec<u32>) -> Self {
        assert!(
            !exponents.is_empty(),
            "an exponent vector needs at least one variable"
        );
        let degree = exponents.iter().sum();
        ExponentVector { exponents, degree }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn num_vars(&self) -> usize {
        self.exponents.len()
    }

    /// The product monomial: exponent-wise sum.
    ///
    /// # Panics
    ///
    /// Panics if the two vectors have different numbers of variables.
    pub fn product(&self, other: &ExponentVector) -> ExponentVector {
        assert_eq!(
            self.num_vars(),
            other.num_vars(),
            "cannot multiply monomials in different rings"
        );
        let exponents = self
            .exponents
            .iter()
            .zip(&other.exponents)
            .map(|(a, b)| a + b)
            .collect();
        ExponentVector {
            exponents,
            degree: self.degree + other.degree,
        }
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{:?}", self.exponents)
    }
}

/// All monomials of degree `m` in `n` variables, in graded-lex order, capped
/// at [`DEFAULT_MONOMIAL_CAP`] elements.
pub fn monomials(n: usize, m: usize) -> Result<Vec<ExponentVector>> {
    monomials_with_cap(n, m, DEFAULT_MONOMIAL_CAP)
}

/// [`monomials`] with an explicit cap on the basis size.
pub fn monomials_with_cap(n: usize, m: usize, cap: usize) -> Result<Vec<ExponentVector>> {
    assert!(n >= 1, "monomials requires at least one variable");
    assert!(u32::try_from(m).is_ok(), "degree {m} does not fit in u32");
    let size = dim_graded_capped(n, m, cap)?;
    let mut out = Vec::with_capacity(size);
    let mut current = vec![0u32; n];
    push_monomials(&mut out, &mut current, 0, m as u32);
    debug_assert_eq!(out.len(), size);
    Ok(out)
}

/// Recursive descent: assign the leftmost free variable the largest exponent
/// first, so the output comes out in descending lexicographic order.
fn push_monomials(
    out: &mut Vec<ExponentVector>,
    current: &mut Vec<u32>,
    pos: usize,
    remaining: u32,
) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(ExponentVector::new(current.clone()));
        return;
    }
    for e in (0..=remaining).rev() {
        current[pos] = e;
        push_monomials(out, current, pos + 1, remaining - e);
    }
}

/// Position of a monomial within [`monomials`]`(n, m)` for its own `n` and
/// `m`, computed in closed form.
///
/// Monomials preceding `v` are exactly those whose exponent at the first
/// differing variable is larger; summing the counts telescopes (hockey-stick)
/// into one `dim_graded` term per variable.
///
/// # Panics
///
/// Panics if the index exceeds `usize` (a basis that large cannot be
/// enumerated anyway).
pub fn monomial_index(v: &ExponentVector) -> usize {
    let n = v.num_vars();
    let mut index = BigUint::zero();
    let mut remaining = v.degree();
    for (i, &e) in v.exponents()[..n - 1].iter().enumerate() {
        // Monomials that agree on the first i exponents but put more than e
        // on variable i: their tail sums to < remaining - e over n - i - 1
        // variables, and there are dim_graded(n - i, remaining - e - 1) of
        // them by the hockey-stick identity.
        if remaining > e {
            index += dim_graded(n - i, (remaining - e - 1) as usize);
        }
        remaining -= e;
    }
    usize::try_from(&index).expect("monomial index exceeds usize")
}

/// A materialized degree-`m` basis with O(1) lookup from exponents to
/// position. This is what matrix assembly uses to map a product monomial to
/// its row.
pub struct MonomialBasis {
    n: usize,
    degree: usize,
    elements: Vec<ExponentVector>,
    positions: HashMap<Vec<u32>, usize>,
}

impl MonomialBasis {
    pub fn new(n: usize, degree: usize) -> Result<Self> {
        let elements = monomials(n, degree)?;
        let positions = elements
            .iter()
            .enumerate()
            .map(|(i, v)| (v.exponents().to_vec(), i))
            .collect();
        Ok(MonomialBasis {
            n,
            degree,
            elements,
            positions,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, i: usize) -> &ExponentVector {
        &self.elements[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &ExponentVector> {
        self.elements.iter()
    }

    /// Position of the monomial with the given exponents, if it belongs to
    /// this basis.
    pub fn position(&self, exponents: &[u32]) -> Option<usize> {
        self.positions.get(exponents).copied()
    }
}

//! Truncated integer power series and the conjectured Hilbert series.
//!
//! A series here is a vector of exact [`BigInt`] coefficients for degrees
//! `0..=D`; everything beyond the truncation degree is simply not
//! represented. The interesting constructions are
//! [`froberg_quotient_series`] — `(1 - t^d)^z / (1 - t)^n` truncated at its
//! first negative coefficient, Fröberg's prediction for the quotient by `z`
//! generic degree-`d` forms — and its complement [`froberg_ideal_series`].
//! [`expected_ideal_series`] gives the same prediction in maximal-rank form,
//! `min(z * dim S_{m-d}, dim S_m)`, which agrees with the ideal series
//! exactly when the prediction is consistent degree by degree.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::dim_graded;

/// An integer power series truncated at a fixed degree: coefficients for
/// `t^0` through `t^D` inclusive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerSeries {
    coeffs: Vec<BigInt>,
}

impl IntegerSeries {
    /// Builds a series from coefficients for degrees `0, 1, ..., len - 1`.
    ///
    /// # Panics
    ///
    /// Panics on an empty vector; a series carries at least the constant term.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series needs at least one coefficient"
        );
        IntegerSeries { coeffs }
    }

    /// The zero series truncated at `truncation_degree`.
    pub fn zero(truncation_degree: usize) -> Self {
        IntegerSeries {
            coeffs: vec![BigInt::zero(); truncation_degree + 1],
        }
    }

    /// The constant series 1 truncated at `truncation_degree`.
    pub fn one(truncation_degree: usize) -> Self {
        let mut s = IntegerSeries::zero(truncation_degree);
        s.coeffs[0] = BigInt::one();
        s
    }

    /// Highest represented degree `D`.
    pub fn truncation_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `t^m`. Panics if `m` is beyond the truncation degree.
    pub fn coeff(&self, m: usize) -> &BigInt {
        &self.coeffs[m]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Truncated product: coefficients of the product series up to the common
    /// truncation degree.
    fn mul(&self, other: &IntegerSeries) -> IntegerSeries {
        let trunc = self.truncation_degree().min(other.truncation_degree());
        let mut out = vec![BigInt::zero(); trunc + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(trunc + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(trunc + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                out[i + j] += a * b;
            }
        }
        IntegerSeries::from_coeffs(out)
    }

    /// `self^exponent` by binary exponentiation, at self's truncation degree.
    fn pow(&self, mut exponent: u64) -> IntegerSeries {
        let mut result = IntegerSeries::one(self.truncation_degree());
        let mut square = self.clone();
        while exponent > 0 {
            if exponent & 1 == 1 {
                result = result.mul(&square);
            }
            exponent >>= 1;
            if exponent > 0 {
                square = square.mul(&square);
            }
        }
        result
    }
}

/// Hilbert series of the full polynomial ring `K[x_1, ..., x_n]`, i.e.
/// `1 / (1 - t)^n`: coefficient `dim S_m` at each degree `m <= D`.
pub fn full_ring_series(n: usize, truncation_degree: usize) -> IntegerSeries {
    let coeffs = (0..=truncation_degree)
        .map(|m| BigInt::from(dim_graded(n, m)))
        .collect();
    IntegerSeries::from_coeffs(coeffs)
}

/// Zeroes every coefficient from the first strictly negative one onward.
///
/// `[1, 3, 2, -2, -3, -1]` becomes `[1, 3, 2, 0, 0, 0]`; a leading negative
/// zeroes the whole series. Series with no negative coefficient are returned
/// unchanged, which makes the operation idempotent.
pub fn truncate_at_first_negative(series: &IntegerSeries) -> IntegerSeries {
    let mut coeffs = series.coeffs.clone();
    if let Some(first) = coeffs.iter().position(|c| c < &BigInt::zero()) {
        for c in &mut coeffs[first..] {
            c.set_zero();
        }
    }
    IntegerSeries::from_coeffs(coeffs)
}

/// The conjectured Hilbert series of `S / (f_1, ..., f_z)` for `z` generic
/// forms of degree `d`: `(1 - t^d)^z / (1 - t)^n`, truncated at its first
/// negative coefficient.
///
/// `z = 0` gives the full ring series; `d` must be at least 1.
pub fn froberg_quotient_series(
    n: usize,
    d: usize,
    z: u64,
    truncation_degree: usize,
) -> IntegerSeries {
    assert!(d >= 1, "forms must have positive degree");
    let mut base = IntegerSeries::one(truncation_degree);
    if d <= truncation_degree {
        base.coeffs[d] = BigInt::from(-1);
    }
    let formal = base.pow(z).mul(&full_ring_series(n, truncation_degree));
    truncate_at_first_negative(&formal)
}

/// The conjectured Hilbert series of the ideal `(f_1, ..., f_z)` itself:
/// full ring series minus [`froberg_quotient_series`], coefficient-wise.
///
/// Every coefficient is between 0 and `dim S_m`: before its truncation point
/// the quotient series never exceeds the full ring series (multiplying back
/// by `1 / (1 - t^d)^z`, which has non-negative coefficients, recovers
/// `dim S_m` as the quotient coefficient plus non-negative terms).
pub fn froberg_ideal_series(n: usize, d: usize, z: u64, truncation_degree: usize) -> IntegerSeries {
    let full = full_ring_series(n, truncation_degree);
    let quotient = froberg_quotient_series(n, d, z, truncation_degree);
    let coeffs = full
        .coeffs
        .iter()
        .zip(&quotient.coeffs)
        .map(|(f, q)| f - q)
        .collect();
    IntegerSeries::from_coeffs(coeffs)
}

/// The maximal-rank prediction for the ideal: coefficient 0 below degree `d`
/// and `min(z * dim S_{m - d}, dim S_m)` at each degree `m >= d`.
///
/// This is what the ideal's Hilbert function must be if every multiplication
/// map from degree `m - d` to degree `m` has maximal rank. It coincides with
/// [`froberg_ideal_series`] wherever the conjectured series is certified.
pub fn expected_ideal_series(
    n: usize,
    d: usize,
    z: u64,
    truncation_degree: usize,
) -> IntegerSeries {
    assert!(d >= 1, "forms must have positive degree");
    let mut coeffs = vec![BigInt::zero(); truncation_degree + 1];
    for (m, c) in coeffs.iter_mut().enumerate().skip(d) {
        let products = BigInt::from(z) * BigInt::from(dim_graded(n, m - d));
        let whole = BigInt::from(dim_graded(n, m));
        *c = products.min(whole);
    }
    IntegerSeries::from_coeffs(coeffs)
}

/// JSON form of a series together with the parameters that produced it.
/// Coefficients are emitted as bare JSON numbers of arbitrary size.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesJson {
    pub n: usize,
    pub d: usize,
    pub z: u64,
    #[serde(rename = "D")]
    pub truncation_degree: usize,
    pub coeffs: Vec<serde_json::Number>,
}

impl SeriesJson {
    pub fn new(n: usize, d: usize, z: u64, series: &IntegerSeries) -> Self {
        let coeffs = series
            .coeffs()
            .iter()
            .map(|c| {
                c.to_string()
                    .parse()
                    .expect("integer literal is a valid JSON number")
            })
            .collect();
        SeriesJson {
            n,
            d,
            z,
            truncation_degree: series.truncation_degree(),
            coeffs,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn series(coeffs: &[i64]) -> IntegerSeries {
        IntegerSeries::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Reference expansion of `(1 - t^d)^z / (1 - t)^n` by repeated naive
    /// multiplication — no binary exponentiation, no shortcuts — followed by
    /// a scan-and-zero truncation. Deliberately independent of the
    /// implementation under test.
    fn quotient_by_naive_expansion(n: usize, d: usize, z: u64, trunc: usize) -> Vec<BigInt> {
        let mut acc = vec![BigInt::zero(); trunc + 1];
        acc[0] = BigInt::one();
        for _ in 0..z {
            let mut next = vec![BigInt::zero(); trunc + 1];
            for (i, a) in acc.iter().enumerate() {
                next[i] += a;
                if i + d <= trunc {
                    next[i + d] -= a;
                }
            }
            acc = next;
        }
        let full: Vec<BigInt> = (0..=trunc)
            .map(|m| BigInt::from(dim_graded(n, m)))
            .collect();
        let mut out = vec![BigInt::zero(); trunc + 1];
        for i in 0..=trunc {
            for j in 0..=trunc - i {
                out[i + j] += &acc[i] * &full[j];
            }
        }
        let mut seen_negative = false;
        for c in &mut out {
            if *c < BigInt::zero() {
                seen_negative = true;
            }
            if seen_negative {
                c.set_zero();
            }
        }
        out
    }

    #[test]
    fn full_ring_series_matches_graded_dimensions() {
        for n in 1..=6 {
            let s = full_ring_series(n, 15);
            for m in 0..=15 {
                assert_eq!(s.coeff(m), &BigInt::from(dim_graded(n, m)));
            }
        }
    }

    #[test]
    fn truncate_zeroes_tail_from_first_negative() {
        let s = truncate_at_first_negative(&series(&[1, 3, 2, -2, -3, -1]));
        assert_eq!(s, series(&[1, 3, 2, 0, 0, 0]));

        let s = truncate_at_first_negative(&series(&[-1, 5]));
        assert_eq!(s, series(&[0, 0]));

        let untouched = series(&[1, 0, 7]);
        assert_eq!(truncate_at_first_negative(&untouched), untouched);
    }

    #[test]
    fn quotient_four_conics_in_three_variables() {
        // (1 - t^2)^4 / (1 - t)^3 = (1 - t)(1 + t)^4 formally, so the
        // coefficients run 1, 3, 2, -2, -3, -1 and truncation kicks in at
        // degree 3.
        let s = froberg_quotient_series(3, 2, 4, 5);
        assert_eq!(s, series(&[1, 3, 2, 0, 0, 0]));
    }

    #[test]
    fn ideal_four_conics_in_three_variables() {
        let s = froberg_ideal_series(3, 2, 4, 5);
        assert_eq!(s, series(&[0, 0, 4, 10, 15, 21]));
    }

    #[test]
    fn quotient_matches_naive_expansion() {
        for n in 1..=4 {
            for d in 1..=4 {
                for z in 0..=6 {
                    let got = froberg_quotient_series(n, d, z, 12);
                    let want = quotient_by_naive_expansion(n, d, z, 12);
                    assert_eq!(got.coeffs(), &want[..], "mismatch at n={n}, d={d}, z={z}");
                }
            }
        }
    }

    #[test]
    fn zero_forms_leave_the_full_ring() {
        let q = froberg_quotient_series(4, 3, 0, 10);
        assert_eq!(q, full_ring_series(4, 10));
        let i = froberg_ideal_series(4, 3, 0, 10);
        assert_eq!(i, IntegerSeries::zero(10));
    }

    #[test]
    fn degrees_below_d_are_untouched() {
        let q = froberg_quotient_series(5, 4, 1000, 8);
        for m in 0..4 {
            assert_eq!(q.coeff(m), &BigInt::from(dim_graded(5, m)));
        }
    }

    #[test]
    fn many_forms_of_large_degree() {
        // 200 forms of degree 10 in 5 variables: at degree 11 the ideal has
        // dimension 200 * dim S_1 = 1000 and the quotient 1365 - 1000 = 365.
        let ideal = froberg_ideal_series(5, 10, 200, 11);
        assert_eq!(ideal.coeff(10), &BigInt::from(200));
        assert_eq!(ideal.coeff(11), &BigInt::from(1000));
        let quotient = froberg_quotient_series(5, 10, 200, 11);
        assert_eq!(quotient.coeff(11), &BigInt::from(365));
    }

    #[test]
    fn expected_ideal_series_takes_the_min() {
        let s = expected_ideal_series(5, 10, 200, 11);
        assert_eq!(s.coeff(9), &BigInt::zero());
        assert_eq!(s.coeff(10), &BigInt::from(200)); // 200 * 1 < 1001
        assert_eq!(s.coeff(11), &BigInt::from(1000)); // 200 * 5 < 1365

        let saturated = expected_ideal_series(3, 2, 100, 4);
        assert_eq!(saturated.coeff(2), &BigInt::from(6)); // min hits dim S_2
        assert_eq!(saturated.coeff(3), &BigInt::from(10));
    }

    #[test]
    fn ideal_plus_quotient_is_the_full_ring() {
        for n in 1..=4 {
            for d in 1..=5 {
                for z in 0..=10 {
                    let full = full_ring_series(n, 2 * d + 4);
                    let q = froberg_quotient_series(n, d, z, 2 * d + 4);
                    let i = froberg_ideal_series(n, d, z, 2 * d + 4);
                    for m in 0..=2 * d + 4 {
                        assert_eq!(q.coeff(m) + i.coeff(m), *full.coeff(m));
                        assert!(q.coeff(m) >= &BigInt::zero());
                        assert!(i.coeff(m) >= &BigInt::zero());
                    }
                }
            }
        }
    }

    #[test]
    fn series_json_field_names() {
        let s = froberg_quotient_series(3, 2, 4, 5);
        let json = serde_json::to_string(&SeriesJson::new(3, 2, 4, &s)).unwrap();
        assert_eq!(json, r#"{"n":3,"d":2,"z":4,"D":5,"coeffs":[1,3,2,0,0,0]}"#);
    }

    proptest! {
        #[test]
        fn truncation_is_idempotent(coeffs in proptest::collection::vec(-50i64..50, 1..20)) {
            let once = truncate_at_first_negative(&series(&coeffs));
            let twice = truncate_at_first_negative(&once);
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn truncated_series_has_no_negative_coefficients(
            coeffs in proptest::collection::vec(-50i64..50, 1..20)
        ) {
            let t = truncate_at_first_negative(&series(&coeffs));
            prop_assert!(t.coeffs().iter().all(|c| c >= &BigInt::zero()));
        }
    }
}

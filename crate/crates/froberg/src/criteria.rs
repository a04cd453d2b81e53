//! Certification of the conjectured series: for which numbers of forms is it
//! a theorem, and how much of the interesting range do those certificates
//! cover?
//!
//! The underlying fact is a rank criterion for the multiplication map
//! `(g_1, ..., g_z) -> sum f_i g_i` from `(S_k)^z` into `S_{d+k}`, with all
//! `f_i` generic of degree `d`. Writing `ratio(k) = dim S_{d+k} / dim S_k`,
//! the map is injective whenever `z <= ratio(k) - dim S_k` and surjective
//! whenever `z >= ratio(k) + dim S_k` — i.e. only a band of width
//! `2 * dim S_k` around `ratio(k)` is in doubt ([`rank_regime`]).
//!
//! Chaining the two sides gives, for each `r >= 0`, an interval of `z`
//! ([`certified_interval`]) on which the full conjectured series is certified:
//! surjective at degree `d + r + 1` (hence onward) and injective at `d + r`
//! (hence the expected dimension below). [`covered_z_set`] takes the union
//! over `r`, and [`coverage_tail_bound`] bounds the fraction of
//! `1..=dim S_d` left uncertified, a quantity that tends to `1 / dim S_{k+1}`
//! as `d` grows with `k` fixed.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::dim_graded;
use crate::exec;

/// Where a given `(n, d, k, z)` stands with respect to the rank criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `z` is small enough that multiplication from degree `k` is provably
    /// injective: the ideal has dimension `z * dim S_k` in degree `d + k`.
    KnownInjective,
    /// `z` is large enough that multiplication onto degree `d + k` is
    /// provably surjective: the ideal is all of `S_{d+k}`.
    KnownSurjective,
    /// Inside the uncertainty band of width `2 * dim S_k` around
    /// `dim S_{d+k} / dim S_k`; the criterion is silent.
    Unknown,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::KnownInjective => "known-injective",
            Regime::KnownSurjective => "known-surjective",
            Regime::Unknown => "unknown",
        })
    }
}

/// Outcome of [`rank_regime`]: the regime, plus the proven dimension of the
/// degree-`(d + k)` piece of the ideal when there is one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegimeStatus {
    pub regime: Regime,
    pub predicted: Option<BigUint>,
}

/// Classifies `z` generic degree-`d` forms in `n` variables at multiplication
/// degree `k`, against the injectivity / surjectivity thresholds
/// `ratio(k) -/+ dim S_k`.
///
/// `z = 0` is trivially injective with predicted dimension 0.
pub fn rank_regime(n: usize, d: usize, k: usize, z: u64) -> RegimeStatus {
    if z == 0 {
        return RegimeStatus {
            regime: Regime::KnownInjective,
            predicted: Some(BigUint::zero()),
        };
    }
    let dim_k = dim_graded(n, k);
    let dim_dk = dim_graded(n, d + k);
    let ratio = BigRational::new(BigInt::from(dim_dk.clone()), BigInt::from(dim_k.clone()));
    let width = BigRational::from_integer(BigInt::from(dim_k.clone()));
    let z_exact = BigRational::from_integer(BigInt::from(z));
    if z_exact <= &ratio - &width {
        RegimeStatus {
            regime: Regime::KnownInjective,
            predicted: Some(BigUint::from(z) * dim_k),
        }
    } else if z_exact >= ratio + width {
        RegimeStatus {
            regime: Regime::KnownSurjective,
            predicted: Some(dim_dk),
        }
    } else {
        RegimeStatus {
            regime: Regime::Unknown,
            predicted: None,
        }
    }
}

/// A closed interval of certified `z` values, tagged with the `r` it came
/// from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZInterval {
    pub r: usize,
    pub z_lo: BigUint,
    pub z_hi: BigUint,
}

/// The certified interval for a given `r`, if non-empty:
///
/// ```text
/// ceil(dim S_{d+r+1} / dim S_{r+1} + dim S_{r+1})  <=  z  <=
///     floor(dim S_{d+r} / dim S_r - dim S_r)
/// ```
///
/// For every `z` inside, the conjectured series is a theorem. For `r = 0` the
/// upper endpoint is `dim S_d` itself: injectivity in degree `d` is only
/// needed up to there, since `dim S_d` generic forms already span `S_d`.
pub fn certified_interval(n: usize, d: usize, r: usize) -> Option<ZInterval> {
    let dim_r1 = BigInt::from(dim_graded(n, r + 1));
    let lower = BigRational::new(BigInt::from(dim_graded(n, d + r + 1)), dim_r1.clone())
        + BigRational::from_integer(dim_r1);
    let z_lo = lower
        .ceil()
        .to_integer()
        .to_biguint()
        .expect("lower endpoint is positive");

    let z_hi = if r == 0 {
        dim_graded(n, d)
    } else {
        let dim_r = BigInt::from(dim_graded(n, r));
        let upper = BigRational::new(BigInt::from(dim_graded(n, d + r)), dim_r.clone())
            - BigRational::from_integer(dim_r);
        if upper.is_negative() {
            return None;
        }
        upper
            .floor()
            .to_integer()
            .to_biguint()
            .expect("upper endpoint is non-negative")
    };

    (z_lo <= z_hi).then_some(ZInterval { r, z_lo, z_hi })
}

/// Which `z` in `1..=dim S_d` carry a certified series, and the fraction that
/// do.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageReport {
    pub n: usize,
    pub d: usize,
    /// `dim S_d`, the top of the interesting range: more forms than that and
    /// the ideal trivially contains everything from degree `d` on.
    pub dim_sd: BigUint,
    /// The non-empty certified intervals, one per contributing `r`, clipped
    /// to `1..=dim S_d`, in increasing order of `r` (so decreasing in `z`).
    pub intervals: Vec<ZInterval>,
    /// Maximal uncovered ranges `[lo, hi]`, in increasing order of `z`.
    pub gaps: Vec<(BigUint, BigUint)>,
    /// Number of covered `z` values.
    pub covered: BigUint,
    /// `covered / dim S_d`, exactly.
    pub pd: BigRational,
    /// Disjoint covered ranges in increasing order (intervals merged with the
    /// always-certified point `z = dim S_d`).
    merged: Vec<(BigUint, BigUint)>,
}

impl CoverageReport {
    /// Whether this particular number of forms is certified.
    pub fn contains(&self, z: &BigUint) -> bool {
        self.merged.iter().any(|(lo, hi)| lo <= z && z <= hi)
    }

    /// The disjoint covered ranges, ascending.
    pub fn covered_ranges(&self) -> &[(BigUint, BigUint)] {
        &self.merged
    }
}

/// Computes the certified subset of `1..=dim S_d` for `n` variables and
/// degree `d`: the union of [`certified_interval`] over `r = 0..=d+n`
/// (empty beyond that — the lower endpoints outgrow the upper ones), plus
/// the single always-certified point `z = dim S_d`.
pub fn covered_z_set(n: usize, d: usize) -> CoverageReport {
    let dim_sd = dim_graded(n, d);
    let one = BigUint::one();

    let mut intervals = Vec::new();
    for r in 0..=d + n {
        if let Some(mut interval) = certified_interval(n, d, r) {
            if interval.z_hi > dim_sd {
                interval.z_hi = dim_sd.clone();
            }
            if interval.z_lo <= interval.z_hi {
                intervals.push(interval);
            }
        }
    }

    let mut segments: Vec<(BigUint, BigUint)> = intervals
        .iter()
        .map(|iv| (iv.z_lo.clone(), iv.z_hi.clone()))
        .collect();
    // dim S_d generic forms span S_d, so the series is certified there even
    // when the r = 0 interval is empty.
    segments.push((dim_sd.clone(), dim_sd.clone()));
    segments.sort();

    let mut merged: Vec<(BigUint, BigUint)> = Vec::new();
    for (lo, hi) in segments {
        if let Some(last) = merged.last_mut() {
            if lo <= &last.1 + &one {
                if hi > last.1 {
                    last.1 = hi;
                }
                continue;
            }
        }
        merged.push((lo, hi));
    }

    let covered = merged
        .iter()
        .fold(BigUint::zero(), |acc, (lo, hi)| acc + (hi - lo) + &one);

    let mut gaps = Vec::new();
    let mut cursor = one.clone();
    for (lo, hi) in &merged {
        if *lo > cursor {
            gaps.push((cursor.clone(), lo - &one));
        }
        cursor = hi + &one;
    }
    if cursor <= dim_sd {
        gaps.push((cursor, dim_sd.clone()));
    }

    let pd = BigRational::new(BigInt::from(covered.clone()), BigInt::from(dim_sd.clone()));
    CoverageReport {
        n,
        d,
        dim_sd,
        intervals,
        gaps,
        covered,
        pd,
        merged,
    }
}

/// The certified fraction `p_d = covered / dim S_d`, exactly.
pub fn certified_probability(n: usize, d: usize) -> BigRational {
    covered_z_set(n, d).pd
}

/// Coverage reports for every degree `1..=d_max` (computed concurrently when
/// the `parallel` feature is enabled).
pub fn coverage_sweep(n: usize, d_max: usize) -> Vec<CoverageReport> {
    exec::map_jobs((1..=d_max).collect(), |d| covered_z_set(n, d))
}

/// Upper bound on the uncertified fraction `1 - p_d`:
///
/// ```text
/// (dim S_{d+k+1} / dim S_{k+1}) / dim S_d
///     + (sum_{r=0}^{k} (dim S_r + dim S_{r+1})) / dim S_d
/// ```
///
/// valid for every `k >= 0`. As `d` grows with `k` fixed, the first summand
/// tends to `1 / dim S_{k+1}` and the second to zero.
pub fn coverage_tail_bound(n: usize, d: usize, k: usize) -> BigRational {
    let dim_d = BigInt::from(dim_graded(n, d));
    let first = BigRational::new(
        BigInt::from(dim_graded(n, d + k + 1)),
        BigInt::from(dim_graded(n, k + 1)) * &dim_d,
    );
    let mut overhead = BigUint::zero();
    for r in 0..=k {
        overhead += dim_graded(n, r) + dim_graded(n, r + 1);
    }
    first + BigRational::new(BigInt::from(overhead), dim_d)
}

/// Renders a non-negative rational as a decimal truncated (not rounded) to
/// `places` digits: 860/1001 with three places is `"0.859"`.
pub fn decimal_truncated(value: &BigRational, places: usize) -> String {
    assert!(
        !value.is_negative(),
        "decimal rendering expects a non-negative value"
    );
    let num = value.numer();
    let den = value.denom();
    let mut out = (num / den).to_string();
    if places > 0 {
        out.push('.');
        let mut rem = num % den;
        for _ in 0..places {
            rem *= BigInt::from(10);
            out.push_str(&(&rem / den).to_string());
            rem %= den;
        }
    }
    out
}

/// JSON form of a [`ZInterval`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntervalJson {
    pub r: usize,
    #[serde(rename = "zLo")]
    pub z_lo: serde_json::Number,
    #[serde(rename = "zHi")]
    pub z_hi: serde_json::Number,
}

/// JSON form of the exact fraction `p_d` plus its truncated 3-digit decimal.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PdJson {
    pub num: serde_json::Number,
    pub den: serde_json::Number,
    pub decimal: String,
}

/// JSON form of a [`CoverageReport`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverageJson {
    pub n: usize,
    pub d: usize,
    #[serde(rename = "dimSd")]
    pub dim_sd: serde_json::Number,
    pub intervals: Vec<IntervalJson>,
    pub gaps: Vec<[serde_json::Number; 2]>,
    pub covered: serde_json::Number,
    pub pd: PdJson,
}

fn number<T: fmt::Display>(value: T) -> serde_json::Number {
    value
        .to_string()
        .parse()
        .expect("integer literal is a valid JSON number")
}

impl From<&CoverageReport> for CoverageJson {
    fn from(report: &CoverageReport) -> Self {
        CoverageJson {
            n: report.n,
            d: report.d,
            dim_sd: number(&report.dim_sd),
            intervals: report
                .intervals
                .iter()
                .map(|iv| IntervalJson {
                    r: iv.r,
                    z_lo: number(&iv.z_lo),
                    z_hi: number(&iv.z_hi),
                })
                .collect(),
            gaps: report
                .gaps
                .iter()
                .map(|(lo, hi)| [number(lo), number(hi)])
                .collect(),
            covered: number(&report.covered),
            pd: PdJson {
                num: number(report.pd.numer()),
                den: number(report.pd.denom()),
                decimal: decimal_truncated(&report.pd, 3),
            },
        }
    }
}

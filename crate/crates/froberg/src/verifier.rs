//! Randomized verification of the conjectured series on concrete instances.
//!
//! The scheme: sample `z` forms of degree `d` over GF(p) (dense with uniform
//! coefficients, or `d`-th powers of random linear forms), assemble the
//! matrix of the multiplication map `(S_k)^z -> S_{d+k}` in the monomial
//! bases, and compare its rank with the coefficient the conjectured ideal
//! series predicts. Ranks only drop under specialization, so a sampled
//! matrix that *achieves* the predicted value certifies that generic forms
//! reach it too; falling short is merely inconclusive (bad luck, or a small
//! prime). Working over GF(p) rather than characteristic zero is itself a
//! high-probability surrogate of the same kind — hence several trials, and
//! a `max` aggregation across them.
//!
//! Sampling is deterministic: every (trial, degree) job derives its own
//! ChaCha stream from the master seed, so reports are reproducible
//! byte-for-byte, whether trials run on the rayon pool or sequentially, and
//! form sets are nested in `z` (the first `z` forms of a trial never change
//! when `z` grows).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{dim_graded, monomials, MonomialBasis};
use crate::criteria::{rank_regime, Regime};
use crate::exec;
use crate::gfp::PrimeFieldMatrix;
use crate::series::froberg_ideal_series;
use crate::{Error, Result};

/// Caveat attached to every verification report.
pub const GFP_EVIDENCE_NOTE: &str =
    "ranks are computed over GF(p) for one prime and finitely many samples; \
     achieving the conjectured value certifies the generic rank from below, \
     while a deficit may be an artifact of the prime or the sample";

/// What kind of random forms to sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FormClass {
    /// Uniform coefficients on every degree-`d` monomial.
    #[serde(rename = "dense")]
    DenseGeneric,
    /// `d`-th powers of linear forms with uniform coefficients. A thin,
    /// structured subfamily: still generic enough for many statements, but
    /// genuinely defective in some classical cases, which makes it a good
    /// stress test for the reporting semantics.
    #[serde(rename = "power")]
    PowerOfLinear,
}

impl fmt::Display for FormClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormClass::DenseGeneric => "dense",
            FormClass::PowerOfLinear => "power",
        })
    }
}

impl FromStr for FormClass {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "dense" => Ok(FormClass::DenseGeneric),
            "power" => Ok(FormClass::PowerOfLinear),
            other => Err(format!(
                "unknown form class `{other}` (expected `dense` or `power`)"
            )),
        }
    }
}

/// A degree-`d` form in `n` variables over GF(p), as coefficients indexed by
/// [`monomials`]`(n, d)` in graded-lex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormVector {
    n: usize,
    d: usize,
    modulus: u64,
    coeffs: Vec<u64>,
}

impl FormVector {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// Exact multinomial coefficient `total! / (parts_1! * ... * parts_n!)` as a
/// telescoping product of binomials.
fn multinomial(parts: &[u32]) -> BigUint {
    let mut acc = BigUint::from(1u32);
    let mut sum = 0u64;
    for &part in parts {
        sum += u64::from(part);
        acc *= crate::combinatorics::binomial(sum, u64::from(part));
    }
    acc
}

/// Expands `(a_1 x_1 + ... + a_n x_n)^d` over GF(p): the coefficient of each
/// degree-`d` monomial is the multinomial coefficient times the matching
/// power product, reduced mod p.
///
/// The multinomial coefficients are computed exactly and reduced afterwards;
/// if one vanishes mod p (possible only for p <= d) the expansion silently
/// loses a term relative to characteristic zero, so that event is logged.
pub fn power_of_linear_form(linear: &[u64], d: usize, modulus: u64) -> Result<FormVector> {
    let n = linear.len();
    assert!(n >= 1, "a linear form needs at least one variable");
    assert!(d >= 1, "forms must have positive degree");
    let basis = monomials(n, d)?;
    let mut coeffs = Vec::with_capacity(basis.len());
    for mono in &basis {
        let exact = multinomial(mono.exponents());
        let reduced =
            u64::try_from(&(&exact % BigUint::from(modulus))).expect("residue fits in u64");
        if reduced == 0 && !exact.is_zero() {
            log::warn!(
                "multinomial coefficient {exact} vanishes mod {modulus}; \
                 power-of-linear expansion degenerates at this prime"
            );
        }
        let mut c = reduced;
        for (&a, &e) in linear.iter().zip(mono.exponents()) {
            c = mul_mod(c, pow_mod(a, u64::from(e), modulus), modulus);
        }
        coeffs.push(c);
    }
    Ok(FormVector {
        n,
        d,
        modulus,
        coeffs,
    })
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (u128::from(a) * u128::from(b) % u128::from(m)) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Samples one non-zero form of the given class, consuming randomness from
/// `rng`. Dense forms draw one uniform coefficient per monomial; power forms
/// draw `n` coefficients for the underlying linear form.
pub fn sample_form<R: Rng>(
    class: FormClass,
    n: usize,
    d: usize,
    modulus: u64,
    rng: &mut R,
) -> Result<FormVector> {
    match class {
        FormClass::DenseGeneric => {
            let basis_len = crate::combinatorics::dim_graded_capped(
                n,
                d,
                crate::combinatorics::DEFAULT_MONOMIAL_CAP,
            )?;
            loop {
                let coeffs: Vec<u64> = (0..basis_len).map(|_| rng.gen_range(0..modulus)).collect();
                if coeffs.iter().any(|&c| c != 0) {
                    return Ok(FormVector {
                        n,
                        d,
                        modulus,
                        coeffs,
                    });
                }
            }
        }
        FormClass::PowerOfLinear => loop {
            let linear: Vec<u64> = (0..n).map(|_| rng.gen_range(0..modulus)).collect();
            if linear.iter().any(|&c| c != 0) {
                return power_of_linear_form(&linear, d, modulus);
            }
        },
    }
}

/// The matrix of `(g_1, ..., g_z) -> sum f_i g_i` from `(S_k)^z` to
/// `S_{d+k}`, over GF(p).
///
/// Rows are indexed by the degree-`(d+k)` monomial basis; columns come in
/// `z` blocks of `dim S_k`, block `i` holding the products `f_i * m` for
/// each degree-`k` monomial `m` in graded-lex order. The rank of the first
/// `j` blocks is therefore the ideal's dimension in degree `d + k` for the
/// first `j` forms — column prefixes mean form prefixes.
pub fn multiplication_matrix(forms: &[FormVector], k: usize) -> Result<PrimeFieldMatrix> {
    assert!(!forms.is_empty(), "need at least one form");
    let (n, d, modulus) = (forms[0].n, forms[0].d, forms[0].modulus);
    for f in forms {
        assert_eq!(
            (f.n, f.d, f.modulus),
            (n, d, modulus),
            "forms must share ring, degree and modulus"
        );
    }
    let basis_k = monomials(n, k)?;
    let basis_d = monomials(n, d)?;
    let target = MonomialBasis::new(n, d + k)?;
    let mut matrix = PrimeFieldMatrix::zeros(target.len(), forms.len() * basis_k.len(), modulus)?;
    for (fi, form) in forms.iter().enumerate() {
        for (ci, mult) in basis_k.iter().enumerate() {
            let col = fi * basis_k.len() + ci;
            for (mi, &coeff) in form.coeffs.iter().enumerate() {
                if coeff == 0 {
                    continue;
                }
                let product = basis_d[mi].product(mult);
                let row = target
                    .position(product.exponents())
                    .expect("monomial product lands in the degree d+k basis");
                matrix.set(row, col, coeff);
            }
        }
    }
    Ok(matrix)
}

/// Parameters shared by a batch of randomized checks: the ring, the form
/// class, the prime, and the seeding discipline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialSetup {
    pub n: usize,
    pub d: usize,
    pub class: FormClass,
    pub modulus: u64,
    pub seed: u64,
    pub trials: usize,
}

const SALT_FORMS: u64 = 0;
const SALT_NESTED: u64 = 1;

/// Empirical Hilbert function of the ideal in one degree: the rank per trial
/// and the max across trials (the best certified lower bound).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalHf {
    pub z: usize,
    pub k: usize,
    pub per_trial: Vec<usize>,
    pub max: usize,
}

/// Intersection dimensions `a_z = dim(<f_1..f_z> ∩ <f_{z+1}>)` in degree
/// `d + k`, for `z = 1..=z_max` along one nested sequence of sampled forms
/// per trial.
///
/// For generic forms the profile has a characteristic shape: identically
/// zero while the ideal is small (fresh generators meet it trivially), then
/// strictly increasing, then constant at `dim S_k` once a fresh generator's
/// multiples land entirely inside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionProfile {
    pub k: usize,
    pub z_max: usize,
    /// `dim S_k`, the ceiling of every `a_z`.
    pub dim_sk: usize,
    /// `dims[i]` is the max over trials of `a_{i+1}`.
    pub dims: Vec<usize>,
    /// The raw per-trial profiles behind `dims`.
    pub per_trial: Vec<Vec<usize>>,
    /// Smallest `z` with `a_z > 0`, if any.
    pub first_nonzero: Option<usize>,
    /// Smallest `z` with `a_z = dim S_k`, if any.
    pub saturation: Option<usize>,
}

impl IntersectionProfile {
    /// Whether the aggregated profile has the generic shape: a zero prefix,
    /// a strictly increasing climb, then constant at `dim S_k`.
    pub fn has_generic_shape(&self) -> bool {
        if self.dims.iter().any(|&a| a > self.dim_sk) {
            return false;
        }
        for pair in self.dims.windows(2) {
            let (x, y) = (pair[0], pair[1]);
            if y < x {
                return false;
            }
            if x > 0 && x < self.dim_sk && y == x {
                return false;
            }
        }
        true
    }
}

/// One degree of a [`VerificationReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DegreeRecord {
    /// Total degree `d + k`.
    pub degree: usize,
    pub k: usize,
    /// Coefficient of the conjectured ideal series at this degree.
    pub conjectured: usize,
    pub per_trial: Vec<usize>,
    pub empirical_max: usize,
    /// Status of the generic dense instance at this degree: the band
    /// criterion's verdict, with surjectivity chained upward (once the ideal
    /// provably fills a degree it fills all later ones).
    pub regime: Regime,
    /// The proven dimension in a known regime.
    pub predicted: Option<usize>,
    /// Whether the conjectured value is a theorem for this instance class —
    /// a known regime or a known family for dense forms; only the regular
    /// sequence range `z <= n` for powers, which can genuinely diverge
    /// beyond it.
    pub proven: bool,
    /// `empirical_max == conjectured`.
    pub matched: bool,
}

/// Outcome of [`TrialSetup::verify`]: one record per degree `d..=D`, plus
/// the sampling parameters needed to reproduce it exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationReport {
    pub n: usize,
    pub d: usize,
    pub z: usize,
    pub class: FormClass,
    pub modulus: u64,
    pub seed: u64,
    pub trials: usize,
    #[serde(rename = "D")]
    pub truncation_degree: usize,
    pub degrees: Vec<DegreeRecord>,
    pub note: String,
}

impl VerificationReport {
    /// A mismatch at a degree where the value is a theorem: this means a bug
    /// (or a catastrophically unlucky prime), never an open case.
    pub fn has_proven_mismatch(&self) -> bool {
        self.degrees.iter().any(|r| r.proven && !r.matched)
    }

    pub fn all_matched(&self) -> bool {
        self.degrees.iter().all(|r| r.matched)
    }
}

impl TrialSetup {
    /// The RNG for one (trial, degree, purpose) job: same master seed,
    /// distinct ChaCha stream. Jobs never share a stream, so scheduling
    /// cannot change what anything samples.
    fn trial_rng(&self, trial: usize, degree: usize, salt: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(((trial as u64) << 32) | ((degree as u64) << 8) | salt);
        rng
    }

    /// Rank of the multiplication matrix for `z` freshly sampled forms in
    /// one trial. Forms are drawn sequentially from the trial's stream, so
    /// growing `z` extends the sample instead of reshuffling it.
    fn trial_rank(&self, trial: usize, z: usize, k: usize) -> Result<usize> {
        if z == 0 {
            return Ok(0);
        }
        let mut rng = self.trial_rng(trial, self.d + k, SALT_FORMS);
        let forms: Result<Vec<FormVector>> = (0..z)
            .map(|_| sample_form(self.class, self.n, self.d, self.modulus, &mut rng))
            .collect();
        Ok(multiplication_matrix(&forms?, k)?.rank())
    }

    /// Empirical Hilbert function of the ideal in degree `d + k`, for `z`
    /// forms: ranks per trial, aggregated by max.
    pub fn empirical_hf(&self, z: usize, k: usize) -> Result<EmpiricalHf> {
        let per_trial: Result<Vec<usize>> =
            exec::map_jobs((0..self.trials).collect(), |t| self.trial_rank(t, z, k))
                .into_iter()
                .collect();
        let per_trial = per_trial?;
        let max = per_trial.iter().copied().max().unwrap_or(0);
        Ok(EmpiricalHf {
            z,
            k,
            per_trial,
            max,
        })
    }

    /// Intersection profile `a_1..a_{z_max}` in degree `d + k`.
    ///
    /// Each trial samples one nested sequence of `z_max + 1` forms and runs a
    /// single elimination: with columns grouped by form, the rank of every
    /// form prefix falls out of the pivot columns, and
    /// `a_z = rank(z) + dim S_k - rank(z + 1)` (the new generator contributes
    /// `dim S_k` fresh columns, minus what it adds to the span — that loss is
    /// exactly the intersection with the ideal of the first `z`).
    pub fn intersection_profile(&self, k: usize, z_max: usize) -> Result<IntersectionProfile> {
        assert!(z_max >= 1, "need at least one intersection value");
        let dim_sk = crate::combinatorics::dim_graded_capped(
            self.n,
            k,
            crate::combinatorics::DEFAULT_MONOMIAL_CAP,
        )?;
        let per_trial: Result<Vec<Vec<usize>>> =
            exec::map_jobs((0..self.trials).collect(), |t| -> Result<Vec<usize>> {
                let mut rng = self.trial_rng(t, self.d + k, SALT_NESTED);
                let forms: Result<Vec<FormVector>> = (0..z_max + 1)
                    .map(|_| sample_form(self.class, self.n, self.d, self.modulus, &mut rng))
                    .collect();
                let pivots = multiplication_matrix(&forms?, k)?.pivot_columns();
                let rank_of_prefix = |z: usize| pivots.iter().filter(|&&c| c < z * dim_sk).count();
                Ok((1..=z_max)
                    .map(|z| rank_of_prefix(z) + dim_sk - rank_of_prefix(z + 1))
                    .collect())
            })
            .into_iter()
            .collect();
        let per_trial = per_trial?;
        let dims: Vec<usize> = (0..z_max)
            .map(|i| per_trial.iter().map(|t| t[i]).max().unwrap_or(0))
            .collect();
        let first_nonzero = dims.iter().position(|&a| a > 0).map(|i| i + 1);
        let saturation = dims.iter().position(|&a| a == dim_sk).map(|i| i + 1);
        Ok(IntersectionProfile {
            k,
            z_max,
            dim_sk,
            dims,
            per_trial,
            first_nonzero,
            saturation,
        })
    }

    /// The single value `a_z` in degree `d + k` (max across trials).
    pub fn intersection_dimension(&self, k: usize, z: usize) -> Result<usize> {
        assert!(z >= 1, "the intersection needs at least one prior form");
        Ok(self.intersection_profile(k, z)?.dims[z - 1])
    }

    /// Checks the conjectured ideal series against sampled ranks at every
    /// degree `d..=truncation_degree`.
    pub fn verify(&self, z: usize, truncation_degree: usize) -> Result<VerificationReport> {
        assert!(
            truncation_degree >= self.d,
            "truncation degree must reach the generators"
        );
        let conjectured = froberg_ideal_series(self.n, self.d, z as u64, truncation_degree);
        let k_range: Vec<usize> = (0..=truncation_degree - self.d).collect();

        // One job per (degree, trial): flat enough to keep the pool busy even
        // when a single matrix is small.
        let jobs: Vec<(usize, usize)> = k_range
            .iter()
            .flat_map(|&k| (0..self.trials).map(move |t| (k, t)))
            .collect();
        let ranks = exec::map_jobs(jobs.clone(), |(k, t)| self.trial_rank(t, z, k));
        let mut per_degree: Vec<Vec<usize>> = vec![Vec::with_capacity(self.trials); k_range.len()];
        for ((k, _), rank) in jobs.iter().zip(ranks) {
            per_degree[*k].push(rank?);
        }

        let mut degrees = Vec::with_capacity(k_range.len());
        let mut surjective_established = false;
        for k in k_range {
            let degree = self.d + k;
            let conj = conjectured
                .coeff(degree)
                .to_usize()
                .expect("conjectured dimension fits the matrix cap");
            let band = rank_regime(self.n, self.d, k, z as u64);
            let (regime, predicted) = if surjective_established {
                (
                    Regime::KnownSurjective,
                    Some(usize::try_from(&dim_graded(self.n, degree)).expect("under matrix cap")),
                )
            } else {
                (
                    band.regime,
                    band.predicted
                        .as_ref()
                        .map(|p| usize::try_from(p).expect("under matrix cap")),
                )
            };
            if regime == Regime::KnownSurjective {
                surjective_established = true;
            }
            let per_trial = std::mem::take(&mut per_degree[k]);
            let empirical_max = per_trial.iter().copied().max().unwrap_or(0);
            let proven = match self.class {
                FormClass::DenseGeneric => {
                    regime != Regime::Unknown || self.n <= 3 || z <= self.n + 1
                }
                FormClass::PowerOfLinear => z <= self.n,
            };
            degrees.push(DegreeRecord {
                degree,
                k,
                conjectured: conj,
                per_trial,
                empirical_max,
                regime,
                predicted,
                proven,
                matched: empirical_max == conj,
            });
        }

        Ok(VerificationReport {
            n: self.n,
            d: self.d,
            z,
            class: self.class,
            modulus: self.modulus,
            seed: self.seed,
            trials: self.trials,
            truncation_degree,
            degrees,
            note: GFP_EVIDENCE_NOTE.to_string(),
        })
    }
}

/// Validates a user-supplied modulus the same way matrix construction will.
pub fn validate_modulus(modulus: u64) -> Result<()> {
    if modulus > crate::gfp::MAX_MODULUS {
        return Err(Error::ModulusTooLarge(modulus));
    }
    if !crate::gfp::is_prime(modulus) {
        return Err(Error::NotPrime(modulus));
    }
    Ok(())
}

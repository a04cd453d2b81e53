//! Dense matrices and rank computation over a prime field GF(p).
//!
//! Ranks of multiplication matrices are what ties the conjectured series to
//! actual random forms, so this is the crate's hot loop. The representation
//! is deliberately plain: row-major `Vec<u64>` with entries reduced modulo a
//! prime `p <= 2^31 - 1`. That bound keeps `a * b + c` inside `u64` for
//! reduced `a`, `b`, so elimination needs one multiplication, one addition
//! and one remainder per entry, with no `u128` in the inner loop.
//!
//! [`PrimeFieldMatrix::rank`] runs row elimination with the update of the
//! rows below each pivot fanned out on the rayon pool (under the `parallel`
//! feature, and only when the remaining block is big enough to pay for it);
//! [`PrimeFieldMatrix::rank_sequential`] is the same algorithm pinned to one
//! thread. Row updates are independent, so both orders perform identical
//! arithmetic and always agree — the benches compare their speed, not their
//! answers.

use std::io::{self, BufRead, Write};

use crate::{Error, Result};

/// Default modulus: the Mersenne prime `2^31 - 1`.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

/// Largest supported modulus (same value; the word-size argument above needs
/// `p^2 + p` to fit in `u64`).
pub const MAX_MODULUS: u64 = 2_147_483_647;

/// Cap on rows and columns of a dense matrix.
pub const DIM_CAP: usize = 4000;

/// Skip the rayon dispatch when the block below the pivot has fewer entries
/// than this; forking costs more than the update for small tails.
#[cfg(feature = "parallel")]
const PAR_MIN_WORK: usize = 32 * 1024;

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

/// Deterministic Miller-Rabin for `u64`: the witness set 2..=37 is proven
/// sufficient for every integer below 3.3 * 10^24.
pub fn is_prime(n: u64) -> bool {
    const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in SMALL_PRIMES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in SMALL_PRIMES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Multiplicative inverse of `a` modulo the prime `p`, by the extended
/// Euclidean algorithm. Fails with [`Error::DivisionByZero`] when
/// `a = 0 (mod p)`.
pub fn modinv(a: u64, p: u64) -> Result<u64> {
    let a = a % p;
    if a == 0 {
        return Err(Error::DivisionByZero(p));
    }
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "gcd(a, p) must be 1 for prime p");
    Ok(t.rem_euclid(p as i128) as u64)
}

fn check_modulus(p: u64) -> Result<()> {
    if p > MAX_MODULUS {
        return Err(Error::ModulusTooLarge(p));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

/// A dense row-major matrix over GF(p).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeFieldMatrix {
    rows: usize,
    cols: usize,
    modulus: u64,
    entries: Vec<u64>,
}

impl PrimeFieldMatrix {
    /// An all-zero `rows x cols` matrix over GF(`modulus`).
    ///
    /// Validates the modulus (prime, at most [`MAX_MODULUS`]) and the shape
    /// (both dimensions positive and at most [`DIM_CAP`]).
    pub fn zeros(rows: usize, cols: usize, modulus: u64) -> Result<Self> {
        check_modulus(modulus)?;
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix { rows, cols });
        }
        if rows > DIM_CAP || cols > DIM_CAP {
            return Err(Error::MatrixTooLarge {
                rows,
                cols,
                cap: DIM_CAP,
            });
        }
        Ok(PrimeFieldMatrix {
            rows,
            cols,
            modulus,
            entries: vec![0; rows * cols],
        })
    }

    /// The `size x size` identity matrix.
    pub fn identity(size: usize, modulus: u64) -> Result<Self> {
        let mut m = Self::zeros(size, size, modulus)?;
        for i in 0..size {
            m.set(i, i, 1);
        }
        Ok(m)
    }

    /// Builds a matrix from explicit rows, reducing every entry modulo the
    /// modulus. All rows must have the same non-zero length.
    pub fn from_rows(modulus: u64, rows: &[Vec<u64>]) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(height, width, modulus)?;
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), width, "ragged rows in matrix literal");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        self.entries[row * self.cols + col]
    }

    /// Stores `value mod p` at `(row, col)`.
    pub fn set(&mut self, row: usize, col: usize, value: u64) {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        self.entries[row * self.cols + col] = value % self.modulus;
    }

    /// The rank over GF(p). Uses the rayon pool when the `parallel` feature
    /// is enabled; the matrix itself is left untouched.
    pub fn rank(&self) -> usize {
        self.echelon_pivots(cfg!(feature = "parallel")).len()
    }

    /// The rank over GF(p), single-threaded regardless of features. Always
    /// returns exactly what [`PrimeFieldMatrix::rank`] returns.
    pub fn rank_sequential(&self) -> usize {
        self.echelon_pivots(false).len()
    }

    /// Indices of the pivot columns of the row echelon form, in increasing
    /// order. The rank of the submatrix formed by the first `c` columns is
    /// the number of pivots below `c` — one elimination answers the rank
    /// question for every column prefix at once.
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.echelon_pivots(cfg!(feature = "parallel"))
    }

    fn echelon_pivots(&self, use_parallel: bool) -> Vec<usize> {
        let (rows, cols, p) = (self.rows, self.cols, self.modulus);
        let mut work = self.entries.clone();
        let mut pivots = Vec::new();
        let limit = rows.min(cols);
        for col in 0..cols {
            let rank = pivots.len();
            // No pivots can appear once every row is used up; with the row
            // budget exhausted the remaining columns cannot contribute.
            if rank == limit {
                break;
            }
            let Some(pivot_row) = (rank..rows).find(|&i| work[i * cols + col] != 0) else {
                continue;
            };
            if pivot_row != rank {
                for j in col..cols {
                    work.swap(pivot_row * cols + j, rank * cols + j);
                }
            }
            let inv = modinv(work[rank * cols + col], p).expect("pivot entry is non-zero");
            let (upper, lower) = work.split_at_mut((rank + 1) * cols);
            eliminate_below(
                lower,
                &upper[rank * cols..],
                col,
                cols,
                p,
                inv,
                use_parallel,
            );
            pivots.push(col);
        }
        pivots
    }

    /// Writes the matrix as text: a `rows cols modulus` header line, then one
    /// space-separated line per row. Meant for eyeballing small matrices and
    /// shipping reproducer cases around.
    pub fn write_dump<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "{} {} {}", self.rows, self.cols, self.modulus)?;
        for row in self.entries.chunks(self.cols) {
            let line = row.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    /// Parses the format produced by [`PrimeFieldMatrix::write_dump`].
    ///
    /// # Panics
    ///
    /// Panics on malformed input; the dump format is a debugging aid, not an
    /// interchange format.
    pub fn read_dump<R: BufRead>(input: &mut R) -> Result<Self> {
        let mut text = String::new();
        input
            .read_to_string(&mut text)
            .expect("matrix dump is readable text");
        let mut numbers = text.split_ascii_whitespace().map(|tok| {
            tok.parse::<u64>()
                .expect("matrix dump contains only integers")
        });
        let rows = numbers.next().expect("missing row count") as usize;
        let cols = numbers.next().expect("missing column count") as usize;
        let modulus = numbers.next().expect("missing modulus");
        let mut m = Self::zeros(rows, cols, modulus)?;
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, numbers.next().expect("matrix dump is truncated"));
            }
        }
        assert!(numbers.next().is_none(), "trailing data in matrix dump");
        Ok(m)
    }
}

/// Clears column `col` in every row of `tail` by subtracting the right
/// multiple of `pivot_row`. Each row only reads itself and the pivot row, so
/// the rows can be processed in any order — or concurrently — with
/// bit-identical results.
fn eliminate_below(
    tail: &mut [u64],
    pivot_row: &[u64],
    col: usize,
    cols: usize,
    p: u64,
    inv: u64,
    use_parallel: bool,
) {
    let update = |row: &mut [u64]| {
        let lead = row[col];
        if lead == 0 {
            return;
        }
        // row <- row - (lead / pivot) * pivot_row. With factor f reduced,
        // entry + (p - f) * pivot_entry < 2^31 + 2^62 fits u64, so a single
        // remainder per entry suffices.
        let neg_factor = p - (lead * inv % p);
        for j in col + 1..cols {
            row[j] = (row[j] + neg_factor * pivot_row[j]) % p;
        }
        row[col] = 0;
    };

    #[cfg(feature = "parallel")]
    {
        let remaining = tail.len() / cols * (cols - col);
        if use_parallel && remaining >= PAR_MIN_WORK {
            use rayon::prelude::*;
            tail.par_chunks_mut(cols).for_each(update);
            return;
        }
    }
    let _ = use_parallel;
    for row in tail.chunks_mut(cols) {
        update(row);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_matrix(rng: &mut StdRng, rows: usize, cols: usize, p: u64) -> PrimeFieldMatrix {
        let mut m = PrimeFieldMatrix::zeros(rows, cols, p).unwrap();
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, rng.gen_range(0..p));
            }
        }
        m
    }

    /// Reference rank over GF(p) by fraction-free elimination: cross-multiply
    /// rows instead of dividing by the pivot, and pick the *last* candidate
    /// row as pivot. No inverses, different pivoting — independent of the
    /// implementation under test.
    fn rank_fraction_free(m: &PrimeFieldMatrix) -> usize {
        let p = u128::from(m.modulus());
        let mut a: Vec<Vec<u128>> = (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| u128::from(m.get(i, j))).collect())
            .collect();
        let mut rank = 0;
        for col in 0..m.cols() {
            let Some(pivot) = (rank..m.rows())
                .rev()
                .find(|&i| !a[i][col].is_multiple_of(p))
            else {
                continue;
            };
            a.swap(pivot, rank);
            let pivot_row = a[rank].clone();
            let lead = pivot_row[col] % p;
            for row in &mut a[rank + 1..] {
                let li = row[col] % p;
                // row <- lead * row - li * pivot_row (mod p)
                for (x, r) in row.iter_mut().zip(&pivot_row).skip(col) {
                    *x = (*x % p * lead % p + p * p - r % p * li % p) % p;
                }
            }
            rank += 1;
            if rank == m.rows() {
                break;
            }
        }
        rank
    }

    /// Exact integer determinant by Bareiss one-step fraction-free
    /// elimination. Small matrices only; used to decide full rank mod p.
    fn bareiss_determinant(m: &PrimeFieldMatrix) -> i128 {
        let n = m.rows();
        assert_eq!(n, m.cols());
        let mut a: Vec<Vec<i128>> = (0..n)
            .map(|i| (0..n).map(|j| m.get(i, j) as i128).collect())
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                let Some(swap) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                    return 0;
                };
                a.swap(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
                a[i][k] = 0;
            }
            prev = a[k][k];
        }
        sign * a[n - 1][n - 1]
    }

    #[test]
    fn primality_of_small_and_special_values() {
        let primes = [2u64, 3, 5, 31, 97, 7919, 2_147_483_647];
        for p in primes {
            assert!(is_prime(p), "{p} is prime");
        }
        // 561, 1105, 1729 are Carmichael numbers; 2^31 - 5 and +1 composite.
        let composites = [0u64, 1, 4, 561, 1105, 1729, 2_147_483_642, 2_147_483_648];
        for c in composites {
            assert!(!is_prime(c), "{c} is composite");
        }
    }

    #[test]
    fn modular_inverse_round_trips() {
        for p in [2u64, 3, 97, DEFAULT_PRIME] {
            for a in 1..p.min(50) {
                let inv = modinv(a, p).unwrap();
                assert_eq!(a * inv % p, 1, "a={a}, p={p}");
            }
        }
        assert_eq!(
            modinv(12345, DEFAULT_PRIME).map(|i| 12345 * i % DEFAULT_PRIME),
            Ok(1)
        );
        assert_eq!(modinv(0, 97), Err(Error::DivisionByZero(97)));
        assert_eq!(modinv(97 * 3, 97), Err(Error::DivisionByZero(97)));
    }

    #[test]
    fn construction_rejects_bad_shapes_and_moduli() {
        assert_eq!(PrimeFieldMatrix::zeros(3, 3, 91), Err(Error::NotPrime(91)));
        assert_eq!(
            PrimeFieldMatrix::zeros(3, 3, 4_294_967_311),
            Err(Error::ModulusTooLarge(4_294_967_311))
        );
        assert_eq!(
            PrimeFieldMatrix::zeros(0, 5, 7),
            Err(Error::EmptyMatrix { rows: 0, cols: 5 })
        );
        let err = PrimeFieldMatrix::zeros(DIM_CAP + 1, 2, 7).unwrap_err();
        assert_eq!(
            err,
            Error::MatrixTooLarge {
                rows: DIM_CAP + 1,
                cols: 2,
                cap: DIM_CAP
            }
        );
        assert!(err.is_resource());
    }

    #[test]
    fn rank_of_simple_matrices() {
        assert_eq!(PrimeFieldMatrix::identity(5, 97).unwrap().rank(), 5);
        assert_eq!(PrimeFieldMatrix::zeros(4, 6, 97).unwrap().rank(), 0);

        // Second row is twice the first: rank 1.
        let m = PrimeFieldMatrix::from_rows(5, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(m.rank(), 1);

        let m = PrimeFieldMatrix::from_rows(97, &[vec![1, 2], vec![3, 4]]).unwrap();
        assert_eq!(m.rank(), 2);

        // Rank depends on the field: this matrix drops rank exactly mod 5.
        let m5 = PrimeFieldMatrix::from_rows(5, &[vec![1, 2], vec![3, 11]]).unwrap();
        assert_eq!(m5.rank(), 1);
        let m7 = PrimeFieldMatrix::from_rows(7, &[vec![1, 2], vec![3, 11]]).unwrap();
        assert_eq!(m7.rank(), 2);
    }

    #[test]
    fn rank_matches_fraction_free_reference() {
        let mut rng = StdRng::seed_from_u64(42);
        for p in [2u64, 3, 13, 2_147_483_647] {
            for _ in 0..40 {
                let rows = rng.gen_range(1..=12);
                let cols = rng.gen_range(1..=12);
                let mut m = random_matrix(&mut rng, rows, cols, p);
                // Plant some linear dependence half the time so ranks are not
                // always full.
                if rows >= 2 && rng.gen_bool(0.5) {
                    let scale = rng.gen_range(0..p);
                    for j in 0..cols {
                        let v = mul_mod(m.get(0, j), scale, p);
                        m.set(rows - 1, j, v);
                    }
                }
                assert_eq!(m.rank(), rank_fraction_free(&m), "p={p}, {rows}x{cols}");
            }
        }
    }

    #[test]
    fn full_rank_agrees_with_integer_determinant() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..60 {
            let n = rng.gen_range(1..=7);
            let p = [3u64, 13, 101][rng.gen_range(0..3)];
            let m = random_matrix(&mut rng, n, n, p);
            let det_mod_p = bareiss_determinant(&m).rem_euclid(p as i128);
            assert_eq!(
                m.rank() == n,
                det_mod_p != 0,
                "determinant test disagrees for n={n}, p={p}"
            );
        }
    }

    #[test]
    fn pivot_columns_give_ranks_of_all_column_prefixes() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..20 {
            let rows = rng.gen_range(1..=10);
            let cols = rng.gen_range(1..=10);
            let m = random_matrix(&mut rng, rows, cols, 13);
            let pivots = m.pivot_columns();
            assert_eq!(pivots.len(), m.rank());
            for prefix in 1..=cols {
                let mut sub = PrimeFieldMatrix::zeros(rows, prefix, 13).unwrap();
                for i in 0..rows {
                    for j in 0..prefix {
                        sub.set(i, j, m.get(i, j));
                    }
                }
                let expected = pivots.iter().filter(|&&c| c < prefix).count();
                assert_eq!(sub.rank(), expected, "prefix {prefix} of {rows}x{cols}");
            }
        }
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_and_sequential_ranks_agree_on_large_matrices() {
        // 220 x 200 crosses the work threshold, so the rayon path really runs.
        let mut rng = StdRng::seed_from_u64(3);
        let m = random_matrix(&mut rng, 220, 200, 2_147_483_647);
        assert_eq!(m.rank(), m.rank_sequential());

        let mut singularish = random_matrix(&mut rng, 180, 220, 97);
        for i in 60..180 {
            for j in 0..220 {
                let v = mul_mod(singularish.get(i % 60, j), (i / 60) as u64 + 1, 97);
                singularish.set(i, j, v);
            }
        }
        assert_eq!(singularish.rank(), singularish.rank_sequential());
        assert!(singularish.rank() <= 60);
    }

    #[test]
    fn dump_round_trips_and_has_the_documented_header() {
        let m = PrimeFieldMatrix::from_rows(7, &[vec![1, 2, 3], vec![4, 5, 6]]).unwrap();
        let mut buf = Vec::new();
        m.write_dump(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            "2 3 7\n1 2 3\n4 5 6\n"
        );
        let back = PrimeFieldMatrix::read_dump(&mut buf.as_slice()).unwrap();
        assert_eq!(back, m);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn rank_is_invariant_under_row_permutation_and_scaling(
            seed in 0u64..1000,
            rows in 1usize..30,
            cols in 1usize..30,
            p_idx in 0usize..3,
        ) {
            let p = [2u64, 97, 2_147_483_647][p_idx];
            let mut rng = StdRng::seed_from_u64(seed);
            let m = random_matrix(&mut rng, rows, cols, p);

            // Reverse the rows and scale each by a non-zero constant.
            let mut shuffled = PrimeFieldMatrix::zeros(rows, cols, p).unwrap();
            for i in 0..rows {
                let scale = rng.gen_range(1..p.max(2));
                for j in 0..cols {
                    shuffled.set(rows - 1 - i, j, mul_mod(m.get(i, j), scale, p));
                }
            }
            prop_assert_eq!(m.rank(), shuffled.rank());
            prop_assert!(m.rank() <= rows.min(cols));
        }
    }
}

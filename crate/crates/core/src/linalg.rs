//! Exact rank and linear-system solving over the rationals.
//!
//! The rational path is fraction-free (Bareiss) elimination on an
//! integer-scaled copy of the matrix; it is the correctness anchor. The fast
//! path reduces modulo two independent random ~62-bit primes and accepts the
//! rank when the two agree, falling back to the rational path otherwise.
//! A modular rank is never larger than the rational one, so agreement of two
//! independent primes is overwhelming evidence of equality; the fallback
//! keeps the procedure deterministic in outcome.

use num::{BigInt, BigRational, One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Sparse matrix with exact rational entries. Rows hold sorted
/// `(column, coefficient)` pairs with no explicit zeros.
#[derive(Debug, Clone)]
pub struct RationalMatrix {
    cols: usize,
    rows: Vec<Vec<(usize, BigRational)>>,
}

impl RationalMatrix {
    /// Builds from sparse rows; entries are sorted, merged and zero-pruned.
    pub fn from_sparse_rows(cols: usize, rows: Vec<Vec<(usize, BigRational)>>) -> Self {
        let rows = rows
            .into_iter()
            .map(|mut row| {
                row.sort_by_key(|&(c, _)| c);
                let mut out: Vec<(usize, BigRational)> = Vec::with_capacity(row.len());
                for (c, v) in row {
                    debug_assert!(c < cols);
                    match out.last_mut() {
                        Some((lc, lv)) if *lc == c => *lv += v,
                        _ => out.push((c, v)),
                    }
                }
                out.retain(|(_, v)| !v.is_zero());
                out
            })
            .collect();
        RationalMatrix { cols, rows }
    }

    pub fn from_dense(entries: Vec<Vec<BigRational>>) -> Self {
        let cols = entries.first().map_or(0, |r| r.len());
        let rows = entries
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        RationalMatrix { cols, rows }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    /// Number of stored (nonzero) entries.
    pub fn stored_entries(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn transpose(&self) -> RationalMatrix {
        let mut rows = vec![Vec::new(); self.cols];
        for (i, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                rows[*c].push((i, v.clone()));
            }
        }
        RationalMatrix {
            cols: self.nrows(),
            rows,
        }
    }

    pub fn mul_vec(&self, x: &[BigRational]) -> Vec<BigRational> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|(c, v)| v * &x[*c])
                    .fold(BigRational::zero(), |a, b| a + b)
            })
            .collect()
    }

    fn dense_scaled(&self) -> Vec<Vec<BigInt>> {
        self.rows.iter().map(|row| scaled_row(row, self.cols)).collect()
    }

    /// Exact rank over the rationals via fraction-free elimination.
    pub fn rank_rational(&self) -> usize {
        bareiss_echelon(&mut self.dense_scaled())
    }

    /// Rank of the reduction mod `p`; always at most the rational rank.
    /// Errors when `p` divides some entry's denominator.
    pub fn modular_rank(&self, p: u64) -> Result<usize> {
        let mut reduced: Vec<Vec<(u32, u64)>> = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let mut r = Vec::with_capacity(row.len());
            for (c, v) in row {
                let val = rational_mod(v, p)?;
                if val != 0 {
                    r.push((*c as u32, val));
                }
            }
            if !r.is_empty() {
                reduced.push(r);
            }
        }
        Ok(sparse_rank_mod(self.cols, reduced, p))
    }

    /// Exact solution of a square nonsingular system `self * x = rhs`.
    pub fn solve_square(&self, rhs: &[BigRational]) -> Result<Vec<BigRational>> {
        let n = self.nrows();
        if n != self.cols || rhs.len() != n {
            return Err(Error::SingularMatrix(format!(
                "solve_square needs a square system, got {}x{} with rhs {}",
                n,
                self.cols,
                rhs.len()
            )));
        }
        // Augmented, integer-scaled copy; Bareiss keeps entries integral.
        let mut m: Vec<Vec<BigInt>> = self
            .rows
            .iter()
            .zip(rhs)
            .map(|(row, b)| {
                let mut full = row.clone();
                full.push((n, b.clone()));
                scaled_row(&full, n + 1)
            })
            .collect();

        let mut prev = BigInt::one();
        for col in 0..n {
            let Some(sel) = (col..n).find(|&i| !m[i][col].is_zero()) else {
                return Err(Error::SingularMatrix(
                    "interpolation grid not unisolvent".into(),
                ));
            };
            m.swap(col, sel);
            for i in col + 1..n {
                for j in col + 1..=n {
                    let t = &m[i][j] * &m[col][col] - &m[i][col] * &m[col][j];
                    m[i][j] = t / &prev;
                }
                m[i][col] = BigInt::zero();
            }
            prev = m[col][col].clone();
        }

        let mut x = vec![BigRational::zero(); n];
        for i in (0..n).rev() {
            let mut acc = BigRational::from_integer(m[i][n].clone());
            for j in i + 1..n {
                acc -= BigRational::from_integer(m[i][j].clone()) * &x[j];
            }
            x[i] = acc / BigRational::from_integer(m[i][i].clone());
        }
        Ok(x)
    }
}

/// Clears denominators of a sparse row into a dense integer vector.
/// Row scaling by a positive rational preserves rank and solutions.
fn scaled_row(row: &[(usize, BigRational)], cols: usize) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for (_, v) in row {
        lcm = num::Integer::lcm(&lcm, v.denom());
    }
    let mut out = vec![BigInt::zero(); cols];
    for (c, v) in row {
        out[*c] = v.numer() * (&lcm / v.denom());
    }
    out
}

/// Fraction-free row echelon; returns the rank. Pivots pick the first
/// structurally nonzero entry in canonical (row, then column) order.
fn bareiss_echelon(m: &mut [Vec<BigInt>]) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut prev = BigInt::one();
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row >= rows {
            break;
        }
        let Some(sel) = (pivot_row..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(pivot_row, sel);
        for i in pivot_row + 1..rows {
            for j in col + 1..cols {
                let t = &m[i][j] * &m[pivot_row][col] - &m[i][col] * &m[pivot_row][j];
                m[i][j] = t / &prev;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[pivot_row][col].clone();
        pivot_row += 1;
    }
    pivot_row
}

fn rational_mod(v: &BigRational, p: u64) -> Result<u64> {
    let pb = BigInt::from(p);
    let num = ((v.numer() % &pb) + &pb) % &pb;
    let den = ((v.denom() % &pb) + &pb) % &pb;
    let den = den.to_u64().expect("reduced residue fits in u64");
    if den == 0 {
        return Err(Error::UnluckyPrime(p));
    }
    let num = num.to_u64().expect("reduced residue fits in u64");
    Ok(mul_mod(num, inv_mod(den, p), p))
}

/// Sparse Gaussian elimination mod `p`; rows are sorted `(col, value)` pairs.
fn sparse_rank_mod(cols: usize, mut rows: Vec<Vec<(u32, u64)>>, p: u64) -> usize {
    // Establishing pivots in leading-column order first reduces fill-in.
    rows.sort_by_key(|r| (r[0].0, r.len()));
    let mut pivots: Vec<Option<Vec<(u32, u64)>>> = vec![None; cols];
    let mut rank = 0;
    for mut row in rows {
        while let Some(&(lead, val)) = row.first() {
            match &pivots[lead as usize] {
                Some(pivot) => {
                    row = sub_scaled_mod(&row, pivot, val, p);
                }
                None => {
                    let inv = inv_mod(val, p);
                    for (_, v) in row.iter_mut() {
                        *v = mul_mod(*v, inv, p);
                    }
                    pivots[lead as usize] = Some(row);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

/// `row - factor * pivot` mod p, where the pivot row is normalized to lead 1.
fn sub_scaled_mod(row: &[(u32, u64)], pivot: &[(u32, u64)], factor: u64, p: u64) -> Vec<(u32, u64)> {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let mut i = 0;
    let mut j = 0;
    while i < row.len() || j < pivot.len() {
        let next_row = row.get(i).map(|&(c, _)| c);
        let next_piv = pivot.get(j).map(|&(c, _)| c);
        match (next_row, next_piv) {
            (Some(rc), Some(pc)) if rc == pc => {
                let v = sub_mod(row[i].1, mul_mod(factor, pivot[j].1, p), p);
                if v != 0 {
                    out.push((rc, v));
                }
                i += 1;
                j += 1;
            }
            (Some(rc), Some(pc)) if rc < pc => {
                out.push(row[i]);
                i += 1;
            }
            (Some(_), Some(pc)) => {
                let v = sub_mod(0, mul_mod(factor, pivot[j].1, p), p);
                if v != 0 {
                    out.push((pc, v));
                }
                j += 1;
            }
            (Some(_), None) => {
                out.push(row[i]);
                i += 1;
            }
            (None, Some(pc)) => {
                let v = sub_mod(0, mul_mod(factor, pivot[j].1, p), p);
                if v != 0 {
                    out.push((pc, v));
                }
                j += 1;
            }
            (None, None) => break,
        }
    }
    out
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin; the witness set is exact below 2^64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A uniform random prime in [2^61, 2^62).
pub fn random_prime_62(rng: &mut ChaCha8Rng) -> u64 {
    loop {
        let cand = rng.gen_range((1u64 << 61)..(1u64 << 62)) | 1;
        if is_prime_u64(cand) {
            return cand;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankMode {
    /// Two-prime modular agreement with rational fallback.
    Auto,
    /// Full rational elimination on every call.
    ExactOnly,
}

/// Rank oracle implementing the two-prime policy. The prime stream is drawn
/// from a seeded generator, so identical runs use identical primes.
pub struct RankEngine {
    mode: RankMode,
    rng: ChaCha8Rng,
    /// rows*cols cap for the dense rational path.
    pub rational_dense_cap: usize,
}

pub const DEFAULT_SEED: u64 = 0x5eed_b1a5;

impl RankEngine {
    pub fn new(mode: RankMode, seed: u64) -> Self {
        RankEngine {
            mode,
            rng: ChaCha8Rng::seed_from_u64(seed),
            rational_dense_cap: 1 << 20,
        }
    }

    pub fn mode(&self) -> RankMode {
        self.mode
    }

    pub fn rank(&mut self, m: &RationalMatrix) -> Result<usize> {
        if m.nrows() == 0 || m.ncols() == 0 || m.stored_entries() == 0 {
            return Ok(0);
        }
        match self.mode {
            RankMode::ExactOnly => self.rational_guarded(m),
            RankMode::Auto => {
                let r1 = self.modular_with_retry(m)?;
                let r2 = self.modular_with_retry(m)?;
                if r1 == r2 {
                    Ok(r1)
                } else {
                    self.rational_guarded(m)
                }
            }
        }
    }

    fn rational_guarded(&self, m: &RationalMatrix) -> Result<usize> {
        let dense = m.nrows().saturating_mul(m.ncols());
        if dense > self.rational_dense_cap {
            return Err(Error::RankBudget(format!(
                "{}x{} exceeds the rational elimination cap of {} entries",
                m.nrows(),
                m.ncols(),
                self.rational_dense_cap
            )));
        }
        Ok(m.rank_rational())
    }

    fn modular_with_retry(&mut self, m: &RationalMatrix) -> Result<usize> {
        let mut last = Error::Internal("no prime tried".into());
        for _ in 0..16 {
            let p = random_prime_62(&mut self.rng);
            match m.modular_rank(p) {
                Ok(r) => return Ok(r),
                Err(e @ Error::UnluckyPrime(_)) => last = e,
                Err(e) => return Err(e),
            }
        }
        Err(last)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::FromPrimitive;
    use proptest::prelude::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from_i64(n).unwrap()
    }

    fn ratq(n: i64, d: i64) -> BigRational {
        rat(n) / rat(d)
    }

    fn dense(rows: Vec<Vec<i64>>) -> RationalMatrix {
        RationalMatrix::from_dense(
            rows.into_iter()
                .map(|r| r.into_iter().map(rat).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_examples() {
        let id = dense(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(id.rank_rational(), 3);
        let prop = dense(vec![vec![1, 2], vec![2, 4]]);
        assert_eq!(prop.rank_rational(), 1);
        // Spanning vectors of (x^2, y^3) in degree 3 of k[x,y,z]: the four
        // monomials x^3, x^2 y, x^2 z, y^3 are distinct unit rows.
        let mono = dense(vec![
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
        ]);
        assert_eq!(mono.rank_rational(), 4);
    }

    #[test]
    fn solve_examples() {
        let id = dense(vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(id.solve_square(&[rat(5), rat(7)]).unwrap(), vec![rat(5), rat(7)]);

        let diag = dense(vec![vec![2, 0], vec![0, 4]]);
        assert_eq!(
            diag.solve_square(&[rat(1), rat(1)]).unwrap(),
            vec![ratq(1, 2), ratq(1, 4)]
        );

        // Newton collocation for values 1, 3, 6 at w = 0, 1, 2 in the basis
        // C(w,0), C(w,1), C(w,2): forward differences of triangular numbers.
        let newton = dense(vec![vec![1, 0, 0], vec![1, 1, 0], vec![1, 2, 1]]);
        assert_eq!(
            newton.solve_square(&[rat(1), rat(3), rat(6)]).unwrap(),
            vec![rat(1), rat(2), rat(1)]
        );

        let sing = dense(vec![vec![1, 2], vec![2, 4]]);
        assert!(matches!(
            sing.solve_square(&[rat(1), rat(1)]),
            Err(Error::SingularMatrix(_))
        ));
    }

    #[test]
    fn modular_examples() {
        let id = dense(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(id.modular_rank(101).unwrap(), 3);
        let prop = dense(vec![vec![1, 2], vec![2, 4]]);
        assert_eq!(prop.modular_rank(101).unwrap(), 1);
        // Unlucky prime: the 1x1 matrix holding p itself drops rank mod p.
        let unlucky = dense(vec![vec![101]]);
        assert_eq!(unlucky.modular_rank(101).unwrap(), 0);
        assert_eq!(unlucky.rank_rational(), 1);
        // Denominator divisible by p is reported, not mis-reduced.
        let half = RationalMatrix::from_dense(vec![vec![ratq(1, 101)]]);
        assert!(matches!(half.modular_rank(101), Err(Error::UnluckyPrime(101))));
    }

    #[test]
    fn engine_policies() {
        let m = dense(vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]);
        let mut auto = RankEngine::new(RankMode::Auto, 42);
        let mut exact = RankEngine::new(RankMode::ExactOnly, 42);
        assert_eq!(auto.rank(&m).unwrap(), 2);
        assert_eq!(exact.rank(&m).unwrap(), 2);
    }

    #[test]
    fn rational_cap_is_enforced() {
        let m = dense(vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]);
        let mut eng = RankEngine::new(RankMode::ExactOnly, 42);
        eng.rational_dense_cap = 4;
        assert!(matches!(eng.rank(&m), Err(Error::RankBudget(_))));
    }

    #[test]
    fn prime_sampler() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..4 {
            let p = random_prime_62(&mut rng);
            assert!(((1u64 << 61)..(1 << 62)).contains(&p));
            assert!(is_prime_u64(p));
        }
        assert!(is_prime_u64(2));
        assert!(is_prime_u64((1 << 61) - 1));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64((1 << 61) + 1));
    }

    fn arb_matrix() -> impl Strategy<Value = RationalMatrix> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-4i64..5, c), r)
                .prop_map(dense)
        })
    }

    proptest! {
        #[test]
        fn rank_equals_transpose_rank(m in arb_matrix()) {
            prop_assert_eq!(m.rank_rational(), m.transpose().rank_rational());
        }

        #[test]
        fn modular_rank_never_exceeds_rational(m in arb_matrix()) {
            let modular = m.modular_rank(1_000_003).unwrap();
            prop_assert!(modular <= m.rank_rational());
        }

        #[test]
        fn solve_then_multiply_roundtrips(
            diag in proptest::collection::vec(1i64..9, 1..5),
            rhs_scale in 1i64..5,
        ) {
            // Random invertible triangular system.
            let n = diag.len();
            let mut rows = vec![vec![0i64; n]; n];
            for (i, row) in rows.iter_mut().enumerate() {
                row[i] = diag[i];
                for (j, entry) in row.iter_mut().enumerate().take(i) {
                    *entry = (diag[i] + j as i64) % 3;
                }
            }
            let m = dense(rows);
            let rhs: Vec<BigRational> =
                (0..n).map(|i| rat(rhs_scale * (i as i64 + 1))).collect();
            let x = m.solve_square(&rhs).unwrap();
            prop_assert_eq!(m.mul_vec(&x), rhs);
        }
    }
}

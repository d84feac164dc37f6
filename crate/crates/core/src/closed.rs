//! Closed-form counterparts of the brute-force oracle: leading coefficients
//! of bigraded polynomial rings, mixed multiplicities of ideals generated by
//! homogeneous d-sequences (regular sequences and generic maximal minors as
//! special cases), the initial-ideal decomposition of the Rees Hilbert
//! function, and the degree of the embedded blow-up.

use std::collections::{BTreeMap, HashMap};

use num::{BigInt, One, Signed, Zero};

use crate::algebra::{BigradedRing, ExponentVector, SparsePolynomial};
use crate::combin::{binomial, compositions};
use crate::fit::MixedMultReport;
use crate::linalg::{RankEngine, RankMode, DEFAULT_SEED};
use crate::oracle::{graded_quotient_hilbert, hilbert_poly_ring, OracleConfig, QuotientPresentation};
use crate::{Error, Result};

/// Top-degree coefficients `e_{i,j}` (i+j = total_degree) of a bivariate
/// polynomial written as `sum e_{ij}/(i! j!) u^i v^j + lower order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopCoefficients {
    pub total_degree: i64,
    pub entries: BTreeMap<(i64, i64), BigInt>,
}

impl TopCoefficients {
    pub fn entry(&self, i: i64, j: i64) -> BigInt {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(BigInt::zero)
    }
}

/// `sum over j_1+...+j_q = total of d_1^{j_1} ... d_q^{j_q}`, zero when
/// `total < 0`. Powers are memoized across the enumeration.
pub fn weighted_composition_sum(degrees: &[i64], total: i64) -> BigInt {
    if total < 0 {
        return BigInt::zero();
    }
    let powers = power_table(degrees, total);
    let mut acc = BigInt::zero();
    for comp in compositions(total, degrees.len()) {
        let mut term = BigInt::one();
        for (idx, &e) in comp.iter().enumerate() {
            term *= &powers[idx][e as usize];
        }
        acc += term;
    }
    acc
}

fn power_table(degrees: &[i64], max_exp: i64) -> Vec<Vec<BigInt>> {
    degrees
        .iter()
        .map(|&d| {
            let mut row = Vec::with_capacity(max_exp as usize + 1);
            row.push(BigInt::one());
            for _ in 0..max_exp {
                let next = row.last().expect("nonempty") * d;
                row.push(next);
            }
            row
        })
        .collect()
}

fn sign(k: i64) -> BigInt {
    if k.rem_euclid(2) == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// Top coefficients of the Hilbert polynomial of the bigraded polynomial
/// ring `k[X_1..X_n, Y_1..Y_r]` with `bideg Y_j = (d_j, 1)`: total degree
/// `n+r-2`, and
/// `e_{i, n+r-2-i} = (-1)^{n-1-i} sum_{|j|=n-1-i} d^j` for `i < n`, 0 above.
pub fn polyring_top_coefficients(n: usize, degrees: &[i64]) -> TopCoefficients {
    let r = degrees.len() as i64;
    let nn = n as i64;
    let total = nn + r - 2;
    let mut entries = BTreeMap::new();
    for i in 0..=total {
        let value = if i < nn {
            sign(nn - 1 - i) * weighted_composition_sum(degrees, nn - 1 - i)
        } else {
            BigInt::zero()
        };
        entries.insert((i, total - i), value);
    }
    TopCoefficients {
        total_degree: total,
        entries,
    }
}

/// Top coefficients of `H(u,v) = sum_{|a|=v} f(u - d_1 a_1 - ... - d_r a_r)`
/// for a degree-`m` polynomial `f` with leading term `lead/m! t^m`: total
/// degree `m+r-1`, and
/// `e_{i, m+r-1-i} = (-1)^{m-i} lead sum_{|j|=m-i} d^j` for `i <= m`, 0 above.
pub fn shifted_sum_top_coefficients(lead: &BigInt, m: i64, degrees: &[i64]) -> TopCoefficients {
    let r = degrees.len() as i64;
    let total = m + r - 1;
    let mut entries = BTreeMap::new();
    for i in 0..=total {
        let value = if i <= m {
            sign(m - i) * lead * weighted_composition_sum(degrees, m - i)
        } else {
            BigInt::zero()
        };
        entries.insert((i, total - i), value);
    }
    TopCoefficients {
        total_degree: total,
        entries,
    }
}

/// One colon ideal `I_q = (f_1..f_{q-1}) : f_q` together with the dimension
/// and multiplicity of `A/I_q`.
#[derive(Debug, Clone)]
pub struct ColonEntry {
    pub generators: Vec<SparsePolynomial>,
    pub dim: i64,
    pub mult: BigInt,
}

/// Colon data of a homogeneous d-sequence `f_1, ..., f_r` with non-decreasing
/// degrees. Houses `s = dim A/I_1 - 1` and `m = max{q : dim A/I_q + q - 2 = s}`.
#[derive(Debug, Clone)]
pub struct ColonData {
    pub n: usize,
    pub degrees: Vec<i64>,
    pub entries: Vec<ColonEntry>,
}

impl ColonData {
    pub fn new(n: usize, degrees: Vec<i64>, entries: Vec<ColonEntry>) -> Result<Self> {
        if entries.is_empty() || degrees.len() != entries.len() {
            return Err(Error::InvalidColonData(
                "need one colon entry per degree".into(),
            ));
        }
        if degrees.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidColonData(
                "degrees must be non-decreasing".into(),
            ));
        }
        if entries.windows(2).any(|w| w[0].dim <= w[1].dim) {
            return Err(Error::InvalidColonData(
                "dim A/I_q must be strictly decreasing in q".into(),
            ));
        }
        for (q, e) in entries.iter().enumerate() {
            if e.dim < 1 {
                return Err(Error::InvalidColonData(format!(
                    "dim A/I_{} must be positive",
                    q + 1
                )));
            }
            if !e.mult.is_positive() {
                return Err(Error::InvalidColonData(format!(
                    "e(A/I_{}) must be positive",
                    q + 1
                )));
            }
            for g in &e.generators {
                if g.num_vars() != n {
                    return Err(Error::VariableMismatch(g.num_vars(), n));
                }
                if g.homogeneous_degree().is_none() {
                    return Err(Error::InvalidColonData(format!(
                        "colon generators of I_{} must be nonzero and homogeneous",
                        q + 1
                    )));
                }
            }
        }
        Ok(ColonData {
            n,
            degrees,
            entries,
        })
    }

    /// Colon data induced by a regular sequence: `I_q = (f_1..f_{q-1})`,
    /// `dim A/I_q = n - q + 1` and `e(A/I_q) = d_1...d_{q-1} * e(A)`.
    pub fn regular_sequence(
        n: usize,
        ring_mult: &BigInt,
        generators: &[SparsePolynomial],
    ) -> Result<Self> {
        let mut degrees = Vec::with_capacity(generators.len());
        for g in generators {
            degrees.push(g.homogeneous_degree().ok_or_else(|| {
                Error::InvalidColonData("regular sequence entries must be homogeneous".into())
            })?);
        }
        let mut entries = Vec::with_capacity(generators.len());
        let mut mult = ring_mult.clone();
        for q in 0..generators.len() {
            entries.push(ColonEntry {
                generators: generators[..q].to_vec(),
                dim: n as i64 - q as i64,
                mult: mult.clone(),
            });
            mult *= degrees[q];
        }
        ColonData::new(n, degrees, entries)
    }

    pub fn r(&self) -> usize {
        self.entries.len()
    }

    pub fn d_max(&self) -> i64 {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    /// `s = dim A/I_1 - 1`.
    pub fn s(&self) -> i64 {
        self.entries[0].dim - 1
    }

    /// `m = max{q : dim A/I_q + q - 2 = s}`; at least 1.
    pub fn m_index(&self) -> i64 {
        let s = self.s();
        (1..=self.entries.len() as i64)
            .filter(|&q| self.entries[q as usize - 1].dim + q - 2 == s)
            .max()
            .expect("q = 1 always qualifies")
    }
}

/// Mixed multiplicities of the Rees algebra of a d-sequence ideal:
/// `e_i = sum_{q=1}^{min(m, s-i+1)} (-1)^{s-q-i+1} e(A/I_q)
///        sum_{|j|=s-q-i+1} d_1^{j_1}...d_q^{j_q}`.
pub fn dsequence_mixed_multiplicities(cd: &ColonData) -> MixedMultReport {
    let s = cd.s();
    let m = cd.m_index();
    let mut e = Vec::with_capacity(s as usize + 1);
    for i in 0..=s {
        let q_top = m.min(s - i + 1);
        let mut acc = BigInt::zero();
        for q in 1..=q_top {
            let shift = s - q - i + 1;
            acc += sign(shift)
                * &cd.entries[q as usize - 1].mult
                * weighted_composition_sum(&cd.degrees[..q as usize], shift);
        }
        e.push(acc);
    }
    MixedMultReport::new(s, s, cd.d_max(), e)
}

/// Mixed multiplicities for an ideal generated by a homogeneous regular
/// sequence in an `n`-dimensional standard graded ring of multiplicity
/// `ring_mult`, via the twisted composition sum
/// `d_1^{j_1+1}...d_{q-1}^{j_{q-1}+1} d_q^{j_q}`.
pub fn regular_sequence_mixed_multiplicities(
    n: usize,
    ring_mult: &BigInt,
    degrees: &[i64],
) -> MixedMultReport {
    let s = n as i64 - 1;
    let r = degrees.len() as i64;
    let mut e = Vec::with_capacity(s as usize + 1);
    for i in 0..=s {
        let q_top = r.min(s - i + 1);
        let mut acc = BigInt::zero();
        for q in 1..=q_top as usize {
            let shift = s - q as i64 - i + 1;
            let powers = power_table(&degrees[..q], shift);
            let mut inner = BigInt::zero();
            for comp in compositions(shift, q) {
                let mut term = BigInt::one();
                for (idx, &ex) in comp.iter().enumerate() {
                    term *= &powers[idx][ex as usize];
                    // All but the last factor carry an extra copy of d_idx.
                    if idx + 1 < q {
                        term *= degrees[idx];
                    }
                }
                inner += term;
            }
            acc += sign(shift) * ring_mult * inner;
        }
        e.push(acc);
    }
    let d_max = degrees.iter().copied().max().unwrap_or(0);
    MixedMultReport::new(s, s, d_max, e)
}

/// Mixed multiplicities of the Rees algebra of the maximal minors of a
/// generic `(r-1) x r` matrix, per the closed form
/// `e_i = sum_q (-1)^{s-q-i+1} C(r-1,q-1) C(s-i,q-1) r^{s-q-i+1}` with
/// `s = (r-1)r - 1`.
///
/// The formula treats the generators as forms of degree `r`; the minors
/// themselves have degree `r-1`, and the Rees algebra of the actual minor
/// ideal is covered by `dsequence_mixed_multiplicities` on its true colon
/// data instead. The two sequences differ (compare `minors_colon_data`).
pub fn maximal_minors_mixed_multiplicities(r: i64) -> Result<MixedMultReport> {
    if r < 2 {
        return Err(Error::Hypothesis("maximal minors need r >= 2".into()));
    }
    let s = (r - 1) * r - 1;
    let mut e = Vec::with_capacity(s as usize + 1);
    for i in 0..=s {
        let q_top = r.min(s - i + 1);
        let mut acc = BigInt::zero();
        for q in 1..=q_top {
            let shift = s - q - i + 1;
            let mut power = BigInt::one();
            for _ in 0..shift {
                power *= r;
            }
            acc += sign(shift) * binomial(r - 1, q - 1) * binomial(s - i, q - 1) * power;
        }
        e.push(acc);
    }
    Ok(MixedMultReport::new(s, s, r, e))
}

/// Generic `(rows x cols)` matrix of indeterminates inside `n = rows*cols`
/// variables, variable `(a, b)` at index `a*cols + b`.
fn generic_matrix_minor(
    total_vars: usize,
    cols_per_row: usize,
    row_idx: &[usize],
    col_idx: &[usize],
) -> SparsePolynomial {
    debug_assert_eq!(row_idx.len(), col_idx.len());
    let t = row_idx.len();
    if t == 0 {
        return SparsePolynomial::one(total_vars);
    }
    let mut acc = SparsePolynomial::zero(total_vars);
    // Cofactor expansion along the first row.
    for (pos, &c) in col_idx.iter().enumerate() {
        let mut exps = vec![0u32; total_vars];
        exps[row_idx[0] * cols_per_row + c] = 1;
        let entry = SparsePolynomial::monomial(
            ExponentVector::new(exps),
            if pos % 2 == 0 {
                num::BigRational::one()
            } else {
                -num::BigRational::one()
            },
        );
        let sub_cols: Vec<usize> = col_idx
            .iter()
            .copied()
            .filter(|&cc| cc != c)
            .collect();
        let minor = generic_matrix_minor(total_vars, cols_per_row, &row_idx[1..], &sub_cols);
        acc = acc
            .add(&entry.mul(&minor).expect("same ambient ring"))
            .expect("same ambient ring");
    }
    acc
}

/// Colon data for the maximal minors of a generic `(r-1) x r` matrix:
/// `I_1 = 0` and, for `q >= 2`, `I_q` is generated by the maximal minors of
/// the first `r-q+1` columns. The `declared_degree` is recorded as the
/// common degree of all r sequence entries: `r` reproduces the closed form
/// above, `r-1` is the true degree of the minors.
pub fn minors_colon_data(r: usize, declared_degree: i64) -> Result<ColonData> {
    if r < 2 {
        return Err(Error::Hypothesis("maximal minors need r >= 2".into()));
    }
    let n = (r - 1) * r;
    let mut entries = Vec::with_capacity(r);
    for q in 1..=r {
        let generators = if q == 1 {
            Vec::new()
        } else {
            // Maximal minors of the (r-1) x (r-q+1) submatrix of the first
            // r-q+1 columns: square size min(r-1, r-q+1) = r-q+1.
            let t = r - q + 1;
            let cols: Vec<usize> = (0..t).collect();
            let mut row_choice = (0..t).collect::<Vec<usize>>();
            let mut gens = Vec::new();
            loop {
                gens.push(generic_matrix_minor(n, r, &row_choice, &cols));
                // Next t-subset of {0..r-2} in lexicographic order.
                let mut idx = t;
                loop {
                    if idx == 0 {
                        break;
                    }
                    idx -= 1;
                    if row_choice[idx] < r - 2 - (t - 1 - idx) {
                        row_choice[idx] += 1;
                        for k in idx + 1..t {
                            row_choice[k] = row_choice[k - 1] + 1;
                        }
                        break;
                    }
                    if idx == 0 {
                        row_choice.clear();
                        break;
                    }
                }
                if row_choice.is_empty() || row_choice[t - 1] > r - 2 {
                    break;
                }
                if gens.len() > 64 {
                    return Err(Error::Internal("runaway minor enumeration".into()));
                }
            }
            gens
        };
        entries.push(ColonEntry {
            generators,
            dim: (n - q + 1) as i64,
            mult: binomial(r as i64 - 1, q as i64 - 1),
        });
    }
    ColonData::new(n, vec![declared_degree; r], entries)
}

/// Memoizing evaluator for the initial-ideal decomposition
/// `H(u,v) = sum_{q} sum_{|a_1..a_q|=v, a_q>0} H_{A/I_q}(u - d_1 a_1 - ... - d_q a_q)`
/// with `H(u,0) = H_A(u)`.
pub struct DsequenceEvaluator<'a> {
    cd: &'a ColonData,
    engine: RankEngine,
    config: OracleConfig,
    memo: HashMap<(usize, i64), u64>,
}

impl<'a> DsequenceEvaluator<'a> {
    pub fn new(cd: &'a ColonData) -> Self {
        DsequenceEvaluator {
            cd,
            engine: RankEngine::new(RankMode::Auto, DEFAULT_SEED),
            config: OracleConfig::default(),
            memo: HashMap::new(),
        }
    }

    fn quotient_hilbert(&mut self, q: usize, t: i64) -> Result<u64> {
        if t < 0 {
            return Ok(0);
        }
        if let Some(&h) = self.memo.get(&(q, t)) {
            return Ok(h);
        }
        let h = graded_quotient_hilbert(
            self.cd.n,
            &self.cd.entries[q].generators,
            t,
            &mut self.engine,
            &self.config,
        )?;
        self.memo.insert((q, t), h);
        Ok(h)
    }

    pub fn hilbert(&mut self, u: i64, v: i64) -> Result<u64> {
        if u < 0 || v < 0 {
            return Ok(0);
        }
        if v == 0 {
            // The decomposition's sum is empty at v = 0, yet the component
            // is the whole of A_u.
            return Ok(hilbert_poly_ring(self.cd.n, u));
        }
        let mut total: u64 = 0;
        for q in 1..=self.cd.r() {
            // Compositions of v into q parts with a_q >= 1.
            for mut alpha in compositions(v - 1, q) {
                alpha[q - 1] += 1;
                let shift: i64 = alpha
                    .iter()
                    .zip(&self.cd.degrees)
                    .map(|(&a, &d)| a * d)
                    .sum();
                total += self.quotient_hilbert(q - 1, u - shift)?;
            }
        }
        Ok(total)
    }
}

/// One-shot decomposition value; builds a fresh evaluator per call.
pub fn dsequence_hilbert(cd: &ColonData, u: i64, v: i64) -> Result<u64> {
    DsequenceEvaluator::new(cd).hilbert(u, v)
}

/// Initial-ideal presentation S/J* with `J* = (I_1 Y_1, ..., I_r Y_r)`.
pub fn build_initial_ideal(cd: &ColonData, label: impl Into<String>) -> Result<QuotientPresentation> {
    let ring = BigradedRing::new(cd.n, cd.degrees.clone())?;
    let total = ring.num_vars();
    let mut generators = Vec::new();
    for (q, entry) in cd.entries.iter().enumerate() {
        let mut y_exp = vec![0u32; total];
        y_exp[cd.n + q] = 1;
        let y = ExponentVector::new(y_exp);
        for g in &entry.generators {
            generators.push(g.embed(total).shift(&y));
        }
    }
    QuotientPresentation::new(label, ring, generators)
}

/// Hilbert function of the powers of a length-two complete intersection
/// `I = (f_1, f_2)` in three variables, at `u = u' + d_2 v`:
/// `sum_{j=0}^{v-1} [C(u'+Dj+2, 2) - C(u'+Dj-d_1+2, 2)] + C(u'+Dv+2, 2)`
/// with `D = d_2 - d_1` and combinatorial binomials.
pub fn ci_pair_hilbert(d1: i64, d2: i64, u_prime: i64, v: i64) -> Result<u64> {
    if d1 > d2 {
        return Err(Error::Hypothesis("needs d1 <= d2".into()));
    }
    if v < 0 {
        return Err(Error::Hypothesis("needs v >= 0".into()));
    }
    let delta = d2 - d1;
    let mut acc = BigInt::zero();
    for j in 0..v {
        acc += binomial(u_prime + delta * j + 2, 2);
        acc -= binomial(u_prime + delta * j - d1 + 2, 2);
    }
    acc += binomial(u_prime + delta * v + 2, 2);
    num::ToPrimitive::to_u64(&acc)
        .ok_or_else(|| Error::Internal("dimension does not fit in u64".into()))
}

/// Degree of the blow-up embedded by `(I^e)_c`:
/// `sum_i C(s,i) e_i c^i e^{s-i}`, valid for `c > d_max * e`.
pub fn embedded_degree(rep: &MixedMultReport, c: i64, e: i64) -> Result<BigInt> {
    if c <= rep.d_max * e {
        return Err(Error::Hypothesis(format!(
            "embedded degree needs c > d_max*e, got c={c}, d_max={}, e={e}",
            rep.d_max
        )));
    }
    if rep.s < 0 {
        return Ok(BigInt::zero());
    }
    let s = rep.s;
    let mut acc = BigInt::zero();
    for (i, ei) in rep.e.iter().enumerate() {
        let i = i as i64;
        let mut term = binomial(s, i) * ei;
        for _ in 0..i {
            term *= c;
        }
        for _ in 0..(s - i) {
            term *= e;
        }
        acc += term;
    }
    Ok(acc)
}

/// Mixed multiplicities of the pair (maximal ideal, I) for a d-sequence
/// ideal: zero up to index `s - m`, then `e(A/I_{s-i+1})` read backwards.
pub fn teissier_mixed_multiplicities(cd: &ColonData) -> Vec<BigInt> {
    let s = cd.s();
    let m = cd.m_index();
    (0..=s)
        .map(|i| {
            if i <= s - m {
                BigInt::zero()
            } else {
                cd.entries[(s - i + 1) as usize - 1].mult.clone()
            }
        })
        .collect()
}

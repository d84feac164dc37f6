//! Ground-truth Hilbert function values for bigraded quotients and Rees
//! algebras, by monomial counting where the data is monomial and by exact
//! spanning-set rank everywhere else. Every closed form in the crate is
//! checked against this module.

use std::collections::{BTreeMap, HashMap, HashSet};

use num::BigRational;

use crate::algebra::{
    monomials_of_degree, BiMonomial, BigradedRing, ExponentVector, SparsePolynomial,
};
use crate::combin::binomial_u64;
use crate::linalg::{RankEngine, RationalMatrix};
use crate::{Error, Result};

/// Per-cell resource limits for spanning-set matrices.
#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    /// Cap on stored matrix coefficients for a single cell.
    pub cell_entry_cap: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            cell_entry_cap: 2_000_000,
        }
    }
}

/// Rees algebra `A[It]` of a homogeneous ideal I = (f_1, ..., f_r) in
/// A = k[X_1..X_n], bigraded by (degree in A, power of I).
#[derive(Debug, Clone)]
pub struct ReesPresentation {
    pub label: String,
    pub n: usize,
    pub degrees: Vec<i64>,
    pub generators: Vec<SparsePolynomial>,
}

impl ReesPresentation {
    /// Validates that every generator is nonzero and homogeneous; the degree
    /// vector is read off the generators.
    pub fn new(
        label: impl Into<String>,
        n: usize,
        generators: Vec<SparsePolynomial>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPresentation("n must be at least 1".into()));
        }
        if generators.is_empty() {
            return Err(Error::InvalidPresentation(
                "a Rees presentation needs at least one generator".into(),
            ));
        }
        let mut degrees = Vec::with_capacity(generators.len());
        for (j, g) in generators.iter().enumerate() {
            if g.num_vars() != n {
                return Err(Error::VariableMismatch(g.num_vars(), n));
            }
            match g.homogeneous_degree() {
                Some(d) => degrees.push(d),
                None => {
                    return Err(Error::InvalidPresentation(format!(
                        "generator {} is zero or not homogeneous",
                        j + 1
                    )))
                }
            }
        }
        Ok(ReesPresentation {
            label: label.into(),
            n,
            degrees,
            generators,
        })
    }

    pub fn r(&self) -> usize {
        self.generators.len()
    }

    pub fn d_max(&self) -> i64 {
        self.degrees.iter().copied().max().unwrap_or(0)
    }
}

/// Bigraded quotient S/J of a bigraded polynomial ring by bihomogeneous
/// generators.
#[derive(Debug, Clone)]
pub struct QuotientPresentation {
    pub label: String,
    pub ring: BigradedRing,
    pub generators: Vec<SparsePolynomial>,
    pub bidegrees: Vec<(i64, i64)>,
}

impl QuotientPresentation {
    /// Validates bihomogeneity of every generator against the ring's weights.
    pub fn new(
        label: impl Into<String>,
        ring: BigradedRing,
        generators: Vec<SparsePolynomial>,
    ) -> Result<Self> {
        let mut bidegrees = Vec::with_capacity(generators.len());
        for (j, g) in generators.iter().enumerate() {
            if g.num_vars() != ring.num_vars() {
                return Err(Error::VariableMismatch(g.num_vars(), ring.num_vars()));
            }
            match g.bidegree(ring.n, &ring.degrees) {
                Some(bd) => bidegrees.push(bd),
                None => {
                    return Err(Error::InvalidPresentation(format!(
                        "generator {} is zero or not bihomogeneous",
                        j + 1
                    )))
                }
            }
        }
        Ok(QuotientPresentation {
            label: label.into(),
            ring,
            generators,
            bidegrees,
        })
    }
}

/// Either flavour of finitely presented algebra handled by the oracle.
#[derive(Debug, Clone)]
pub enum AlgebraPresentation {
    Rees(ReesPresentation),
    Quotient(QuotientPresentation),
}

impl AlgebraPresentation {
    pub fn label(&self) -> &str {
        match self {
            AlgebraPresentation::Rees(p) => &p.label,
            AlgebraPresentation::Quotient(p) => &p.label,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            AlgebraPresentation::Rees(p) => p.n,
            AlgebraPresentation::Quotient(p) => p.ring.n,
        }
    }

    pub fn d_max(&self) -> i64 {
        match self {
            AlgebraPresentation::Rees(p) => p.d_max(),
            AlgebraPresentation::Quotient(p) => p.ring.d_max(),
        }
    }

    /// Default total-degree bound for polynomial fitting: `n-1` for a Rees
    /// algebra over a polynomial ring, `n+r-2` for a bigraded quotient.
    pub fn default_degree_bound(&self) -> usize {
        match self {
            AlgebraPresentation::Rees(p) => p.n - 1,
            AlgebraPresentation::Quotient(p) => p.ring.n + p.ring.r - 2,
        }
    }
}

/// `dim_k A_u = C(u+n-1, n-1)` for the polynomial ring, 0 for `u < 0`.
pub fn hilbert_poly_ring(n: usize, u: i64) -> u64 {
    binomial_u64(u + n as i64 - 1, n as i64 - 1).expect("polynomial ring dimension fits u64")
}

/// All products of `v` generators taken as multisets, each multiset once.
pub fn ideal_power_products(
    generators: &[SparsePolynomial],
    v: i64,
) -> Result<Vec<SparsePolynomial>> {
    debug_assert!(v >= 1);
    // Level t holds one product per non-decreasing index multiset of size t,
    // tagged with its largest index so extensions stay non-decreasing.
    let mut level: Vec<(usize, SparsePolynomial)> = generators
        .iter()
        .enumerate()
        .map(|(j, g)| (j, g.clone()))
        .collect();
    for _ in 1..v {
        let mut next = Vec::new();
        for (last, p) in &level {
            for (j, g) in generators.iter().enumerate().skip(*last) {
                next.push((j, p.mul(g)?));
            }
        }
        level = next;
    }
    Ok(level.into_iter().map(|(_, p)| p).collect())
}

fn sparse_row(
    p: &SparsePolynomial,
    columns: &HashMap<ExponentVector, usize>,
) -> Result<Vec<(usize, BigRational)>> {
    p.terms()
        .map(|(m, c)| {
            columns
                .get(m)
                .map(|&idx| (idx, c.clone()))
                .ok_or_else(|| Error::Internal("spanning term outside the graded component".into()))
        })
        .collect()
}

/// `dim_k (I^v)_u` for `v >= 1`: the rank of the matrix whose rows are all
/// products of `v` generators times a monomial of the complementary degree.
/// When every generator is a monomial the distinct product monomials are
/// counted directly instead.
pub fn ideal_power_component_dim(
    pres: &ReesPresentation,
    v: i64,
    u: i64,
    engine: &mut RankEngine,
    config: &OracleConfig,
) -> Result<u64> {
    debug_assert!(v >= 1);
    if u < 0 {
        return Ok(0);
    }

    if pres.generators.iter().all(|g| g.as_monomial().is_some()) {
        return monomial_power_count(pres, v, u);
    }

    let products = ideal_power_products(&pres.generators, v)?;
    let columns: HashMap<ExponentVector, usize> = monomials_of_degree(pres.n, u)
        .into_iter()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let ncols = columns.len();

    let mut rows = Vec::new();
    let mut stored = 0usize;
    for p in &products {
        let deg = p
            .homogeneous_degree()
            .ok_or_else(|| Error::Internal("inhomogeneous generator product".into()))?;
        for m in monomials_of_degree(pres.n, u - deg) {
            let row = sparse_row(&p.shift(&m), &columns)?;
            stored += row.len();
            if stored > config.cell_entry_cap {
                return Err(Error::CellBudget {
                    u,
                    v,
                    reason: format!(
                        "spanning matrix exceeds {} stored entries",
                        config.cell_entry_cap
                    ),
                });
            }
            rows.push(row);
        }
    }
    let matrix = RationalMatrix::from_sparse_rows(ncols, rows);
    Ok(engine.rank(&matrix)? as u64)
}

fn monomial_power_count(pres: &ReesPresentation, v: i64, u: i64) -> Result<u64> {
    let gens: Vec<ExponentVector> = pres
        .generators
        .iter()
        .map(|g| g.as_monomial().expect("checked monomial").0.clone())
        .collect();
    // Distinct product monomials over multisets of v generators.
    let mut products: HashSet<ExponentVector> = gens.iter().cloned().collect();
    for _ in 1..v {
        let mut next = HashSet::new();
        for p in &products {
            for g in &gens {
                next.insert(p.times(g));
            }
        }
        products = next;
    }
    let products: Vec<ExponentVector> = products
        .into_iter()
        .filter(|m| m.total_degree() <= u)
        .collect();
    let count = monomials_of_degree(pres.n, u)
        .into_iter()
        .filter(|cand| products.iter().any(|m| m.divides(cand)))
        .count();
    Ok(count as u64)
}

/// `H_{A[It]}(u, v)`: the full polynomial ring component at `v = 0`, the
/// ideal-power component otherwise.
pub fn rees_hilbert(
    pres: &ReesPresentation,
    u: i64,
    v: i64,
    engine: &mut RankEngine,
    config: &OracleConfig,
) -> Result<u64> {
    if u < 0 || v < 0 {
        return Ok(0);
    }
    if v == 0 {
        Ok(hilbert_poly_ring(pres.n, u))
    } else {
        ideal_power_component_dim(pres, v, u, engine, config)
    }
}

/// `dim_k (S/J)_(u,v)` for a bigraded quotient: basis count minus the rank of
/// the spanning set `{g*m}`. Quotients by monomial ideals are counted by
/// inclusion-exclusion over the (minimalized) generators.
pub fn quotient_bigraded_hilbert(
    pres: &QuotientPresentation,
    u: i64,
    v: i64,
    engine: &mut RankEngine,
    config: &OracleConfig,
) -> Result<u64> {
    if u < 0 || v < 0 {
        return Ok(0);
    }
    let ring = &pres.ring;
    if pres.generators.is_empty() {
        return to_u64(ring.basis_count(u, v));
    }

    if pres.generators.iter().all(|g| g.as_monomial().is_some()) {
        let gens: Vec<BiMonomial> = pres
            .generators
            .iter()
            .map(|g| {
                let (x, y) = g.as_monomial().expect("checked monomial").0.split(ring.n);
                BiMonomial {
                    x_part: x,
                    y_part: y,
                }
            })
            .collect();
        let gens = minimalize(gens);
        if gens.len() <= 16 {
            return monomial_quotient_count(ring, &gens, u, v);
        }
    }

    let basis = ring.bigraded_basis(u, v);
    let columns: HashMap<ExponentVector, usize> = basis
        .iter()
        .enumerate()
        .map(|(i, m)| (m.to_exponent_vector(), i))
        .collect();
    let ncols = basis.len();

    let mut rows = Vec::new();
    let mut stored = 0usize;
    for (g, &(a, b)) in pres.generators.iter().zip(&pres.bidegrees) {
        for m in ring.bigraded_basis(u - a, v - b) {
            let row = sparse_row(&g.shift(&m.to_exponent_vector()), &columns)?;
            stored += row.len();
            if stored > config.cell_entry_cap {
                return Err(Error::CellBudget {
                    u,
                    v,
                    reason: format!(
                        "spanning matrix exceeds {} stored entries",
                        config.cell_entry_cap
                    ),
                });
            }
            rows.push(row);
        }
    }
    let matrix = RationalMatrix::from_sparse_rows(ncols, rows);
    let rank = engine.rank(&matrix)? as u64;
    Ok(ncols as u64 - rank)
}

fn minimalize(gens: Vec<BiMonomial>) -> Vec<BiMonomial> {
    let mut out: Vec<BiMonomial> = Vec::new();
    for g in gens {
        if out.iter().any(|h| h.divides(&g)) {
            continue;
        }
        out.retain(|h| !g.divides(h));
        out.push(g);
    }
    out
}

fn monomial_quotient_count(
    ring: &BigradedRing,
    gens: &[BiMonomial],
    u: i64,
    v: i64,
) -> Result<u64> {
    // Inclusion-exclusion: monomials divisible by lcm(S) form a shifted copy
    // of the full component.
    let mut total = ring.basis_count(u, v);
    for mask in 1u32..(1 << gens.len()) {
        let mut lcm: Option<BiMonomial> = None;
        for (j, g) in gens.iter().enumerate() {
            if mask & (1 << j) != 0 {
                lcm = Some(match lcm {
                    None => g.clone(),
                    Some(l) => l.lcm(g),
                });
            }
        }
        let lcm = lcm.expect("nonempty mask");
        let (a, b) = lcm.bidegree(&ring.degrees);
        let piece = ring.basis_count(u - a, v - b);
        if mask.count_ones() % 2 == 1 {
            total -= piece;
        } else {
            total += piece;
        }
    }
    to_u64(total)
}

fn to_u64(x: num::BigInt) -> Result<u64> {
    num::ToPrimitive::to_u64(&x)
        .ok_or_else(|| Error::Internal("dimension does not fit in u64".into()))
}

/// Hilbert function of a graded quotient A/(gens) at degree `u`, with the
/// combinatorial convention `H = 0` for `u < 0`.
pub fn graded_quotient_hilbert(
    n: usize,
    generators: &[SparsePolynomial],
    u: i64,
    engine: &mut RankEngine,
    config: &OracleConfig,
) -> Result<u64> {
    if u < 0 {
        return Ok(0);
    }
    let ambient = hilbert_poly_ring(n, u);
    if generators.is_empty() {
        return Ok(ambient);
    }
    for g in generators {
        if g.num_vars() != n {
            return Err(Error::VariableMismatch(g.num_vars(), n));
        }
        if g.homogeneous_degree().is_none() {
            return Err(Error::InvalidPresentation(
                "graded quotient generators must be nonzero and homogeneous".into(),
            ));
        }
    }

    // Principal ideal in a domain: multiplication by g is injective, so the
    // span of {g*m} has the full dimension of the complementary component.
    if generators.len() == 1 {
        let deg = generators[0].homogeneous_degree().expect("validated");
        return Ok(ambient - hilbert_poly_ring(n, u - deg));
    }

    if generators.iter().all(|g| g.as_monomial().is_some()) {
        let gens: Vec<ExponentVector> = generators
            .iter()
            .map(|g| g.as_monomial().expect("checked monomial").0.clone())
            .collect();
        let gens = minimalize_graded(gens);
        if gens.len() <= 16 {
            return graded_monomial_count(n, &gens, u);
        }
    }

    let columns: HashMap<ExponentVector, usize> = monomials_of_degree(n, u)
        .into_iter()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let ncols = columns.len();
    let mut rows = Vec::new();
    let mut stored = 0usize;
    for g in generators {
        let deg = g.homogeneous_degree().expect("validated");
        for m in monomials_of_degree(n, u - deg) {
            let row = sparse_row(&g.shift(&m), &columns)?;
            stored += row.len();
            if stored > config.cell_entry_cap {
                return Err(Error::CellBudget {
                    u,
                    v: 0,
                    reason: format!(
                        "spanning matrix exceeds {} stored entries",
                        config.cell_entry_cap
                    ),
                });
            }
            rows.push(row);
        }
    }
    let matrix = RationalMatrix::from_sparse_rows(ncols, rows);
    let rank = engine.rank(&matrix)? as u64;
    Ok(ambient - rank)
}

fn minimalize_graded(gens: Vec<ExponentVector>) -> Vec<ExponentVector> {
    let mut out: Vec<ExponentVector> = Vec::new();
    for g in gens {
        if out.iter().any(|h| h.divides(&g)) {
            continue;
        }
        out.retain(|h| !g.divides(h));
        out.push(g);
    }
    out
}

fn graded_monomial_count(n: usize, gens: &[ExponentVector], u: i64) -> Result<u64> {
    let nn = n as i64;
    let mut total = num::BigInt::from(hilbert_poly_ring(n, u));
    for mask in 1u32..(1 << gens.len()) {
        let mut lcm: Option<ExponentVector> = None;
        for (j, g) in gens.iter().enumerate() {
            if mask & (1 << j) != 0 {
                lcm = Some(match lcm {
                    None => g.clone(),
                    Some(l) => l.lcm(g),
                });
            }
        }
        let deg = lcm.expect("nonempty mask").total_degree();
        let piece = crate::combin::binomial(u - deg + nn - 1, nn - 1);
        if mask.count_ones() % 2 == 1 {
            total -= piece;
        } else {
            total += piece;
        }
    }
    to_u64(total)
}

/// Dispatches on the presentation kind.
pub fn hilbert(
    pres: &AlgebraPresentation,
    u: i64,
    v: i64,
    engine: &mut RankEngine,
    config: &OracleConfig,
) -> Result<u64> {
    match pres {
        AlgebraPresentation::Rees(p) => rees_hilbert(p, u, v, engine, config),
        AlgebraPresentation::Quotient(p) => quotient_bigraded_hilbert(p, u, v, engine, config),
    }
}

/// How a table cell was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellMethod {
    Counting,
    Rank,
    Decomposition,
}

impl CellMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            CellMethod::Counting => "counting",
            CellMethod::Rank => "rank",
            CellMethod::Decomposition => "decomposition",
        }
    }
}

#[derive(Debug, Clone)]
pub struct TableCell {
    pub dim: u64,
    pub method: CellMethod,
}

#[derive(Debug, Clone)]
pub struct SkippedCell {
    pub u: i64,
    pub v: i64,
    pub reason: String,
}

/// Rectangular table of Hilbert function values with per-cell provenance.
/// Cells whose budget was exceeded are recorded as skipped, never guessed.
#[derive(Debug, Clone)]
pub struct HilbertTable {
    pub label: String,
    pub cells: BTreeMap<(i64, i64), TableCell>,
    pub skipped: Vec<SkippedCell>,
}

impl HilbertTable {
    pub fn get(&self, u: i64, v: i64) -> Option<u64> {
        self.cells.get(&(u, v)).map(|c| c.dim)
    }

    /// Fills the rectangle from an arbitrary cell source.
    pub fn from_source<F>(
        label: impl Into<String>,
        u_max: i64,
        v_max: i64,
        method: CellMethod,
        mut source: F,
    ) -> Result<HilbertTable>
    where
        F: FnMut(i64, i64) -> Result<u64>,
    {
        let mut cells = BTreeMap::new();
        let mut skipped = Vec::new();
        for u in 0..=u_max {
            for v in 0..=v_max {
                match source(u, v) {
                    Ok(dim) => {
                        cells.insert((u, v), TableCell { dim, method });
                    }
                    Err(Error::CellBudget { reason, .. }) => {
                        skipped.push(SkippedCell { u, v, reason });
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(HilbertTable {
            label: label.into(),
            cells,
            skipped,
        })
    }
}

/// Cell-complete table for a presentation over `[0,u_max] x [0,v_max]`.
pub fn hilbert_table(
    pres: &AlgebraPresentation,
    u_max: i64,
    v_max: i64,
    engine: &mut RankEngine,
    config: &OracleConfig,
) -> Result<HilbertTable> {
    let monomial = match pres {
        AlgebraPresentation::Rees(p) => p.generators.iter().all(|g| g.as_monomial().is_some()),
        AlgebraPresentation::Quotient(p) => {
            p.generators.iter().all(|g| g.as_monomial().is_some())
        }
    };
    let method = if monomial {
        CellMethod::Counting
    } else {
        CellMethod::Rank
    };
    let mut table = HilbertTable::from_source(pres.label(), u_max, v_max, method, |u, v| {
        hilbert(pres, u, v, engine, config)
    })?;
    // The v = 0 row of a Rees table is a plain binomial count.
    if let AlgebraPresentation::Rees(_) = pres {
        for u in 0..=u_max {
            if let Some(cell) = table.cells.get_mut(&(u, 0)) {
                cell.method = CellMethod::Counting;
            }
        }
    }
    Ok(table)
}

//! Sparse multivariate polynomial arithmetic over exact rationals, and
//! enumeration of graded / bigraded monomial bases.
//!
//! The canonical monomial order is graded lexicographic: lower total degree
//! first, and within a degree the lexicographically largest exponent vector
//! first (for two variables, degree 3 runs x^3, x^2 y, x y^2, y^3). All
//! enumeration below yields monomials in this order, which fixes the row and
//! column layout of every spanning-set matrix downstream.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num::{BigInt, BigRational, One, Zero};

use crate::combin::{binomial, compositions};
use crate::{Error, Result};

/// Exponent vector of a monomial, one entry per ambient variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(exps: Vec<u32>) -> Self {
        ExponentVector(exps)
    }

    pub fn zeros(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    /// Product of monomials: entrywise sum of exponents.
    pub fn times(&self, other: &ExponentVector) -> ExponentVector {
        debug_assert_eq!(self.len(), other.len());
        ExponentVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn divides(&self, other: &ExponentVector) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &ExponentVector) -> ExponentVector {
        debug_assert_eq!(self.len(), other.len());
        ExponentVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    /// Splits into a length-`n` front part and the remaining tail.
    pub fn split(&self, n: usize) -> (ExponentVector, ExponentVector) {
        (
            ExponentVector(self.0[..n].to_vec()),
            ExponentVector(self.0[n..].to_vec()),
        )
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            // Within a degree, lexicographically larger vectors come first.
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All exponent vectors of length `n` with entry sum `u`, in canonical order.
/// The count is `C(u+n-1, n-1)`.
pub fn monomials_of_degree(n: usize, u: i64) -> Vec<ExponentVector> {
    compositions(u, n)
        .map(|c| ExponentVector(c.into_iter().map(|e| e as u32).collect()))
        .collect()
}

/// Monomial of a bigraded polynomial ring: an x-part of length `n` and a
/// y-part of length `r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BiMonomial {
    pub x_part: ExponentVector,
    pub y_part: ExponentVector,
}

impl BiMonomial {
    /// Bidegree against the ambient degree vector `d`:
    /// `(|x| + sum d_j * y_j, |y|)`.
    pub fn bidegree(&self, degrees: &[i64]) -> (i64, i64) {
        let x_weight: i64 = self.x_part.total_degree()
            + self
                .y_part
                .exponents()
                .iter()
                .zip(degrees)
                .map(|(&b, &d)| b as i64 * d)
                .sum::<i64>();
        (x_weight, self.y_part.total_degree())
    }

    pub fn divides(&self, other: &BiMonomial) -> bool {
        self.x_part.divides(&other.x_part) && self.y_part.divides(&other.y_part)
    }

    pub fn lcm(&self, other: &BiMonomial) -> BiMonomial {
        BiMonomial {
            x_part: self.x_part.lcm(&other.x_part),
            y_part: self.y_part.lcm(&other.y_part),
        }
    }

    /// Concatenated exponent vector over the n+r ambient variables.
    pub fn to_exponent_vector(&self) -> ExponentVector {
        let mut exps = self.x_part.exponents().to_vec();
        exps.extend_from_slice(self.y_part.exponents());
        ExponentVector(exps)
    }
}

/// Ambient data of a bigraded polynomial ring `k[X_1..X_n, Y_1..Y_r]` with
/// `bideg X_i = (1,0)` and `bideg Y_j = (d_j, 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigradedRing {
    pub n: usize,
    pub r: usize,
    pub degrees: Vec<i64>,
}

impl BigradedRing {
    pub fn new(n: usize, degrees: Vec<i64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPresentation("n must be at least 1".into()));
        }
        if degrees.is_empty() {
            return Err(Error::InvalidPresentation(
                "at least one y-degree is required".into(),
            ));
        }
        if degrees.iter().any(|&d| d < 0) {
            return Err(Error::InvalidPresentation(
                "y-degrees must be non-negative".into(),
            ));
        }
        Ok(BigradedRing {
            n,
            r: degrees.len(),
            degrees,
        })
    }

    pub fn d_max(&self) -> i64 {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn num_vars(&self) -> usize {
        self.n + self.r
    }

    /// Monomial basis of the bidegree-(u,v) component, in canonical order:
    /// y-compositions first, x-monomials within each.
    pub fn bigraded_basis(&self, u: i64, v: i64) -> Vec<BiMonomial> {
        let mut basis = Vec::new();
        if u < 0 || v < 0 {
            return basis;
        }
        for alpha in compositions(v, self.r) {
            let weight: i64 = alpha.iter().zip(&self.degrees).map(|(&a, &d)| a * d).sum();
            let x_degree = u - weight;
            if x_degree < 0 {
                continue;
            }
            let y_part = ExponentVector(alpha.into_iter().map(|a| a as u32).collect());
            for x_part in monomials_of_degree(self.n, x_degree) {
                basis.push(BiMonomial {
                    x_part,
                    y_part: y_part.clone(),
                });
            }
        }
        basis
    }

    /// `dim_k S_(u,v)` without materializing the basis.
    pub fn basis_count(&self, u: i64, v: i64) -> BigInt {
        if u < 0 || v < 0 {
            return BigInt::zero();
        }
        let mut count = BigInt::zero();
        for alpha in compositions(v, self.r) {
            let weight: i64 = alpha.iter().zip(&self.degrees).map(|(&a, &d)| a * d).sum();
            count += binomial(u - weight + self.n as i64 - 1, self.n as i64 - 1);
        }
        count
    }
}

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept in a `BTreeMap` under the canonical monomial order, so
/// iteration is deterministic; no zero coefficient is ever stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePolynomial {
    num_vars: usize,
    terms: BTreeMap<ExponentVector, BigRational>,
}

impl SparsePolynomial {
    pub fn zero(num_vars: usize) -> Self {
        SparsePolynomial {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(num_vars);
        p.add_term(ExponentVector::zeros(num_vars), c);
        p
    }

    pub fn one(num_vars: usize) -> Self {
        Self::constant(num_vars, BigRational::one())
    }

    pub fn variable(num_vars: usize, index: usize) -> Self {
        let mut exps = vec![0; num_vars];
        exps[index] = 1;
        let mut p = Self::zero(num_vars);
        p.add_term(ExponentVector(exps), BigRational::one());
        p
    }

    pub fn monomial(exps: ExponentVector, c: BigRational) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &BigRational)> {
        self.terms.iter()
    }

    /// Adds `c * x^exps` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, exps: ExponentVector, c: BigRational) {
        debug_assert_eq!(exps.len(), self.num_vars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &SparsePolynomial) -> Result<SparsePolynomial> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SparsePolynomial) -> Result<SparsePolynomial> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SparsePolynomial {
        SparsePolynomial {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> SparsePolynomial {
        if c.is_zero() {
            return Self::zero(self.num_vars);
        }
        SparsePolynomial {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    /// Exact product. Bilinear; degree-additive on homogeneous inputs.
    pub fn mul(&self, other: &SparsePolynomial) -> Result<SparsePolynomial> {
        self.check_vars(other)?;
        let mut out = Self::zero(self.num_vars);
        for (m1, c1) in self.terms() {
            for (m2, c2) in other.terms() {
                out.add_term(m1.times(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    /// Multiplies by a single monomial (shifts every exponent vector).
    pub fn shift(&self, m: &ExponentVector) -> SparsePolynomial {
        SparsePolynomial {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.times(m), c.clone()))
                .collect(),
        }
    }

    /// Common degree of all terms, or `None` for the zero polynomial and for
    /// inhomogeneous ones.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut terms = self.terms.keys();
        let deg = terms.next()?.total_degree();
        terms.all(|m| m.total_degree() == deg).then_some(deg)
    }

    /// Common bidegree of all terms of a polynomial in n+r variables, with
    /// x-weights 1 and y-weights (d_j, 1). `None` if not bihomogeneous.
    pub fn bidegree(&self, n: usize, degrees: &[i64]) -> Option<(i64, i64)> {
        let mut terms = self.terms.keys();
        let first = terms.next()?;
        let bideg = |m: &ExponentVector| {
            let (x, y) = m.split(n);
            BiMonomial { x_part: x, y_part: y }.bidegree(degrees)
        };
        let d0 = bideg(first);
        terms.all(|m| bideg(m) == d0).then_some(d0)
    }

    /// The single term, when there is exactly one.
    pub fn as_monomial(&self) -> Option<(&ExponentVector, &BigRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Embeds an n-variable polynomial into a larger ring, x-variables first.
    pub fn embed(&self, total_vars: usize) -> SparsePolynomial {
        debug_assert!(total_vars >= self.num_vars);
        SparsePolynomial {
            num_vars: total_vars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut exps = m.exponents().to_vec();
                    exps.resize(total_vars, 0);
                    (ExponentVector(exps), c.clone())
                })
                .collect(),
        }
    }

    fn check_vars(&self, other: &SparsePolynomial) -> Result<()> {
        if self.num_vars != other.num_vars {
            return Err(Error::VariableMismatch(self.num_vars, other.num_vars));
        }
        Ok(())
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

    #[test]
    fn monomial_enumeration_order() {
        let ms = monomials_of_degree(2, 3);
        let exps: Vec<Vec<u32>> = ms.iter().map(|m| m.exponents().to_vec()).collect();
        assert_eq!(exps, vec![vec![3, 0], vec![2, 1], vec![1, 2], vec![0, 3]]);
        assert_eq!(monomials_of_degree(3, 0).len(), 1);
        assert_eq!(monomials_of_degree(3, 4).len(), 15);
        assert!(monomials_of_degree(0, 2).is_empty());
    }

    #[test]
    fn bigraded_basis_examples() {
        // k[X;Y,Z] with bidegrees (1,0), (0,1), (1,1): the component (2,2)
        // has dimension min(2,2)+1 = 3.
        let ring = BigradedRing::new(1, vec![0, 1]).unwrap();
        assert_eq!(ring.bigraded_basis(2, 2).len(), 3);
        for u in 0..=12 {
            for v in 0..=12 {
                assert_eq!(
                    ring.bigraded_basis(u, v).len() as i64,
                    u.min(v) + 1,
                    "({u},{v})"
                );
                assert_eq!(ring.basis_count(u, v), BigInt::from(u.min(v) + 1));
            }
        }

        // Infeasible constraint: u < d*v forces a negative x-degree.
        let line = BigradedRing::new(1, vec![1]).unwrap();
        assert!(line.bigraded_basis(3, 5).is_empty());

        // n=2, r=2, d=(1,2), point (2,1): alpha=(1,0) gives 2 monomials,
        // alpha=(0,1) gives 1.
        let ring = BigradedRing::new(2, vec![1, 2]).unwrap();
        assert_eq!(ring.bigraded_basis(2, 1).len(), 3);
    }

    #[test]
    fn product_examples() {
        let x = SparsePolynomial::variable(2, 0);
        let y = SparsePolynomial::variable(2, 1);
        let sum = x.add(&y).unwrap();
        let diff = x.sub(&y).unwrap();
        let prod = sum.mul(&diff).unwrap();
        let mut expect = SparsePolynomial::zero(2);
        expect.add_term(ExponentVector::new(vec![2, 0]), rat(1));
        expect.add_term(ExponentVector::new(vec![0, 2]), rat(-1));
        assert_eq!(prod, expect);

        let one = SparsePolynomial::one(2);
        assert_eq!(sum.mul(&one).unwrap(), sum);

        let x2 = SparsePolynomial::monomial(ExponentVector::new(vec![2, 0, 0]), rat(1));
        let y3 = SparsePolynomial::monomial(ExponentVector::new(vec![0, 3, 0]), rat(1));
        let p = x2.mul(&y3).unwrap();
        assert_eq!(
            p.as_monomial().unwrap().0,
            &ExponentVector::new(vec![2, 3, 0])
        );
    }

    #[test]
    fn var_mismatch_is_error() {
        let p = SparsePolynomial::variable(2, 0);
        let q = SparsePolynomial::variable(3, 0);
        assert!(matches!(p.mul(&q), Err(Error::VariableMismatch(2, 3))));
    }

    #[test]
    fn bidegree_detection() {
        // x1*y1 in k[x1,x2;y1] with d=(1): bidegree (2,1).
        let mut p = SparsePolynomial::zero(3);
        p.add_term(ExponentVector::new(vec![1, 0, 1]), rat(1));
        assert_eq!(p.bidegree(2, &[1]), Some((2, 1)));
        // x1 + y1 is not bihomogeneous.
        let mut q = SparsePolynomial::zero(3);
        q.add_term(ExponentVector::new(vec![1, 0, 0]), rat(1));
        q.add_term(ExponentVector::new(vec![0, 0, 1]), rat(1));
        assert_eq!(q.bidegree(2, &[1]), None);
    }

    fn arb_poly(num_vars: usize) -> impl Strategy<Value = SparsePolynomial> {
        proptest::collection::vec(
            (
                proptest::collection::vec(0u32..4, num_vars),
                -4i64..5,
            ),
            0..5,
        )
        .prop_map(move |terms| {
            let mut p = SparsePolynomial::zero(num_vars);
            for (exps, c) in terms {
                p.add_term(ExponentVector::new(exps), rat(c));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn monomial_count_is_binomial(n in 1usize..5, u in 0i64..9) {
            let count = monomials_of_degree(n, u).len();
            prop_assert_eq!(
                BigInt::from(count),
                binomial(u + n as i64 - 1, n as i64 - 1)
            );
        }

        #[test]
        fn mul_commutes(p in arb_poly(2), q in arb_poly(2)) {
            prop_assert_eq!(p.mul(&q).unwrap(), q.mul(&p).unwrap());
        }

        #[test]
        fn mul_associates(p in arb_poly(2), q in arb_poly(2), r in arb_poly(2)) {
            let lhs = p.mul(&q).unwrap().mul(&r).unwrap();
            let rhs = p.mul(&q.mul(&r).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn mul_distributes(p in arb_poly(2), q in arb_poly(2), r in arb_poly(2)) {
            let lhs = p.mul(&q.add(&r).unwrap()).unwrap();
            let rhs = p.mul(&q).unwrap().add(&p.mul(&r).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn homogeneous_product_degree(a in 0i64..4, b in 0i64..4) {
            // Sum over all monomials of fixed degree is homogeneous.
            let p = monomials_of_degree(2, a).into_iter().fold(
                SparsePolynomial::zero(2),
                |mut acc, m| { acc.add_term(m, rat(1)); acc },
            );
            let q = monomials_of_degree(2, b).into_iter().fold(
                SparsePolynomial::zero(2),
                |mut acc, m| { acc.add_term(m, rat(1)); acc },
            );
            let prod = p.mul(&q).unwrap();
            prop_assert_eq!(prod.homogeneous_degree(), Some(a + b));
        }
    }
}

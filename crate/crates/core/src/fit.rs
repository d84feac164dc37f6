//! Hilbert polynomial detection by exact interpolation with stabilization
//! search, and extraction of degrees and mixed multiplicities.
//!
//! The validity region `{u >= d*v + u0, v >= v0}` becomes a quadrant in the
//! coordinates `(w, v)` with `w = u - d*v`, so collocation runs on a
//! rectangular Newton tensor grid, which is always unisolvent. The shift is
//! a unimodular change of coordinates and preserves total degree.

use std::collections::BTreeMap;

use num::{BigInt, BigRational, One, Zero};

use crate::combin::{binomial_poly, factorial};
use crate::linalg::RationalMatrix;
use crate::{Error, Result};

/// The region `{(u,v) : u >= d_max*v + u0, v >= v0}` on which a fitted
/// polynomial has been validated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FitRegion {
    pub d_max: i64,
    pub u0: i64,
    pub v0: i64,
}

impl FitRegion {
    pub fn contains(&self, u: i64, v: i64) -> bool {
        u >= self.d_max * v + self.u0 && v >= self.v0
    }
}

/// Bivariate polynomial `sum c_{ij} C(w,i) C(v,j)` with `w = u - d_max*v`,
/// exact rational coefficients. Binomials are evaluated in the polynomial
/// convention; once a fit over integer data has stabilized all `c_{ij}` are
/// integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialBasisPolynomial {
    pub d_max: i64,
    coeffs: BTreeMap<(usize, usize), BigRational>,
}

impl BinomialBasisPolynomial {
    pub fn new(d_max: i64, coeffs: BTreeMap<(usize, usize), BigRational>) -> Self {
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        BinomialBasisPolynomial { d_max, coeffs }
    }

    pub fn coeffs(&self) -> &BTreeMap<(usize, usize), BigRational> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, u: i64, v: i64) -> BigRational {
        let w = u - self.d_max * v;
        let mut acc = BigRational::zero();
        for (&(i, j), c) in &self.coeffs {
            let b = binomial_poly(w, i) * binomial_poly(v, j);
            acc += c * BigRational::from_integer(b);
        }
        acc
    }

    /// Expands into the power basis over the original coordinates `(u, v)`.
    pub fn to_power_basis(&self) -> PowerPolynomial {
        let mut acc = PowerPolynomial::zero();
        for (&(i, j), c) in &self.coeffs {
            // C(w, i) as a polynomial in w, then w = u - d*v.
            let w_poly = newton_basis_univariate(i);
            let mut term = PowerPolynomial::zero();
            let mut shift_pow = PowerPolynomial::one();
            for coeff in w_poly {
                term.add_scaled(&shift_pow, &coeff);
                shift_pow = shift_pow.times_linear(1, -self.d_max);
            }
            // Multiply by C(v, j) expanded in v.
            let v_poly = newton_basis_univariate(j);
            let mut full = PowerPolynomial::zero();
            for (jv, coeff) in v_poly.iter().enumerate() {
                let shifted = term.times_v_power(jv);
                full.add_scaled(&shifted, coeff);
            }
            acc.add_scaled(&full, c);
        }
        acc
    }
}

/// Coefficients of `C(t, k)` in the power basis `1, t, t^2, ...`.
fn newton_basis_univariate(k: usize) -> Vec<BigRational> {
    // C(t, k) = t (t-1) ... (t-k+1) / k!
    let mut poly = vec![BigRational::one()];
    for m in 0..k {
        let mut next = vec![BigRational::zero(); poly.len() + 1];
        for (idx, c) in poly.iter().enumerate() {
            next[idx + 1] += c;
            next[idx] -= c * BigRational::from_integer(BigInt::from(m));
        }
        poly = next;
    }
    let kf = BigRational::from_integer(factorial(k));
    poly.into_iter().map(|c| c / &kf).collect()
}

/// Dense-keyed bivariate polynomial in the power basis, coefficient of
/// `u^i v^j` at key `(i, j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerPolynomial {
    coeffs: BTreeMap<(usize, usize), BigRational>,
}

impl PowerPolynomial {
    pub fn zero() -> Self {
        PowerPolynomial {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert((0, 0), BigRational::one());
        PowerPolynomial { coeffs }
    }

    pub fn coeff(&self, i: usize, j: usize) -> BigRational {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &BTreeMap<(usize, usize), BigRational> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Total degree; -1 for the zero polynomial.
    pub fn total_degree(&self) -> i64 {
        self.coeffs
            .keys()
            .map(|&(i, j)| (i + j) as i64)
            .max()
            .unwrap_or(-1)
    }

    /// Degree in `u`; -1 for the zero polynomial.
    pub fn degree_u(&self) -> i64 {
        self.coeffs.keys().map(|&(i, _)| i as i64).max().unwrap_or(-1)
    }

    pub fn eval(&self, u: i64, v: i64) -> BigRational {
        let mut acc = BigRational::zero();
        for (&(i, j), c) in &self.coeffs {
            let mut term = c.clone();
            for _ in 0..i {
                term *= BigRational::from_integer(BigInt::from(u));
            }
            for _ in 0..j {
                term *= BigRational::from_integer(BigInt::from(v));
            }
            acc += term;
        }
        acc
    }

    fn insert_add(&mut self, key: (usize, usize), val: BigRational) {
        if val.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(key).or_insert_with(BigRational::zero);
        *entry += val;
        if entry.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    fn add_scaled(&mut self, other: &PowerPolynomial, scale: &BigRational) {
        if scale.is_zero() {
            return;
        }
        for (&key, c) in &other.coeffs {
            self.insert_add(key, c * scale);
        }
    }

    /// Multiplies by `a*u + b*v`.
    fn times_linear(&self, a: i64, b: i64) -> PowerPolynomial {
        let mut out = PowerPolynomial::zero();
        let ar = BigRational::from_integer(BigInt::from(a));
        let br = BigRational::from_integer(BigInt::from(b));
        for (&(i, j), c) in &self.coeffs {
            out.insert_add((i + 1, j), c * &ar);
            out.insert_add((i, j + 1), c * &br);
        }
        out
    }

    fn times_v_power(&self, k: usize) -> PowerPolynomial {
        let mut out = PowerPolynomial::zero();
        for (&(i, j), c) in &self.coeffs {
            out.insert_add((i, j + k), c.clone());
        }
        out
    }
}

/// Total degree, u-degree and the mixed multiplicities `e_0..e_s` read off
/// the total-degree-`s` part of a Hilbert polynomial. `s = -1` encodes the
/// zero polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedMultReport {
    pub s: i64,
    pub deg_u: i64,
    pub d_max: i64,
    /// `e_i` for i = 0..s.
    pub e: Vec<BigInt>,
    /// Largest index with `e_i != 0`; -1 if all vanish.
    pub rho: i64,
}

impl MixedMultReport {
    pub fn new(s: i64, deg_u: i64, d_max: i64, e: Vec<BigInt>) -> Self {
        let rho = e
            .iter()
            .enumerate()
            .rev()
            .find(|(_, x)| !x.is_zero())
            .map(|(i, _)| i as i64)
            .unwrap_or(-1);
        MixedMultReport {
            s,
            deg_u,
            d_max,
            e,
            rho,
        }
    }

    /// `e_s`, the top mixed multiplicity.
    pub fn e_top(&self) -> Option<&BigInt> {
        self.e.last()
    }
}

/// Fits a polynomial of total degree at most `degree_bound` to the cell
/// source on the region `u >= d_max*v + u0, v >= v0`, searching offsets by
/// alternating increments until a disjoint validation margin of
/// `(degree_bound+2)^2` further region points confirms the fit.
pub fn fit_bivariate<F>(
    mut source: F,
    d_max: i64,
    degree_bound: usize,
    budget: usize,
) -> Result<(BinomialBasisPolynomial, FitRegion)>
where
    F: FnMut(i64, i64) -> Result<u64>,
{
    let mut u0 = 0i64;
    let mut v0 = 0i64;
    let mut mismatches = Vec::new();
    for attempt in 0..=budget {
        match try_fit(&mut source, d_max, degree_bound, u0, v0)? {
            FitAttempt::Validated(poly) => {
                return Ok((poly, FitRegion { d_max, u0, v0 }));
            }
            FitAttempt::Mismatch(count) => {
                mismatches.push(format!("(u0={u0},v0={v0}): {count} margin mismatches"));
                if attempt % 2 == 0 {
                    u0 += 1;
                } else {
                    v0 += 1;
                }
            }
        }
    }
    // Two distinct failure modes are possible and indistinguishable from
    // finite data: the function may not yet have stabilized, or it may be
    // polynomial only of a degree above the bound.
    Err(Error::Stabilization(format!(
        "degree bound {degree_bound}, budget {budget} exhausted; offsets tried up to \
         (u0={u0},v0={v0}); either the table is not yet polynomial on the region or its \
         degree exceeds the bound. Trail: {}",
        mismatches.join("; ")
    )))
}

enum FitAttempt {
    Validated(BinomialBasisPolynomial),
    Mismatch(usize),
}

fn try_fit<F>(
    source: &mut F,
    d_max: i64,
    degree_bound: usize,
    u0: i64,
    v0: i64,
) -> Result<FitAttempt>
where
    F: FnMut(i64, i64) -> Result<u64>,
{
    let dd = degree_bound;
    let size = dd + 1;

    // Collocation values H(w + d*v, v) on the rectangular Newton grid.
    let mut values = vec![vec![BigRational::zero(); size]; size];
    for (k, row) in values.iter_mut().enumerate() {
        let w = u0 + k as i64;
        for (l, slot) in row.iter_mut().enumerate() {
            let v = v0 + l as i64;
            let h = source(w + d_max * v, v)?;
            *slot = BigRational::from_integer(BigInt::from(h));
        }
    }

    // Tensor solve: first along w for every sampled v, then along v.
    let w_system = collocation_matrix(u0, size);
    let mut a = vec![vec![BigRational::zero(); size]; size]; // a[i][l]
    for l in 0..size {
        let col: Vec<BigRational> = (0..size).map(|k| values[k][l].clone()).collect();
        let sol = w_system.solve_square(&col)?;
        for (i, x) in sol.into_iter().enumerate() {
            a[i][l] = x;
        }
    }
    let v_system = collocation_matrix(v0, size);
    let mut coeffs = BTreeMap::new();
    for (i, row) in a.iter().enumerate() {
        let sol = v_system.solve_square(row)?;
        for (j, c) in sol.into_iter().enumerate() {
            if !c.is_zero() {
                coeffs.insert((i, j), c);
            }
        }
    }
    let poly = BinomialBasisPolynomial::new(d_max, coeffs);

    // Validation on a full (dd+2)x(dd+2) grid disjoint from the collocation
    // grid: two distinct polynomials of degree <= dd cannot agree on it.
    let mut mismatch = 0usize;
    for w in u0 + dd as i64 + 1..=u0 + 2 * dd as i64 + 2 {
        for v in v0 + dd as i64 + 1..=v0 + 2 * dd as i64 + 2 {
            let u = w + d_max * v;
            let h = BigRational::from_integer(BigInt::from(source(u, v)?));
            if poly.eval(u, v) != h {
                mismatch += 1;
            }
        }
    }
    if mismatch == 0 {
        Ok(FitAttempt::Validated(poly))
    } else {
        Ok(FitAttempt::Mismatch(mismatch))
    }
}

/// Square matrix `M[k][i] = C(t0+k, i)` for the univariate Newton basis.
fn collocation_matrix(t0: i64, size: usize) -> RationalMatrix {
    let rows = (0..size)
        .map(|k| {
            (0..size)
                .map(|i| BigRational::from_integer(binomial_poly(t0 + k as i64, i)))
                .collect()
        })
        .collect();
    RationalMatrix::from_dense(rows)
}

/// Reads total degree, u-degree and the integer mixed multiplicities off a
/// validated fit by expanding to the power basis over `(u, v)`.
pub fn extract_report(p: &BinomialBasisPolynomial) -> Result<MixedMultReport> {
    let power = p.to_power_basis();
    let s = power.total_degree();
    if s < 0 {
        return Ok(MixedMultReport::new(-1, -1, p.d_max, Vec::new()));
    }
    let su = s as usize;
    let mut e = Vec::with_capacity(su + 1);
    for i in 0..=su {
        let c = power.coeff(i, su - i);
        let scaled = c * BigRational::from_integer(factorial(i) * factorial(su - i));
        if !scaled.is_integer() {
            return Err(Error::Internal(format!(
                "mixed multiplicity e_{i} is not an integer: {scaled}"
            )));
        }
        e.push(scaled.to_integer());
    }
    // With no shift the top binomial coefficients agree with the e_i.
    if p.d_max == 0 {
        for (i, ei) in e.iter().enumerate() {
            let c = p
                .coeffs()
                .get(&(i, su - i))
                .cloned()
                .unwrap_or_else(BigRational::zero);
            if &c.to_integer() != ei || !c.is_integer() {
                return Err(Error::Internal(
                    "top binomial coefficients disagree with extracted multiplicities".into(),
                ));
            }
        }
    }
    Ok(MixedMultReport::new(s, power.degree_u(), p.d_max, e))
}

/// Top coefficients `e_{i,j}` (i+j = s) of the fitted polynomial, normalized
/// by `i! j!`; integers for integer-valued polynomials.
pub fn extract_top_coefficients(p: &BinomialBasisPolynomial) -> Result<crate::closed::TopCoefficients> {
    let power = p.to_power_basis();
    let s = power.total_degree();
    let mut entries = BTreeMap::new();
    if s >= 0 {
        let su = s as usize;
        for i in 0..=su {
            let c = power.coeff(i, su - i);
            let scaled = c * BigRational::from_integer(factorial(i) * factorial(su - i));
            if !scaled.is_integer() {
                return Err(Error::Internal(format!(
                    "top coefficient e_({i},{}) is not an integer",
                    su - i
                )));
            }
            entries.insert((i as i64, (su - i) as i64), scaled.to_integer());
        }
    }
    Ok(crate::closed::TopCoefficients {
        total_degree: s,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::BigradedRing;
    use crate::linalg::{RankEngine, RankMode};
    use crate::oracle::{quotient_bigraded_hilbert, OracleConfig, QuotientPresentation};

    fn fit_quotient(
        ring: BigradedRing,
        degree_bound: usize,
    ) -> (BinomialBasisPolynomial, FitRegion) {
        let pres = QuotientPresentation::new("t", ring, vec![]).unwrap();
        let mut eng = RankEngine::new(RankMode::Auto, 3);
        let cfg = OracleConfig::default();
        let d = pres.ring.d_max();
        fit_bivariate(
            |u, v| quotient_bigraded_hilbert(&pres, u, v, &mut eng, &cfg),
            d,
            degree_bound,
            40,
        )
        .unwrap()
    }

    #[test]
    fn fits_piecewise_polyring() {
        // k[X;Y,Z]: on u >= v the function is v+1.
        let (poly, region) = fit_quotient(BigradedRing::new(1, vec![0, 1]).unwrap(), 2);
        assert_eq!(region.v0, 0);
        assert!(region.u0 >= 0);
        let one = BigRational::one();
        assert_eq!(poly.coeffs().get(&(0, 0)), Some(&one));
        assert_eq!(poly.coeffs().get(&(0, 1)), Some(&one));
        assert_eq!(poly.coeffs().len(), 2);

        let report = extract_report(&poly).unwrap();
        assert_eq!(report.s, 1);
        assert_eq!(report.deg_u, 0);
        assert_eq!(report.rho, 0);
        assert_eq!(report.e, vec![BigInt::from(1), BigInt::from(0)]);
    }

    #[test]
    fn fits_constant_source() {
        let (poly, region) = fit_bivariate(|_, _| Ok(5u64), 0, 1, 40).unwrap();
        assert_eq!((region.u0, region.v0), (0, 0));
        assert_eq!(poly.eval(17, 3), BigRational::from_integer(BigInt::from(5)));
        let report = extract_report(&poly).unwrap();
        assert_eq!(report.s, 0);
        assert_eq!(report.e, vec![BigInt::from(5)]);
    }

    #[test]
    fn extracts_v_independent_quadric() {
        // k[x,y,z;Y] with d=(0): H(u,v) = C(u+2,2), independent of v.
        let (poly, _) = fit_quotient(BigradedRing::new(3, vec![0]).unwrap(), 2);
        let report = extract_report(&poly).unwrap();
        assert_eq!(report.s, 2);
        assert_eq!(report.deg_u, 2);
        assert_eq!(report.rho, 2);
        assert_eq!(
            report.e,
            vec![BigInt::from(0), BigInt::from(0), BigInt::from(1)]
        );
    }

    #[test]
    fn zero_source_gives_empty_report() {
        let (poly, _) = fit_bivariate(|_, _| Ok(0u64), 2, 1, 40).unwrap();
        assert!(poly.is_zero());
        let report = extract_report(&poly).unwrap();
        assert_eq!(report.s, -1);
        assert_eq!(report.rho, -1);
        assert!(report.e.is_empty());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        // 2^v is not a polynomial; all offsets must fail.
        let err = fit_bivariate(|_, v| Ok(1u64 << v.min(20)), 0, 2, 6).unwrap_err();
        assert!(matches!(err, Error::Stabilization(_)));
    }

    #[test]
    fn stabilization_search_skips_transient_rows() {
        // Agrees with v+1 only for v >= 2.
        let source = |u: i64, v: i64| -> Result<u64> {
            if v < 2 {
                Ok((u + 10) as u64)
            } else {
                Ok((v + 1) as u64)
            }
        };
        let (poly, region) = fit_bivariate(source, 1, 1, 40).unwrap();
        assert!(region.v0 >= 2);
        let report = extract_report(&poly).unwrap();
        assert_eq!(report.s, 1);
        assert_eq!(report.e, vec![BigInt::from(1), BigInt::from(0)]);
    }

    #[test]
    fn degree_bound_invariance() {
        // Same source fitted at bounds D and D+1 yields identical reports.
        let ring = BigradedRing::new(2, vec![1, 2]).unwrap();
        let (p2, _) = fit_quotient(ring.clone(), 2);
        let (p3, _) = fit_quotient(ring, 3);
        assert_eq!(
            extract_report(&p2).unwrap(),
            extract_report(&p3).unwrap()
        );
    }

    #[test]
    fn power_basis_expansion_matches_eval() {
        let mut coeffs = BTreeMap::new();
        coeffs.insert((2, 1), BigRational::from_integer(BigInt::from(3)));
        coeffs.insert((0, 2), BigRational::from_integer(BigInt::from(-2)));
        coeffs.insert((1, 0), BigRational::new(BigInt::from(1), BigInt::from(2)));
        let p = BinomialBasisPolynomial::new(3, coeffs);
        let power = p.to_power_basis();
        for u in -4i64..8 {
            for v in -3i64..5 {
                assert_eq!(p.eval(u, v), power.eval(u, v), "({u},{v})");
            }
        }
    }
}

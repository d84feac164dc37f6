//! Diagonal subalgebra analysis: univariate Hilbert fitting along
//! `{(cv, ev)}` by exact forward differences, and verification of the
//! embedded-degree formula against the bivariate mixed multiplicities.

use num::{BigInt, Zero};

use crate::closed::embedded_degree;
use crate::combin::binomial_poly;
use crate::fit::MixedMultReport;
use crate::{Error, Result};

/// The diagonal `{(cv, ev) : v in N}`. Degree and multiplicity claims need
/// `c > d_max * e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiagonalSpec {
    pub c: i64,
    pub e: i64,
}

impl DiagonalSpec {
    pub fn new(c: i64, e: i64) -> Result<Self> {
        if c < 1 || e < 1 {
            return Err(Error::Hypothesis("diagonal needs positive c and e".into()));
        }
        Ok(DiagonalSpec { c, e })
    }

    pub fn admissible_for(&self, d_max: i64) -> bool {
        self.c > d_max * self.e
    }
}

/// Univariate Hilbert polynomial in the Newton basis `C(v, j)`, fitted along
/// a diagonal. The leading Newton coefficient is `degree! *` the power-basis
/// leading coefficient, i.e. the multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnivariateFit {
    pub newton_coeffs: Vec<BigInt>,
    pub degree: i64,
    pub multiplicity: BigInt,
    pub v0: i64,
}

impl UnivariateFit {
    pub fn eval(&self, v: i64) -> BigInt {
        self.newton_coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c * binomial_poly(v, j))
            .sum()
    }
}

/// Samples `H(c*v, e*v)` for `v = v0, v0+1, ...`, fits by exact forward
/// differences and validates that all differences of order `degree_bound+1`
/// vanish on a window of 4; on failure advances `v0`, up to `budget` times.
pub fn diagonal_fit<F>(
    mut source: F,
    spec: DiagonalSpec,
    degree_bound: usize,
    budget: usize,
) -> Result<UnivariateFit>
where
    F: FnMut(i64, i64) -> Result<u64>,
{
    const WINDOW: usize = 4;
    let samples_len = degree_bound + 1 + WINDOW;
    for v0 in 0..=(budget as i64) {
        let samples: Vec<BigInt> = (0..samples_len as i64)
            .map(|t| {
                let v = v0 + t;
                source(spec.c * v, spec.e * v).map(BigInt::from)
            })
            .collect::<Result<_>>()?;

        // Forward difference table rows 0..=degree_bound+1.
        let mut row = samples;
        let mut shifted_coeffs = Vec::with_capacity(degree_bound + 1);
        for _ in 0..=degree_bound {
            shifted_coeffs.push(row[0].clone());
            row = row.windows(2).map(|w| &w[1] - &w[0]).collect();
        }
        if row.iter().take(WINDOW).all(|d| d.is_zero()) {
            return Ok(finish_fit(shifted_coeffs, v0, degree_bound));
        }
    }
    Err(Error::Stabilization(format!(
        "diagonal (c={}, e={}) not polynomial of degree <= {degree_bound} within {budget} \
         offset retries",
        spec.c, spec.e
    )))
}

/// Rebases the shifted Newton fit `sum a_j C(v - v0, j)` onto the plain
/// basis `C(v, j)` by re-differencing its values at `v = 0..degree_bound`.
fn finish_fit(shifted: Vec<BigInt>, v0: i64, degree_bound: usize) -> UnivariateFit {
    let eval_shifted = |v: i64| -> BigInt {
        shifted
            .iter()
            .enumerate()
            .map(|(j, a)| a * binomial_poly(v - v0, j))
            .sum()
    };
    let mut row: Vec<BigInt> = (0..=degree_bound as i64).map(eval_shifted).collect();
    let mut coeffs = Vec::with_capacity(degree_bound + 1);
    for _ in 0..=degree_bound {
        coeffs.push(row[0].clone());
        row = row.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    while coeffs.last().map(|c: &BigInt| c.is_zero()).unwrap_or(false) {
        coeffs.pop();
    }
    let degree = coeffs.len() as i64 - 1;
    let multiplicity = coeffs.last().cloned().unwrap_or_else(BigInt::zero);
    UnivariateFit {
        newton_coeffs: coeffs,
        degree,
        multiplicity,
        v0,
    }
}

/// Side-by-side comparison of a diagonal fit with the prediction from the
/// bivariate mixed multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddedDegreeCheck {
    pub spec: DiagonalSpec,
    pub diagonal_multiplicity: BigInt,
    pub predicted_degree: BigInt,
    pub multiplicities_equal: bool,
    pub diagonal_degree: i64,
    pub expected_degree: i64,
    pub degrees_equal: bool,
}

/// Checks `fit.multiplicity = sum C(s,i) e_i c^i e^{s-i}` and
/// `fit.degree = s` for a report extracted from the same presentation.
pub fn check_embedded_degree(
    fit: &UnivariateFit,
    rep: &MixedMultReport,
    spec: DiagonalSpec,
) -> Result<EmbeddedDegreeCheck> {
    let predicted = embedded_degree(rep, spec.c, spec.e)?;
    Ok(EmbeddedDegreeCheck {
        spec,
        multiplicities_equal: fit.multiplicity == predicted,
        diagonal_multiplicity: fit.multiplicity.clone(),
        predicted_degree: predicted,
        diagonal_degree: fit.degree,
        expected_degree: rep.s,
        degrees_equal: fit.degree == rep.s,
    })
}

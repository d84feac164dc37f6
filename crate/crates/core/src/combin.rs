//! Exact combinatorial helpers: binomial coefficients in the combinatorial
//! and polynomial conventions, factorials, and iterative enumeration of
//! compositions.

use num::{BigInt, One, ToPrimitive, Zero};

use crate::{Error, Result};

/// `C(a, k)` with the combinatorial convention: 0 whenever `a < k` or `k < 0`.
pub fn binomial(a: i64, k: i64) -> BigInt {
    if k < 0 || a < k {
        return BigInt::zero();
    }
    let k = k.min(a - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for t in 0..k {
        num *= a - t;
        den *= t + 1;
    }
    num / den
}

/// Combinatorial binomial as a machine dimension count.
pub fn binomial_u64(a: i64, k: i64) -> Result<u64> {
    binomial(a, k)
        .to_u64()
        .ok_or_else(|| Error::Internal(format!("binomial({a},{k}) does not fit in u64")))
}

/// `C(t, k)` in the polynomial convention: `t(t-1)...(t-k+1)/k!`, evaluated
/// at an arbitrary integer `t`. Integer-valued also for negative `t`.
pub fn binomial_poly(t: i64, k: usize) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..k {
        num *= t - j as i64;
        den *= j as i64 + 1;
    }
    num / den
}

pub fn factorial(k: usize) -> BigInt {
    let mut f = BigInt::one();
    for t in 2..=k {
        f *= t;
    }
    f
}

/// Iterator over all sequences of `parts` non-negative integers with the
/// given sum, in canonical order: the first entry decreases, ties broken the
/// same way recursively, so `(2,0,0), (1,1,0), (1,0,1), (0,2,0), ...`.
///
/// Iterative; no recursion in the degree.
pub struct Compositions {
    next: Option<Vec<i64>>,
}

impl Iterator for Compositions {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        let cur = self.next.take()?;
        let n = cur.len();
        if n >= 2 {
            // Advance: decrement the rightmost entry left of the tail that is
            // positive, collect everything to its right (plus one) just after it.
            let mut succ = cur.clone();
            if let Some(k) = (0..n - 1).rev().find(|&k| succ[k] > 0) {
                succ[k] -= 1;
                let rest: i64 = succ[k + 1..].iter().sum::<i64>() + 1;
                for e in succ[k + 1..].iter_mut() {
                    *e = 0;
                }
                succ[k + 1] = rest;
                self.next = Some(succ);
            }
        }
        Some(cur)
    }
}

/// All compositions of `total` into `parts` non-negative parts. Empty when
/// `total < 0`; a single empty composition when `parts = 0` and `total = 0`.
pub fn compositions(total: i64, parts: usize) -> Compositions {
    let next = if total < 0 || (parts == 0 && total != 0) {
        None
    } else if parts == 0 {
        Some(Vec::new())
    } else {
        let mut first = vec![0i64; parts];
        first[0] = total;
        Some(first)
    };
    Compositions { next }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_conventions() {
        assert_eq!(binomial(6, 2), BigInt::from(15));
        assert_eq!(binomial(4, 1), BigInt::from(4));
        assert_eq!(binomial(-2, 2), BigInt::zero());
        assert_eq!(binomial(1, 3), BigInt::zero());
        // Polynomial convention disagrees at negative arguments.
        assert_eq!(binomial_poly(-1, 2), BigInt::from(1));
        assert_eq!(binomial_poly(-2, 2), BigInt::from(3));
        assert_eq!(binomial_poly(5, 2), BigInt::from(10));
        assert_eq!(binomial_poly(3, 0), BigInt::one());
    }

    #[test]
    fn composition_order() {
        let all: Vec<_> = compositions(2, 3).collect();
        assert_eq!(
            all,
            vec![
                vec![2, 0, 0],
                vec![1, 1, 0],
                vec![1, 0, 1],
                vec![0, 2, 0],
                vec![0, 1, 1],
                vec![0, 0, 2],
            ]
        );
    }

    #[test]
    fn composition_counts() {
        for parts in 1..5usize {
            for total in 0..7i64 {
                let count = compositions(total, parts).count() as i64;
                let expect = binomial(total + parts as i64 - 1, parts as i64 - 1);
                assert_eq!(BigInt::from(count), expect, "({total},{parts})");
            }
        }
        assert_eq!(compositions(0, 0).count(), 1);
        assert_eq!(compositions(3, 0).count(), 0);
        assert_eq!(compositions(-1, 2).count(), 0);
    }
}

//! Closed-form counts and recursions as exact-integer functions.
//!
//! Binomials use the generalized convention `C(m, j) = (m)_j / j!` for
//! `j >= 0` and any integer `m`, and `C(m, j) = 0` for `j < 0`. In
//! particular `C(m, 0) = 1` for negative `m`, and `C(m, j) = 0` for
//! `0 <= m < j`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::poly::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClosedFormError {
    #[error("parameters out of range: {0}")]
    OutOfRange(String),
    #[error("multiplicity type {mu:?} is inconsistent with n={n}, m={m}")]
    InconsistentType { n: usize, m: usize, mu: BTreeMap<usize, usize> },
    #[error("{0} did not evaluate to an integer")]
    NotIntegral(&'static str),
}

/// Falling factorial `(x)_a = x (x-1) ... (x-a+1)`, with `(x)_0 = 1`.
pub fn falling(x: i64, a: usize) -> BigInt {
    (0..a as i64).map(|i| BigInt::from(x - i)).product()
}

pub fn factorial(n: usize) -> BigInt {
    falling(n as i64, n)
}

/// Generalized binomial coefficient, see the module docs.
pub fn binom(m: i64, j: i64) -> BigInt {
    if j < 0 {
        return BigInt::zero();
    }
    if m >= 0 && j > m {
        return BigInt::zero();
    }
    // Use the symmetric side to keep the falling factorial short.
    let j = if m >= 0 { j.min(m - j) } else { j } as usize;
    falling(m, j) / factorial(j)
}

/// Cached Pascal triangle for repeated nonnegative lookups; falls back to
/// [`binom`] outside the cached range.
#[derive(Clone, Debug)]
pub struct BinomTable {
    rows: Vec<Vec<BigInt>>,
}

impl BinomTable {
    pub fn new(max: usize) -> Self {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(max + 1);
        for m in 0..=max {
            let mut row = vec![BigInt::one(); m + 1];
            for j in 1..m {
                row[j] = &rows[m - 1][j - 1] + &rows[m - 1][j];
            }
            rows.push(row);
        }
        BinomTable { rows }
    }

    pub fn get(&self, m: i64, j: i64) -> BigInt {
        if m >= 0 && (m as usize) < self.rows.len() {
            if j < 0 || j > m {
                return BigInt::zero();
            }
            return self.rows[m as usize][j as usize].clone();
        }
        binom(m, j)
    }
}

fn exact(r: Rational, what: &'static str) -> Result<BigInt, ClosedFormError> {
    if r.denom().is_one() {
        Ok(r.numer().clone())
    } else {
        Err(ClosedFormError::NotIntegral(what))
    }
}

fn int_div(num: BigInt, den: BigInt, what: &'static str) -> Result<BigInt, ClosedFormError> {
    let (q, r) = num.div_rem(&den);
    if r.is_zero() {
        Ok(q)
    } else {
        Err(ClosedFormError::NotIntegral(what))
    }
}

pub fn catalan(n: usize) -> BigInt {
    binom(2 * n as i64, n as i64) / BigInt::from(n + 1)
}

/// `N(n, m) = (1/m) C(n, m-1) C(n-1, m-1)`: Dyck paths of semilength `n`
/// with `m` peaks.
pub fn narayana(n: usize, m: usize) -> Result<BigInt, ClosedFormError> {
    if m < 1 || m > n {
        return Err(ClosedFormError::OutOfRange(format!("narayana({n}, {m})")));
    }
    let (n, m) = (n as i64, m as i64);
    int_div(binom(n, m - 1) * binom(n - 1, m - 1), BigInt::from(m), "narayana")
}

/// Dyck paths of semilength `n` with `m` peaks whose gap composition has
/// type `mu` (`mu[j]` parts equal to `j`): `(n)_{m-1} / prod_j mu_j!`.
pub fn kreweras(n: usize, m: usize, mu: &BTreeMap<usize, usize>) -> Result<BigInt, ClosedFormError> {
    let parts: usize = mu.values().sum();
    let weight: usize = mu.iter().map(|(j, c)| j * c).sum();
    if m == 0 || parts != m || weight != n || mu.contains_key(&0) {
        return Err(ClosedFormError::InconsistentType { n, m, mu: mu.clone() });
    }
    let den: BigInt = mu.values().map(|&c| factorial(c)).product();
    int_div(falling(n as i64, m - 1), den, "kreweras")
}

/// `C(2n-2, n-i-1) - C(2n-2, n-i-2) + C(n-2, n-i)`.
pub fn ballot_count(n: usize, i: usize) -> Result<BigInt, ClosedFormError> {
    if i > n {
        return Err(ClosedFormError::OutOfRange(format!("ballot({n}, {i})")));
    }
    let (n, i) = (n as i64, i as i64);
    Ok(binom(2 * n - 2, n - i - 1) - binom(2 * n - 2, n - i - 2) + binom(n - 2, n - i))
}

/// `e(n, i) = C(n-1, i-1)` for `n >= 1`, with `e(0, 0) = 1`.
pub fn e_count(n: usize, i: usize) -> BigInt {
    if n == 0 {
        return if i == 0 { BigInt::one() } else { BigInt::zero() };
    }
    binom(n as i64 - 1, i as i64 - 1)
}

/// `f(n, i) = C(2n-2, n-i-1) - C(2n-2, n-i-2) - C(n-2, n-i-1)`.
pub fn f_count(n: usize, i: usize) -> BigInt {
    let (n, i) = (n as i64, i as i64);
    binom(2 * n - 2, n - i - 1) - binom(2 * n - 2, n - i - 2) - binom(n - 2, n - i - 1)
}

/// Rows `0..=max_n` of f by the recursion
/// `f(n,i) = f(n-1,i-1) + 2f(n-1,i) + f(n-1,i+1) + e(n-1,i+1)` for `i >= 1`
/// and `f(n,0) = f(n-1,0) + f(n-1,1) + e(n-1,1)`, since no `u` may sit on the
/// axis. `f(0,·) = 0`.
pub fn f_table_recursive(max_n: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::zero()]];
    for n in 1..=max_n {
        let prev = &rows[n - 1];
        let at = |i: i64| -> BigInt {
            if i < 0 {
                BigInt::zero()
            } else {
                prev.get(i as usize).cloned().unwrap_or_default()
            }
        };
        let row = (0..=n as i64)
            .map(|i| {
                let level = if i == 0 { at(0) } else { at(i - 1) + 2 * at(i) };
                level + at(i + 1) + e_count(n - 1, (i + 1) as usize)
            })
            .collect();
        rows.push(row);
    }
    rows
}

/// Sums over i of e and f, both computed from the closed forms.
pub fn row_sums(n: usize) -> (BigInt, BigInt) {
    let e = (0..=n).map(|i| e_count(n, i)).sum();
    let f = (0..=n).map(|i| f_count(n, i)).sum();
    (e, f)
}

/// The printed formulas `2^(n-1)` and `C(2n-2, n-1) - 2^(n-2)`, `n >= 2`.
pub fn row_sums_formula(n: usize) -> Result<(BigInt, BigInt), ClosedFormError> {
    if n < 2 {
        return Err(ClosedFormError::OutOfRange(format!("row sums need n >= 2, got {n}")));
    }
    let two = BigInt::from(2);
    let e = num_traits::pow(two.clone(), n - 1);
    let f = binom(2 * n as i64 - 2, n as i64 - 1) - num_traits::pow(two, n - 2);
    Ok((e, f))
}

/// Number of standard Young tableaux of shape `parts`, by the hook length
/// formula.
pub fn hook_length(parts: &[usize]) -> BigInt {
    let size: usize = parts.iter().sum();
    let mut hooks = BigInt::one();
    for (r, &len) in parts.iter().enumerate() {
        for c in 0..len {
            let arm = len - c - 1;
            let leg = parts[r + 1..].iter().filter(|&&p| p > c).count();
            hooks *= arm + leg + 1;
        }
    }
    factorial(size) / hooks
}

/// `#SYT^{+k}(2 x b)` from the two-row specialization of the
/// Anderson–Chen–Tarasca formula:
/// `(1/k!) sum_c f^(k-c,c) f^(b+k-c,b+c) (b+k-c-1)_{k-c} (b+c-2)_c`.
pub fn act_count(b: usize, k: usize) -> Result<BigInt, ClosedFormError> {
    if b == 0 {
        return Err(ClosedFormError::OutOfRange("act_count needs b >= 1".into()));
    }
    let mut total = BigInt::zero();
    for c in 0..=k / 2 {
        let small = hook_length(&trim(&[k - c, c]));
        let big = hook_length(&[b + k - c, b + c]);
        total += small * big * falling((b + k - c) as i64 - 1, k - c) * falling((b + c) as i64 - 2, c);
    }
    int_div(total, factorial(k), "act_count")
}

fn trim(parts: &[usize]) -> Vec<usize> {
    parts.iter().copied().filter(|&p| p > 0).collect()
}

/// The peaks formula
/// `sum_c (k-2c+1)^2 / ((k-c+1)(b+k-c+1)) C(b+c-2, c) C(b+k-c-1, b-1) C(2b+k, b+c)`,
/// summed in exact rationals.
pub fn peaks_count(b: usize, k: usize) -> Result<BigInt, ClosedFormError> {
    if b == 0 {
        return Err(ClosedFormError::OutOfRange("peaks_count needs b >= 1".into()));
    }
    let (bi, ki) = (b as i64, k as i64);
    let mut total = Rational::zero();
    for c in 0..=ki / 2 {
        let lead = Rational::new(
            BigInt::from((ki - 2 * c + 1).pow(2)),
            BigInt::from((ki - c + 1) * (bi + ki - c + 1)),
        );
        let binoms = binom(bi + c - 2, c) * binom(bi + ki - c - 1, bi - 1) * binom(2 * bi + ki, bi + c);
        total += lead * Rational::from_integer(binoms);
    }
    exact(total, "peaks_count")
}

/// The two "more shapes" counts: `cat(n) - cat(n-1)` and
/// `cat(n) - 2 cat(n-1) + cat(n-2)`, for `n >= 2`.
pub fn more_shapes_counts(n: usize) -> Result<(BigInt, BigInt), ClosedFormError> {
    if n < 2 {
        return Err(ClosedFormError::OutOfRange(format!("more shapes need n >= 2, got {n}")));
    }
    let first = catalan(n) - catalan(n - 1);
    let second = catalan(n) - 2 * catalan(n - 1) + catalan(n - 2);
    Ok((first, second))
}

/// The alternative form `3/(n+1) C(2n-2, n)` of the first count.
pub fn more_shapes_first_alt(n: usize) -> Result<BigInt, ClosedFormError> {
    exact(
        Rational::new(3 * binom(2 * n as i64 - 2, n as i64), BigInt::from(n + 1)),
        "more_shapes_first_alt",
    )
}

//! Truncated power series in t and the path generating functions built on
//! them: the bicolored Motzkin series E, the three restricted variants, the
//! closed form via a series square root, step expectations, and the
//! bivariate peaks generating function.

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::closedform::catalan;
use crate::domain::ColoredPath;
use crate::poly::{Coefficient, Marker, MultiPoly, QPoly, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("denominator has constant term {0}, expected 1")]
    NonInvertibleDenominator(String),
    #[error("square root needs constant term 1")]
    NoSquareRoot,
    #[error("division is not exact at t^{0}")]
    DivisionNotExact(usize),
    #[error("fixed point did not settle after {0} iterations")]
    NonConvergence(usize),
    #[error("expectations are defined for n >= 2, got {0}")]
    OutOfRange(usize),
}

/// A power series in t truncated after t^order.
#[derive(Clone, Debug, PartialEq)]
pub struct TSeries<R: Coefficient> {
    coeffs: Vec<R>,
}

impl<R: Coefficient> TSeries<R> {
    pub fn zero(order: usize) -> Self {
        TSeries {
            coeffs: vec![R::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(order, R::one(), 0)
    }

    /// `c * t^exp`, which is zero when `exp > order`.
    pub fn monomial(order: usize, c: R, exp: usize) -> Self {
        let mut s = Self::zero(order);
        if exp <= order {
            s.coeffs[exp] = c;
        }
        s
    }

    /// Builds a series from leading coefficients; missing ones are zero and
    /// extra ones are dropped.
    pub fn from_coeffs(order: usize, coeffs: Vec<R>) -> Self {
        let mut s = Self::zero(order);
        for (i, c) in coeffs.into_iter().enumerate().take(order + 1) {
            s.coeffs[i] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &R {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(R::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, R::add)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, R::sub)
    }

    fn zip(&self, other: &Self, f: impl Fn(&R, &R) -> R) -> Self {
        let order = self.order().min(other.order());
        TSeries {
            coeffs: (0..=order).map(|i| f(&self.coeffs[i], &other.coeffs[i])).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = Self::zero(order);
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    out.coeffs[i + j] = out.coeffs[i + j].add(&a.mul(b));
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn map(&self, f: impl Fn(&R) -> R) -> Self {
        TSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Multiplies by t^s, keeping the truncation order.
    pub fn shift(&self, s: usize) -> Self {
        let mut out = Self::zero(self.order());
        for i in 0..=self.order() {
            if i + s <= self.order() {
                out.coeffs[i + s] = self.coeffs[i].clone();
            }
        }
        out
    }

    /// Divides by t^s, requiring the low coefficients to vanish. The result
    /// has order `order - s`.
    pub fn unshift(&self, s: usize) -> Result<Self, SeriesError> {
        if let Some(i) = (0..s.min(self.coeffs.len())).find(|&i| !self.coeffs[i].is_zero()) {
            return Err(SeriesError::DivisionNotExact(i));
        }
        Ok(TSeries {
            coeffs: self.coeffs[s..].to_vec(),
        })
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(order, self.coeffs.clone())
    }

    /// `1 / self` by geometric inversion; the constant term must be 1.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        if self.coeffs[0] != R::one() {
            return Err(SeriesError::NonInvertibleDenominator(format!("{:?}", self.coeffs[0])));
        }
        let order = self.order();
        let mut inv = Self::zero(order);
        inv.coeffs[0] = R::one();
        for n in 1..=order {
            let mut acc = R::zero();
            for i in 1..=n {
                if !self.coeffs[i].is_zero() {
                    acc = acc.add(&self.coeffs[i].mul(&inv.coeffs[n - i]));
                }
            }
            inv.coeffs[n] = R::zero().sub(&acc);
        }
        Ok(inv)
    }

    /// `self / den`, with `den` having constant term 1.
    pub fn div(&self, den: &Self) -> Result<Self, SeriesError> {
        Ok(self.mul(&den.inverse()?))
    }

    /// The square root with constant term 1, degree by degree:
    /// `s_n = (r_n - sum_{0<i<n} s_i s_{n-i}) / 2`, every halving exact.
    pub fn sqrt(&self) -> Result<Self, SeriesError> {
        if self.coeffs[0] != R::one() {
            return Err(SeriesError::NoSquareRoot);
        }
        let two = BigInt::from(2);
        let order = self.order();
        let mut s = Self::zero(order);
        s.coeffs[0] = R::one();
        for n in 1..=order {
            let mut acc = self.coeffs[n].clone();
            for i in 1..n {
                acc = acc.sub(&s.coeffs[i].mul(&s.coeffs[n - i]));
            }
            s.coeffs[n] = acc.div_int_exact(&two).ok_or(SeriesError::DivisionNotExact(n))?;
        }
        Ok(s)
    }
}

/// Handy constructors for the marker polynomials.
fn var(m: Marker) -> MultiPoly {
    MultiPoly::var(m)
}

fn ud() -> MultiPoly {
    &var(Marker::U) * &var(Marker::D)
}

/// `c * t^exp` as a series of the given order.
fn mono(order: usize, c: MultiPoly, exp: usize) -> TSeries<MultiPoly> {
    TSeries::monomial(order, c, exp)
}

/// Solves `E = 1 + (u+d) t E + U D t^2 E^2` by fixed-point iteration.
/// Every pass fixes at least one more coefficient, so the loop settles
/// within `order + 2` passes.
pub fn solve_e(order: usize) -> Result<TSeries<MultiPoly>, SeriesError> {
    let horizontal = mono(order, &var(Marker::Umber) + &var(Marker::Denim), 1);
    let arch = mono(order, ud(), 2);
    let one = TSeries::one(order);
    let mut e = one.clone();
    for _ in 0..order + 2 {
        let next = one.add(&horizontal.mul(&e)).add(&arch.mul(&e.mul(&e)));
        if next == e {
            return Ok(e);
        }
        e = next;
    }
    Err(SeriesError::NonConvergence(order + 2))
}

/// The three restricted series, in the order `(E1, E2, E12)`, from their
/// functional equations. E1 counts paths without umber steps on the axis.
/// E2 counts the paths without early denim steps that start with `U` (see
/// [`no_early_denim_series`] for the whole family). E12 counts the paths with
/// both restrictions, except the empty one.
pub fn derived_series(
    e: &TSeries<MultiPoly>,
) -> Result<(TSeries<MultiPoly>, TSeries<MultiPoly>, TSeries<MultiPoly>), SeriesError> {
    let order = e.order();
    let one = TSeries::one(order);
    let arch_e = mono(order, ud(), 2).mul(e);
    let ut = mono(order, var(Marker::Umber), 1);
    let dt = mono(order, var(Marker::Denim), 1);
    let e1 = one.div(&one.sub(&arch_e.add(&dt)))?;
    let e2 = arch_e.div(&one.sub(&arch_e.add(&ut)))?;
    let den = one.sub(&ut.add(&arch_e)).mul(&one.sub(&dt.add(&arch_e)));
    let e12 = mono(order, ud(), 2).div(&den)?;
    Ok((e1, e2, e12))
}

/// E from its closed form
/// `(1 - (u+d)t - sqrt(((u+d)t - 1)^2 - 4UDt^2)) / (2UDt^2)`.
pub fn closed_form_e(order: usize) -> Result<TSeries<MultiPoly>, SeriesError> {
    let work = order + 2;
    let h = &var(Marker::Umber) + &var(Marker::Denim);
    let lin = mono(work, h.clone(), 1).sub(&TSeries::one(work));
    let radicand = lin.mul(&lin).sub(&mono(work, ud().scale_monomial(&BigInt::from(4), [0; 4]), 2));
    let root = radicand.sqrt()?;
    let numerator = TSeries::one(work).sub(&mono(work, h, 1)).sub(&root);
    let shifted = numerator.unshift(2)?;
    let coeffs = shifted
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            c.div_int_exact(&BigInt::from(2))
                .and_then(|c| c.div_monomial([1, 1, 0, 0]))
                .ok_or(SeriesError::DivisionNotExact(i + 2))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TSeries::from_coeffs(order, coeffs))
}

/// Functional-equation residuals for `E, E1, E2, E12`; all vanish when the
/// series are correct.
#[derive(Clone, Debug)]
pub struct SeriesContext {
    pub e: TSeries<MultiPoly>,
    pub e1: TSeries<MultiPoly>,
    pub e2: TSeries<MultiPoly>,
    pub e12: TSeries<MultiPoly>,
}

impl SeriesContext {
    pub fn new(order: usize) -> Result<Self, SeriesError> {
        let e = solve_e(order)?;
        let (e1, e2, e12) = derived_series(&e)?;
        Ok(SeriesContext { e, e1, e2, e12 })
    }

    pub fn order(&self) -> usize {
        self.e.order()
    }

    pub fn get(&self, name: &str) -> Option<&TSeries<MultiPoly>> {
        match name {
            "E" => Some(&self.e),
            "E1" => Some(&self.e1),
            "E2" => Some(&self.e2),
            "E12" => Some(&self.e12),
            _ => None,
        }
    }

    /// Left minus right side of each defining equation, cleared of
    /// denominators, as `[E, E1, E2, E12]`.
    pub fn residuals(&self) -> [TSeries<MultiPoly>; 4] {
        let order = self.order();
        let one = TSeries::one(order);
        let h = mono(order, &var(Marker::Umber) + &var(Marker::Denim), 1);
        let arch = mono(order, ud(), 2);
        let arch_e = arch.mul(&self.e);
        let ut = mono(order, var(Marker::Umber), 1);
        let dt = mono(order, var(Marker::Denim), 1);
        [
            self.e.sub(&one).sub(&h.mul(&self.e)).sub(&arch_e.mul(&self.e)),
            self.e1.mul(&one.sub(&arch_e.add(&dt))).sub(&one),
            self.e2.mul(&one.sub(&arch_e.add(&ut))).sub(&arch_e),
            self.e12
                .mul(&one.sub(&ut.add(&arch_e)))
                .mul(&one.sub(&dt.add(&arch_e)))
                .sub(&arch),
        ]
    }
}

/// The generating polynomial of a set of paths by step counts.
pub fn step_polynomial<'a>(paths: impl IntoIterator<Item = &'a ColoredPath>) -> MultiPoly {
    let mut out = MultiPoly::default();
    for p in paths {
        let c = p.step_counts();
        out.add_term([c[0] as u32, c[1] as u32, c[2] as u32, c[3] as u32], BigInt::one());
    }
    out
}

/// Expected number of `marker` steps over uniform paths of length `n` in
/// the doubly restricted family, from the marker derivative of E12.
pub fn expected_steps(e12: &TSeries<MultiPoly>, n: usize, marker: Marker) -> Result<Rational, SeriesError> {
    if n < 2 || n > e12.order() {
        return Err(SeriesError::OutOfRange(n));
    }
    let num = e12.coeff(n).derivative(marker).at_ones();
    let den = e12.coeff(n).at_ones();
    debug_assert_eq!(den, catalan(n - 1));
    Ok(Rational::new(num, den))
}

/// Closed forms for the expectations, valid for `n >= 3`.
pub fn expected_columns_formula(n: usize) -> Rational {
    let n = BigInt::from(n);
    Rational::new(&n * &n + &n - 6, 4 * &n - 6)
}

pub fn expected_umber_formula(n: usize) -> Rational {
    let n = BigInt::from(n);
    Rational::new(&n * &n - 4 * &n + 6, 4 * &n - 6)
}

/// Expands `1 + z * ((1 - sqrt(1 - 4z + 4z^2 - 4qz^2)) / (2z(1 + (q-1)z)))^2`
/// to order `z^order`; entry `n` of the result is the q-polynomial
/// coefficient of z^n.
pub fn peaks_genfun(order: usize) -> Result<Vec<QPoly>, SeriesError> {
    let work = order + 1;
    let c = |coeffs: &[i64]| QPoly::from_coeffs(coeffs.iter().copied());
    let radicand = TSeries::from_coeffs(work, vec![c(&[1]), c(&[-4]), c(&[4, -4])]);
    let root = radicand.sqrt()?;
    // 1 - sqrt(R) = 2z(...), so strip one z and the factor 2.
    let numerator = TSeries::one(work).sub(&root).unshift(1)?;
    let halved = TSeries::from_coeffs(
        order,
        numerator
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, x)| x.div_int_exact(&BigInt::from(2)).ok_or(SeriesError::DivisionNotExact(i + 1)))
            .collect::<Result<Vec<_>, _>>()?,
    );
    let den = TSeries::from_coeffs(order, vec![c(&[1]), c(&[-1, 1])]);
    let g = halved.div(&den)?;
    let f = TSeries::one(order).add(&g.mul(&g).shift(1));
    Ok(f.coeffs().to_vec())
}

/// The full generating function `(1 + E2) / (1 - ut)` of paths with no
/// denim step before the first down step. The E2 equation decomposes at an
/// initial up step, so it only sees the nonempty paths starting with `U`;
/// any such path may be preceded by a run of umber steps on the axis.
pub fn no_early_denim_series(e2: &TSeries<MultiPoly>) -> Result<TSeries<MultiPoly>, SeriesError> {
    let order = e2.order();
    let one = TSeries::one(order);
    one.add(e2).div(&one.sub(&mono(order, var(Marker::Umber), 1)))
}

/// Sums every coefficient of a series at all markers 1.
pub fn at_ones(s: &TSeries<MultiPoly>) -> Vec<BigInt> {
    s.coeffs().iter().map(MultiPoly::at_ones).collect()
}

impl TSeries<MultiPoly> {
    pub fn derivative(&self, m: Marker) -> Self {
        self.map(|c| c.derivative(m))
    }

    pub fn swap(&self, a: Marker, b: Marker) -> Self {
        self.map(|c| c.swap(a, b))
    }
}

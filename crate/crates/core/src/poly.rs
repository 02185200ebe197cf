//! Exact polynomial rings: univariate q-polynomials and polynomials in the
//! four path markers U, D, u, d.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::domain::DomainError;

/// Exact rationals, always reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Operations the truncated series engine needs from a coefficient ring.
pub trait Coefficient: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn from_int(c: i64) -> Self;
    /// Divides every integer coefficient by `d`, or `None` if some
    /// coefficient is not a multiple of `d`.
    fn div_int_exact(&self, d: &BigInt) -> Option<Self>;
}

// ---------------------------------------------------------------------------
// QPoly
// ---------------------------------------------------------------------------

/// A polynomial in q with integer coefficients; `coeffs[i]` is the
/// coefficient of q^i. Never stores trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<BigInt>,
}

impl QPoly {
    pub fn from_coeffs<I, T>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let mut p = QPoly {
            coeffs: coeffs.into_iter().map(Into::into).collect(),
        };
        p.trim();
        p
    }

    pub fn monomial(exp: usize) -> Self {
        Self::term(BigInt::one(), exp)
    }

    pub fn term(c: BigInt, exp: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); exp + 1];
        coeffs[exp] = c;
        QPoly::from_coeffs(coeffs)
    }

    /// `1 + q + ... + q^(m-1)`.
    pub fn q_integer(m: usize) -> Self {
        QPoly::from_coeffs(vec![1; m])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, exp: usize) -> BigInt {
        self.coeffs.get(exp).cloned().unwrap_or_default()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Value at q = 1.
    pub fn at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    pub fn add_monomial(&mut self, exp: usize, c: impl Into<BigInt>) {
        if self.coeffs.len() <= exp {
            self.coeffs.resize(exp + 1, BigInt::zero());
        }
        self.coeffs[exp] += c.into();
        self.trim();
    }

    /// Exact division; `None` if `divisor` is zero or does not divide.
    pub fn div_exact(&self, divisor: &QPoly) -> Option<QPoly> {
        let dd = divisor.degree()?;
        let lead = &divisor.coeffs[dd];
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return self.is_zero().then(QPoly::default);
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let (q, r) = rem[i + dd].div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &q * c;
            }
            quot[i] = q;
        }
        rem.iter().all(Zero::is_zero).then(|| QPoly::from_coeffs(quot))
    }

    /// Gaussian binomial `[n choose k]_q`, built from q-factorials by exact
    /// division (divisibility is asserted).
    pub fn q_binomial(n: usize, k: usize) -> QPoly {
        if k > n {
            return QPoly::default();
        }
        let fact = |m: usize| (1..=m).fold(QPoly::from_coeffs([1]), |acc, i| &acc * &QPoly::q_integer(i));
        let den = &fact(k) * &fact(n - k);
        fact(n)
            .div_exact(&den)
            .expect("q-factorial quotient is a polynomial")
    }
}

impl fmt::Display for QPoly {
    /// Highest degree first, e.g. `q^3 + 2q^2 + q + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let var = match e {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{e}"),
            };
            if a.is_one() && e > 0 {
                write!(f, "{var}")?;
            } else {
                write!(f, "{a}{var}")?;
            }
        }
        Ok(())
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() { (self, rhs) } else { (rhs, self) };
        let mut coeffs = long.coeffs.clone();
        for (a, b) in coeffs.iter_mut().zip(&short.coeffs) {
            *a += b;
        }
        QPoly::from_coeffs(coeffs)
    }
}

impl AddAssign<&QPoly> for QPoly {
    fn add_assign(&mut self, rhs: &QPoly) {
        *self = &*self + rhs;
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        self + &(-rhs)
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return QPoly::default();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(out)
    }
}

impl std::iter::Sum for QPoly {
    fn sum<I: Iterator<Item = QPoly>>(iter: I) -> QPoly {
        iter.fold(QPoly::default(), |acc, p| &acc + &p)
    }
}

impl Coefficient for QPoly {
    fn zero() -> Self {
        QPoly::default()
    }
    fn one() -> Self {
        QPoly::from_coeffs([1])
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn from_int(c: i64) -> Self {
        QPoly::from_coeffs([c])
    }
    fn div_int_exact(&self, d: &BigInt) -> Option<Self> {
        self.coeffs
            .iter()
            .map(|c| {
                let (q, r) = c.div_rem(d);
                r.is_zero().then_some(q)
            })
            .collect::<Option<Vec<_>>>()
            .map(QPoly::from_coeffs)
    }
}

// ---------------------------------------------------------------------------
// MultiPoly
// ---------------------------------------------------------------------------

/// The four path markers, in exponent-tuple order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Marker {
    U,
    D,
    Umber,
    Denim,
}

impl Marker {
    pub const ALL: [Marker; 4] = [Marker::U, Marker::D, Marker::Umber, Marker::Denim];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn symbol(self) -> char {
        match self {
            Marker::U => 'U',
            Marker::D => 'D',
            Marker::Umber => 'u',
            Marker::Denim => 'd',
        }
    }

    pub fn from_symbol(c: char) -> Option<Marker> {
        Marker::ALL.into_iter().find(|m| m.symbol() == c)
    }
}

/// Exponents of `U, D, u, d`.
pub type Exponents = [u32; 4];

/// A polynomial in U, D, u, d with integer coefficients. Zero coefficients
/// are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Exponents, BigInt>,
}

impl MultiPoly {
    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::term(c, [0; 4])
    }

    pub fn term(c: impl Into<BigInt>, exps: Exponents) -> Self {
        let mut p = MultiPoly::default();
        p.add_term(exps, c.into());
        p
    }

    pub fn var(m: Marker) -> Self {
        let mut e = [0; 4];
        e[m.index()] = 1;
        Self::term(1, e)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: Exponents) -> BigInt {
        self.terms.get(&exps).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, exps: Exponents, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    /// Value with every marker set to 1.
    pub fn at_ones(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Formal partial derivative with respect to one marker.
    pub fn derivative(&self, m: Marker) -> MultiPoly {
        let i = m.index();
        let mut out = MultiPoly::default();
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = *e;
                e2[i] -= 1;
                out.add_term(e2, c * BigInt::from(e[i]));
            }
        }
        out
    }

    /// Exchanges two markers.
    pub fn swap(&self, a: Marker, b: Marker) -> MultiPoly {
        let mut out = MultiPoly::default();
        for (e, c) in &self.terms {
            let mut e2 = *e;
            e2.swap(a.index(), b.index());
            out.add_term(e2, c.clone());
        }
        out
    }

    /// Divides by the monomial with the given exponents, if every term is
    /// divisible by it.
    pub fn div_monomial(&self, exps: Exponents) -> Option<MultiPoly> {
        let mut out = MultiPoly::default();
        for (e, c) in &self.terms {
            let mut e2 = [0; 4];
            for i in 0..4 {
                e2[i] = e[i].checked_sub(exps[i])?;
            }
            out.add_term(e2, c.clone());
        }
        Some(out)
    }

    /// Multiplies by `c` times a monomial.
    pub fn scale_monomial(&self, c: &BigInt, exps: Exponents) -> MultiPoly {
        let mut out = MultiPoly::default();
        for (e, v) in &self.terms {
            out.add_term(std::array::from_fn(|i| e[i] + exps[i]), v * c);
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    /// Terms in increasing exponent-tuple order, e.g. `d^2 + u*d + u^2 + 2*U*D`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let mut factors = Vec::new();
            let a = c.abs();
            if !a.is_one() || e.iter().all(|&x| x == 0) {
                factors.push(a.to_string());
            }
            for m in Marker::ALL {
                match e[m.index()] {
                    0 => {}
                    1 => factors.push(m.symbol().to_string()),
                    p => factors.push(format!("{}^{p}", m.symbol())),
                }
            }
            let body = factors.join("*");
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for MultiPoly {
    type Err = DomainError;

    /// Parses sums of products such as `2*U*D - u^2 + 3`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || DomainError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        let mut out = MultiPoly::default();
        let mut chunks = Vec::new();
        let mut start = 0;
        for (i, ch) in compact.char_indices() {
            if (ch == '+' || ch == '-') && i > 0 {
                chunks.push(&compact[start..i]);
                start = i;
            }
        }
        chunks.push(&compact[start..]);
        for chunk in chunks {
            let (neg, body) = match chunk.as_bytes().first() {
                Some(b'-') => (true, &chunk[1..]),
                Some(b'+') => (false, &chunk[1..]),
                _ => (false, chunk),
            };
            let mut coeff = BigInt::one();
            let mut exps = [0u32; 4];
            for factor in body.split('*') {
                let (base, pow) = match factor.split_once('^') {
                    Some((b, p)) => (b, p.parse::<u32>().map_err(|_| err())?),
                    None => (factor, 1),
                };
                let mut chars = base.chars();
                match (chars.next(), chars.next()) {
                    (Some(c), None) if Marker::from_symbol(c).is_some() => {
                        exps[Marker::from_symbol(c).unwrap().index()] += pow;
                    }
                    _ => {
                        let v: BigInt = base.parse().map_err(|_| err())?;
                        coeff *= num_traits::pow(v, pow as usize);
                    }
                }
            }
            out.add_term(exps, if neg { -coeff } else { coeff });
        }
        Ok(out)
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &(-rhs)
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::default();
        for (e, c) in &self.terms {
            for (f, d) in &rhs.terms {
                out.add_term(std::array::from_fn(|i| e[i] + f[i]), c * d);
            }
        }
        out
    }
}

impl Coefficient for MultiPoly {
    fn zero() -> Self {
        MultiPoly::default()
    }
    fn one() -> Self {
        MultiPoly::constant(1)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn from_int(c: i64) -> Self {
        MultiPoly::constant(c)
    }
    fn div_int_exact(&self, d: &BigInt) -> Option<Self> {
        let mut out = MultiPoly::default();
        for (e, c) in &self.terms {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            out.add_term(*e, q);
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn qp(c: &[i64]) -> QPoly {
        QPoly::from_coeffs(c.iter().copied())
    }

    #[test]
    fn q_binomials() {
        assert_eq!(QPoly::q_binomial(4, 2), qp(&[1, 1, 2, 1, 1]));
        assert_eq!(QPoly::q_binomial(5, 0), qp(&[1]));
        assert_eq!(QPoly::q_binomial(7, 3).at_one(), BigInt::from(35));
        assert!(QPoly::q_binomial(2, 3).coeffs().is_empty());
    }

    #[test]
    fn division() {
        let a = qp(&[1, 2, 1]);
        assert_eq!(a.div_exact(&qp(&[1, 1])), Some(qp(&[1, 1])));
        assert_eq!(a.div_exact(&qp(&[2, 1])), None);
        assert_eq!(qp(&[]).div_exact(&qp(&[1, 1])), Some(qp(&[])));
    }

    #[test]
    fn qpoly_display() {
        assert_eq!(qp(&[1, 1, 2, 1]).to_string(), "q^3 + 2q^2 + q + 1");
        assert_eq!(qp(&[0, -1]).to_string(), "-q");
        assert_eq!(qp(&[]).to_string(), "0");
    }

    #[test]
    fn multipoly_parse_and_display() {
        let p: MultiPoly = "U*D*d^2 + U*D*u*d + 2*U^2*D^2 + U*D*u^2".parse().unwrap();
        assert_eq!(p.num_terms(), 4);
        assert_eq!(p.coeff([2, 2, 0, 0]), BigInt::from(2));
        let again: MultiPoly = p.to_string().parse().unwrap();
        assert_eq!(again, p);
        assert_eq!("3 - 3".parse::<MultiPoly>().unwrap(), MultiPoly::default());
        assert!("x".parse::<MultiPoly>().is_err());
    }

    #[test]
    fn derivative_and_swap() {
        let p: MultiPoly = "U^2*d + 3*U".parse().unwrap();
        assert_eq!(p.derivative(Marker::U), "2*U*d + 3".parse().unwrap());
        assert_eq!(p.swap(Marker::U, Marker::D), "D^2*d + 3*D".parse().unwrap());
        assert_eq!(p.div_monomial([1, 0, 0, 0]), Some("U*d + 3".parse().unwrap()));
        assert_eq!(p.div_monomial([0, 1, 0, 0]), None);
    }

    fn small_qpoly() -> impl Strategy<Value = QPoly> {
        prop::collection::vec(-5i64..=5, 0..5).prop_map(|v| QPoly::from_coeffs(v))
    }

    fn small_multi() -> impl Strategy<Value = MultiPoly> {
        prop::collection::vec(((0u32..3, 0u32..3, 0u32..3, 0u32..3), -4i64..=4), 0..5).prop_map(|terms| {
            let mut p = MultiPoly::default();
            for ((a, b, c, d), k) in terms {
                p.add_term([a, b, c, d], BigInt::from(k));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn qpoly_is_a_commutative_ring(a in small_qpoly(), b in small_qpoly(), c in small_qpoly()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a - &a, QPoly::default());
        }

        #[test]
        fn qpoly_division_inverts_multiplication(a in small_qpoly(), b in small_qpoly()) {
            prop_assume!(!b.coeffs().is_empty());
            prop_assert_eq!((&a * &b).div_exact(&b), Some(a));
        }

        #[test]
        fn multipoly_is_a_commutative_ring(a in small_multi(), b in small_multi(), c in small_multi()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a - &a, MultiPoly::default());
        }

        #[test]
        fn derivative_is_a_derivation(a in small_multi(), b in small_multi()) {
            let m = Marker::Umber;
            prop_assert_eq!((&a * &b).derivative(m), &(&a.derivative(m) * &b) + &(&a * &b.derivative(m)));
        }
    }
}

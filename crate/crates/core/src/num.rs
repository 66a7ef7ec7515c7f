//! Exact scalars, points of ℝⁿ and extended values.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar. Always in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"` or `"p/q"` (optionally signed). A zero denominator is an error.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Input(format!("invalid rational numerator in {s:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Input(format!("invalid rational denominator in {s:?}")))?;
    if den.is_zero() {
        return Err(Error::Input(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Exact square root of a nonnegative rational, when it is a rational square.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// A point of ℝⁿ or of its dual; the pairing is the exact dot product.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector(Vec<Rational>);

impl Vector {
    pub fn new(coords: Vec<Rational>) -> Self {
        Vector(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(vec![Rational::zero(); dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = Rational::one();
        v
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        Vector(xs.iter().map(|&x| rat(x)).collect())
    }

    pub fn from_bigints(xs: &[BigInt]) -> Self {
        Vector(xs.iter().map(|x| Rational::from_integer(x.clone())).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.0[i]
    }

    pub fn dot(&self, other: &Vector) -> Rational {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn scale(&self, s: &Rational) -> Vector {
        Vector(self.0.iter().map(|c| c * s).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn norm_inf(&self) -> Rational {
        self.0
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Appends one coordinate (lifting to ℝⁿ⁺¹).
    pub fn lift(&self, last: Rational) -> Vector {
        let mut c = self.0.clone();
        c.push(last);
        Vector(c)
    }

    /// Splits off the last coordinate.
    pub fn split_last(&self) -> (Vector, Rational) {
        let (last, head) = self.0.split_last().expect("non-empty vector");
        (Vector(head.to_vec()), last.clone())
    }

    /// Integer coordinates after clearing denominators and dividing by the gcd.
    /// Positive scaling only; the zero vector maps to zeros.
    pub fn primitive_ints(&self) -> Vec<BigInt> {
        primitive(&self.0)
    }

    /// The primitive integer representative of the ray through `self`.
    pub fn primitive(&self) -> Vector {
        Vector::from_bigints(&self.primitive_ints())
    }
}

pub(crate) fn primitive(coords: &[Rational]) -> Vec<BigInt> {
    let lcm = coords
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coords
        .iter()
        .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    normalize_ints(ints)
}

pub(crate) fn normalize_ints(mut ints: Vec<BigInt>) -> Vec<BigInt> {
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for c in ints.iter_mut() {
            *c /= &g;
        }
    }
    ints
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        Vector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A value of the extended real line ℝ ∪ {±∞}.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtValue {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl ExtValue {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtValue::Finite(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtValue::Finite(_))
    }

    /// `self ≤ c` for a finite threshold.
    pub fn le(&self, c: &Rational) -> bool {
        match self {
            ExtValue::NegInf => true,
            ExtValue::Finite(q) => q <= c,
            ExtValue::PosInf => false,
        }
    }
}

impl From<Rational> for ExtValue {
    fn from(q: Rational) -> Self {
        ExtValue::Finite(q)
    }
}

impl fmt::Display for ExtValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtValue::NegInf => write!(f, "-inf"),
            ExtValue::Finite(q) => write!(f, "{q}"),
            ExtValue::PosInf => write!(f, "+inf"),
        }
    }
}

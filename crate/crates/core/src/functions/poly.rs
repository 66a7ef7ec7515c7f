//! Univariate polynomials over ℚ with exact real-root counting.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::num::Rational;

/// Coefficients from the constant term upward; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Polynomial::new(cs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn lead(&self) -> &Rational {
        self.coeffs.last().expect("nonzero polynomial")
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer((i as i64).into()))
                .collect(),
        )
    }

    fn scale(&self, s: &Rational) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    fn monic(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().recip())
    }

    fn sub(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = Rational::zero();
        Polynomial::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) - other.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    /// `(q, r)` with `self = q·d + r`, `deg r < deg d`.
    pub fn div_rem(&self, d: &Polynomial) -> (Polynomial, Polynomial) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        let mut q = vec![Rational::zero(); r.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let shift = r.len() - 1 - dd;
            let factor = r.last().unwrap() / d.lead();
            for (i, c) in d.coeffs.iter().enumerate() {
                r[shift + i] -= &factor * c;
            }
            q[shift] = factor;
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        (Polynomial::new(q), Polynomial::new(r))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Squarefree factors `[(g, m)]` with `self = c·Π g^m` (Yun's algorithm).
    pub fn squarefree_factors(&self) -> Vec<(Polynomial, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let d = self.derivative();
        let a0 = self.gcd(&d);
        let mut b = self.div_rem(&a0).0;
        let mut c = d.div_rem(&a0).0;
        let mut dpoly = c.sub(&b.derivative());
        let mut m = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&dpoly);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), m));
            }
            b = b.div_rem(&a).0;
            c = dpoly.div_rem(&a).0;
            dpoly = c.sub(&b.derivative());
            m += 1;
        }
        out
    }

    fn sturm_sequence(&self) -> Vec<Polynomial> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            seq.push(r.scale(&-Rational::one()));
        }
        seq
    }

    /// Number of distinct real roots.
    pub fn count_real_roots(&self) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let seq = self.sturm_sequence();
        let at = |positive_end: bool| -> usize {
            let signs: Vec<bool> = seq
                .iter()
                .map(|p| {
                    let lead_pos = p.lead().is_positive();
                    let odd = p.coeffs.len() % 2 == 0;
                    if positive_end || !odd {
                        lead_pos
                    } else {
                        !lead_pos
                    }
                })
                .collect();
            signs.windows(2).filter(|w| w[0] != w[1]).count()
        };
        at(false) - at(true)
    }

    /// A point that is not a root: the first of `0, 1, 2, …` with `p ≠ 0`.
    pub fn non_root(&self) -> Rational {
        let mut t = Rational::zero();
        while self.eval(&t).is_zero() {
            t += Rational::one();
        }
        t
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*u")?,
                _ => write!(f, "{c}*u^{i}")?,
            }
        }
        Ok(())
    }
}

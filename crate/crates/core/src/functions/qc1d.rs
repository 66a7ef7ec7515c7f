//! Piecewise-affine quasi-convex functions of one variable.
//!
//! Breakpoints `b_1 < … < b_k` split ℝ into `k + 1` open intervals. Each
//! interval carries an affine piece or `+∞`; each breakpoint carries its own
//! value, so jumps and non-lsc behaviour are representable.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::num::{ExtValue, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Piece1D {
    Affine { slope: Rational, intercept: Rational },
    PosInf,
}

impl Piece1D {
    pub fn affine(slope: Rational, intercept: Rational) -> Self {
        Piece1D::Affine { slope, intercept }
    }

    fn eval(&self, t: &Rational) -> ExtValue {
        match self {
            Piece1D::Affine { slope, intercept } => ExtValue::Finite(slope * t + intercept),
            Piece1D::PosInf => ExtValue::PosInf,
        }
    }
}

/// One end of an interval of ℝ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Bound {
    Unbounded,
    Closed(Rational),
    Open(Rational),
}

/// A nonempty interval of ℝ, or the empty set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Interval {
    Empty,
    Span { lo: Bound, hi: Bound },
}

fn lower_cmp(a: &Bound, b: &Bound) -> Ordering {
    use Bound::*;
    match (a, b) {
        (Unbounded, Unbounded) => Ordering::Equal,
        (Unbounded, _) => Ordering::Less,
        (_, Unbounded) => Ordering::Greater,
        (Closed(x), Closed(y)) | (Open(x), Open(y)) => x.cmp(y),
        (Closed(x), Open(y)) => x.cmp(y).then(Ordering::Less),
        (Open(x), Closed(y)) => x.cmp(y).then(Ordering::Greater),
    }
}

fn upper_cmp(a: &Bound, b: &Bound) -> Ordering {
    use Bound::*;
    match (a, b) {
        (Unbounded, Unbounded) => Ordering::Equal,
        (Unbounded, _) => Ordering::Greater,
        (_, Unbounded) => Ordering::Less,
        (Closed(x), Closed(y)) | (Open(x), Open(y)) => x.cmp(y),
        (Closed(x), Open(y)) => x.cmp(y).then(Ordering::Greater),
        (Open(x), Closed(y)) => x.cmp(y).then(Ordering::Less),
    }
}

impl Interval {
    pub fn real_line() -> Self {
        Interval::Span {
            lo: Bound::Unbounded,
            hi: Bound::Unbounded,
        }
    }

    pub fn closed(lo: Rational, hi: Rational) -> Self {
        Interval::Span {
            lo: Bound::Closed(lo),
            hi: Bound::Closed(hi),
        }
        .normalized()
    }

    pub fn point(t: Rational) -> Self {
        Interval::closed(t.clone(), t)
    }

    fn normalized(self) -> Self {
        match &self {
            Interval::Span { lo, hi } => {
                let empty = match (lo, hi) {
                    (Bound::Closed(a), Bound::Closed(b)) => a > b,
                    (Bound::Closed(a), Bound::Open(b))
                    | (Bound::Open(a), Bound::Closed(b))
                    | (Bound::Open(a), Bound::Open(b)) => a >= b,
                    _ => false,
                };
                if empty {
                    Interval::Empty
                } else {
                    self
                }
            }
            Interval::Empty => self,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Interval::Empty)
    }

    pub fn contains(&self, t: &Rational) -> bool {
        match self {
            Interval::Empty => false,
            Interval::Span { lo, hi } => {
                let lo_ok = match lo {
                    Bound::Unbounded => true,
                    Bound::Closed(a) => a <= t,
                    Bound::Open(a) => a < t,
                };
                let hi_ok = match hi {
                    Bound::Unbounded => true,
                    Bound::Closed(b) => t <= b,
                    Bound::Open(b) => t < b,
                };
                lo_ok && hi_ok
            }
        }
    }

    pub fn closure(&self) -> Interval {
        let close = |b: &Bound| match b {
            Bound::Open(a) => Bound::Closed(a.clone()),
            other => other.clone(),
        };
        match self {
            Interval::Empty => Interval::Empty,
            Interval::Span { lo, hi } => Interval::Span {
                lo: close(lo),
                hi: close(hi),
            },
        }
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        match (self, other) {
            (Interval::Span { lo: a, hi: b }, Interval::Span { lo: c, hi: d }) => {
                let lo = if lower_cmp(a, c) == Ordering::Less { c } else { a };
                let hi = if upper_cmp(b, d) == Ordering::Greater { d } else { b };
                Interval::Span {
                    lo: lo.clone(),
                    hi: hi.clone(),
                }
                .normalized()
            }
            _ => Interval::Empty,
        }
    }

    /// Smallest interval containing both; equals the union when that is convex.
    pub fn hull(&self, other: &Interval) -> Interval {
        match (self, other) {
            (Interval::Empty, x) | (x, Interval::Empty) => x.clone(),
            (Interval::Span { lo: a, hi: b }, Interval::Span { lo: c, hi: d }) => Interval::Span {
                lo: if lower_cmp(a, c) == Ordering::Greater { c.clone() } else { a.clone() },
                hi: if upper_cmp(b, d) == Ordering::Less { d.clone() } else { b.clone() },
            },
        }
    }

    fn endpoints(&self) -> Vec<Rational> {
        let mut out = Vec::new();
        if let Interval::Span { lo, hi } = self {
            for b in [lo, hi] {
                if let Bound::Closed(a) | Bound::Open(a) = b {
                    out.push(a.clone());
                }
            }
        }
        out
    }

    /// A point in exactly one of the two intervals, if they differ.
    pub fn difference_witness(&self, other: &Interval) -> Option<Rational> {
        let mut ends = self.endpoints();
        ends.extend(other.endpoints());
        ends.sort();
        ends.dedup();
        let mut candidates = ends.clone();
        for w in ends.windows(2) {
            candidates.push((&w[0] + &w[1]) / Rational::from_integer(2.into()));
        }
        match (ends.first(), ends.last()) {
            (Some(a), Some(b)) => {
                candidates.push(a - Rational::from_integer(1.into()));
                candidates.push(b + Rational::from_integer(1.into()));
            }
            _ => candidates.push(Rational::zero()),
        }
        candidates.into_iter().find(|t| self.contains(t) != other.contains(t))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Interval::Empty => write!(f, "∅"),
            Interval::Span { lo, hi } => {
                match lo {
                    Bound::Unbounded => write!(f, "(-inf")?,
                    Bound::Closed(a) => write!(f, "[{a}")?,
                    Bound::Open(a) => write!(f, "({a}")?,
                }
                write!(f, ", ")?;
                match hi {
                    Bound::Unbounded => write!(f, "+inf)"),
                    Bound::Closed(b) => write!(f, "{b}]"),
                    Bound::Open(b) => write!(f, "{b})"),
                }
            }
        }
    }
}

/// A validated quasi-convex piecewise-affine function `ℝ → ℝ ∪ {+∞}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuasiConvex1D {
    breakpoints: Vec<Rational>,
    pieces: Vec<Piece1D>,
    values: Vec<ExtValue>,
}

/// The cells of ℝ in order: interval 0, breakpoint 1, interval 1, ….
enum Cell<'a> {
    Open {
        lo: Option<&'a Rational>,
        hi: Option<&'a Rational>,
        piece: &'a Piece1D,
    },
    Point {
        at: &'a Rational,
        value: &'a ExtValue,
    },
}

impl QuasiConvex1D {
    /// Rejects unsorted breakpoints, mismatched lengths, `−∞` values and any
    /// function with a non-interval sublevel set.
    pub fn new(breakpoints: Vec<Rational>, pieces: Vec<Piece1D>, values: Vec<ExtValue>) -> Result<Self> {
        if pieces.len() != breakpoints.len() + 1 || values.len() != breakpoints.len() {
            return Err(Error::Input(format!(
                "{} breakpoints need {} pieces and {} values, got {} and {}",
                breakpoints.len(),
                breakpoints.len() + 1,
                breakpoints.len(),
                pieces.len(),
                values.len()
            )));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Input("breakpoints must be strictly increasing".into()));
        }
        if values.iter().any(|v| *v == ExtValue::NegInf) {
            return Err(Error::Input("breakpoint values must be finite or +inf".into()));
        }
        let f = QuasiConvex1D {
            breakpoints,
            pieces,
            values,
        };
        if let Some(t) = f.quasi_convexity_violation() {
            return Err(Error::Input(format!("not quasi-convex: strict local maximum near {t}")));
        }
        Ok(f)
    }

    /// A single affine piece on ℝ.
    pub fn affine(slope: Rational, intercept: Rational) -> Self {
        QuasiConvex1D::new(vec![], vec![Piece1D::affine(slope, intercept)], vec![]).expect("affine is quasi-convex")
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Piece1D] {
        &self.pieces
    }

    pub fn values(&self) -> &[ExtValue] {
        &self.values
    }

    fn cells(&self) -> Vec<Cell<'_>> {
        let k = self.breakpoints.len();
        let mut out = Vec::with_capacity(2 * k + 1);
        for i in 0..=k {
            out.push(Cell::Open {
                lo: if i == 0 { None } else { Some(&self.breakpoints[i - 1]) },
                hi: self.breakpoints.get(i),
                piece: &self.pieces[i],
            });
            if i < k {
                out.push(Cell::Point {
                    at: &self.breakpoints[i],
                    value: &self.values[i],
                });
            }
        }
        out
    }

    fn cell_inf(cell: &Cell<'_>) -> ExtValue {
        match cell {
            Cell::Point { value, .. } => (*value).clone(),
            Cell::Open { piece: Piece1D::PosInf, .. } => ExtValue::PosInf,
            Cell::Open {
                lo,
                hi,
                piece: Piece1D::Affine { slope, intercept },
            } => match slope.cmp(&Rational::zero()) {
                Ordering::Equal => ExtValue::Finite(intercept.clone()),
                Ordering::Greater => lo.map_or(ExtValue::NegInf, |a| ExtValue::Finite(slope * a + intercept)),
                Ordering::Less => hi.map_or(ExtValue::NegInf, |b| ExtValue::Finite(slope * b + intercept)),
            },
        }
    }

    /// A point `z` with `f(z) > max(inf_{t<z} f, inf_{t>z} f)`, if any.
    fn quasi_convexity_violation(&self) -> Option<Rational> {
        let cells = self.cells();
        let infs: Vec<ExtValue> = cells.iter().map(Self::cell_inf).collect();
        let m = cells.len();
        let mut prefix = vec![ExtValue::PosInf; m + 1];
        for i in 0..m {
            prefix[i + 1] = std::cmp::min(prefix[i].clone(), infs[i].clone());
        }
        let mut suffix = vec![ExtValue::PosInf; m + 1];
        for i in (0..m).rev() {
            suffix[i] = std::cmp::min(suffix[i + 1].clone(), infs[i].clone());
        }
        for (i, cell) in cells.iter().enumerate() {
            let left = &prefix[i];
            let right = &suffix[i + 1];
            match cell {
                Cell::Point { at, value } => {
                    if *value > left && *value > right {
                        return Some((*at).clone());
                    }
                }
                Cell::Open { lo, hi, piece } => {
                    let witness = || interior_point(*lo, *hi);
                    match piece {
                        Piece1D::PosInf => {
                            if *left < ExtValue::PosInf && *right < ExtValue::PosInf {
                                return Some(witness());
                            }
                        }
                        Piece1D::Affine { slope, intercept } => {
                            let bad = match slope.cmp(&Rational::zero()) {
                                Ordering::Greater => {
                                    hi.is_some_and(|b| ExtValue::Finite(slope * b + intercept) > *right)
                                }
                                Ordering::Less => {
                                    lo.is_some_and(|a| ExtValue::Finite(slope * a + intercept) > *left)
                                }
                                Ordering::Equal => {
                                    let q = ExtValue::Finite(intercept.clone());
                                    q > *left && q > *right
                                }
                            };
                            if bad {
                                return Some(witness());
                            }
                        }
                    }
                }
            }
        }
        None
    }

    pub fn eval(&self, t: &Rational) -> ExtValue {
        match self.breakpoints.binary_search(t) {
            Ok(i) => self.values[i].clone(),
            Err(i) => self.pieces[i].eval(t),
        }
    }

    fn one_sided_limits(&self, i: usize) -> (ExtValue, ExtValue) {
        let b = &self.breakpoints[i];
        (self.pieces[i].eval(b), self.pieces[i + 1].eval(b))
    }

    /// `[f ≤ c]` (or `[f < c]` when `strict`).
    pub fn sublevel(&self, c: &Rational, strict: bool) -> Interval {
        let below = |v: &ExtValue| match v {
            ExtValue::Finite(q) => {
                if strict {
                    q < c
                } else {
                    q <= c
                }
            }
            ExtValue::NegInf => true,
            ExtValue::PosInf => false,
        };
        let mut acc = Interval::Empty;
        for cell in self.cells() {
            let part = match cell {
                Cell::Point { at, value } => {
                    if below(value) {
                        Interval::point(at.clone())
                    } else {
                        Interval::Empty
                    }
                }
                Cell::Open { piece: Piece1D::PosInf, .. } => Interval::Empty,
                Cell::Open {
                    lo,
                    hi,
                    piece: Piece1D::Affine { slope, intercept },
                } => {
                    let lo_b = lo.map_or(Bound::Unbounded, |a| Bound::Open(a.clone()));
                    let hi_b = hi.map_or(Bound::Unbounded, |b| Bound::Open(b.clone()));
                    let whole = Interval::Span { lo: lo_b, hi: hi_b };
                    if slope.is_zero() {
                        if below(&ExtValue::Finite(intercept.clone())) {
                            whole
                        } else {
                            Interval::Empty
                        }
                    } else {
                        let root = (c - intercept) / slope;
                        let edge = if strict {
                            Bound::Open(root)
                        } else {
                            Bound::Closed(root)
                        };
                        let half = if slope.is_positive() {
                            Interval::Span {
                                lo: Bound::Unbounded,
                                hi: edge,
                            }
                        } else {
                            Interval::Span {
                                lo: edge,
                                hi: Bound::Unbounded,
                            }
                        };
                        whole.intersect(&half)
                    }
                }
            };
            acc = acc.hull(&part);
        }
        acc
    }

    /// Lower semicontinuous hull `f̄`.
    pub fn closed_hull(&self) -> QuasiConvex1D {
        let values = (0..self.breakpoints.len())
            .map(|i| {
                let (l, r) = self.one_sided_limits(i);
                self.values[i].clone().min(l).min(r)
            })
            .collect();
        QuasiConvex1D {
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.clone(),
            values,
        }
    }

    pub fn is_lsc(&self) -> bool {
        self.closed_hull() == *self
    }
}

fn interior_point(lo: Option<&Rational>, hi: Option<&Rational>) -> Rational {
    let one = Rational::from_integer(1.into());
    match (lo, hi) {
        (Some(a), Some(b)) => (a + b) / Rational::from_integer(2.into()),
        (Some(a), None) => a + one,
        (None, Some(b)) => b - one,
        (None, None) => Rational::zero(),
    }
}

pub fn qc1d_closed_hull(f: &QuasiConvex1D) -> QuasiConvex1D {
    f.closed_hull()
}

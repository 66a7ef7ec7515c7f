use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::functions::ExtendedFunction;
use crate::num::{ratio, ExtValue, Rational, Vector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Member {
    pub id: String,
    pub f: ExtendedFunction,
}

impl Member {
    pub fn new(id: impl Into<String>, f: impl Into<ExtendedFunction>) -> Self {
        Member { id: id.into(), f: f.into() }
    }
}

/// A finite family `{f_t}` with `f := sup_t f_t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupFamily {
    dim: usize,
    members: Vec<Member>,
}

impl SupFamily {
    pub fn new(members: Vec<Member>) -> Result<Self> {
        let dim = members
            .first()
            .map(|m| m.f.dim())
            .ok_or_else(|| Error::Input("a family needs at least one member".into()))?;
        let mut seen = BTreeSet::new();
        for m in &members {
            check_dim(dim, m.f.dim())?;
            if !seen.insert(m.id.as_str()) {
                return Err(Error::Input(format!("duplicate member id {:?}", m.id)));
            }
        }
        Ok(SupFamily { dim, members })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn proper_ids(&self) -> Vec<&str> {
        self.members
            .iter()
            .filter(|m| m.f.is_proper())
            .map(|m| m.id.as_str())
            .collect()
    }

    /// `f(x) = max_t f_t(x)`; `−∞` when every member is improper at `x`.
    pub fn evaluate(&self, x: &Vector) -> Result<ExtValue> {
        let mut best = ExtValue::NegInf;
        for m in &self.members {
            best = best.max(m.f.evaluate(x)?);
        }
        Ok(best)
    }

    /// Checks `f(x) ∈ ℝ` and `f(x) ≤ 0`, returning `f(x)`.
    pub fn require_feasible(&self, x: &Vector) -> Result<Rational> {
        match self.evaluate(x)? {
            ExtValue::Finite(v) if !v.is_positive() => Ok(v),
            ExtValue::Finite(v) => Err(Error::Precondition(format!(
                "the query point violates the constraint: f(x) = {v} > 0"
            ))),
            ExtValue::PosInf => Err(Error::Precondition("f(x) = +inf: the query point is outside dom f".into())),
            ExtValue::NegInf => Err(Error::Precondition(
                "f(x) = -inf: no proper member is finite at the query point".into(),
            )),
        }
    }

    /// Checks `x ∈ dom f` with `f(x)` finite, returning `f(x)`.
    pub fn require_finite(&self, x: &Vector) -> Result<Rational> {
        match self.evaluate(x)? {
            ExtValue::Finite(v) => Ok(v),
            other => Err(Error::Precondition(format!("f(x) = {other} is not finite"))),
        }
    }
}

/// Positive scaling factors sampling the union over `s > 0`.
///
/// Geometric grids `base^e`, `e ∈ [min_exp, max_exp]`; `refine` keeps every
/// value, widens the exponent range by two on each side and inserts the
/// midpoint of each consecutive pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SGrid {
    values: Vec<Rational>,
    base: Rational,
    min_exp: i32,
    max_exp: i32,
    level: u32,
}

pub const DEFAULT_GRID: (i64, i32, i32) = (2, -10, 10);

impl SGrid {
    pub fn geometric(base: Rational, min_exp: i32, max_exp: i32) -> Result<Self> {
        if base <= Rational::one() {
            return Err(Error::Input(format!("grid base must exceed 1, got {base}")));
        }
        if min_exp > max_exp {
            return Err(Error::Input(format!("empty exponent range {min_exp}..{max_exp}")));
        }
        let values = (min_exp..=max_exp).map(|e| pow(&base, e)).collect();
        Ok(SGrid {
            values,
            base,
            min_exp,
            max_exp,
            level: 0,
        })
    }

    pub fn default_grid() -> Self {
        let (b, lo, hi) = DEFAULT_GRID;
        SGrid::geometric(Rational::from_integer(b.into()), lo, hi).expect("valid default")
    }

    /// An explicit grid (sorted, deduplicated). Values must be positive.
    pub fn from_values(values: Vec<Rational>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|v| !v.is_positive()) {
            return Err(Error::Input("grid values must be positive and nonempty".into()));
        }
        let mut values = values;
        values.sort();
        values.dedup();
        Ok(SGrid {
            values,
            base: Rational::from_integer(2.into()),
            min_exp: 0,
            max_exp: 0,
            level: 0,
        })
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn refine(&self) -> SGrid {
        let (lo, hi) = (self.min_exp - 2, self.max_exp + 2);
        let mut values: Vec<Rational> = self.values.clone();
        values.extend((lo..=hi).map(|e| pow(&self.base, e)));
        values.extend(self.values.windows(2).map(|w| (&w[0] + &w[1]) * ratio(1, 2)));
        values.sort();
        values.dedup();
        SGrid {
            values,
            base: self.base.clone(),
            min_exp: lo,
            max_exp: hi,
            level: self.level + 1,
        }
    }
}

impl fmt::Display for SGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}/level{}/{}values",
            self.base,
            self.min_exp,
            self.max_exp,
            self.level,
            self.values.len()
        )
    }
}

fn pow(base: &Rational, e: i32) -> Rational {
    let mut out = Rational::one();
    for _ in 0..e.unsigned_abs() {
        out *= base;
    }
    if e < 0 {
        out.recip()
    } else {
        out
    }
}

/// `T_{ε/s}(x) = {t ∈ 𝒫 : s f_t(x) ≥ −ε}`.
pub fn active_index_set(family: &SupFamily, x: &Vector, eps: &Rational, s: &Rational) -> Result<Vec<String>> {
    if !eps.is_positive() || !s.is_positive() {
        return Err(Error::Input("ε and s must be positive".into()));
    }
    family.require_feasible(x)?;
    let mut out = Vec::new();
    for m in family.members() {
        if let Some(p) = m.f.as_proper() {
            if let ExtValue::Finite(v) = p.evaluate(x)? {
                if s * v >= -eps {
                    out.push(m.id.clone());
                }
            }
        }
    }
    Ok(out)
}

pub(crate) fn require_positive(eps: &Rational) -> Result<()> {
    if eps.is_positive() {
        Ok(())
    } else if eps.is_zero() {
        Err(Error::Input("ε must be positive, got 0".into()))
    } else {
        Err(Error::Input(format!("ε must be positive, got {eps}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::PolyhedralFunction;
    use crate::num::rat;

    fn two_affine() -> SupFamily {
        SupFamily::new(vec![
            Member::new("1", PolyhedralFunction::affine(Vector::from_ints(&[1, 0]), rat(0))),
            Member::new("2", PolyhedralFunction::affine(Vector::from_ints(&[0, 1]), rat(-1))),
        ])
        .unwrap()
    }

    #[test]
    fn active_sets() {
        let fam = two_affine();
        let x = Vector::zeros(2);
        assert_eq!(active_index_set(&fam, &x, &ratio(1, 2), &rat(1)).unwrap(), vec!["1"]);
        assert_eq!(active_index_set(&fam, &x, &ratio(1, 2), &ratio(1, 4)).unwrap(), vec!["1", "2"]);
        assert!(active_index_set(&fam, &Vector::from_ints(&[1, 0]), &rat(1), &rat(1)).is_err());
    }

    #[test]
    fn grid_refinement_keeps_values() {
        let g = SGrid::default_grid();
        assert_eq!(g.values().len(), 21);
        assert_eq!(g.values()[0], ratio(1, 1024));
        let r = g.refine();
        assert!(g.values().iter().all(|v| r.values().contains(v)));
        assert!(r.values().len() > g.values().len());
        assert_eq!(r.level(), 1);
        assert!(SGrid::geometric(rat(1), 0, 3).is_err());
        assert!(SGrid::from_values(vec![rat(0)]).is_err());
    }

    #[test]
    fn duplicate_ids_rejected() {
        let f = PolyhedralFunction::affine(Vector::from_ints(&[1]), rat(0));
        assert!(SupFamily::new(vec![Member::new("a", f.clone()), Member::new("a", f)]).is_err());
        assert!(SupFamily::new(vec![]).is_err());
    }
}

//! Double description: generators of a polyhedral cone `{z : R z ≤ 0}`.
//!
//! Works over primitive integer vectors. Starts from the whole space (a
//! lineality basis) and inserts constraints in lexicographic order. A
//! constraint that cuts a lineality direction is handled by projection; all
//! other constraints use the classic adjacency-based update with the
//! combinatorial adjacency test.

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::num::{normalize_ints, primitive, Rational};

/// Default cap on the number of intermediate rays.
pub const DEFAULT_MAX_ROWS: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DdConfig {
    pub max_rows: usize,
}

impl Default for DdConfig {
    fn default() -> Self {
        DdConfig {
            max_rows: DEFAULT_MAX_ROWS,
        }
    }
}

/// `cone(rays) + span(lineality)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConeDescription {
    pub lineality: Vec<Vec<BigInt>>,
    pub rays: Vec<Vec<BigInt>>,
}

struct Ray {
    coords: Vec<BigInt>,
    tight: FixedBitSet,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

/// `α·a + β·b`, normalized to a primitive vector.
fn combine(alpha: &BigInt, a: &[BigInt], beta: &BigInt, b: &[BigInt]) -> Vec<BigInt> {
    normalize_ints(a.iter().zip(b).map(|(x, y)| alpha * x + beta * y).collect())
}

/// Generators of `{z ∈ ℝ^dim : ⟨row, z⟩ ≤ 0 for every row}`.
pub fn cone_generators(rows: &[Vec<Rational>], dim: usize, config: &DdConfig) -> Result<ConeDescription> {
    let mut hs: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), dim, "constraint dimension");
            primitive(r)
        })
        .filter(|r| r.iter().any(|c| !c.is_zero()))
        .collect();
    hs.sort();
    hs.dedup();

    let mut lineality: Vec<Vec<BigInt>> = (0..dim)
        .map(|i| {
            let mut e = vec![BigInt::zero(); dim];
            e[i] = BigInt::from(1);
            e
        })
        .collect();
    let mut rays: Vec<Ray> = Vec::new();
    let m = hs.len();

    for (k, h) in hs.iter().enumerate() {
        let cut = lineality.iter().position(|l| !dot(h, l).is_zero());
        if let Some(p) = cut {
            let mut lp = lineality.remove(p);
            let mut hl = dot(h, &lp);
            if hl.is_positive() {
                lp.iter_mut().for_each(|c| *c = -&*c);
                hl = -hl;
            }
            let alpha = -&hl;
            for l in lineality.iter_mut() {
                let hv = dot(h, l);
                if !hv.is_zero() {
                    *l = combine(&alpha, l, &hv, &lp);
                }
            }
            for r in rays.iter_mut() {
                let hv = dot(h, &r.coords);
                if !hv.is_zero() {
                    r.coords = combine(&alpha, &r.coords, &hv, &lp);
                }
                r.tight.insert(k);
            }
            let mut tight = FixedBitSet::with_capacity(m);
            tight.insert_range(0..k);
            rays.push(Ray { coords: lp, tight });
            continue;
        }

        let values: Vec<BigInt> = rays.iter().map(|r| dot(h, &r.coords)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
        for (r, v) in rays.iter_mut().zip(&values) {
            if v.is_zero() {
                r.tight.insert(k);
            }
        }
        if pos.is_empty() {
            continue;
        }

        let needed = dim.saturating_sub(lineality.len()).saturating_sub(2);
        let mut fresh: Vec<Ray> = Vec::new();
        for &ip in &pos {
            for &in_ in &neg {
                let mut common = rays[ip].tight.clone();
                common.intersect_with(&rays[in_].tight);
                if common.count_ones(..) < needed {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(j, r)| j == ip || j == in_ || !common.is_subset(&r.tight));
                if !adjacent {
                    continue;
                }
                let a = &values[ip];
                let b = -&values[in_];
                // b·r_p + a·r_n has zero slack on h.
                let coords = combine(&b, &rays[ip].coords, a, &rays[in_].coords);
                let mut tight = common;
                tight.insert(k);
                fresh.push(Ray { coords, tight });
                if rays.len() + fresh.len() > config.max_rows {
                    return Err(Error::Resource(format!(
                        "double description exceeded {} intermediate rays",
                        config.max_rows
                    )));
                }
            }
        }
        let mut keep = vec![true; rays.len()];
        for &ip in &pos {
            keep[ip] = false;
        }
        let mut idx = 0;
        rays.retain(|_| {
            let k = keep[idx];
            idx += 1;
            k
        });
        rays.extend(fresh);
    }

    Ok(ConeDescription {
        lineality,
        rays: rays.into_iter().map(|r| r.coords).collect(),
    })
}

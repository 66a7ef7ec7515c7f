use std::fmt;

use num_traits::Zero;

use super::dd::{cone_generators, ConeDescription, DdConfig};
use super::lp::{LinearProgram, Relation};
use super::polyhedron::{v_to_h, GeneratorSet, HalfSpace, PolyhedronH};
use crate::error::{check_dim, Result};
use crate::num::{Rational, Vector};

/// A finitely generated convex cone `cone(rays)`, `{θ}` when there are none.
///
/// Canonical form: primitive integer rays, sorted, with every ray that lies
/// in the cone of the others removed (earlier rays win ties), so two equal
/// pointed cones have identical ray lists.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConeGen {
    dim: usize,
    rays: Vec<Vector>,
}

impl ConeGen {
    pub fn new(dim: usize, rays: Vec<Vector>) -> Result<Self> {
        for r in &rays {
            check_dim(dim, r.dim())?;
        }
        let mut rays: Vec<Vector> = rays.iter().filter(|r| !r.is_zero()).map(Vector::primitive).collect();
        rays.sort();
        rays.dedup();
        let mut i = 0;
        while i < rays.len() {
            let others: Vec<&Vector> = rays.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, r)| r).collect();
            if conic_weights(dim, &others, &rays[i]).is_some() {
                rays.remove(i);
            } else {
                i += 1;
            }
        }
        Ok(ConeGen { dim, rays })
    }

    pub fn zero(dim: usize) -> Self {
        ConeGen { dim, rays: Vec::new() }
    }

    pub(crate) fn from_description(dim: usize, desc: &ConeDescription) -> Self {
        let mut rays = Vec::new();
        for l in &desc.lineality {
            let v = Vector::from_bigints(l);
            rays.push(-&v);
            rays.push(v);
        }
        rays.extend(desc.rays.iter().map(|r| Vector::from_bigints(r)));
        ConeGen::new(dim, rays).expect("dimensions agree")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vector] {
        &self.rays
    }

    pub fn is_trivial(&self) -> bool {
        self.rays.is_empty()
    }

    /// Nonnegative weights expressing `v` over the rays, if `v` is in the cone.
    pub fn contains(&self, v: &Vector) -> Result<Option<Vec<Rational>>> {
        check_dim(self.dim, v.dim())?;
        let refs: Vec<&Vector> = self.rays.iter().collect();
        Ok(conic_weights(self.dim, &refs, v))
    }

    /// A ray of `self` outside `other`, or `None` when `self ⊆ other`.
    pub fn first_missing(&self, other: &ConeGen) -> Result<Option<Vector>> {
        check_dim(self.dim, other.dim)?;
        for r in &self.rays {
            if other.contains(r)?.is_none() {
                return Ok(Some(r.clone()));
            }
        }
        Ok(None)
    }

    pub fn is_subset_of(&self, other: &ConeGen) -> Result<bool> {
        Ok(self.first_missing(other)?.is_none())
    }

    /// H-representation `{y : ⟨a_i, y⟩ ≤ 0}`.
    pub fn to_h(&self) -> Result<PolyhedronH> {
        v_to_h(&GeneratorSet::from_cone(self))
    }

    pub fn intersect(&self, other: &ConeGen) -> Result<ConeGen> {
        let p = self.to_h()?.intersect(&other.to_h()?)?;
        super::polyhedron::recession_cone(&p)
    }

    /// `C° = {y : ⟨y, r⟩ ≤ 0 for every ray r}`.
    pub fn polar(&self) -> Result<ConeGen> {
        let rows: Vec<Vec<Rational>> = self.rays.iter().map(|r| r.coords().to_vec()).collect();
        let desc = cone_generators(&rows, self.dim, &DdConfig::default())?;
        Ok(ConeGen::from_description(self.dim, &desc))
    }

    /// Half-spaces of the polar description, as used by normal-cone tests.
    pub fn polar_half_spaces(&self) -> Vec<HalfSpace> {
        self.rays
            .iter()
            .map(|r| HalfSpace::new(r.clone(), Rational::zero()))
            .collect()
    }
}

impl fmt::Display for ConeGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cone{{")?;
        for (i, r) in self.rays.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "}}")
    }
}

fn conic_weights(dim: usize, rays: &[&Vector], v: &Vector) -> Option<Vec<Rational>> {
    if v.is_zero() {
        return Some(vec![Rational::zero(); rays.len()]);
    }
    if rays.is_empty() {
        return None;
    }
    let mut lp = LinearProgram::new(rays.len());
    for j in 0..dim {
        let row = rays.iter().map(|r| r.get(j).clone()).collect();
        lp.add_row(row, Relation::Eq, v.get(j).clone());
    }
    lp.maximize(vec![Rational::zero(); rays.len()]);
    lp.solve().point().map(<[Rational]>::to_vec)
}

/// Membership `v ∈ C` with a certificate of nonnegative weights.
pub fn cone_contains(c: &ConeGen, v: &Vector) -> Result<Option<Vec<Rational>>> {
    c.contains(v)
}

/// Set equality by mutual ray containment.
pub fn cone_equal(a: &ConeGen, b: &ConeGen) -> Result<bool> {
    Ok(a.is_subset_of(b)? && b.is_subset_of(a)?)
}

/// `cone(A)` generated by a set: rays plus every point direction.
pub fn cone_of(g: &GeneratorSet) -> ConeGen {
    let rays = g.points().iter().chain(g.rays()).cloned().collect();
    ConeGen::new(g.dim(), rays).expect("dimensions agree")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vector {
        Vector::from_ints(xs)
    }

    #[test]
    fn canonical_form_drops_redundant_rays() {
        let c = ConeGen::new(2, vec![v(&[2, 0]), v(&[1, 1]), v(&[0, 3]), v(&[0, 0])]).unwrap();
        assert_eq!(c.rays(), &[v(&[0, 1]), v(&[1, 0])]);
        let same = ConeGen::new(2, vec![v(&[0, 5]), v(&[7, 0])]).unwrap();
        assert_eq!(c, same);
    }

    #[test]
    fn membership_with_witness() {
        let c = ConeGen::new(2, vec![v(&[1, 0]), v(&[1, 1])]).unwrap();
        let w = c.contains(&v(&[3, 1])).unwrap().unwrap();
        assert!(w.iter().all(|x| *x >= Rational::zero()));
        let recon = c
            .rays()
            .iter()
            .zip(&w)
            .fold(Vector::zeros(2), |acc, (r, x)| &acc + &r.scale(x));
        assert_eq!(recon, v(&[3, 1]));
        assert!(c.contains(&v(&[0, 1])).unwrap().is_none());
        assert!(c.contains(&v(&[0, 0])).unwrap().is_some());
        assert!(c.contains(&v(&[0, 0, 0])).is_err());
    }

    #[test]
    fn equality_of_cones_with_lineality() {
        let line = ConeGen::new(2, vec![v(&[1, 0]), v(&[-1, 0])]).unwrap();
        let half = ConeGen::new(2, vec![v(&[1, 0]), v(&[-1, 0]), v(&[0, 1])]).unwrap();
        assert!(!cone_equal(&line, &half).unwrap());
        assert!(line.is_subset_of(&half).unwrap());
        let alt = ConeGen::new(2, vec![v(&[1, 1]), v(&[-1, 1]), v(&[1, 0]), v(&[-1, 0])]).unwrap();
        assert!(cone_equal(&alt, &half).unwrap());
    }

    #[test]
    fn polar_and_intersection() {
        let q = ConeGen::new(2, vec![v(&[1, 0]), v(&[0, 1])]).unwrap();
        let p = q.polar().unwrap();
        assert_eq!(p.rays(), &[v(&[-1, 0]), v(&[0, -1])]);
        assert!(cone_equal(&p.polar().unwrap(), &q).unwrap());
        assert_eq!(ConeGen::zero(2).polar().unwrap().rays().len(), 4);
        let r = ConeGen::new(2, vec![v(&[1, 0]), v(&[-1, 1])]).unwrap();
        let i = q.intersect(&r).unwrap();
        assert!(cone_equal(&i, &q).unwrap());
        let h = q.to_h().unwrap();
        assert!(h.contains(&v(&[1, 2])));
        assert!(!h.contains(&v(&[-1, 2])));
    }

    #[test]
    fn cone_of_points() {
        let g = GeneratorSet::new(2, vec![v(&[1, 0]), v(&[0, 1])], vec![]).unwrap();
        assert_eq!(cone_of(&g).rays(), &[v(&[0, 1]), v(&[1, 0])]);
    }
}

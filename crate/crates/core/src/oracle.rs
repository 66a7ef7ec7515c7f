//! Independent ground truth for normal cones of polyhedral sets.
//!
//! Builds sublevel sets and domains directly from the family data and reads
//! normal cones off the tight constraints. Uses geometry primitives only.

use num_traits::Zero;

use crate::error::{check_dim, Error, Result};
use crate::formulas::{SublevelOracleQC, SupFamily};
use crate::geometry::{ConeGen, PolyhedronH};
use crate::num::{Rational, Vector};

/// `N_P(x) = cone{a_i : ⟨a_i, x⟩ = b_i}` for `x ∈ P`.
pub fn polyhedron_normal_cone(p: &PolyhedronH, x: &Vector) -> Result<ConeGen> {
    check_dim(p.dim(), x.dim())?;
    if !p.contains(x) {
        return Err(Error::Precondition(format!("the point {x} is not in the polyhedron")));
    }
    let tight = p
        .constraints()
        .iter()
        .filter(|h| h.is_tight(x))
        .map(|h| h.normal.clone())
        .collect();
    ConeGen::new(p.dim(), tight)
}

/// `[sup_t f_t ≤ c]`: member sublevel sets intersected with improper domains.
pub fn sup_sublevel_polyhedron(family: &SupFamily, c: &Rational) -> PolyhedronH {
    let parts: Vec<PolyhedronH> = family.members().iter().map(|m| m.f.sublevel_set(c)).collect();
    PolyhedronH::intersect_all(family.dim(), &parts).expect("members share the dimension")
}

/// `dom(sup_t f_t) = ∩_t dom f_t`.
pub fn dom_polyhedron(family: &SupFamily) -> PolyhedronH {
    let parts: Vec<&PolyhedronH> = family.members().iter().map(|m| m.f.domain()).collect();
    PolyhedronH::intersect_all(family.dim(), parts).expect("members share the dimension")
}

/// Ground-truth `N_{[f ≤ 0]}(x)`.
pub fn sublevel_normal_cone(family: &SupFamily, x: &Vector) -> Result<ConeGen> {
    polyhedron_normal_cone(&sup_sublevel_polyhedron(family, &Rational::zero()), x)
}

/// Ground-truth `N_{[f ≤ 0]}(x)` for a quasi-convex family, read off
/// `cl [f ≤ 0]` built from the evaluators rather than the declared sets.
pub fn qc_normal_cone(qc: &SublevelOracleQC, x: &Vector) -> Result<ConeGen> {
    qc.require_feasible(x)?;
    polyhedron_normal_cone(&qc.closed_sublevel()?, x)
}

/// Ground-truth `N_{dom f}(x)`.
pub fn dom_normal_cone(family: &SupFamily, x: &Vector) -> Result<ConeGen> {
    polyhedron_normal_cone(&dom_polyhedron(family), x)
}

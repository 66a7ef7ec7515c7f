use std::fmt;

use num_traits::{One, Signed, Zero};

use super::cone::ConeGen;
use super::dd::{cone_generators, DdConfig};
use super::lp::{LinearProgram, LpOutcome, Relation};
use crate::error::{check_dim, Result};
use crate::num::{rat, ExtValue, Rational, Vector};

/// `{y : ⟨normal, y⟩ ≤ offset}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfSpace {
    pub normal: Vector,
    pub offset: Rational,
}

impl HalfSpace {
    pub fn new(normal: Vector, offset: Rational) -> Self {
        HalfSpace { normal, offset }
    }

    pub fn contains(&self, y: &Vector) -> bool {
        self.normal.dot(y) <= self.offset
    }

    pub fn is_tight(&self, y: &Vector) -> bool {
        self.normal.dot(y) == self.offset
    }

    /// Strictly satisfied at `y`.
    pub fn strictly_contains(&self, y: &Vector) -> bool {
        self.normal.dot(y) < self.offset
    }
}

/// H-representation `{y ∈ ℝⁿ : every constraint holds}`.
///
/// Degenerate half-spaces with a zero normal are normalized at construction:
/// vacuous ones are dropped and a contradictory one replaces the whole list
/// by the single marker `⟨θ, y⟩ ≤ −1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyhedronH {
    dim: usize,
    constraints: Vec<HalfSpace>,
}

impl PolyhedronH {
    pub fn new(dim: usize, constraints: Vec<HalfSpace>) -> Result<Self> {
        for h in &constraints {
            check_dim(dim, h.normal.dim())?;
        }
        let mut kept = Vec::with_capacity(constraints.len());
        for h in constraints {
            if h.normal.is_zero() {
                if h.offset.is_negative() {
                    return Ok(Self::empty(dim));
                }
            } else {
                kept.push(h);
            }
        }
        Ok(PolyhedronH {
            dim,
            constraints: kept,
        })
    }

    /// Builds from integer rows `(normal, offset)`; test and fixture helper.
    pub fn from_int_rows(dim: usize, rows: &[(&[i64], i64)]) -> Self {
        let cs = rows
            .iter()
            .map(|(n, b)| HalfSpace::new(Vector::from_ints(n), rat(*b)))
            .collect();
        Self::new(dim, cs).expect("consistent dimensions")
    }

    pub fn universe(dim: usize) -> Self {
        PolyhedronH {
            dim,
            constraints: Vec::new(),
        }
    }

    pub fn empty(dim: usize) -> Self {
        PolyhedronH {
            dim,
            constraints: vec![HalfSpace::new(Vector::zeros(dim), -Rational::one())],
        }
    }

    /// The box `[lo, hi]ⁿ`.
    pub fn cube(dim: usize, lo: &Rational, hi: &Rational) -> Self {
        let mut cs = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            cs.push(HalfSpace::new(Vector::unit(dim, i), hi.clone()));
            cs.push(HalfSpace::new(-&Vector::unit(dim, i), -lo));
        }
        PolyhedronH { dim, constraints: cs }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> &[HalfSpace] {
        &self.constraints
    }

    /// True when the representation carries the explicit emptiness marker.
    pub fn is_marked_empty(&self) -> bool {
        self.constraints.iter().any(|h| h.normal.is_zero())
    }

    pub fn contains(&self, y: &Vector) -> bool {
        self.constraints.iter().all(|h| h.contains(y))
    }

    /// Every constraint holds strictly at `y` (so `y` is interior when no
    /// constraint is degenerate).
    pub fn strictly_contains(&self, y: &Vector) -> bool {
        self.constraints.iter().all(|h| h.strictly_contains(y))
    }

    pub fn is_empty(&self) -> bool {
        if self.is_marked_empty() {
            return true;
        }
        self.feasible_point().is_none()
    }

    pub fn feasible_point(&self) -> Option<Vector> {
        let mut lp = self.lp_skeleton();
        lp.maximize(vec![Rational::zero(); self.dim]);
        lp.solve().point().map(|p| Vector::new(p.to_vec()))
    }

    /// A point satisfying every constraint strictly, if one exists.
    pub fn strictly_feasible_point(&self) -> Option<Vector> {
        if self.is_marked_empty() {
            return None;
        }
        // max δ s.t. ⟨a, y⟩ + δ ≤ b, δ ≤ 1.
        let n = self.dim;
        let mut lp = LinearProgram::new(n + 1);
        lp.set_all_free();
        for h in &self.constraints {
            let mut row = h.normal.coords().to_vec();
            row.push(Rational::one());
            lp.add_row(row, Relation::Le, h.offset.clone());
        }
        let mut cap = vec![Rational::zero(); n + 1];
        cap[n] = Rational::one();
        lp.add_row(cap.clone(), Relation::Le, Rational::one());
        lp.maximize(cap);
        match lp.solve() {
            LpOutcome::Optimal { value, point } if value.is_positive() => {
                Some(Vector::new(point[..n].to_vec()))
            }
            _ => None,
        }
    }

    pub fn intersect(&self, other: &PolyhedronH) -> Result<PolyhedronH> {
        check_dim(self.dim, other.dim)?;
        let mut cs = self.constraints.clone();
        cs.extend(other.constraints.iter().cloned());
        PolyhedronH::new(self.dim, cs)
    }

    pub fn intersect_all<'a>(dim: usize, parts: impl IntoIterator<Item = &'a PolyhedronH>) -> Result<PolyhedronH> {
        let mut cs = Vec::new();
        for p in parts {
            check_dim(dim, p.dim)?;
            cs.extend(p.constraints.iter().cloned());
        }
        PolyhedronH::new(dim, cs)
    }

    /// `P + v`.
    pub fn translate(&self, v: &Vector) -> PolyhedronH {
        PolyhedronH {
            dim: self.dim,
            constraints: self
                .constraints
                .iter()
                .map(|h| HalfSpace::new(h.normal.clone(), &h.offset + h.normal.dot(v)))
                .collect(),
        }
    }

    pub fn with_constraint(&self, h: HalfSpace) -> Result<PolyhedronH> {
        let mut cs = self.constraints.clone();
        cs.push(h);
        PolyhedronH::new(self.dim, cs)
    }

    fn lp_skeleton(&self) -> LinearProgram {
        let mut lp = LinearProgram::new(self.dim);
        lp.set_all_free();
        for h in &self.constraints {
            lp.add_row(h.normal.coords().to_vec(), Relation::Le, h.offset.clone());
        }
        lp
    }

    /// Every point of `self` lies in `other`, checked by one LP per
    /// constraint of `other`.
    pub fn is_subset_of(&self, other: &PolyhedronH) -> Result<bool> {
        Ok(self.point_outside(other)?.is_none())
    }

    /// A point of `self` violating some constraint of `other`, if any.
    pub fn point_outside(&self, other: &PolyhedronH) -> Result<Option<Vector>> {
        check_dim(self.dim, other.dim)?;
        if self.is_empty() {
            return Ok(None);
        }
        if other.is_marked_empty() {
            return Ok(self.feasible_point());
        }
        for h in &other.constraints {
            match lp_solve(&h.normal, self)? {
                LpStatus::Optimal { value, point } if value > h.offset => return Ok(Some(point)),
                LpStatus::Optimal { .. } | LpStatus::Infeasible => {}
                LpStatus::Unbounded { point, direction } => {
                    // ⟨normal, direction⟩ > 0: step far enough along the ray.
                    let step = (&h.offset - h.normal.dot(&point)) / h.normal.dot(&direction);
                    let t = if step.is_negative() { Rational::one() } else { step + Rational::one() };
                    return Ok(Some(&point + &direction.scale(&t)));
                }
            }
        }
        Ok(None)
    }

    pub fn same_set(&self, other: &PolyhedronH) -> Result<bool> {
        Ok(self.is_subset_of(other)? && other.is_subset_of(self)?)
    }
}

impl fmt::Display for PolyhedronH {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, h) in self.constraints.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "<{}, y> <= {}", h.normal, h.offset)?;
        }
        write!(f, "}}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Infeasible,
    Unbounded { point: Vector, direction: Vector },
    Optimal { value: Rational, point: Vector },
}

/// Exact `max ⟨objective, y⟩` over `P`.
pub fn lp_solve(objective: &Vector, p: &PolyhedronH) -> Result<LpStatus> {
    check_dim(p.dim, objective.dim())?;
    if p.is_marked_empty() {
        return Ok(LpStatus::Infeasible);
    }
    let mut lp = p.lp_skeleton();
    lp.maximize(objective.coords().to_vec());
    Ok(match lp.solve() {
        LpOutcome::Infeasible => LpStatus::Infeasible,
        LpOutcome::Unbounded { point, direction } => LpStatus::Unbounded {
            point: Vector::new(point),
            direction: Vector::new(direction),
        },
        LpOutcome::Optimal { value, point } => LpStatus::Optimal {
            value,
            point: Vector::new(point),
        },
    })
}

/// V-representation `co(points) + cone(rays)`. No points means the empty set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorSet {
    dim: usize,
    points: Vec<Vector>,
    rays: Vec<Vector>,
}

impl GeneratorSet {
    /// Points are sorted and deduplicated; rays are scaled to primitive
    /// integer vectors, zero rays dropped. With no points the rays are
    /// discarded (`A + ∅ = ∅`).
    pub fn new(dim: usize, points: Vec<Vector>, rays: Vec<Vector>) -> Result<Self> {
        for v in points.iter().chain(&rays) {
            check_dim(dim, v.dim())?;
        }
        let mut points = points;
        points.sort();
        points.dedup();
        let mut rays: Vec<Vector> = if points.is_empty() {
            Vec::new()
        } else {
            rays.iter().filter(|r| !r.is_zero()).map(Vector::primitive).collect()
        };
        rays.sort();
        rays.dedup();
        Ok(GeneratorSet { dim, points, rays })
    }

    pub fn empty(dim: usize) -> Self {
        GeneratorSet {
            dim,
            points: Vec::new(),
            rays: Vec::new(),
        }
    }

    pub fn singleton(p: Vector) -> Self {
        GeneratorSet {
            dim: p.dim(),
            points: vec![p],
            rays: Vec::new(),
        }
    }

    /// `cone(rays)` as a set rooted at θ.
    pub fn from_cone(cone: &ConeGen) -> Self {
        GeneratorSet::new(cone.dim(), vec![Vector::zeros(cone.dim())], cone.rays().to_vec())
            .expect("cone dimensions agree")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    pub fn rays(&self) -> &[Vector] {
        &self.rays
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty()
    }

    /// `s·A` for `s > 0`.
    pub fn scale(&self, s: &Rational) -> GeneratorSet {
        debug_assert!(s.is_positive());
        GeneratorSet {
            dim: self.dim,
            points: self.points.iter().map(|p| p.scale(s)).collect(),
            rays: self.rays.clone(),
        }
    }

    pub fn contains(&self, y: &Vector) -> Result<bool> {
        check_dim(self.dim, y.dim())?;
        Ok(self.decompose(y).is_some())
    }

    /// Weights `(λ, μ)` with `Σλ = 1`, `λ, μ ≥ 0` and
    /// `y = Σ λ_i points_i + Σ μ_j rays_j`, when `y` belongs to the set.
    pub fn decompose(&self, y: &Vector) -> Option<(Vec<Rational>, Vec<Rational>)> {
        if self.points.is_empty() {
            return None;
        }
        let np = self.points.len();
        let nr = self.rays.len();
        let mut lp = LinearProgram::new(np + nr);
        for j in 0..self.dim {
            let row: Vec<Rational> = self
                .points
                .iter()
                .chain(&self.rays)
                .map(|g| g.get(j).clone())
                .collect();
            lp.add_row(row, Relation::Eq, y.get(j).clone());
        }
        let mut sum = vec![Rational::one(); np];
        sum.extend(std::iter::repeat(Rational::zero()).take(nr));
        lp.add_row(sum, Relation::Eq, Rational::one());
        lp.maximize(vec![Rational::zero(); np + nr]);
        lp.solve().point().map(|w| (w[..np].to_vec(), w[np..].to_vec()))
    }

    /// Every generator of `self` lies in `other` (hence `self ⊆ other`).
    pub fn is_subset_of(&self, other: &GeneratorSet) -> Result<bool> {
        check_dim(self.dim, other.dim)?;
        if self.is_empty() {
            return Ok(true);
        }
        if other.is_empty() {
            return Ok(false);
        }
        let rec = other.recession_cone();
        for p in &self.points {
            if !other.contains(p)? {
                return Ok(false);
            }
        }
        for r in &self.rays {
            if rec.contains(r)?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn same_set(&self, other: &GeneratorSet) -> Result<bool> {
        Ok(self.is_subset_of(other)? && other.is_subset_of(self)?)
    }

    /// `cone(rays)`; `{θ}` for the empty set.
    pub fn recession_cone(&self) -> ConeGen {
        if self.is_empty() {
            ConeGen::zero(self.dim)
        } else {
            ConeGen::new(self.dim, self.rays.clone()).expect("dimensions agree")
        }
    }

    /// `σ_A(d) = sup_{a ∈ A} ⟨a, d⟩`, with `σ_∅ ≡ −∞`.
    pub fn support_function(&self, d: &Vector) -> Result<ExtValue> {
        check_dim(self.dim, d.dim())?;
        if self.is_empty() {
            return Ok(ExtValue::NegInf);
        }
        if self.rays.iter().any(|r| r.dot(d).is_positive()) {
            return Ok(ExtValue::PosInf);
        }
        let best = self.points.iter().map(|p| p.dot(d)).max().expect("nonempty");
        Ok(ExtValue::Finite(best))
    }
}

impl fmt::Display for GeneratorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "∅");
        }
        write!(f, "co{{")?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}} + cone{{")?;
        for (i, r) in self.rays.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "}}")
    }
}

/// H → V conversion by double description on the homogenized cone.
pub fn h_to_v(p: &PolyhedronH) -> Result<GeneratorSet> {
    h_to_v_with(p, &DdConfig::default())
}

pub fn h_to_v_with(p: &PolyhedronH, config: &DdConfig) -> Result<GeneratorSet> {
    let n = p.dim();
    if p.is_marked_empty() {
        return Ok(GeneratorSet::empty(n));
    }
    // (y, λ) with ⟨a, y⟩ − bλ ≤ 0 and λ ≥ 0.
    let mut rows: Vec<Vec<Rational>> = p
        .constraints()
        .iter()
        .map(|h| {
            let mut r = h.normal.coords().to_vec();
            r.push(-&h.offset);
            r
        })
        .collect();
    let mut lam = vec![Rational::zero(); n + 1];
    lam[n] = -Rational::one();
    rows.push(lam);

    let desc = cone_generators(&rows, n + 1, config)?;
    let mut points = Vec::new();
    let mut rays = Vec::new();
    for l in &desc.lineality {
        let v = Vector::from_bigints(l);
        let (y, lambda) = v.split_last();
        debug_assert!(lambda.is_zero());
        rays.push(-&y);
        rays.push(y);
    }
    for r in &desc.rays {
        let v = Vector::from_bigints(r);
        let (y, lambda) = v.split_last();
        if lambda.is_zero() {
            rays.push(y);
        } else {
            points.push(y.scale(&lambda.recip()));
        }
    }
    GeneratorSet::new(n, points, rays)
}

/// V → H conversion through the polar cone of the homogenization.
pub fn v_to_h(g: &GeneratorSet) -> Result<PolyhedronH> {
    v_to_h_with(g, &DdConfig::default())
}

pub fn v_to_h_with(g: &GeneratorSet, config: &DdConfig) -> Result<PolyhedronH> {
    let n = g.dim();
    if g.is_empty() {
        return Ok(PolyhedronH::empty(n));
    }
    // Valid inequalities ⟨a, y⟩ ≤ −c  ⇔  ⟨(p, 1), (a, c)⟩ ≤ 0, ⟨(r, 0), (a, c)⟩ ≤ 0.
    let rows: Vec<Vec<Rational>> = g
        .points()
        .iter()
        .map(|p| p.lift(Rational::one()).into_coords())
        .chain(g.rays().iter().map(|r| r.lift(Rational::zero()).into_coords()))
        .collect();
    let desc = cone_generators(&rows, n + 1, config)?;
    let mut cs = Vec::new();
    for l in &desc.lineality {
        let (a, c) = Vector::from_bigints(l).split_last();
        cs.push(HalfSpace::new(-&a, c.clone()));
        cs.push(HalfSpace::new(a, -c));
    }
    for r in &desc.rays {
        let (a, c) = Vector::from_bigints(r).split_last();
        cs.push(HalfSpace::new(a, -c));
    }
    cs.sort();
    cs.dedup();
    PolyhedronH::new(n, cs)
}

/// `[P]_∞ = {y : ⟨a_i, y⟩ ≤ 0}` for nonempty `P`; `{θ}` for the empty set.
pub fn recession_cone(p: &PolyhedronH) -> Result<ConeGen> {
    let n = p.dim();
    if p.is_empty() {
        return Ok(ConeGen::zero(n));
    }
    let rows: Vec<Vec<Rational>> = p
        .constraints()
        .iter()
        .map(|h| h.normal.coords().to_vec())
        .collect();
    let desc = cone_generators(&rows, n, &DdConfig::default())?;
    Ok(ConeGen::from_description(n, &desc))
}

/// Closed convex hull of a finite union of polyhedra given by generators.
/// Empty members are dropped.
pub fn closed_conv_hull_union(dim: usize, sets: &[GeneratorSet]) -> Result<GeneratorSet> {
    let mut points = Vec::new();
    let mut rays = Vec::new();
    for s in sets {
        check_dim(dim, s.dim())?;
        if s.is_empty() {
            continue;
        }
        points.extend(s.points().iter().cloned());
        rays.extend(s.rays().iter().cloned());
    }
    GeneratorSet::new(dim, points, rays)
}

/// `A + B`, with `A + ∅ = ∅ + A = ∅`.
pub fn minkowski_sum(a: &GeneratorSet, b: &GeneratorSet) -> Result<GeneratorSet> {
    check_dim(a.dim(), b.dim())?;
    if a.is_empty() || b.is_empty() {
        return Ok(GeneratorSet::empty(a.dim()));
    }
    let points = a
        .points()
        .iter()
        .flat_map(|p| b.points().iter().map(move |q| p + q))
        .collect();
    let rays = a.rays().iter().chain(b.rays()).cloned().collect();
    GeneratorSet::new(a.dim(), points, rays)
}

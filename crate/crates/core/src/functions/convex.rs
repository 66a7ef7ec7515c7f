use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::geometry::{h_to_v, GeneratorSet, HalfSpace, LinearProgram, LpOutcome, PolyhedronH, Relation};
use crate::num::{ExtValue, Rational, Vector};

/// `x ↦ ⟨slope, x⟩ + intercept`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffinePiece {
    pub slope: Vector,
    pub intercept: Rational,
}

impl AffinePiece {
    pub fn new(slope: Vector, intercept: Rational) -> Self {
        AffinePiece { slope, intercept }
    }

    pub fn dim(&self) -> usize {
        self.slope.dim()
    }

    pub fn eval(&self, x: &Vector) -> Rational {
        self.slope.dot(x) + &self.intercept
    }

    pub fn scale(&self, s: &Rational) -> AffinePiece {
        AffinePiece::new(self.slope.scale(s), &self.intercept * s)
    }
}

/// `max_i (⟨a_i, x⟩ + b_i)` on a polyhedral domain, `+∞` elsewhere.
///
/// Lower semicontinuous by construction. The V-representation of the
/// epigraph is computed once and cached.
#[derive(Debug)]
pub struct PolyhedralFunction {
    dim: usize,
    pieces: Vec<AffinePiece>,
    domain: PolyhedronH,
    epigraph: OnceLock<Result<GeneratorSet>>,
}

impl Clone for PolyhedralFunction {
    fn clone(&self) -> Self {
        PolyhedralFunction {
            dim: self.dim,
            pieces: self.pieces.clone(),
            domain: self.domain.clone(),
            epigraph: self.epigraph.clone(),
        }
    }
}

impl PartialEq for PolyhedralFunction {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.pieces == other.pieces && self.domain == other.domain
    }
}

impl Eq for PolyhedralFunction {}

/// Outcome of minimizing a polyhedral function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Minimum {
    EmptyDomain,
    Unbounded { point: Vector, direction: Vector },
    Attained { value: Rational, point: Vector },
}

impl PolyhedralFunction {
    pub fn new(pieces: Vec<AffinePiece>, domain: PolyhedronH) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::Input("a polyhedral function needs at least one piece".into()));
        }
        let dim = domain.dim();
        for p in &pieces {
            check_dim(dim, p.dim())?;
        }
        let mut pieces = pieces;
        pieces.sort();
        pieces.dedup();
        Ok(PolyhedralFunction {
            dim,
            pieces,
            domain,
            epigraph: OnceLock::new(),
        })
    }

    pub fn max_affine(pieces: Vec<AffinePiece>) -> Result<Self> {
        let dim = pieces
            .first()
            .map(AffinePiece::dim)
            .ok_or_else(|| Error::Input("a polyhedral function needs at least one piece".into()))?;
        Self::new(pieces, PolyhedronH::universe(dim))
    }

    pub fn affine(slope: Vector, intercept: Rational) -> Self {
        let dim = slope.dim();
        Self::new(vec![AffinePiece::new(slope, intercept)], PolyhedronH::universe(dim)).expect("one piece")
    }

    /// `I_D`: the zero piece on `D`.
    pub fn indicator(domain: PolyhedronH) -> Self {
        let dim = domain.dim();
        Self::new(vec![AffinePiece::new(Vector::zeros(dim), Rational::zero())], domain).expect("one piece")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &[AffinePiece] {
        &self.pieces
    }

    pub fn domain(&self) -> &PolyhedronH {
        &self.domain
    }

    pub fn is_proper(&self) -> bool {
        !self.domain.is_empty()
    }

    /// The single piece when the function is affine on all of ℝⁿ.
    pub fn as_global_affine(&self) -> Option<&AffinePiece> {
        (self.pieces.len() == 1 && self.domain.constraints().is_empty()).then(|| &self.pieces[0])
    }

    pub fn evaluate(&self, x: &Vector) -> Result<ExtValue> {
        check_dim(self.dim, x.dim())?;
        if !self.domain.contains(x) {
            return Ok(ExtValue::PosInf);
        }
        Ok(ExtValue::Finite(self.max_piece(x)))
    }

    fn max_piece(&self, x: &Vector) -> Rational {
        self.pieces.iter().map(|p| p.eval(x)).max().expect("nonempty pieces")
    }

    /// `s·f` for `s > 0`.
    pub fn scale(&self, s: &Rational) -> Result<PolyhedralFunction> {
        if !s.is_positive() {
            return Err(Error::Input("scaling factor must be positive".into()));
        }
        Self::new(self.pieces.iter().map(|p| p.scale(s)).collect(), self.domain.clone())
    }

    /// `[f ≤ c]`.
    pub fn sublevel_set(&self, c: &Rational) -> PolyhedronH {
        let extra = self
            .pieces
            .iter()
            .map(|p| HalfSpace::new(p.slope.clone(), c - &p.intercept));
        let cs = self.domain.constraints().iter().cloned().chain(extra).collect();
        PolyhedronH::new(self.dim, cs).expect("dimensions agree")
    }

    /// H-representation of `epi f ⊂ ℝⁿ⁺¹`.
    pub fn epigraph_h(&self) -> PolyhedronH {
        let mut cs: Vec<HalfSpace> = self
            .domain
            .constraints()
            .iter()
            .map(|h| HalfSpace::new(h.normal.lift(Rational::zero()), h.offset.clone()))
            .collect();
        for p in &self.pieces {
            cs.push(HalfSpace::new(p.slope.lift(-Rational::one()), -&p.intercept));
        }
        PolyhedronH::new(self.dim + 1, cs).expect("dimensions agree")
    }

    /// Cached V-representation of the epigraph.
    pub fn epigraph(&self) -> Result<&GeneratorSet> {
        self.epigraph
            .get_or_init(|| h_to_v(&self.epigraph_h()))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Exact `inf f` by the epigraph LP.
    pub fn minimize(&self) -> Minimum {
        let n = self.dim;
        let mut lp = LinearProgram::new(n + 1);
        lp.set_all_free();
        for h in self.epigraph_h().constraints() {
            lp.add_row(h.normal.coords().to_vec(), Relation::Le, h.offset.clone());
        }
        let mut obj = vec![Rational::zero(); n + 1];
        obj[n] = Rational::one();
        lp.minimize(obj);
        match lp.solve() {
            LpOutcome::Infeasible => Minimum::EmptyDomain,
            LpOutcome::Unbounded { point, direction } => Minimum::Unbounded {
                point: Vector::new(point[..n].to_vec()),
                direction: Vector::new(direction[..n].to_vec()),
            },
            LpOutcome::Optimal { value, point } => Minimum::Attained {
                value,
                point: Vector::new(point[..n].to_vec()),
            },
        }
    }
}

/// Value `−∞` on a nonempty polyhedral domain, `+∞` elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImproperFunction {
    domain: PolyhedronH,
}

impl ImproperFunction {
    pub fn new(domain: PolyhedronH) -> Result<Self> {
        if domain.is_empty() {
            return Err(Error::Input("an improper member needs a nonempty domain".into()));
        }
        Ok(ImproperFunction { domain })
    }

    pub fn domain(&self) -> &PolyhedronH {
        &self.domain
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtendedFunction {
    Proper(PolyhedralFunction),
    Improper(ImproperFunction),
}

impl ExtendedFunction {
    pub fn dim(&self) -> usize {
        self.domain().dim()
    }

    pub fn domain(&self) -> &PolyhedronH {
        match self {
            ExtendedFunction::Proper(f) => f.domain(),
            ExtendedFunction::Improper(g) => g.domain(),
        }
    }

    pub fn is_proper(&self) -> bool {
        match self {
            ExtendedFunction::Proper(f) => f.is_proper(),
            ExtendedFunction::Improper(_) => false,
        }
    }

    pub fn as_proper(&self) -> Option<&PolyhedralFunction> {
        match self {
            ExtendedFunction::Proper(f) if f.is_proper() => Some(f),
            _ => None,
        }
    }

    pub fn evaluate(&self, x: &Vector) -> Result<ExtValue> {
        match self {
            ExtendedFunction::Proper(f) => f.evaluate(x),
            ExtendedFunction::Improper(g) => {
                check_dim(g.domain.dim(), x.dim())?;
                Ok(if g.domain.contains(x) {
                    ExtValue::NegInf
                } else {
                    ExtValue::PosInf
                })
            }
        }
    }

    /// `[f ≤ c]`; for an improper member this is its domain for every `c`.
    pub fn sublevel_set(&self, c: &Rational) -> PolyhedronH {
        match self {
            ExtendedFunction::Proper(f) => f.sublevel_set(c),
            ExtendedFunction::Improper(g) => g.domain.clone(),
        }
    }
}

impl From<PolyhedralFunction> for ExtendedFunction {
    fn from(f: PolyhedralFunction) -> Self {
        ExtendedFunction::Proper(f)
    }
}

impl From<ImproperFunction> for ExtendedFunction {
    fn from(g: ImproperFunction) -> Self {
        ExtendedFunction::Improper(g)
    }
}

pub fn evaluate(f: &ExtendedFunction, x: &Vector) -> Result<ExtValue> {
    f.evaluate(x)
}

pub fn sublevel_set(f: &PolyhedralFunction, c: &Rational) -> PolyhedronH {
    f.sublevel_set(c)
}

fn nonnegative(eps: &Rational) -> Result<()> {
    if eps.is_negative() {
        Err(Error::Input(format!("ε must be nonnegative, got {eps}")))
    } else {
        Ok(())
    }
}

/// `∂_ε f(x)`, empty when `x ∉ dom f`.
///
/// For every epigraph vertex `(y, r)`: `⟨x*, y − x⟩ ≤ r − f(x) + ε`;
/// for every epigraph ray `(w, ρ)`: `⟨x*, w⟩ ≤ ρ`.
pub fn eps_subdifferential(f: &PolyhedralFunction, x: &Vector, eps: &Rational) -> Result<GeneratorSet> {
    nonnegative(eps)?;
    let fx = match f.evaluate(x)? {
        ExtValue::Finite(v) => v,
        _ => return Ok(GeneratorSet::empty(f.dim())),
    };
    let epi = f.epigraph()?;
    let mut cs = Vec::with_capacity(epi.points().len() + epi.rays().len());
    for p in epi.points() {
        let (y, r) = p.split_last();
        cs.push(HalfSpace::new(&y - x, r - &fx + eps));
    }
    for ray in epi.rays() {
        let (w, rho) = ray.split_last();
        cs.push(HalfSpace::new(w, rho));
    }
    h_to_v(&PolyhedronH::new(f.dim(), cs)?)
}

/// `N^ε_D(x) = {x* : ⟨x*, y − x⟩ ≤ ε ∀ y ∈ D}`, empty when `x ∉ D`.
pub fn eps_normal_set(d: &PolyhedronH, x: &Vector, eps: &Rational) -> Result<GeneratorSet> {
    nonnegative(eps)?;
    check_dim(d.dim(), x.dim())?;
    if !d.contains(x) {
        return Ok(GeneratorSet::empty(d.dim()));
    }
    let gens = h_to_v(d)?;
    let mut cs = Vec::with_capacity(gens.points().len() + gens.rays().len());
    for v in gens.points() {
        cs.push(HalfSpace::new(v - x, eps.clone()));
    }
    for r in gens.rays() {
        cs.push(HalfSpace::new(r.clone(), Rational::zero()));
    }
    h_to_v(&PolyhedronH::new(d.dim(), cs)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{rat, ratio};

    fn abs_1d() -> PolyhedralFunction {
        PolyhedralFunction::max_affine(vec![
            AffinePiece::new(Vector::from_ints(&[1]), rat(0)),
            AffinePiece::new(Vector::from_ints(&[-1]), rat(0)),
        ])
        .unwrap()
    }

    fn interval(lo: i64, hi: i64) -> GeneratorSet {
        GeneratorSet::new(1, vec![Vector::from_ints(&[lo]), Vector::from_ints(&[hi])], vec![]).unwrap()
    }

    #[test]
    fn evaluation() {
        let f = PolyhedralFunction::max_affine(vec![
            AffinePiece::new(Vector::from_ints(&[1, 0]), rat(0)),
            AffinePiece::new(Vector::from_ints(&[0, 1]), rat(0)),
        ])
        .unwrap();
        assert_eq!(f.evaluate(&Vector::from_ints(&[1, 3])).unwrap(), ExtValue::Finite(rat(3)));
        let g = PolyhedralFunction::indicator(PolyhedronH::cube(1, &rat(0), &rat(1)));
        assert_eq!(g.evaluate(&Vector::from_ints(&[2])).unwrap(), ExtValue::PosInf);
        let h: ExtendedFunction = ImproperFunction::new(PolyhedronH::cube(1, &rat(0), &rat(1))).unwrap().into();
        assert_eq!(h.evaluate(&Vector::new(vec![ratio(1, 2)])).unwrap(), ExtValue::NegInf);
        assert!(!h.is_proper());
        assert!(ImproperFunction::new(PolyhedronH::empty(1)).is_err());
    }

    #[test]
    fn sublevel_sets() {
        let f = PolyhedralFunction::max_affine(vec![
            AffinePiece::new(Vector::from_ints(&[1]), rat(-1)),
            AffinePiece::new(Vector::from_ints(&[-1]), rat(-1)),
        ])
        .unwrap();
        let s = f.sublevel_set(&rat(0));
        assert!(s.same_set(&PolyhedronH::cube(1, &rat(-1), &rat(1))).unwrap());
        assert!(f.sublevel_set(&rat(-2)).is_empty());
    }

    #[test]
    fn abs_subdifferential_at_kink() {
        for eps in [rat(0), ratio(1, 3), rat(5)] {
            let g = eps_subdifferential(&abs_1d(), &Vector::from_ints(&[0]), &eps).unwrap();
            assert!(g.same_set(&interval(-1, 1)).unwrap());
        }
    }

    #[test]
    fn affine_subdifferential_is_slope() {
        let f = PolyhedralFunction::affine(Vector::from_ints(&[2, -1]), rat(7));
        for eps in [rat(0), rat(3)] {
            let g = eps_subdifferential(&f, &Vector::from_ints(&[4, 4]), &eps).unwrap();
            assert_eq!(g.points(), &[Vector::from_ints(&[2, -1])]);
            assert!(g.rays().is_empty());
        }
    }

    #[test]
    fn truncated_identity_subdifferential() {
        // f = max(x, −1) at x = −2 with ε = 1/2: g ∈ [0, 1/2].
        let f = PolyhedralFunction::max_affine(vec![
            AffinePiece::new(Vector::from_ints(&[1]), rat(0)),
            AffinePiece::new(Vector::from_ints(&[0]), rat(-1)),
        ])
        .unwrap();
        let x = Vector::from_ints(&[-2]);
        let g = eps_subdifferential(&f, &x, &ratio(1, 2)).unwrap();
        let expected =
            GeneratorSet::new(1, vec![Vector::from_ints(&[0]), Vector::new(vec![ratio(1, 2)])], vec![]).unwrap();
        assert!(g.same_set(&expected).unwrap());
        // Brute force over a rational y-sweep: accepted slopes satisfy the defining inequality.
        let fx = rat(-1);
        for gi in -4..=4 {
            let slope = ratio(gi, 8);
            let ok = (-40..=40).all(|k| {
                let y = ratio(k, 4);
                let fy = std::cmp::max(y.clone(), rat(-1));
                &slope * (&y - rat(-2)) <= fy - &fx + ratio(1, 2)
            });
            assert_eq!(ok, g.contains(&Vector::new(vec![slope])).unwrap());
        }
    }

    #[test]
    fn off_domain_subdifferential_is_empty() {
        let f = PolyhedralFunction::indicator(PolyhedronH::cube(1, &rat(0), &rat(1)));
        assert!(eps_subdifferential(&f, &Vector::from_ints(&[3]), &rat(1)).unwrap().is_empty());
        assert!(eps_subdifferential(&f, &Vector::from_ints(&[0]), &rat(-1)).is_err());
    }

    #[test]
    fn normal_sets() {
        let sq = PolyhedronH::cube(2, &rat(0), &rat(1));
        let n = eps_normal_set(&sq, &Vector::zeros(2), &rat(1)).unwrap();
        // {x* : max(x₁*, 0) + max(x₂*, 0) ≤ 1}
        let expected = PolyhedronH::from_int_rows(2, &[(&[1, 0], 1), (&[0, 1], 1), (&[1, 1], 1)]);
        assert!(n.same_set(&h_to_v(&expected).unwrap()).unwrap());

        let c = Vector::new(vec![ratio(1, 2), ratio(1, 3)]);
        let n0 = eps_normal_set(&sq, &c, &rat(0)).unwrap();
        assert_eq!(n0.points(), &[Vector::zeros(2)]);
        assert!(n0.rays().is_empty());

        let half = PolyhedronH::from_int_rows(1, &[(&[1], 0)]);
        for eps in [rat(0), rat(2)] {
            let n = eps_normal_set(&half, &Vector::zeros(1), &eps).unwrap();
            assert_eq!(n.points(), &[Vector::zeros(1)]);
            assert_eq!(n.rays(), &[Vector::from_ints(&[1])]);
        }
        assert!(eps_normal_set(&half, &Vector::from_ints(&[1]), &rat(1)).unwrap().is_empty());
    }

    #[test]
    fn minimization() {
        match abs_1d().minimize() {
            Minimum::Attained { value, .. } => assert_eq!(value, rat(0)),
            other => panic!("{other:?}"),
        }
        let lin = PolyhedralFunction::affine(Vector::from_ints(&[1]), rat(0));
        assert!(matches!(lin.minimize(), Minimum::Unbounded { .. }));
        let empty = PolyhedralFunction::indicator(PolyhedronH::empty(1));
        assert_eq!(empty.minimize(), Minimum::EmptyDomain);
        assert!(!empty.is_proper());
    }
}

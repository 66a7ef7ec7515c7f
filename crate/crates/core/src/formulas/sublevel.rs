use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use super::family::{require_positive, Member, SGrid, SupFamily};
use crate::error::{Error, Result};
use crate::functions::{eps_normal_set, eps_subdifferential, ExtendedFunction, PolyhedralFunction};
use crate::geometry::{
    closed_conv_hull_union, cone_equal, h_to_v, ConeGen, GeneratorSet, LinearProgram, LpOutcome, PolyhedronH,
    Relation,
};
use crate::num::{ExtValue, Rational, Vector};
use crate::oracle;
use crate::parallel::Execution;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Closed form for families whose proper members are affine on ℝⁿ.
    ExactAffine,
    /// Union over `s > 0` sampled on an [`SGrid`].
    Sampled,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact-affine" => Ok(Mode::ExactAffine),
            "sampled" => Ok(Mode::Sampled),
            other => Err(Error::Input(format!("unknown mode {other:?} (exact-affine|sampled)"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::ExactAffine => "exact-affine",
            Mode::Sampled => "sampled",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exactness {
    Exact,
    InnerApproximation,
}

impl fmt::Display for Exactness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Exactness::Exact => "exact",
            Exactness::InnerApproximation => "inner-approximation",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContributionKind {
    /// `∂_ε(s f_t)(x) = s ∂_{ε/s} f_t(x)`.
    Scaled { s: Rational },
    /// `cone(∂f_t(x))` for a member with `f_t(x) = 0`: the limit `s → ∞`.
    Tail,
    /// `N^ε_{dom f_t}(x)` for an improper member.
    DomainNormal,
    /// Ray `a_t` of an affine member with `f_t(x) = 0`.
    AffineRay,
    /// Segment `co{θ, r·a_t}` of an affine member with `f_t(x) < 0`.
    AffineSegment { reach: Rational },
    /// `∂_ε(α_t f_t)(x)`.
    Weighted { alpha: Rational },
    /// `N^ε_{[f_t ≤ 0]}(x)` for a quasi-convex member.
    SublevelNormal,
}

impl fmt::Display for ContributionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContributionKind::Scaled { s } => write!(f, "scaled(s={s})"),
            ContributionKind::Tail => write!(f, "tail"),
            ContributionKind::DomainNormal => write!(f, "domain-normal"),
            ContributionKind::AffineRay => write!(f, "affine-ray"),
            ContributionKind::AffineSegment { reach } => write!(f, "affine-segment(r={reach})"),
            ContributionKind::Weighted { alpha } => write!(f, "weighted(alpha={alpha})"),
            ContributionKind::SublevelNormal => write!(f, "sublevel-normal"),
        }
    }
}

/// One entry of the branch log.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contribution {
    pub member: String,
    pub kind: ContributionKind,
    pub points: usize,
    pub rays: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaResult {
    pub cone: ConeGen,
    /// Closed convex hull of all contributions; `cone` is its recession cone.
    pub hull: GeneratorSet,
    pub eps: Rational,
    pub grid: Option<SGrid>,
    pub contributions: Vec<Contribution>,
    pub exactness: Exactness,
}

pub(crate) type Piece = (Contribution, GeneratorSet);

pub(crate) fn logged(member: &str, kind: ContributionKind, set: GeneratorSet) -> Piece {
    let c = Contribution {
        member: member.to_string(),
        kind,
        points: set.points().len(),
        rays: set.rays().len(),
    };
    (c, set)
}

pub(crate) fn assemble(dim: usize, eps: &Rational, grid: Option<SGrid>, pieces: Vec<Piece>, exactness: Exactness) -> Result<FormulaResult> {
    let sets: Vec<GeneratorSet> = pieces.iter().map(|(_, s)| s.clone()).collect();
    let hull = closed_conv_hull_union(dim, &sets)?;
    Ok(FormulaResult {
        cone: hull.recession_cone(),
        hull,
        eps: eps.clone(),
        grid,
        contributions: pieces.into_iter().map(|(c, _)| c).collect(),
        exactness,
    })
}

fn member_values(family: &SupFamily, x: &Vector) -> Result<Vec<Option<Rational>>> {
    family
        .members()
        .iter()
        .map(|m| match m.f.as_proper() {
            Some(p) => match p.evaluate(x)? {
                ExtValue::Finite(v) => Ok(Some(v)),
                _ => Err(Error::Precondition(format!("member {} is +inf at the query point", m.id))),
            },
            None => Ok(None),
        })
        .collect()
}

fn improper_pieces(family: &SupFamily, x: &Vector, eps: &Rational) -> Result<Vec<Piece>> {
    let mut out = Vec::new();
    for m in family.members() {
        if !m.f.is_proper() {
            let n = eps_normal_set(m.f.domain(), x, eps)?;
            out.push(logged(&m.id, ContributionKind::DomainNormal, n));
        }
    }
    Ok(out)
}

/// Every `(t, s)` contribution for `s` in `values`, plus tails and domain terms.
fn sampled_pieces(
    family: &SupFamily,
    x: &Vector,
    eps: &Rational,
    values: &[Rational],
    exec: Execution,
) -> Result<(BTreeMap<(usize, Rational), Piece>, Vec<Piece>)> {
    let fx = member_values(family, x)?;
    let mut jobs: Vec<(usize, Rational)> = Vec::new();
    for s in values {
        for (i, v) in fx.iter().enumerate() {
            if let Some(v) = v {
                if s * v >= -eps {
                    jobs.push((i, s.clone()));
                }
            }
        }
    }
    let members = family.members();
    let scaled = exec.try_map(&jobs, |(i, s)| {
        let f = members[*i].f.as_proper().expect("proper member");
        let g = eps_subdifferential(f, x, &(eps / s))?.scale(s);
        Ok(((*i, s.clone()), logged(&members[*i].id, ContributionKind::Scaled { s: s.clone() }, g)))
    })?;
    let mut fixed = Vec::new();
    for (i, v) in fx.iter().enumerate() {
        if v.as_ref().is_some_and(Zero::is_zero) {
            let f = members[i].f.as_proper().expect("proper member");
            let g = eps_subdifferential(f, x, &Rational::zero())?;
            let rays = g.points().iter().chain(g.rays()).cloned().collect();
            let tail = GeneratorSet::new(family.dim(), vec![Vector::zeros(family.dim())], rays)?;
            fixed.push(logged(&members[i].id, ContributionKind::Tail, tail));
        }
    }
    fixed.extend(improper_pieces(family, x, eps)?);
    Ok((scaled.into_iter().collect(), fixed))
}

fn sampled_result(
    family: &SupFamily,
    x: &Vector,
    eps: &Rational,
    grid: &SGrid,
    exec: Execution,
    certify: bool,
) -> Result<FormulaResult> {
    let refined = grid.refine();
    let values = if certify { refined.values() } else { grid.values() };
    let (scaled, fixed) = sampled_pieces(family, x, eps, values, exec)?;
    let select = |g: &SGrid| -> Vec<Piece> {
        let mut out: Vec<Piece> = scaled
            .iter()
            .filter(|((_, s), _)| g.values().binary_search(s).is_ok())
            .map(|(_, p)| p.clone())
            .collect();
        out.extend(fixed.iter().cloned());
        out
    };
    let mut result = assemble(family.dim(), eps, Some(grid.clone()), select(grid), Exactness::InnerApproximation)?;
    if certify {
        let finer = assemble(family.dim(), eps, Some(refined.clone()), select(&refined), Exactness::InnerApproximation)?;
        let truth = oracle::sublevel_normal_cone(family, x)?;
        if cone_equal(&result.cone, &finer.cone)? && cone_equal(&result.cone, &truth)? {
            result.exactness = Exactness::Exact;
        }
    }
    Ok(result)
}

fn exact_affine_result(family: &SupFamily, x: &Vector, eps: &Rational, grid: Option<SGrid>) -> Result<FormulaResult> {
    let n = family.dim();
    let mut pieces = Vec::new();
    for m in family.members() {
        let Some(p) = m.f.as_proper() else { continue };
        let a = p.as_global_affine().ok_or_else(|| {
            Error::Input(format!(
                "exact-affine mode needs every proper member affine on the whole space; {} is not",
                m.id
            ))
        })?;
        let v = a.eval(x);
        if v.is_zero() {
            let ray = GeneratorSet::new(n, vec![Vector::zeros(n)], vec![a.slope.clone()])?;
            pieces.push(logged(&m.id, ContributionKind::AffineRay, ray));
        } else {
            let reach = eps / -&v;
            let seg = GeneratorSet::new(n, vec![Vector::zeros(n), a.slope.scale(&reach)], vec![])?;
            pieces.push(logged(&m.id, ContributionKind::AffineSegment { reach }, seg));
        }
    }
    pieces.extend(improper_pieces(family, x, eps)?);
    assemble(n, eps, grid, pieces, Exactness::Exact)
}

/// `[cl co(A_ε ∪ B_ε)]_∞` for `f = sup_t f_t` at a feasible `x`.
pub fn sublevel_normal_cone_formula(
    family: &SupFamily,
    x: &Vector,
    eps: &Rational,
    grid: &SGrid,
    mode: Mode,
) -> Result<FormulaResult> {
    sublevel_normal_cone_formula_with(family, x, eps, grid, mode, Execution::default())
}

pub fn sublevel_normal_cone_formula_with(
    family: &SupFamily,
    x: &Vector,
    eps: &Rational,
    grid: &SGrid,
    mode: Mode,
    exec: Execution,
) -> Result<FormulaResult> {
    require_positive(eps)?;
    family.require_feasible(x)?;
    match mode {
        Mode::ExactAffine => exact_affine_result(family, x, eps, Some(grid.clone())),
        Mode::Sampled => sampled_result(family, x, eps, grid, exec, true),
    }
}

/// The formula on a single grid, with no stability certificate.
pub fn sublevel_normal_cone_uncertified(
    family: &SupFamily,
    x: &Vector,
    eps: &Rational,
    grid: &SGrid,
    exec: Execution,
) -> Result<FormulaResult> {
    require_positive(eps)?;
    family.require_feasible(x)?;
    sampled_result(family, x, eps, grid, exec, false)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionResult {
    /// `[I]_∞` for `I = ∩_ε cl co(A_ε ∪ B_ε)`: the largest cone inside `I`.
    pub cone: ConeGen,
    /// V-representation of `I` itself.
    pub intersection: GeneratorSet,
    /// `I` is already a cone (its only point is θ).
    pub is_cone: bool,
    /// Dropping the smallest ε leaves the candidate unchanged.
    pub stabilized: bool,
    pub per_eps: Vec<FormulaResult>,
}

fn cone_of_intersection(dim: usize, hulls: &[&GeneratorSet]) -> Result<(ConeGen, GeneratorSet)> {
    let mut parts = Vec::with_capacity(hulls.len());
    for h in hulls {
        parts.push(crate::geometry::v_to_h(h)?);
    }
    let i = PolyhedronH::intersect_all(dim, &parts)?;
    let gens = h_to_v(&i)?;
    Ok((gens.recession_cone(), gens))
}

/// Intersection over a finite decreasing ε list of the hulls `cl co(A_ε ∪ B_ε)`.
pub fn sublevel_normal_cone_intersection(
    family: &SupFamily,
    x: &Vector,
    eps_list: &[Rational],
    grid: &SGrid,
    mode: Mode,
) -> Result<IntersectionResult> {
    if eps_list.is_empty() {
        return Err(Error::Input("the ε list is empty".into()));
    }
    if eps_list.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::Input("the ε list must be strictly decreasing".into()));
    }
    let per_eps = eps_list
        .iter()
        .map(|e| sublevel_normal_cone_formula(family, x, e, grid, mode))
        .collect::<Result<Vec<_>>>()?;
    let hulls: Vec<&GeneratorSet> = per_eps.iter().map(|r| &r.hull).collect();
    let (cone, intersection) = cone_of_intersection(family.dim(), &hulls)?;
    let stabilized = if hulls.len() > 1 {
        let (prev, _) = cone_of_intersection(family.dim(), &hulls[..hulls.len() - 1])?;
        cone_equal(&prev, &cone)?
    } else {
        true
    };
    let is_cone = intersection.points().iter().all(Vector::is_zero);
    Ok(IntersectionResult {
        cone,
        intersection,
        is_cone,
        stabilized,
        per_eps,
    })
}

/// `[cl ∪_{s f(x) ≥ −ε} ∂_ε(s f)(x)]_∞` for one proper polyhedral `f`.
pub fn singleton_sublevel_normal_cone(
    f: &PolyhedralFunction,
    x: &Vector,
    eps: &Rational,
    grid: &SGrid,
) -> Result<FormulaResult> {
    if !f.is_proper() {
        return Err(Error::Precondition("the function must be proper".into()));
    }
    let family = SupFamily::new(vec![Member::new("f", f.clone())])?;
    sublevel_normal_cone_formula(&family, x, eps, grid, Mode::Sampled)
}

/// Verifies that `f` is continuous at some point of `[f < 0]`: an LP finds
/// `y` with every piece `≤ −δ` and every domain row slack `≥ δ`, `δ > 0`.
pub fn continuity_point_in_strict_sublevel(family: &SupFamily) -> Option<Vector> {
    if family.proper_ids().is_empty() {
        return None;
    }
    let n = family.dim();
    let mut lp = LinearProgram::new(n + 1);
    lp.set_all_free();
    let with_delta = |v: &Vector| {
        let mut row = v.coords().to_vec();
        row.push(Rational::one());
        row
    };
    for m in family.members() {
        for h in m.f.domain().constraints() {
            lp.add_row(with_delta(&h.normal), Relation::Le, h.offset.clone());
        }
        if let ExtendedFunction::Proper(p) = &m.f {
            for piece in p.pieces() {
                lp.add_row(with_delta(&piece.slope), Relation::Le, -&piece.intercept);
            }
        }
    }
    let mut cap = vec![Rational::zero(); n + 1];
    cap[n] = Rational::one();
    lp.add_row(cap.clone(), Relation::Le, Rational::one());
    lp.maximize(cap);
    match lp.solve() {
        LpOutcome::Optimal { value, point } if value.is_positive() => Some(Vector::new(point[..n].to_vec())),
        _ => None,
    }
}

/// `N_{cl [f < 0]}(x)`, requiring continuity of `f` at a point of `[f < 0]`.
pub fn strict_sublevel_normal_cone(
    family: &SupFamily,
    x: &Vector,
    eps: &Rational,
    grid: &SGrid,
    mode: Mode,
) -> Result<FormulaResult> {
    if continuity_point_in_strict_sublevel(family).is_none() {
        return Err(Error::Precondition(
            "f is not continuous at any point of [f < 0] (no strictly feasible interior point)".into(),
        ));
    }
    sublevel_normal_cone_formula(family, x, eps, grid, mode)
}

/// Weight policy for the domain formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlphaPolicy {
    /// `α_t = ρ_{t,ε,x}`.
    Rho,
    /// `α_t = 1`.
    Ones,
    /// Explicit weights by member id.
    Custom(BTreeMap<String, Rational>),
}

/// `ρ_{t,ε,x}`: `1` for ε-active `t`, `−ε / (2f_t(x) − 2f(x) + ε)` otherwise.
pub fn rho_weight(ft: &Rational, f: &Rational, eps: &Rational) -> Rational {
    if *ft >= f - eps {
        Rational::one()
    } else {
        -eps / (ft * Rational::from_integer(2.into()) - f * Rational::from_integer(2.into()) + eps)
    }
}

/// `[cl co(∪_{t∈𝒫} ∂_ε(α_t f_t)(x) ∪ ∪_{t∉𝒫} N^ε_{dom f_t}(x))]_∞`.
pub fn dom_sup_normal_cone(family: &SupFamily, x: &Vector, eps: &Rational, policy: &AlphaPolicy) -> Result<FormulaResult> {
    require_positive(eps)?;
    let fx = family.require_finite(x)?;
    let values = member_values(family, x)?;
    let mut pieces = Vec::new();
    for (m, v) in family.members().iter().zip(&values) {
        let Some(v) = v else { continue };
        let rho = rho_weight(v, &fx, eps);
        let alpha = match policy {
            AlphaPolicy::Rho => rho.clone(),
            AlphaPolicy::Ones => Rational::one(),
            AlphaPolicy::Custom(w) => w
                .get(&m.id)
                .cloned()
                .ok_or_else(|| Error::Input(format!("no weight given for member {}", m.id)))?,
        };
        if !alpha.is_positive() || alpha < rho {
            return Err(Error::Input(format!(
                "invalid weight for member {}: need alpha >= rho > 0, got alpha = {alpha}, rho = {rho}",
                m.id
            )));
        }
        let p = m.f.as_proper().expect("proper member");
        let g = eps_subdifferential(p, x, &(eps / &alpha))?.scale(&alpha);
        pieces.push(logged(&m.id, ContributionKind::Weighted { alpha }, g));
    }
    pieces.extend(improper_pieces(family, x, eps)?);
    assemble(family.dim(), eps, None, pieces, Exactness::Exact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{AffinePiece, ImproperFunction};
    use crate::num::{rat, ratio};

    fn v(xs: &[i64]) -> Vector {
        Vector::from_ints(xs)
    }

    fn cone(dim: usize, rays: &[&[i64]]) -> ConeGen {
        ConeGen::new(dim, rays.iter().map(|r| v(r)).collect()).unwrap()
    }

    fn affine(id: &str, a: &[i64], b: i64) -> Member {
        Member::new(id, PolyhedralFunction::affine(v(a), rat(b)))
    }

    fn improper(id: &str, rows: &[(&[i64], i64)]) -> Member {
        let dim = rows[0].0.len();
        Member::new(id, ImproperFunction::new(PolyhedronH::from_int_rows(dim, rows)).unwrap())
    }

    #[test]
    fn orthant_both_modes() {
        let fam = SupFamily::new(vec![affine("1", &[1, 0], 0), affine("2", &[0, 1], 0)]).unwrap();
        let grid = SGrid::default_grid();
        for eps in [rat(1), ratio(1, 2), ratio(1, 4)] {
            for mode in [Mode::ExactAffine, Mode::Sampled] {
                let r = sublevel_normal_cone_formula(&fam, &Vector::zeros(2), &eps, &grid, mode).unwrap();
                assert_eq!(r.cone, cone(2, &[&[0, 1], &[1, 0]]), "{mode}");
                assert_eq!(r.exactness, Exactness::Exact);
            }
        }
    }

    #[test]
    fn interior_point_of_truncated_identity() {
        let f = PolyhedralFunction::max_affine(vec![
            AffinePiece::new(v(&[1]), rat(0)),
            AffinePiece::new(v(&[0]), rat(-1)),
        ])
        .unwrap();
        let r = singleton_sublevel_normal_cone(&f, &v(&[-2]), &ratio(1, 2), &SGrid::default_grid()).unwrap();
        assert!(r.cone.is_trivial());
        assert!(r.hull.is_bounded());
    }

    #[test]
    fn improper_member_supplies_domain_ray() {
        let fam = SupFamily::new(vec![affine("1", &[1, 0], 0), improper("2", &[(&[0, 1], 0)])]).unwrap();
        for mode in [Mode::ExactAffine, Mode::Sampled] {
            let r = sublevel_normal_cone_formula(&fam, &Vector::zeros(2), &rat(1), &SGrid::default_grid(), mode).unwrap();
            assert_eq!(r.cone, cone(2, &[&[0, 1], &[1, 0]]));
            assert!(r.contributions.iter().any(|c| c.kind == ContributionKind::DomainNormal));
        }
    }

    #[test]
    fn exact_affine_rejects_nonaffine_members() {
        let f = PolyhedralFunction::max_affine(vec![
            AffinePiece::new(v(&[1]), rat(0)),
            AffinePiece::new(v(&[-1]), rat(-1)),
        ])
        .unwrap();
        let fam = SupFamily::new(vec![Member::new("f", f)]).unwrap();
        let e = sublevel_normal_cone_formula(&fam, &v(&[0]), &rat(1), &SGrid::default_grid(), Mode::ExactAffine);
        assert!(matches!(e, Err(Error::Input(_))));
        let e = sublevel_normal_cone_formula(&fam, &v(&[1]), &rat(1), &SGrid::default_grid(), Mode::Sampled);
        assert!(matches!(e, Err(Error::Precondition(_))));
    }

    #[test]
    fn singleton_examples() {
        let abs_minus_one = PolyhedralFunction::max_affine(vec![
            AffinePiece::new(v(&[1]), rat(-1)),
            AffinePiece::new(v(&[-1]), rat(-1)),
        ])
        .unwrap();
        let g = SGrid::default_grid();
        let r = singleton_sublevel_normal_cone(&abs_minus_one, &v(&[1]), &ratio(1, 2), &g).unwrap();
        assert_eq!(r.cone, cone(1, &[&[1]]));
        let r = singleton_sublevel_normal_cone(&abs_minus_one, &v(&[0]), &ratio(1, 2), &g).unwrap();
        assert!(r.cone.is_trivial());
        let max2 = PolyhedralFunction::max_affine(vec![
            AffinePiece::new(v(&[1, 0]), rat(0)),
            AffinePiece::new(v(&[0, 1]), rat(0)),
        ])
        .unwrap();
        let r = singleton_sublevel_normal_cone(&max2, &v(&[0, -1]), &rat(1), &g).unwrap();
        assert_eq!(r.cone, cone(2, &[&[1, 0]]));
    }

    #[test]
    fn strict_sublevel_examples() {
        let fam = SupFamily::new(vec![affine("1", &[1, 1], -1), affine("2", &[1, -1], -1)]).unwrap();
        let g = SGrid::default_grid();
        let r = strict_sublevel_normal_cone(&fam, &v(&[1, 0]), &rat(1), &g, Mode::ExactAffine).unwrap();
        assert_eq!(r.cone, cone(2, &[&[1, -1], &[1, 1]]));
        let r = strict_sublevel_normal_cone(&fam, &v(&[-1, 0]), &rat(1), &g, Mode::ExactAffine).unwrap();
        assert!(r.cone.is_trivial());
        let abs = PolyhedralFunction::max_affine(vec![
            AffinePiece::new(v(&[1]), rat(0)),
            AffinePiece::new(v(&[-1]), rat(0)),
        ])
        .unwrap();
        let fam = SupFamily::new(vec![Member::new("abs", abs)]).unwrap();
        assert!(matches!(
            strict_sublevel_normal_cone(&fam, &v(&[0]), &rat(1), &g, Mode::Sampled),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn intersection_over_eps() {
        let fam = SupFamily::new(vec![affine("1", &[1, 0], 0), affine("2", &[0, 1], 0)]).unwrap();
        let eps = [rat(1), ratio(1, 2), ratio(1, 4)];
        let r = sublevel_normal_cone_intersection(&fam, &Vector::zeros(2), &eps, &SGrid::default_grid(), Mode::ExactAffine)
            .unwrap();
        assert_eq!(r.cone, cone(2, &[&[0, 1], &[1, 0]]));
        assert!(r.stabilized);
        assert!(r.is_cone);

        let single = SupFamily::new(vec![affine("1", &[1, 2], -2)]).unwrap();
        let r = sublevel_normal_cone_intersection(&single, &v(&[0, 1]), &eps, &SGrid::default_grid(), Mode::ExactAffine)
            .unwrap();
        assert_eq!(r.cone, cone(2, &[&[1, 2]]));
        let r = sublevel_normal_cone_intersection(&single, &v(&[0, 0]), &eps, &SGrid::default_grid(), Mode::ExactAffine)
            .unwrap();
        assert!(r.cone.is_trivial());
        assert!(!r.is_cone, "a finite intersection of segments is a segment");
        assert!(sublevel_normal_cone_intersection(&single, &v(&[0, 0]), &[rat(1), rat(2)], &SGrid::default_grid(), Mode::ExactAffine).is_err());
    }

    #[test]
    fn dom_formula_examples() {
        let x = Vector::zeros(2);
        let fam = SupFamily::new(vec![affine("1", &[1, 0], 0), improper("2", &[(&[0, 1], 0)])]).unwrap();
        let r = dom_sup_normal_cone(&fam, &x, &rat(1), &AlphaPolicy::Rho).unwrap();
        assert_eq!(r.cone, cone(2, &[&[0, 1]]));

        let single = SupFamily::new(vec![affine("1", &[1, 0], 3)]).unwrap();
        assert!(dom_sup_normal_cone(&single, &x, &rat(1), &AlphaPolicy::Rho).unwrap().cone.is_trivial());

        let two = SupFamily::new(vec![
            Member::new("1", PolyhedralFunction::indicator(PolyhedronH::from_int_rows(2, &[(&[1, 0], 0)]))),
            Member::new("2", PolyhedralFunction::indicator(PolyhedronH::from_int_rows(2, &[(&[0, 1], 0)]))),
        ])
        .unwrap();
        for policy in [AlphaPolicy::Rho, AlphaPolicy::Ones] {
            let r = dom_sup_normal_cone(&two, &x, &ratio(1, 2), &policy).unwrap();
            assert_eq!(r.cone, cone(2, &[&[0, 1], &[1, 0]]));
        }
    }

    #[test]
    fn weights() {
        assert_eq!(rho_weight(&rat(0), &rat(0), &rat(1)), rat(1));
        // f_t(x) = −3, f(x) = 0, ε = 1: −1 / (−6 + 1) = 1/5.
        assert_eq!(rho_weight(&rat(-3), &rat(0), &rat(1)), ratio(1, 5));
        let fam = SupFamily::new(vec![affine("1", &[1, 0], 0), affine("2", &[0, 1], -3)]).unwrap();
        let mut w = BTreeMap::new();
        w.insert("1".to_string(), rat(1));
        w.insert("2".to_string(), ratio(1, 10));
        let e = dom_sup_normal_cone(&fam, &Vector::zeros(2), &rat(1), &AlphaPolicy::Custom(w));
        assert!(matches!(e, Err(Error::Input(msg)) if msg.contains("member 2")));
    }
}

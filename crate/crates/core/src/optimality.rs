//! Optimality checks for convex, semi-infinite linear and quasi-convex
//! programs built on the normal-cone formulas.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::formulas::{
    cc_condition_check, frechet_outer_cone, qc_sublevel_normal_cone, sublevel_normal_cone_formula, CcInput,
    CcVerdict, Cc3Evidence, Exactness, Member, Mode, SGrid, SublevelOracleQC, SupFamily,
};
use crate::functions::{eps_subdifferential, ExtendedFunction, Minimum, PolyhedralFunction};
use crate::geometry::{ConeGen, GeneratorSet, LinearProgram, LpOutcome, PolyhedronH, Relation};
use crate::num::{to_f64, ExtValue, Rational, Vector};
use crate::oracle;
use crate::parallel::Execution;

/// Hypothesis linking the objective to the feasible set, with its witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Qualification {
    /// `f₀` is continuous at this feasible point.
    ObjectiveContinuousAt(Vector),
    /// This point of `dom f₀` is interior to the feasible set.
    InteriorMeetsDomain(Vector),
}

impl fmt::Display for Qualification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Qualification::ObjectiveContinuousAt(y) => write!(f, "f0-continuous-at {y}"),
            Qualification::InteriorMeetsDomain(y) => write!(f, "interior-meets-dom-f0 {y}"),
        }
    }
}

fn validate_qualification(
    q: &Qualification,
    f0: &PolyhedralFunction,
    feasible: impl Fn(&Vector) -> bool,
    interior: impl Fn(&Vector) -> Result<bool>,
) -> Result<()> {
    match q {
        Qualification::ObjectiveContinuousAt(y) => {
            check_dim(f0.dim(), y.dim())?;
            if !feasible(y) {
                return Err(Error::Precondition(format!("qualification point {y} is not feasible")));
            }
            if !f0.domain().strictly_contains(y) {
                return Err(Error::Precondition(format!(
                    "f0 is not continuous at the qualification point {y} (not interior to dom f0)"
                )));
            }
        }
        Qualification::InteriorMeetsDomain(y) => {
            check_dim(f0.dim(), y.dim())?;
            if !f0.evaluate(y)?.is_finite() {
                return Err(Error::Precondition(format!("qualification point {y} is outside dom f0")));
            }
            if !interior(y)? {
                return Err(Error::Precondition(format!(
                    "qualification point {y} is not interior to the feasible set"
                )));
            }
        }
    }
    Ok(())
}

/// `min f₀(y)` subject to `f_t(y) ≤ 0`, with a stated qualification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProgramInstance {
    pub objective: PolyhedralFunction,
    pub constraints: SupFamily,
    pub candidate: Vector,
    pub qualification: Qualification,
}

impl ProgramInstance {
    /// The feasible polyhedron `[f ≤ 0]`.
    pub fn feasible_set(&self) -> PolyhedronH {
        oracle::sup_sublevel_polyhedron(&self.constraints, &Rational::zero())
    }

    /// Exact `min f₀` over the feasible set, independent of any formula.
    pub fn direct_minimum(&self) -> Result<Minimum> {
        let dom = self.objective.domain().intersect(&self.feasible_set())?;
        Ok(PolyhedralFunction::new(self.objective.pieces().to_vec(), dom)?.minimize())
    }

    fn validate(&self) -> Result<Rational> {
        check_dim(self.constraints.dim(), self.candidate.dim())?;
        check_dim(self.constraints.dim(), self.objective.dim())?;
        self.constraints.require_feasible(&self.candidate)?;
        let v = match self.objective.evaluate(&self.candidate)? {
            ExtValue::Finite(v) => v,
            _ => return Err(Error::Precondition("the candidate is outside dom f0".into())),
        };
        let feasible = self.feasible_set();
        validate_qualification(
            &self.qualification,
            &self.objective,
            |y| feasible.contains(y),
            |y| Ok(feasible.strictly_contains(y)),
        )?;
        match cc_condition_check(CcInput::Sup(&self.constraints))? {
            CcVerdict::Cc2Holds => Ok(v),
            other => Err(Error::Precondition(format!(
                "the constraint family does not satisfy the closure condition: {other:?}"
            ))),
        }
    }
}

/// `θ = g₀ + q` with `g₀ ∈ ∂f₀(x)` and `q` in a normal-cone formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub g0: Vector,
    pub q: Vector,
    /// `g₀ = Σ λ_i p_i + Σ μ_j r_j` over the generators of `∂f₀(x)`.
    pub subgradient_terms: Vec<(Rational, Vector)>,
    /// `q = Σ ν_k c_k` over the rays of `cone`.
    pub cone_terms: Vec<(Rational, Vector)>,
    pub cone: ConeGen,
}

fn weighted_sum(dim: usize, terms: &[(Rational, Vector)]) -> Vector {
    terms.iter().fold(Vector::zeros(dim), |acc, (w, v)| &acc + &v.scale(w))
}

impl Certificate {
    /// Re-derives every claim: the sums, `g₀ ∈ ∂f₀(x)` from a fresh
    /// subdifferential, and `q ∈ truth` by a fresh cone-membership LP.
    pub fn verify(&self, f0: &PolyhedralFunction, x: &Vector, truth: &ConeGen) -> Result<bool> {
        let n = x.dim();
        if self.subgradient_terms.iter().chain(&self.cone_terms).any(|(w, _)| w.is_negative()) {
            return Ok(false);
        }
        if weighted_sum(n, &self.subgradient_terms) != self.g0 || weighted_sum(n, &self.cone_terms) != self.q {
            return Ok(false);
        }
        if !(&self.g0 + &self.q).is_zero() {
            return Ok(false);
        }
        if !eps_subdifferential(f0, x, &Rational::zero())?.contains(&self.g0)? {
            return Ok(false);
        }
        Ok(truth.contains(&self.q)?.is_some() && self.cone.contains(&self.q)?.is_some())
    }
}

/// Solves `θ ∈ ∂f₀(x) + K` exactly.
fn zero_in_sum(sub: &GeneratorSet, cone: &ConeGen) -> Option<Certificate> {
    let n = sub.dim();
    let (np, nr, nk) = (sub.points().len(), sub.rays().len(), cone.rays().len());
    if np == 0 {
        return None;
    }
    let gens: Vec<&Vector> = sub.points().iter().chain(sub.rays()).chain(cone.rays()).collect();
    let mut lp = LinearProgram::new(gens.len());
    for j in 0..n {
        lp.add_row(gens.iter().map(|g| g.get(j).clone()).collect(), Relation::Eq, Rational::zero());
    }
    let mut convex = vec![Rational::one(); np];
    convex.extend(std::iter::repeat(Rational::zero()).take(nr + nk));
    lp.add_row(convex, Relation::Eq, Rational::one());
    lp.maximize(vec![Rational::zero(); gens.len()]);
    let w = lp.solve().point()?.to_vec();
    let terms = |range: std::ops::Range<usize>| -> Vec<(Rational, Vector)> {
        range
            .filter(|&i| !w[i].is_zero())
            .map(|i| (w[i].clone(), gens[i].clone()))
            .collect()
    };
    let subgradient_terms = terms(0..np + nr);
    let cone_terms = terms(np + nr..np + nr + nk);
    Some(Certificate {
        g0: weighted_sum(n, &subgradient_terms),
        q: weighted_sum(n, &cone_terms),
        subgradient_terms,
        cone_terms,
        cone: cone.clone(),
    })
}

/// Evidence that the candidate is not a minimizer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Improvement {
    /// A feasible point with a strictly smaller objective value.
    Point { point: Vector, value: Rational },
    /// A feasible point and a direction along which `f₀ → −∞`.
    Ray { point: Vector, direction: Vector },
    /// The exact condition fails but no explicit point was produced.
    ConditionOnly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OptimalityVerdict {
    Optimal(Certificate),
    NotOptimal(Improvement),
    Inconclusive { reason: String },
}

impl OptimalityVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            OptimalityVerdict::Optimal(_) => "optimal",
            OptimalityVerdict::NotOptimal(_) => "not-optimal",
            OptimalityVerdict::Inconclusive { .. } => "inconclusive",
        }
    }
}

/// Picks the closed-form mode when every proper constraint is affine.
pub fn auto_mode(family: &SupFamily) -> Mode {
    let affine = family
        .members()
        .iter()
        .all(|m| m.f.as_proper().is_none_or(|p| p.as_global_affine().is_some()));
    if affine {
        Mode::ExactAffine
    } else {
        Mode::Sampled
    }
}

/// `x` is optimal iff `θ ∈ ∂f₀(x) + [cl co(A_ε ∪ B_ε)]_∞`.
pub fn check_optimal_convex(prog: &ProgramInstance, eps: &Rational, grid: &SGrid, mode: Mode) -> Result<OptimalityVerdict> {
    let fx = prog.validate()?;
    let x = &prog.candidate;
    let formula = sublevel_normal_cone_formula(&prog.constraints, x, eps, grid, mode)?;
    let sub = eps_subdifferential(&prog.objective, x, &Rational::zero())?;
    if let Some(cert) = zero_in_sum(&sub, &formula.cone) {
        return Ok(OptimalityVerdict::Optimal(cert));
    }
    if formula.exactness != Exactness::Exact {
        return Ok(OptimalityVerdict::Inconclusive {
            reason: "the condition fails on an inner approximation of the normal cone".into(),
        });
    }
    Ok(match prog.direct_minimum()? {
        Minimum::Unbounded { point, direction } => OptimalityVerdict::NotOptimal(Improvement::Ray { point, direction }),
        Minimum::Attained { value, point } if value < fx => {
            OptimalityVerdict::NotOptimal(Improvement::Point { point, value })
        }
        _ => OptimalityVerdict::Inconclusive {
            reason: "the exact condition fails but direct minimization finds no better point".into(),
        },
    })
}

/// Index family `{(a_t, b_t)}` of `⟨a_t, x⟩ ≤ b_t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndexFamily {
    Finite(Vec<(Vector, Rational)>),
    /// `a(u) = ((1 − u²), 2u) / (1 + u²)`, `b = radius`, sampled at
    /// `u_j = span·(2j − N + shift)/N`, `j = 0..=N`, `N = 2^level`.
    Circle { radius: Rational, span: Rational, shift: Rational },
}

impl IndexFamily {
    pub fn dim(&self) -> Option<usize> {
        match self {
            IndexFamily::Finite(rows) => rows.first().map(|(a, _)| a.dim()),
            IndexFamily::Circle { .. } => Some(2),
        }
    }

    /// Rational circle point for parameter `u`.
    pub fn circle_point(u: &Rational) -> Vector {
        let u2 = u * u;
        let d = Rational::one() + &u2;
        Vector::new(vec![(Rational::one() - &u2) / &d, u * Rational::from_integer(2.into()) / &d])
    }

    /// `(u, a, b)` triples at a refinement level (`u` is `None` for finite families).
    pub fn samples(&self, level: u32) -> Vec<(Option<Rational>, Vector, Rational)> {
        match self {
            IndexFamily::Finite(rows) => rows.iter().map(|(a, b)| (None, a.clone(), b.clone())).collect(),
            IndexFamily::Circle { radius, span, shift } => {
                let n = 1i64 << level;
                let nn = Rational::from_integer(n.into());
                (0..=n)
                    .map(|j| {
                        let u = span * (Rational::from_integer((2 * j - n).into()) + shift) / &nn;
                        let a = Self::circle_point(&u);
                        (Some(u), a, radius.clone())
                    })
                    .collect()
            }
        }
    }

    /// Feasibility of `x` for the whole family, not just the samples.
    fn check_feasible(&self, x: &Vector) -> Result<()> {
        match self {
            IndexFamily::Finite(rows) => {
                for (i, (a, b)) in rows.iter().enumerate() {
                    if a.dot(x) > *b {
                        return Err(Error::Precondition(format!("the candidate violates constraint t = {i}")));
                    }
                }
                Ok(())
            }
            IndexFamily::Circle { radius, .. } => {
                // ⟨a(u), x⟩ ≤ ρ for all u iff (ρ + x₁)u² − 2x₂u + (ρ − x₁) ≥ 0 for all u.
                let (x1, x2) = (x.get(0), x.get(1));
                let lead = radius + x1;
                let ok = if lead.is_zero() {
                    x2.is_zero() && !radius.is_negative()
                } else {
                    lead.is_positive() && x2 * x2 <= &lead * &(radius - x1)
                };
                if ok {
                    Ok(())
                } else {
                    Err(Error::Precondition(format!("the candidate {x} violates some circle constraint")))
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSipInstance {
    pub cost: Vector,
    pub family: IndexFamily,
    pub candidate: Vector,
}

/// Sup-norm distance from `target` to `cone`, with the closest point.
pub fn distance_to_cone(target: &Vector, cone: &ConeGen) -> (Rational, Vector) {
    let n = target.dim();
    let k = cone.rays().len();
    // Variables ν_1..ν_k ≥ 0 and τ ≥ 0; |target_j − Σ ν r_j| ≤ τ.
    let mut lp = LinearProgram::new(k + 1);
    for j in 0..n {
        let mut row: Vec<Rational> = cone.rays().iter().map(|r| r.get(j).clone()).collect();
        row.push(-Rational::one());
        lp.add_row(row.clone(), Relation::Le, target.get(j).clone());
        let mut neg: Vec<Rational> = row[..k].iter().map(|c| -c).collect();
        neg.push(-Rational::one());
        lp.add_row(neg, Relation::Le, -target.get(j).clone());
    }
    let mut obj = vec![Rational::zero(); k + 1];
    obj[k] = Rational::one();
    lp.minimize(obj);
    match lp.solve() {
        LpOutcome::Optimal { value, point } => {
            let q = cone
                .rays()
                .iter()
                .zip(&point)
                .fold(Vector::zeros(n), |acc, (r, w)| &acc + &r.scale(w));
            (value, q)
        }
        _ => unreachable!("feasible and bounded below"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelResidual {
    pub level: u32,
    pub samples: usize,
    pub active: usize,
    /// Exact sup-norm distance from `−c` to the sampled formula cone.
    pub residual: Rational,
    /// Longest segment `ε / (b_t − ⟨a_t, x⟩)` among inactive samples.
    pub reach: Option<Rational>,
    pub cone: ConeGen,
}

impl LevelResidual {
    /// Non-authoritative decimal echo.
    pub fn residual_f64(&self) -> f64 {
        to_f64(&self.residual)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SipVerdict {
    Optimal { multipliers: Vec<(Rational, Vector)>, levels: Vec<LevelResidual> },
    NotOptimal { improvement: Improvement, levels: Vec<LevelResidual> },
    Inconclusive { levels: Vec<LevelResidual> },
}

impl SipVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            SipVerdict::Optimal { .. } => "optimal",
            SipVerdict::NotOptimal { .. } => "not-optimal",
            SipVerdict::Inconclusive { .. } => "inconclusive",
        }
    }

    pub fn levels(&self) -> &[LevelResidual] {
        match self {
            SipVerdict::Optimal { levels, .. } | SipVerdict::NotOptimal { levels, .. } | SipVerdict::Inconclusive { levels } => {
                levels
            }
        }
    }
}

fn sip_level(inst: &LinearSipInstance, eps: &Rational, level: u32) -> Result<LevelResidual> {
    let x = &inst.candidate;
    let samples = inst.family.samples(level);
    let mut members = Vec::with_capacity(samples.len());
    let mut reach: Option<Rational> = None;
    let mut active = 0;
    for (i, (u, a, b)) in samples.iter().enumerate() {
        let gap = b - a.dot(x);
        if gap.is_negative() {
            let at = u.as_ref().map_or(format!("t = {i}"), |u| format!("u = {u}"));
            return Err(Error::Precondition(format!("the candidate violates the sampled constraint {at}")));
        }
        if gap.is_zero() {
            active += 1;
        } else {
            let r = eps / &gap;
            if reach.as_ref().is_none_or(|m| r > *m) {
                reach = Some(r);
            }
        }
        members.push(Member::new(format!("t{i}"), PolyhedralFunction::affine(a.clone(), -b.clone())));
    }
    let family = SupFamily::new(members)?;
    let grid = SGrid::default_grid();
    let formula = sublevel_normal_cone_formula(&family, x, eps, &grid, Mode::ExactAffine)?;
    let target = -&inst.cost;
    let (residual, _) = distance_to_cone(&target, &formula.cone);
    Ok(LevelResidual {
        level,
        samples: samples.len(),
        active,
        residual,
        reach,
        cone: formula.cone,
    })
}

/// Condition `−c ∈ [cl co{s a_t : ⟨a_t, x⟩ − b_t ≥ −ε/s}]_∞` per level.
pub fn check_sip_linear(inst: &LinearSipInstance, eps: &Rational, levels: &[u32], exec: Execution) -> Result<SipVerdict> {
    crate::formulas::family::require_positive(eps)?;
    let n = inst
        .family
        .dim()
        .ok_or_else(|| Error::Input("the index family is empty".into()))?;
    check_dim(n, inst.cost.dim())?;
    check_dim(n, inst.candidate.dim())?;
    inst.family.check_feasible(&inst.candidate)?;
    let levels: Vec<u32> = match inst.family {
        IndexFamily::Finite(_) => vec![0],
        IndexFamily::Circle { .. } => {
            if levels.is_empty() || levels.iter().any(|&l| l > 20) {
                return Err(Error::Input("refinement levels must be nonempty and at most 20".into()));
            }
            levels.to_vec()
        }
    };
    let results = exec.try_map(&levels, |&l| sip_level(inst, eps, l))?;
    let target = -&inst.cost;
    if let Some(hit) = results.iter().find(|r| r.residual.is_zero()) {
        let multipliers = hit
            .cone
            .contains(&target)?
            .expect("zero residual means membership")
            .into_iter()
            .zip(hit.cone.rays())
            .filter(|(w, _)| !w.is_zero())
            .map(|(w, r)| (w, r.clone()))
            .collect();
        return Ok(SipVerdict::Optimal {
            multipliers,
            levels: results,
        });
    }
    if let IndexFamily::Finite(rows) = &inst.family {
        // Classical finite reduction: membership failed, so confirm by LP.
        let mut lp = LinearProgram::new(n);
        lp.set_all_free();
        for (a, b) in rows {
            lp.add_row(a.coords().to_vec(), Relation::Le, b.clone());
        }
        lp.minimize(inst.cost.coords().to_vec());
        let fx = inst.cost.dot(&inst.candidate);
        let improvement = match lp.solve() {
            LpOutcome::Unbounded { point, direction } => Some(Improvement::Ray {
                point: Vector::new(point),
                direction: Vector::new(direction),
            }),
            LpOutcome::Optimal { value, point } if value < fx => Some(Improvement::Point {
                point: Vector::new(point),
                value,
            }),
            _ => None,
        };
        return Ok(match improvement {
            Some(improvement) => SipVerdict::NotOptimal {
                improvement,
                levels: results,
            },
            None => SipVerdict::Inconclusive { levels: results },
        });
    }
    Ok(SipVerdict::Inconclusive { levels: results })
}

/// `min f₀` subject to quasi-convex `f_t ≤ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QcProgram {
    pub objective: PolyhedralFunction,
    pub constraints: SublevelOracleQC,
    pub candidate: Vector,
    pub qualification: Qualification,
    pub evidence: Cc3Evidence,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QcVerdict {
    /// The exact condition holds, with a certificate over the sampled outer cone.
    ConditionHolds { exact: Certificate, outer: Certificate },
    NotOptimal(Improvement),
    Inconclusive { reason: String },
}

impl QcVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            QcVerdict::ConditionHolds { .. } => "condition-holds",
            QcVerdict::NotOptimal(_) => "not-optimal",
            QcVerdict::Inconclusive { .. } => "inconclusive",
        }
    }
}

fn qc_improvement(prog: &QcProgram, fx: &Rational) -> Result<Improvement> {
    let closure = prog.constraints.closed_sublevel()?;
    let dom = prog.objective.domain().intersect(&closure)?;
    let x = &prog.candidate;
    let better = |y: &Vector| -> Result<Option<Rational>> {
        if prog.constraints.require_feasible(y).is_err() {
            return Ok(None);
        }
        Ok(match prog.objective.evaluate(y)? {
            ExtValue::Finite(v) if v < *fx => Some(v),
            _ => None,
        })
    };
    // Walk from the closure's minimizer (or ray) back towards x.
    let target = match PolyhedralFunction::new(prog.objective.pieces().to_vec(), dom)?.minimize() {
        Minimum::Attained { point, .. } => point,
        Minimum::Unbounded { point, direction } => &point + &direction,
        Minimum::EmptyDomain => return Ok(Improvement::ConditionOnly),
    };
    let mut step = Rational::one();
    for _ in 0..32 {
        let y = x + &(&target - x).scale(&step);
        if let Some(value) = better(&y)? {
            return Ok(Improvement::Point { point: y, value });
        }
        step /= Rational::from_integer(2.into());
    }
    Ok(Improvement::ConditionOnly)
}

/// Necessary condition `θ ∈ ∂f₀(x) + N_{[f ≤ 0]}(x)` decided with the exact
/// quasi-convex formula, then witnessed in the sampled outer cone.
pub fn check_necessary_qc(prog: &QcProgram, eps: &Rational, samples: usize) -> Result<QcVerdict> {
    let qc = &prog.constraints;
    let x = &prog.candidate;
    check_dim(qc.dim(), prog.objective.dim())?;
    qc.require_feasible(x)?;
    let fx = match prog.objective.evaluate(x)? {
        ExtValue::Finite(v) => v,
        _ => return Err(Error::Precondition("the candidate is outside dom f0".into())),
    };
    let closure = qc.closed_sublevel()?;
    validate_qualification(
        &prog.qualification,
        &prog.objective,
        |y| qc.require_feasible(y).is_ok(),
        |y| Ok(closure.strictly_contains(y)),
    )?;
    let exact = qc_sublevel_normal_cone(qc, x, eps, &prog.evidence)?;
    let sub = eps_subdifferential(&prog.objective, x, &Rational::zero())?;
    let Some(exact_cert) = zero_in_sum(&sub, &exact.cone) else {
        return Ok(QcVerdict::NotOptimal(qc_improvement(prog, &fx)?));
    };
    let outer = frechet_outer_cone(qc, x, eps, samples)?;
    Ok(match zero_in_sum(&sub, &outer.cone) {
        Some(outer_cert) => QcVerdict::ConditionHolds {
            exact: exact_cert,
            outer: outer_cert,
        },
        None => QcVerdict::Inconclusive {
            reason: "the sampled outer cone is too coarse to exhibit a witness".into(),
        },
    })
}

/// Whether a member list is all proper (used by instance generators).
pub fn all_proper(family: &SupFamily) -> bool {
    family.members().iter().all(|m| matches!(m.f, ExtendedFunction::Proper(_)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::{Monotonicity, QcEvaluator, SmoothQCMember};
    use crate::functions::{AffinePiece, Polynomial};
    use crate::num::{rat, ratio};

    fn v(xs: &[i64]) -> Vector {
        Vector::from_ints(xs)
    }

    fn orthant() -> SupFamily {
        SupFamily::new(vec![
            Member::new("1", PolyhedralFunction::affine(v(&[1, 0]), rat(0))),
            Member::new("2", PolyhedralFunction::affine(v(&[0, 1]), rat(0))),
        ])
        .unwrap()
    }

    fn program(c: &[i64]) -> ProgramInstance {
        ProgramInstance {
            objective: PolyhedralFunction::affine(v(c), rat(0)),
            constraints: orthant(),
            candidate: Vector::zeros(2),
            qualification: Qualification::ObjectiveContinuousAt(v(&[-1, -1])),
        }
    }

    #[test]
    fn convex_examples() {
        let g = SGrid::default_grid();
        let p = program(&[-1, -1]);
        match check_optimal_convex(&p, &rat(1), &g, Mode::ExactAffine).unwrap() {
            OptimalityVerdict::Optimal(cert) => {
                assert_eq!(cert.q, v(&[1, 1]));
                let truth = oracle::sublevel_normal_cone(&p.constraints, &p.candidate).unwrap();
                assert!(cert.verify(&p.objective, &p.candidate, &truth).unwrap());
            }
            other => panic!("{other:?}"),
        }
        let p = program(&[1, 1]);
        match check_optimal_convex(&p, &rat(1), &g, Mode::ExactAffine).unwrap() {
            OptimalityVerdict::NotOptimal(Improvement::Ray { direction, .. }) => {
                assert!(v(&[1, 1]).dot(&direction).is_negative())
            }
            other => panic!("{other:?}"),
        }
        let abs = PolyhedralFunction::max_affine(vec![
            AffinePiece::new(v(&[1]), rat(0)),
            AffinePiece::new(v(&[-1]), rat(0)),
        ])
        .unwrap();
        let p = ProgramInstance {
            objective: abs,
            constraints: SupFamily::new(vec![Member::new("1", PolyhedralFunction::affine(v(&[0]), rat(-1)))]).unwrap(),
            candidate: v(&[0]),
            qualification: Qualification::ObjectiveContinuousAt(v(&[0])),
        };
        assert_eq!(check_optimal_convex(&p, &rat(1), &g, Mode::Sampled).unwrap().label(), "optimal");
    }

    #[test]
    fn qualification_is_validated() {
        let mut p = program(&[-1, -1]);
        p.qualification = Qualification::ObjectiveContinuousAt(v(&[1, 1]));
        assert!(matches!(
            check_optimal_convex(&p, &rat(1), &SGrid::default_grid(), Mode::ExactAffine),
            Err(Error::Precondition(_))
        ));
        p.qualification = Qualification::InteriorMeetsDomain(v(&[0, -1]));
        assert!(check_optimal_convex(&p, &rat(1), &SGrid::default_grid(), Mode::ExactAffine).is_err());
        p.qualification = Qualification::InteriorMeetsDomain(v(&[-1, -1]));
        assert!(check_optimal_convex(&p, &rat(1), &SGrid::default_grid(), Mode::ExactAffine).is_ok());
    }

    #[test]
    fn sip_finite() {
        let rows = vec![(v(&[1, 0]), rat(0)), (v(&[0, 1]), rat(0))];
        let inst = LinearSipInstance {
            cost: v(&[-1, -1]),
            family: IndexFamily::Finite(rows.clone()),
            candidate: Vector::zeros(2),
        };
        match check_sip_linear(&inst, &rat(1), &[], Execution::Sequential).unwrap() {
            SipVerdict::Optimal { multipliers, .. } => assert_eq!(multipliers.len(), 2),
            other => panic!("{other:?}"),
        }
        let inst = LinearSipInstance {
            cost: v(&[1, 1]),
            family: IndexFamily::Finite(rows),
            candidate: Vector::zeros(2),
        };
        assert_eq!(check_sip_linear(&inst, &rat(1), &[], Execution::Sequential).unwrap().label(), "not-optimal");
    }

    #[test]
    fn sip_circle() {
        let inst = LinearSipInstance {
            cost: v(&[-1, 0]),
            family: IndexFamily::Circle {
                radius: rat(1),
                span: rat(1),
                shift: rat(0),
            },
            candidate: v(&[1, 0]),
        };
        let levels: Vec<u32> = (4..=6).collect();
        let r = check_sip_linear(&inst, &rat(1), &levels, Execution::default()).unwrap();
        assert_eq!(r.label(), "optimal");
        assert!(r.levels().iter().all(|l| l.residual.is_zero() && l.active == 1));
        // Without the tangent sample nothing is active and the cone is {θ}.
        let shifted = LinearSipInstance {
            family: IndexFamily::Circle {
                radius: rat(1),
                span: rat(1),
                shift: rat(1),
            },
            ..inst.clone()
        };
        let r = check_sip_linear(&shifted, &rat(1), &levels, Execution::Sequential).unwrap();
        assert_eq!(r.label(), "inconclusive");
        let reach: Vec<Rational> = r.levels().iter().map(|l| l.reach.clone().unwrap()).collect();
        assert!(reach.windows(2).all(|w| w[0] < w[1]));
        let outside = LinearSipInstance {
            candidate: v(&[1, 1]),
            ..inst
        };
        assert!(matches!(
            check_sip_linear(&outside, &rat(1), &levels, Execution::Sequential),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn circle_points_are_on_the_circle() {
        for u in [rat(0), ratio(1, 3), rat(-2)] {
            let a = IndexFamily::circle_point(&u);
            assert_eq!(a.dot(&a), rat(1));
        }
    }

    fn cubic_program(c: i64) -> QcProgram {
        let cube =
            SmoothQCMember::new(v(&[1]), rat(0), Polynomial::from_ints(&[0, 0, 0, 1]), rat(0), Monotonicity::Increasing)
                .unwrap();
        QcProgram {
            objective: PolyhedralFunction::affine(v(&[c]), rat(0)),
            constraints: SublevelOracleQC::from_evaluators(vec![("cube".into(), QcEvaluator::Smooth(cube))]).unwrap(),
            candidate: v(&[0]),
            qualification: Qualification::ObjectiveContinuousAt(v(&[-1])),
            evidence: Cc3Evidence::ContinuousAt(v(&[-1])),
        }
    }

    #[test]
    fn qc_examples() {
        match check_necessary_qc(&cubic_program(-1), &ratio(1, 4), 5).unwrap() {
            QcVerdict::ConditionHolds { exact, outer } => {
                assert_eq!(exact.q, v(&[1]));
                assert_eq!(outer.q, v(&[1]));
            }
            other => panic!("{other:?}"),
        }
        match check_necessary_qc(&cubic_program(1), &ratio(1, 4), 5).unwrap() {
            QcVerdict::NotOptimal(Improvement::Point { value, .. }) => assert!(value.is_negative()),
            other => panic!("{other:?}"),
        }
        let mut p = cubic_program(1);
        p.evidence = Cc3Evidence::Unverified;
        assert!(matches!(check_necessary_qc(&p, &ratio(1, 4), 5), Err(Error::Refused(_))));
    }
}

//! Quasi-convex families described through their zero-sublevel sets.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::cc::{cc_condition_check, CcInput, CcVerdict};
use super::family::require_positive;
use super::sublevel::{assemble, logged, ContributionKind, Exactness, FormulaResult};
use crate::error::{check_dim, Error, Result};
use crate::functions::{eps_normal_set, eps_subdifferential, Bound, Interval, Piece1D, PolyhedralFunction, Polynomial, QuasiConvex1D};
use crate::geometry::{ConeGen, HalfSpace, LinearProgram, LpOutcome, PolyhedronH, Relation};
use crate::num::{rational_sqrt, ExtValue, Rational, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
}

/// `f(x) = p(⟨a, x⟩ + b)` with `p` strictly monotone and `p(root) = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothQCMember {
    a: Vector,
    b: Rational,
    p: Polynomial,
    root: Rational,
    direction: Monotonicity,
}

impl SmoothQCMember {
    /// Monotonicity is certified exactly: every odd-multiplicity factor of
    /// `p′` has no real root, and the sign of `p′` off its roots agrees with
    /// `direction`.
    pub fn new(a: Vector, b: Rational, p: Polynomial, root: Rational, direction: Monotonicity) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::Input("smooth member needs a nonzero direction a".into()));
        }
        if p.degree().unwrap_or(0) == 0 {
            return Err(Error::Input("smooth member polynomial must be nonconstant".into()));
        }
        if !p.eval(&root).is_zero() {
            return Err(Error::Input(format!("declared root {root} is not a root of p = {p}")));
        }
        let dp = p.derivative();
        for (factor, mult) in dp.squarefree_factors() {
            if mult % 2 == 1 && factor.count_real_roots() > 0 {
                return Err(Error::Input(format!("p = {p} is not monotone: p' changes sign")));
            }
        }
        let sign = dp.eval(&dp.non_root());
        let ok = match direction {
            Monotonicity::Increasing => sign.is_positive(),
            Monotonicity::Decreasing => sign.is_negative(),
        };
        if !ok {
            return Err(Error::Input(format!("p = {p} is not {direction:?}")));
        }
        Ok(SmoothQCMember { a, b, p, root, direction })
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn a(&self) -> &Vector {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.p
    }

    pub fn root(&self) -> &Rational {
        &self.root
    }

    pub fn direction(&self) -> Monotonicity {
        self.direction
    }

    fn arg(&self, x: &Vector) -> Rational {
        self.a.dot(x) + &self.b
    }

    pub fn eval(&self, x: &Vector) -> Rational {
        self.p.eval(&self.arg(x))
    }

    /// `∇f(x) = p′(⟨a, x⟩ + b) · a`.
    pub fn gradient(&self, x: &Vector) -> Vector {
        self.a.scale(&self.p.derivative().eval(&self.arg(x)))
    }

    pub fn zero_sublevel(&self) -> PolyhedronH {
        let h = match self.direction {
            Monotonicity::Increasing => HalfSpace::new(self.a.clone(), &self.root - &self.b),
            Monotonicity::Decreasing => HalfSpace::new(-&self.a, &self.b - &self.root),
        };
        PolyhedronH::new(self.dim(), vec![h]).expect("nonzero normal")
    }
}

/// How a member of a quasi-convex family is evaluated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QcEvaluator {
    /// `q(⟨a, x⟩ + b)` for a one-dimensional quasi-convex `q`.
    Composite { q: QuasiConvex1D, a: Vector, b: Rational },
    Smooth(SmoothQCMember),
    Polyhedral(PolyhedralFunction),
}

/// `[f ≤ 0]` as weak and strict linear inequalities.
struct Rows {
    weak: Vec<HalfSpace>,
    strict: Vec<HalfSpace>,
    empty: bool,
}

impl Rows {
    fn closure(&self, dim: usize) -> PolyhedronH {
        if self.empty {
            return PolyhedronH::empty(dim);
        }
        let all = self.weak.iter().chain(&self.strict).cloned().collect();
        PolyhedronH::new(dim, all).expect("rows share the dimension")
    }
}

fn interval_rows(i: &Interval, a: &Vector, b: &Rational) -> Rows {
    let mut rows = Rows {
        weak: vec![],
        strict: vec![],
        empty: false,
    };
    match i {
        Interval::Empty => rows.empty = true,
        Interval::Span { lo, hi } => {
            // lo ≤ ⟨a,x⟩ + b  ⇔  ⟨−a, x⟩ ≤ b − lo.
            match lo {
                Bound::Unbounded => {}
                Bound::Closed(l) => rows.weak.push(HalfSpace::new(-a, b - l)),
                Bound::Open(l) => rows.strict.push(HalfSpace::new(-a, b - l)),
            }
            match hi {
                Bound::Unbounded => {}
                Bound::Closed(h) => rows.weak.push(HalfSpace::new(a.clone(), h - b)),
                Bound::Open(h) => rows.strict.push(HalfSpace::new(a.clone(), h - b)),
            }
        }
    }
    rows
}

fn piece_value(p: &Piece1D, t: &Rational) -> ExtValue {
    match p {
        Piece1D::Affine { slope, intercept } => ExtValue::Finite(slope * t + intercept),
        Piece1D::PosInf => ExtValue::PosInf,
    }
}

impl QcEvaluator {
    pub fn composite(q: QuasiConvex1D, a: Vector, b: Rational) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::Input("composite member needs a nonzero direction a".into()));
        }
        Ok(QcEvaluator::Composite { q, a, b })
    }

    pub fn dim(&self) -> usize {
        match self {
            QcEvaluator::Composite { a, .. } => a.dim(),
            QcEvaluator::Smooth(s) => s.dim(),
            QcEvaluator::Polyhedral(p) => p.dim(),
        }
    }

    pub fn eval(&self, x: &Vector) -> Result<ExtValue> {
        check_dim(self.dim(), x.dim())?;
        Ok(match self {
            QcEvaluator::Composite { q, a, b } => q.eval(&(a.dot(x) + b)),
            QcEvaluator::Smooth(s) => ExtValue::Finite(s.eval(x)),
            QcEvaluator::Polyhedral(p) => p.evaluate(x)?,
        })
    }

    pub fn is_lsc(&self) -> bool {
        match self {
            QcEvaluator::Composite { q, .. } => q.is_lsc(),
            _ => true,
        }
    }

    fn rows(&self) -> Rows {
        match self {
            QcEvaluator::Composite { q, a, b } => interval_rows(&q.sublevel(&Rational::zero(), false), a, b),
            QcEvaluator::Smooth(s) => Rows {
                weak: s.zero_sublevel().constraints().to_vec(),
                strict: vec![],
                empty: false,
            },
            QcEvaluator::Polyhedral(p) => {
                let s = p.sublevel_set(&Rational::zero());
                Rows {
                    empty: s.is_marked_empty(),
                    weak: s.constraints().to_vec(),
                    strict: vec![],
                }
            }
        }
    }

    /// `cl [f ≤ 0]`.
    pub fn closed_zero_sublevel(&self) -> PolyhedronH {
        self.rows().closure(self.dim())
    }

    /// `[f̄ ≤ 0]` for the lsc hull `f̄`.
    pub fn hull_zero_sublevel(&self) -> PolyhedronH {
        match self {
            QcEvaluator::Composite { q, a, b } => {
                interval_rows(&q.closed_hull().sublevel(&Rational::zero(), false), a, b).closure(self.dim())
            }
            _ => self.closed_zero_sublevel(),
        }
    }

    /// Continuity of `f` at `y` (as an extended-real function).
    pub fn is_continuous_at(&self, y: &Vector) -> bool {
        match self {
            QcEvaluator::Smooth(_) => true,
            QcEvaluator::Polyhedral(p) => p.domain().strictly_contains(y),
            QcEvaluator::Composite { q, a, b } => {
                let u = a.dot(y) + b;
                let bps = q.breakpoints();
                match bps.binary_search(&u) {
                    Ok(k) => {
                        let v = &q.values()[k];
                        v.is_finite() && piece_value(&q.pieces()[k], &u) == *v && piece_value(&q.pieces()[k + 1], &u) == *v
                    }
                    Err(k) => matches!(q.pieces()[k], Piece1D::Affine { .. }),
                }
            }
        }
    }

    /// Fréchet subgradients at `y` usable as ray directions, or `None` where
    /// this representation cannot supply them exactly (breakpoints of `q`).
    pub fn subgradients(&self, y: &Vector) -> Result<Option<Vec<Vector>>> {
        check_dim(self.dim(), y.dim())?;
        Ok(match self {
            QcEvaluator::Smooth(s) => Some(vec![s.gradient(y)]),
            QcEvaluator::Polyhedral(p) => {
                let g = eps_subdifferential(p, y, &Rational::zero())?;
                if g.is_empty() {
                    None
                } else {
                    Some(g.points().to_vec())
                }
            }
            QcEvaluator::Composite { q, a, b } => {
                let u = a.dot(y) + b;
                match q.breakpoints().binary_search(&u) {
                    Ok(_) => None,
                    Err(k) => match &q.pieces()[k] {
                        Piece1D::Affine { slope, .. } => Some(vec![a.scale(slope)]),
                        Piece1D::PosInf => None,
                    },
                }
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QcMember {
    pub id: String,
    /// `cl [f_t ≤ 0]`.
    pub zero_sublevel: PolyhedronH,
    pub evaluator: QcEvaluator,
}

/// A finite quasi-convex family with `f := sup_t f_t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SublevelOracleQC {
    dim: usize,
    members: Vec<QcMember>,
}

impl SublevelOracleQC {
    /// Checks each declared zero-sublevel against its evaluator exactly.
    pub fn new(members: Vec<QcMember>) -> Result<Self> {
        let dim = members
            .first()
            .map(|m| m.evaluator.dim())
            .ok_or_else(|| Error::Input("a family needs at least one member".into()))?;
        let mut seen = BTreeSet::new();
        for m in &members {
            check_dim(dim, m.evaluator.dim())?;
            check_dim(dim, m.zero_sublevel.dim())?;
            if !seen.insert(m.id.as_str()) {
                return Err(Error::Input(format!("duplicate member id {:?}", m.id)));
            }
            if !m.zero_sublevel.same_set(&m.evaluator.closed_zero_sublevel())? {
                return Err(Error::Input(format!(
                    "member {}: the declared zero-sublevel is not the closure of [f <= 0]",
                    m.id
                )));
            }
        }
        Ok(SublevelOracleQC { dim, members })
    }

    /// Derives each zero-sublevel from its evaluator.
    pub fn from_evaluators(members: Vec<(String, QcEvaluator)>) -> Result<Self> {
        let members = members
            .into_iter()
            .map(|(id, evaluator)| QcMember {
                id,
                zero_sublevel: evaluator.closed_zero_sublevel(),
                evaluator,
            })
            .collect();
        SublevelOracleQC::new(members)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn members(&self) -> &[QcMember] {
        &self.members
    }

    pub fn evaluate(&self, x: &Vector) -> Result<ExtValue> {
        let mut best = ExtValue::NegInf;
        for m in &self.members {
            best = best.max(m.evaluator.eval(x)?);
        }
        Ok(best)
    }

    /// Checks `f_t(x) ≤ 0` for every member.
    pub fn require_feasible(&self, x: &Vector) -> Result<()> {
        check_dim(self.dim, x.dim())?;
        for m in &self.members {
            let v = m.evaluator.eval(x)?;
            if !v.le(&Rational::zero()) {
                return Err(Error::Precondition(format!(
                    "the query point violates member {}: f_t(x) = {v} > 0",
                    m.id
                )));
            }
        }
        Ok(())
    }

    /// `cl [f ≤ 0]`: all rows made weak, provided the mixed system is
    /// feasible (checked with a slack LP on the strict rows).
    pub fn closed_sublevel(&self) -> Result<PolyhedronH> {
        let rows: Vec<Rows> = self.members.iter().map(|m| m.evaluator.rows()).collect();
        if rows.iter().any(|r| r.empty) {
            return Err(Error::Precondition("[f <= 0] is empty".into()));
        }
        let n = self.dim;
        let mut lp = LinearProgram::new(n + 1);
        for j in 0..n {
            lp.set_free(j);
        }
        let row = |h: &HalfSpace, slack: bool| {
            let mut c = h.normal.coords().to_vec();
            c.push(if slack { Rational::one() } else { Rational::zero() });
            c
        };
        for r in &rows {
            for h in &r.weak {
                lp.add_row(row(h, false), Relation::Le, h.offset.clone());
            }
            for h in &r.strict {
                lp.add_row(row(h, true), Relation::Le, h.offset.clone());
            }
        }
        let mut cap = vec![Rational::zero(); n + 1];
        cap[n] = Rational::one();
        lp.add_row(cap.clone(), Relation::Le, Rational::one());
        lp.maximize(cap);
        let has_strict = rows.iter().any(|r| !r.strict.is_empty());
        match lp.solve() {
            LpOutcome::Optimal { value, .. } if value.is_positive() || !has_strict => {}
            _ => return Err(Error::Precondition("[f <= 0] is empty".into())),
        }
        let all = rows.iter().flat_map(|r| r.weak.iter().chain(&r.strict)).cloned().collect();
        PolyhedronH::new(n, all)
    }
}

/// Why condition (cc3) may be assumed for a quasi-convex family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cc3Evidence {
    /// Nothing supplied: formulas refuse to run.
    Unverified,
    /// Decide it exactly with [`cc_condition_check`].
    Checked,
    /// `f` is continuous at this point of `[f ≤ 0]`.
    ContinuousAt(Vector),
}

fn validate_evidence(qc: &SublevelOracleQC, evidence: &Cc3Evidence) -> Result<()> {
    match evidence {
        Cc3Evidence::Unverified => Err(Error::Refused(
            "the closure condition cl[f <= 0] = ∩ cl[f_t <= 0] is unverified; supply evidence".into(),
        )),
        Cc3Evidence::Checked => match cc_condition_check(CcInput::Qc(qc))? {
            CcVerdict::Fails { witness } => Err(Error::Refused(format!(
                "the closure condition fails; witness {witness}"
            ))),
            _ => Ok(()),
        },
        Cc3Evidence::ContinuousAt(y) => {
            check_dim(qc.dim(), y.dim())?;
            if qc.require_feasible(y).is_err() {
                return Err(Error::Refused(format!("continuity point {y} is not in [f <= 0]")));
            }
            if let Some(m) = qc.members().iter().find(|m| !m.evaluator.is_continuous_at(y)) {
                return Err(Error::Refused(format!("member {} is not continuous at {y}", m.id)));
            }
            Ok(())
        }
    }
}

/// `[cl co(∪_t N^ε_{[f_t ≤ 0]}(x))]_∞`.
pub fn qc_sublevel_normal_cone(
    qc: &SublevelOracleQC,
    x: &Vector,
    eps: &Rational,
    evidence: &Cc3Evidence,
) -> Result<FormulaResult> {
    require_positive(eps)?;
    qc.require_feasible(x)?;
    validate_evidence(qc, evidence)?;
    let mut pieces = Vec::with_capacity(qc.members().len());
    for m in qc.members() {
        let n = eps_normal_set(&m.zero_sublevel, x, eps)?;
        pieces.push(logged(&m.id, ContributionKind::SublevelNormal, n));
    }
    assemble(qc.dim(), eps, None, pieces, Exactness::Exact)
}

/// Points `x + r·(−1 + 2j/(k−1))` per axis, ordered by sup-norm distance
/// from `x` and then lexicographically.
pub fn ball_lattice(x: &Vector, radius: &Rational, per_axis: usize) -> Vec<Vector> {
    let k = per_axis.max(1);
    let offsets: Vec<Rational> = if k == 1 {
        vec![Rational::zero()]
    } else {
        let step = radius * Rational::from_integer(2.into()) / Rational::from_integer((k as i64 - 1).into());
        (0..k).map(|j| -radius + &step * Rational::from_integer((j as i64).into())).collect()
    };
    let mut pts: Vec<Vec<Rational>> = vec![vec![]];
    for i in 0..x.dim() {
        pts = pts
            .into_iter()
            .flat_map(|p| {
                offsets.iter().map(move |o| {
                    let mut q = p.clone();
                    q.push(x.get(i) + o);
                    q
                })
            })
            .collect();
    }
    let mut out: Vec<Vector> = pts.into_iter().map(Vector::new).collect();
    out.sort_by_cached_key(|y| ((y - x).norm_inf(), y.clone()));
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkippedSample {
    pub member: String,
    pub point: Vector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OuterCone {
    pub cone: ConeGen,
    pub rays_contributed: usize,
    pub skipped: Vec<SkippedSample>,
}

/// Cone generated by `∂f_t(y)` over lattice samples `y` of the sup-norm
/// ball `B(x, ε)` with `f_t(y) ≤ ε`.
pub fn frechet_outer_cone(qc: &SublevelOracleQC, x: &Vector, eps: &Rational, samples: usize) -> Result<OuterCone> {
    require_positive(eps)?;
    qc.require_feasible(x)?;
    if samples == 0 {
        return Err(Error::Input("samples per axis must be positive".into()));
    }
    let lattice = ball_lattice(x, eps, samples);
    let mut rays = Vec::new();
    let mut skipped = Vec::new();
    for m in qc.members() {
        for y in &lattice {
            if !m.evaluator.eval(y)?.le(eps) {
                continue;
            }
            match m.evaluator.subgradients(y)? {
                Some(gs) => rays.extend(gs.into_iter().filter(|g| !g.is_zero())),
                None => skipped.push(SkippedSample {
                    member: m.id.clone(),
                    point: y.clone(),
                }),
            }
        }
    }
    let rays_contributed = rays.len();
    Ok(OuterCone {
        cone: ConeGen::new(qc.dim(), rays)?,
        rays_contributed,
        skipped,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LemnosOutcome {
    /// `g = λ·u + p` with `u ∈ ∂f(y)`, `‖p‖∞ ≤ √ε`.
    Witness { y: Vector, lambda: Rational, u: Vector, p: Vector },
    /// Inconclusive: the target set carries a closure the lattice may miss.
    NotFound,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorCheck {
    pub generator: Vector,
    pub is_ray: bool,
    pub outcome: LemnosOutcome,
}

impl fmt::Display for GeneratorCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.is_ray { "ray" } else { "point" };
        match &self.outcome {
            LemnosOutcome::Witness { y, lambda, u, p } => {
                write!(f, "{kind} {}: y={y} lambda={lambda} u={u} p={p}", self.generator)
            }
            LemnosOutcome::NotFound => write!(f, "{kind} {}: not found", self.generator),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemnosReport {
    pub sqrt_eps: Rational,
    pub checks: Vec<GeneratorCheck>,
}

impl LemnosReport {
    pub fn not_found(&self) -> usize {
        self.checks.iter().filter(|c| c.outcome == LemnosOutcome::NotFound).count()
    }
}

/// `min_{λ ≥ 0} ‖g − λu‖∞` as an exact LP; returns `(λ, value)`.
fn best_multiple(g: &Vector, u: &Vector) -> (Rational, Rational) {
    let mut lp = LinearProgram::new(2);
    for (gi, ui) in g.coords().iter().zip(u.coords()) {
        // g_i − λu_i ≤ t and λu_i − g_i ≤ t.
        lp.add_row(vec![-ui.clone(), -Rational::one()], Relation::Le, -gi.clone());
        lp.add_row(vec![ui.clone(), -Rational::one()], Relation::Le, gi.clone());
    }
    lp.minimize(vec![Rational::zero(), Rational::one()]);
    match lp.solve() {
        LpOutcome::Optimal { value, point } => (point[0].clone(), value),
        _ => unreachable!("bounded below by zero and feasible at λ = 0"),
    }
}

/// For each generator of `N^ε_{[f ≤ 0]}(x)`, searches lattice points `y` of
/// the sup-norm ball `B(x, 3√ε)` with `f(y) ≤ 2√ε` for `g = λu + p`.
pub fn lemnos_inclusion_check(f: &QcEvaluator, x: &Vector, eps: &Rational, samples: usize) -> Result<LemnosReport> {
    require_positive(eps)?;
    let root = rational_sqrt(eps).ok_or_else(|| Error::Input(format!("ε = {eps} is not the square of a rational")))?;
    if !f.is_lsc() {
        return Err(Error::Input("the member must be lower semicontinuous".into()));
    }
    if !f.eval(x)?.le(&Rational::zero()) {
        return Err(Error::Precondition(format!("f(x) > 0 at the query point {x}")));
    }
    let normal = eps_normal_set(&f.closed_zero_sublevel(), x, eps)?;
    let three = Rational::from_integer(3.into());
    let two = Rational::from_integer(2.into());
    let mut candidates: Vec<(Vector, Vec<Vector>)> = Vec::new();
    for y in ball_lattice(x, &(&root * &three), samples.max(1)) {
        if f.eval(&y)?.le(&(&root * &two)) {
            if let Some(us) = f.subgradients(&y)? {
                candidates.push((y, us));
            }
        }
    }
    let generators = normal
        .points()
        .iter()
        .map(|g| (g, false))
        .chain(normal.rays().iter().map(|g| (g, true)));
    let mut checks = Vec::new();
    for (g, is_ray) in generators {
        let mut outcome = LemnosOutcome::NotFound;
        'search: for (y, us) in &candidates {
            for u in us {
                let (lambda, dist) = best_multiple(g, u);
                if dist <= root {
                    let p = g - &u.scale(&lambda);
                    outcome = LemnosOutcome::Witness {
                        y: y.clone(),
                        lambda,
                        u: u.clone(),
                        p,
                    };
                    break 'search;
                }
            }
        }
        checks.push(GeneratorCheck {
            generator: g.clone(),
            is_ray,
            outcome,
        });
    }
    Ok(LemnosReport { sqrt_eps: root, checks })
}

//! Curated and seeded-random verification cases and their runner.

use crate::error::Result;
use crate::formulas::{
    frechet_outer_cone, lemnos_inclusion_check, qc_sublevel_normal_cone, AlphaPolicy, Cc3Evidence, Member, Mode,
    Monotonicity, QcEvaluator, SGrid, SmoothQCMember, SublevelOracleQC, SupFamily,
};
use crate::functions::{
    convex_sublevel_closure_identity, AffinePiece, ClosureInput, ClosureVerdict, ImproperFunction, Piece1D,
    PolyhedralFunction, Polynomial, QuasiConvex1D,
};
use crate::gen::{Gen, QcInstance, SupInstance};
use crate::geometry::PolyhedronH;
use crate::io::report::{CheckRecord, ConeRecord, OptimalityRecord, Record, SipRecord};
use crate::num::{rat, ratio, ExtValue, Rational, Vector};
use crate::optimality::{
    auto_mode, check_necessary_qc, check_optimal_convex, check_sip_linear, IndexFamily, LinearSipInstance,
    OptimalityVerdict, ProgramInstance, QcProgram, QcVerdict, Qualification,
};
use crate::oracle;
use crate::parallel::Execution;
use crate::verify::{verify_with, Check, Mutation};

pub fn default_eps() -> Vec<Rational> {
    vec![rat(1), ratio(1, 2), ratio(1, 4)]
}

#[derive(Clone, Debug)]
pub enum Case {
    Sublevel {
        id: String,
        family: SupFamily,
        x: Vector,
        eps: Vec<Rational>,
        grid: SGrid,
        mode: Mode,
        require_equal: bool,
    },
    Dom {
        id: String,
        family: SupFamily,
        x: Vector,
        eps: Vec<Rational>,
        policy: AlphaPolicy,
    },
    Qc {
        id: String,
        family: SublevelOracleQC,
        x: Vector,
        eps: Vec<Rational>,
        evidence: Cc3Evidence,
    },
    /// Sampled outer cone contains the exact quasi-convex cone.
    Outer {
        id: String,
        family: SublevelOracleQC,
        x: Vector,
        eps: Vec<Rational>,
        samples: usize,
    },
    /// Witness search for every generator of each member's ε-normal set.
    Lemnos {
        id: String,
        family: SublevelOracleQC,
        x: Vector,
        eps: Vec<Rational>,
        samples: usize,
    },
    Optimal {
        id: String,
        program: ProgramInstance,
        eps: Rational,
        grid: SGrid,
        expected: Option<&'static str>,
    },
    QcOptimal {
        id: String,
        program: QcProgram,
        eps: Rational,
        samples: usize,
        expected: Option<&'static str>,
    },
    Sip {
        id: String,
        instance: LinearSipInstance,
        eps: Rational,
        levels: Vec<u32>,
        expected: Option<&'static str>,
    },
    Closure1D {
        id: String,
        q: QuasiConvex1D,
    },
}

impl Case {
    pub fn id(&self) -> &str {
        match self {
            Case::Sublevel { id, .. }
            | Case::Dom { id, .. }
            | Case::Qc { id, .. }
            | Case::Outer { id, .. }
            | Case::Lemnos { id, .. }
            | Case::Optimal { id, .. }
            | Case::QcOptimal { id, .. }
            | Case::Sip { id, .. }
            | Case::Closure1D { id, .. } => id,
        }
    }

    fn check_name(&self) -> &'static str {
        match self {
            Case::Sublevel { .. } => "sublevel",
            Case::Dom { .. } => "dom",
            Case::Qc { .. } => "qc",
            Case::Outer { .. } => "qc-outer-containment",
            Case::Lemnos { .. } => "qc-witness-search",
            Case::Optimal { .. } => "check-optimal",
            Case::QcOptimal { .. } => "qc-necessary",
            Case::Sip { .. } => "check-sip",
            Case::Closure1D { .. } => "closure-1d",
        }
    }
}

pub fn sublevel_case(inst: SupInstance, eps: Vec<Rational>, mode: Mode, require_equal: bool) -> Case {
    Case::Sublevel {
        id: inst.id,
        family: inst.family,
        x: inst.x,
        eps,
        grid: SGrid::default_grid(),
        mode,
        require_equal,
    }
}

fn qc_case(inst: QcInstance, eps: Vec<Rational>) -> Case {
    Case::Qc {
        id: inst.id,
        family: inst.family,
        x: inst.x,
        eps,
        evidence: Cc3Evidence::Checked,
    }
}

/// Re-verifies a certificate against a freshly computed oracle cone.
fn reverify_convex(p: &ProgramInstance, v: &OptimalityVerdict) -> Result<Option<bool>> {
    match v {
        OptimalityVerdict::Optimal(c) => {
            let truth = oracle::sublevel_normal_cone(&p.constraints, &p.candidate)?;
            Ok(Some(c.verify(&p.objective, &p.candidate, &truth)?))
        }
        _ => Ok(None),
    }
}

fn reverify_qc(p: &QcProgram, v: &QcVerdict) -> Result<Option<bool>> {
    match v {
        QcVerdict::ConditionHolds { exact, outer } => {
            let truth = oracle::qc_normal_cone(&p.constraints, &p.candidate)?;
            // The outer certificate lies in the sampled cone, which need not
            // sit inside the exact normal cone; re-check it against itself.
            Ok(Some(
                exact.verify(&p.objective, &p.candidate, &truth)? && outer.verify(&p.objective, &p.candidate, &outer.cone)?,
            ))
        }
        _ => Ok(None),
    }
}

/// Runs one case, propagating errors to the caller.
pub fn try_run_case(case: &Case, mutation: Mutation, exec: Execution) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    match case {
        Case::Sublevel {
            id,
            family,
            x,
            eps,
            grid,
            mode,
            require_equal,
        } => {
            for e in eps {
                let check = Check::Sublevel {
                    family,
                    grid,
                    mode: *mode,
                };
                let r = verify_with(id, check, x, e, mutation, exec)?;
                out.push(Record::Cone(ConeRecord::new(&r, *require_equal)));
            }
        }
        Case::Dom {
            id,
            family,
            x,
            eps,
            policy,
        } => {
            for e in eps {
                let r = verify_with(id, Check::Dom { family, policy }, x, e, mutation, exec)?;
                out.push(Record::Cone(ConeRecord::new(&r, true)));
            }
        }
        Case::Qc {
            id,
            family,
            x,
            eps,
            evidence,
        } => {
            for e in eps {
                let r = verify_with(id, Check::Qc { family, evidence }, x, e, mutation, exec)?;
                out.push(Record::Cone(ConeRecord::new(&r, true)));
            }
        }
        Case::Outer {
            id,
            family,
            x,
            eps,
            samples,
        } => {
            for e in eps {
                let exact = qc_sublevel_normal_cone(family, x, e, &Cc3Evidence::Checked)?;
                let outer = frechet_outer_cone(family, x, e, *samples)?;
                let missing = exact.cone.first_missing(&outer.cone)?;
                let detail = match &missing {
                    None => format!(
                        "outer cone contains the exact cone ({} sampled rays, {} skipped)",
                        outer.rays_contributed,
                        outer.skipped.len()
                    ),
                    Some(w) => format!("exact ray {w} missing from the outer cone"),
                };
                out.push(Record::Check(CheckRecord::new(id, "qc-outer-containment", Some(e), missing.is_none(), detail)));
            }
        }
        Case::Lemnos {
            id,
            family,
            x,
            eps,
            samples,
        } => {
            for e in eps {
                let mut total = 0;
                let mut missing = 0;
                for m in family.members() {
                    let r = lemnos_inclusion_check(&m.evaluator, x, e, *samples)?;
                    total += r.checks.len();
                    missing += r.not_found();
                }
                let detail = format!("{} of {total} generators witnessed", total - missing);
                out.push(Record::Check(CheckRecord::new(id, "qc-witness-search", Some(e), missing == 0, detail)));
            }
        }
        Case::Optimal {
            id,
            program,
            eps,
            grid,
            expected,
        } => {
            let v = check_optimal_convex(program, eps, grid, auto_mode(&program.constraints))?;
            let mut r = OptimalityRecord::convex(id, eps, &v, reverify_convex(program, &v)?);
            r.expected = expected.map(str::to_string);
            out.push(Record::Optimality(r));
        }
        Case::QcOptimal {
            id,
            program,
            eps,
            samples,
            expected,
        } => {
            let v = check_necessary_qc(program, eps, *samples)?;
            let mut r = OptimalityRecord::qc(id, eps, &v, reverify_qc(program, &v)?);
            r.expected = expected.map(str::to_string);
            out.push(Record::Optimality(r));
        }
        Case::Sip {
            id,
            instance,
            eps,
            levels,
            expected,
        } => {
            let v = check_sip_linear(instance, eps, levels, exec)?;
            let mut r = SipRecord::new(id, eps, &v);
            r.expected = expected.map(str::to_string);
            out.push(Record::Sip(r));
        }
        Case::Closure1D { id, q } => {
            let (holds, detail) = match convex_sublevel_closure_identity(ClosureInput::OneD(q))? {
                ClosureVerdict::Holds => (true, format!("closure of [q <= 0] = {}", q.closed_hull().sublevel(&rat(0), false))),
                ClosureVerdict::Fails { witness } => (false, format!("sets differ at {witness}")),
            };
            out.push(Record::Check(CheckRecord::new(id, "closure-1d", None, holds, detail)));
        }
    }
    Ok(out)
}

/// Runs one case; an error becomes a failing record instead of aborting the suite.
pub fn run_case(case: &Case, mutation: Mutation, exec: Execution) -> Vec<Record> {
    try_run_case(case, mutation, exec).unwrap_or_else(|e| {
        vec![Record::Check(CheckRecord::new(case.id(), case.check_name(), None, false, format!("error: {e}")))]
    })
}

/// Runs cases (concurrently when `exec` is parallel); records keep case order.
pub fn run_cases(cases: &[Case], mutation: Mutation, exec: Execution) -> Vec<Record> {
    exec.map(cases, |c| run_case(c, mutation, exec)).into_iter().flatten().collect()
}

fn v(xs: &[i64]) -> Vector {
    Vector::from_ints(xs)
}

fn piece(a: &[i64], b: i64) -> AffinePiece {
    AffinePiece::new(v(a), rat(b))
}

fn max_affine(pieces: Vec<AffinePiece>) -> PolyhedralFunction {
    PolyhedralFunction::max_affine(pieces).expect("curated pieces are valid")
}

fn sign_vectors(n: usize) -> Vec<Vec<i64>> {
    (0..1usize << n)
        .map(|mask| (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect())
        .collect()
}

/// `‖y − c‖₁ − r` as a maximum of `2ⁿ` pieces.
fn l1_ball(c: &[i64], r: i64) -> PolyhedralFunction {
    let pieces = sign_vectors(c.len())
        .into_iter()
        .map(|s| {
            let off: i64 = s.iter().zip(c).map(|(a, b)| a * b).sum();
            piece(&s, -off - r)
        })
        .collect();
    max_affine(pieces)
}

/// `‖y − c‖∞ − r` as a maximum of `2n` pieces.
fn linf_ball(c: &[i64], r: i64) -> PolyhedralFunction {
    let n = c.len();
    let mut pieces = Vec::new();
    for (i, ci) in c.iter().enumerate() {
        for s in [1, -1] {
            let mut a = vec![0; n];
            a[i] = s;
            pieces.push(piece(&a, -s * ci - r));
        }
    }
    max_affine(pieces)
}

fn single(id: &str, f: PolyhedralFunction, x: Vector) -> SupInstance {
    SupInstance {
        id: id.to_string(),
        family: SupFamily::new(vec![Member::new("f", f)]).expect("one member"),
        x,
    }
}

fn family(id: &str, fs: Vec<PolyhedralFunction>, x: Vector) -> SupInstance {
    let members = fs.into_iter().enumerate().map(|(i, f)| Member::new(format!("f{i}"), f)).collect();
    SupInstance {
        id: id.to_string(),
        family: SupFamily::new(members).expect("curated family"),
        x,
    }
}

fn qv(xs: &[Rational]) -> Vector {
    Vector::new(xs.to_vec())
}

/// Twenty-five max-affine instances at vertices, edges, faces and interiors.
pub fn curated_max_affine() -> Vec<SupInstance> {
    let h = ratio(1, 2);
    let t = ratio(1, 3);
    let z = rat(0);
    let one = rat(1);
    vec![
        single("l1-1d-end", l1_ball(&[0], 1), v(&[1])),
        single("l1-1d-centre", l1_ball(&[0], 1), v(&[0])),
        single("l1-2d-vertex", l1_ball(&[0, 0], 1), v(&[1, 0])),
        single("l1-2d-edge", l1_ball(&[0, 0], 1), qv(&[h.clone(), h.clone()])),
        single("l1-2d-centre", l1_ball(&[0, 0], 1), v(&[0, 0])),
        single("l1-2d-shifted-vertex", l1_ball(&[1, 1], 1), v(&[2, 1])),
        single("l1-3d-vertex", l1_ball(&[0, 0, 0], 1), v(&[1, 0, 0])),
        single("l1-3d-edge", l1_ball(&[0, 0, 0], 1), qv(&[h.clone(), h.clone(), z.clone()])),
        single("l1-3d-facet", l1_ball(&[0, 0, 0], 1), qv(&[t.clone(), t.clone(), t.clone()])),
        single("linf-2d-corner", linf_ball(&[0, 0], 1), v(&[1, 1])),
        single("linf-2d-edge", linf_ball(&[0, 0], 1), v(&[1, 0])),
        single("linf-2d-centre", linf_ball(&[0, 0], 1), v(&[0, 0])),
        single("linf-3d-corner", linf_ball(&[0, 0, 0], 1), v(&[1, 1, 1])),
        single("linf-3d-edge", linf_ball(&[0, 0, 0], 1), v(&[1, 1, 0])),
        single("linf-3d-facet", linf_ball(&[0, 0, 0], 1), qv(&[one.clone(), h.clone(), z.clone()])),
        single("linf-3d-scaled-facet", linf_ball(&[0, 0, 0], 2), v(&[2, 0, 0])),
        single("wedge-2d-apex", max_affine(vec![piece(&[1, 0], 0), piece(&[0, 1], 0)]), v(&[0, 0])),
        single(
            "wedge-3d-apex",
            max_affine(vec![piece(&[1, 0, 0], 0), piece(&[0, 1, 0], 0), piece(&[0, 0, 1], 0)]),
            v(&[0, 0, 0]),
        ),
        single("line-2d", max_affine(vec![piece(&[1, -1], 0), piece(&[-1, 1], 0)]), v(&[0, 0])),
        single(
            "pyramid-2d-apex",
            max_affine(vec![piece(&[1, 1], 0), piece(&[1, -1], 0), piece(&[-1, 0], 0)]),
            v(&[0, 0]),
        ),
        single("kink-2d-double-slope", max_affine(vec![piece(&[1, 0], 0), piece(&[2, 1], 0)]), v(&[0, 0])),
        family(
            "pair-2d-linf-and-halfplane",
            vec![linf_ball(&[0, 0], 1), max_affine(vec![piece(&[1, 1], -1)])],
            v(&[1, 0]),
        ),
        family(
            "pair-2d-wedge-and-slack",
            vec![
                max_affine(vec![piece(&[1, 0], 0), piece(&[0, 1], 0)]),
                max_affine(vec![piece(&[-1, 0], -1), piece(&[0, -1], -1)]),
            ],
            v(&[0, 0]),
        ),
        family(
            "pair-3d-l1-and-halfspace",
            vec![l1_ball(&[0, 0, 0], 1), max_affine(vec![piece(&[0, 0, 1], 0)])],
            v(&[1, 0, 0]),
        ),
        family(
            "triple-3d-orthant-kinks",
            vec![
                max_affine(vec![piece(&[1, 0, 0], 0), piece(&[1, 1, 0], 0)]),
                max_affine(vec![piece(&[0, 1, 0], 0)]),
                max_affine(vec![piece(&[0, 0, 1], 0), piece(&[0, 0, 2], 0)]),
            ],
            v(&[0, 0, 0]),
        ),
    ]
}

fn smooth(a: &[i64], b: i64, p: &[i64], root: i64, dir: Monotonicity) -> QcEvaluator {
    QcEvaluator::Smooth(SmoothQCMember::new(v(a), rat(b), Polynomial::from_ints(p), rat(root), dir).expect("curated member"))
}

fn qc_family(id: &str, members: Vec<QcEvaluator>, x: Vector) -> QcInstance {
    QcInstance {
        id: id.to_string(),
        family: SublevelOracleQC::from_evaluators(
            members.into_iter().enumerate().map(|(i, e)| (format!("g{i}"), e)).collect(),
        )
        .expect("curated family"),
        x,
    }
}

/// Twenty smooth quasi-convex families, most with the query point on the boundary.
pub fn curated_smooth_qc() -> Vec<QcInstance> {
    use Monotonicity::{Decreasing as D, Increasing as I};
    let cube = [0, 0, 0, 1];
    let cube_minus_one = [-1, 0, 0, 1];
    let cube_plus = [0, 1, 0, 1];
    let neg_cube = [0, 0, 0, -1];
    let quintic = [0, 0, 0, 0, 0, 1];
    let lin = [0, 1];
    vec![
        qc_family("cube-1d", vec![smooth(&[1], 0, &cube, 0, I)], v(&[0])),
        qc_family("cube-1d-interior", vec![smooth(&[1], 0, &cube, 0, I)], v(&[-1])),
        qc_family("neg-cube-1d", vec![smooth(&[1], 0, &neg_cube, 0, D)], v(&[0])),
        qc_family("quintic-1d", vec![smooth(&[1], 0, &quintic, 0, I)], v(&[0])),
        qc_family("cube-minus-one-1d", vec![smooth(&[1], 0, &cube_minus_one, 1, I)], v(&[1])),
        qc_family("cube-plus-1d", vec![smooth(&[2], 0, &cube_plus, 0, I)], v(&[0])),
        qc_family("cube-2d-axis", vec![smooth(&[1, 0], 0, &cube, 0, I)], v(&[0, 3])),
        qc_family("cube-2d-diagonal", vec![smooth(&[1, 1], 0, &cube, 0, I)], v(&[1, -1])),
        qc_family("cube-2d-shifted", vec![smooth(&[1, 2], -1, &cube, 0, I)], v(&[1, 0])),
        qc_family("neg-cube-2d", vec![smooth(&[0, 1], 0, &neg_cube, 0, D)], v(&[2, 0])),
        qc_family(
            "cube-pair-2d-corner",
            vec![smooth(&[1, 0], 0, &cube, 0, I), smooth(&[0, 1], 0, &cube, 0, I)],
            v(&[0, 0]),
        ),
        qc_family(
            "mixed-pair-2d-corner",
            vec![smooth(&[1, 0], 0, &cube, 0, I), smooth(&[0, 1], 0, &lin, 0, I)],
            v(&[0, 0]),
        ),
        qc_family(
            "cube-pair-2d-one-active",
            vec![smooth(&[1, 0], 0, &cube, 0, I), smooth(&[0, 1], 1, &cube, 0, I)],
            v(&[0, -2]),
        ),
        qc_family(
            "cube-pair-2d-opposed",
            vec![smooth(&[1, 1], 0, &cube, 0, I), smooth(&[1, -1], 0, &neg_cube, 0, D)],
            v(&[0, 0]),
        ),
        qc_family("quintic-2d", vec![smooth(&[1, -1], 0, &quintic, 0, I)], v(&[1, 1])),
        qc_family("cube-3d-axis", vec![smooth(&[0, 0, 1], 0, &cube, 0, I)], v(&[1, 1, 0])),
        qc_family("cube-3d-diagonal", vec![smooth(&[1, 1, 1], 0, &cube, 0, I)], v(&[1, -1, 0])),
        qc_family(
            "cube-triple-3d-corner",
            vec![
                smooth(&[1, 0, 0], 0, &cube, 0, I),
                smooth(&[0, 1, 0], 0, &cube, 0, I),
                smooth(&[0, 0, 1], 0, &cube, 0, I),
            ],
            v(&[0, 0, 0]),
        ),
        qc_family(
            "cube-pair-3d-edge",
            vec![smooth(&[1, 0, 0], 0, &cube, 0, I), smooth(&[0, 1, 0], 0, &neg_cube, 0, D)],
            v(&[0, 0, 5]),
        ),
        qc_family("cube-minus-one-3d", vec![smooth(&[1, 0, 1], 0, &cube_minus_one, 1, I)], v(&[1, 2, 0])),
    ]
}

fn qc1d(breaks: &[Rational], pieces: Vec<Piece1D>, values: Vec<ExtValue>) -> QuasiConvex1D {
    QuasiConvex1D::new(breaks.to_vec(), pieces, values).expect("curated 1-D function")
}

/// Twenty one-dimensional quasi-convex functions, many not lsc.
pub fn curated_closure_1d() -> Vec<(String, QuasiConvex1D)> {
    let aff = |a: i64, b: i64| Piece1D::affine(rat(a), rat(b));
    let fin = |x: i64| ExtValue::Finite(rat(x));
    let inf = Piece1D::PosInf;
    let pinf = ExtValue::PosInf;
    let z = [rat(0)];
    let pm = [rat(-1), rat(1)];
    let two = [rat(0), rat(2)];
    let cases = vec![
        ("increasing", QuasiConvex1D::affine(rat(1), rat(0))),
        ("decreasing", QuasiConvex1D::affine(rat(-1), rat(0))),
        ("shifted-slope", QuasiConvex1D::affine(rat(2), rat(-3))),
        ("zero", QuasiConvex1D::affine(rat(0), rat(0))),
        ("negative-constant", QuasiConvex1D::affine(rat(0), rat(-1))),
        ("jump-up-open", qc1d(&z, vec![aff(1, 0), aff(0, 1)], vec![fin(1)])),
        ("jump-up-closed", qc1d(&z, vec![aff(1, 0), aff(0, 1)], vec![fin(0)])),
        ("step-open", qc1d(&z, vec![aff(0, -1), aff(0, 2)], vec![fin(2)])),
        ("step-closed", qc1d(&z, vec![aff(0, -1), aff(0, 2)], vec![fin(0)])),
        ("step-down-open", qc1d(&z, vec![aff(0, 2), aff(0, -1)], vec![fin(2)])),
        ("abs-minus-one", qc1d(&z, vec![aff(-1, -1), aff(1, -1)], vec![fin(-1)])),
        ("asymmetric-v", qc1d(&z, vec![aff(-1, 0), aff(2, 0)], vec![fin(0)])),
        ("barrier-closed", qc1d(&z, vec![inf.clone(), aff(1, -1)], vec![fin(-1)])),
        ("barrier-open", qc1d(&z, vec![inf.clone(), aff(1, -1)], vec![pinf.clone()])),
        ("singleton", qc1d(&z, vec![inf.clone(), inf.clone()], vec![fin(0)])),
        ("singleton-by-slopes", qc1d(&z, vec![aff(0, 1), inf.clone()], vec![fin(0)])),
        ("drop-after-zero", qc1d(&z, vec![aff(0, 1), aff(1, -1)], vec![fin(1)])),
        ("open-window", qc1d(&pm, vec![inf.clone(), aff(0, 0), inf.clone()], vec![pinf.clone(), pinf.clone()])),
        ("half-open-window", qc1d(&pm, vec![inf.clone(), aff(1, 0), inf.clone()], vec![pinf.clone(), fin(1)])),
        ("flat-then-barrier", qc1d(&two, vec![aff(0, -1), aff(0, -1), inf], vec![fin(-1), pinf])),
    ];
    cases.into_iter().map(|(id, q)| (id.to_string(), q)).collect()
}

/// The tangent-point circle instance: `x = (1, 0)`, `c = −e₁`, radius 1.
pub fn circle_instance(shift: Rational) -> LinearSipInstance {
    LinearSipInstance {
        cost: v(&[-1, 0]),
        family: IndexFamily::Circle {
            radius: rat(1),
            span: rat(1),
            shift,
        },
        candidate: v(&[1, 0]),
    }
}

pub const CIRCLE_LEVELS: [u32; 7] = [4, 5, 6, 7, 8, 9, 10];

fn orthant(n: usize) -> SupFamily {
    SupFamily::new(
        (0..n)
            .map(|i| Member::new(format!("x{}", i + 1), PolyhedralFunction::affine(Vector::unit(n, i), rat(0))))
            .collect(),
    )
    .expect("orthant")
}

fn affine_program(c: &[i64], expected: &'static str) -> Case {
    let id = format!("optimal/orthant-cost({})", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
    Case::Optimal {
        id,
        program: ProgramInstance {
            objective: PolyhedralFunction::affine(v(c), rat(0)),
            constraints: orthant(2),
            candidate: v(&[0, 0]),
            qualification: Qualification::ObjectiveContinuousAt(v(&[-1, -1])),
        },
        eps: rat(1),
        grid: SGrid::default_grid(),
        expected: Some(expected),
    }
}

fn cubic_program(c: i64, expected: &'static str) -> Case {
    let cube = smooth(&[1], 0, &[0, 0, 0, 1], 0, Monotonicity::Increasing);
    Case::QcOptimal {
        id: format!("qc-necessary/cube-cost({c})"),
        program: QcProgram {
            objective: PolyhedralFunction::affine(v(&[c]), rat(0)),
            constraints: SublevelOracleQC::from_evaluators(vec![("cube".into(), cube)]).expect("cube"),
            candidate: v(&[0]),
            qualification: Qualification::ObjectiveContinuousAt(v(&[-1])),
            evidence: Cc3Evidence::ContinuousAt(v(&[-1])),
        },
        eps: ratio(1, 4),
        samples: 5,
        expected: Some(expected),
    }
}

/// Hand-built scenarios with known answers; every cone case must be equal.
pub fn curated() -> Vec<Case> {
    let eps = default_eps();
    let mut cases = Vec::new();
    for mode in [Mode::ExactAffine, Mode::Sampled] {
        for (name, x) in [("orthant", v(&[0, 0])), ("orthant-interior", v(&[-1, -1]))] {
            cases.push(sublevel_case(
                SupInstance {
                    id: format!("sublevel/{name}/{mode}"),
                    family: orthant(2),
                    x,
                },
                eps.clone(),
                mode,
                true,
            ));
        }
    }
    let with_domain = SupFamily::new(vec![
        Member::new("a", PolyhedralFunction::affine(v(&[1, 0]), rat(0))),
        Member::new(
            "dom",
            ImproperFunction::new(PolyhedronH::from_int_rows(2, &[(&[0, 1], 0)])).expect("domain"),
        ),
    ])
    .expect("family");
    cases.push(sublevel_case(
        SupInstance {
            id: "sublevel/improper-member".into(),
            family: with_domain.clone(),
            x: v(&[0, 0]),
        },
        eps.clone(),
        Mode::ExactAffine,
        true,
    ));
    for inst in curated_max_affine() {
        let id = format!("sublevel/max-affine/{}", inst.id);
        cases.push(sublevel_case(SupInstance { id, ..inst }, eps.clone(), Mode::Sampled, true));
    }
    cases.push(Case::Dom {
        id: "dom/improper-member".into(),
        family: with_domain,
        x: v(&[0, 0]),
        eps: vec![rat(1), ratio(1, 2)],
        policy: AlphaPolicy::Rho,
    });
    let restricted = SupFamily::new(vec![
        Member::new(
            "p",
            PolyhedralFunction::new(vec![piece(&[1, 1], 3)], PolyhedronH::from_int_rows(2, &[(&[1, 0], 0)]))
                .expect("member"),
        ),
        Member::new("i", ImproperFunction::new(PolyhedronH::from_int_rows(2, &[(&[0, -1], 0)])).expect("domain")),
    ])
    .expect("family");
    cases.push(Case::Dom {
        id: "dom/restricted-corner".into(),
        family: restricted,
        x: v(&[0, 0]),
        eps: vec![rat(1), ratio(1, 2)],
        policy: AlphaPolicy::Rho,
    });
    let halfplanes = qc_family(
        "qc/halfplanes",
        vec![
            QcEvaluator::composite(QuasiConvex1D::affine(rat(1), rat(0)), v(&[1, 0]), rat(0)).expect("member"),
            QcEvaluator::composite(QuasiConvex1D::affine(rat(1), rat(0)), v(&[0, 1]), rat(0)).expect("member"),
        ],
        v(&[0, 0]),
    );
    cases.push(qc_case(halfplanes, eps.clone()));
    let open = qc1d(&[rat(0)], vec![Piece1D::affine(rat(1), rat(0)), Piece1D::affine(rat(0), rat(1))], vec![ExtValue::Finite(rat(1))]);
    let non_lsc = qc_family(
        "qc/open-sublevel",
        vec![
            QcEvaluator::composite(open, v(&[1, 0]), rat(0)).expect("member"),
            QcEvaluator::composite(QuasiConvex1D::affine(rat(1), rat(0)), v(&[0, 1]), rat(0)).expect("member"),
        ],
        v(&[-1, 0]),
    );
    cases.push(qc_case(non_lsc, eps.clone()));
    for inst in curated_smooth_qc() {
        let quarter = vec![ratio(1, 4), ratio(1, 16)];
        cases.push(Case::Qc {
            id: format!("qc/smooth/{}", inst.id),
            family: inst.family.clone(),
            x: inst.x.clone(),
            eps: quarter.clone(),
            evidence: Cc3Evidence::Checked,
        });
        cases.push(Case::Outer {
            id: format!("qc/smooth/{}", inst.id),
            family: inst.family.clone(),
            x: inst.x.clone(),
            eps: quarter,
            samples: 5,
        });
        cases.push(Case::Lemnos {
            id: format!("qc/smooth/{}", inst.id),
            family: inst.family,
            x: inst.x,
            eps: vec![ratio(1, 16), ratio(1, 256)],
            samples: 5,
        });
    }
    cases.push(affine_program(&[-1, -1], "optimal"));
    cases.push(affine_program(&[1, 1], "not-optimal"));
    cases.push(Case::Optimal {
        id: "optimal/abs-trivial-constraint".into(),
        program: ProgramInstance {
            objective: max_affine(vec![piece(&[1], 0), piece(&[-1], 0)]),
            constraints: SupFamily::new(vec![Member::new("c", PolyhedralFunction::affine(v(&[0]), rat(-1)))])
                .expect("family"),
            candidate: v(&[0]),
            qualification: Qualification::ObjectiveContinuousAt(v(&[0])),
        },
        eps: rat(1),
        grid: SGrid::default_grid(),
        expected: Some("optimal"),
    });
    cases.push(cubic_program(-1, "condition-holds"));
    cases.push(cubic_program(1, "not-optimal"));
    for (c, expected) in [(-1, "optimal"), (1, "not-optimal")] {
        cases.push(Case::Sip {
            id: format!("sip/finite-cost({c},{c})"),
            instance: LinearSipInstance {
                cost: v(&[c, c]),
                family: IndexFamily::Finite(vec![(v(&[1, 0]), rat(0)), (v(&[0, 1]), rat(0))]),
                candidate: v(&[0, 0]),
            },
            eps: rat(1),
            levels: vec![],
            expected: Some(expected),
        });
    }
    cases.push(Case::Sip {
        id: "sip/circle-tangent".into(),
        instance: circle_instance(rat(0)),
        eps: rat(1),
        levels: CIRCLE_LEVELS.to_vec(),
        expected: Some("optimal"),
    });
    for (id, q) in curated_closure_1d() {
        cases.push(Case::Closure1D {
            id: format!("closure-1d/{id}"),
            q,
        });
    }
    cases
}

/// Seeded random cases cycling through the convex, domain and quasi-convex checks.
pub fn random(seed: u64, count: usize, dims: &[usize]) -> Vec<Case> {
    let mut g = Gen::new(seed);
    let dims: Vec<usize> = if dims.is_empty() { vec![2, 3] } else { dims.to_vec() };
    let eps = default_eps();
    (0..count)
        .map(|i| {
            let n = *g.pick(&dims);
            let members = g.int(1, 5) as usize;
            match i % 4 {
                0 => {
                    let improper = g.chance(0.2);
                    let inst = g.affine_instance(&format!("random/{seed}/{i}/affine"), n, members, improper);
                    sublevel_case(inst, eps.clone(), Mode::ExactAffine, true)
                }
                1 => {
                    let inst = g.max_affine_instance(&format!("random/{seed}/{i}/max-affine"), n, members.min(3));
                    sublevel_case(inst, eps.clone(), Mode::Sampled, false)
                }
                2 => {
                    let inst = g.restricted_domain_instance(&format!("random/{seed}/{i}/dom"), n, members.min(3));
                    Case::Dom {
                        id: inst.id,
                        family: inst.family,
                        x: inst.x,
                        eps: vec![rat(1), ratio(1, 2)],
                        policy: AlphaPolicy::Rho,
                    }
                }
                _ => qc_case(g.qc_instance(&format!("random/{seed}/{i}/qc"), n, members.min(3)), eps.clone()),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::report::{render, Format, Status, Summary};

    #[test]
    fn curated_suite_passes() {
        let records = run_cases(&curated(), Mutation::None, Execution::default());
        let bad: Vec<String> = records
            .iter()
            .filter(|r| r.status() != Status::Pass)
            .map(|r| r.human())
            .collect();
        assert!(bad.is_empty(), "{}", bad.join("\n"));
    }

    #[test]
    fn random_suite_is_deterministic_and_mutation_is_caught() {
        let cases = random(1, 12, &[2, 3]);
        let a = render(&run_cases(&cases, Mutation::None, Execution::Parallel), Format::Machine);
        let b = render(&run_cases(&cases, Mutation::None, Execution::Sequential), Format::Machine);
        assert_eq!(a, b);
        let mutated = run_cases(&cases, Mutation::SpuriousRay, Execution::default());
        assert!(Summary::of(&mutated).violations > 0);
    }

    #[test]
    fn curated_sizes() {
        assert_eq!(curated_max_affine().len(), 25);
        assert_eq!(curated_smooth_qc().len(), 20);
        assert_eq!(curated_closure_1d().len(), 20);
    }
}

//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run alone with `cargo test -p supcone --test acceptance`.

use std::process::ExitCode;
use std::time::Instant;

use supcone::formulas::{
    frechet_outer_cone, lemnos_inclusion_check, qc_sublevel_normal_cone, sublevel_normal_cone_intersection, AlphaPolicy,
    Cc3Evidence, Exactness, Mode, SGrid,
};
use supcone::functions::{
    convex_sublevel_closure_identity, eps_normal_set, eps_subdifferential, ClosureInput, ClosureVerdict, Minimum,
    PolyhedralFunction,
};
use supcone::gen::{Gen, SupInstance};
use supcone::geometry::{cone_equal, h_to_v, recession_cone, v_to_h, ConeGen, PolyhedronH};
use supcone::io::{render, Format};
use supcone::num::{rat, ratio, ExtValue, Rational};
use supcone::optimality::{auto_mode, check_optimal_convex, check_sip_linear, Improvement, OptimalityVerdict, SipVerdict};
use supcone::oracle;
use supcone::parallel::Execution;
use supcone::suite::{self, circle_instance, curated_closure_1d, curated_max_affine, curated_smooth_qc, CIRCLE_LEVELS};
use supcone::verify::{verify_with, Check, Mutation, Verdict};
use supcone::Result;

const PAR: Execution = Execution::Parallel;
const SEQ: Execution = Execution::Sequential;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn eps_list() -> Vec<Rational> {
    vec![rat(1), ratio(1, 2), ratio(1, 4)]
}

fn sublevel(inst: &SupInstance, e: &Rational, mode: Mode, grid: &SGrid) -> Result<Verdict> {
    let check = Check::Sublevel {
        family: &inst.family,
        grid,
        mode,
    };
    Ok(verify_with(&inst.id, check, &inst.x, e, Mutation::None, SEQ)?.verdict)
}

/// The 200 affine instances shared by the first and third criteria.
fn affine_suite() -> Vec<SupInstance> {
    let mut g = Gen::new(1001);
    (0..200)
        .map(|i| {
            let n = *g.pick(&[2, 3, 4]);
            let members = g.int(1, 8) as usize;
            let improper = g.chance(0.2);
            g.affine_instance(&format!("affine/{i}"), n, members, improper)
        })
        .collect()
}

fn affine_exactness(insts: &[SupInstance]) -> Result<Outcome> {
    let start = Instant::now();
    let grid = SGrid::default_grid();
    let verdicts = PAR.try_map(insts, |inst| {
        eps_list()
            .iter()
            .map(|e| sublevel(inst, e, Mode::ExactAffine, &grid))
            .collect::<Result<Vec<_>>>()
    })?;
    let all: Vec<Verdict> = verdicts.into_iter().flatten().collect();
    let bad = all.iter().filter(|v| **v != Verdict::Equal).count();
    let improper = insts.iter().filter(|i| i.family.members().iter().any(|m| !m.f.is_proper())).count();
    let secs = start.elapsed().as_secs_f64();
    Ok(outcome(
        bad == 0 && secs < 60.0,
        format!(
            "{} comparisons over {} instances ({improper} with an improper member), {bad} not equal, {secs:.2}s",
            all.len(),
            insts.len()
        ),
    ))
}

fn max_affine_inner() -> Result<Outcome> {
    let start = Instant::now();
    let grid = SGrid::default_grid();
    let mut g = Gen::new(2002);
    let insts: Vec<SupInstance> = (0..100)
        .map(|i| {
            let n = *g.pick(&[2, 3]);
            let members = g.int(1, 3) as usize;
            g.max_affine_instance(&format!("max-affine/{i}"), n, members)
        })
        .collect();
    let verdicts: Vec<Verdict> = PAR
        .try_map(&insts, |inst| {
            eps_list()
                .iter()
                .map(|e| sublevel(inst, e, Mode::Sampled, &grid))
                .collect::<Result<Vec<_>>>()
        })?
        .into_iter()
        .flatten()
        .collect();
    let violations = verdicts.iter().filter(|v| matches!(v, Verdict::Violation { .. })).count();
    let inside = verdicts
        .iter()
        .filter(|v| matches!(v, Verdict::FormulaStrictlyInside { .. }))
        .count();

    let curated = curated_max_affine();
    let results = PAR.try_map(&curated, |inst| {
        eps_list()
            .iter()
            .map(|e| {
                let check = Check::Sublevel {
                    family: &inst.family,
                    grid: &grid,
                    mode: Mode::Sampled,
                };
                let r = verify_with(&inst.id, check, &inst.x, e, Mutation::None, SEQ)?;
                Ok(r.verdict == Verdict::Equal && r.exactness() == Exactness::Exact)
            })
            .collect::<Result<Vec<bool>>>()
    })?;
    let curated_ok = results.iter().filter(|r| r.iter().all(|b| *b)).count();
    let secs = start.elapsed().as_secs_f64();
    Ok(outcome(
        violations == 0 && curated_ok == curated.len() && secs < 300.0,
        format!(
            "{} random comparisons: {violations} violations, {inside} strictly inside; curated {curated_ok}/{} equal and exact; {secs:.2}s",
            verdicts.len(),
            curated.len()
        ),
    ))
}

fn eps_list_intersection(insts: &[SupInstance]) -> Result<Outcome> {
    let grid = SGrid::default_grid();
    let lists = [eps_list(), vec![ratio(1, 3), ratio(1, 9)]];
    let mismatches: Vec<usize> = PAR.try_map(insts, |inst| {
        let mut bad = 0;
        for list in &lists {
            let r = sublevel_normal_cone_intersection(&inst.family, &inst.x, list, &grid, Mode::ExactAffine)?;
            for p in &r.per_eps {
                if !cone_equal(&r.cone, &p.cone)? {
                    bad += 1;
                }
            }
        }
        Ok(bad)
    })?;
    let bad: usize = mismatches.iter().sum();
    Ok(outcome(
        bad == 0,
        format!("{} instances x 2 lists: {bad} intersection/per-ε mismatches", insts.len()),
    ))
}

fn domain_cone() -> Result<Outcome> {
    let mut g = Gen::new(4004);
    let insts: Vec<SupInstance> = (0..100)
        .map(|i| {
            let n = *g.pick(&[2, 3]);
            let members = g.int(1, 3) as usize;
            g.restricted_domain_instance(&format!("dom/{i}"), n, members)
        })
        .collect();
    let policy = AlphaPolicy::Rho;
    let verdicts: Vec<Verdict> = PAR
        .try_map(&insts, |inst| {
            [rat(1), ratio(1, 2)]
                .iter()
                .map(|e| {
                    let check = Check::Dom {
                        family: &inst.family,
                        policy: &policy,
                    };
                    Ok(verify_with(&inst.id, check, &inst.x, e, Mutation::None, SEQ)?.verdict)
                })
                .collect::<Result<Vec<_>>>()
        })?
        .into_iter()
        .flatten()
        .collect();
    let bad = verdicts.iter().filter(|v| **v != Verdict::Equal).count();
    Ok(outcome(bad == 0, format!("{} comparisons, {bad} not equal", verdicts.len())))
}

fn quasi_convex() -> Result<Outcome> {
    let mut g = Gen::new(5005);
    let insts: Vec<_> = (0..100)
        .map(|i| {
            let n = *g.pick(&[2, 3]);
            let members = g.int(1, 3) as usize;
            g.qc_instance(&format!("qc/{i}"), n, members)
        })
        .collect();
    let evidence = Cc3Evidence::Checked;
    let verdicts: Vec<Verdict> = PAR
        .try_map(&insts, |inst| {
            eps_list()
                .iter()
                .map(|e| {
                    let check = Check::Qc {
                        family: &inst.family,
                        evidence: &evidence,
                    };
                    Ok(verify_with(&inst.id, check, &inst.x, e, Mutation::None, SEQ)?.verdict)
                })
                .collect::<Result<Vec<_>>>()
        })?
        .into_iter()
        .flatten()
        .collect();
    let bad = verdicts.iter().filter(|v| **v != Verdict::Equal).count();
    Ok(outcome(bad == 0, format!("{} comparisons, {bad} not equal", verdicts.len())))
}

fn outer_containment() -> Result<Outcome> {
    let insts = curated_smooth_qc();
    let eps = [ratio(1, 4), ratio(1, 16)];
    let rows = PAR.try_map(&insts, |inst| {
        let mut bad = 0;
        let mut skipped = 0;
        for e in &eps {
            let exact = qc_sublevel_normal_cone(&inst.family, &inst.x, e, &Cc3Evidence::Checked)?;
            let outer = frechet_outer_cone(&inst.family, &inst.x, e, 5)?;
            skipped += outer.skipped.len();
            if !exact.cone.is_subset_of(&outer.cone)? {
                bad += 1;
            }
        }
        Ok((bad, skipped))
    })?;
    let bad: usize = rows.iter().map(|r| r.0).sum();
    let skipped: usize = rows.iter().map(|r| r.1).sum();
    Ok(outcome(
        bad == 0 && insts.len() == 20,
        format!(
            "{} instances x 2 ε: {bad} containment failures ({skipped} samples skipped)",
            insts.len()
        ),
    ))
}

fn witness_search() -> Result<Outcome> {
    let insts = curated_smooth_qc();
    let eps = [ratio(1, 16), ratio(1, 256)];
    let rows = PAR.try_map(&insts, |inst| {
        let mut total = 0;
        let mut missing = 0;
        for e in &eps {
            for m in inst.family.members() {
                let r = lemnos_inclusion_check(&m.evaluator, &inst.x, e, 5)?;
                total += r.checks.len();
                missing += r.not_found();
            }
        }
        Ok((total, missing))
    })?;
    let total: usize = rows.iter().map(|r| r.0).sum();
    let missing: usize = rows.iter().map(|r| r.1).sum();
    Ok(outcome(
        missing == 0 && total > 0,
        format!("{total} generators searched, not found = {missing}"),
    ))
}

/// Checks an improvement against the program data alone.
fn improvement_is_real(f0: &PolyhedralFunction, feasible: &PolyhedronH, fx: &Rational, imp: &Improvement) -> Result<bool> {
    Ok(match imp {
        Improvement::Point { point, value } => {
            feasible.contains(point) && f0.evaluate(point)? == ExtValue::Finite(value.clone()) && value < fx
        }
        Improvement::Ray { point, direction } => {
            let rec = recession_cone(&f0.domain().intersect(feasible)?)?;
            feasible.contains(point)
                && f0.domain().contains(point)
                && rec.contains(direction)?.is_some()
                && f0.pieces().iter().all(|p| p.slope.dot(direction) < Rational::from_integer(0.into()))
        }
        Improvement::ConditionOnly => false,
    })
}

fn optimality() -> Result<Outcome> {
    let mut g = Gen::new(8008);
    let progs: Vec<_> = (0..100)
        .map(|_| {
            let n = *g.pick(&[2, 3]);
            let members = g.int(1, 5) as usize;
            g.program_instance(n, members)
        })
        .collect();
    let grid = SGrid::default_grid();
    let rows = PAR.try_map(&progs, |p| {
        let v = check_optimal_convex(p, &rat(1), &grid, auto_mode(&p.constraints))?;
        let fx = match p.objective.evaluate(&p.candidate)? {
            ExtValue::Finite(v) => v,
            _ => unreachable!("candidates lie in dom f0"),
        };
        let truly_optimal = match p.direct_minimum()? {
            Minimum::Attained { value, .. } => value == fx,
            Minimum::Unbounded { .. } => false,
            Minimum::EmptyDomain => unreachable!("the candidate is feasible"),
        };
        let feasible = p.feasible_set();
        Ok(match &v {
            OptimalityVerdict::Optimal(c) => {
                let truth = oracle::sublevel_normal_cone(&p.constraints, &p.candidate)?;
                (truly_optimal, true, c.verify(&p.objective, &p.candidate, &truth)?)
            }
            OptimalityVerdict::NotOptimal(imp) => (
                !truly_optimal,
                false,
                improvement_is_real(&p.objective, &feasible, &fx, imp)?,
            ),
            OptimalityVerdict::Inconclusive { .. } => (false, false, false),
        })
    })?;
    let agree = rows.iter().filter(|r| r.0).count();
    let certs = rows.iter().filter(|r| r.1).count();
    let evidence_ok = rows.iter().filter(|r| r.2).count();
    Ok(outcome(
        agree == progs.len() && evidence_ok == progs.len(),
        format!(
            "{agree}/{} verdicts match direct minimization; {certs} certificates and {} improvements, {evidence_ok} re-verified",
            progs.len(),
            progs.len() - certs
        ),
    ))
}

fn circle_sip() -> Result<Outcome> {
    let start = Instant::now();
    let v = check_sip_linear(&circle_instance(rat(0)), &rat(1), &CIRCLE_LEVELS, PAR)?;
    let secs = start.elapsed().as_secs_f64();
    let levels = v.levels();
    let non_increasing = levels.windows(2).all(|w| w[1].residual <= w[0].residual);
    let last = levels.last().expect("levels").residual_f64();
    let optimal = matches!(v, SipVerdict::Optimal { .. });
    Ok(outcome(
        non_increasing && last <= 1e-6 && secs < 10.0 && levels.len() == CIRCLE_LEVELS.len(),
        format!(
            "{} levels up to {} samples, verdict {}, residuals non-increasing: {non_increasing}, final {last:e}, {secs:.2}s{}",
            levels.len(),
            levels.last().map_or(0, |l| l.samples),
            v.label(),
            if optimal { "" } else { " (not optimal)" }
        ),
    ))
}

/// Two routes to `cl dom σ_A`: the polar of the V-side rays, and the polar of
/// the recession cone read back from the H-side; support values are then
/// checked for finiteness against the second.
fn rl_case(g: &mut Gen, n: usize) -> Result<bool> {
    let a = g.generator_set(n);
    let via_rays = ConeGen::new(n, a.rays().to_vec())?.polar()?;
    let via_h = recession_cone(&v_to_h(&a)?)?.polar()?;
    if !cone_equal(&via_rays, &via_h)? {
        return Ok(false);
    }
    for _ in 0..4 {
        let d = g.vector(n, -3, 3);
        let finite = matches!(a.support_function(&d)?, ExtValue::Finite(_));
        if finite != via_h.contains(&d)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn ricone_case(g: &mut Gen, n: usize) -> Result<bool> {
    let x = g.vector(n, -2, 2);
    let k = g.int(2, 4);
    let parts: Vec<PolyhedronH> = (0..k)
        .map(|_| {
            let rows = g.int(1, 3) as usize;
            g.polyhedron_at(&x, rows)
        })
        .collect();
    let mut lhs = recession_cone(&parts[0])?;
    for p in &parts[1..] {
        lhs = lhs.intersect(&recession_cone(p)?)?;
    }
    let rhs = recession_cone(&PolyhedronH::intersect_all(n, &parts)?)?;
    cone_equal(&lhs, &rhs)
}

/// Families with an empty intersection; returns whether the identity held.
fn ricone_empty_case(g: &mut Gen, n: usize) -> Result<Option<bool>> {
    let parts: Vec<PolyhedronH> = (0..g.int(2, 3)).map(|_| g.polyhedron(n, 2)).collect();
    if parts.iter().any(PolyhedronH::is_empty) {
        return Ok(None);
    }
    let inter = PolyhedronH::intersect_all(n, &parts)?;
    if !inter.is_empty() {
        return Ok(None);
    }
    let mut lhs = recession_cone(&parts[0])?;
    for p in &parts[1..] {
        lhs = lhs.intersect(&recession_cone(p)?)?;
    }
    Ok(Some(lhs.is_trivial()))
}

fn dd_case(g: &mut Gen, n: usize) -> Result<bool> {
    let p = g.polyhedron(n, 4);
    let back = v_to_h(&h_to_v(&p)?)?;
    let gs = g.generator_set(n);
    let gs_back = h_to_v(&v_to_h(&gs)?)?;
    Ok(back.same_set(&p)? && gs_back.same_set(&gs)?)
}

fn normal_set_case(g: &mut Gen, n: usize) -> Result<bool> {
    let x = g.vector(n, -2, 2);
    let rows = g.int(1, 4) as usize;
    let d = g.polyhedron_at(&x, rows);
    let e = g.pick(&[ratio(1, 4), ratio(1, 2), rat(1), rat(3)]).clone();
    let direct = eps_normal_set(&d, &x, &e)?;
    let via_indicator = eps_subdifferential(&PolyhedralFunction::indicator(d), &x, &e)?;
    direct.same_set(&via_indicator)
}

fn preliminaries(info: &mut Vec<String>) -> Result<Outcome> {
    type CaseFn = fn(&mut Gen, usize) -> Result<bool>;
    let kinds: [(&str, CaseFn); 4] = [
        ("rl", rl_case),
        ("ricone", ricone_case),
        ("dd", dd_case),
        ("normal-set", normal_set_case),
    ];
    let mut parts = Vec::new();
    let mut all_ok = true;
    for (k, (name, f)) in kinds.iter().enumerate() {
        let seeds: Vec<u64> = (0..1000).collect();
        let ok = PAR.try_map(&seeds, |s| {
            let mut g = Gen::new(10_000 * (k as u64 + 1) + s);
            let n = if s % 2 == 0 { 2 } else { 3 };
            f(&mut g, n)
        })?;
        let fails = ok.iter().filter(|b| !**b).count();
        all_ok &= fails == 0;
        parts.push(format!("{name} {}/1000", 1000 - fails));
    }
    let closure = curated_closure_1d();
    let mut holds = 0;
    for (_, q) in &closure {
        if convex_sublevel_closure_identity(ClosureInput::OneD(q))? == ClosureVerdict::Holds {
            holds += 1;
        }
    }
    all_ok &= holds == closure.len() && closure.len() == 20;
    parts.push(format!("closure-1d {holds}/{}", closure.len()));

    let seeds: Vec<u64> = (0..2000).collect();
    let empty = PAR.try_map(&seeds, |s| ricone_empty_case(&mut Gen::new(90_000 + s), 2))?;
    let tested: Vec<bool> = empty.into_iter().flatten().collect();
    let held = tested.iter().filter(|b| **b).count();
    info.push(format!(
        "recession cones of families with empty intersection: identity with [∅]∞ = {{θ}} holds in {held} of {} cases",
        tested.len()
    ));
    Ok(outcome(all_ok, parts.join(", ")))
}

fn determinism() -> Result<Outcome> {
    let mut cases = suite::curated();
    cases.extend(suite::random(1, 50, &[2, 3]));
    let a = render(&suite::run_cases(&cases, Mutation::None, PAR), Format::Machine);
    let b = render(&suite::run_cases(&cases, Mutation::None, PAR), Format::Machine);
    let c = render(&suite::run_cases(&cases, Mutation::None, SEQ), Format::Machine);
    Ok(outcome(
        a == b && a == c,
        format!("{} cases, {} report bytes, parallel x2 and sequential identical: {}", cases.len(), a.len(), a == b && a == c),
    ))
}

fn main() -> ExitCode {
    let mut info = Vec::new();
    let suite1 = affine_suite();
    type Run<'a> = Box<dyn FnOnce(&mut Vec<String>) -> Result<Outcome> + 'a>;
    let criteria: Vec<(&str, Run)> = vec![
        ("affine families, closed form equals oracle", Box::new(|_| affine_exactness(&suite1))),
        ("max-affine inner approximation and stabilization", Box::new(|_| max_affine_inner())),
        ("finite ε-list intersection equals per-ε cone", Box::new(|_| eps_list_intersection(&suite1))),
        ("domain normal cone with improper members", Box::new(|_| domain_cone())),
        ("quasi-convex sublevel normal cone", Box::new(|_| quasi_convex())),
        ("Fréchet outer cone containment", Box::new(|_| outer_containment())),
        ("ε-normal witness search", Box::new(|_| witness_search())),
        ("convex optimality verdicts and certificates", Box::new(|_| optimality())),
        ("linear SIP circle residuals", Box::new(|_| circle_sip())),
        ("preliminary identities and 1-D closures", Box::new(preliminaries)),
        ("byte-identical reports", Box::new(|_| determinism())),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let o = run(&mut info).unwrap_or_else(|e| outcome(false, format!("error: {e}")));
        if !o.pass {
            failed += 1;
        }
        println!("{} [{:>2}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    for line in info {
        println!("INFO      {line}");
    }
    println!("acceptance: {} of 11 criteria passed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Comparison of formula cones with the oracle.

use std::fmt;
use std::time::{Duration, Instant};

use crate::error::Result;
use crate::formulas::{
    dom_sup_normal_cone, qc_sublevel_normal_cone, sublevel_normal_cone_formula_with, AlphaPolicy, Cc3Evidence,
    Exactness, FormulaResult, Mode, SGrid, SublevelOracleQC, SupFamily,
};
use crate::geometry::ConeGen;
use crate::num::{Rational, Vector};
use crate::oracle;
use crate::parallel::Execution;

/// Which identity is checked.
#[derive(Clone, Copy, Debug)]
pub enum Check<'a> {
    Sublevel { family: &'a SupFamily, grid: &'a SGrid, mode: Mode },
    Dom { family: &'a SupFamily, policy: &'a AlphaPolicy },
    Qc { family: &'a SublevelOracleQC, evidence: &'a Cc3Evidence },
}

impl Check<'_> {
    pub fn name(&self) -> &'static str {
        match self {
            Check::Sublevel { .. } => "sublevel",
            Check::Dom { .. } => "dom",
            Check::Qc { .. } => "qc",
        }
    }
}

/// Harness self-test hook: corrupts the formula side before comparison.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mutation {
    #[default]
    None,
    /// Adds the first `±e_i` that the oracle cone does not contain.
    SpuriousRay,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    /// Oracle ray missing from the formula cone: a sampling gap.
    FormulaStrictlyInside { witness: Vector },
    /// Formula ray outside the oracle cone: an implementation bug.
    Violation { witness: Vector },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Equal => "equal",
            Verdict::FormulaStrictlyInside { .. } => "formula-strictly-inside",
            Verdict::Violation { .. } => "VIOLATION",
        }
    }

    pub fn witness(&self) -> Option<&Vector> {
        match self {
            Verdict::Equal => None,
            Verdict::FormulaStrictlyInside { witness } | Verdict::Violation { witness } => Some(witness),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.witness() {
            None => f.write_str(self.label()),
            Some(w) => write!(f, "{} (witness {w})", self.label()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub instance: String,
    pub check: &'static str,
    pub eps: Rational,
    pub grid: Option<SGrid>,
    pub verdict: Verdict,
    pub formula: FormulaResult,
    pub oracle: ConeGen,
    /// Wall time; excluded from machine-readable output.
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn exactness(&self) -> Exactness {
        self.formula.exactness
    }
}

/// Classifies `formula` against `truth`.
pub fn compare(formula: &ConeGen, truth: &ConeGen) -> Result<Verdict> {
    if let Some(witness) = formula.first_missing(truth)? {
        return Ok(Verdict::Violation { witness });
    }
    Ok(match truth.first_missing(formula)? {
        Some(witness) => Verdict::FormulaStrictlyInside { witness },
        None => Verdict::Equal,
    })
}

fn mutate(cone: &ConeGen, truth: &ConeGen) -> Result<ConeGen> {
    let n = cone.dim();
    for i in 0..n {
        for e in [Vector::unit(n, i), -&Vector::unit(n, i)] {
            if truth.contains(&e)?.is_none() {
                let mut rays = cone.rays().to_vec();
                rays.push(e);
                return ConeGen::new(n, rays);
            }
        }
    }
    // The oracle is the whole space: nothing can be added.
    Ok(cone.clone())
}

pub fn verify_formula_instance(id: &str, check: Check<'_>, x: &Vector, eps: &Rational) -> Result<VerificationReport> {
    verify_with(id, check, x, eps, Mutation::None, Execution::default())
}

pub fn verify_with(
    id: &str,
    check: Check<'_>,
    x: &Vector,
    eps: &Rational,
    mutation: Mutation,
    exec: Execution,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let (formula, truth) = match check {
        Check::Sublevel { family, grid, mode } => (
            sublevel_normal_cone_formula_with(family, x, eps, grid, mode, exec)?,
            oracle::sublevel_normal_cone(family, x)?,
        ),
        Check::Dom { family, policy } => (
            dom_sup_normal_cone(family, x, eps, policy)?,
            oracle::dom_normal_cone(family, x)?,
        ),
        Check::Qc { family, evidence } => (
            qc_sublevel_normal_cone(family, x, eps, evidence)?,
            oracle::qc_normal_cone(family, x)?,
        ),
    };
    let mut formula = formula;
    if mutation == Mutation::SpuriousRay {
        formula.cone = mutate(&formula.cone, &truth)?;
    }
    let verdict = compare(&formula.cone, &truth)?;
    Ok(VerificationReport {
        instance: id.to_string(),
        check: check.name(),
        eps: eps.clone(),
        grid: formula.grid.clone(),
        verdict,
        formula,
        oracle: truth,
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::{Member, QcEvaluator};
    use crate::functions::{PolyhedralFunction, QuasiConvex1D};
    use crate::num::rat;

    fn orthant() -> SupFamily {
        SupFamily::new(vec![
            Member::new("1", PolyhedralFunction::affine(Vector::from_ints(&[1, 0]), rat(0))),
            Member::new("2", PolyhedralFunction::affine(Vector::from_ints(&[0, 1]), rat(0))),
        ])
        .unwrap()
    }

    #[test]
    fn verdict_lattice() {
        let a = ConeGen::new(2, vec![Vector::from_ints(&[1, 0])]).unwrap();
        let b = ConeGen::new(2, vec![Vector::from_ints(&[1, 0]), Vector::from_ints(&[0, 1])]).unwrap();
        assert_eq!(compare(&b, &b).unwrap(), Verdict::Equal);
        assert_eq!(
            compare(&a, &b).unwrap(),
            Verdict::FormulaStrictlyInside {
                witness: Vector::from_ints(&[0, 1])
            }
        );
        assert!(matches!(compare(&b, &a).unwrap(), Verdict::Violation { .. }));
    }

    #[test]
    fn orthant_is_equal_and_mutation_is_caught() {
        let fam = orthant();
        let grid = SGrid::default_grid();
        let x = Vector::zeros(2);
        for mode in [Mode::ExactAffine, Mode::Sampled] {
            let check = Check::Sublevel {
                family: &fam,
                grid: &grid,
                mode,
            };
            let r = verify_formula_instance("orthant", check, &x, &rat(1)).unwrap();
            assert_eq!(r.verdict, Verdict::Equal);
            let r = verify_with("orthant", check, &x, &rat(1), Mutation::SpuriousRay, Execution::Sequential).unwrap();
            assert_eq!(r.verdict.label(), "VIOLATION");
        }
        let r = verify_formula_instance(
            "dom",
            Check::Dom {
                family: &fam,
                policy: &AlphaPolicy::Rho,
            },
            &x,
            &rat(1),
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Equal);
        assert!(r.oracle.is_trivial());
    }

    #[test]
    fn qc_check() {
        let qc = SublevelOracleQC::from_evaluators(vec![(
            "1".into(),
            QcEvaluator::composite(QuasiConvex1D::affine(rat(1), rat(0)), Vector::from_ints(&[1, 1]), rat(0)).unwrap(),
        )])
        .unwrap();
        let check = Check::Qc {
            family: &qc,
            evidence: &Cc3Evidence::Checked,
        };
        let r = verify_formula_instance("qc", check, &Vector::zeros(2), &rat(1)).unwrap();
        assert_eq!(r.verdict, Verdict::Equal);
        assert_eq!(r.oracle.rays(), &[Vector::from_ints(&[1, 1])]);
    }
}

use super::family::SupFamily;
use super::qc::SublevelOracleQC;
use crate::error::{Error, Result};
use crate::functions::{compare_intervals, ClosureVerdict, Interval, QuasiConvex1D};
use crate::geometry::PolyhedronH;
use crate::num::{Rational, Vector};

#[derive(Clone, Copy, Debug)]
pub enum CcInput<'a> {
    Sup(&'a SupFamily),
    Qc(&'a SublevelOracleQC),
    /// `f = sup_t f_t` for one-dimensional members.
    OneD(&'a [QuasiConvex1D]),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CcVerdict {
    /// `cl[f ≤ 0] = ∩ [f̄_t ≤ 0]`; the weaker identity holds with it.
    Cc2Holds,
    /// Only `cl[f ≤ 0] = ∩ cl[f_t ≤ 0]`.
    Cc3Holds,
    /// A point in exactly one of `cl[f ≤ 0]` and `∩ cl[f_t ≤ 0]`.
    Fails { witness: Vector },
}

fn empty_sublevel() -> Error {
    Error::Precondition("[f <= 0] is empty".into())
}

fn polyhedra_witness(a: &PolyhedronH, b: &PolyhedronH) -> Result<Option<Vector>> {
    Ok(match a.point_outside(b)? {
        Some(w) => Some(w),
        None => b.point_outside(a)?,
    })
}

/// Combines the two identities; (cc2) ⇒ (cc3) is asserted, not assumed.
fn verdict(cc2: Option<Vector>, cc3: Option<Vector>) -> CcVerdict {
    match (cc2, cc3) {
        (None, None) => CcVerdict::Cc2Holds,
        (None, Some(w)) => panic!("closure identity violated although the hull identity holds; witness {w}"),
        (Some(_), None) => CcVerdict::Cc3Holds,
        (Some(_), Some(witness)) => CcVerdict::Fails { witness },
    }
}

fn polyhedral_verdict(dim: usize, lhs: &PolyhedronH, hulls: &[PolyhedronH], closures: &[PolyhedronH]) -> Result<CcVerdict> {
    let rhs2 = PolyhedronH::intersect_all(dim, hulls)?;
    let rhs3 = PolyhedronH::intersect_all(dim, closures)?;
    Ok(verdict(polyhedra_witness(lhs, &rhs2)?, polyhedra_witness(lhs, &rhs3)?))
}

fn interval_witness(a: &Interval, b: &Interval) -> Option<Vector> {
    match compare_intervals(a, b) {
        ClosureVerdict::Holds => None,
        ClosureVerdict::Fails { witness } => Some(witness),
    }
}

/// Decides the closure conditions exactly from the member data.
pub fn cc_condition_check(input: CcInput<'_>) -> Result<CcVerdict> {
    let zero = Rational::from_integer(0.into());
    match input {
        CcInput::Sup(family) => {
            let n = family.dim();
            let sub: Vec<PolyhedronH> = family.members().iter().map(|m| m.f.sublevel_set(&zero)).collect();
            let lhs = PolyhedronH::intersect_all(n, &sub)?;
            if lhs.is_empty() {
                return Err(empty_sublevel());
            }
            // Polyhedral members are lsc with closed sublevel sets, and the
            // lsc hull of an improper member is −∞ on the closed domain.
            polyhedral_verdict(n, &lhs, &sub, &sub)
        }
        CcInput::Qc(qc) => {
            let lhs = qc.closed_sublevel()?;
            let hulls: Vec<PolyhedronH> = qc.members().iter().map(|m| m.evaluator.hull_zero_sublevel()).collect();
            let closures: Vec<PolyhedronH> = qc.members().iter().map(|m| m.zero_sublevel.clone()).collect();
            polyhedral_verdict(qc.dim(), &lhs, &hulls, &closures)
        }
        CcInput::OneD(members) => {
            if members.is_empty() {
                return Err(Error::Input("a family needs at least one member".into()));
            }
            let mut sub = Interval::real_line();
            let mut hull = Interval::real_line();
            let mut closed = Interval::real_line();
            for q in members {
                let s = q.sublevel(&zero, false);
                sub = sub.intersect(&s);
                closed = closed.intersect(&s.closure());
                hull = hull.intersect(&q.closed_hull().sublevel(&zero, false));
            }
            if sub.is_empty() {
                return Err(empty_sublevel());
            }
            let lhs = sub.closure();
            Ok(verdict(interval_witness(&lhs, &hull), interval_witness(&lhs, &closed)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::{Member, QcEvaluator};
    use crate::functions::{ImproperFunction, Piece1D, PolyhedralFunction};
    use crate::num::{rat, ExtValue};

    fn v(xs: &[i64]) -> Vector {
        Vector::from_ints(xs)
    }

    #[test]
    fn lsc_family_satisfies_cc2() {
        let fam = SupFamily::new(vec![
            Member::new("1", PolyhedralFunction::affine(v(&[1, 0]), rat(0))),
            Member::new("2", ImproperFunction::new(PolyhedronH::from_int_rows(2, &[(&[0, 1], 0)])).unwrap()),
        ])
        .unwrap();
        assert_eq!(cc_condition_check(CcInput::Sup(&fam)).unwrap(), CcVerdict::Cc2Holds);
        let pos = SupFamily::new(vec![Member::new("1", PolyhedralFunction::affine(v(&[0]), rat(1)))]).unwrap();
        assert!(matches!(cc_condition_check(CcInput::Sup(&pos)), Err(Error::Precondition(_))));
    }

    fn open_left() -> QuasiConvex1D {
        // [q ≤ 0] = (−∞, 0): the value 1 at 0 is not lsc.
        QuasiConvex1D::new(
            vec![rat(0)],
            vec![Piece1D::affine(rat(1), rat(0)), Piece1D::affine(rat(0), rat(1))],
            vec![ExtValue::Finite(rat(1))],
        )
        .unwrap()
    }

    #[test]
    fn non_lsc_members() {
        let qs = [open_left(), QuasiConvex1D::affine(rat(-1), rat(-1))];
        assert_eq!(cc_condition_check(CcInput::OneD(&qs)).unwrap(), CcVerdict::Cc2Holds);
        let qc = SublevelOracleQC::from_evaluators(vec![
            ("open".into(), QcEvaluator::composite(open_left(), v(&[1, 0]), rat(0)).unwrap()),
            ("line".into(), QcEvaluator::composite(QuasiConvex1D::affine(rat(1), rat(0)), v(&[0, 1]), rat(0)).unwrap()),
        ])
        .unwrap();
        assert_eq!(cc_condition_check(CcInput::Qc(&qc)).unwrap(), CcVerdict::Cc2Holds);
        // (−∞, 0) ∩ [0, ∞) is empty although the closures meet.
        let qs = [open_left(), QuasiConvex1D::affine(rat(-1), rat(0))];
        assert!(matches!(cc_condition_check(CcInput::OneD(&qs)), Err(Error::Precondition(_))));
    }

    #[test]
    fn verdict_lattice() {
        assert_eq!(verdict(None, None), CcVerdict::Cc2Holds);
        assert_eq!(verdict(Some(v(&[1])), None), CcVerdict::Cc3Holds);
        assert_eq!(verdict(Some(v(&[1])), Some(v(&[2]))), CcVerdict::Fails { witness: v(&[2]) });
    }
}

//! Extended-real-valued functions: polyhedral convex members, improper
//! members, one-dimensional quasi-convex functions and polynomials.

pub mod convex;
pub mod poly;
pub mod qc1d;

pub use convex::{
    eps_normal_set, eps_subdifferential, evaluate, sublevel_set, AffinePiece, ExtendedFunction, ImproperFunction,
    Minimum, PolyhedralFunction,
};
pub use poly::Polynomial;
pub use qc1d::{qc1d_closed_hull, Bound, Interval, Piece1D, QuasiConvex1D};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::num::{Rational, Vector};

/// Input to [`convex_sublevel_closure_identity`].
#[derive(Clone, Copy, Debug)]
pub enum ClosureInput<'a> {
    OneD(&'a QuasiConvex1D),
    Polyhedral(&'a PolyhedralFunction),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosureVerdict {
    Holds,
    /// A point in exactly one of `cl([f ≤ 0])` and `[f̄ ≤ 0]`.
    Fails { witness: Vector },
}

/// Compares `cl([f ≤ 0])` with `[f̄ ≤ 0]`.
pub fn convex_sublevel_closure_identity(f: ClosureInput<'_>) -> Result<ClosureVerdict> {
    match f {
        ClosureInput::Polyhedral(p) => {
            if p.sublevel_set(&Rational::zero()).is_empty() {
                return Err(Error::Precondition("the zero sublevel set is empty".into()));
            }
            // Polyhedral functions are lsc and their sublevel sets closed.
            Ok(ClosureVerdict::Holds)
        }
        ClosureInput::OneD(q) => {
            let zero = Rational::zero();
            let s = q.sublevel(&zero, false);
            if s.is_empty() {
                return Err(Error::Precondition("the zero sublevel set is empty".into()));
            }
            let lhs = s.closure();
            let rhs = q.closed_hull().sublevel(&zero, false);
            Ok(compare_intervals(&lhs, &rhs))
        }
    }
}

pub(crate) fn compare_intervals(lhs: &Interval, rhs: &Interval) -> ClosureVerdict {
    match lhs.difference_witness(rhs) {
        None => ClosureVerdict::Holds,
        Some(t) => ClosureVerdict::Fails {
            witness: Vector::new(vec![t]),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{rat, ExtValue};

    #[test]
    fn closure_identity_on_jumps() {
        // y for y > 0, 0 at 0, −1 for y < 0.
        let f = QuasiConvex1D::new(
            vec![rat(0)],
            vec![Piece1D::affine(rat(0), rat(-1)), Piece1D::affine(rat(1), rat(0))],
            vec![ExtValue::Finite(rat(0))],
        )
        .unwrap();
        assert_eq!(f.closed_hull().values(), &[ExtValue::Finite(rat(-1))]);
        assert_eq!(convex_sublevel_closure_identity(ClosureInput::OneD(&f)).unwrap(), ClosureVerdict::Holds);

        // Isolated zero: |y| has [f ≤ 0] = {0}.
        let abs = QuasiConvex1D::new(
            vec![rat(0)],
            vec![Piece1D::affine(rat(-1), rat(0)), Piece1D::affine(rat(1), rat(0))],
            vec![ExtValue::Finite(rat(0))],
        )
        .unwrap();
        assert_eq!(abs.sublevel(&rat(0), false), Interval::point(rat(0)));
        assert_eq!(convex_sublevel_closure_identity(ClosureInput::OneD(&abs)).unwrap(), ClosureVerdict::Holds);

        let pos = QuasiConvex1D::affine(rat(0), rat(1));
        assert!(convex_sublevel_closure_identity(ClosureInput::OneD(&pos)).is_err());
    }

    #[test]
    fn closure_identity_polyhedral() {
        let f = PolyhedralFunction::affine(Vector::from_ints(&[1, 1]), rat(0));
        assert_eq!(
            convex_sublevel_closure_identity(ClosureInput::Polyhedral(&f)).unwrap(),
            ClosureVerdict::Holds
        );
        let g = PolyhedralFunction::affine(Vector::from_ints(&[0, 0]), rat(1));
        assert!(convex_sublevel_closure_identity(ClosureInput::Polyhedral(&g)).is_err());
    }

    #[test]
    fn interval_mismatch_reports_witness() {
        let open = Interval::Span {
            lo: Bound::Unbounded,
            hi: Bound::Open(rat(0)),
        };
        let closed = open.closure();
        assert_eq!(
            compare_intervals(&open, &closed),
            ClosureVerdict::Fails {
                witness: Vector::from_ints(&[0])
            }
        );
    }
}

//! Seeded random instances. Every generator keeps its query point feasible
//! by choosing the member values at that point first.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formulas::{Member, Monotonicity, QcEvaluator, SmoothQCMember, SublevelOracleQC, SupFamily};
use crate::functions::{AffinePiece, ImproperFunction, Piece1D, PolyhedralFunction, Polynomial, QuasiConvex1D};
use crate::geometry::{GeneratorSet, HalfSpace, PolyhedronH};
use crate::num::{rat, ratio, ExtValue, Rational, Vector};
use crate::optimality::{ProgramInstance, Qualification};

pub struct Gen {
    rng: ChaCha8Rng,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupInstance {
    pub id: String,
    pub family: SupFamily,
    pub x: Vector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QcInstance {
    pub id: String,
    pub family: SublevelOracleQC,
    pub x: Vector,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn pick<'a, T>(&mut self, xs: &'a [T]) -> &'a T {
        xs.choose(&mut self.rng).expect("nonempty choice")
    }

    pub fn vector(&mut self, n: usize, lo: i64, hi: i64) -> Vector {
        Vector::new((0..n).map(|_| rat(self.int(lo, hi))).collect())
    }

    pub fn nonzero_vector(&mut self, n: usize, bound: i64) -> Vector {
        loop {
            let v = self.vector(n, -bound, bound);
            if !v.is_zero() {
                return v;
            }
        }
    }

    /// A half-space containing `x`, tight at `x` when `tight`.
    fn halfspace_at(&mut self, x: &Vector, tight: bool) -> HalfSpace {
        let a = self.nonzero_vector(x.dim(), 2);
        let slack = if tight { 0 } else { self.int(1, 3) };
        let b = a.dot(x) + rat(slack);
        HalfSpace::new(a, b)
    }

    /// A polyhedron of `rows` half-spaces containing `x`.
    pub fn polyhedron_at(&mut self, x: &Vector, rows: usize) -> PolyhedronH {
        let hs = (0..rows)
            .map(|_| {
                let tight = self.chance(0.5);
                self.halfspace_at(x, tight)
            })
            .collect();
        PolyhedronH::new(x.dim(), hs).expect("dimensions agree")
    }

    /// A random nonempty polyhedron with up to `max_rows` constraints.
    pub fn polyhedron(&mut self, n: usize, max_rows: usize) -> PolyhedronH {
        let x = self.vector(n, -2, 2);
        let rows = self.int(1, max_rows as i64) as usize;
        self.polyhedron_at(&x, rows)
    }

    /// A nonempty V-representation with 1 to 4 points and up to 3 rays.
    pub fn generator_set(&mut self, n: usize) -> GeneratorSet {
        let np = self.int(1, 4) as usize;
        let nr = self.int(0, 3) as usize;
        let points = (0..np).map(|_| self.vector(n, -3, 3)).collect();
        let rays = (0..nr).map(|_| self.nonzero_vector(n, 2)).collect();
        GeneratorSet::new(n, points, rays).expect("dimensions agree")
    }

    /// Affine piece with the prescribed value at `x`.
    fn affine_at(&mut self, x: &Vector, value: i64) -> AffinePiece {
        let a = self.nonzero_vector(x.dim(), 3);
        let b = rat(value) - a.dot(x);
        AffinePiece::new(a, b)
    }

    /// Affine members with values in `{0, −1, −2, −3}` at `x`; boundary
    /// instances have at least one active member, interior ones none.
    pub fn affine_instance(&mut self, id: &str, n: usize, members: usize, improper: bool) -> SupInstance {
        let x = self.vector(n, -3, 3);
        let boundary = self.chance(0.75);
        let mut ms = Vec::with_capacity(members + 1);
        for t in 0..members {
            let value = if boundary && (t == 0 || self.chance(0.4)) {
                0
            } else {
                -self.int(1, 3)
            };
            let p = self.affine_at(&x, value);
            ms.push(Member::new(format!("a{t}"), PolyhedralFunction::affine(p.slope, p.intercept)));
        }
        if improper {
            let rows = self.int(1, 2) as usize;
            let dom = self.polyhedron_at(&x, rows);
            ms.push(Member::new("dom", ImproperFunction::new(dom).expect("contains x")));
        }
        ms.shuffle(&mut self.rng);
        SupInstance {
            id: id.to_string(),
            family: SupFamily::new(ms).expect("valid family"),
            x,
        }
    }

    /// Max-affine members with 1 to 3 pieces; ties at `x` give kinks.
    fn max_affine_at(&mut self, x: &Vector, value: i64, domain: PolyhedronH) -> PolyhedralFunction {
        let k = self.int(1, 3);
        let pieces = (0..k)
            .map(|i| {
                let below = if i == 0 || self.chance(0.5) { 0 } else { self.int(1, 2) };
                self.affine_at(x, value - below)
            })
            .collect();
        PolyhedralFunction::new(pieces, domain).expect("valid pieces")
    }

    pub fn max_affine_instance(&mut self, id: &str, n: usize, members: usize) -> SupInstance {
        let x = self.vector(n, -2, 2);
        let mut ms = Vec::with_capacity(members);
        for t in 0..members {
            let value = if t == 0 || self.chance(0.4) { 0 } else { -self.int(1, 2) };
            let f = self.max_affine_at(&x, value, PolyhedronH::universe(n));
            ms.push(Member::new(format!("m{t}"), f));
        }
        SupInstance {
            id: id.to_string(),
            family: SupFamily::new(ms).expect("valid family"),
            x,
        }
    }

    /// Proper members on restricted domains plus at least one improper member,
    /// all domains containing `x`.
    pub fn restricted_domain_instance(&mut self, id: &str, n: usize, members: usize) -> SupInstance {
        let x = self.vector(n, -2, 2);
        let mut ms = Vec::with_capacity(members + 2);
        for t in 0..members {
            let rows = self.int(0, 2) as usize;
            let dom = self.polyhedron_at(&x, rows);
            let value = self.int(-2, 2);
            let f = self.max_affine_at(&x, value, dom);
            ms.push(Member::new(format!("p{t}"), f));
        }
        let improper = self.int(1, 2);
        for t in 0..improper {
            let rows = self.int(1, 2) as usize;
            let dom = self.polyhedron_at(&x, rows);
            ms.push(Member::new(format!("i{t}"), ImproperFunction::new(dom).expect("contains x")));
        }
        SupInstance {
            id: id.to_string(),
            family: SupFamily::new(ms).expect("valid family"),
            x,
        }
    }

    /// A one-dimensional quasi-convex function and admissible values `τ` with `q(τ) ≤ 0`.
    fn qc1d(&mut self) -> (QuasiConvex1D, Vec<Rational>) {
        let z = Rational::zero;
        let f = |r: Rational| ExtValue::Finite(r);
        let aff = Piece1D::affine;
        let k = rat(self.int(1, 3));
        match self.int(0, 6) {
            0 => (QuasiConvex1D::affine(k, z()), vec![z(), rat(-1), rat(-2)]),
            1 => (QuasiConvex1D::affine(-k, z()), vec![z(), rat(1), rat(2)]),
            // t on t < 0, 1 on t > 0, 1 at 0: [q ≤ 0] = (−∞, 0).
            2 => (
                QuasiConvex1D::new(vec![z()], vec![aff(rat(1), z()), aff(z(), rat(1))], vec![f(rat(1))]).unwrap(),
                vec![rat(-1), ratio(-1, 2)],
            ),
            // |t| − c.
            3 => {
                let c = rat(self.int(1, 2));
                let q = QuasiConvex1D::new(
                    vec![z()],
                    vec![aff(rat(-1), -c.clone()), aff(rat(1), -c.clone())],
                    vec![f(-c.clone())],
                )
                .unwrap();
                (q, vec![-c.clone(), c, z()])
            }
            // +∞ left of 0, t − 1 on t > 0, −1 at 0: [q ≤ 0] = [0, 1].
            4 => (
                QuasiConvex1D::new(vec![z()], vec![Piece1D::PosInf, aff(rat(1), rat(-1))], vec![f(rat(-1))]).unwrap(),
                vec![z(), rat(1), ratio(1, 2)],
            ),
            // Same with +∞ at 0: [q ≤ 0] = (0, 1].
            5 => (
                QuasiConvex1D::new(vec![z()], vec![Piece1D::PosInf, aff(rat(1), rat(-1))], vec![ExtValue::PosInf])
                    .unwrap(),
                vec![rat(1), ratio(1, 2)],
            ),
            // Step: −1 left, 2 right, 0 at 0.
            _ => (
                QuasiConvex1D::new(vec![z()], vec![aff(z(), rat(-1)), aff(z(), rat(2))], vec![f(z())]).unwrap(),
                vec![z(), rat(-1)],
            ),
        }
    }

    fn smooth(&mut self, a: Vector, x: &Vector) -> SmoothQCMember {
        // (coefficients, root, direction)
        let table: [(&[i64], i64, Monotonicity); 7] = [
            (&[0, 1], 0, Monotonicity::Increasing),
            (&[0, 0, 0, 1], 0, Monotonicity::Increasing),
            (&[-1, 0, 0, 1], 1, Monotonicity::Increasing),
            (&[0, 1, 0, 1], 0, Monotonicity::Increasing),
            (&[-2, 1, 0, 1], 1, Monotonicity::Increasing),
            (&[0, -1], 0, Monotonicity::Decreasing),
            (&[0, 0, 0, -1], 0, Monotonicity::Decreasing),
        ];
        let (cs, root, dir) = *self.pick(&table);
        let offset = if self.chance(0.5) { 0 } else { 1 };
        let tau = match dir {
            Monotonicity::Increasing => rat(root - offset),
            Monotonicity::Decreasing => rat(root + offset),
        };
        let b = tau - a.dot(x);
        SmoothQCMember::new(a, b, Polynomial::from_ints(cs), rat(root), dir).expect("table entries are valid")
    }

    /// Composite, smooth and polyhedral members, each with `f_t(x) ≤ 0`.
    pub fn qc_instance(&mut self, id: &str, n: usize, members: usize) -> QcInstance {
        let x = self.vector(n, -2, 2);
        let mut ms = Vec::with_capacity(members);
        for t in 0..members {
            let a = self.nonzero_vector(n, 2);
            let e = match self.int(0, 3) {
                0 | 1 => {
                    let (q, taus) = self.qc1d();
                    let tau = self.pick(&taus).clone();
                    let b = tau - a.dot(&x);
                    QcEvaluator::composite(q, a, b).expect("nonzero direction")
                }
                2 => QcEvaluator::Smooth(self.smooth(a, &x)),
                _ => {
                    let value = -self.int(0, 1);
                    QcEvaluator::Polyhedral(self.max_affine_at(&x, value, PolyhedronH::universe(n)))
                }
            };
            ms.push((format!("q{t}"), e));
        }
        QcInstance {
            id: id.to_string(),
            family: SublevelOracleQC::from_evaluators(ms).expect("valid family"),
            x,
        }
    }

    /// `min f₀` over affine constraints; about half the candidates are built
    /// to satisfy the optimality condition with random multipliers.
    pub fn program_instance(&mut self, n: usize, members: usize) -> ProgramInstance {
        let base = self.affine_instance("p", n, members, false);
        let x = base.x.clone();
        let active: Vec<Vector> = base
            .family
            .members()
            .iter()
            .filter_map(|m| m.f.as_proper())
            .filter_map(|p| p.as_global_affine())
            .filter(|a| a.eval(&x).is_zero())
            .map(|a| a.slope.clone())
            .collect();
        let g0 = if self.chance(0.5) {
            let mut s = Vector::zeros(n);
            for a in &active {
                s = &s - &a.scale(&rat(self.int(0, 2)));
            }
            s
        } else {
            self.vector(n, -2, 2)
        };
        let fx = rat(self.int(-2, 2));
        let mut pieces = vec![AffinePiece::new(g0.clone(), &fx - g0.dot(&x))];
        for _ in 0..self.int(0, 2) {
            let below = self.int(0, 2);
            let mut p = self.affine_at(&x, 0);
            p.intercept += &fx - rat(below);
            pieces.push(p);
        }
        ProgramInstance {
            objective: PolyhedralFunction::max_affine(pieces).expect("valid pieces"),
            constraints: base.family,
            candidate: x.clone(),
            qualification: Qualification::ObjectiveContinuousAt(x),
        }
    }
}

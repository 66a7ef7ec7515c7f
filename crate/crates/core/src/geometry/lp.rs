//! Exact two-phase simplex over the rationals.
//!
//! Dense tableau, Bland's rule for both entering and leaving variables, so the
//! pivot sequence is a deterministic function of the input and never cycles.

use num_traits::{One, Signed, Zero};

use crate::num::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
struct Row {
    coeffs: Vec<Rational>,
    rel: Relation,
    rhs: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    /// The objective is unbounded; `point + λ·direction` is feasible for all
    /// λ ≥ 0 and improves the objective without bound.
    Unbounded {
        point: Vec<Rational>,
        direction: Vec<Rational>,
    },
    Optimal {
        value: Rational,
        point: Vec<Rational>,
    },
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }

    pub fn point(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Infeasible => None,
            LpOutcome::Unbounded { point, .. } | LpOutcome::Optimal { point, .. } => Some(point),
        }
    }
}

/// A linear program `max ⟨c, x⟩` (or `min`) subject to linear rows, with each
/// variable either nonnegative or free.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    num_vars: usize,
    free: Vec<bool>,
    objective: Vec<Rational>,
    minimize: bool,
    rows: Vec<Row>,
}

impl LinearProgram {
    /// All variables start nonnegative with a zero objective.
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            free: vec![false; num_vars],
            objective: vec![Rational::zero(); num_vars],
            minimize: false,
            rows: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn set_free(&mut self, j: usize) -> &mut Self {
        self.free[j] = true;
        self
    }

    pub fn set_all_free(&mut self) -> &mut Self {
        self.free.iter_mut().for_each(|f| *f = true);
        self
    }

    pub fn maximize(&mut self, c: Vec<Rational>) -> &mut Self {
        assert_eq!(c.len(), self.num_vars);
        self.objective = c;
        self.minimize = false;
        self
    }

    pub fn minimize(&mut self, c: Vec<Rational>) -> &mut Self {
        assert_eq!(c.len(), self.num_vars);
        self.objective = c;
        self.minimize = true;
        self
    }

    pub fn add_row(&mut self, coeffs: Vec<Rational>, rel: Relation, rhs: Rational) -> &mut Self {
        assert_eq!(coeffs.len(), self.num_vars);
        self.rows.push(Row { coeffs, rel, rhs });
        self
    }

    pub fn solve(&self) -> LpOutcome {
        let sign = if self.minimize {
            -Rational::one()
        } else {
            Rational::one()
        };
        let c: Vec<Rational> = self.objective.iter().map(|v| v * &sign).collect();
        match Tableau::build(self).run(&c) {
            Solved::Infeasible => LpOutcome::Infeasible,
            Solved::Unbounded { point, direction } => LpOutcome::Unbounded { point, direction },
            Solved::Optimal { value, point } => LpOutcome::Optimal {
                value: value * sign,
                point,
            },
        }
    }
}

enum Solved {
    Infeasible,
    Unbounded {
        point: Vec<Rational>,
        direction: Vec<Rational>,
    },
    Optimal {
        value: Rational,
        point: Vec<Rational>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum ColKind {
    Structural,
    Slack,
    Artificial,
}

struct Tableau {
    /// Column index of the positive (and, for free variables, negative) part
    /// of each original variable.
    var_cols: Vec<(usize, Option<usize>)>,
    kinds: Vec<ColKind>,
    /// m rows of `ncols + 1` entries, the last one being the right-hand side.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let mut kinds = Vec::new();
        let mut var_cols = Vec::with_capacity(lp.num_vars);
        for j in 0..lp.num_vars {
            let pos = kinds.len();
            kinds.push(ColKind::Structural);
            let neg = if lp.free[j] {
                kinds.push(ColKind::Structural);
                Some(pos + 1)
            } else {
                None
            };
            var_cols.push((pos, neg));
        }

        // Flip rows so every right-hand side is nonnegative.
        let normalized: Vec<(Vec<Rational>, Relation, Rational)> = lp
            .rows
            .iter()
            .map(|r| {
                if r.rhs.is_negative() {
                    let rel = match r.rel {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (r.coeffs.iter().map(|v| -v).collect(), rel, -&r.rhs)
                } else {
                    (r.coeffs.clone(), r.rel, r.rhs.clone())
                }
            })
            .collect();

        let mut aux: Vec<(Option<usize>, Option<usize>)> = Vec::new();
        for (_, rel, _) in &normalized {
            let (slack, art) = match rel {
                Relation::Le => {
                    kinds.push(ColKind::Slack);
                    (Some(kinds.len() - 1), None)
                }
                Relation::Ge => {
                    kinds.push(ColKind::Slack);
                    let s = kinds.len() - 1;
                    kinds.push(ColKind::Artificial);
                    (Some(s), Some(kinds.len() - 1))
                }
                Relation::Eq => {
                    kinds.push(ColKind::Artificial);
                    (None, Some(kinds.len() - 1))
                }
            };
            aux.push((slack, art));
        }

        let ncols = kinds.len();
        let mut rows = Vec::with_capacity(normalized.len());
        let mut basis = Vec::with_capacity(normalized.len());
        for ((coeffs, rel, rhs), (slack, art)) in normalized.into_iter().zip(aux) {
            let mut row = vec![Rational::zero(); ncols + 1];
            for (j, v) in coeffs.into_iter().enumerate() {
                let (pos, neg) = var_cols[j];
                if let Some(neg) = neg {
                    row[neg] = -&v;
                }
                row[pos] = v;
            }
            match rel {
                Relation::Le => {
                    let s = slack.unwrap();
                    row[s] = Rational::one();
                    basis.push(s);
                }
                Relation::Ge => {
                    row[slack.unwrap()] = -Rational::one();
                    let a = art.unwrap();
                    row[a] = Rational::one();
                    basis.push(a);
                }
                Relation::Eq => {
                    let a = art.unwrap();
                    row[a] = Rational::one();
                    basis.push(a);
                }
            }
            row[ncols] = rhs;
            rows.push(row);
        }
        Tableau {
            var_cols,
            kinds,
            rows,
            basis,
        }
    }

    fn ncols(&self) -> usize {
        self.kinds.len()
    }

    fn reduced_costs(&self, cost: &[Rational]) -> Vec<Rational> {
        let mut red = cost.to_vec();
        red.push(Rational::zero());
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (r, v) in red.iter_mut().zip(row) {
                if !v.is_zero() {
                    *r -= cb * v;
                }
            }
        }
        red
    }

    fn pivot(&mut self, r: usize, e: usize, red: &mut [Rational]) {
        let p = self.rows[r][e].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &p;
                }
            }
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[e].is_zero() {
                continue;
            }
            let factor = row[e].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
        }
        if !red[e].is_zero() {
            let factor = red[e].clone();
            for (v, pv) in red.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
        }
        self.basis[r] = e;
    }

    /// Bland's-rule simplex on the current basis. Returns the unbounded
    /// entering column, if any.
    fn simplex(&mut self, red: &mut [Rational], allowed: &dyn Fn(usize) -> bool) -> Option<usize> {
        let n = self.ncols();
        loop {
            let entering = (0..n).find(|&j| allowed(j) && red[j].is_positive());
            let Some(e) = entering else {
                return None;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[e].is_positive() {
                    continue;
                }
                let ratio = &row[n] / &row[e];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                None => return Some(e),
                Some((r, _)) => self.pivot(r, e, red),
            }
        }
    }

    fn run(mut self, c: &[Rational]) -> Solved {
        let n = self.ncols();

        // Phase I: maximize −Σ artificials.
        if self.kinds.contains(&ColKind::Artificial) {
            let cost1: Vec<Rational> = self
                .kinds
                .iter()
                .map(|k| {
                    if *k == ColKind::Artificial {
                        -Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            let mut red = self.reduced_costs(&cost1);
            let unbounded = self.simplex(&mut red, &|_| true);
            debug_assert!(unbounded.is_none(), "phase I is bounded");
            let infeasible = self
                .rows
                .iter()
                .zip(&self.basis)
                .any(|(row, &b)| self.kinds[b] == ColKind::Artificial && row[n].is_positive());
            if infeasible {
                return Solved::Infeasible;
            }
            // Drive zero-level artificials out of the basis; drop redundant rows.
            let mut i = 0;
            while i < self.rows.len() {
                if self.kinds[self.basis[i]] == ColKind::Artificial {
                    let col = (0..n)
                        .find(|&j| self.kinds[j] != ColKind::Artificial && !self.rows[i][j].is_zero());
                    match col {
                        Some(j) => {
                            self.pivot(i, j, &mut red);
                            i += 1;
                        }
                        None => {
                            self.rows.remove(i);
                            self.basis.remove(i);
                        }
                    }
                } else {
                    i += 1;
                }
            }
        }

        // Phase II.
        let mut cost2 = vec![Rational::zero(); n];
        for (j, cj) in c.iter().enumerate() {
            let (pos, neg) = self.var_cols[j];
            cost2[pos] = cj.clone();
            if let Some(neg) = neg {
                cost2[neg] = -cj;
            }
        }
        let mut red = self.reduced_costs(&cost2);
        let kinds = self.kinds.clone();
        let unbounded = self.simplex(&mut red, &|j| kinds[j] != ColKind::Artificial);

        let mut values = vec![Rational::zero(); n];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            values[b] = row[n].clone();
        }
        let point = self.extract(&values);
        match unbounded {
            Some(e) => {
                let mut dir = vec![Rational::zero(); n];
                dir[e] = Rational::one();
                for (row, &b) in self.rows.iter().zip(&self.basis) {
                    dir[b] = -&row[e];
                }
                Solved::Unbounded {
                    point,
                    direction: self.extract(&dir),
                }
            }
            None => {
                let value = c
                    .iter()
                    .zip(&point)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b);
                Solved::Optimal { value, point }
            }
        }
    }

    fn extract(&self, values: &[Rational]) -> Vec<Rational> {
        self.var_cols
            .iter()
            .map(|&(pos, neg)| match neg {
                Some(neg) => &values[pos] - &values[neg],
                None => values[pos].clone(),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{rat, ratio};

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn small_maximization() {
        // max 3x + 2y  s.t. x + y ≤ 4, x + 3y ≤ 6, x ≤ 3
        let mut lp = LinearProgram::new(2);
        lp.maximize(v(&[3, 2]))
            .add_row(v(&[1, 1]), Relation::Le, rat(4))
            .add_row(v(&[1, 3]), Relation::Le, rat(6))
            .add_row(v(&[1, 0]), Relation::Le, rat(3));
        match lp.solve() {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, rat(11));
                assert_eq!(point, v(&[3, 1]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn free_variables_and_equalities() {
        // min x + y s.t. x - y = -3, x ≥ -5 (free vars)
        let mut lp = LinearProgram::new(2);
        lp.set_all_free()
            .minimize(v(&[1, 1]))
            .add_row(v(&[1, -1]), Relation::Eq, rat(-3))
            .add_row(v(&[1, 0]), Relation::Ge, rat(-5))
            .add_row(v(&[0, 1]), Relation::Ge, rat(-5));
        match lp.solve() {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, rat(-7));
                assert_eq!(point, v(&[-5, -2]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1);
        lp.set_free(0)
            .add_row(v(&[1]), Relation::Ge, rat(1))
            .add_row(v(&[1]), Relation::Le, rat(0));
        assert_eq!(lp.solve(), LpOutcome::Infeasible);

        let mut lp = LinearProgram::new(2);
        lp.set_all_free()
            .maximize(v(&[1, 1]))
            .add_row(v(&[1, -1]), Relation::Le, rat(1));
        match lp.solve() {
            LpOutcome::Unbounded { point, direction } => {
                let c = v(&[1, 1]);
                let gain: Rational = c.iter().zip(&direction).map(|(a, b)| a * b).sum();
                assert!(gain > rat(0));
                let lhs = &point[0] - &point[1];
                assert!(lhs <= rat(1));
                assert!(&direction[0] - &direction[1] <= rat(0));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(2);
        lp.maximize(v(&[1, 0]))
            .add_row(v(&[1, 1]), Relation::Eq, rat(1))
            .add_row(v(&[2, 2]), Relation::Eq, rat(2));
        match lp.solve() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat(1)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degenerate_rational_data() {
        // max y s.t. y ≤ x/2, y ≤ (1 - x)/3, x, y ≥ 0  → x = 2/5, y = 1/5
        let mut lp = LinearProgram::new(2);
        lp.maximize(v(&[0, 1]))
            .add_row(vec![ratio(-1, 2), rat(1)], Relation::Le, rat(0))
            .add_row(vec![ratio(1, 3), rat(1)], Relation::Le, ratio(1, 3));
        match lp.solve() {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, ratio(1, 5));
                assert_eq!(point, vec![ratio(2, 5), ratio(1, 5)]);
            }
            other => panic!("{other:?}"),
        }
    }
}

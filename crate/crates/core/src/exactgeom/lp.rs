//! Exact two-phase simplex over the rationals with Bland's rule.
//!
//! Small dense problems only: Newton-polyhedron thresholds, boundedness
//! probes and valuation minimizations all have a handful of variables.

use num_traits::{Signed, Zero};

use crate::rational::Q;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Q>,
    pub rel: Relation,
    pub rhs: Q,
}

impl Constraint {
    pub fn new(coeffs: Vec<Q>, rel: Relation, rhs: Q) -> Self {
        Self { coeffs, rel, rhs }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Q, point: Vec<Q> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Q> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

/// `maximize objective · x` subject to the constraints. Variables flagged in
/// `free` are unrestricted in sign, the rest are non-negative.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<Q>,
    pub constraints: Vec<Constraint>,
    pub free: Vec<bool>,
}

impl LinearProgram {
    pub fn new(objective: Vec<Q>) -> Self {
        let n = objective.len();
        Self {
            objective,
            constraints: Vec::new(),
            free: vec![false; n],
        }
    }

    pub fn all_free(mut self) -> Self {
        self.free.iter_mut().for_each(|f| *f = true);
        self
    }

    pub fn constraint(mut self, coeffs: Vec<Q>, rel: Relation, rhs: Q) -> Self {
        debug_assert_eq!(coeffs.len(), self.objective.len());
        self.constraints.push(Constraint::new(coeffs, rel, rhs));
        self
    }

    pub fn push(&mut self, coeffs: Vec<Q>, rel: Relation, rhs: Q) {
        debug_assert_eq!(coeffs.len(), self.objective.len());
        self.constraints.push(Constraint::new(coeffs, rel, rhs));
    }

    pub fn minimize(&self) -> LpOutcome {
        let neg = LinearProgram {
            objective: self.objective.iter().map(|c| -c.clone()).collect(),
            constraints: self.constraints.clone(),
            free: self.free.clone(),
        };
        match neg.maximize() {
            LpOutcome::Optimal { value, point } => LpOutcome::Optimal {
                value: -value,
                point,
            },
            other => other,
        }
    }

    pub fn maximize(&self) -> LpOutcome {
        let n = self.objective.len();
        // Column layout: one column per non-negative variable, two per free one.
        let mut split: Vec<(usize, Option<usize>)> = Vec::with_capacity(n);
        let mut ncols = 0;
        for &f in &self.free {
            if f {
                split.push((ncols, Some(ncols + 1)));
                ncols += 2;
            } else {
                split.push((ncols, None));
                ncols += 1;
            }
        }
        let structural = ncols;
        let expand = |coeffs: &[Q]| -> Vec<Q> {
            let mut row = vec![Q::zero(); structural];
            for (i, c) in coeffs.iter().enumerate() {
                let (p, m) = split[i];
                row[p] = c.clone();
                if let Some(m) = m {
                    row[m] = -c.clone();
                }
            }
            row
        };

        let mut rows: Vec<(Vec<Q>, Relation, Q)> = self
            .constraints
            .iter()
            .map(|c| {
                let mut coeffs = expand(&c.coeffs);
                let mut rel = c.rel;
                let mut rhs = c.rhs.clone();
                if rhs.is_negative() {
                    coeffs.iter_mut().for_each(|x| *x = -x.clone());
                    rhs = -rhs;
                    rel = match rel {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                }
                (coeffs, rel, rhs)
            })
            .collect();

        let m = rows.len();
        let n_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let n_art = rows.iter().filter(|r| r.1 != Relation::Le).count();
        let total = structural + n_slack + n_art;
        let art_start = structural + n_slack;

        let mut tab: Vec<Vec<Q>> = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let (mut s, mut a) = (structural, art_start);
        for (coeffs, rel, rhs) in rows.drain(..) {
            let mut row = coeffs;
            row.resize(total + 1, Q::zero());
            row[total] = rhs;
            match rel {
                Relation::Le => {
                    row[s] = Q::from_integer(1.into());
                    basis.push(s);
                    s += 1;
                }
                Relation::Ge => {
                    row[s] = Q::from_integer((-1).into());
                    row[a] = Q::from_integer(1.into());
                    basis.push(a);
                    s += 1;
                    a += 1;
                }
                Relation::Eq => {
                    row[a] = Q::from_integer(1.into());
                    basis.push(a);
                    a += 1;
                }
            }
            tab.push(row);
        }

        let mut t = Tableau {
            tab,
            basis,
            total,
            enterable: total,
        };

        if n_art > 0 {
            let mut cost = vec![Q::zero(); total];
            for c in cost.iter_mut().skip(art_start) {
                *c = Q::from_integer((-1).into());
            }
            if t.run(&cost).is_err() {
                unreachable!("phase one is bounded");
            }
            if !t.objective(&cost).is_zero() {
                return LpOutcome::Infeasible;
            }
            t.drive_out_artificials(art_start);
            t.enterable = art_start;
        }

        let mut cost = vec![Q::zero(); total];
        for (i, c) in self.objective.iter().enumerate() {
            let (p, mm) = split[i];
            cost[p] = c.clone();
            if let Some(mm) = mm {
                cost[mm] = -c.clone();
            }
        }
        if t.run(&cost).is_err() {
            return LpOutcome::Unbounded;
        }
        let value = t.objective(&cost);
        let values = t.values();
        let point = split
            .iter()
            .map(|&(p, mm)| match mm {
                Some(mm) => &values[p] - &values[mm],
                None => values[p].clone(),
            })
            .collect();
        LpOutcome::Optimal { value, point }
    }
}

struct Tableau {
    tab: Vec<Vec<Q>>,
    basis: Vec<usize>,
    total: usize,
    /// Columns at or beyond this index may never enter the basis.
    enterable: usize,
}

struct Unbounded;

impl Tableau {
    fn values(&self) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.total];
        for (i, &b) in self.basis.iter().enumerate() {
            v[b] = self.tab[i][self.total].clone();
        }
        v
    }

    fn objective(&self, cost: &[Q]) -> Q {
        self.basis
            .iter()
            .enumerate()
            .map(|(i, &b)| &cost[b] * &self.tab[i][self.total])
            .sum()
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = Q::from_integer(1.into()) / &self.tab[row][col];
        for x in self.tab[row].iter_mut() {
            *x = &*x * &inv;
        }
        let prow = self.tab[row].clone();
        for (i, r) in self.tab.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for (x, p) in r.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[row] = col;
    }

    fn run(&mut self, cost: &[Q]) -> Result<(), Unbounded> {
        loop {
            let entering = (0..self.enterable).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let reduced: Q = &cost[j]
                    - self
                        .basis
                        .iter()
                        .enumerate()
                        .map(|(i, &b)| &cost[b] * &self.tab[i][j])
                        .sum::<Q>();
                reduced.is_positive()
            });
            let Some(col) = entering else {
                return Ok(());
            };
            let mut best: Option<(usize, Q)> = None;
            for (i, row) in self.tab.iter().enumerate() {
                if !row[col].is_positive() {
                    continue;
                }
                let ratio = &row[self.total] / &row[col];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((row, _)) = best else {
                return Err(Unbounded);
            };
            self.pivot(row, col);
        }
    }

    fn drive_out_artificials(&mut self, art_start: usize) {
        let mut i = 0;
        while i < self.tab.len() {
            if self.basis[i] >= art_start {
                if let Some(col) = (0..art_start).find(|&j| !self.tab[i][j].is_zero()) {
                    self.pivot(i, col);
                } else {
                    self.tab.remove(i);
                    self.basis.remove(i);
                    continue;
                }
            }
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};

    #[test]
    fn textbook_max() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18  ->  36 at (2, 6)
        let lp = LinearProgram::new(vec![q(3), q(5)])
            .constraint(vec![q(1), q(0)], Relation::Le, q(4))
            .constraint(vec![q(0), q(2)], Relation::Le, q(12))
            .constraint(vec![q(3), q(2)], Relation::Le, q(18));
        assert_eq!(
            lp.maximize(),
            LpOutcome::Optimal {
                value: q(36),
                point: vec![q(2), q(6)]
            }
        );
    }

    #[test]
    fn infeasible_and_unbounded() {
        let lp = LinearProgram::new(vec![q(1)])
            .constraint(vec![q(1)], Relation::Ge, q(2))
            .constraint(vec![q(1)], Relation::Le, q(1));
        assert_eq!(lp.maximize(), LpOutcome::Infeasible);
        let lp = LinearProgram::new(vec![q(1)]).constraint(vec![q(1)], Relation::Ge, q(2));
        assert_eq!(lp.maximize(), LpOutcome::Unbounded);
    }

    #[test]
    fn free_variables_and_equalities() {
        // min x + y  s.t.  x - y = -3, x >= -5 (x, y free)
        let lp = LinearProgram::new(vec![q(1), q(1)])
            .all_free()
            .constraint(vec![q(1), q(-1)], Relation::Eq, q(-3))
            .constraint(vec![q(1), q(0)], Relation::Ge, q(-5))
            .constraint(vec![q(0), q(1)], Relation::Ge, q(-5));
        assert_eq!(lp.minimize().value(), Some(&q(-7)));
        // min t s.t. t >= 1/2 + 1/3 style fractions
        let lp = LinearProgram::new(vec![q(1)]).constraint(vec![q(6)], Relation::Ge, q(5));
        assert_eq!(lp.minimize().value(), Some(&frac(5, 6)));
    }
}

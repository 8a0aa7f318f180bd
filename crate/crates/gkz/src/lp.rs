//! Exact linear programming over the rationals.
//!
//! Dense two-phase simplex with Bland's anti-cycling rule. Problems in this
//! crate have at most a few dozen variables and constraints, so the dense
//! tableau is the right trade-off; every decision (feasibility, boundedness,
//! sign of the optimum) is made in exact arithmetic.

use num_traits::{Signed, Zero};

use crate::rational::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
struct Constraint {
    coeffs: Vec<Q>,
    rel: Relation,
    rhs: Q,
}

/// A linear program over free (unrestricted) rational variables.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    num_vars: usize,
    constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpResult {
    Optimal { value: Q, point: Vec<Q> },
    Infeasible,
    Unbounded,
}

impl LpResult {
    pub fn value(&self) -> Option<&Q> {
        match self {
            LpResult::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        Self { num_vars, constraints: Vec::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn add(&mut self, coeffs: Vec<Q>, rel: Relation, rhs: Q) -> &mut Self {
        assert_eq!(coeffs.len(), self.num_vars, "constraint width");
        self.constraints.push(Constraint { coeffs, rel, rhs });
        self
    }

    /// Adds `lo <= x_var <= hi`.
    pub fn bound_var(&mut self, var: usize, lo: Q, hi: Q) -> &mut Self {
        let mut e = vec![Q::zero(); self.num_vars];
        e[var] = Q::from_integer(1.into());
        self.add(e.clone(), Relation::Ge, lo);
        self.add(e, Relation::Le, hi)
    }

    pub fn minimize(&self, objective: &[Q]) -> LpResult {
        assert_eq!(objective.len(), self.num_vars, "objective width");
        match self.prepare() {
            Some(p) => p.minimize(objective),
            None => LpResult::Infeasible,
        }
    }

    pub fn maximize(&self, objective: &[Q]) -> LpResult {
        let neg: Vec<Q> = objective.iter().map(|c| -c).collect();
        match self.minimize(&neg) {
            LpResult::Optimal { value, point } => LpResult::Optimal { value: -value, point },
            other => other,
        }
    }

    pub fn feasible_point(&self) -> Option<Vec<Q>> {
        match self.minimize(&vec![Q::zero(); self.num_vars]) {
            LpResult::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }

    /// Runs phase 1 once; `None` when infeasible. The result answers any
    /// number of objectives over the same constraints.
    pub fn prepare(&self) -> Option<Prepared> {
        Tableau::build(self).phase1().map(|tableau| Prepared { tableau })
    }
}

/// A feasible basis of a [`LinearProgram`], reusable across objectives.
#[derive(Clone, Debug)]
pub struct Prepared {
    tableau: Tableau,
}

impl Prepared {
    pub fn minimize(&self, objective: &[Q]) -> LpResult {
        assert_eq!(objective.len(), self.tableau.num_vars, "objective width");
        self.tableau.clone().phase2(objective)
    }

    pub fn maximize(&self, objective: &[Q]) -> LpResult {
        let neg: Vec<Q> = objective.iter().map(|c| -c).collect();
        match self.minimize(&neg) {
            LpResult::Optimal { value, point } => LpResult::Optimal { value: -value, point },
            other => other,
        }
    }
}

#[derive(Clone, Debug)]
struct Tableau {
    rows: Vec<Vec<Q>>,
    basis: Vec<usize>,
    num_vars: usize,
    num_cols: usize,
    artificial_start: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let n = lp.num_vars;
        let m = lp.constraints.len();
        let flipped = |c: &Constraint| {
            let flip = c.rhs.is_negative();
            let rel = match (c.rel, flip) {
                (Relation::Le, true) => Relation::Ge,
                (Relation::Ge, true) => Relation::Le,
                (r, _) => r,
            };
            (flip, rel)
        };
        // Columns: x+ (n), x- (n), one slack/surplus per inequality, then one
        // artificial per row whose slack cannot start in the basis.
        let num_slack = lp.constraints.iter().filter(|c| c.rel != Relation::Eq).count();
        let num_art = lp.constraints.iter().filter(|c| flipped(c).1 != Relation::Le).count();
        let artificial_start = 2 * n + num_slack;
        let num_cols = artificial_start + num_art;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut slack = 2 * n;
        let mut art = artificial_start;
        for c in &lp.constraints {
            let (flip, rel) = flipped(c);
            let mut row = vec![Q::zero(); num_cols + 1];
            for (j, a) in c.coeffs.iter().enumerate() {
                let a = if flip { -a } else { a.clone() };
                row[n + j] = -a.clone();
                row[j] = a;
            }
            row[num_cols] = if flip { -c.rhs.clone() } else { c.rhs.clone() };
            match rel {
                Relation::Le => {
                    row[slack] = Q::from_integer(1.into());
                    basis.push(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = Q::from_integer((-1).into());
                    slack += 1;
                }
                Relation::Eq => {}
            }
            if rel != Relation::Le {
                row[art] = Q::from_integer(1.into());
                basis.push(art);
                art += 1;
            }
            rows.push(row);
        }
        Self { rows, basis, num_vars: n, num_cols, artificial_start }
    }

    fn objective_row(&self, cost: &[Q]) -> Vec<Q> {
        let mut z: Vec<Q> = cost.to_vec();
        z.push(Q::zero());
        for (i, &b) in self.basis.iter().enumerate() {
            if cost[b].is_zero() {
                continue;
            }
            let cb = cost[b].clone();
            for (zj, rij) in z.iter_mut().zip(&self.rows[i]) {
                if !rij.is_zero() {
                    *zj -= &cb * rij;
                }
            }
        }
        z
    }

    fn pivot(&mut self, z: &mut [Q], r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x /= &p;
            }
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        if !z[c].is_zero() {
            let f = z[c].clone();
            for (x, y) in z.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Runs simplex iterations on objective row `z`; returns false when unbounded.
    fn run(&mut self, z: &mut [Q], allowed: &dyn Fn(usize) -> bool) -> bool {
        let rhs = self.num_cols;
        loop {
            let entering = (0..self.num_cols).find(|&j| allowed(j) && z[j].is_negative());
            let Some(c) = entering else { return true };
            let mut best: Option<(usize, Q)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[c];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else { return false };
            self.pivot(z, r, c);
        }
    }

    /// Minimizes the sum of artificials, then removes their columns.
    fn phase1(mut self) -> Option<Self> {
        let rhs = self.num_cols;
        if self.artificial_start < self.num_cols {
            let mut phase1 = vec![Q::zero(); self.num_cols];
            for c in phase1.iter_mut().skip(self.artificial_start) {
                *c = Q::from_integer(1.into());
            }
            let mut z = self.objective_row(&phase1);
            self.run(&mut z, &|_| true);
            if !z[rhs].is_zero() {
                return None;
            }
            // Drive remaining (zero-valued) artificials out of the basis.
            let mut i = 0;
            while i < self.rows.len() {
                if self.basis[i] >= self.artificial_start {
                    let col = (0..self.artificial_start).find(|&j| !self.rows[i][j].is_zero());
                    match col {
                        Some(c) => {
                            let mut dummy = vec![Q::zero(); self.num_cols + 1];
                            self.pivot(&mut dummy, i, c);
                        }
                        None => {
                            self.rows.remove(i);
                            self.basis.remove(i);
                            continue;
                        }
                    }
                }
                i += 1;
            }
        }
        let keep = self.artificial_start;
        for row in &mut self.rows {
            let b = row[rhs].clone();
            row.truncate(keep);
            row.push(b);
        }
        self.num_cols = keep;
        Some(self)
    }

    fn phase2(mut self, objective: &[Q]) -> LpResult {
        let rhs = self.num_cols;
        let n = self.num_vars;
        let mut cost = vec![Q::zero(); self.num_cols];
        for (j, c) in objective.iter().enumerate() {
            cost[j] = c.clone();
            cost[n + j] = -c;
        }
        let mut z = self.objective_row(&cost);
        if !self.run(&mut z, &|_| true) {
            return LpResult::Unbounded;
        }
        let mut point = vec![Q::zero(); n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < n {
                point[b] += &self.rows[i][rhs];
            } else if b < 2 * n {
                point[b - n] -= &self.rows[i][rhs];
            }
        }
        let value = crate::rational::dot(objective, &point);
        LpResult::Optimal { value, point }
    }
}

use num_traits::{One, Signed, Zero};

use super::{Rational, RationalMatrix};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Max,
    Min,
}

/// Lower bound of a decision variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    NonNegative,
    Free,
}

/// `opt c·x  s.t.  A_i·x (≤|=|≥) b_i`, with each variable either `x ≥ 0` or free.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub rows: Vec<Vec<Rational>>,
    pub relations: Vec<Relation>,
    pub rhs: Vec<Rational>,
    pub bounds: Vec<Bound>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub optimum: Rational,
    pub solution: Vec<Rational>,
}

impl LinearProgram {
    /// A program over `objective.len()` nonnegative variables with no constraints yet.
    pub fn new(sense: Sense, objective: Vec<Rational>) -> Self {
        let n = objective.len();
        LinearProgram {
            sense,
            objective,
            rows: Vec::new(),
            relations: Vec::new(),
            rhs: Vec::new(),
            bounds: vec![Bound::NonNegative; n],
        }
    }

    pub fn constraint(mut self, coeffs: Vec<Rational>, rel: Relation, rhs: Rational) -> Self {
        self.add_constraint(coeffs, rel, rhs);
        self
    }

    pub fn add_constraint(&mut self, coeffs: Vec<Rational>, rel: Relation, rhs: Rational) {
        self.rows.push(coeffs);
        self.relations.push(rel);
        self.rhs.push(rhs);
    }

    pub fn free(mut self, var: usize) -> Self {
        self.bounds[var] = Bound::Free;
        self
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.bounds.len() != n {
            return Err(Error::dims("bounds length differs from variable count"));
        }
        if self.relations.len() != self.rows.len() || self.rhs.len() != self.rows.len() {
            return Err(Error::dims("constraint rows, relations and rhs differ in length"));
        }
        if let Some(i) = self.rows.iter().position(|r| r.len() != n) {
            return Err(Error::dims(format!("constraint {i} has wrong width")));
        }
        Ok(())
    }

    /// Objective value at `x` (no feasibility check).
    pub fn value_at(&self, x: &[Rational]) -> Rational {
        dot(&self.objective, x)
    }

    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        if x.len() != self.num_vars() {
            return false;
        }
        let bounds_ok = x
            .iter()
            .zip(&self.bounds)
            .all(|(v, b)| *b == Bound::Free || !v.is_negative());
        bounds_ok
            && self.rows.iter().zip(&self.relations).zip(&self.rhs).all(|((row, rel), b)| {
                let lhs = dot(row, x);
                match rel {
                    Relation::Le => lhs <= *b,
                    Relation::Eq => lhs == *b,
                    Relation::Ge => lhs >= *b,
                }
            })
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Dense simplex tableau. The last column holds the right-hand side; the
/// cost row holds reduced costs of a minimization and, in its last entry,
/// the negated objective value.
struct Tableau {
    t: RationalMatrix,
    cost: Vec<Rational>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        &self.t[(i, self.width)]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let w = self.width;
        let p = self.t[(row, col)].clone();
        for j in 0..=w {
            let v = &self.t[(row, j)] / &p;
            self.t[(row, j)] = v;
        }
        for i in 0..self.t.rows() {
            if i == row || self.t[(i, col)].is_zero() {
                continue;
            }
            let f = self.t[(i, col)].clone();
            for j in 0..=w {
                if self.t[(row, j)].is_zero() {
                    continue;
                }
                let v = &self.t[(i, j)] - &f * &self.t[(row, j)];
                self.t[(i, j)] = v;
            }
        }
        if !self.cost[col].is_zero() {
            let f = self.cost[col].clone();
            for j in 0..=w {
                let v = &self.cost[j] - &f * &self.t[(row, j)];
                self.cost[j] = v;
            }
        }
        self.basis[row] = col;
    }

    /// Sets the cost row to reduced costs of `c` for the current basis.
    fn price(&mut self, c: &[Rational]) {
        let w = self.width;
        let mut cost: Vec<Rational> = c.to_vec();
        cost.push(Rational::zero());
        for (i, &b) in self.basis.iter().enumerate() {
            if c[b].is_zero() {
                continue;
            }
            for j in 0..=w {
                cost[j] -= &c[b] * &self.t[(i, j)];
            }
        }
        self.cost = cost;
    }

    /// Minimizes with Bland's rule over columns where `allowed` is true.
    fn run(&mut self, allowed: &[bool]) -> Result<()> {
        loop {
            let Some(col) = (0..self.width).find(|&j| allowed[j] && self.cost[j].is_negative()) else {
                return Ok(());
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.t.rows() {
                let a = &self.t[(i, col)];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &best {
                    None => true,
                    Some((r, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*r]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let (row, _) = best.ok_or(Error::Unbounded)?;
            self.pivot(row, col);
        }
    }
}

/// Solves `lp` exactly with the two-phase simplex method under Bland's
/// anti-cycling rule. Returns the optimal value and an optimal basic
/// feasible solution in the original variables.
pub fn lp_optimize(lp: &LinearProgram) -> Result<LpSolution> {
    lp.validate()?;
    let n = lp.num_vars();
    let m = lp.rows.len();

    // Column layout: structural columns (free variables split in two),
    // then slack/surplus, then artificials.
    let mut var_cols: Vec<(usize, Option<usize>)> = Vec::with_capacity(n);
    let mut ncols = 0;
    for b in &lp.bounds {
        match b {
            Bound::NonNegative => {
                var_cols.push((ncols, None));
                ncols += 1;
            }
            Bound::Free => {
                var_cols.push((ncols, Some(ncols + 1)));
                ncols += 2;
            }
        }
    }
    let structural = ncols;

    let mut rows: Vec<(Vec<Rational>, Relation, Rational)> = Vec::with_capacity(m);
    for ((row, rel), b) in lp.rows.iter().zip(&lp.relations).zip(&lp.rhs) {
        let mut coeffs = vec![Rational::zero(); structural];
        for (j, a) in row.iter().enumerate() {
            let (p, q) = var_cols[j];
            coeffs[p] = a.clone();
            if let Some(q) = q {
                coeffs[q] = -a;
            }
        }
        let (coeffs, rel, b) = if b.is_negative() {
            let flipped = match rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
            (coeffs.into_iter().map(|c| -c).collect(), flipped, -b)
        } else {
            (coeffs, *rel, b.clone())
        };
        rows.push((coeffs, rel, b));
    }

    let slacks = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let artificials = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let width = structural + slacks + artificials;
    let mut t = RationalMatrix::zeros(m, width + 1);
    let mut basis = Vec::with_capacity(m);
    let (mut s, mut a) = (structural, structural + slacks);
    for (i, (coeffs, rel, b)) in rows.iter().enumerate() {
        for (j, c) in coeffs.iter().enumerate() {
            t[(i, j)] = c.clone();
        }
        t[(i, width)] = b.clone();
        match rel {
            Relation::Le => {
                t[(i, s)] = Rational::one();
                basis.push(s);
                s += 1;
            }
            Relation::Ge => {
                t[(i, s)] = -Rational::one();
                s += 1;
                t[(i, a)] = Rational::one();
                basis.push(a);
                a += 1;
            }
            Relation::Eq => {
                t[(i, a)] = Rational::one();
                basis.push(a);
                a += 1;
            }
        }
    }

    let mut tab = Tableau { t, cost: Vec::new(), basis, width };
    let first_artificial = structural + slacks;
    let is_artificial = |j: usize| j >= first_artificial;

    if artificials > 0 {
        let phase1: Vec<Rational> = (0..width)
            .map(|j| if is_artificial(j) { Rational::one() } else { Rational::zero() })
            .collect();
        tab.price(&phase1);
        tab.run(&vec![true; width])?;
        if !tab.cost[width].is_zero() {
            return Err(Error::Infeasible);
        }
        // Drive remaining zero-valued artificials out of the basis, dropping
        // rows that turn out to be redundant.
        let mut i = 0;
        while i < tab.basis.len() {
            if is_artificial(tab.basis[i]) {
                match (0..first_artificial).find(|&j| !tab.t[(i, j)].is_zero()) {
                    Some(j) => tab.pivot(i, j),
                    None => {
                        remove_row(&mut tab, i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    let mut phase2 = vec![Rational::zero(); width];
    for (j, c) in lp.objective.iter().enumerate() {
        let c = match lp.sense {
            Sense::Max => -c,
            Sense::Min => c.clone(),
        };
        let (p, q) = var_cols[j];
        if let Some(q) = q {
            phase2[q] = -&c;
        }
        phase2[p] = c;
    }
    tab.price(&phase2);
    let allowed: Vec<bool> = (0..width).map(|j| !is_artificial(j)).collect();
    tab.run(&allowed)?;

    let mut values = vec![Rational::zero(); width];
    for (i, &b) in tab.basis.iter().enumerate() {
        values[b] = tab.rhs(i).clone();
    }
    let solution: Vec<Rational> = var_cols
        .iter()
        .map(|&(p, q)| match q {
            Some(q) => &values[p] - &values[q],
            None => values[p].clone(),
        })
        .collect();
    let optimum = lp.value_at(&solution);
    debug_assert!(lp.is_feasible(&solution));
    Ok(LpSolution { optimum, solution })
}

fn remove_row(tab: &mut Tableau, row: usize) {
    let rows = tab.t.rows();
    let cols = tab.t.cols();
    let data: Vec<Rational> = (0..rows)
        .filter(|&i| i != row)
        .flat_map(|i| tab.t.row(i).to_vec())
        .collect();
    tab.t = RationalMatrix::from_vec(rows - 1, cols, data).expect("consistent size");
    tab.basis.remove(row);
}

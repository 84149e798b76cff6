//! Exact rational linear programming.
//!
//! A small dense two-phase simplex method over `BigRational`. Every
//! feasibility question in the crate (interior-disjointness of simplexes,
//! strict-convexity height systems, apex placement) is answered through this
//! solver, so it favors correctness over speed: Dantzig pivoting with a
//! Bland's-rule fallback once degeneracy is detected, which guarantees
//! termination without any tolerance knobs.

use crate::rat::Rat;
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Eq,
    Ge,
}

/// A linear program in "general" form:
/// maximize `objective . y` subject to `row . y (<=|=|>=) rhs` with each
/// variable either free or restricted to `y_i >= 0`.
#[derive(Debug, Clone)]
pub struct GenLp {
    pub num_vars: usize,
    pub objective: Vec<Rat>,
    pub rows: Vec<(Vec<Rat>, Cmp, Rat)>,
    /// `true` entries are sign-restricted to be nonnegative.
    pub nonneg: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenOutcome {
    Infeasible,
    Unbounded,
    Optimal { y: Vec<Rat>, value: Rat },
}

impl GenLp {
    pub fn new(num_vars: usize) -> Self {
        GenLp {
            num_vars,
            objective: vec![Rat::zero(); num_vars],
            rows: Vec::new(),
            nonneg: vec![false; num_vars],
        }
    }

    pub fn feasibility(num_vars: usize) -> Self {
        Self::new(num_vars)
    }

    pub fn push_row(&mut self, coefs: Vec<Rat>, cmp: Cmp, rhs: Rat) {
        assert_eq!(coefs.len(), self.num_vars);
        self.rows.push((coefs, cmp, rhs));
    }

    /// Converts to standard form (equalities over nonnegative variables) and
    /// runs the simplex method.
    pub fn solve(&self) -> GenOutcome {
        // column layout: for each variable either one column (nonneg) or a
        // (plus, minus) pair (free); then one slack per inequality row.
        let mut col_of_var: Vec<(usize, Option<usize>)> = Vec::with_capacity(self.num_vars);
        let mut ncols = 0;
        for &nn in &self.nonneg {
            if nn {
                col_of_var.push((ncols, None));
                ncols += 1;
            } else {
                col_of_var.push((ncols, Some(ncols + 1)));
                ncols += 2;
            }
        }
        let slack_base = ncols;
        let num_slacks = self.rows.iter().filter(|(_, c, _)| *c != Cmp::Eq).count();
        ncols += num_slacks;

        let m = self.rows.len();
        let mut a = vec![vec![Rat::zero(); ncols]; m];
        let mut b = vec![Rat::zero(); m];
        let mut slack = slack_base;
        for (i, (coefs, cmp, rhs)) in self.rows.iter().enumerate() {
            for (v, coef) in coefs.iter().enumerate() {
                if coef.is_zero() {
                    continue;
                }
                let (cp, cm) = col_of_var[v];
                a[i][cp] = coef.clone();
                if let Some(cm) = cm {
                    a[i][cm] = -coef.clone();
                }
            }
            match cmp {
                Cmp::Le => {
                    a[i][slack] = Rat::from_integer(1.into());
                    slack += 1;
                }
                Cmp::Ge => {
                    a[i][slack] = Rat::from_integer((-1).into());
                    slack += 1;
                }
                Cmp::Eq => {}
            }
            b[i] = rhs.clone();
        }
        let mut c = vec![Rat::zero(); ncols];
        for (v, coef) in self.objective.iter().enumerate() {
            let (cp, cm) = col_of_var[v];
            c[cp] = coef.clone();
            if let Some(cm) = cm {
                c[cm] = -coef.clone();
            }
        }

        match simplex(a, b, c) {
            Outcome::Infeasible => GenOutcome::Infeasible,
            Outcome::Unbounded => GenOutcome::Unbounded,
            Outcome::Optimal { x, value } => {
                let y = col_of_var
                    .iter()
                    .map(|&(cp, cm)| match cm {
                        None => x[cp].clone(),
                        Some(cm) => &x[cp] - &x[cm],
                    })
                    .collect();
                GenOutcome::Optimal { y, value }
            }
        }
    }
}

enum Outcome {
    Infeasible,
    Unbounded,
    Optimal { x: Vec<Rat>, value: Rat },
}

/// Standard-form simplex: maximize `c.x` s.t. `A x = b`, `x >= 0`.
fn simplex(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>, c: Vec<Rat>) -> Outcome {
    let n = c.len();
    let m = a.len();
    if m == 0 {
        // trivially feasible at the origin; unbounded iff some c_j > 0
        if c.iter().any(|cj| cj.is_positive()) {
            return Outcome::Unbounded;
        }
        return Outcome::Optimal { x: vec![Rat::zero(); n], value: Rat::zero() };
    }
    for i in 0..m {
        if b[i].is_negative() {
            for x in a[i].iter_mut() {
                *x = -x.clone();
            }
            b[i] = -b[i].clone();
        }
    }
    // phase 1: artificial basis
    let total = n + m;
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut r = a[i].clone();
        r.resize(total, Rat::zero());
        r[n + i] = Rat::from_integer(1.into());
        r.push(b[i].clone());
        rows.push(r);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    // phase-1 reduced costs for original columns: sum of the column
    let mut obj = vec![Rat::zero(); total + 1];
    for j in 0..n {
        obj[j] = rows.iter().map(|r| r[j].clone()).sum();
    }
    obj[total] = rows.iter().map(|r| r[total].clone()).sum();
    // obj[total] stores -(-z) = sum b; phase-1 objective z = -(sum of
    // artificials), so z = -obj[total] throughout.
    run(&mut rows, &mut basis, &mut obj, n, total);
    if !obj[total].is_zero() {
        return Outcome::Infeasible;
    }
    // drive remaining artificials out of the basis or drop redundant rows
    let mut drop_rows = Vec::new();
    for i in 0..m {
        if basis[i] >= n {
            match (0..n).find(|&j| !rows[i][j].is_zero()) {
                Some(j) => pivot(&mut rows, &mut basis, &mut obj, i, j, total),
                None => drop_rows.push(i),
            }
        }
    }
    for &i in drop_rows.iter().rev() {
        rows.remove(i);
        basis.remove(i);
    }
    // phase 2: recompute reduced costs for the real objective
    let mut obj2 = vec![Rat::zero(); total + 1];
    for j in 0..n {
        let mut red = c[j].clone();
        for (i, r) in rows.iter().enumerate() {
            if basis[i] < n && !c[basis[i]].is_zero() {
                red -= &c[basis[i]] * &r[j];
            }
        }
        obj2[j] = red;
    }
    let mut negz = Rat::zero();
    for (i, r) in rows.iter().enumerate() {
        if basis[i] < n {
            negz -= &c[basis[i]] * &r[total];
        }
    }
    obj2[total] = negz;
    // artificial columns are banned in phase 2 by zeroing their costs and
    // never selecting them as entering columns (see `run`'s `limit`).
    if !run2(&mut rows, &mut basis, &mut obj2, n, total) {
        return Outcome::Unbounded;
    }
    let mut x = vec![Rat::zero(); n];
    for (i, &bi) in basis.iter().enumerate() {
        if bi < n {
            x[bi] = rows[i][total].clone();
        }
    }
    Outcome::Optimal { x, value: -obj2[total].clone() }
}

/// Phase-1 loop; entering columns restricted to `< limit` (original columns).
/// Maximizes and always terminates (Bland fallback).
fn run(rows: &mut [Vec<Rat>], basis: &mut [usize], obj: &mut [Rat], limit: usize, rhs: usize) {
    let mut degenerate_streak = 0usize;
    loop {
        let entering = choose_entering(obj, limit, degenerate_streak > 24);
        let j = match entering {
            Some(j) => j,
            None => return,
        };
        match choose_leaving(rows, basis, j, rhs) {
            None => return, // phase 1 is bounded; cannot happen, treat as done
            Some((i, degen)) => {
                if degen {
                    degenerate_streak += 1;
                } else {
                    degenerate_streak = 0;
                }
                pivot(rows, basis, obj, i, j, rhs);
            }
        }
    }
}

/// Phase-2 loop; returns false on unboundedness.
fn run2(rows: &mut [Vec<Rat>], basis: &mut [usize], obj: &mut [Rat], limit: usize, rhs: usize) -> bool {
    let mut degenerate_streak = 0usize;
    loop {
        let entering = choose_entering(obj, limit, degenerate_streak > 24);
        let j = match entering {
            Some(j) => j,
            None => return true,
        };
        match choose_leaving(rows, basis, j, rhs) {
            None => return false,
            Some((i, degen)) => {
                if degen {
                    degenerate_streak += 1;
                } else {
                    degenerate_streak = 0;
                }
                pivot(rows, basis, obj, i, j, rhs);
            }
        }
    }
}

fn choose_entering(obj: &[Rat], limit: usize, bland: bool) -> Option<usize> {
    if bland {
        return (0..limit).find(|&j| obj[j].is_positive());
    }
    let mut best: Option<usize> = None;
    for j in 0..limit {
        if obj[j].is_positive() {
            match best {
                None => best = Some(j),
                Some(bj) => {
                    if obj[j] > obj[bj] {
                        best = Some(j);
                    }
                }
            }
        }
    }
    best
}

/// Ratio test; ties broken by smallest basis index (Bland-compatible).
/// Returns the pivot row and whether the step is degenerate.
fn choose_leaving(rows: &[Vec<Rat>], basis: &[usize], j: usize, rhs: usize) -> Option<(usize, bool)> {
    let mut best: Option<(usize, Rat)> = None;
    for (i, r) in rows.iter().enumerate() {
        if r[j].is_positive() {
            let ratio = &r[rhs] / &r[j];
            match &best {
                None => best = Some((i, ratio)),
                Some((bi, br)) => {
                    if ratio < *br || (ratio == *br && basis[i] < basis[*bi]) {
                        best = Some((i, ratio));
                    }
                }
            }
        }
    }
    best.map(|(i, ratio)| (i, ratio.is_zero()))
}

fn pivot(rows: &mut [Vec<Rat>], basis: &mut [usize], obj: &mut [Rat], i: usize, j: usize, rhs: usize) {
    let p = rows[i][j].clone();
    for x in rows[i].iter_mut() {
        if !x.is_zero() {
            *x = &*x / &p;
        }
    }
    for r in 0..rows.len() {
        if r != i && !rows[r][j].is_zero() {
            let f = rows[r][j].clone();
            for cidx in 0..=rhs {
                if !rows[i][cidx].is_zero() {
                    let sub = &f * &rows[i][cidx];
                    rows[r][cidx] = &rows[r][cidx] - sub;
                }
            }
        }
    }
    if !obj[j].is_zero() {
        let f = obj[j].clone();
        for cidx in 0..=rhs {
            if !rows[i][cidx].is_zero() {
                let sub = &f * &rows[i][cidx];
                obj[cidx] = &obj[cidx] - sub;
            }
        }
    }
    basis[i] = j;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, ratio};

    #[test]
    fn bounded_maximum() {
        // max x + y st x + 2y <= 4, 3x + y <= 6, x,y >= 0  -> (8/5, 6/5), 14/5
        let mut lp = GenLp::new(2);
        lp.nonneg = vec![true, true];
        lp.objective = vec![rat(1), rat(1)];
        lp.push_row(vec![rat(1), rat(2)], Cmp::Le, rat(4));
        lp.push_row(vec![rat(3), rat(1)], Cmp::Le, rat(6));
        match lp.solve() {
            GenOutcome::Optimal { y, value } => {
                assert_eq!(value, ratio(14, 5));
                assert_eq!(y, vec![ratio(8, 5), ratio(6, 5)]);
            }
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn infeasible_system() {
        let mut lp = GenLp::new(1);
        lp.nonneg = vec![true];
        lp.push_row(vec![rat(1)], Cmp::Ge, rat(2));
        lp.push_row(vec![rat(1)], Cmp::Le, rat(1));
        assert_eq!(lp.solve(), GenOutcome::Infeasible);
    }

    #[test]
    fn unbounded_direction() {
        let mut lp = GenLp::new(2);
        lp.nonneg = vec![true, true];
        lp.objective = vec![rat(1), rat(0)];
        lp.push_row(vec![rat(0), rat(1)], Cmp::Le, rat(1));
        assert_eq!(lp.solve(), GenOutcome::Unbounded);
    }

    #[test]
    fn free_variables_and_equalities() {
        // h free: h >= 3 via inequality, minimize nothing (feasibility)
        let mut lp = GenLp::new(1);
        lp.push_row(vec![rat(1)], Cmp::Ge, rat(3));
        match lp.solve() {
            GenOutcome::Optimal { y, .. } => assert!(y[0] >= rat(3)),
            other => panic!("unexpected {other:?}"),
        }
        // equality with a negative rhs on a free var
        let mut lp = GenLp::new(2);
        lp.objective = vec![rat(0), rat(1)];
        lp.push_row(vec![rat(1), rat(0)], Cmp::Eq, rat(-5));
        lp.push_row(vec![rat(1), rat(1)], Cmp::Le, rat(0));
        match lp.solve() {
            GenOutcome::Optimal { y, value } => {
                assert_eq!(y[0], rat(-5));
                assert_eq!(value, rat(5));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn degenerate_vertex_terminates() {
        // several redundant constraints through the same vertex
        let mut lp = GenLp::new(2);
        lp.nonneg = vec![true, true];
        lp.objective = vec![rat(1), rat(1)];
        lp.push_row(vec![rat(1), rat(0)], Cmp::Le, rat(1));
        lp.push_row(vec![rat(0), rat(1)], Cmp::Le, rat(1));
        lp.push_row(vec![rat(1), rat(1)], Cmp::Le, rat(2));
        lp.push_row(vec![rat(2), rat(1)], Cmp::Le, rat(3));
        lp.push_row(vec![rat(1), rat(2)], Cmp::Le, rat(3));
        match lp.solve() {
            GenOutcome::Optimal { y, value } => {
                assert_eq!(value, rat(2));
                assert_eq!(y, vec![rat(1), rat(1)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}

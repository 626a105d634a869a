//! Exact two-phase simplex over the rationals with Bland's rule.
//!
//! Small dense problems only: every feasibility question the arrangement code
//! asks (tope sign vectors, facets, cone and zonotope membership) has a
//! handful of variables and constraints.

use num::{BigRational, One, Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub relation: Relation,
    pub rhs: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { point: Vec<BigRational>, value: BigRational },
}

/// A linear program over `nvars` variables. Variables are free unless marked
/// nonnegative.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    nvars: usize,
    nonneg: Vec<bool>,
    constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new(nvars: usize) -> Self {
        LinearProgram {
            nvars,
            nonneg: vec![false; nvars],
            constraints: Vec::new(),
        }
    }

    pub fn nonnegative(mut self, var: usize) -> Self {
        self.nonneg[var] = true;
        self
    }

    pub fn set_nonnegative(&mut self, var: usize) {
        self.nonneg[var] = true;
    }

    pub fn add(&mut self, coeffs: Vec<BigRational>, relation: Relation, rhs: BigRational) {
        assert_eq!(coeffs.len(), self.nvars);
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    /// Any feasible point, or `None`.
    pub fn feasible_point(&self) -> Option<Vec<BigRational>> {
        match self.solve(None) {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }

    pub fn maximize(&self, objective: &[BigRational]) -> LpOutcome {
        self.solve(Some(objective))
    }

    fn solve(&self, objective: Option<&[BigRational]>) -> LpOutcome {
        if self.nvars == 0 {
            let ok = self.constraints.iter().all(|c| match c.relation {
                Relation::Le => !c.rhs.is_negative(),
                Relation::Ge => !c.rhs.is_positive(),
                Relation::Eq => c.rhs.is_zero(),
            });
            return if ok {
                LpOutcome::Optimal {
                    point: vec![],
                    value: BigRational::zero(),
                }
            } else {
                LpOutcome::Infeasible
            };
        }
        // Column layout: for each original variable one column (+ one for its
        // negative part when free), then one slack per inequality, then the
        // artificials.
        let mut var_cols: Vec<(usize, Option<usize>)> = Vec::with_capacity(self.nvars);
        let mut ncols = 0;
        for v in 0..self.nvars {
            if self.nonneg[v] {
                var_cols.push((ncols, None));
                ncols += 1;
            } else {
                var_cols.push((ncols, Some(ncols + 1)));
                ncols += 2;
            }
        }
        let nslack = self
            .constraints
            .iter()
            .filter(|c| c.relation != Relation::Eq)
            .count();
        let first_art = ncols + nslack;
        let m = self.constraints.len();
        let total = first_art + m;
        let zero = BigRational::zero();
        let one = BigRational::one();

        let mut tab: Vec<Vec<BigRational>> = Vec::with_capacity(m);
        let mut slack = ncols;
        for (i, c) in self.constraints.iter().enumerate() {
            let mut row = vec![zero.clone(); total + 1];
            for (v, &(p, n)) in var_cols.iter().enumerate() {
                row[p] = c.coeffs[v].clone();
                if let Some(n) = n {
                    row[n] = -c.coeffs[v].clone();
                }
            }
            match c.relation {
                Relation::Le => {
                    row[slack] = one.clone();
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -one.clone();
                    slack += 1;
                }
                Relation::Eq => {}
            }
            row[total] = c.rhs.clone();
            if row[total].is_negative() {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
            }
            row[first_art + i] = one.clone();
            tab.push(row);
        }
        let mut basis: Vec<usize> = (0..m).map(|i| first_art + i).collect();

        // phase 1: minimize the sum of artificials
        let mut cost = vec![zero.clone(); total];
        for c in cost.iter_mut().skip(first_art) {
            *c = one.clone();
        }
        simplex(&mut tab, &mut basis, &cost, total, None);
        let infeas: BigRational = basis
            .iter()
            .enumerate()
            .filter(|(_, &b)| b >= first_art)
            .map(|(i, _)| tab[i][total].clone())
            .sum();
        if infeas.is_positive() {
            return LpOutcome::Infeasible;
        }
        // drive remaining artificials out of the basis
        let mut i = 0;
        while i < tab.len() {
            if basis[i] >= first_art {
                if let Some(j) = (0..first_art).find(|&j| !tab[i][j].is_zero()) {
                    pivot(&mut tab, &mut basis, i, j);
                } else {
                    tab.remove(i);
                    basis.remove(i);
                    continue;
                }
            }
            i += 1;
        }
        // phase 2 on the original and slack columns only
        let mut cost = vec![zero.clone(); total];
        if let Some(obj) = objective {
            for (v, &(p, n)) in var_cols.iter().enumerate() {
                cost[p] = -obj[v].clone();
                if let Some(n) = n {
                    cost[n] = obj[v].clone();
                }
            }
        }
        if !simplex(&mut tab, &mut basis, &cost, total, Some(first_art)) {
            return LpOutcome::Unbounded;
        }
        let mut values = vec![zero.clone(); total];
        for (i, &b) in basis.iter().enumerate() {
            values[b] = tab[i][total].clone();
        }
        let point: Vec<BigRational> = var_cols
            .iter()
            .map(|&(p, n)| match n {
                Some(n) => &values[p] - &values[n],
                None => values[p].clone(),
            })
            .collect();
        let value = match objective {
            Some(obj) => point.iter().zip(obj).map(|(x, c)| x * c).sum(),
            None => zero,
        };
        LpOutcome::Optimal { point, value }
    }
}

fn pivot(tab: &mut [Vec<BigRational>], basis: &mut [usize], r: usize, c: usize) {
    let inv = BigRational::one() / tab[r][c].clone();
    for x in tab[r].iter_mut() {
        *x *= &inv;
    }
    let prow = tab[r].clone();
    for (i, row) in tab.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for (x, p) in row.iter_mut().zip(&prow) {
            if !p.is_zero() {
                *x -= &f * p;
            }
        }
    }
    basis[r] = c;
}

/// Minimizes `cost` from the current basic feasible solution. Columns at or
/// beyond `forbid_from` never enter. Returns false when unbounded.
fn simplex(
    tab: &mut [Vec<BigRational>],
    basis: &mut [usize],
    cost: &[BigRational],
    total: usize,
    forbid_from: Option<usize>,
) -> bool {
    let limit = forbid_from.unwrap_or(total);
    loop {
        // reduced costs, Bland: first improving column
        let entering = (0..limit).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let mut rc = cost[j].clone();
            for (i, &b) in basis.iter().enumerate() {
                if !tab[i][j].is_zero() {
                    rc -= &cost[b] * &tab[i][j];
                }
            }
            rc.is_negative()
        });
        let Some(j) = entering else {
            return true;
        };
        let mut best: Option<(usize, BigRational)> = None;
        for i in 0..tab.len() {
            if tab[i][j].is_positive() {
                let ratio = &tab[i][total] / &tab[i][j];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && basis[i] < basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = best else {
            return false;
        };
        pivot(tab, basis, r, j);
    }
}

//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! Pivoting always takes the lowest-index improving column and breaks ratio
//! ties by the lowest basic variable, so runs terminate and are reproducible.
//! Every optimum is re-verified against the original problem before it is
//! returned: primal feasibility, dual feasibility, complementary slackness
//! and equality of the primal and dual objectives.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{to_text, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    /// Sparse `(variable, coefficient)` terms.
    pub terms: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// `optimize objective . x` subject to the constraints and `x >= 0`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new(sense: Sense, objective: Vec<Rational>) -> Self {
        LinearProgram {
            sense,
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add(&mut self, terms: Vec<(usize, Rational)>, relation: Relation, rhs: Rational) {
        self.constraints.push(Constraint {
            terms,
            relation,
            rhs,
        });
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Result of a solve. Vectors are empty unless the status is optimal.
///
/// `duals[i]` belongs to constraint `i`, signed so that
/// `sum_i rhs_i * duals[i] == objective`.
#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    pub objective: Rational,
    pub primal: Vec<Rational>,
    pub duals: Vec<Rational>,
}

impl LpSolution {
    fn without_optimum(status: LpStatus) -> Self {
        LpSolution {
            status,
            objective: Rational::zero(),
            primal: Vec::new(),
            duals: Vec::new(),
        }
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Reduced costs for the active objective, and its current value.
    reduced: Vec<Rational>,
    value: Rational,
}

impl Tableau {
    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        if !p.is_one() {
            for a in self.rows[r].iter_mut() {
                if !a.is_zero() {
                    *a /= &p;
                }
            }
            self.rhs[r] /= &p;
        }
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][col].clone();
            if f.is_zero() {
                continue;
            }
            for (a, b) in self.rows[i].iter_mut().zip(&prow) {
                if !b.is_zero() {
                    *a -= &f * b;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        let f = self.reduced[col].clone();
        if !f.is_zero() {
            for (a, b) in self.reduced.iter_mut().zip(&prow) {
                if !b.is_zero() {
                    *a -= &f * b;
                }
            }
            self.value += &f * &prhs;
        }
        self.basis[r] = col;
    }

    fn set_costs(&mut self, costs: &[Rational]) {
        self.reduced = costs.to_vec();
        self.value = Rational::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &costs[b];
            if cb.is_zero() {
                continue;
            }
            for (d, a) in self.reduced.iter_mut().zip(&self.rows[i]) {
                if !a.is_zero() {
                    *d -= cb * a;
                }
            }
            self.value += cb * &self.rhs[i];
        }
    }

    /// Minimizes the active objective; returns false when unbounded.
    fn run(&mut self, allowed: usize) -> bool {
        loop {
            let Some(col) = (0..allowed).find(|&j| self.reduced[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
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
            match best {
                None => return false,
                Some((r, _)) => self.pivot(r, col),
            }
        }
    }
}

/// Solves a linear program exactly. `Err` only signals a failed post-hoc check.
pub fn solve_rational_lp(lp: &LinearProgram) -> Result<LpSolution> {
    let nv = lp.num_vars();
    let m = lp.constraints.len();

    // Normalize to non-negative right-hand sides.
    let mut rows = Vec::with_capacity(m);
    let mut rels = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut flipped = Vec::with_capacity(m);
    for c in &lp.constraints {
        let mut row = vec![Rational::zero(); nv];
        for (j, a) in &c.terms {
            if *j >= nv {
                return Err(Error::invalid(format!(
                    "constraint references variable {j} of {nv}"
                )));
            }
            row[*j] += a;
        }
        let flip = c.rhs.is_negative();
        let rel = match (c.relation, flip) {
            (r, false) => r,
            (Relation::Le, true) => Relation::Ge,
            (Relation::Ge, true) => Relation::Le,
            (Relation::Eq, true) => Relation::Eq,
        };
        if flip {
            row.iter_mut().for_each(|a| *a = -a.clone());
        }
        rows.push(row);
        rels.push(rel);
        rhs.push(if flip { -c.rhs.clone() } else { c.rhs.clone() });
        flipped.push(flip);
    }

    // Column layout: structural | slack/surplus | artificial.
    let slack_count = rels.iter().filter(|r| **r != Relation::Eq).count();
    let art_count = rels.iter().filter(|r| **r != Relation::Le).count();
    let art_start = nv + slack_count;
    let ncols = art_start + art_count;
    let mut identity = vec![0usize; m];
    let (mut s, mut a) = (nv, art_start);
    for (i, row) in rows.iter_mut().enumerate() {
        row.resize(ncols, Rational::zero());
        match rels[i] {
            Relation::Le => {
                row[s] = Rational::one();
                identity[i] = s;
                s += 1;
            }
            Relation::Ge => {
                row[s] = -Rational::one();
                s += 1;
                row[a] = Rational::one();
                identity[i] = a;
                a += 1;
            }
            Relation::Eq => {
                row[a] = Rational::one();
                identity[i] = a;
                a += 1;
            }
        }
    }

    let mut t = Tableau {
        rows,
        rhs,
        basis: identity.clone(),
        reduced: Vec::new(),
        value: Rational::zero(),
    };

    if art_count > 0 {
        let mut phase1 = vec![Rational::zero(); ncols];
        phase1[art_start..]
            .iter_mut()
            .for_each(|c| *c = Rational::one());
        t.set_costs(&phase1);
        t.run(ncols);
        if t.value.is_positive() {
            return Ok(LpSolution::without_optimum(LpStatus::Infeasible));
        }
        for r in 0..m {
            if t.basis[r] >= art_start {
                if let Some(col) = (0..art_start).find(|&j| !t.rows[r][j].is_zero()) {
                    t.pivot(r, col);
                }
            }
        }
    }

    let minimize = lp.sense == Sense::Minimize;
    let mut costs = vec![Rational::zero(); ncols];
    for (c, o) in costs.iter_mut().zip(&lp.objective) {
        *c = if minimize { o.clone() } else { -o.clone() };
    }
    t.set_costs(&costs);
    if !t.run(art_start) {
        return Ok(LpSolution::without_optimum(LpStatus::Unbounded));
    }

    let mut primal = vec![Rational::zero(); nv];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < nv {
            primal[b] = t.rhs[i].clone();
        }
    }
    let duals: Vec<Rational> = (0..m)
        .map(|i| {
            let col = identity[i];
            let y: Rational = t
                .basis
                .iter()
                .enumerate()
                .filter(|(_, &b)| !costs[b].is_zero())
                .map(|(k, &b)| &costs[b] * &t.rows[k][col])
                .sum();
            let y = if minimize { y } else { -y };
            if flipped[i] {
                -y
            } else {
                y
            }
        })
        .collect();
    let objective: Rational = lp.objective.iter().zip(&primal).map(|(c, x)| c * x).sum();

    let solution = LpSolution {
        status: LpStatus::Optimal,
        objective,
        primal,
        duals,
    };
    verify_optimal(lp, &solution)?;
    Ok(solution)
}

/// Re-checks an optimal solution against the original program.
pub fn verify_optimal(lp: &LinearProgram, sol: &LpSolution) -> Result<()> {
    let fail = |msg: String| Err(Error::Inconsistency(format!("LP certificate: {msg}")));
    let nv = lp.num_vars();
    if sol.primal.len() != nv || sol.duals.len() != lp.constraints.len() {
        return fail("solution vector lengths do not match the program".into());
    }
    if let Some(j) = (0..nv).find(|&j| sol.primal[j].is_negative()) {
        return fail(format!("x[{j}] is negative"));
    }
    let minimize = lp.sense == Sense::Minimize;
    let mut reduced = lp.objective.clone();
    let mut dual_value = Rational::zero();
    for (i, c) in lp.constraints.iter().enumerate() {
        let lhs: Rational = c.terms.iter().map(|(j, a)| a * &sol.primal[*j]).sum();
        let ok = match c.relation {
            Relation::Le => lhs <= c.rhs,
            Relation::Ge => lhs >= c.rhs,
            Relation::Eq => lhs == c.rhs,
        };
        if !ok {
            return fail(format!("constraint {i} violated"));
        }
        let y = &sol.duals[i];
        // Sign pattern of a feasible dual for this sense.
        let sign_ok = match (c.relation, minimize) {
            (Relation::Eq, _) => true,
            (Relation::Ge, true) | (Relation::Le, false) => !y.is_negative(),
            (Relation::Le, true) | (Relation::Ge, false) => !y.is_positive(),
        };
        if !sign_ok {
            return fail(format!("dual {i} = {} has the wrong sign", to_text(y)));
        }
        if !y.is_zero() && lhs != c.rhs {
            return fail(format!("complementary slackness fails on constraint {i}"));
        }
        for (j, a) in &c.terms {
            reduced[*j] -= y * a;
        }
        dual_value += y * &c.rhs;
    }
    for j in 0..nv {
        let d = &reduced[j];
        let feasible = if minimize {
            !d.is_negative()
        } else {
            !d.is_positive()
        };
        if !feasible {
            return fail(format!("reduced cost of x[{j}] has the wrong sign"));
        }
        if sol.primal[j].is_positive() && !d.is_zero() {
            return fail(format!("complementary slackness fails on x[{j}]"));
        }
    }
    let primal_value: Rational = lp
        .objective
        .iter()
        .zip(&sol.primal)
        .map(|(c, x)| c * x)
        .sum();
    if primal_value != sol.objective || dual_value != sol.objective {
        return fail(format!(
            "objectives differ: primal {}, dual {}, reported {}",
            to_text(&primal_value),
            to_text(&dual_value),
            to_text(&sol.objective)
        ));
    }
    Ok(())
}

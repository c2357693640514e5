//! Bounded-variable linear programming.
//!
//! A dense-tableau simplex over boxed variables: bounds are handled natively
//! (nonbasic variables sit at one of their bounds), so `0 <= x <= 1` boxes
//! never become rows. The slack basis with every negative-cost variable at its
//! upper bound is dual feasible, so a dual simplex pass reaches a feasible
//! basis without artificials and a primal pass finishes the job.
//!
//! Both passes use Harris ratio tests. Primal pricing is Dantzig's largest
//! reduced cost, falling back to Bland's rule while the method stalls on
//! degenerate pivots; the dual pass has a similar fallback. The tableau is
//! rebuilt from the original rows at intervals and before optimality is
//! declared. Every rule is a fixed function of the tableau, so identical
//! problems give identical answers.
//!
//! [`solve_lazy`] adds constraints on demand from a separation callback, for
//! constraint classes too large to state up front (metric triangles). Rows are
//! appended to the current tableau and the dual pass repairs feasibility;
//! lazily added rows that have gone slack are dropped between rounds.

use std::cmp::Ordering;

use crate::error::{Error, Result};

pub const FEAS_TOL: f64 = 1e-7;
pub const PIVOT_TOL: f64 = 1e-9;
pub const OBJ_TOL: f64 = 1e-6;
/// Minimum violation for a separated constraint to be added.
pub const CUT_TOL: f64 = 1e-6;
pub const MAX_CUTS_PER_ROUND: usize = 500;
pub const MAX_SEPARATION_ROUNDS: usize = 200;

const DUAL_TOL: f64 = 1e-9;
const DEGENERATE_RUN: usize = 30;
/// The dual pass cycles less readily, so it waits longer before Bland's rule.
const DUAL_DEGENERATE_RUN: usize = 200;
/// Bound slack allowed in the first pass of the ratio test.
const HARRIS_TOL: f64 = 1e-9;
/// Pivots between recomputations of basic values and reduced costs.
const REFRESH_EVERY: usize = 200;
/// Tableau entries below this are treated as zero by the ratio test.
const ALPHA_TOL: f64 = 1e-7;
/// Entries this small after a pivot are treated as exact zeros.
const DROP_TOL: f64 = 1e-13;
/// Pivots since the last refactor above which an optimality test refactors.
const SETTLE_PIVOTS: usize = 50;


#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn new(coeffs: Vec<(usize, f64)>, relation: Relation, rhs: f64) -> Self {
        Constraint { coeffs, relation, rhs }
    }

    pub fn le(coeffs: Vec<(usize, f64)>, rhs: f64) -> Self {
        Self::new(coeffs, Relation::Le, rhs)
    }

    pub fn ge(coeffs: Vec<(usize, f64)>, rhs: f64) -> Self {
        Self::new(coeffs, Relation::Ge, rhs)
    }

    pub fn eq(coeffs: Vec<(usize, f64)>, rhs: f64) -> Self {
        Self::new(coeffs, Relation::Eq, rhs)
    }

    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(j, a)| a * x[j]).sum()
    }

    /// Amount by which `x` violates the constraint; zero when satisfied.
    pub fn violation(&self, x: &[f64]) -> f64 {
        let lhs = self.activity(x);
        match self.relation {
            Relation::Le => (lhs - self.rhs).max(0.0),
            Relation::Ge => (self.rhs - lhs).max(0.0),
            Relation::Eq => (lhs - self.rhs).abs(),
        }
    }

    fn index_key(&self) -> Vec<usize> {
        self.coeffs.iter().map(|c| c.0).collect()
    }
}

/// Minimize `objective . x` subject to `constraints` and per-variable bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct LpProblem {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub objective: Vec<(usize, f64)>,
    pub constraints: Vec<Constraint>,
}

impl LpProblem {
    /// `var_count` variables, each boxed in `[0, 1]`.
    pub fn new(var_count: usize) -> Self {
        LpProblem {
            lower: vec![0.0; var_count],
            upper: vec![1.0; var_count],
            objective: Vec::new(),
            constraints: Vec::new(),
        }
    }

    pub fn var_count(&self) -> usize {
        self.lower.len()
    }

    pub fn add_var(&mut self, lower: f64, upper: f64) -> usize {
        self.lower.push(lower);
        self.upper.push(upper);
        self.lower.len() - 1
    }

    pub fn set_bounds(&mut self, j: usize, lower: f64, upper: f64) {
        self.lower[j] = lower;
        self.upper[j] = upper;
    }

    pub fn add_objective(&mut self, j: usize, c: f64) {
        self.objective.push((j, c));
    }

    pub fn add_constraint(&mut self, c: Constraint) {
        self.constraints.push(c);
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.var_count();
        if self.upper.len() != n {
            return Err(Error::InvalidInstance("bound vectors differ in length".into()));
        }
        for j in 0..n {
            let (l, u) = (self.lower[j], self.upper[j]);
            if !l.is_finite() || !u.is_finite() || l > u {
                return Err(Error::InvalidInstance(format!("variable {j} has bounds [{l}, {u}]")));
            }
        }
        for &(j, c) in &self.objective {
            if j >= n || !c.is_finite() {
                return Err(Error::InvalidInstance(format!("objective term ({j}, {c}) invalid")));
            }
        }
        for (i, con) in self.constraints.iter().enumerate() {
            if !con.rhs.is_finite() {
                return Err(Error::InvalidInstance(format!("constraint {i} has rhs {}", con.rhs)));
            }
            for &(j, a) in &con.coeffs {
                if j >= n || !a.is_finite() {
                    return Err(Error::InvalidInstance(format!("constraint {i} has term ({j}, {a})")));
                }
            }
        }
        Ok(())
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().map(|&(j, c)| c * x[j]).sum()
    }

    /// Largest constraint or bound violation at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let rows = self.constraints.iter().map(|c| c.violation(x)).fold(0.0, f64::max);
        let bounds = (0..self.var_count())
            .map(|j| (self.lower[j] - x[j]).max(x[j] - self.upper[j]).max(0.0))
            .fold(0.0, f64::max);
        rows.max(bounds)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    IterationLimit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub values: Vec<f64>,
    pub objective: f64,
    pub pivots: usize,
    /// Separation rounds used by [`solve_lazy`]; 1 for a plain solve.
    pub rounds: usize,
    /// Constraints added lazily, in the order they were added.
    pub cuts: Vec<Constraint>,
    /// Constraints of the final system whose slack is nonbasic, i.e. the rows
    /// that pin down the returned vertex.
    pub binding: Vec<Constraint>,
}

impl LpSolution {
    /// `Ok(self)` when optimal, otherwise the matching error.
    pub fn require_optimal(self) -> Result<Self> {
        match self.status {
            LpStatus::Optimal => Ok(self),
            LpStatus::Infeasible => Err(Error::Infeasible),
            LpStatus::IterationLimit => Err(Error::IterationLimit(self.pivots)),
        }
    }
}

pub fn solve(p: &LpProblem) -> Result<LpSolution> {
    p.validate()?;
    let mut t = Tableau::build(p);
    let status = t.run(pivot_limit(p))?;
    let values = t.structural_values(p);
    if status == LpStatus::Optimal {
        check_feasible(p, &values)?;
    }
    let objective = p.objective_value(&values);
    let binding = t.binding(&p.constraints);
    Ok(LpSolution { status, values, objective, pivots: t.pivots, rounds: 1, cuts: Vec::new(), binding })
}

/// Solve `p`, repeatedly adding constraints returned by `separate` until it
/// finds nothing violated by more than [`CUT_TOL`].
///
/// Each round keeps at most [`MAX_CUTS_PER_ROUND`] cuts, most violated first,
/// ties broken by the lexicographic order of their variable indices.
pub fn solve_lazy<F>(p: &LpProblem, mut separate: F) -> Result<LpSolution>
where
    F: FnMut(&[f64]) -> Vec<Constraint>,
{
    p.validate()?;
    let mut work = p.clone();
    let mut cuts = Vec::new();
    let mut t = Tableau::build(&work);
    let mut status = t.run(pivot_limit(&work))?;
    for round in 1..=MAX_SEPARATION_ROUNDS {
        let values = t.structural_values(&work);
        let finish = |status, values: Vec<f64>, t: &Tableau, work: &LpProblem, cuts: Vec<Constraint>| {
            let objective = work.objective_value(&values);
            let binding = t.binding(&work.constraints);
            Ok(LpSolution { status, values, objective, pivots: t.pivots, rounds: round, cuts, binding })
        };
        if status != LpStatus::Optimal {
            return finish(status, values, &t, &work, cuts);
        }
        check_feasible(&work, &values)?;
        let mut found: Vec<(f64, Constraint)> = separate(&values)
            .into_iter()
            .map(|c| (c.violation(&values), c))
            .filter(|(v, _)| *v > CUT_TOL)
            .collect();
        if found.is_empty() {
            return finish(status, values, &t, &work, cuts);
        }
        found.sort_by(|a, b| {
            b.0.partial_cmp(&a.0)
                .unwrap_or(Ordering::Equal)
                .then_with(|| a.1.index_key().cmp(&b.1.index_key()))
        });
        found.truncate(MAX_CUTS_PER_ROUND);
        let added: Vec<Constraint> = found.into_iter().map(|(_, c)| c).collect();
        cuts.extend(added.iter().cloned());
        let keep = t.purge(p.constraints.len());
        let mut flags = keep.into_iter();
        work.constraints.retain(|_| flags.next().unwrap_or(true));
        for c in &added {
            work.add_constraint(c.clone());
        }
        let limit = t.pivots + pivot_limit(&work);
        t.add_rows(&added);
        status = t.run(limit)?;
    }
    Err(Error::SeparationLimit(MAX_SEPARATION_ROUNDS))
}

fn pivot_limit(p: &LpProblem) -> usize {
    50 * (p.var_count() + p.constraints.len()).max(1)
}

fn check_feasible(p: &LpProblem, values: &[f64]) -> Result<()> {
    let scale = 1.0 + p.constraints.iter().map(|c| c.rhs.abs()).fold(0.0, f64::max);
    let viol = p.max_violation(values);
    if viol > FEAS_TOL * scale {
        return Err(Error::Internal(format!("simplex lost feasibility (row violation {viol:.2e})")));
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Pricing {
    Dantzig,
    Bland,
}


struct Tableau {
    rows: usize,
    cols: usize,
    /// Row-major `rows x cols` matrix `B^-1 A`.
    a: Vec<f64>,
    beta: Vec<f64>,
    basis: Vec<usize>,
    /// Row holding each basic column, `usize::MAX` when nonbasic.
    row_of: Vec<usize>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    at_upper: Vec<bool>,
    cost: Vec<f64>,
    reduced: Vec<f64>,
    pivots: usize,
    /// The starting system `A x = rhs`, sparse by row, slacks included.
    orig: Vec<Vec<(usize, f64)>>,
    rhs: Vec<f64>,
    /// Starting basic column of each row; its current column is `B^-1 e_i`.
    init_basic: Vec<usize>,
    since_refresh: usize,
    nstruct: usize,
    /// Row and coefficient of each non-structural column, indexed from
    /// `nstruct`; every such column has a single nonzero.
    unit: Vec<(usize, f64)>,
}

impl Tableau {
    /// Slack basis for `p`: row `i` becomes `sign * (a.x) + s_i = sign * b`
    /// with `s_i >= 0` (fixed at 0 for equalities). Every variable is boxed,
    /// so putting each negative-cost variable at its upper bound makes this
    /// basis dual feasible and no phase one is needed.
    fn build(p: &LpProblem) -> Self {
        let n = p.var_count();
        let m = p.constraints.len();
        let cols = n + m;
        let mut lower = p.lower.clone();
        let mut upper = p.upper.clone();
        let mut a = vec![0.0; m * cols];
        let mut orig = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        for (i, con) in p.constraints.iter().enumerate() {
            let sign = if con.relation == Relation::Ge { -1.0 } else { 1.0 };
            let r = &mut a[i * cols..(i + 1) * cols];
            for &(j, c) in &con.coeffs {
                r[j] += sign * c;
            }
            r[n + i] = 1.0;
            let mut sparse: Vec<(usize, f64)> =
                r[..n].iter().enumerate().filter(|(_, &c)| c != 0.0).map(|(j, &c)| (j, c)).collect();
            sparse.push((n + i, 1.0));
            orig.push(sparse);
            rhs.push(sign * con.rhs);
            lower.push(0.0);
            upper.push(if con.relation == Relation::Eq { 0.0 } else { f64::INFINITY });
        }
        let mut cost = vec![0.0; cols];
        for &(j, c) in &p.objective {
            cost[j] += c;
        }
        let at_upper: Vec<bool> = (0..cols).map(|j| j < n && cost[j] < 0.0).collect();
        let basis: Vec<usize> = (n..n + m).collect();
        let mut row_of = vec![usize::MAX; cols];
        for (i, &b) in basis.iter().enumerate() {
            row_of[b] = i;
        }
        let mut t = Tableau {
            rows: m,
            cols,
            a,
            beta: vec![0.0; m],
            init_basic: basis.clone(),
            basis,
            row_of,
            lower,
            upper,
            at_upper,
            cost,
            reduced: vec![0.0; cols],
            pivots: 0,
            orig,
            rhs,
            since_refresh: 0,
            nstruct: n,
            unit: (0..m).map(|i| (i, 1.0)).collect(),
        };
        t.refresh();
        t
    }

    fn run(&mut self, limit: usize) -> Result<LpStatus> {
        match self.dual_iterate(limit)? {
            LpStatus::Optimal => self.iterate(limit),
            other => Ok(other),
        }
    }

    fn value(&self, j: usize) -> f64 {
        match self.row_of[j] {
            usize::MAX if self.at_upper[j] => self.upper[j],
            usize::MAX => self.lower[j],
            r => self.beta[r],
        }
    }


    /// Rebuild `B^-1 A` from the starting rows. Basic slack columns are unit
    /// vectors, so only the block of structural basics against the rows no
    /// unit column claims needs a dense inverse.
    fn reinvert(&mut self) -> Result<()> {
        let (m, cols, ns) = (self.rows, self.cols, self.nstruct);
        // Split basis positions into unit ones (with their row) and the rest.
        let mut claimed = vec![usize::MAX; m];
        let mut dense_pos = Vec::new();
        for k in 0..m {
            let q = self.basis[k];
            if q >= ns {
                let (i, _) = self.unit[q - ns];
                if claimed[i] == usize::MAX {
                    claimed[i] = k;
                    continue;
                }
            }
            dense_pos.push(k);
        }
        let free_rows: Vec<usize> = (0..m).filter(|&i| claimed[i] == usize::MAX).collect();
        let d = dense_pos.len();
        debug_assert_eq!(d, free_rows.len());
        let mut slot = vec![usize::MAX; cols];
        for (b, &k) in dense_pos.iter().enumerate() {
            slot[self.basis[k]] = b;
        }
        let mut blk = vec![0.0f64; d * d];
        for (a, &i) in free_rows.iter().enumerate() {
            for &(j, c) in &self.orig[i] {
                if slot[j] != usize::MAX {
                    blk[a * d + slot[j]] += c;
                }
            }
        }
        let mut inv = vec![0.0f64; d * d];
        for a in 0..d {
            inv[a * d + a] = 1.0;
        }
        let best_row = |blk: &[f64], col: usize| {
            (col..d).max_by(|&x, &y| blk[x * d + col].abs().total_cmp(&blk[y * d + col].abs())).expect("nonempty")
        };
        for col in 0..d {
            let mut p = best_row(&blk, col);
            if blk[p * d + col].abs() < PIVOT_TOL {
                // Dependent column: swap in the starting basic column of a
                // free row whose starting column is nonbasic.
                let a = (0..d)
                    .filter(|&a| self.row_of[self.init_basic[free_rows[a]]] == usize::MAX)
                    .max_by(|&x, &y| {
                        let bx = (col..d).map(|r| inv[r * d + x].abs()).fold(0.0, f64::max);
                        let by = (col..d).map(|r| inv[r * d + y].abs()).fold(0.0, f64::max);
                        bx.total_cmp(&by)
                    })
                    .ok_or_else(|| Error::Internal("simplex basis became singular".into()))?;
                let k = dense_pos[col];
                let out = self.basis[k];
                let v = self.beta[k];
                self.at_upper[out] =
                    self.upper[out].is_finite() && (self.upper[out] - v).abs() < (v - self.lower[out]).abs();
                self.row_of[out] = usize::MAX;
                slot[out] = usize::MAX;
                let q = self.init_basic[free_rows[a]];
                let coef = self.unit[q - ns].1;
                self.basis[k] = q;
                self.row_of[q] = k;
                self.at_upper[q] = false;
                slot[q] = col;
                for r in 0..d {
                    blk[r * d + col] = coef * inv[r * d + a];
                }
                p = best_row(&blk, col);
                if blk[p * d + col].abs() < PIVOT_TOL {
                    return Err(Error::Internal("simplex basis became singular".into()));
                }
            }
            let piv = blk[p * d + col];
            if p != col {
                for j in 0..d {
                    blk.swap(p * d + j, col * d + j);
                    inv.swap(p * d + j, col * d + j);
                }
            }
            for j in 0..d {
                blk[col * d + j] /= piv;
                inv[col * d + j] /= piv;
            }
            for r in 0..d {
                let f = blk[r * d + col];
                if r == col || f == 0.0 {
                    continue;
                }
                for j in 0..d {
                    blk[r * d + j] -= f * blk[col * d + j];
                    inv[r * d + j] -= f * inv[col * d + j];
                }
            }
        }
        // Row `col` of `inv` expresses dense basis position `dense_pos[col]`
        // in terms of the free rows.
        for (col, &k) in dense_pos.iter().enumerate() {
            let out = &mut self.a[k * cols..(k + 1) * cols];
            out.iter_mut().for_each(|x| *x = 0.0);
            for (a, &i) in free_rows.iter().enumerate() {
                let f = inv[col * d + a];
                if f != 0.0 {
                    for &(j, c) in &self.orig[i] {
                        out[j] += f * c;
                    }
                }
            }
            out.iter_mut().filter(|x| x.abs() < DROP_TOL).for_each(|x| *x = 0.0);
        }
        // A unit position solves its own row after the dense ones are known.
        let mut row = vec![0.0; cols];
        for i in 0..m {
            let k = claimed[i];
            if k == usize::MAX {
                continue;
            }
            let coef = self.unit[self.basis[k] - ns].1;
            row.iter_mut().for_each(|x| *x = 0.0);
            for &(j, c) in &self.orig[i] {
                row[j] += c;
                let s = slot[j];
                if s != usize::MAX {
                    let src = &self.a[dense_pos[s] * cols..(dense_pos[s] + 1) * cols];
                    for (dst, v) in row.iter_mut().zip(src) {
                        *dst -= c * v;
                    }
                }
            }
            for (dst, v) in self.a[k * cols..(k + 1) * cols].iter_mut().zip(&row) {
                *dst = if v.abs() < DROP_TOL { 0.0 } else { v / coef };
            }
        }
        for k in 0..m {
            let q = self.basis[k];
            for i in 0..m {
                self.a[i * cols + q] = if i == k { 1.0 } else { 0.0 };
            }
        }
        Ok(())
    }

    fn refactor(&mut self) -> Result<()> {
        self.reinvert()?;
        self.refresh();
        Ok(())
    }

    /// Before trusting an optimality test: a full refactor after many
    /// pivots, a cheaper refresh after a few.
    fn settle(&mut self) -> Result<()> {
        if self.since_refresh >= SETTLE_PIVOTS {
            self.refactor()
        } else {
            self.refresh();
            Ok(())
        }
    }

    /// Append rows to an optimal tableau. Each new slack enters the basis,
    /// possibly at an infeasible value for [`Tableau::dual_iterate`] to repair.
    fn add_rows(&mut self, cons: &[Constraint]) {
        let k = cons.len();
        let (m, cols) = (self.rows, self.cols);
        let (m2, cols2) = (m + k, cols + k);
        // Widen in place: rows only move forward, so go from the last one.
        let mut a = std::mem::take(&mut self.a);
        a.resize(m2 * cols2, 0.0);
        for i in (0..m).rev() {
            a.copy_within(i * cols..(i + 1) * cols, i * cols2);
            a[i * cols2 + cols..(i + 1) * cols2].iter_mut().for_each(|x| *x = 0.0);
        }
        a[m * cols2..].iter_mut().for_each(|x| *x = 0.0);
        for (t, con) in cons.iter().enumerate() {
            let sign = if con.relation == Relation::Ge { -1.0 } else { 1.0 };
            let slack = cols + t;
            let mut sparse: Vec<(usize, f64)> = con.coeffs.iter().map(|&(j, c)| (j, sign * c)).collect();
            sparse.push((slack, 1.0));
            let r = m + t;
            let (head, tail) = a.split_at_mut(r * cols2);
            let row = &mut tail[..cols2];
            for &(j, c) in &sparse {
                row[j] += c;
            }
            // Eliminate basic columns using their (already reduced) rows.
            for &(j, c) in &con.coeffs {
                let br = self.row_of[j];
                if br != usize::MAX {
                    let f = sign * c;
                    let src = &head[br * cols2..br * cols2 + cols];
                    for (dst, s) in row[..cols].iter_mut().zip(src) {
                        *dst -= f * s;
                    }
                }
            }
            for &j in &self.basis {
                row[j] = 0.0;
            }
            row.iter_mut().filter(|x| x.abs() < DROP_TOL).for_each(|x| *x = 0.0);
            self.orig.push(sparse);
            self.rhs.push(sign * con.rhs);
            self.init_basic.push(slack);
            self.unit.push((r, 1.0));
            self.basis.push(slack);
            self.lower.push(0.0);
            self.upper.push(if con.relation == Relation::Eq { 0.0 } else { f64::INFINITY });
            self.at_upper.push(false);
            self.cost.push(0.0);
            self.beta.push(0.0);
        }
        self.row_of.resize(cols2, usize::MAX);
        for t in 0..k {
            self.row_of[cols + t] = m + t;
        }
        self.a = a;
        self.rows = m2;
        self.cols = cols2;
        self.refresh();
    }

    /// Delete rows from `first` on whose slack is basic and strictly positive.
    /// Such a row's slack column is a unit vector of the basis, so removing
    /// the row and that column leaves the rest of `B^-1 A` unchanged.
    /// Returns, per starting row, whether it was kept.
    fn purge(&mut self, first: usize) -> Vec<bool> {
        let total = self.orig.len();
        let mut keep = vec![true; total];
        let mut drop_col = vec![false; self.cols];
        let mut drop_pos = vec![false; self.rows];
        for i in first..total {
            let s = self.init_basic[i];
            let k = self.row_of[s];
            if k != usize::MAX && self.beta[k] > CUT_TOL {
                keep[i] = false;
                drop_col[s] = true;
                drop_pos[k] = true;
            }
        }
        if keep.iter().all(|&k| k) {
            return keep;
        }
        let (old_cols, ns) = (self.cols, self.nstruct);
        let mut col_map = vec![usize::MAX; old_cols];
        let mut next = 0;
        for j in 0..old_cols {
            if !drop_col[j] {
                col_map[j] = next;
                next += 1;
            }
        }
        let new_cols = next;
        let mut row_map = vec![usize::MAX; total];
        let mut next = 0;
        for i in 0..total {
            if keep[i] {
                row_map[i] = next;
                next += 1;
            }
        }
        // Compact in place; every entry moves to an earlier position.
        let kept_cols: Vec<usize> = (0..old_cols).filter(|&j| !drop_col[j]).collect();
        let mut a = std::mem::take(&mut self.a);
        let mut beta = Vec::new();
        let mut basis = Vec::new();
        for k in 0..self.rows {
            if drop_pos[k] {
                continue;
            }
            let (src, dst) = (k * old_cols, basis.len() * new_cols);
            for (t, &j) in kept_cols.iter().enumerate() {
                a[dst + t] = a[src + j];
            }
            beta.push(self.beta[k]);
            basis.push(col_map[self.basis[k]]);
        }
        a.truncate(basis.len() * new_cols);
        let pick = |v: &[f64]| -> Vec<f64> { (0..old_cols).filter(|&j| !drop_col[j]).map(|j| v[j]).collect() };
        self.lower = pick(&self.lower);
        self.upper = pick(&self.upper);
        self.cost = pick(&self.cost);
        self.reduced = pick(&self.reduced);
        self.at_upper = (0..old_cols).filter(|&j| !drop_col[j]).map(|j| self.at_upper[j]).collect();
        self.unit = (ns..old_cols)
            .filter(|&j| !drop_col[j])
            .map(|j| {
                let (i, c) = self.unit[j - ns];
                (row_map[i], c)
            })
            .collect();
        let mut orig = Vec::with_capacity(next);
        let mut rhs = Vec::with_capacity(next);
        let mut init_basic = Vec::with_capacity(next);
        for i in 0..total {
            if keep[i] {
                orig.push(self.orig[i].iter().map(|&(j, c)| (col_map[j], c)).collect());
                rhs.push(self.rhs[i]);
                init_basic.push(col_map[self.init_basic[i]]);
            }
        }
        self.orig = orig;
        self.rhs = rhs;
        self.init_basic = init_basic;
        self.rows = basis.len();
        self.cols = new_cols;
        self.row_of = vec![usize::MAX; new_cols];
        for (k, &q) in basis.iter().enumerate() {
            self.row_of[q] = k;
        }
        self.basis = basis;
        self.beta = beta;
        self.a = a;
        keep
    }

    /// Dual simplex from a dual feasible basis. Ends primal feasible (then
    /// the caller reoptimizes with the primal method) or proves infeasibility.
    fn dual_iterate(&mut self, limit: usize) -> Result<LpStatus> {
        let mut degenerate = 0usize;
        loop {
            if self.since_refresh >= REFRESH_EVERY {
                self.refactor()?;
            }
            let bland = degenerate >= DUAL_DEGENERATE_RUN;
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows {
                let b = self.basis[i];
                let gap = if self.beta[i] < self.lower[b] - FEAS_TOL {
                    self.lower[b] - self.beta[i]
                } else if self.beta[i] > self.upper[b] + FEAS_TOL {
                    self.upper[b] - self.beta[i]
                } else {
                    continue;
                };
                let better = match leave {
                    None => true,
                    Some((r, _)) if bland => b < self.basis[r],
                    Some((_, g)) => gap.abs() > g.abs(),
                };
                if better {
                    leave = Some((i, gap));
                }
            }
            let Some((r, gap)) = leave else {
                if self.since_refresh > 0 {
                    self.settle()?;
                    continue;
                }
                return Ok(LpStatus::Optimal);
            };
            if self.pivots >= limit {
                return Ok(LpStatus::IterationLimit);
            }
            // The leaving value must move by `gap`; column j moving by
            // `dir * t` changes it by `-alpha * dir * t`.
            let cols = self.cols;
            let want = gap.signum();
            let eligible = |j: usize| -> Option<(f64, f64)> {
                if self.row_of[j] != usize::MAX || self.upper[j] - self.lower[j] <= 0.0 {
                    return None;
                }
                let alpha = self.a[r * cols + j];
                if alpha.abs() <= ALPHA_TOL {
                    return None;
                }
                let dir = if self.at_upper[j] { -1.0 } else { 1.0 };
                if -alpha * dir * want <= 0.0 {
                    return None;
                }
                Some((alpha, dir))
            };
            // Harris bound on the dual step; Bland mode uses the exact minimum
            // and the smallest index among ties.
            let slack = if bland { 0.0 } else { DUAL_TOL };
            let mut bound = f64::INFINITY;
            for j in 0..cols {
                if let Some((alpha, dir)) = eligible(j) {
                    let d = (self.reduced[j] * dir).max(0.0);
                    bound = bound.min((d + slack) / alpha.abs());
                }
            }
            if !bound.is_finite() {
                return Ok(LpStatus::Infeasible);
            }
            let mut pick: Option<(usize, f64, f64, f64)> = None;
            for j in 0..cols {
                if let Some((alpha, dir)) = eligible(j) {
                    let ratio = (self.reduced[j] * dir).max(0.0) / alpha.abs();
                    let ok = if bland { ratio <= bound + 1e-12 } else { ratio <= bound };
                    if ok && (bland && pick.is_none() || !bland && pick.is_none_or(|(_, a, _, _)| alpha.abs() > a)) {
                        pick = Some((j, alpha.abs(), dir, ratio));
                    }
                }
            }
            let (q, _, dir, ratio) = pick.expect("the bound came from an eligible column");
            if ratio <= 1e-12 {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            let alpha = self.a[r * cols + q];
            let t = gap / (-alpha * dir);
            let delta = dir * t;
            for i in 0..self.rows {
                let aiq = self.a[i * cols + q];
                if aiq != 0.0 {
                    self.beta[i] -= aiq * delta;
                }
            }
            let out = self.basis[r];
            let entering_value = self.value(q) + delta;
            self.at_upper[out] = gap < 0.0;
            self.row_of[out] = usize::MAX;
            self.basis[r] = q;
            self.row_of[q] = r;
            self.at_upper[q] = false;
            self.beta[r] = entering_value;
            self.pivot(r, q);
            self.pivots += 1;
            self.since_refresh += 1;
        }
    }

    /// Recompute basic values and reduced costs from the starting system,
    /// discarding drift accumulated by pivoting.
    fn refresh(&mut self) {
        let (m, cols) = (self.rows, self.cols);
        let mut r = self.rhs.clone();
        for (i, row) in self.orig.iter().enumerate() {
            for &(j, c) in row {
                if self.row_of[j] == usize::MAX {
                    r[i] -= c * self.value(j);
                }
            }
        }
        // Most right-hand sides and basic costs are zero; skip them.
        let live: Vec<(usize, f64)> = (0..m).filter(|&i| r[i] != 0.0).map(|i| (self.init_basic[i], r[i])).collect();
        let mut y = vec![0.0; m];
        for k in 0..m {
            let row = &self.a[k * cols..(k + 1) * cols];
            self.beta[k] = live.iter().map(|&(s, ri)| row[s] * ri).sum();
            let cb = self.cost[self.basis[k]];
            if cb != 0.0 {
                for (yi, &s) in y.iter_mut().zip(&self.init_basic) {
                    *yi += cb * row[s];
                }
            }
        }
        let mut reduced = self.cost.clone();
        for (i, row) in self.orig.iter().enumerate() {
            if y[i] != 0.0 {
                for &(j, c) in row {
                    reduced[j] -= y[i] * c;
                }
            }
        }
        for &b in &self.basis {
            reduced[b] = 0.0;
        }
        self.reduced = reduced;
        self.since_refresh = 0;
    }

    fn entering(&self, pricing: Pricing) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for j in 0..self.cols {
            if self.row_of[j] != usize::MAX || self.upper[j] - self.lower[j] <= 0.0 {
                continue;
            }
            let d = self.reduced[j];
            let dir = if !self.at_upper[j] && d < -DUAL_TOL {
                1.0
            } else if self.at_upper[j] && d > DUAL_TOL {
                -1.0
            } else {
                continue;
            };
            match pricing {
                Pricing::Bland => return Some((j, dir)),
                Pricing::Dantzig => {
                    if best.is_none_or(|(b, _)| d.abs() > self.reduced[b].abs()) {
                        best = Some((j, dir));
                    }
                }
            }
        }
        best
    }

    /// Two-pass (Harris) ratio test. Returns the step and the leaving row, or
    /// `None` for a bound flip of the entering column.
    fn ratio_test(&self, q: usize, dir: f64, pricing: Pricing) -> Result<(f64, Option<usize>)> {
        let cols = self.cols;
        let range = self.upper[q] - self.lower[q];
        let mut theta_max = range;
        for i in 0..self.rows {
            let alpha = self.a[i * cols + q] * dir;
            let b = self.basis[i];
            let t = if alpha > ALPHA_TOL {
                (self.beta[i] - self.lower[b] + HARRIS_TOL) / alpha
            } else if alpha < -ALPHA_TOL && self.upper[b].is_finite() {
                (self.upper[b] + HARRIS_TOL - self.beta[i]) / -alpha
            } else {
                continue;
            };
            theta_max = theta_max.min(t);
        }
        if !theta_max.is_finite() {
            return Err(Error::Internal("unbounded simplex direction".into()));
        }
        if range <= theta_max {
            return Ok((range, None));
        }
        let mut pick: Option<(usize, f64, f64)> = None;
        for i in 0..self.rows {
            let alpha = self.a[i * cols + q] * dir;
            let b = self.basis[i];
            let t = if alpha > ALPHA_TOL {
                (self.beta[i] - self.lower[b]) / alpha
            } else if alpha < -ALPHA_TOL && self.upper[b].is_finite() {
                (self.upper[b] - self.beta[i]) / -alpha
            } else {
                continue;
            };
            if t > theta_max {
                continue;
            }
            let better = match pick {
                None => true,
                Some((r, best_alpha, _)) => match pricing {
                    Pricing::Bland => b < self.basis[r],
                    Pricing::Dantzig => {
                        alpha.abs() > best_alpha || (alpha.abs() == best_alpha && b < self.basis[r])
                    }
                },
            };
            if better {
                pick = Some((i, alpha.abs(), t.max(0.0)));
            }
        }
        match pick {
            Some((r, _, t)) => Ok((t, Some(r))),
            None => Err(Error::Internal("ratio test found no pivot row".into())),
        }
    }

    fn iterate(&mut self, limit: usize) -> Result<LpStatus> {
        let mut degenerate = 0usize;
        loop {
            if self.since_refresh >= REFRESH_EVERY {
                self.refactor()?;
            }
            let pricing = if degenerate >= DEGENERATE_RUN { Pricing::Bland } else { Pricing::Dantzig };
            let Some((q, dir)) = self.entering(pricing) else {
                if self.since_refresh > 0 {
                    self.settle()?;
                    continue;
                }
                return Ok(LpStatus::Optimal);
            };
            if self.pivots >= limit {
                return Ok(LpStatus::IterationLimit);
            }
            let (step, leave) = self.ratio_test(q, dir, pricing)?;
            if step <= 1e-12 {
                degenerate += 1;
            } else {
                degenerate = 0;
            }

            // Move basic values along the edge.
            if step > 0.0 {
                for i in 0..self.rows {
                    let aiq = self.a[i * self.cols + q];
                    if aiq != 0.0 {
                        self.beta[i] -= dir * step * aiq;
                    }
                }
            }
            let entering_value = if self.at_upper[q] { self.upper[q] } else { self.lower[q] } + dir * step;

            match leave {
                None => {
                    self.at_upper[q] = !self.at_upper[q];
                }
                Some(r) => {
                    let out = self.basis[r];
                    let alpha = self.a[r * self.cols + q] * dir;
                    self.at_upper[out] = alpha < 0.0;
                    self.row_of[out] = usize::MAX;
                    self.basis[r] = q;
                    self.row_of[q] = r;
                    self.at_upper[q] = false;
                    self.beta[r] = entering_value;
                    self.pivot(r, q);
                }
            }
            self.pivots += 1;
            self.since_refresh += 1;
        }
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let cols = self.cols;
        let piv = self.a[r * cols + q];
        {
            let row = &mut self.a[r * cols..(r + 1) * cols];
            for x in row.iter_mut() {
                *x /= piv;
            }
            row[q] = 1.0;
        }
        let nz: Vec<usize> = (0..cols).filter(|&j| self.a[r * cols + j] != 0.0).collect();
        let pivot_row: Vec<f64> = nz.iter().map(|&j| self.a[r * cols + j]).collect();
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            let f = self.a[i * cols + q];
            if f == 0.0 {
                continue;
            }
            let row = &mut self.a[i * cols..(i + 1) * cols];
            for (&j, &pj) in nz.iter().zip(&pivot_row) {
                let v = row[j] - f * pj;
                row[j] = if v.abs() < DROP_TOL { 0.0 } else { v };
            }
            row[q] = 0.0;
        }
        let f = self.reduced[q];
        if f != 0.0 {
            for (&j, &pj) in nz.iter().zip(&pivot_row) {
                self.reduced[j] -= f * pj;
            }
            self.reduced[q] = 0.0;
        }
    }

    fn binding(&self, cons: &[Constraint]) -> Vec<Constraint> {
        cons.iter()
            .zip(&self.init_basic)
            .filter(|(_, &s)| self.row_of[s] == usize::MAX)
            .map(|(c, _)| c.clone())
            .collect()
    }

    fn structural_values(&self, p: &LpProblem) -> Vec<f64> {
        (0..p.var_count())
            .map(|j| self.value(j).clamp(p.lower[j], p.upper[j]))
            .collect()
    }
}

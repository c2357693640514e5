//! Min-max multicut: an LP relaxation, a heuristic rounding, the
//! covering/aggregation solver, and the constrained variant where every part
//! must hold a terminal.
//!
//! The relaxation for a measure `eta` and mass target `H` has `x(v)` per vertex
//! and `z(u,v)` per pair:
//!
//! ```text
//!   min  sum_E w(u,v) z(u,v)
//!   z(u,v) + z(v,w) >= z(u,w)
//!   |x(u) - x(v)| <= z(u,v) <= x(u) + x(v)
//!   z(s,t) >= x(s),  z(s,t) >= x(t)                 for each pair (s,t)
//!   sum eta(v) x(v) >= H
//!   x(v) = 0                                         if eta(v) > 2H
//!   sum_v eta(v) min{x(u), z(u,v)} >= (1 - 2H) x(u)  for each u
//! ```
//!
//! [`build_mc_lp`] writes the spreading rows with auxiliary `mu(u,v) <= x(u),
//! z(u,v)`. [`solve_mc_lp`] instead separates everything except the edge,
//! pair and mass rows lazily; a violated spreading row for `u` is cut by
//! `sum_{v in A} eta(v) x(u) + sum_{v not in A} eta(v) z(u,v) >= (1-2H) x(u)`
//! with `A = {v : x(u) <= z(u,v)}`. Both describe the same feasible region in
//! `(x, z)`.
//!
//! The rounding in [`heuristic_separator`] carries no approximation guarantee.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cover::{self, Aggregation, CoverageStats, CoveringConfig};
use crate::error::{Error, Result};
use crate::graph::{mask, pair_count, pair_index, Measure, MulticutInstance, Partition, SetFamily, VertexSet, TOL};
use crate::lp::{self, Constraint, LpProblem, LpStatus, CUT_TOL};
use crate::metric;

/// Upper end of the ball radius drawn by [`heuristic_separator`].
pub const THETA_MAX: f64 = 0.5;

/// Variable layout shared by the multicut LPs.
#[derive(Clone, Copy, Debug)]
pub struct McLayout {
    pub n: usize,
    /// Whether `mu` variables are present (only when `1 - 2H > 0`).
    pub spreading: bool,
}

impl McLayout {
    pub fn new(n: usize, h: f64) -> Self {
        McLayout { n, spreading: 1.0 - 2.0 * h > 0.0 }
    }

    pub fn x(&self, v: usize) -> usize {
        v
    }

    pub fn z(&self, u: usize, v: usize) -> usize {
        self.n + pair_index(self.n, u, v)
    }

    /// `mu(u,v)` for ordered `u != v`.
    pub fn mu(&self, u: usize, v: usize) -> usize {
        debug_assert!(self.spreading && u != v);
        self.n + pair_count(self.n) + u * (self.n - 1) + if v > u { v - 1 } else { v }
    }

    pub fn var_count(&self) -> usize {
        let base = self.n + pair_count(self.n);
        if self.spreading {
            base + self.n * self.n.saturating_sub(1)
        } else {
            base
        }
    }
}

fn check_h(h: f64) -> Result<()> {
    if !(h > 0.0 && h <= 1.0) {
        return Err(Error::InvalidH { h, total: 1.0 });
    }
    Ok(())
}

fn check_eta(mc: &MulticutInstance, eta: &Measure) -> Result<()> {
    if eta.len() != mc.n() {
        return Err(Error::InvalidInstance(format!("measure has {} entries for n = {}", eta.len(), mc.n())));
    }
    Ok(())
}

/// Rows present from the start in both LP forms: edge and pair rows, mass
/// row, heavy-vertex bounds and the objective.
fn core_lp(mc: &MulticutInstance, eta: &Measure, h: f64, layout: &McLayout) -> LpProblem {
    let n = mc.n();
    let mut p = LpProblem::new(layout.var_count());
    for &(u, v, w) in mc.edges() {
        let z = layout.z(u, v);
        p.add_objective(z, w);
        p.add_constraint(Constraint::le(vec![(layout.x(u), 1.0), (layout.x(v), -1.0), (z, -1.0)], 0.0));
        p.add_constraint(Constraint::le(vec![(layout.x(u), -1.0), (layout.x(v), 1.0), (z, -1.0)], 0.0));
    }
    for &(s, t) in mc.pairs() {
        let z = layout.z(s, t);
        p.add_constraint(Constraint::ge(vec![(layout.x(s), -1.0), (z, 1.0)], 0.0));
        p.add_constraint(Constraint::ge(vec![(layout.x(t), -1.0), (z, 1.0)], 0.0));
    }
    for v in 0..n {
        if eta.get(v) > 2.0 * h {
            p.set_bounds(layout.x(v), 0.0, 0.0);
        }
    }
    let mass: Vec<(usize, f64)> = (0..n).filter(|&v| eta.get(v) > 0.0).map(|v| (layout.x(v), eta.get(v))).collect();
    p.add_constraint(Constraint::ge(mass, h - TOL));
    p
}

fn abs_rows(layout: &McLayout, u: usize, v: usize) -> [Constraint; 3] {
    let (xu, xv, z) = (layout.x(u), layout.x(v), layout.z(u, v));
    [
        Constraint::le(vec![(xu, 1.0), (xv, -1.0), (z, -1.0)], 0.0),
        Constraint::le(vec![(xu, -1.0), (xv, 1.0), (z, -1.0)], 0.0),
        Constraint::le(vec![(xu, -1.0), (xv, -1.0), (z, 1.0)], 0.0),
    ]
}

/// The full relaxation with `mu` spreading rows; triangle rows are left to
/// separation.
pub fn build_mc_lp(mc: &MulticutInstance, eta: &Measure, h: f64) -> Result<LpProblem> {
    check_h(h)?;
    check_eta(mc, eta)?;
    let n = mc.n();
    let layout = McLayout::new(n, h);
    let mut p = core_lp(mc, eta, h, &layout);
    for u in 0..n {
        for v in u + 1..n {
            for row in abs_rows(&layout, u, v) {
                p.add_constraint(row);
            }
        }
    }
    if layout.spreading {
        for u in 0..n {
            let mut row = vec![(layout.x(u), -(1.0 - 2.0 * h))];
            for v in (0..n).filter(|&v| v != u) {
                let mu = layout.mu(u, v);
                p.add_constraint(Constraint::le(vec![(layout.x(u), -1.0), (mu, 1.0)], 0.0));
                p.add_constraint(Constraint::le(vec![(layout.z(u, v), -1.0), (mu, 1.0)], 0.0));
                if eta.get(v) > 0.0 {
                    row.push((mu, eta.get(v)));
                }
            }
            row.sort_by_key(|c| c.0);
            p.add_constraint(Constraint::ge(row, 0.0));
        }
    }
    Ok(p)
}

#[derive(Clone, Debug, PartialEq)]
pub struct McLpSolution {
    pub h: f64,
    pub x: Vec<f64>,
    /// Pair distances indexed by [`pair_index`].
    pub z: Vec<f64>,
    pub objective: f64,
    pub rounds: usize,
    pub cuts: usize,
}

impl McLpSolution {
    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn dist(&self, u: usize, v: usize) -> f64 {
        if u == v {
            0.0
        } else {
            self.z[pair_index(self.n(), u, v)]
        }
    }
}

/// Spreading slack `sum_v eta(v) min{x(u), z(u,v)} - (1 - 2H) x(u)`.
fn spreading_slack(eta: &Measure, h: f64, x: &[f64], dist: impl Fn(usize, usize) -> f64, u: usize) -> f64 {
    let lhs: f64 = (0..x.len()).filter(|&v| v != u).map(|v| eta.get(v) * x[u].min(dist(u, v))).sum();
    lhs - (1.0 - 2.0 * h) * x[u]
}

/// Violated triangle and distance rows; these do not depend on `eta` or `H`.
fn separate_static(n: usize, layout: &McLayout, vals: &[f64]) -> Vec<Constraint> {
    let mut cuts = metric::triangle_cuts(n, n, vals);
    for u in 0..n {
        for v in u + 1..n {
            for row in abs_rows(layout, u, v) {
                if row.violation(vals) > CUT_TOL {
                    cuts.push(row);
                }
            }
        }
    }
    cuts
}

fn separate_spreading(mc: &MulticutInstance, eta: &Measure, h: f64, layout: &McLayout, vals: &[f64]) -> Vec<Constraint> {
    let n = mc.n();
    let x = &vals[..n];
    let zv = |u: usize, v: usize| if u == v { 0.0 } else { vals[layout.z(u, v)] };
    let mut cuts = Vec::new();
    if 1.0 - 2.0 * h > 0.0 {
        for u in 0..n {
            if spreading_slack(eta, h, x, zv, u) >= -CUT_TOL {
                continue;
            }
            let mut x_coef = -(1.0 - 2.0 * h);
            let mut row = Vec::new();
            for v in (0..n).filter(|&v| v != u) {
                if x[u] <= zv(u, v) {
                    x_coef += eta.get(v);
                } else if eta.get(v) > 0.0 {
                    row.push((layout.z(u, v), eta.get(v)));
                }
            }
            row.push((layout.x(u), x_coef));
            row.sort_by_key(|c| c.0);
            cuts.push(Constraint::ge(row, 0.0));
        }
    }
    cuts
}

/// Solve the relaxation, separating triangle, distance and spreading rows
/// lazily. Infeasibility is reported as [`Error::Infeasible`].
pub fn solve_mc_lp(mc: &MulticutInstance, eta: &Measure, h: f64) -> Result<McLpSolution> {
    solve_mc_lp_pooled(mc, eta, h, &mut Vec::new())
}

/// [`solve_mc_lp`] starting from the triangle and distance rows in `pool`,
/// which is then replaced by the ones binding at the new optimum. Related
/// solves share a pool, so later ones need fewer separation rounds.
fn solve_mc_lp_pooled(mc: &MulticutInstance, eta: &Measure, h: f64, pool: &mut Vec<Constraint>) -> Result<McLpSolution> {
    check_h(h)?;
    check_eta(mc, eta)?;
    let n = mc.n();
    let layout = McLayout { n, spreading: false };
    let mut p = core_lp(mc, eta, h, &layout);
    let mut seen = pool.clone();
    for c in pool.iter() {
        p.add_constraint(c.clone());
    }
    let sol = lp::solve_lazy(&p, |vals| {
        let fixed = separate_static(n, &layout, vals);
        seen.extend(fixed.iter().filter(|c| c.violation(vals) > CUT_TOL).cloned());
        let mut cuts = fixed;
        cuts.extend(separate_spreading(mc, eta, h, &layout, vals));
        cuts
    })?;
    if sol.status == LpStatus::Infeasible {
        return Err(Error::Infeasible);
    }
    let sol = sol.require_optimal()?;
    *pool = sol.binding.iter().filter(|c| seen.contains(c)).cloned().collect();
    Ok(McLpSolution {
        h,
        x: sol.values[..n].to_vec(),
        z: sol.values[n..n + pair_count(n)].to_vec(),
        objective: sol.objective,
        rounds: sol.rounds,
        cuts: sol.cuts.len(),
    })
}

/// Largest violation of any relaxation constraint at `(x, z)`, spreading
/// rows evaluated with the true minimum.
pub fn mc_lp_violation(mc: &MulticutInstance, eta: &Measure, h: f64, x: &[f64], z: &[f64]) -> f64 {
    let n = mc.n();
    let d = |u: usize, v: usize| if u == v { 0.0 } else { z[pair_index(n, u, v)] };
    let mut worst = 0.0f64;
    for &val in x.iter().chain(z) {
        worst = worst.max(-val).max(val - 1.0);
    }
    worst = worst.max(metric::max_triangle_violation(n, z));
    for u in 0..n {
        for v in u + 1..n {
            worst = worst.max((x[u] - x[v]).abs() - d(u, v)).max(d(u, v) - x[u] - x[v]);
        }
    }
    for &(s, t) in mc.pairs() {
        worst = worst.max(x[s] - d(s, t)).max(x[t] - d(s, t));
    }
    let mass: f64 = (0..n).map(|v| eta.get(v) * x[v]).sum();
    worst = worst.max(h - mass);
    for v in 0..n {
        if eta.get(v) > 2.0 * h {
            worst = worst.max(x[v].abs());
        }
    }
    if 1.0 - 2.0 * h > 0.0 {
        for u in 0..n {
            worst = worst.max(-spreading_slack(eta, h, x, d, u));
        }
    }
    worst
}

/// Whether the 0/1 point of `s` (x its indicator, z its cut metric) is
/// feasible for the relaxation.
pub fn check_integral_feasible(mc: &MulticutInstance, eta: &Measure, h: f64, s: &[usize]) -> bool {
    let n = mc.n();
    let inside = mask(n, s);
    let x: Vec<f64> = inside.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
    let mut z = vec![0.0; pair_count(n)];
    for u in 0..n {
        for v in u + 1..n {
            if inside[u] != inside[v] {
                z[pair_index(n, u, v)] = 1.0;
            }
        }
    }
    mc_lp_violation(mc, eta, h, &x, &z) <= TOL
}

/// Grow balls of random radius in `(0, 1/2)` around the highest-`x`
/// unassigned vertex, evicting the lower-`x` end (larger id on ties) of any
/// pair caught in one ball, until the balls hold measure `H / 4` or no
/// vertex with positive `x` is left. The sets are disjoint and violate no pair.
pub fn heuristic_separator(sol: &McLpSolution, mc: &MulticutInstance, eta: &Measure, seed: u64) -> Result<SetFamily> {
    let n = mc.n();
    if sol.x.iter().all(|&x| x <= TOL) {
        return Err(Error::EmptyFamily("LP solution has x = 0 everywhere".into()));
    }
    let x = &sol.x;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| x[b].total_cmp(&x[a]).then(a.cmp(&b)));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assigned = vec![false; n];
    let mut sets = Vec::new();
    let mut mass = 0.0;
    while mass < sol.h / 4.0 - TOL {
        let Some(&center) = order.iter().find(|&&v| !assigned[v] && x[v] > TOL) else { break };
        let theta: f64 = rng.gen_range(0.0..THETA_MAX);
        let mut inside = vec![false; n];
        for v in 0..n {
            inside[v] = !assigned[v] && (v == center || sol.dist(center, v) <= theta);
        }
        for &(s, t) in mc.pairs() {
            if inside[s] && inside[t] {
                let evict = if (x[s] - x[t]).abs() <= TOL {
                    s.max(t)
                } else if x[s] < x[t] {
                    s
                } else {
                    t
                };
                inside[evict] = false;
            }
        }
        let ball: VertexSet = (0..n).filter(|&v| inside[v]).collect();
        for &v in &ball {
            assigned[v] = true;
        }
        mass += eta.mass(&ball);
        sets.push(ball);
    }
    Ok(SetFamily::new(sets))
}

/// Mass targets tried when the LP at `1/k` is infeasible: `2^t eta(u)` for
/// `t = 0..=ceil(log2 n)`, at least `tau` and at most one, ascending.
pub fn h_grid(eta: &Measure, tau: f64) -> Vec<f64> {
    let n = eta.len();
    let steps = (n.max(2) as f64).log2().ceil() as i32;
    let mut out: Vec<f64> = Vec::new();
    for &e in eta.values() {
        for t in 0..=steps {
            let h = e * 2f64.powi(t);
            if h >= tau - TOL && h <= 1.0 {
                out.push(h);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() <= TOL);
    out
}

/// One covering round of the multicut finder.
#[derive(Clone, Debug, PartialEq)]
pub struct McRound {
    pub h: f64,
    pub lp_objective: f64,
    pub sets: Vec<VertexSet>,
}

/// Solve the LP at `tau`, falling back to [`h_grid`] on infeasibility, and
/// round it with [`heuristic_separator`].
pub fn find_mc_family(mc: &MulticutInstance, eta: &Measure, tau: f64, seed: u64) -> Result<McRound> {
    find_mc_family_pooled(mc, eta, tau, seed, &mut Vec::new())
}

fn find_mc_family_pooled(
    mc: &MulticutInstance,
    eta: &Measure,
    tau: f64,
    seed: u64,
    pool: &mut Vec<Constraint>,
) -> Result<McRound> {
    let mut tried = vec![tau];
    tried.extend(h_grid(eta, tau).into_iter().filter(|&h| h > tau + TOL));
    for h in tried {
        match solve_mc_lp_pooled(mc, eta, h, pool) {
            Ok(sol) => {
                let fam = heuristic_separator(&sol, mc, eta, seed)?;
                return Ok(McRound { h, lp_objective: sol.objective, sets: fam.sets });
            }
            Err(Error::Infeasible) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::NoFeasibleSet(format!("multicut LP infeasible for every mass target >= {tau}")))
}

#[derive(Clone, Debug, PartialEq)]
pub struct McKRun {
    pub k: usize,
    pub coverage: Option<CoverageStats>,
    pub rounds: Vec<McRound>,
    /// Largest member boundary over the covering family.
    pub b: f64,
    pub max_boundary: Option<f64>,
    pub aggregation: Option<Aggregation>,
    pub constrained: Option<ConstrainedAggregation>,
    pub error: Option<String>,
}

impl McKRun {
    fn new(k: usize) -> Self {
        McKRun {
            k,
            coverage: None,
            rounds: Vec::new(),
            b: 0.0,
            max_boundary: None,
            aggregation: None,
            constrained: None,
            error: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct McReport {
    pub best_k: usize,
    pub max_boundary: f64,
    pub runs: Vec<McKRun>,
}

fn cover_family<F>(
    mc: &MulticutInstance,
    k: usize,
    seed: u64,
    run: &mut McKRun,
    pool: &mut Vec<Constraint>,
    mut post: F,
) -> Result<SetFamily>
where
    F: FnMut(SetFamily) -> Result<SetFamily>,
{
    let n = mc.n();
    let cfg = CoveringConfig::new(k, n);
    let (family, stats) = cover::covering(n, &cfg, |eta, h, round| {
        let r = find_mc_family_pooled(mc, eta, h, cover::derive_seed(seed, &[k as u64, round as u64 + 1]), pool)?;
        let fam = post(SetFamily::new(r.sets.clone()))?;
        run.rounds.push(McRound { sets: fam.sets.clone(), ..r });
        Ok(fam)
    })?;
    run.coverage = Some(stats);
    run.b = family.sets.iter().map(|s| mc.boundary(s)).fold(0.0, f64::max);
    Ok(family)
}

fn check_output(mc: &MulticutInstance, p: &Partition) -> Result<()> {
    crate::graph::validate_partition(mc.n(), &p.parts).map_err(Error::InvalidPartition)?;
    if let Some(part) = p.parts.iter().find(|part| mc.vio(part) > 0) {
        return Err(Error::Internal(format!("output part {part:?} holds a source-sink pair")));
    }
    Ok(())
}

/// Sweep `k` over `1..=n` (or only `k_override`): cover with the LP finder,
/// aggregate with `B` = the largest member boundary, keep the partition with
/// the smallest maximum boundary.
pub fn solve_multicut(mc: &MulticutInstance, seed: u64, k_override: Option<usize>) -> Result<(Partition, McReport)> {
    let n = mc.n();
    if n <= 1 || mc.pairs().is_empty() {
        let p = Partition::whole(n);
        let max_boundary = mc.max_boundary(&p);
        return Ok((p, McReport { best_k: 1, max_boundary, runs: Vec::new() }));
    }
    let ks = k_range(n, k_override)?;
    let mut best: Option<(f64, usize, Partition)> = None;
    let mut runs = Vec::new();
    let mut first_error = None;
    // Cuts binding at one optimum are valid for every k; carrying them over
    // spares each sweep step the cold separation rounds.
    let mut pool = Vec::new();
    for k in ks {
        let mut run = McKRun::new(k);
        let result = cover_family(mc, k, seed, &mut run, &mut pool, Ok).and_then(|family| {
            let agg = cover::aggregate(n, &family, run.b, |s| mc.boundary(s), cover::derive_seed(seed, &[k as u64]))?;
            let p = agg.partition.clone();
            run.aggregation = Some(agg);
            check_output(mc, &p)?;
            Ok(p)
        });
        match result {
            Ok(p) => {
                let cost = mc.max_boundary(&p);
                run.max_boundary = Some(cost);
                if best.as_ref().is_none_or(|(b, _, _)| cost < b - TOL) {
                    best = Some((cost, k, p));
                }
            }
            Err(e) => {
                run.error = Some(e.to_string());
                first_error.get_or_insert(e);
            }
        }
        runs.push(run);
    }
    match best {
        Some((max_boundary, best_k, p)) => Ok((p.canonical(), McReport { best_k, max_boundary, runs })),
        None => Err(first_error.unwrap_or_else(|| Error::Internal("no k evaluated".into()))),
    }
}

fn k_range(n: usize, k_override: Option<usize>) -> Result<Vec<usize>> {
    match k_override {
        Some(k) if k == 0 || k > n => Err(Error::InvalidInstance(format!("k = {k} outside 1..={n}"))),
        Some(k) => Ok(vec![k]),
        None => Ok((1..=n).collect()),
    }
}

/// `sqrt(min(2T, n) * Delta)`.
pub fn terminal_scale(mc: &MulticutInstance) -> f64 {
    let terminals = (2 * mc.pairs().len()).min(mc.n());
    ((terminals * mc.max_demand()) as f64).sqrt()
}

/// Largest possible size of a combined family of disjoint sets: each of the
/// `m (m - 1) / 2` member pairs needs its own source-sink pair, and there are
/// at most `N Delta / 2` of those with `N = min(2T, n)`, so `m (m - 1) <= N Delta`.
pub fn combined_size_bound(mc: &MulticutInstance) -> f64 {
    let terminals = (2 * mc.pairs().len()).min(mc.n());
    let nd = (terminals * mc.max_demand()) as f64;
    (1.0 + (1.0 + 4.0 * nd).sqrt()) / 2.0
}

fn union(a: &[usize], b: &[usize]) -> VertexSet {
    let mut out: VertexSet = a.iter().chain(b).copied().collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Merge the first pair of members (lowest indices) whose union violates no
/// pair, and repeat until no such pair remains. Members must be disjoint, as
/// the sets of one separator round are.
pub fn combine_phase(family: &SetFamily, mc: &MulticutInstance) -> Result<SetFamily> {
    if let Some(s) = family.sets.iter().find(|s| mc.vio(s) > 0) {
        return Err(Error::InvalidInstance(format!("family member {s:?} holds a source-sink pair")));
    }
    let mut seen = vec![false; mc.n()];
    for &v in family.sets.iter().flatten() {
        if v >= mc.n() {
            return Err(Error::OutOfRange { index: v, len: mc.n() });
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::InvalidInstance(format!("vertex {v} is in two family members")));
        }
    }
    let mut sets = family.sets.clone();
    'scan: loop {
        for i in 0..sets.len() {
            for j in i + 1..sets.len() {
                let merged = union(&sets[i], &sets[j]);
                if mc.vio(&merged) == 0 {
                    sets[i] = merged;
                    sets.remove(j);
                    continue 'scan;
                }
            }
        }
        break;
    }
    if !mc.pairs().is_empty() && sets.len() as f64 > combined_size_bound(mc) + TOL {
        return Err(Error::Internal(format!(
            "combined family has {} sets, above the bound {:.3}",
            sets.len(),
            combined_size_bound(mc)
        )));
    }
    Ok(SetFamily::new(sets))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstrainedAggregation {
    pub partition: Partition,
    /// Steps one and two; absent when there are no pairs.
    pub base: Option<Aggregation>,
    pub b_prime: f64,
    pub merges: usize,
    /// Non-terminal parts attached to terminal parts.
    pub attached: usize,
    /// Per-terminal-part attachment limit `ceil(2 sqrt(min(2T, n) Delta))`.
    pub capacity: usize,
}

/// Aggregate as for plain multicut, then merge cheap non-terminal parts while
/// their boundaries sum to at most `B'`, and attach the survivors round-robin
/// to the terminal parts.
pub fn aggregate_constrained(
    mc: &MulticutInstance,
    family: &SetFamily,
    b: f64,
    k: usize,
    seed: u64,
) -> Result<ConstrainedAggregation> {
    let n = mc.n();
    if mc.max_demand() == 0 {
        return Ok(ConstrainedAggregation {
            partition: Partition::whole(n),
            base: None,
            b_prime: 2.0 * b,
            merges: 0,
            attached: 0,
            capacity: 0,
        });
    }
    let base = cover::aggregate(n, family, b, |s| mc.boundary(s), seed)?;
    let scale = terminal_scale(mc);
    let total: f64 = base.partition.parts.iter().map(|p| mc.boundary(p)).sum();
    let b_prime = (total / (k.max(1) as f64 * scale)).max(2.0 * b);

    let terminal = mc.is_terminal();
    let is_terminal_part = |p: &[usize]| p.iter().any(|&v| terminal[v]);
    let mut parts: Vec<VertexSet> = base.partition.parts.clone();
    let mut cost: Vec<f64> = parts.iter().map(|p| mc.boundary(p)).collect();
    let mut merges = 0;
    'scan: loop {
        for i in 0..parts.len() {
            if parts[i].is_empty() || is_terminal_part(&parts[i]) {
                continue;
            }
            for j in i + 1..parts.len() {
                if parts[j].is_empty() || is_terminal_part(&parts[j]) || cost[i] + cost[j] > b_prime + TOL {
                    continue;
                }
                let moved = std::mem::take(&mut parts[j]);
                parts[i] = union(&parts[i], &moved);
                cost[i] = mc.boundary(&parts[i]);
                cost[j] = 0.0;
                merges += 1;
                continue 'scan;
            }
        }
        break;
    }

    let capacity = (2.0 * scale - TOL).ceil() as usize;
    let (mut hosts, leftovers): (Vec<VertexSet>, Vec<VertexSet>) =
        parts.into_iter().filter(|p| !p.is_empty()).partition(|p| is_terminal_part(p));
    if leftovers.len() > capacity * hosts.len() {
        return Err(Error::Capacity { leftover: leftovers.len(), capacity: capacity * hosts.len() });
    }
    let attached = leftovers.len();
    for (i, part) in leftovers.into_iter().enumerate() {
        let h = i % hosts.len();
        hosts[h] = union(&hosts[h], &part);
    }
    Ok(ConstrainedAggregation {
        partition: Partition { parts: hosts },
        base: Some(base),
        b_prime,
        merges,
        attached,
        capacity,
    })
}

/// Constrained multicut for a given number of parts `k`: the covering finder
/// rounds the LP and combines the rounded sets, aggregation then leaves a
/// terminal in every part.
pub fn solve_constrained_multicut(mc: &MulticutInstance, k: usize, seed: u64) -> Result<(Partition, McReport)> {
    let n = mc.n();
    if n <= 1 || mc.pairs().is_empty() {
        let p = Partition::whole(n);
        let max_boundary = mc.max_boundary(&p);
        return Ok((p, McReport { best_k: k, max_boundary, runs: Vec::new() }));
    }
    let k = k_range(n, Some(k))?[0];
    let mut run = McKRun::new(k);
    let result = cover_family(mc, k, seed, &mut run, &mut Vec::new(), |fam| combine_phase(&fam, mc)).and_then(|family| {
        let agg = aggregate_constrained(mc, &family, run.b, k, cover::derive_seed(seed, &[k as u64]))?;
        let p = agg.partition.clone();
        run.constrained = Some(agg);
        check_output(mc, &p)?;
        let terminal = mc.is_terminal();
        if let Some(part) = p.parts.iter().find(|part| !part.iter().any(|&v| terminal[v])) {
            return Err(Error::Internal(format!("output part {part:?} has no terminal")));
        }
        Ok(p)
    });
    match result {
        Ok(p) => {
            let max_boundary = mc.max_boundary(&p);
            run.max_boundary = Some(max_boundary);
            Ok((p.canonical(), McReport { best_k: k, max_boundary, runs: vec![run] }))
        }
        Err(e) => Err(e),
    }
}

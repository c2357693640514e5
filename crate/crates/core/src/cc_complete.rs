//! Min-max correlation clustering on complete graphs.
//!
//! For a measure `eta` and mass target `H`, one LP is solved per guessed
//! vertex `u` (pinned to `x(u) = 1`). The relaxation has a membership value
//! `x(v)` per vertex, a distance `d(u,v)` per pair, and minimizes
//!
//! ```text
//!   sum_{E+} d(u,v) + sum_{E-} (max{x(u), x(v)} - d(u,v))
//! ```
//!
//! subject to the metric triangle inequalities (generated lazily),
//! `|x(u) - x(v)| <= d(u,v) <= x(u) + x(v)`, `x(u) + x(v) + d(u,v) <= 2` and
//! `sum eta(v) x(v) >= H`. Each `max` becomes an auxiliary `m(u,v)` with
//! `m >= x(u)`, `m >= x(v)`; it has objective coefficient +1, so it is tight at
//! any optimum.
//!
//! Taken literally, a negative-edge term can go below zero (`x = 1/2` at both
//! ends with `d = 1` gives `-1/2`), and then the ball rounding is no longer
//! within 7 of the LP value. [`Relaxation::Clamped`], the default, adds
//! `m(u,v) >= d(u,v)`, which every integral point satisfies, so each term is
//! nonnegative. [`Relaxation::Literal`] keeps the unclamped form.
//!
//! Guesses are sorted by LP value, the shortest prefix reaching mass `H` is
//! kept, and each kept guess is rounded by a radius-2/7 ball. The resulting
//! family feeds covering and aggregation in [`solve_cc_complete`].

use crate::cover::{self, Aggregation, CoverageStats, CoveringConfig};
use crate::error::{Error, Result};
use crate::graph::{pair_count, pair_index, Measure, Partition, SetFamily, Sign, SignedGraph, VertexSet, TOL};
use crate::lp::{self, Constraint, LpProblem};
use crate::metric;

/// Ball radius used by [`round_ball`].
pub const BALL_RADIUS: f64 = 2.0 / 7.0;

/// Variable layout of the per-guess LP.
#[derive(Clone, Debug)]
pub struct CcLayout {
    pub n: usize,
    /// Negative pairs `(u, v)`, `u < v`, in edge order; `m` variables follow this order.
    pub negative: Vec<(usize, usize)>,
}

impl CcLayout {
    pub fn new(g: &SignedGraph) -> Self {
        CcLayout { n: g.n(), negative: g.negative_edges().map(|e| (e.u, e.v)).collect() }
    }

    pub fn x(&self, v: usize) -> usize {
        v
    }

    pub fn d(&self, u: usize, v: usize) -> usize {
        self.n + pair_index(self.n, u, v)
    }

    pub fn m(&self, e: usize) -> usize {
        self.n + pair_count(self.n) + e
    }

    pub fn var_count(&self) -> usize {
        self.n + pair_count(self.n) + self.negative.len()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Relaxation {
    /// Negative-edge terms bounded below by zero.
    #[default]
    Clamped,
    Literal,
}

/// The per-guess relaxation without triangle rows (those are separated lazily).
pub fn build_cc_lp(g: &SignedGraph, eta: &Measure, h: f64, guess: usize) -> Result<LpProblem> {
    build_cc_lp_with(g, eta, h, guess, Relaxation::default())
}

pub fn build_cc_lp_with(g: &SignedGraph, eta: &Measure, h: f64, guess: usize, relaxation: Relaxation) -> Result<LpProblem> {
    if !g.is_complete() {
        return Err(Error::NotComplete);
    }
    let n = g.n();
    if guess >= n {
        return Err(Error::OutOfRange { index: guess, len: n });
    }
    if eta.len() != n {
        return Err(Error::InvalidInstance(format!("measure has {} entries for n = {n}", eta.len())));
    }
    let layout = CcLayout::new(g);
    let mut p = LpProblem::new(layout.var_count());
    p.set_bounds(layout.x(guess), 1.0, 1.0);

    let mut neg_index = 0;
    for e in g.edges() {
        let (u, v) = (e.u, e.v);
        let (xu, xv, d) = (layout.x(u), layout.x(v), layout.d(u, v));
        match e.sign {
            Sign::Pos => p.add_objective(d, e.weight),
            Sign::Neg => {
                let m = layout.m(neg_index);
                neg_index += 1;
                p.add_objective(m, e.weight);
                p.add_objective(d, -e.weight);
                p.add_constraint(Constraint::ge(vec![(xu, -1.0), (m, 1.0)], 0.0));
                p.add_constraint(Constraint::ge(vec![(xv, -1.0), (m, 1.0)], 0.0));
                if relaxation == Relaxation::Clamped {
                    p.add_constraint(Constraint::ge(vec![(d, -1.0), (m, 1.0)], 0.0));
                }
            }
        }
        p.add_constraint(Constraint::le(vec![(xu, 1.0), (xv, -1.0), (d, -1.0)], 0.0));
        p.add_constraint(Constraint::le(vec![(xu, -1.0), (xv, 1.0), (d, -1.0)], 0.0));
        p.add_constraint(Constraint::le(vec![(xu, -1.0), (xv, -1.0), (d, 1.0)], 0.0));
        p.add_constraint(Constraint::le(vec![(xu, 1.0), (xv, 1.0), (d, 1.0)], 2.0));
    }
    let mass: Vec<(usize, f64)> = (0..n).filter(|&v| eta.get(v) > 0.0).map(|v| (layout.x(v), eta.get(v))).collect();
    p.add_constraint(Constraint::ge(mass, h - TOL));
    Ok(p)
}

/// Optimal fractional solution for one guess.
#[derive(Clone, Debug, PartialEq)]
pub struct GuessSolution {
    pub guess: usize,
    pub objective: f64,
    pub x: Vec<f64>,
    /// Pair distances indexed by [`pair_index`].
    pub d: Vec<f64>,
    /// Linearized max terms, one per negative edge.
    pub m: Vec<f64>,
}

impl GuessSolution {
    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn dist(&self, u: usize, v: usize) -> f64 {
        if u == v {
            0.0
        } else {
            self.d[pair_index(self.n(), u, v)]
        }
    }
}

/// Solve the guess-`u` relaxation with lazily separated triangle inequalities.
pub fn solve_guess(g: &SignedGraph, eta: &Measure, h: f64, guess: usize) -> Result<GuessSolution> {
    solve_guess_with(g, eta, h, guess, Relaxation::default())
}

pub fn solve_guess_with(
    g: &SignedGraph,
    eta: &Measure,
    h: f64,
    guess: usize,
    relaxation: Relaxation,
) -> Result<GuessSolution> {
    let total = eta.total();
    if total < h - TOL {
        return Err(Error::InvalidH { h, total });
    }
    let p = build_cc_lp_with(g, eta, h, guess, relaxation)?;
    let n = g.n();
    let sol = lp::solve_lazy(&p, |vals| metric::triangle_cuts(n, n, vals))?;
    let sol = match sol.require_optimal() {
        Err(Error::Infeasible) => return Err(Error::InvalidH { h, total }),
        other => other?,
    };
    let layout = CcLayout::new(g);
    let pairs = pair_count(n);
    Ok(GuessSolution {
        guess,
        objective: sol.objective,
        x: sol.values[..n].to_vec(),
        d: sol.values[n..n + pairs].to_vec(),
        m: sol.values[n + pairs..layout.var_count()].to_vec(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GammaSelection {
    /// Guesses sorted by non-decreasing LP value, ties by vertex id.
    pub order: Vec<usize>,
    /// LP values in `order`.
    pub objectives: Vec<f64>,
    /// One-based length of the kept prefix.
    pub lambda: usize,
    pub gamma: Vec<usize>,
}

/// Sort guesses by LP value and keep the shortest prefix whose measure reaches `h`.
pub fn select_gamma(solutions: &[GuessSolution], eta: &Measure, h: f64) -> Result<GammaSelection> {
    let mut idx: Vec<usize> = (0..solutions.len()).collect();
    // Values are compared on a 1e-9 grid so numerically equal LP values tie.
    let key = |s: &GuessSolution| (s.objective / TOL).round() as i64;
    idx.sort_by(|&a, &b| {
        key(&solutions[a])
            .cmp(&key(&solutions[b]))
            .then(solutions[a].guess.cmp(&solutions[b].guess))
    });
    let order: Vec<usize> = idx.iter().map(|&i| solutions[i].guess).collect();
    let objectives: Vec<f64> = idx.iter().map(|&i| solutions[i].objective).collect();
    let mut prefix = 0.0;
    for (t, &u) in order.iter().enumerate() {
        prefix += eta.get(u);
        if prefix >= h - TOL {
            return Ok(GammaSelection { gamma: order[..=t].to_vec(), lambda: t + 1, order, objectives });
        }
    }
    Err(Error::InvalidH { h, total: prefix })
}

/// Radius-2/7 ball rounding around the guessed vertex.
///
/// With `T` the other vertices within distance 2/7, returns `{u}` when the
/// distances into `T` sum to at least `|T| / 7` (an empty `T` included), and
/// `{u} + T` otherwise.
pub fn round_ball(sol: &GuessSolution) -> VertexSet {
    let u = sol.guess;
    let ball: Vec<usize> = (0..sol.n()).filter(|&w| w != u && sol.dist(u, w) <= BALL_RADIUS + TOL).collect();
    let spread: f64 = ball.iter().map(|&w| sol.dist(u, w)).sum();
    if spread >= ball.len() as f64 / 7.0 - TOL {
        vec![u]
    } else {
        let mut set = ball;
        set.push(u);
        set.sort_unstable();
        set
    }
}

/// Everything computed by one call of the family generator.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyTrace {
    pub h: f64,
    pub eta: Measure,
    /// One solution per vertex, indexed by guess.
    pub solutions: Vec<GuessSolution>,
    pub selection: GammaSelection,
    /// Rounded set for each member of `selection.gamma`, in that order.
    pub sets: Vec<VertexSet>,
    /// Standalone disagreement of each set.
    pub set_costs: Vec<f64>,
}

impl FamilyTrace {
    pub fn family(&self) -> SetFamily {
        SetFamily::new(self.sets.clone())
    }

    /// Largest `cost(S_i) - 7 o_i` over the family; positive means the
    /// per-guess bound failed.
    pub fn worst_seven_excess(&self) -> f64 {
        self.selection
            .gamma
            .iter()
            .zip(&self.set_costs)
            .map(|(&u, &c)| c - 7.0 * self.solutions[u].objective)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Solve every guess, select the prefix and round each kept guess.
pub fn find_cluster_family_traced(g: &SignedGraph, eta: &Measure, h: f64) -> Result<FamilyTrace> {
    find_cluster_family_with(g, eta, h, Relaxation::default())
}

pub fn find_cluster_family_with(g: &SignedGraph, eta: &Measure, h: f64, relaxation: Relaxation) -> Result<FamilyTrace> {
    let solutions =
        (0..g.n()).map(|u| solve_guess_with(g, eta, h, u, relaxation)).collect::<Result<Vec<_>>>()?;
    let selection = select_gamma(&solutions, eta, h)?;
    let sets: Vec<VertexSet> = selection.gamma.iter().map(|&u| round_ball(&solutions[u])).collect();
    let set_costs = sets.iter().map(|s| g.set_cost(s)).collect();
    Ok(FamilyTrace { h, eta: eta.clone(), solutions, selection, sets, set_costs })
}

pub fn find_cluster_family(g: &SignedGraph, eta: &Measure, h: f64) -> Result<SetFamily> {
    Ok(find_cluster_family_traced(g, eta, h)?.family())
}

/// Result of one value of `k` in the sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct KRun {
    pub k: usize,
    pub coverage: Option<CoverageStats>,
    /// Largest standalone cost over the covering family.
    pub b: f64,
    pub max_cost: Option<f64>,
    pub aggregation: Option<Aggregation>,
    /// Per-round traces, kept only when tracing is requested.
    pub traces: Vec<FamilyTrace>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CcReport {
    pub best_k: usize,
    pub max_cost: f64,
    pub runs: Vec<KRun>,
}

/// Sweep `k` over `1..=n` (or only `k_override`), cover with mass `1/k`,
/// aggregate with `B` = the largest member cost, and keep the clustering with
/// the smallest maximum disagreement.
pub fn solve_cc_complete(g: &SignedGraph, seed: u64, k_override: Option<usize>) -> Result<(Partition, CcReport)> {
    solve_cc_complete_with(g, seed, k_override, CcOptions::default())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CcOptions {
    pub relaxation: Relaxation,
    /// Keep every LP solution in the report.
    pub trace: bool,
}

/// As [`solve_cc_complete`], keeping every LP solution in the report.
pub fn solve_cc_complete_traced(
    g: &SignedGraph,
    seed: u64,
    k_override: Option<usize>,
) -> Result<(Partition, CcReport)> {
    solve_cc_complete_with(g, seed, k_override, CcOptions { trace: true, ..CcOptions::default() })
}

pub fn solve_cc_complete_with(
    g: &SignedGraph,
    seed: u64,
    k_override: Option<usize>,
    opts: CcOptions,
) -> Result<(Partition, CcReport)> {
    if !g.is_complete() {
        return Err(Error::NotComplete);
    }
    let n = g.n();
    if n <= 1 {
        let p = Partition::whole(n);
        return Ok((p, CcReport { best_k: 1, max_cost: 0.0, runs: Vec::new() }));
    }
    let ks: Vec<usize> = match k_override {
        Some(k) if k == 0 || k > n => {
            return Err(Error::InvalidInstance(format!("k = {k} outside 1..={n}")));
        }
        Some(k) => vec![k],
        None => (1..=n).collect(),
    };

    let mut best: Option<(f64, usize, Partition)> = None;
    let mut runs = Vec::new();
    let mut first_error = None;
    for k in ks {
        let mut run = KRun { k, coverage: None, b: 0.0, max_cost: None, aggregation: None, traces: Vec::new(), error: None };
        match run_k(g, seed, k, opts, &mut run) {
            Ok(p) => {
                let cost = crate::graph::max_disagreement(g, &p);
                run.max_cost = Some(cost);
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
        Some((max_cost, best_k, p)) => Ok((p.canonical(), CcReport { best_k, max_cost, runs })),
        None => Err(first_error.unwrap_or_else(|| Error::Internal("no k evaluated".into()))),
    }
}

fn run_k(g: &SignedGraph, seed: u64, k: usize, opts: CcOptions, run: &mut KRun) -> Result<Partition> {
    let n = g.n();
    let cfg = CoveringConfig::new(k, n);
    let (family, stats) = cover::covering(n, &cfg, |eta, h, _round| {
        let t = find_cluster_family_with(g, eta, h, opts.relaxation)?;
        let fam = t.family();
        if opts.trace {
            run.traces.push(t);
        }
        Ok(fam)
    })?;
    run.coverage = Some(stats);
    let b = family.sets.iter().map(|s| g.set_cost(s)).fold(0.0, f64::max);
    run.b = b;
    let agg = cover::aggregate(n, &family, b, |s| g.set_cost(s), cover::derive_seed(seed, &[k as u64]))?;
    let p = agg.partition.clone();
    run.aggregation = Some(agg);
    Ok(p)
}

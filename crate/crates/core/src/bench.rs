//! Fixed benchmark suites with a stable CSV report.
//!
//! Columns, in order:
//!
//! | column      | meaning                                                  |
//! |-------------|----------------------------------------------------------|
//! | `suite`     | `small-cc` or `small-mc`                                 |
//! | `index`     | position of the instance in the suite                    |
//! | `kind`      | generator and parameters                                 |
//! | `n`         | vertex count                                             |
//! | `seed`      | instance seed (also the solver seed)                     |
//! | `heuristic` | maximum cluster or part cost of the solver output        |
//! | `opt`       | exact optimum, blank when `n` exceeds the oracle limit   |
//! | `ratio`     | `heuristic / opt`; `1` when both are 0, `inf` when only `opt` is |
//! | `lp_bound`  | an LP lower bound on `opt` (see [`cc_lp_bound`], [`mc_lp_bound`]) |
//! | `wall_ms`   | solver wall time, blank unless timing was requested      |
//!
//! Without timing the report is a pure function of the suite and seed.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use crate::cc_complete::{self, solve_guess};
use crate::cover::derive_seed;
use crate::error::{Error, Result};
use crate::gen;
use crate::graph::{max_disagreement, Measure, MulticutInstance, SignedGraph};
use crate::lp::{self, Constraint, LpProblem};
use crate::multicut;
use crate::oracle::{self, MAX_PARTITION_N};

pub const CSV_HEADER: &str = "suite,index,kind,n,seed,heuristic,opt,ratio,lp_bound,wall_ms";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    SmallCc,
    SmallMc,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::SmallCc => "small-cc",
            Suite::SmallMc => "small-mc",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "small-cc" => Ok(Suite::SmallCc),
            "small-mc" => Ok(Suite::SmallMc),
            other => Err(Error::InvalidInstance(format!("unknown suite `{other}` (small-cc, small-mc)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BenchInstance {
    Cc(SignedGraph),
    Mc(MulticutInstance),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchCase {
    pub kind: String,
    pub seed: u64,
    pub instance: BenchInstance,
}

/// The suite's instances, each seeded from `seed` and its index.
pub fn cases(suite: Suite, seed: u64) -> Result<Vec<BenchCase>> {
    let mut out = Vec::new();
    match suite {
        Suite::SmallCc => {
            for n in 5..=8 {
                for p in [0.2, 0.5, 0.8] {
                    let s = derive_seed(seed, &[out.len() as u64]);
                    let g = gen::random_signed(n, p, s)?;
                    out.push(BenchCase { kind: format!("random-signed {n} {p}"), seed: s, instance: BenchInstance::Cc(g) });
                }
                let s = derive_seed(seed, &[out.len() as u64]);
                let g = gen::planted(n, 2, 0.1, s)?;
                out.push(BenchCase { kind: format!("planted {n} 2 0.1"), seed: s, instance: BenchInstance::Cc(g) });
            }
        }
        Suite::SmallMc => {
            for (r, c, t) in [(2, 2, 1), (2, 3, 2), (2, 4, 2), (3, 3, 2), (3, 3, 3), (3, 4, 3)] {
                let s = derive_seed(seed, &[out.len() as u64]);
                let mc = gen::grid_mc(r, c, t, s)?;
                out.push(BenchCase { kind: format!("grid-mc {r} {c} {t}"), seed: s, instance: BenchInstance::Mc(mc) });
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub suite: Suite,
    pub index: usize,
    pub kind: String,
    pub n: usize,
    pub seed: u64,
    pub heuristic: f64,
    pub opt: Option<f64>,
    pub lp_bound: f64,
    pub wall_ms: Option<f64>,
}

impl BenchRow {
    pub fn ratio(&self) -> Option<f64> {
        let opt = self.opt?;
        Some(if opt > 0.0 {
            self.heuristic / opt
        } else if self.heuristic > 0.0 {
            f64::INFINITY
        } else {
            1.0
        })
    }
}

/// Largest per-vertex LP value at uniform measure and `H = 1/n`. Each is at
/// most the cost of the optimal cluster holding that vertex.
pub fn cc_lp_bound(g: &SignedGraph) -> Result<f64> {
    let n = g.n();
    if n == 0 {
        return Ok(0.0);
    }
    let eta = Measure::uniform(n);
    let mut best = 0.0f64;
    for v in 0..n {
        best = best.max(solve_guess(g, &eta, 1.0 / n as f64, v)?.objective);
    }
    Ok(best)
}

/// Largest fractional `s-t` cut over the pairs: the part holding `s` must cut
/// at least that much.
pub fn mc_lp_bound(mc: &MulticutInstance) -> Result<f64> {
    let n = mc.n();
    let mut best = 0.0f64;
    for &(s, t) in mc.pairs() {
        let mut p = LpProblem::new(n + mc.edges().len());
        p.set_bounds(s, 0.0, 0.0);
        p.set_bounds(t, 1.0, 1.0);
        for (e, &(u, v, w)) in mc.edges().iter().enumerate() {
            let y = n + e;
            p.add_objective(y, w);
            p.add_constraint(Constraint::ge(vec![(y, 1.0), (u, -1.0), (v, 1.0)], 0.0));
            p.add_constraint(Constraint::ge(vec![(y, 1.0), (u, 1.0), (v, -1.0)], 0.0));
        }
        let sol = lp::solve(&p)?.require_optimal()?;
        best = best.max(sol.objective);
    }
    Ok(best)
}

fn run_case(case: &BenchCase) -> Result<(usize, f64, Option<f64>, f64, f64)> {
    let start = Instant::now();
    match &case.instance {
        BenchInstance::Cc(g) => {
            let (c, _) = cc_complete::solve_cc_complete(g, case.seed, None)?;
            let wall = start.elapsed().as_secs_f64() * 1e3;
            let opt = if g.n() <= MAX_PARTITION_N { Some(oracle::exact_cc(g)?.0) } else { None };
            Ok((g.n(), max_disagreement(g, &c), opt, cc_lp_bound(g)?, wall))
        }
        BenchInstance::Mc(mc) => {
            let (_, report) = multicut::solve_multicut(mc, case.seed, None)?;
            let wall = start.elapsed().as_secs_f64() * 1e3;
            let opt = if mc.n() <= MAX_PARTITION_N { Some(oracle::exact_multicut(mc)?.0) } else { None };
            Ok((mc.n(), report.max_boundary, opt, mc_lp_bound(mc)?, wall))
        }
    }
}

pub fn run_bench(suite: Suite, seed: u64, timing: bool) -> Result<Vec<BenchRow>> {
    cases(suite, seed)?
        .into_iter()
        .enumerate()
        .map(|(index, case)| {
            let (n, heuristic, opt, lp_bound, wall) = run_case(&case)?;
            Ok(BenchRow {
                suite,
                index,
                kind: case.kind,
                n,
                seed: case.seed,
                heuristic,
                opt,
                lp_bound,
                wall_ms: timing.then_some(wall),
            })
        })
        .collect()
}

fn opt_cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{}",
            r.suite.name(),
            r.index,
            r.kind,
            r.n,
            r.seed,
            r.heuristic,
            opt_cell(r.opt),
            opt_cell(r.ratio()),
            r.lp_bound,
            r.wall_ms.map(|w| format!("{w:.3}")).unwrap_or_default()
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in [Suite::SmallCc, Suite::SmallMc] {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("big".parse::<Suite>().is_err());
    }

    #[test]
    fn cases_are_seeded() {
        let a = cases(Suite::SmallCc, 1).unwrap();
        assert_eq!(a, cases(Suite::SmallCc, 1).unwrap());
        assert_ne!(a, cases(Suite::SmallCc, 2).unwrap());
        assert_eq!(a.len(), 16);
        assert_eq!(cases(Suite::SmallMc, 1).unwrap().len(), 6);
    }

    #[test]
    fn lp_bounds_are_below_optimum() {
        let k3 = SignedGraph::complete(3, &[(1, 2)]).unwrap();
        let b = cc_lp_bound(&k3).unwrap();
        assert!(b > 0.0 && b <= 1.0 + 1e-9);

        let cycle =
            MulticutInstance::new(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)], [(0, 2), (1, 3)]).unwrap();
        assert!((mc_lp_bound(&cycle).unwrap() - 2.0).abs() < 1e-9);
        let none = MulticutInstance::new(2, [(0, 1, 1.0)], []).unwrap();
        assert_eq!(mc_lp_bound(&none).unwrap(), 0.0);
    }

    #[test]
    fn csv_blank_cells() {
        let row = BenchRow {
            suite: Suite::SmallMc,
            index: 0,
            kind: "grid-mc 2 2 1".into(),
            n: 4,
            seed: 7,
            heuristic: 2.0,
            opt: None,
            lp_bound: 1.5,
            wall_ms: None,
        };
        assert_eq!(to_csv(&[row]), format!("{CSV_HEADER}\nsmall-mc,0,grid-mc 2 2 1,4,7,2,,,1.5,\n"));
    }
}

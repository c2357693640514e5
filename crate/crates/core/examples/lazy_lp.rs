//! The simplex with lazily separated constraints.
//!
//! Minimizes the distance sum on a 4-cycle metric where two opposite pairs
//! must be at distance 1, adding triangle inequalities only when violated.

use minmax_cc::graph::pair_index;
use minmax_cc::lp::{solve_lazy, LpProblem};
use minmax_cc::metric::triangle_cuts;

fn main() -> minmax_cc::Result<()> {
    let n = 4;
    let m = n * (n - 1) / 2;
    let mut p = LpProblem::new(m);
    for j in 0..m {
        p.set_bounds(j, 0.0, 1.0);
    }
    for (u, v) in [(0, 1), (1, 2), (2, 3), (0, 3)] {
        p.add_objective(pair_index(n, u, v), 1.0);
    }
    p.set_bounds(pair_index(n, 0, 2), 1.0, 1.0);
    p.set_bounds(pair_index(n, 1, 3), 1.0, 1.0);

    let sol = solve_lazy(&p, |d| triangle_cuts(n, 0, d))?.require_optimal()?;
    println!("objective {} after {} rounds, {} cuts, {} pivots", sol.objective, sol.rounds, sol.cuts.len(), sol.pivots);
    for u in 0..n {
        for v in u + 1..n {
            println!("  d({u},{v}) = {}", sol.values[pair_index(n, u, v)]);
        }
    }
    Ok(())
}

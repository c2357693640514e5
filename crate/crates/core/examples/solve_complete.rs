//! Cluster a noisy planted instance and compare with the exact optimum.
//!
//! cargo run --release --example solve_complete -- [n] [k] [flip] [seed]

use minmax_cc::cc_complete::solve_cc_complete;
use minmax_cc::gen;
use minmax_cc::graph::max_disagreement;
use minmax_cc::oracle;

fn main() -> minmax_cc::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: &str| args.get(i).cloned().unwrap_or_else(|| default.to_string());
    let n: usize = arg(0, "8").parse().expect("n");
    let k: usize = arg(1, "2").parse().expect("k");
    let flip: f64 = arg(2, "0.15").parse().expect("flip");
    let seed: u64 = arg(3, "7").parse().expect("seed");

    let g = gen::planted(n, k, flip, seed)?;
    let (clusters, report) = solve_cc_complete(&g, seed, None)?;

    println!("{} negative pairs out of {}", g.negative_edges().count(), g.edges().len());
    for run in &report.runs {
        let rounds = run.coverage.as_ref().map_or(0, |c| c.rounds);
        match run.max_cost {
            Some(c) => println!("  k = {:>2}: {rounds:>3} covering rounds, B = {:.0}, max cost {c}", run.k, run.b),
            None => println!("  k = {:>2}: failed ({})", run.k, run.error.as_deref().unwrap_or("?")),
        }
    }
    println!("best k = {}, clusters:", report.best_k);
    for part in &clusters.parts {
        println!("  {part:?}  cost {}", g.set_cost(part));
    }
    let cost = max_disagreement(&g, &clusters);
    if n <= oracle::MAX_PARTITION_N {
        let (opt, best) = oracle::exact_cc(&g)?;
        println!("max disagreement {cost}, exact optimum {opt} via {:?}", best.parts);
    } else {
        println!("max disagreement {cost}");
    }
    Ok(())
}

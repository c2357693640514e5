//! Min-max multicut on a grid with random source-sink pairs.
//!
//! cargo run --release --example multicut -- [rows] [cols] [pairs] [seed]

use minmax_cc::gen;
use minmax_cc::multicut::solve_multicut;
use minmax_cc::oracle;

fn main() -> minmax_cc::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let get = |i: usize, d: usize| args.get(i).copied().unwrap_or(d);
    let (rows, cols, t, seed) = (get(0, 3), get(1, 3), get(2, 3), get(3, 1) as u64);

    let mc = gen::grid_mc(rows, cols, t, seed)?;
    println!("{rows}x{cols} grid, pairs {:?}", mc.pairs());

    let (p, report) = solve_multicut(&mc, seed, None)?;
    for run in &report.runs {
        let lp: Vec<String> = run.rounds.iter().map(|r| format!("{:.2}", r.lp_objective)).collect();
        println!(
            "  k = {:>2}: B = {}, max boundary {:?}, LP values [{}]",
            run.k,
            run.b,
            run.max_boundary,
            lp.join(" ")
        );
    }
    println!("best k = {}:", report.best_k);
    for part in &p.parts {
        println!("  {part:?}  boundary {}", mc.boundary(part));
    }
    if mc.n() <= oracle::MAX_PARTITION_N {
        println!("heuristic {} vs exact {}", report.max_boundary, oracle::exact_multicut(&mc)?.0);
    }
    Ok(())
}

//! Exhaustive oracles for small instances.

use minmax_cc::graph::{Measure, SignedGraph};
use minmax_cc::oracle::{bell, enumerate_partitions, exact_cc, exact_cluster};

fn main() -> minmax_cc::Result<()> {
    for n in 0..=8 {
        println!("n = {n}: {} partitions (Bell {})", enumerate_partitions(n)?.count(), bell(n));
    }

    // A 5-cycle of positive edges with all chords negative.
    let chords = [(0, 2), (0, 3), (1, 3), (1, 4), (2, 4)];
    let g = SignedGraph::complete(5, &chords)?;
    let (opt, p) = exact_cc(&g)?;
    println!("optimum {opt} with clusters {:?}", p.parts);

    let eta = Measure::uniform(5);
    for h in [0.2, 0.4, 0.6, 1.0] {
        let (c, set) = exact_cluster(&g, &eta, h)?;
        println!("cheapest cluster with measure >= {h}: {set:?} costs {c}");
    }
    Ok(())
}

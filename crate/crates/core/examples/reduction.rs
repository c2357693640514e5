//! Solve correlation clustering on a sparse weighted signed graph through the
//! multicut reduction.

use minmax_cc::graph::{max_disagreement, Sign, SignedGraph};
use minmax_cc::multicut::solve_multicut;
use minmax_cc::oracle;
use minmax_cc::reduction::{cc_to_multicut, clustering_to_partition, partition_to_clustering};

fn main() -> minmax_cc::Result<()> {
    use Sign::{Neg, Pos};
    let g = SignedGraph::new(
        6,
        [(0, 1, 3.0, Pos), (1, 2, 1.0, Pos), (0, 2, 2.0, Neg), (2, 3, 4.0, Pos), (3, 4, 1.0, Neg), (4, 5, 2.0, Pos), (1, 5, 1.0, Pos)],
    )?;
    let (mc, map) = cc_to_multicut(&g);
    println!("{} vertices become {}; pairs {:?}", g.n(), mc.n(), mc.pairs());

    let (p, _) = solve_multicut(&mc, 3, None)?;
    let c = partition_to_clustering(&map, &p)?;
    println!("multicut max boundary {}, clustering {:?}", mc.max_boundary(&p), c.parts);
    println!("clustering max disagreement {}", max_disagreement(&g, &c));

    // Lifting a clustering back gives a multicut of the same cost.
    let (opt, best) = oracle::exact_cc(&g)?;
    let lifted = clustering_to_partition(&map, &best)?;
    println!("exact clustering {:?} costs {opt}; lifted boundary {}", best.parts, mc.max_boundary(&lifted));
    Ok(())
}

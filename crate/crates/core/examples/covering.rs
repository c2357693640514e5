//! Multiplicative-weights covering and aggregation with a custom set finder.

use minmax_cc::cover::{aggregate, covering, CoveringConfig};
use minmax_cc::graph::{SetFamily, SignedGraph};

fn main() -> minmax_cc::Result<()> {
    // Two cliques {0..4} and {4..8}, negative across.
    let neg: Vec<_> = (0..4).flat_map(|u| (4..8).map(move |v| (u, v))).collect();
    let g = SignedGraph::complete(8, &neg)?;
    let n = g.n();

    // Finder: the heaviest vertex together with everything on its side.
    let cfg = CoveringConfig::new(2, n);
    let (family, stats) = covering(n, &cfg, |eta, h, round| {
        let v = (0..n).max_by(|&a, &b| eta.get(a).total_cmp(&eta.get(b)).then(b.cmp(&a))).unwrap();
        let side: Vec<usize> = if v < 4 { (0..4).collect() } else { (4..8).collect() };
        println!("round {round}: H = {h:.3}, picked {side:?} (mass {:.3})", eta.mass(&side));
        Ok(SetFamily::new(vec![side]))
    })?;
    println!("{} rounds, min coverage {:.3}", stats.rounds, stats.min_coverage);

    let b = family.sets.iter().map(|s| g.set_cost(s)).fold(0.0, f64::max);
    let agg = aggregate(n, &family, b, |s| g.set_cost(s), 1)?;
    println!("partition {:?}, potentials {:?}", agg.partition.parts, agg.potentials);
    Ok(())
}

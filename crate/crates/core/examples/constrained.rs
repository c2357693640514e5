//! Constrained multicut: every part must contain a terminal.

use minmax_cc::graph::MulticutInstance;
use minmax_cc::multicut::{combine_phase, solve_constrained_multicut, terminal_scale};
use minmax_cc::graph::SetFamily;

fn main() -> minmax_cc::Result<()> {
    // Two triangles joined by a path, one pair across and one inside the path.
    let edges = [
        (0, 1, 2.0),
        (1, 2, 2.0),
        (0, 2, 2.0),
        (2, 3, 1.0),
        (3, 4, 1.0),
        (4, 5, 2.0),
        (5, 6, 2.0),
        (4, 6, 2.0),
    ];
    let mc = MulticutInstance::new(7, edges, [(0, 6), (3, 5)])?;
    println!("terminals {:?}", (0..7).filter(|&v| mc.is_terminal()[v]).collect::<Vec<_>>());
    println!("sqrt(min(2T, n) Delta) = {:.3}", terminal_scale(&mc));

    // Disjoint sets merge unless a pair would end up inside.
    let fam = SetFamily::new(vec![vec![0, 1], vec![2], vec![6], vec![5], vec![3]]);
    println!("combined {:?} -> {:?}", fam.sets, combine_phase(&fam, &mc)?.sets);

    for k in 2..=3 {
        match solve_constrained_multicut(&mc, k, 5) {
            Ok((p, report)) => {
                println!("k = {k}: max boundary {}", report.max_boundary);
                for part in &p.parts {
                    println!("  {part:?}  boundary {}", mc.boundary(part));
                }
            }
            Err(e) => println!("k = {k}: {e}"),
        }
    }
    Ok(())
}

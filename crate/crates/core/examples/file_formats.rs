//! Text formats: generate, write, parse and verify.

use minmax_cc::cli::{solve_cc, verify};
use minmax_cc::gen;
use minmax_cc::graph::max_disagreement;
use minmax_cc::io::{self, Instance};

fn main() -> minmax_cc::Result<()> {
    let g = gen::random_signed(6, 0.4, 11)?;
    let complete = io::write_signed_complete(&g)?;
    println!("complete form:\n{complete}");
    println!("edge-list form:\n{}", io::write_signed(&g));

    let mc = gen::grid_mc(2, 3, 2, 11)?;
    let mc_text = io::write_mc(&mc);
    println!("multicut form:\n{mc_text}");
    assert_eq!(io::parse_instance(&mc_text)?, Instance::Multicut(mc));

    let c = solve_cc(&io::parse_signed(&complete)?, 0, None)?;
    let sol = io::write_solution(&c, max_disagreement(&g, &c));
    println!("solution:\n{sol}");
    let mut out = Vec::new();
    verify(&complete, &sol, &mut out)?;
    print!("{}", String::from_utf8_lossy(&out));
    Ok(())
}

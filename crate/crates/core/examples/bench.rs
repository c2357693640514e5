//! Run a benchmark suite and print its CSV report.
//!
//! cargo run --release --example bench -- [small-cc|small-mc] [seed]

use minmax_cc::bench::{run_bench, to_csv, Suite};

fn main() -> minmax_cc::Result<()> {
    let mut args = std::env::args().skip(1);
    let suite: Suite = args.next().as_deref().unwrap_or("small-mc").parse()?;
    let seed: u64 = args.next().map_or(0, |s| s.parse().expect("seed"));
    let rows = run_bench(suite, seed, true)?;
    print!("{}", to_csv(&rows));
    let worst = rows.iter().filter_map(|r| r.ratio()).fold(0.0, f64::max);
    eprintln!("worst ratio {worst:.3}");
    Ok(())
}

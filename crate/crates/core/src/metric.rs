//! Triangle-inequality separation for pair-indexed distance variables.

use crate::graph::{pair_count, pair_index};
use crate::lp::{Constraint, CUT_TOL};

/// Violated constraints `d(u,w) + d(w,v) - d(u,v) >= 0`, where the distance of
/// pair `{a, b}` is variable `offset + pair_index(n, a, b)`.
pub fn triangle_cuts(n: usize, offset: usize, values: &[f64]) -> Vec<Constraint> {
    let d = |a: usize, b: usize| values[offset + pair_index(n, a, b)];
    let mut out = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let duv = d(u, v);
            for w in 0..n {
                if w == u || w == v {
                    continue;
                }
                if duv - d(u, w) - d(w, v) > CUT_TOL {
                    let mut coeffs = vec![
                        (offset + pair_index(n, u, w), 1.0),
                        (offset + pair_index(n, w, v), 1.0),
                        (offset + pair_index(n, u, v), -1.0),
                    ];
                    coeffs.sort_by_key(|c| c.0);
                    out.push(Constraint::ge(coeffs, 0.0));
                }
            }
        }
    }
    out
}

/// Largest `d(u,v) - d(u,w) - d(w,v)` over all triples, or zero.
pub fn max_triangle_violation(n: usize, dist: &[f64]) -> f64 {
    debug_assert_eq!(dist.len(), pair_count(n));
    let d = |a: usize, b: usize| dist[pair_index(n, a, b)];
    let mut worst = 0.0f64;
    for u in 0..n {
        for v in u + 1..n {
            for w in 0..n {
                if w != u && w != v {
                    worst = worst.max(d(u, v) - d(u, w) - d(w, v));
                }
            }
        }
    }
    worst
}

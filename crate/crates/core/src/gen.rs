//! Seeded instance generators.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{pair_count, MulticutInstance, SignedGraph};

fn check_prob(p: f64, what: &str) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidInstance(format!("{what} = {p} outside [0, 1]")))
    }
}

/// Complete unit graph where each pair, in lexicographic order, is negative
/// with probability `p`.
pub fn random_signed(n: usize, p: f64, seed: u64) -> Result<SignedGraph> {
    check_prob(p, "p")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut neg = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                neg.push((u, v));
            }
        }
    }
    SignedGraph::complete(n, &neg)
}

/// Ground-truth cluster of `v` in [`planted`]: `v * k / n`.
pub fn planted_label(v: usize, n: usize, k: usize) -> usize {
    v * k / n
}

/// Complete unit graph with `k` planted clusters: pairs inside a cluster are
/// positive, pairs across are negative, and each sign flips with probability
/// `flip`.
pub fn planted(n: usize, k: usize, flip: f64, seed: u64) -> Result<SignedGraph> {
    check_prob(flip, "flip")?;
    if k == 0 || k > n.max(1) {
        return Err(Error::InvalidInstance(format!("k = {k} clusters for n = {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut neg = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let across = planted_label(u, n, k) != planted_label(v, n, k);
            if across != rng.gen_bool(flip) {
                neg.push((u, v));
            }
        }
    }
    SignedGraph::complete(n, &neg)
}

/// `rows x cols` grid with unit weights (vertex `r * cols + c`) and `npairs`
/// distinct random pairs `(s, t)` with `s < t`.
pub fn grid_mc(rows: usize, cols: usize, npairs: usize, seed: u64) -> Result<MulticutInstance> {
    let n = rows * cols;
    if npairs > pair_count(n) {
        return Err(Error::InvalidInstance(format!("{npairs} pairs requested on {n} vertices")));
    }
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                edges.push((v, v + 1, 1.0));
            }
            if r + 1 < rows {
                edges.push((v, v + cols, 1.0));
            }
        }
    }
    let mut all: Vec<(usize, usize)> = (0..n).flat_map(|s| (s + 1..n).map(move |t| (s, t))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (chosen, _) = all.partial_shuffle(&mut rng, npairs);
    MulticutInstance::new(n, edges, chosen.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Sign;
    use crate::oracle;

    #[test]
    fn planted_without_flips_is_ground_truth() {
        let g = planted(6, 2, 0.0, 9).unwrap();
        for e in g.edges() {
            let same = planted_label(e.u, 6, 2) == planted_label(e.v, 6, 2);
            assert_eq!(e.sign, if same { Sign::Pos } else { Sign::Neg });
        }
        assert_eq!(oracle::exact_cc(&g).unwrap().0, 0.0);
    }

    #[test]
    fn random_signed_extremes() {
        assert!(random_signed(4, 0.0, 3).unwrap().edges().iter().all(|e| e.sign == Sign::Pos));
        assert!(random_signed(4, 1.0, 3).unwrap().edges().iter().all(|e| e.sign == Sign::Neg));
        assert!(random_signed(4, 1.5, 3).is_err());
    }

    #[test]
    fn grid_2x2_is_a_four_cycle() {
        let mc = grid_mc(2, 2, 1, 0).unwrap();
        assert_eq!(mc.edges(), &[(0, 1, 1.0), (0, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0)]);
        assert_eq!(mc.pairs().len(), 1);
        let (s, t) = mc.pairs()[0];
        assert!(s < t && t < 4);
        assert!(grid_mc(2, 2, 7, 0).is_err());
    }

    #[test]
    fn deterministic_in_seed() {
        assert_eq!(random_signed(7, 0.5, 11).unwrap(), random_signed(7, 0.5, 11).unwrap());
        assert_eq!(planted(7, 3, 0.2, 11).unwrap(), planted(7, 3, 0.2, 11).unwrap());
        assert_eq!(grid_mc(3, 3, 4, 11).unwrap(), grid_mc(3, 3, 4, 11).unwrap());
        let pairs: Vec<_> = (0..20).map(|s| grid_mc(3, 3, 2, s).unwrap().pairs().to_vec()).collect();
        assert!(pairs.windows(2).any(|w| w[0] != w[1]));
    }
}

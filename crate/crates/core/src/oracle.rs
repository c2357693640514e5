//! Brute-force exact solvers.
//!
//! These enumerate every candidate and are only meant for small instances;
//! the size guards are hard errors so an oracle never reports a value it did
//! not prove optimal.

use crate::error::{Error, Result};
use crate::graph::{Measure, MulticutInstance, Partition, SignedGraph, VertexSet, TOL};

pub const MAX_ENUM_N: usize = 13;
pub const MAX_PARTITION_N: usize = 12;
pub const MAX_SUBSET_N: usize = 16;

/// Restricted-growth strings of length `n` in lexicographic order: `a[0] = 0`
/// and `a[i] <= 1 + max(a[..i])`. Each string is one set partition.
#[derive(Clone, Debug)]
pub struct RestrictedGrowth {
    a: Vec<usize>,
    /// `prefix_max[i] = max(a[..=i])`.
    prefix_max: Vec<usize>,
    started: bool,
    done: bool,
}

impl RestrictedGrowth {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_ENUM_N {
            return Err(Error::TooLarge { n, limit: MAX_ENUM_N });
        }
        Ok(RestrictedGrowth { a: vec![0; n], prefix_max: vec![0; n], started: false, done: false })
    }

    /// Advance to the next string; returns `false` once exhausted.
    pub fn advance(&mut self) -> bool {
        if self.done {
            return false;
        }
        if !self.started {
            self.started = true;
            return true;
        }
        let n = self.a.len();
        let mut i = n;
        while i > 1 {
            i -= 1;
            if self.a[i] <= self.prefix_max[i - 1] {
                self.a[i] += 1;
                self.prefix_max[i] = self.prefix_max[i - 1].max(self.a[i]);
                for j in i + 1..n {
                    self.a[j] = 0;
                    self.prefix_max[j] = self.prefix_max[i];
                }
                return true;
            }
        }
        self.done = true;
        false
    }

    pub fn labels(&self) -> &[usize] {
        &self.a
    }

    pub fn block_count(&self) -> usize {
        self.prefix_max.last().map_or(0, |m| m + 1)
    }
}

impl Iterator for RestrictedGrowth {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.advance() {
            Some(self.a.clone())
        } else {
            None
        }
    }
}

/// Every set partition of `0..n` exactly once, lexicographic by labelling.
pub fn enumerate_partitions(n: usize) -> Result<impl Iterator<Item = Partition>> {
    Ok(RestrictedGrowth::new(n)?.map(|labels| Partition::from_labels(&labels)))
}

/// Bell numbers via the Bell triangle.
pub fn bell(n: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            let last = *next.last().unwrap();
            next.push(last + x);
        }
        row = next;
    }
    row[0]
}

/// Minimum of the maximum cluster disagreement over all clusterings.
pub fn exact_cc(g: &SignedGraph) -> Result<(f64, Partition)> {
    let n = g.n();
    if n > MAX_PARTITION_N {
        return Err(Error::TooLarge { n, limit: MAX_PARTITION_N });
    }
    best_partition(n, |labels, blocks| {
        let cost = g.part_costs(labels, blocks);
        Some(cost.into_iter().fold(0.0, f64::max))
    })
    .ok_or_else(|| Error::Internal("no partition enumerated".into()))
}

/// Minimum of the maximum part boundary over partitions separating every pair.
pub fn exact_multicut(mc: &MulticutInstance) -> Result<(f64, Partition)> {
    let n = mc.n();
    if n > MAX_PARTITION_N {
        return Err(Error::TooLarge { n, limit: MAX_PARTITION_N });
    }
    best_partition(n, |labels, blocks| {
        if mc.pairs().iter().any(|&(s, t)| labels[s] == labels[t]) {
            return None;
        }
        Some(mc.part_boundaries(labels, blocks).into_iter().fold(0.0, f64::max))
    })
    .ok_or_else(|| Error::NoFeasibleSet("no partition separates all pairs".into()))
}

fn best_partition<F>(n: usize, mut score: F) -> Option<(f64, Partition)>
where
    F: FnMut(&[usize], usize) -> Option<f64>,
{
    let mut rgs = RestrictedGrowth::new(n).ok()?;
    let mut best: Option<(f64, Vec<usize>)> = None;
    while rgs.advance() {
        let Some(v) = score(rgs.labels(), rgs.block_count()) else { continue };
        if best.as_ref().is_none_or(|(b, _)| v < b - TOL) {
            best = Some((v, rgs.labels().to_vec()));
        }
    }
    best.map(|(v, labels)| (v, Partition::from_labels(&labels)))
}

fn subsets(n: usize) -> Result<impl Iterator<Item = VertexSet>> {
    if n > MAX_SUBSET_N {
        return Err(Error::TooLarge { n, limit: MAX_SUBSET_N });
    }
    Ok((1u32..(1u32 << n)).map(move |bits| (0..n).filter(|&v| bits >> v & 1 == 1).collect()))
}

/// Cheapest single cluster `T` (nonempty) with `eta(T) >= h`.
pub fn exact_cluster(g: &SignedGraph, eta: &Measure, h: f64) -> Result<(f64, VertexSet)> {
    let mut best: Option<(f64, VertexSet)> = None;
    for set in subsets(g.n())? {
        if eta.mass(&set) < h - TOL {
            continue;
        }
        let c = g.set_cost(&set);
        if best.as_ref().is_none_or(|(b, _)| c < b - TOL) {
            best = Some((c, set));
        }
    }
    best.ok_or_else(|| Error::NoFeasibleSet(format!("no set reaches measure {h}")))
}

/// Smallest boundary over sets with no violated pair and `eta` in `[h, 2h]`.
pub fn exact_mc_cluster(mc: &MulticutInstance, eta: &Measure, h: f64) -> Result<(f64, VertexSet)> {
    let mut best: Option<(f64, VertexSet)> = None;
    for set in subsets(mc.n())? {
        let m = eta.mass(&set);
        if m < h - TOL || m > 2.0 * h + TOL || mc.vio(&set) > 0 {
            continue;
        }
        let c = mc.boundary(&set);
        if best.as_ref().is_none_or(|(b, _)| c < b - TOL) {
            best = Some((c, set));
        }
    }
    best.ok_or_else(|| Error::NoFeasibleSet(format!("no separating set with measure in [{h}, {}]", 2.0 * h)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{max_disagreement, Sign};

    fn k3() -> SignedGraph {
        SignedGraph::complete(3, &[(1, 2)]).unwrap()
    }

    #[test]
    fn partition_counts_match_bell() {
        let expected = [1u64, 1, 2, 5, 15, 52, 203, 877, 4140];
        for (n, &b) in expected.iter().enumerate() {
            assert_eq!(bell(n), b);
            assert_eq!(enumerate_partitions(n).unwrap().count() as u64, b, "n = {n}");
        }
    }

    #[test]
    fn partitions_are_distinct_and_valid() {
        let all: Vec<Partition> = enumerate_partitions(5).unwrap().collect();
        let mut canon: Vec<Vec<Vec<usize>>> = all.iter().map(|p| p.canonical().parts).collect();
        for p in &all {
            assert!(crate::graph::validate_partition(5, &p.parts).is_ok());
        }
        canon.sort();
        canon.dedup();
        assert_eq!(canon.len(), 52);
    }

    #[test]
    fn enumeration_guard() {
        assert!(RestrictedGrowth::new(14).is_err());
        let g = SignedGraph::complete(13, &[]).unwrap();
        assert!(exact_cc(&g).is_err());
    }

    #[test]
    fn exact_cc_small_cases() {
        let pos = SignedGraph::complete(4, &[]).unwrap();
        let (v, p) = exact_cc(&pos).unwrap();
        assert_eq!(v, 0.0);
        assert_eq!(p.parts.len(), 1);

        let all_neg: Vec<_> = (0..4).flat_map(|u| (u + 1..4).map(move |v| (u, v))).collect();
        let neg = SignedGraph::complete(4, &all_neg).unwrap();
        let (v, p) = exact_cc(&neg).unwrap();
        assert_eq!(v, 0.0);
        assert_eq!(p.parts.len(), 4);

        let (v, p) = exact_cc(&k3()).unwrap();
        assert_eq!(v, 1.0);
        assert_eq!(max_disagreement(&k3(), &p), 1.0);
    }

    #[test]
    fn exact_multicut_small_cases() {
        let none = MulticutInstance::new(3, [(0, 1, 1.0), (1, 2, 1.0)], []).unwrap();
        let (v, p) = exact_multicut(&none).unwrap();
        assert_eq!((v, p.parts.len()), (0.0, 1));

        let edge = MulticutInstance::new(2, [(0, 1, 1.0)], [(0, 1)]).unwrap();
        assert_eq!(exact_multicut(&edge).unwrap().0, 1.0);

        let cycle =
            MulticutInstance::new(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)], [(0, 2), (1, 3)]).unwrap();
        let (v, p) = exact_multicut(&cycle).unwrap();
        assert_eq!(v, 2.0);
        assert!(cycle.separates_all(&p));
    }

    #[test]
    fn exact_cluster_cases() {
        let g = k3();
        // Every nonempty subset of K3 (01:+, 02:+, 12:-) pays at least one
        // disagreement; {1} is the first one that pays exactly one.
        let (v, set) = exact_cluster(&g, &Measure::uniform(3), 1.0 / 3.0).unwrap();
        assert_eq!(v, 1.0);
        assert_eq!(set, vec![1]);

        let pos = SignedGraph::complete(3, &[]).unwrap();
        assert_eq!(exact_cluster(&pos, &Measure::uniform(3), 1.0).unwrap(), (0.0, vec![0, 1, 2]));

        let neg = SignedGraph::complete(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        assert_eq!(exact_cluster(&neg, &Measure::uniform(3), 1.0).unwrap().0, 3.0);
    }

    #[test]
    fn exact_mc_cluster_cases() {
        let k2 = MulticutInstance::new(2, [(0, 1, 2.5)], [(0, 1)]).unwrap();
        assert_eq!(exact_mc_cluster(&k2, &Measure::uniform(2), 0.5).unwrap(), (2.5, vec![0]));

        // No pairs, uniform measure, h = 1/n on a weighted star: the best
        // singleton is the lightest leaf.
        let star = MulticutInstance::new(4, [(0, 1, 3.0), (0, 2, 1.0), (0, 3, 2.0)], []).unwrap();
        let (v, set) = exact_mc_cluster(&star, &Measure::uniform(4), 0.25).unwrap();
        assert_eq!((v, set), (1.0, vec![2]));

        let heavy = Measure::from_weights(&[10.0, 1.0]).unwrap();
        assert!(exact_mc_cluster(&k2, &heavy, 0.02).is_err());
    }

    #[test]
    fn weighted_signed_graph_oracle() {
        let g = SignedGraph::new(3, [(0, 1, 2.0, Sign::Pos), (1, 2, 0.5, Sign::Neg)]).unwrap();
        let (v, _) = exact_cc(&g).unwrap();
        assert_eq!(v, 0.0);
    }
}

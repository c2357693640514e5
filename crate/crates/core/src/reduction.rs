//! Reduction from correlation clustering to multicut.
//!
//! Every negative edge `(u, v)` of weight `w` gets a fresh vertex `uv`; the
//! edge becomes `(u, uv)` with weight `w` and `(v, uv)` becomes a source-sink
//! pair. Positive edges are copied unchanged. A multicut of the new graph
//! restricts to a clustering whose per-cluster disagreement is at most the
//! part boundary, and every clustering lifts to a multicut of equal cost.

use crate::error::{Error, Result};
use crate::graph::{validate_partition, MulticutInstance, Partition, Sign, SignedGraph};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionMap {
    pub original_n: usize,
    /// `(u, v, uv)` per negative edge, in edge order; `uv` is the added vertex.
    pub added: Vec<(usize, usize, usize)>,
    /// The pair `(v, uv)` of each negative edge, same order as `added`.
    pub pairs: Vec<(usize, usize)>,
}

impl ReductionMap {
    pub fn total_n(&self) -> usize {
        self.original_n + self.added.len()
    }
}

pub fn cc_to_multicut(g: &SignedGraph) -> (MulticutInstance, ReductionMap) {
    let n = g.n();
    let mut edges = Vec::with_capacity(g.edges().len());
    let mut added = Vec::new();
    let mut pairs = Vec::new();
    for e in g.edges() {
        match e.sign {
            Sign::Pos => edges.push((e.u, e.v, e.weight)),
            Sign::Neg => {
                let uv = n + added.len();
                edges.push((e.u, uv, e.weight));
                added.push((e.u, e.v, uv));
                pairs.push((e.v, uv));
            }
        }
    }
    let rm = ReductionMap { original_n: n, added, pairs };
    let mc = MulticutInstance::new(rm.total_n(), edges, rm.pairs.clone())
        .expect("reduction of a valid signed graph is a valid multicut instance");
    (mc, rm)
}

/// Restrict a partition of the reduced graph to the original vertices.
pub fn partition_to_clustering(rm: &ReductionMap, p: &Partition) -> Result<Partition> {
    validate_partition(rm.total_n(), &p.parts).map_err(Error::InvalidPartition)?;
    let parts = p
        .parts
        .iter()
        .map(|part| part.iter().copied().filter(|&v| v < rm.original_n).collect::<Vec<_>>())
        .filter(|part| !part.is_empty())
        .collect();
    Ok(Partition { parts })
}

/// Lift a clustering: each added vertex stays a singleton when its negative
/// edge is inside a cluster, and joins the part of `u` when the edge crosses.
pub fn clustering_to_partition(rm: &ReductionMap, c: &Partition) -> Result<Partition> {
    validate_partition(rm.original_n, &c.parts).map_err(Error::InvalidPartition)?;
    let labels = c.labels(rm.original_n);
    let mut parts = c.parts.clone();
    for &(u, v, uv) in &rm.added {
        if labels[u] == labels[v] {
            parts.push(vec![uv]);
        } else {
            parts[labels[u]].push(uv);
        }
    }
    for part in &mut parts {
        part.sort_unstable();
    }
    Ok(Partition { parts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::max_disagreement;
    use crate::oracle;

    fn k3() -> SignedGraph {
        SignedGraph::complete(3, &[(1, 2)]).unwrap()
    }

    #[test]
    fn construction() {
        let pos = SignedGraph::complete(3, &[]).unwrap();
        let (mc, rm) = cc_to_multicut(&pos);
        assert_eq!(mc.n(), 3);
        assert!(mc.pairs().is_empty());
        assert_eq!(mc.edges(), &[(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]);
        assert!(rm.added.is_empty());

        let neg = SignedGraph::complete(2, &[(0, 1)]).unwrap();
        let (mc, _) = cc_to_multicut(&neg);
        assert_eq!((mc.n(), mc.edges(), mc.pairs()), (3, &[(0, 2, 1.0)][..], &[(1, 2)][..]));

        let (mc, rm) = cc_to_multicut(&k3());
        assert_eq!(mc.n(), 4);
        assert_eq!(mc.edges(), &[(0, 1, 1.0), (0, 2, 1.0), (1, 3, 1.0)]);
        assert_eq!(mc.pairs(), &[(2, 3)]);
        assert_eq!(rm.added, vec![(1, 2, 3)]);
        assert_eq!(oracle::exact_multicut(&mc).unwrap().0, 1.0);
        assert_eq!(oracle::exact_cc(&k3()).unwrap().0, 1.0);
    }

    #[test]
    fn mappings_on_k3() {
        let (_, rm) = cc_to_multicut(&k3());
        let c = partition_to_clustering(&rm, &Partition { parts: vec![vec![0, 1, 3], vec![2]] }).unwrap();
        assert_eq!(c.parts, vec![vec![0, 1], vec![2]]);
        let s = partition_to_clustering(&rm, &Partition::singletons(4)).unwrap();
        assert_eq!(s, Partition::singletons(3));

        let p = clustering_to_partition(&rm, &Partition { parts: vec![vec![0, 1], vec![2]] }).unwrap();
        assert_eq!(p.parts, vec![vec![0, 1, 3], vec![2]]);
        let p = clustering_to_partition(&rm, &Partition::whole(3)).unwrap();
        assert_eq!(p.parts, vec![vec![0, 1, 2], vec![3]]);
    }

    #[test]
    fn lifted_cost_matches_on_every_clustering() {
        let g = SignedGraph::new(4, [(0, 1, 2.0, Sign::Neg), (1, 2, 1.0, Sign::Pos), (2, 3, 0.5, Sign::Neg), (0, 3, 1.5, Sign::Pos)])
            .unwrap();
        let (mc, rm) = cc_to_multicut(&g);
        for c in oracle::enumerate_partitions(4).unwrap() {
            let p = clustering_to_partition(&rm, &c).unwrap();
            assert!(mc.separates_all(&p));
            assert!((mc.max_boundary(&p) - max_disagreement(&g, &c)).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_invalid_input() {
        let (_, rm) = cc_to_multicut(&k3());
        assert!(clustering_to_partition(&rm, &Partition { parts: vec![vec![0, 1]] }).is_err());
        assert!(partition_to_clustering(&rm, &Partition { parts: vec![vec![0, 1, 2]] }).is_err());
    }
}

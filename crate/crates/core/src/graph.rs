//! Instance and solution types with their cost accounting.
//!
//! Weights are `f64`; every cost comparison in the crate uses the absolute
//! tolerance [`TOL`].

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

/// Absolute tolerance for cost and measure comparisons.
pub const TOL: f64 = 1e-9;

pub type VertexSet = Vec<usize>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Pos,
    Neg,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Pos => f.write_str("+"),
            Sign::Neg => f.write_str("-"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignedEdge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
    pub sign: Sign,
}

/// Index of the unordered pair `{u, v}` (u != v) in lexicographic order of
/// `(min, max)` over all pairs of `0..n`.
pub fn pair_index(n: usize, u: usize, v: usize) -> usize {
    debug_assert!(u != v && u < n && v < n);
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    a * (2 * n - a - 1) / 2 + (b - a - 1)
}

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

pub(crate) fn mask(n: usize, set: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &v in set {
        if v < n {
            m[v] = true;
        }
    }
    m
}

fn canonical_pair(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

fn check_edge(n: usize, u: usize, v: usize, w: f64, seen: &mut HashSet<(usize, usize)>) -> Result<()> {
    if u >= n || v >= n {
        return Err(Error::InvalidInstance(format!("edge ({u},{v}) out of range for n = {n}")));
    }
    if u == v {
        return Err(Error::InvalidInstance(format!("self-loop at vertex {u}")));
    }
    if !(w >= 0.0) || !w.is_finite() {
        return Err(Error::InvalidInstance(format!("edge ({u},{v}) has invalid weight {w}")));
    }
    if !seen.insert(canonical_pair(u, v)) {
        return Err(Error::InvalidInstance(format!("duplicate edge ({u},{v})")));
    }
    Ok(())
}

/// A correlation-clustering instance: vertices `0..n` and weighted edges
/// labelled positive or negative. Edges are stored with `u < v`, sorted.
#[derive(Clone, Debug, PartialEq)]
pub struct SignedGraph {
    n: usize,
    edges: Vec<SignedEdge>,
    complete: bool,
}

impl SignedGraph {
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64, Sign)>,
    {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (u, v, weight, sign) in edges {
            check_edge(n, u, v, weight, &mut seen)?;
            let (u, v) = canonical_pair(u, v);
            out.push(SignedEdge { u, v, weight, sign });
        }
        out.sort_by_key(|e| (e.u, e.v));
        let complete = out.len() == pair_count(n) && out.iter().all(|e| e.weight == 1.0);
        Ok(SignedGraph { n, edges: out, complete })
    }

    /// Complete graph on `n` vertices with unit weights; the listed pairs are
    /// negative, every other pair positive.
    pub fn complete(n: usize, negative: &[(usize, usize)]) -> Result<Self> {
        let mut neg = HashSet::new();
        for &(u, v) in negative {
            if u >= n || v >= n || u == v {
                return Err(Error::InvalidInstance(format!("negative pair ({u},{v}) invalid for n = {n}")));
            }
            if !neg.insert(canonical_pair(u, v)) {
                return Err(Error::InvalidInstance(format!("duplicate negative pair ({u},{v})")));
            }
        }
        let mut edges = Vec::with_capacity(pair_count(n));
        for u in 0..n {
            for v in u + 1..n {
                let sign = if neg.contains(&(u, v)) { Sign::Neg } else { Sign::Pos };
                edges.push((u, v, 1.0, sign));
            }
        }
        Self::new(n, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[SignedEdge] {
        &self.edges
    }

    /// Every unordered pair carries exactly one unit-weight edge.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn positive_edges(&self) -> impl Iterator<Item = &SignedEdge> {
        self.edges.iter().filter(|e| e.sign == Sign::Pos)
    }

    pub fn negative_edges(&self) -> impl Iterator<Item = &SignedEdge> {
        self.edges.iter().filter(|e| e.sign == Sign::Neg)
    }

    /// Disagreement of `set` taken as one cluster: negative weight inside plus
    /// positive weight crossing its boundary.
    pub fn set_cost(&self, set: &[usize]) -> f64 {
        let inside = mask(self.n, set);
        self.cost_with_mask(&inside)
    }

    pub(crate) fn cost_with_mask(&self, inside: &[bool]) -> f64 {
        let mut cost = 0.0;
        for e in &self.edges {
            let (a, b) = (inside[e.u], inside[e.v]);
            match e.sign {
                Sign::Neg if a && b => cost += e.weight,
                Sign::Pos if a != b => cost += e.weight,
                _ => {}
            }
        }
        cost
    }

    /// Per-part disagreements for a labelling `labels[v] = part id` with
    /// `parts` distinct ids, in one pass over the edges.
    pub(crate) fn part_costs(&self, labels: &[usize], parts: usize) -> Vec<f64> {
        let mut cost = vec![0.0; parts];
        for e in &self.edges {
            let (a, b) = (labels[e.u], labels[e.v]);
            match e.sign {
                Sign::Neg if a == b => cost[a] += e.weight,
                Sign::Pos if a != b => {
                    cost[a] += e.weight;
                    cost[b] += e.weight;
                }
                _ => {}
            }
        }
        cost
    }
}

/// Disagreement of part `i` of clustering `c`.
pub fn cluster_cost(g: &SignedGraph, c: &Partition, i: usize) -> Result<f64> {
    let part = c.parts.get(i).ok_or(Error::OutOfRange { index: i, len: c.parts.len() })?;
    Ok(g.set_cost(part))
}

/// Maximum disagreement over the parts of `c`.
pub fn max_disagreement(g: &SignedGraph, c: &Partition) -> f64 {
    let labels = c.labels(g.n());
    g.part_costs(&labels, c.parts.len()).into_iter().fold(0.0, f64::max)
}

/// A multicut instance: weighted graph plus source-sink pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct MulticutInstance {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
    pairs: Vec<(usize, usize)>,
}

impl MulticutInstance {
    pub fn new<E, P>(n: usize, edges: E, pairs: P) -> Result<Self>
    where
        E: IntoIterator<Item = (usize, usize, f64)>,
        P: IntoIterator<Item = (usize, usize)>,
    {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (u, v, w) in edges {
            check_edge(n, u, v, w, &mut seen)?;
            let (u, v) = canonical_pair(u, v);
            out.push((u, v, w));
        }
        out.sort_by_key(|e| (e.0, e.1));
        let pairs: Vec<_> = pairs.into_iter().collect();
        for &(s, t) in &pairs {
            if s >= n || t >= n {
                return Err(Error::InvalidInstance(format!("pair ({s},{t}) out of range for n = {n}")));
            }
            if s == t {
                return Err(Error::InvalidInstance(format!("pair ({s},{t}) has equal endpoints")));
            }
        }
        Ok(MulticutInstance { n, edges: out, pairs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Weight of edges with exactly one endpoint in `s`.
    pub fn boundary(&self, s: &[usize]) -> f64 {
        self.boundary_mask(&mask(self.n, s))
    }

    pub(crate) fn boundary_mask(&self, inside: &[bool]) -> f64 {
        self.edges
            .iter()
            .filter(|&&(u, v, _)| inside[u] != inside[v])
            .map(|e| e.2)
            .sum()
    }

    /// Number of pairs with both endpoints in `s`.
    pub fn vio(&self, s: &[usize]) -> usize {
        self.vio_mask(&mask(self.n, s))
    }

    pub(crate) fn vio_mask(&self, inside: &[bool]) -> usize {
        self.pairs.iter().filter(|&&(s, t)| inside[s] && inside[t]).count()
    }

    /// Largest number of pairs incident to one vertex.
    pub fn max_demand(&self) -> usize {
        let mut demand = vec![0usize; self.n];
        for &(s, t) in &self.pairs {
            demand[s] += 1;
            demand[t] += 1;
        }
        demand.into_iter().max().unwrap_or(0)
    }

    pub fn is_terminal(&self) -> Vec<bool> {
        let mut t = vec![false; self.n];
        for &(a, b) in &self.pairs {
            t[a] = true;
            t[b] = true;
        }
        t
    }

    pub(crate) fn part_boundaries(&self, labels: &[usize], parts: usize) -> Vec<f64> {
        let mut cost = vec![0.0; parts];
        for &(u, v, w) in &self.edges {
            if labels[u] != labels[v] {
                cost[labels[u]] += w;
                cost[labels[v]] += w;
            }
        }
        cost
    }

    /// Largest part boundary of `p`.
    pub fn max_boundary(&self, p: &Partition) -> f64 {
        let labels = p.labels(self.n);
        self.part_boundaries(&labels, p.parts.len()).into_iter().fold(0.0, f64::max)
    }

    /// True when no part of `p` holds both ends of a pair.
    pub fn separates_all(&self, p: &Partition) -> bool {
        let labels = p.labels(self.n);
        self.pairs.iter().all(|&(s, t)| labels[s] != labels[t])
    }
}

/// Disjoint nonempty vertex sets covering `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub parts: Vec<VertexSet>,
}

impl Partition {
    pub fn new(n: usize, parts: Vec<VertexSet>) -> Result<Self> {
        validate_partition(n, &parts).map_err(Error::InvalidPartition)?;
        Ok(Partition { parts }.sorted_within())
    }

    pub fn singletons(n: usize) -> Self {
        Partition { parts: (0..n).map(|v| vec![v]).collect() }
    }

    pub fn whole(n: usize) -> Self {
        if n == 0 {
            return Partition { parts: Vec::new() };
        }
        Partition { parts: vec![(0..n).collect()] }
    }

    /// Parts from a labelling; labels need not be contiguous.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut order: Vec<usize> = Vec::new();
        let mut slot = std::collections::HashMap::new();
        let mut parts: Vec<VertexSet> = Vec::new();
        for (v, &l) in labels.iter().enumerate() {
            let idx = *slot.entry(l).or_insert_with(|| {
                order.push(l);
                parts.push(Vec::new());
                parts.len() - 1
            });
            parts[idx].push(v);
        }
        Partition { parts }
    }

    /// `labels[v]` = index of the part holding `v`. Assumes a valid partition.
    pub fn labels(&self, n: usize) -> Vec<usize> {
        let mut labels = vec![usize::MAX; n];
        for (i, part) in self.parts.iter().enumerate() {
            for &v in part {
                labels[v] = i;
            }
        }
        labels
    }

    fn sorted_within(mut self) -> Self {
        for p in &mut self.parts {
            p.sort_unstable();
        }
        self
    }

    /// Parts sorted internally and ordered by smallest member.
    pub fn canonical(&self) -> Self {
        let mut c = self.clone().sorted_within();
        c.parts.retain(|p| !p.is_empty());
        c.parts.sort_by_key(|p| p[0]);
        c
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

/// Reports out-of-range, duplicated and missing vertices, and empty parts.
pub fn validate_partition(n: usize, parts: &[VertexSet]) -> std::result::Result<(), Vec<String>> {
    let mut errors = Vec::new();
    let mut seen = vec![false; n];
    for (i, part) in parts.iter().enumerate() {
        if part.is_empty() {
            errors.push(format!("part {i} is empty"));
        }
        for &v in part {
            if v >= n {
                errors.push(format!("vertex {v} in part {i} out of range (n = {n})"));
            } else if seen[v] {
                errors.push(format!("duplicate vertex {v} (part {i})"));
            } else {
                seen[v] = true;
            }
        }
    }
    for (v, s) in seen.iter().enumerate() {
        if !s {
            errors.push(format!("missing vertex {v}"));
        }
    }
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}

/// Nonnegative per-vertex weights summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct Measure {
    eta: Vec<f64>,
}

impl Measure {
    pub fn uniform(n: usize) -> Self {
        Measure { eta: vec![1.0 / n as f64; n] }
    }

    /// Normalizes nonnegative weights; fails on negative entries or zero total.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        if weights.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidInstance("measure weights must be finite and nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidInstance("measure weights sum to zero".into()));
        }
        Ok(Measure { eta: weights.iter().map(|w| w / total).collect() })
    }

    pub fn get(&self, v: usize) -> f64 {
        self.eta[v]
    }

    pub fn values(&self) -> &[f64] {
        &self.eta
    }

    pub fn len(&self) -> usize {
        self.eta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eta.is_empty()
    }

    pub fn mass(&self, set: &[usize]) -> f64 {
        set.iter().map(|&v| self.eta[v]).sum()
    }

    pub fn total(&self) -> f64 {
        self.eta.iter().sum()
    }
}

/// A multiset of vertex sets; members may overlap.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SetFamily {
    pub sets: Vec<VertexSet>,
}

impl SetFamily {
    pub fn new(sets: Vec<VertexSet>) -> Self {
        SetFamily { sets }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Union of all members, sorted.
    pub fn union(&self) -> VertexSet {
        let mut all: Vec<usize> = self.sets.iter().flatten().copied().collect();
        all.sort_unstable();
        all.dedup();
        all
    }

    pub fn extend(&mut self, other: SetFamily) {
        self.sets.extend(other.sets);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> SignedGraph {
        SignedGraph::complete(3, &[(1, 2)]).unwrap()
    }

    #[test]
    fn pair_index_is_dense() {
        let n = 6;
        let mut seen = vec![false; pair_count(n)];
        for u in 0..n {
            for v in u + 1..n {
                let i = pair_index(n, u, v);
                assert_eq!(i, pair_index(n, v, u));
                assert!(!seen[i]);
                seen[i] = true;
            }
        }
        assert!(seen.into_iter().all(|s| s));
    }

    #[test]
    fn k3_cluster_costs() {
        let g = k3();
        assert!(g.is_complete());
        let whole = Partition::whole(3);
        assert_eq!(cluster_cost(&g, &whole, 0).unwrap(), 1.0);
        let split = Partition::new(3, vec![vec![0, 1], vec![2]]).unwrap();
        assert_eq!(cluster_cost(&g, &split, 0).unwrap(), 1.0);
        assert_eq!(max_disagreement(&g, &split), 1.0);
        assert_eq!(max_disagreement(&g, &Partition::singletons(3)), 2.0);
        assert!(cluster_cost(&g, &split, 2).is_err());
    }

    #[test]
    fn singleton_with_negative_edges_is_free() {
        let g = SignedGraph::complete(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(g.set_cost(&[0]), 0.0);
    }

    #[test]
    fn all_positive_single_cluster() {
        let g = SignedGraph::complete(4, &[]).unwrap();
        assert_eq!(max_disagreement(&g, &Partition::whole(4)), 0.0);
    }

    #[test]
    fn rejects_self_loops_and_duplicates() {
        assert!(SignedGraph::new(2, [(0, 0, 1.0, Sign::Pos)]).is_err());
        assert!(SignedGraph::new(2, [(0, 1, 1.0, Sign::Pos), (1, 0, 1.0, Sign::Neg)]).is_err());
        assert!(SignedGraph::new(2, [(0, 1, -1.0, Sign::Pos)]).is_err());
        assert!(MulticutInstance::new(2, [(0, 1, 1.0)], [(1, 1)]).is_err());
    }

    #[test]
    fn boundary_vio_demand() {
        let path = MulticutInstance::new(3, [(0, 1, 1.0), (1, 2, 1.0)], []).unwrap();
        assert_eq!(path.boundary(&[]), 0.0);
        assert_eq!(path.boundary(&[0, 1, 2]), 0.0);
        assert_eq!(path.boundary(&[1]), 2.0);
        assert_eq!(path.max_demand(), 0);

        let one = MulticutInstance::new(3, [], [(0, 1)]).unwrap();
        assert_eq!(one.vio(&[]), 0);
        assert_eq!(one.vio(&[0, 1]), 1);

        let two = MulticutInstance::new(3, [], [(0, 1), (0, 2)]).unwrap();
        assert_eq!(two.vio(&[0, 1, 2]), 2);
        assert_eq!(two.max_demand(), 2);

        let disjoint = MulticutInstance::new(4, [], [(0, 1), (2, 3)]).unwrap();
        assert_eq!(disjoint.max_demand(), 1);
    }

    #[test]
    fn validate_partition_reports() {
        assert!(validate_partition(3, &[vec![0, 1], vec![2]]).is_ok());
        let dup = validate_partition(2, &[vec![0], vec![0, 1]]).unwrap_err();
        assert!(dup.iter().any(|e| e.contains("duplicate vertex 0")));
        let missing = validate_partition(2, &[vec![0]]).unwrap_err();
        assert!(missing.iter().any(|e| e.contains("missing vertex 1")));
        let range = validate_partition(1, &[vec![0, 3]]).unwrap_err();
        assert!(range.iter().any(|e| e.contains("out of range")));
    }

    #[test]
    fn measure_normalizes() {
        let m = Measure::from_weights(&[1.0, 1.0, 2.0]).unwrap();
        assert!((m.total() - 1.0).abs() < 1e-12);
        assert_eq!(m.get(2), 0.5);
        assert!(Measure::from_weights(&[0.0, 0.0]).is_err());
        assert!(Measure::from_weights(&[-1.0, 2.0]).is_err());
    }

    #[test]
    fn labels_round_trip() {
        let p = Partition::from_labels(&[3, 3, 7, 3, 7]);
        assert_eq!(p.parts, vec![vec![0, 1, 3], vec![2, 4]]);
        assert_eq!(Partition::from_labels(&p.labels(5)), p);
    }
}

//! Covering by multiplicative weights, and aggregation of a covering into a
//! partition.
//!
//! Both procedures are objective-agnostic: the caller supplies the set finder
//! used each covering round and the per-set cost used by aggregation.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Measure, Partition, SetFamily, VertexSet, TOL};

#[derive(Clone, Debug, PartialEq)]
pub struct CoveringConfig {
    /// Guessed number of parts; the finder is asked for mass `1 / k`.
    pub k: usize,
    pub max_rounds: usize,
}

impl CoveringConfig {
    pub fn new(k: usize, n: usize) -> Self {
        CoveringConfig { k: k.max(1), max_rounds: default_max_rounds(k.max(1), n) }
    }

    pub fn h(&self) -> f64 {
        1.0 / self.k as f64
    }
}

/// `ceil(17 k log2 n)`, at least one.
pub fn default_max_rounds(k: usize, n: usize) -> usize {
    let log = (n.max(2) as f64).log2();
    ((17.0 * k as f64 * log).ceil() as usize).max(1)
}

/// Round bound `1 + 16 k ln n` for finders returning mass at least `H / 4`.
pub fn round_bound(k: usize, n: usize) -> f64 {
    1.0 + 16.0 * k as f64 * (n.max(1) as f64).ln()
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoverageStats {
    pub rounds: usize,
    pub family_size: usize,
    /// Smallest fraction of family members containing a vertex.
    pub min_coverage: f64,
    /// Normalized mass covered in each round.
    pub round_mass: Vec<f64>,
}

/// Multiplicative-weights covering.
///
/// Starting from `y = 1` everywhere, each round normalizes `y` into a measure,
/// asks `finder(eta, H, round)` for sets, appends them, and halves `y` on every
/// covered vertex. Stops once `sum(y) <= 1 / n`.
pub fn covering<F>(n: usize, cfg: &CoveringConfig, mut finder: F) -> Result<(SetFamily, CoverageStats)>
where
    F: FnMut(&Measure, f64, usize) -> Result<SetFamily>,
{
    let mut y = vec![1.0f64; n];
    let mut family = SetFamily::default();
    let mut round_mass = Vec::new();
    let h = cfg.h();
    let threshold = 1.0 / n.max(1) as f64;
    let mut rounds = 0;
    while n > 0 && y.iter().sum::<f64>() > threshold {
        if rounds >= cfg.max_rounds {
            let total: f64 = y.iter().sum();
            return Err(Error::FinderContract(format!(
                "covering did not finish in {} rounds (k = {}, remaining weight {total:.3e}, last masses {:?})",
                cfg.max_rounds,
                cfg.k,
                &round_mass[round_mass.len().saturating_sub(5)..]
            )));
        }
        let eta = Measure::from_weights(&y)?;
        let found = finder(&eta, h, rounds)?;
        let mut covered = vec![false; n];
        for set in &found.sets {
            if set.is_empty() {
                return Err(Error::FinderContract("finder returned an empty set".into()));
            }
            for &v in set {
                if v >= n {
                    return Err(Error::FinderContract(format!("finder returned vertex {v} >= n = {n}")));
                }
                covered[v] = true;
            }
        }
        let mass: f64 = (0..n).filter(|&v| covered[v]).map(|v| eta.get(v)).sum();
        round_mass.push(mass);
        for v in 0..n {
            if covered[v] {
                y[v] *= 0.5;
            }
        }
        family.extend(found);
        rounds += 1;
    }
    let min_coverage = (0..n).map(|v| coverage_fraction(&family, v)).fold(f64::INFINITY, f64::min);
    let stats = CoverageStats {
        rounds,
        family_size: family.len(),
        min_coverage: if n == 0 { 1.0 } else { min_coverage },
        round_mass,
    };
    Ok((family, stats))
}

/// Fraction of family members containing `v`.
pub fn coverage_fraction(family: &SetFamily, v: usize) -> f64 {
    if family.is_empty() {
        return 0.0;
    }
    let hits = family.sets.iter().filter(|s| s.contains(&v)).count();
    hits as f64 / family.len() as f64
}

#[derive(Clone, Debug, PartialEq)]
pub struct Aggregation {
    pub partition: Partition,
    /// Family index each output part was carved from.
    pub origins: Vec<usize>,
    /// `sum_i cost(P_i)` after step one and after every repair.
    pub potentials: Vec<f64>,
    pub repairs: usize,
    /// Family order used by step one.
    pub order: Vec<usize>,
}

/// Aggregate under a seeded uniformly random order of the family.
pub fn aggregate<C>(n: usize, family: &SetFamily, b: f64, cost_fn: C, seed: u64) -> Result<Aggregation>
where
    C: FnMut(&[usize]) -> f64,
{
    let mut order: Vec<usize> = (0..family.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    aggregate_ordered(n, family, &order, b, cost_fn)
}

/// Turn a covering into a partition.
///
/// Step one gives each vertex to the first member (in `order`) containing it.
/// Step two repeatedly finds the first nonempty part with cost above `2b`,
/// restores it to its full member and removes that member from every other
/// part. Every output part is a subset of its originating member.
pub fn aggregate_ordered<C>(n: usize, family: &SetFamily, order: &[usize], b: f64, mut cost_fn: C) -> Result<Aggregation>
where
    C: FnMut(&[usize]) -> f64,
{
    let sets: Vec<&VertexSet> = order.iter().map(|&i| &family.sets[i]).collect();
    let mut owner = vec![usize::MAX; n];
    for (pos, set) in sets.iter().enumerate() {
        for &v in set.iter() {
            if v >= n {
                return Err(Error::InvalidInstance(format!("family member holds vertex {v} >= n = {n}")));
            }
            if owner[v] == usize::MAX {
                owner[v] = pos;
            }
        }
    }
    if let Some(v) = owner.iter().position(|&o| o == usize::MAX) {
        return Err(Error::InvalidInstance(format!("vertex {v} is not covered by the family")));
    }

    let parts_of = |owner: &[usize]| {
        let mut parts: Vec<VertexSet> = vec![Vec::new(); sets.len()];
        for (v, &o) in owner.iter().enumerate() {
            parts[o].push(v);
        }
        parts
    };

    let mut parts = parts_of(&owner);
    let mut costs: Vec<f64> = parts.iter().map(|p| if p.is_empty() { 0.0 } else { cost_fn(p) }).collect();
    let mut potentials = vec![costs.iter().sum::<f64>()];
    let scale = if b > TOL { potentials[0] / b } else { potentials[0] };
    let cap = sets.len().max(1) * 10 * (scale.ceil() as usize).max(1);
    let mut repairs = 0;
    loop {
        let Some(i) = (0..parts.len()).find(|&i| !parts[i].is_empty() && costs[i] > 2.0 * b + TOL) else {
            break;
        };
        if repairs >= cap {
            return Err(Error::PotentialNotDecreasing(format!(
                "{repairs} repairs without reaching cost <= 2B (B = {b}, potential {:.6})",
                potentials.last().unwrap()
            )));
        }
        for &v in sets[i].iter() {
            owner[v] = i;
        }
        parts = parts_of(&owner);
        costs = parts.iter().map(|p| if p.is_empty() { 0.0 } else { cost_fn(p) }).collect();
        potentials.push(costs.iter().sum());
        repairs += 1;
    }

    let mut out = Vec::new();
    let mut origins = Vec::new();
    for (pos, part) in parts.into_iter().enumerate() {
        if !part.is_empty() {
            out.push(part);
            origins.push(order[pos]);
        }
    }
    Ok(Aggregation {
        partition: Partition { parts: out },
        origins,
        potentials,
        repairs,
        order: order.to_vec(),
    })
}

/// SplitMix64 mixing of a base seed with a path of indices.
pub fn derive_seed(base: u64, path: &[u64]) -> u64 {
    let mut z = base;
    for &p in path {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15).wrapping_add(p.wrapping_mul(0xD1B5_4A32_D192_ED03));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::MulticutInstance;

    #[test]
    fn whole_set_finder_runs_log_rounds() {
        let cfg = CoveringConfig::new(1, 4);
        let (family, stats) = covering(4, &cfg, |_, _, _| Ok(SetFamily::new(vec![vec![0, 1, 2, 3]]))).unwrap();
        assert_eq!(stats.rounds, 4);
        assert_eq!(family.len(), 4);
        assert!(family.sets.iter().all(|s| s == &vec![0, 1, 2, 3]));
        assert_eq!(stats.min_coverage, 1.0);
    }

    #[test]
    fn single_vertex_needs_no_rounds() {
        let cfg = CoveringConfig::new(1, 1);
        let (family, stats) = covering(1, &cfg, |_, _, _| unreachable!()).unwrap();
        assert!(family.is_empty());
        assert_eq!(stats.rounds, 0);
    }

    #[test]
    fn heaviest_singleton_finder_alternates() {
        let cfg = CoveringConfig::new(2, 2);
        let (family, stats) = covering(2, &cfg, |eta, _, _| {
            let v = if eta.get(1) > eta.get(0) { 1 } else { 0 };
            Ok(SetFamily::new(vec![vec![v]]))
        })
        .unwrap();
        assert_eq!(family.sets, vec![vec![0], vec![1], vec![0], vec![1]]);
        assert_eq!(stats.rounds, 4);
        assert_eq!(stats.min_coverage, 0.5);
    }

    #[test]
    fn stingy_finder_hits_round_cap() {
        let cfg = CoveringConfig { k: 1, max_rounds: 3 };
        let res = covering(8, &cfg, |_, _, _| Ok(SetFamily::new(vec![vec![0]])));
        assert!(matches!(res, Err(Error::FinderContract(_))));
    }

    #[test]
    fn coverage_fraction_basics() {
        let whole = SetFamily::new(vec![vec![0, 1, 2]]);
        assert_eq!(coverage_fraction(&whole, 1), 1.0);
        let halves = SetFamily::new(vec![vec![0], vec![1]]);
        assert_eq!(coverage_fraction(&halves, 0), 0.5);
        assert_eq!(coverage_fraction(&halves, 1), 0.5);
    }

    #[test]
    fn listed_order_without_repairs() {
        let family = SetFamily::new(vec![vec![0, 1], vec![1, 2]]);
        let agg = aggregate_ordered(3, &family, &[0, 1], 100.0, |_| 0.0).unwrap();
        assert_eq!(agg.partition.parts, vec![vec![0, 1], vec![2]]);
        assert_eq!(agg.origins, vec![0, 1]);
        assert_eq!(agg.repairs, 0);
    }

    #[test]
    fn whole_family_any_seed() {
        let family = SetFamily::new(vec![vec![0, 1, 2, 3]]);
        for seed in 0..5 {
            let agg = aggregate(4, &family, 0.0, |_| 0.0, seed).unwrap();
            assert_eq!(agg.partition.parts, vec![vec![0, 1, 2, 3]]);
        }
    }

    #[test]
    fn uncovered_vertex_rejected() {
        let family = SetFamily::new(vec![vec![0]]);
        assert!(aggregate(2, &family, 1.0, |_| 0.0, 0).is_err());
    }

    fn permutations(k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(k - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, k - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn path_family_every_order_within_twice_b() {
        let path = MulticutInstance::new(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)], []).unwrap();
        let family = SetFamily::new(vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0], vec![3]]);
        let orders = permutations(5);
        assert_eq!(orders.len(), 120);
        for order in orders {
            let agg = aggregate_ordered(4, &family, &order, 2.0, |s| path.boundary(s)).unwrap();
            for part in &agg.partition.parts {
                assert!(path.boundary(part) <= 4.0 + 1e-9);
            }
            assert!(crate::graph::validate_partition(4, &agg.partition.parts).is_ok());
        }
    }

    #[test]
    fn repair_restores_member_and_lowers_potential() {
        // Star centre 0 with leaves 1..=4; member {0,1,2,3,4} is cheap, but
        // the order carves it down to {0} whose boundary is 4.
        let star = MulticutInstance::new(5, (1..5).map(|v| (0, v, 1.0)), []).unwrap();
        let family = SetFamily::new(vec![vec![1], vec![2], vec![3], vec![4], vec![0, 1, 2, 3, 4]]);
        let agg = aggregate_ordered(5, &family, &[0, 1, 2, 3, 4], 1.0, |s| star.boundary(s)).unwrap();
        assert_eq!(agg.repairs, 1);
        assert_eq!(agg.partition.parts, vec![vec![0, 1, 2, 3, 4]]);
        assert!(agg.potentials[1] < agg.potentials[0] - 2.0 + 1e-9);
    }
}

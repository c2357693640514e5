use minmax_cc::cc_complete::{self, solve_guess, CcLayout};
use minmax_cc::cover::{aggregate, covering, CoveringConfig};
use minmax_cc::graph::{
    max_disagreement, Measure, MulticutInstance, Partition, SetFamily, Sign, SignedGraph,
};
use minmax_cc::io;
use minmax_cc::lp::{self, Constraint, LpProblem, LpStatus};
use minmax_cc::metric::max_triangle_violation;
use minmax_cc::multicut::{self, mc_lp_violation};
use minmax_cc::oracle;
use minmax_cc::reduction::{cc_to_multicut, clustering_to_partition, partition_to_clustering};
use proptest::prelude::*;

fn signed_graph(max_n: usize) -> impl Strategy<Value = SignedGraph> {
    (2..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(proptest::option::of((1u8..=4, any::<bool>())), pairs).prop_map(move |cells| {
            let mut edges = Vec::new();
            let mut i = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if let Some((w, pos)) = cells[i] {
                        edges.push((u, v, w as f64, if pos { Sign::Pos } else { Sign::Neg }));
                    }
                    i += 1;
                }
            }
            SignedGraph::new(n, edges).unwrap()
        })
    })
}

fn complete_graph(min_n: usize, max_n: usize) -> impl Strategy<Value = SignedGraph> {
    (min_n..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |neg| {
            let pairs: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            let chosen: Vec<_> = pairs.iter().zip(&neg).filter(|(_, &b)| b).map(|(&p, _)| p).collect();
            SignedGraph::complete(n, &chosen).unwrap()
        })
    })
}

fn multicut_instance(max_n: usize) -> impl Strategy<Value = MulticutInstance> {
    (2..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        (
            proptest::collection::vec(proptest::option::of(1u8..=3), pairs),
            proptest::collection::vec(any::<bool>(), pairs),
        )
            .prop_map(move |(w, terminal)| {
                let all: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
                let edges: Vec<_> = all.iter().zip(&w).filter_map(|(&(u, v), w)| w.map(|w| (u, v, w as f64))).collect();
                // Keep few pairs so most instances have a separating partition quickly.
                let st: Vec<_> = all.iter().zip(&terminal).filter(|(_, &t)| t).map(|(&p, _)| p).take(3).collect();
                MulticutInstance::new(n, edges, st).unwrap()
            })
    })
}

fn labels(n: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(0..n, n)
}

fn graph_and_labels(max_n: usize) -> impl Strategy<Value = (SignedGraph, Vec<usize>)> {
    signed_graph(max_n).prop_flat_map(|g| {
        let n = g.n();
        (Just(g), labels(n))
    })
}

fn mc_and_subset(max_n: usize) -> impl Strategy<Value = (MulticutInstance, Vec<bool>, Vec<bool>)> {
    multicut_instance(max_n).prop_flat_map(|mc| {
        let n = mc.n();
        (Just(mc), proptest::collection::vec(any::<bool>(), n), proptest::collection::vec(any::<bool>(), n))
    })
}

fn members(mask: &[bool]) -> Vec<usize> {
    mask.iter().enumerate().filter(|(_, &b)| b).map(|(v, _)| v).collect()
}

proptest! {
    #[test]
    fn cluster_costs_count_cut_edges_twice((g, l) in graph_and_labels(9)) {
        let c = Partition::from_labels(&l);
        let total: f64 = c.parts.iter().map(|p| g.set_cost(p)).sum();
        let lab = c.labels(g.n());
        let mut expect = 0.0;
        for e in g.edges() {
            match e.sign {
                Sign::Pos if lab[e.u] != lab[e.v] => expect += 2.0 * e.weight,
                Sign::Neg if lab[e.u] == lab[e.v] => expect += e.weight,
                _ => {}
            }
        }
        prop_assert!((total - expect).abs() < 1e-9);
    }

    #[test]
    fn boundary_is_symmetric((mc, s, _) in mc_and_subset(9)) {
        let inside = members(&s);
        let outside: Vec<usize> = (0..mc.n()).filter(|v| !s[*v]).collect();
        prop_assert_eq!(mc.boundary(&inside), mc.boundary(&outside));
    }

    #[test]
    fn vio_is_monotone((mc, s, keep) in mc_and_subset(9)) {
        let big = members(&s);
        let small: Vec<usize> = big.iter().copied().filter(|&v| keep[v]).collect();
        prop_assert!(mc.vio(&small) <= mc.vio(&big));
    }

    #[test]
    fn labels_round_trip(l in labels(10)) {
        let p = Partition::from_labels(&l);
        let back = Partition::from_labels(&p.labels(l.len()));
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(p.canonical(), p.canonical().canonical());
        prop_assert!(minmax_cc::graph::validate_partition(l.len(), &p.parts).is_ok());
    }

    #[test]
    fn signed_text_round_trip(g in signed_graph(8)) {
        prop_assert_eq!(io::parse_signed(&io::write_signed(&g)).unwrap(), g.clone());
        if g.is_complete() {
            prop_assert_eq!(io::parse_signed(&io::write_signed_complete(&g).unwrap()).unwrap(), g);
        }
    }

    #[test]
    fn multicut_text_round_trip(mc in multicut_instance(8)) {
        prop_assert_eq!(io::parse_mc(&io::write_mc(&mc)).unwrap(), mc);
    }

    #[test]
    fn solution_text_round_trip(l in labels(9), cost in 0u32..1000) {
        let p = Partition::from_labels(&l);
        let cost = cost as f64 / 8.0;
        let sol = io::parse_solution(&io::write_solution(&p, cost)).unwrap();
        prop_assert_eq!(sol.partition, p);
        prop_assert_eq!(sol.max_cost, Some(cost));
    }

    #[test]
    fn lifted_clustering_has_equal_cost((g, l) in graph_and_labels(6)) {
        let (mc, map) = cc_to_multicut(&g);
        let c = Partition::from_labels(&l);
        let p = clustering_to_partition(&map, &c).unwrap();
        prop_assert!(mc.separates_all(&p));
        prop_assert!((mc.max_boundary(&p) - max_disagreement(&g, &c)).abs() < 1e-9);
        prop_assert_eq!(partition_to_clustering(&map, &p).unwrap().canonical(), c.canonical());
    }

    #[test]
    fn restricted_parts_cost_at_most_boundary((g, l) in graph_and_labels(5), extra in labels(15)) {
        let (mc, map) = cc_to_multicut(&g);
        // Original labels plus arbitrary labels for the added vertices.
        let mut full = l.clone();
        full.extend(extra.iter().take(map.added.len()).map(|&x| x % (g.n() + map.added.len())));
        let p = Partition::from_labels(&full);
        prop_assume!(mc.separates_all(&p));
        for part in &p.parts {
            let restricted: Vec<usize> = part.iter().copied().filter(|&v| v < g.n()).collect();
            prop_assert!(g.set_cost(&restricted) <= mc.boundary(part) + 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn oracle_is_below_heuristic(g in complete_graph(3, 7), seed in any::<u64>()) {
        let (c, report) = cc_complete::solve_cc_complete(&g, seed, None).unwrap();
        let opt = oracle::exact_cc(&g).unwrap().0;
        let cost = max_disagreement(&g, &c);
        prop_assert!(opt <= cost + 1e-9);
        prop_assert!(cost <= 14.0 * opt + 1e-6);
        prop_assert!((report.max_cost - cost).abs() < 1e-9);
    }

    #[test]
    fn cc_lp_points_are_metric(g in complete_graph(3, 8), guess in 0usize..8, h in 0.05f64..1.0) {
        let n = g.n();
        let guess = guess % n;
        let eta = Measure::uniform(n);
        let sol = solve_guess(&g, &eta, h, guess).unwrap();
        prop_assert_eq!(sol.x[guess], 1.0);
        prop_assert!(max_triangle_violation(n, &sol.d) <= 1e-6);
        let mass: f64 = sol.x.iter().map(|x| x / n as f64).sum();
        prop_assert!(mass >= h - 1e-6);
        // Solving twice gives the same bits.
        prop_assert_eq!(solve_guess(&g, &eta, h, guess).unwrap(), sol.clone());
        let layout = CcLayout::new(&g);
        prop_assert_eq!(layout.var_count(), n + n * (n - 1) / 2 + layout.negative.len());
    }

    #[test]
    fn mc_lp_points_are_feasible(mc in multicut_instance(7), h in 0.1f64..0.5) {
        let eta = Measure::uniform(mc.n());
        match multicut::solve_mc_lp(&mc, &eta, h) {
            Ok(sol) => {
                prop_assert!(mc_lp_violation(&mc, &eta, h, &sol.x, &sol.z) <= 1e-6);
                let fam = multicut::heuristic_separator(&sol, &mc, &eta, 1).unwrap();
                prop_assert!(fam.sets.iter().all(|s| mc.vio(s) == 0));
            }
            Err(minmax_cc::Error::Infeasible) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn multicut_output_separates(mc in multicut_instance(7), seed in any::<u64>()) {
        prop_assume!(mc.pairs().iter().all(|&(s, t)| s != t));
        let (p, report) = multicut::solve_multicut(&mc, seed, None).unwrap();
        prop_assert!(mc.separates_all(&p));
        prop_assert!((mc.max_boundary(&p) - report.max_boundary).abs() < 1e-9);
        let opt = oracle::exact_multicut(&mc).unwrap().0;
        prop_assert!(opt <= report.max_boundary + 1e-9);
    }

    #[test]
    fn aggregated_parts_sit_inside_their_members(
        n in 2usize..10,
        raw in proptest::collection::vec(proptest::collection::vec(any::<bool>(), 10), 1..8),
        seed in any::<u64>(),
    ) {
        let mut sets: Vec<Vec<usize>> = raw.iter().map(|m| members(&m[..n])).filter(|s| !s.is_empty()).collect();
        sets.push((0..n).collect());
        let family = SetFamily::new(sets);
        let g = SignedGraph::complete(n, &[]).unwrap();
        let b = family.sets.iter().map(|s| g.set_cost(s)).fold(0.0, f64::max);
        let agg = aggregate(n, &family, b, |s| g.set_cost(s), seed).unwrap();
        prop_assert!(minmax_cc::graph::validate_partition(n, &agg.partition.parts).is_ok());
        for (part, &o) in agg.partition.parts.iter().zip(&agg.origins) {
            prop_assert!(part.iter().all(|v| family.sets[o].contains(v)));
            prop_assert!(g.set_cost(part) <= 2.0 * b + 1e-9);
        }
        prop_assert!(agg.potentials.windows(2).all(|w| w[1] < w[0]));
    }
}

#[test]
fn covering_stops_within_round_limit() {
    // A finder that always returns the heaviest vertex.
    for n in 2..9 {
        let cfg = CoveringConfig::new(1, n);
        let (fam, stats) = covering(n, &cfg, |eta, _, _| {
            let v = (0..n).max_by(|&a, &b| eta.get(a).total_cmp(&eta.get(b)).then(b.cmp(&a))).unwrap();
            Ok(SetFamily::new(vec![vec![v]]))
        })
        .unwrap();
        assert!(stats.rounds <= cfg.max_rounds);
        assert_eq!(fam.union(), (0..n).collect::<Vec<_>>());
    }
}

#[test]
fn lp_handles_bounds_and_infeasibility() {
    // max x + y st x + 2y <= 4, 3x + y <= 6, 0 <= x, y <= 10 as a minimization.
    let mut p = LpProblem::new(2);
    p.set_bounds(0, 0.0, 10.0);
    p.set_bounds(1, 0.0, 10.0);
    p.add_objective(0, -1.0);
    p.add_objective(1, -1.0);
    p.add_constraint(Constraint::le(vec![(0, 1.0), (1, 2.0)], 4.0));
    p.add_constraint(Constraint::le(vec![(0, 3.0), (1, 1.0)], 6.0));
    let sol = lp::solve(&p).unwrap();
    assert_eq!(sol.status, LpStatus::Optimal);
    assert!((sol.objective + 2.8).abs() < 1e-9);
    assert!((sol.values[0] - 1.6).abs() < 1e-9 && (sol.values[1] - 1.2).abs() < 1e-9);

    p.add_constraint(Constraint::ge(vec![(0, 1.0)], 5.0));
    assert_eq!(lp::solve(&p).unwrap().status, LpStatus::Infeasible);
}


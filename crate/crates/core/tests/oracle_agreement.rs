mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{apsp, directed_gnm, gnm, INF};
use sparsify::constructions::ErrorBudget;
use sparsify::demand::DemandSet;
use sparsify::graph::{Path, Subgraph};
use sparsify::harness::{sample_pairs, PairMode};
use sparsify::oracle::{batch_paths, CanonicalPathOracle};
use sparsify::search::Metric;
use sparsify::verify::verify_all;

#[test]
fn canonical_paths_are_shortest_and_consistent() {
    for (g, metric) in [
        (gnm(300, 6, 1), Metric::Hops),
        (directed_gnm(200, 1200, Some(9), 2), Metric::Weighted),
    ] {
        let d = apsp(&g, None);
        let oracle = CanonicalPathOracle::with_metric(&g, metric);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let u = rng.gen_range(0..g.node_count());
            let v = rng.gen_range(0..g.node_count());
            let Some(path) = oracle.canonical_path(u, v).unwrap() else {
                assert_eq!(d[u][v], INF);
                continue;
            };
            // a valid walk in g of optimal length
            let rebuilt = Path::from_nodes(&g, path.nodes()).unwrap();
            assert_eq!(rebuilt.edges(), path.edges());
            assert_eq!(path.weight(), d[u][v]);
            // every subpath is the canonical path between its endpoints
            let k = path.nodes().len();
            let i = rng.gen_range(0..k);
            let j = rng.gen_range(i..k);
            let sub = oracle
                .canonical_path(path.nodes()[i], path.nodes()[j])
                .unwrap()
                .unwrap();
            assert_eq!(sub.nodes(), &path.nodes()[i..=j]);
        }
    }
}

#[test]
fn batch_matches_single_queries() {
    let g = gnm(400, 8, 3);
    let oracle = CanonicalPathOracle::with_metric(&g, Metric::Hops);
    let pairs: Vec<_> = (0..150).map(|i| (i % 37, (i * 11) % 400)).collect();
    let batch = batch_paths(&g, Metric::Hops, &pairs);
    for (&(u, v), p) in pairs.iter().zip(batch) {
        assert_eq!(p, oracle.canonical_path(u, v).unwrap());
    }
}

#[test]
fn verify_all_agrees_with_floyd_warshall() {
    let g = gnm(200, 8, 4);
    let pairs = sample_pairs(&g, PairMode::Uniform { p: 400 }, 4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let h = Subgraph::from_edges(&g, (0..g.edge_count()).filter(|_| rng.gen_bool(0.6))).unwrap();
    let dg = apsp(&g, None);
    let dh = apsp(&g, Some(&h));
    for k in [0, 2, 4, 6] {
        let rep = verify_all(&g, &h, &pairs, ErrorBudget::Additive(k));
        for (row, p) in rep.rows().iter().zip(pairs.iter()) {
            assert_eq!(row.dist_g, Some(dg[p.s][p.t]));
            let expect_h = (dh[p.s][p.t] != INF).then_some(dh[p.s][p.t]);
            assert_eq!(row.dist_h, expect_h);
            let ok = expect_h.is_some_and(|x| x <= dg[p.s][p.t] + k);
            assert_eq!(row.satisfied, ok);
        }
    }
}

#[test]
fn verify_all_on_weighted_digraph() {
    let g = directed_gnm(150, 900, Some(20), 6);
    let pairs = sample_pairs(&g, PairMode::Uniform { p: 300 }, 6).unwrap();
    let h = Subgraph::from_edges(&g, (0..g.edge_count()).filter(|e| e % 3 != 0)).unwrap();
    let dg = apsp(&g, None);
    let dh = apsp(&g, Some(&h));
    let exact = verify_all(&g, &h, &pairs, ErrorBudget::Additive(0));
    let reach = verify_all(&g, &h, &pairs, ErrorBudget::Reachability);
    for ((a, b), p) in exact.rows().iter().zip(reach.rows()).zip(pairs.iter()) {
        assert_eq!(a.satisfied, dh[p.s][p.t] == dg[p.s][p.t]);
        assert_eq!(b.satisfied, dh[p.s][p.t] != INF);
    }
}

#[test]
fn demand_sets_drop_what_they_should() {
    let g = directed_gnm(30, 40, None, 7);
    let d = apsp(&g, None);
    let raw: Vec<_> = (0..30).flat_map(|s| (0..30).map(move |t| (s, t))).collect();
    let set = DemandSet::new(&g, raw).unwrap();
    let expected = (0..30)
        .flat_map(|s| (0..30).map(move |t| (s, t)))
        .filter(|&(s, t)| s != t && d[s][t] != INF)
        .count();
    assert_eq!(set.len(), expected);
    assert!(set.iter().enumerate().all(|(i, p)| p.id == i));
}

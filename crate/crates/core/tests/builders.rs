mod common;

use common::{apsp, directed_gnm, gnm};
use sparsify::bootstrap::{bootstrap_complete, BootstrapConfig};
use sparsify::constructions::{
    build_slack, build_subsetwise_plus2, build_sxv_preserver, ErrorBudget, Kind, ParamOverrides,
    PreserveMode,
};
use sparsify::demand::DemandSet;
use sparsify::graph::Graph;
use sparsify::harness::{generate_graph, sample_pairs, GraphSpec, PairMode};
use sparsify::sampling::d_initialization;
use sparsify::verify::{check_neighborhood_lemma, verify_all};

fn instance(kind: Kind, seed: u64) -> Graph {
    match kind {
        Kind::Reachability => directed_gnm(400, 1200, None, seed),
        Kind::Preserver => directed_gnm(300, 1500, Some(10), seed),
        _ => gnm(400, 8, seed),
    }
}

#[test]
fn claimed_pairs_are_satisfied_and_budgets_hold() {
    for kind in Kind::ALL {
        for seed in 0..4 {
            let g = instance(kind, seed);
            let pairs = sample_pairs(&g, PairMode::Uniform { p: 150 }, seed).unwrap();
            let out = build_slack(kind, &g, &pairs, &ParamOverrides::default(), seed).unwrap();
            let rep = verify_all(&g, &out.subgraph, &pairs, kind.error_budget());
            for &id in &out.claimed {
                assert!(
                    rep.rows()[id].satisfied,
                    "{kind} seed {seed}: claimed pair {id} unsatisfied"
                );
            }
            assert!(out.subgraph.len() <= out.budget(), "{kind} seed {seed}");
            assert_eq!(
                out.phases.iter().map(|p| p.added).sum::<usize>(),
                out.subgraph.len()
            );
        }
    }
}

#[test]
fn spanners_contain_their_initialization() {
    for kind in [Kind::Plus2, Kind::Plus4, Kind::Plus6] {
        let g = gnm(300, 10, 11);
        let pairs = sample_pairs(&g, PairMode::Uniform { p: 100 }, 1).unwrap();
        let out = build_slack(kind, &g, &pairs, &ParamOverrides::default(), 2).unwrap();
        let init = d_initialization(&g, out.params.d).unwrap();
        assert!(init.is_subset(&out.subgraph), "{kind}");
    }
}

#[test]
fn slack_builders_are_deterministic() {
    for kind in Kind::ALL {
        let g = instance(kind, 21);
        let pairs = sample_pairs(&g, PairMode::Uniform { p: 120 }, 21).unwrap();
        let a = build_slack(kind, &g, &pairs, &ParamOverrides::default(), 77).unwrap();
        let b = build_slack(kind, &g, &pairs, &ParamOverrides::default(), 77).unwrap();
        assert_eq!(a.subgraph, b.subgraph, "{kind}");
        assert_eq!(a.claimed, b.claimed, "{kind}");
    }
}

#[test]
fn bootstrap_is_complete_on_small_instances() {
    for kind in Kind::ALL {
        for seed in 0..3 {
            let g = instance(kind, 100 + seed);
            let pairs = sample_pairs(&g, PairMode::Uniform { p: 200 }, seed).unwrap();
            let (h, rep) =
                bootstrap_complete(&g, &pairs, &BootstrapConfig::new(kind, seed)).unwrap();
            assert!(verify_all(&g, &h, &pairs, kind.error_budget()).all_satisfied());
            assert!(!rep.forced_base);
            assert_eq!(rep.total_edges, h.len());
        }
    }
}

#[test]
fn subsetwise_matches_apsp() {
    for seed in 0..3 {
        let g = gnm(250, 8, seed);
        let s: Vec<_> = (0..25).map(|i| i * 10).collect();
        let out = build_subsetwise_plus2(&g, &s).unwrap();
        let dg = apsp(&g, None);
        let dh = apsp(&g, Some(&out.subgraph));
        for &a in &s {
            for &b in &s {
                assert!(dh[a][b] <= dg[a][b] + 2, "seed {seed}: ({a}, {b})");
            }
        }
    }
}

#[test]
fn sxv_preserver_is_exact() {
    let g = directed_gnm(200, 1000, Some(7), 3);
    let pairs = sample_pairs(&g, PairMode::Sxv { s: 5, p: 300 }, 3).unwrap();
    let out = build_sxv_preserver(&g, &pairs, PreserveMode::Distance).unwrap();
    assert!(verify_all(&g, &out.subgraph, &pairs, ErrorBudget::Additive(0)).all_satisfied());
    let out = build_sxv_preserver(&g, &pairs, PreserveMode::Reachability).unwrap();
    assert!(verify_all(&g, &out.subgraph, &pairs, ErrorBudget::Reachability).all_satisfied());
}

#[test]
fn neighborhood_bound_on_random_graphs() {
    let g = gnm(500, 8, 5);
    for d in [2, 5, 10] {
        let h = d_initialization(&g, d).unwrap();
        assert!(
            check_neighborhood_lemma(&g, &h, d, 300, d as u64).unwrap(),
            "d = {d}"
        );
    }
}

#[test]
fn layered_dag_reachability() {
    let g = generate_graph(&GraphSpec::LayeredDag { n: 400, m: 1600 }, 8).unwrap();
    let pairs = sample_pairs(&g, PairMode::Uniform { p: 200 }, 8).unwrap();
    let (h, _) =
        bootstrap_complete(&g, &pairs, &BootstrapConfig::new(Kind::Reachability, 8)).unwrap();
    assert!(verify_all(&g, &h, &pairs, ErrorBudget::Reachability).all_satisfied());
}

#[test]
fn unsupported_settings_are_rejected() {
    let d = directed_gnm(50, 200, None, 1);
    let u = gnm(50, 4, 1);
    let pd = DemandSet::new(&d, [(0, 1)]).unwrap();
    let pu = DemandSet::new(&u, [(0, 1)]).unwrap();
    for kind in [Kind::Plus2, Kind::Plus4, Kind::Plus6] {
        assert!(build_slack(kind, &d, &pd, &ParamOverrides::default(), 0).is_err());
    }
    assert!(build_slack(Kind::Reachability, &u, &pu, &ParamOverrides::default(), 0).is_err());
}

fn tight(kind: Kind) -> ParamOverrides {
    match kind {
        Kind::Preserver | Kind::Reachability => ParamOverrides {
            ell: Some(2),
            ..Default::default()
        },
        _ => ParamOverrides {
            ell: Some(1),
            d: Some(2),
            medium_threshold: Some(3),
        },
    }
}

#[test]
fn sampling_regime_claims_and_fractions() {
    for kind in Kind::ALL {
        let mut fractions = Vec::new();
        for seed in 0..6 {
            let g = instance(kind, 200 + seed);
            let pairs = sample_pairs(&g, PairMode::Uniform { p: 150 }, seed).unwrap();
            let out = build_slack(kind, &g, &pairs, &tight(kind), seed).unwrap();
            let rep = verify_all(&g, &out.subgraph, &pairs, kind.error_budget());
            for &id in &out.claimed {
                assert!(
                    rep.rows()[id].satisfied,
                    "{kind} seed {seed}: claimed pair {id}"
                );
            }
            assert!(out.subgraph.len() <= out.budget());
            fractions.push(rep.satisfied_fraction());
        }
        let mean = fractions.iter().sum::<f64>() / fractions.len() as f64;
        assert!(mean >= 0.25, "{kind}: mean fraction {mean}");
    }
}

#[test]
fn sampling_regime_bootstrap_converges() {
    for kind in Kind::ALL {
        for seed in 0..3 {
            let g = instance(kind, 300 + seed);
            let pairs = sample_pairs(&g, PairMode::Uniform { p: 200 }, seed).unwrap();
            let mut cfg = BootstrapConfig::new(kind, seed);
            cfg.overrides = tight(kind);
            let (h, rep) = bootstrap_complete(&g, &pairs, &cfg).unwrap();
            assert!(verify_all(&g, &h, &pairs, kind.error_budget()).all_satisfied());
            assert!(!rep.forced_base, "{kind} seed {seed}");
            assert!(
                rep.rounds.len() as f64 <= 10.0 * 200f64.log2(),
                "{kind}: {} rounds",
                rep.rounds.len()
            );
        }
    }
}

use crate::constructions::{
    run_with_routes, BuildOutput, Kind, ParamOverrides, Params, PhaseStat, Route,
};
use crate::demand::DemandSet;
use crate::error::Result;
use crate::graph::{Graph, Path, Subgraph};
use crate::oracle::CanonicalTree;
use crate::par;
use crate::sampling::{d_initialization, derive_seed, sample_nodes, NodeSample, Seed};
use crate::search::{Direction, Metric};

/// +2 pairwise spanner with slack on an undirected unweighted graph.
///
/// Starts from a `d`-initialization. Pairs whose canonical path misses at
/// most `ell` edges of it get those edges. Nodes sampled with probability
/// `1/(ell d)` contribute a BFS tree; a long pair whose path touches a
/// sampled node or one of its neighbours ends up within +2.
pub fn build_plus2_slack(
    g: &Graph,
    pairs: &DemandSet,
    overrides: &ParamOverrides,
    seed: Seed,
) -> Result<BuildOutput> {
    run_with_routes(Kind::Plus2, g, pairs, overrides, seed)
}

pub(super) fn slack(
    g: &Graph,
    pairs: &DemandSet,
    routes: &[&Path],
    params: Params,
    seed: Seed,
) -> Result<BuildOutput> {
    let n = g.node_count();
    let init = d_initialization(g, params.d)?;
    let mut h = init.clone();
    let mut claimed = Vec::new();
    let routes: Vec<Route> = routes.iter().map(|p| Route::new(p, &init)).collect();

    let mut short = 0;
    let mut added_short = 0;
    for (pair, route) in pairs.iter().zip(&routes) {
        if route.missing_count() <= params.ell {
            short += 1;
            added_short += h.extend(route.missing_edges());
            claimed.push(pair.id);
        }
    }

    let q = if short < pairs.len() {
        params.probability
    } else {
        0.0
    };
    let sample = sample_nodes(n, q, derive_seed(seed, 1))?;
    let added_trees = h.union_with(&bfs_forest(g, &sample));

    let near = closed_neighborhood(g, None, &sample);
    for (pair, route) in pairs.iter().zip(&routes) {
        if route.missing_count() > params.ell && route.path.nodes().iter().any(|&v| near[v]) {
            claimed.push(pair.id);
        }
    }
    claimed.sort_unstable();

    Ok(BuildOutput {
        subgraph: h,
        params,
        phases: vec![
            PhaseStat {
                name: "d-initialization",
                added: init.len(),
                budget: n * params.d,
            },
            PhaseStat {
                name: "short-missing",
                added: added_short,
                budget: short * params.ell,
            },
            PhaseStat {
                name: "bfs-trees",
                added: added_trees,
                budget: sample.len() * (n - 1),
            },
        ],
        claimed,
        samples: vec![("R", sample.len())],
    })
}

/// Union of canonical BFS trees rooted at every sampled node.
pub(super) fn bfs_forest(g: &Graph, sample: &NodeSample) -> Subgraph {
    let trees = par::map(sample.nodes(), |&r| {
        CanonicalTree::build(g, r, Direction::Out, Metric::Hops).to_subgraph(g)
    });
    let mut h = Subgraph::empty(g);
    for t in &trees {
        h.union_with(t);
    }
    h
}

/// Sampled nodes and their neighbours, through edges of `within` when given.
pub(super) fn closed_neighborhood(
    g: &Graph,
    within: Option<&Subgraph>,
    sample: &NodeSample,
) -> Vec<bool> {
    let mut near = sample.mask(g.node_count());
    for &r in sample.nodes() {
        for &(v, e) in g.out_neighbors(r) {
            if within.is_none_or(|h| h.contains(e)) {
                near[v] = true;
            }
        }
    }
    near
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::ErrorBudget;
    use crate::verify::verify_all;

    #[test]
    fn tree_input_is_exact() {
        // a binary tree on 31 nodes
        let edges: Vec<_> = (1..31).map(|i| ((i - 1) / 2, i)).collect();
        let g = Graph::undirected(31, &edges).unwrap();
        let p = DemandSet::new(&g, (0..20).map(|i| (i, 30 - i))).unwrap();
        for seed in 0..5 {
            let out = build_plus2_slack(&g, &p, &ParamOverrides::default(), seed).unwrap();
            let rep = verify_all(&g, &out.subgraph, &p, ErrorBudget::Additive(2));
            assert_eq!(
                rep.max_error(),
                if rep.satisfied_count() == p.len() {
                    Some(0)
                } else {
                    None
                }
            );
            for &id in &out.claimed {
                assert!(rep.rows()[id].satisfied);
            }
        }
    }

    #[test]
    fn adjacent_pairs_are_always_short() {
        let g = Graph::undirected(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let p = DemandSet::new(&g, [(0, 1), (2, 3), (0, 2)]).unwrap();
        let out = build_plus2_slack(&g, &p, &ParamOverrides::default(), 4).unwrap();
        assert_eq!(out.claimed, vec![0, 1, 2]);
        let rep = verify_all(&g, &out.subgraph, &p, ErrorBudget::Additive(2));
        assert_eq!(rep.satisfied_count(), 3);
    }

    #[test]
    fn rejects_directed_or_weighted() {
        let g = Graph::unweighted(2, true, &[(0, 1)]).unwrap();
        let p = DemandSet::new(&g, [(0, 1)]).unwrap();
        assert!(matches!(
            build_plus2_slack(&g, &p, &ParamOverrides::default(), 0),
            Err(crate::Error::Unsupported(_))
        ));
    }
}

use super::plus2::closed_neighborhood;
use super::subsetwise::build_subsetwise_plus2;
use crate::constructions::{
    run_with_routes, BuildOutput, Kind, ParamOverrides, Params, PhaseStat, Route,
};
use crate::demand::DemandSet;
use crate::error::Result;
use crate::graph::{Graph, Path};
use crate::sampling::{d_initialization, derive_seed, sample_nodes, Seed};

/// +6 pairwise spanner with slack on an undirected unweighted graph.
///
/// After a `d`-initialization, short pairs (at most `ell` missing edges) get
/// their missing edges and long pairs get the first and last `ell` of them.
/// A subsetwise +2 spanner on a `1/(ell d)` node sample then links any two
/// sampled nodes that sit next to a long pair's prefix and suffix.
pub fn build_plus6_slack(
    g: &Graph,
    pairs: &DemandSet,
    overrides: &ParamOverrides,
    seed: Seed,
) -> Result<BuildOutput> {
    run_with_routes(Kind::Plus6, g, pairs, overrides, seed)
}

pub(super) fn slack(
    g: &Graph,
    pairs: &DemandSet,
    routes: &[&Path],
    params: Params,
    seed: Seed,
) -> Result<BuildOutput> {
    let n = g.node_count();
    let ell = params.ell;
    let init = d_initialization(g, params.d)?;
    let mut h = init.clone();
    let mut claimed = Vec::new();
    let routes: Vec<Route> = routes.iter().map(|p| Route::new(p, &init)).collect();

    let (mut short, mut long) = (0, 0);
    let (mut added_short, mut added_ends) = (0, 0);
    for (pair, route) in pairs.iter().zip(&routes) {
        if route.missing_count() <= ell {
            short += 1;
            added_short += h.extend(route.missing_edges());
            claimed.push(pair.id);
        } else {
            long += 1;
            added_ends += h.extend(route.prefix_suffix_edges(ell));
            if route.prefix_suffix_cover(ell) {
                claimed.push(pair.id);
            }
        }
    }

    let q = if long > 0 { params.probability } else { 0.0 };
    let sample = sample_nodes(n, q, derive_seed(seed, 1))?;
    let (added_linked, linked_budget) = if sample.is_empty() {
        (0, 0)
    } else {
        let linked = build_subsetwise_plus2(g, sample.nodes())?;
        (h.union_with(&linked.subgraph), linked.budget())
    };

    // r1 next to the exact prefix and r2 next to the exact suffix, through edges of H
    let near = closed_neighborhood(g, Some(&h), &sample);
    for (pair, route) in pairs.iter().zip(&routes) {
        if route.missing_count() <= ell || route.prefix_suffix_cover(ell) {
            continue;
        }
        let head = route.exact_prefix_nodes(ell).iter().any(|&v| near[v]);
        let tail = route.exact_suffix_nodes(ell).iter().any(|&v| near[v]);
        if head && tail {
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
                budget: short * ell,
            },
            PhaseStat {
                name: "prefix-suffix",
                added: added_ends,
                budget: long * 2 * ell,
            },
            PhaseStat {
                name: "subsetwise-plus2",
                added: added_linked,
                budget: linked_budget,
            },
        ],
        claimed,
        samples: vec![("R", sample.len())],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::ErrorBudget;
    use crate::verify::verify_all;

    #[test]
    fn single_pair_is_short_and_exact() {
        let g = Graph::undirected(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        let p = DemandSet::new(&g, [(0, 3)]).unwrap();
        let out = build_plus6_slack(&g, &p, &ParamOverrides::default(), 2).unwrap();
        assert_eq!(out.params.ell, 6);
        assert_eq!(out.claimed, vec![0]);
        let rep = verify_all(&g, &out.subgraph, &p, ErrorBudget::Additive(0));
        assert_eq!(rep.satisfied_count(), 1);
    }

    #[test]
    fn claims_hold_on_a_long_cycle_with_chords() {
        // cycle of 60 with a chord every 6 nodes to a hub-free ring offset
        let n = 60;
        let mut e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        for i in (0..n).step_by(6) {
            e.push((i, (i + 3) % n));
        }
        let g = Graph::undirected(n, &e).unwrap();
        let p = DemandSet::new(&g, (0..30).map(|i| (i, (i + 29) % n))).unwrap();
        let o = ParamOverrides {
            ell: Some(1),
            d: Some(1),
            ..Default::default()
        };
        for seed in 0..20 {
            let out = build_plus6_slack(&g, &p, &o, seed).unwrap();
            let rep = verify_all(&g, &out.subgraph, &p, ErrorBudget::Additive(6));
            for &id in &out.claimed {
                assert!(rep.rows()[id].satisfied, "seed {seed} pair {id}");
            }
            assert!(out.subgraph.len() <= out.budget());
        }
    }
}

use std::collections::BTreeSet;

use super::preserver::{sxv_union, PreserveMode};
use crate::constructions::{run_with_routes, BuildOutput, Kind, ParamOverrides, Params, PhaseStat};
use crate::demand::DemandSet;
use crate::error::Result;
use crate::graph::{Graph, NodeId, Path, Subgraph};
use crate::sampling::{derive_seed, sample_nodes, Seed};

/// Reachability preserver with slack on a directed graph.
///
/// With at most `⌈√n⌉` pairs the sources already form a small set `S` and
/// the exact `S × V` preserver is returned. Otherwise pairs of at most `ell`
/// hops get their path, and a long pair whose path meets the sample `R` is
/// split at the first sampled node `r` into `(s, r)` and `(r, t)`, which are
/// then served by two exact source-restricted preservers.
pub fn build_reachability_slack(
    g: &Graph,
    pairs: &DemandSet,
    overrides: &ParamOverrides,
    seed: Seed,
) -> Result<BuildOutput> {
    run_with_routes(Kind::Reachability, g, pairs, overrides, seed)
}

/// `⌈√n⌉`, the pair count at or below which the exact base case applies.
pub fn base_case_limit(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}

pub(super) fn slack(
    g: &Graph,
    pairs: &DemandSet,
    routes: &[&Path],
    params: Params,
    seed: Seed,
) -> Result<BuildOutput> {
    let n = g.node_count();
    if pairs.len() <= base_case_limit(n) {
        let (subgraph, stat) = sxv_union(g, &pairs.endpoints(), PreserveMode::Reachability);
        return Ok(BuildOutput {
            subgraph,
            params,
            phases: vec![stat],
            claimed: pairs.iter().map(|p| p.id).collect(),
            samples: Vec::new(),
        });
    }

    let mut h = Subgraph::empty(g);
    let mut claimed = Vec::new();
    let mut short = 0;
    let mut added_short = 0;
    for (pair, path) in pairs.iter().zip(routes) {
        if path.hops() <= params.ell {
            short += 1;
            added_short += h.extend(path.edges().iter().copied());
            claimed.push(pair.id);
        }
    }

    let q = if short < pairs.len() {
        params.probability
    } else {
        0.0
    };
    let sample = sample_nodes(n, q, derive_seed(seed, 1))?;
    let in_sample = sample.mask(n);
    let mut to_hub: BTreeSet<(NodeId, NodeId)> = BTreeSet::new();
    let mut from_hub: BTreeSet<(NodeId, NodeId)> = BTreeSet::new();
    for (pair, path) in pairs.iter().zip(routes) {
        if path.hops() <= params.ell {
            continue;
        }
        if let Some(&r) = path.nodes().iter().find(|&&v| in_sample[v]) {
            if r != pair.s {
                to_hub.insert((pair.s, r));
            }
            if r != pair.t {
                from_hub.insert((r, pair.t));
            }
            claimed.push(pair.id);
        }
    }
    claimed.sort_unstable();

    let to_hub: Vec<_> = to_hub.into_iter().collect();
    let from_hub: Vec<_> = from_hub.into_iter().collect();
    let (first, first_stat) = sxv_union(g, &to_hub, PreserveMode::Reachability);
    let (second, second_stat) = sxv_union(g, &from_hub, PreserveMode::Reachability);
    let mut added_split = h.union_with(&first);
    added_split += h.union_with(&second);

    Ok(BuildOutput {
        subgraph: h,
        params,
        phases: vec![
            PhaseStat {
                name: "short-paths",
                added: added_short,
                budget: short * params.ell,
            },
            PhaseStat {
                name: "split-pairs",
                added: added_split,
                budget: first_stat.budget + second_stat.budget,
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
    fn ceil_sqrt() {
        assert_eq!(base_case_limit(1), 1);
        assert_eq!(base_case_limit(4), 2);
        assert_eq!(base_case_limit(5), 3);
        assert_eq!(base_case_limit(1000), 32);
        assert_eq!(base_case_limit(1024), 32);
    }

    #[test]
    fn single_pair_is_base_case() {
        let g = Graph::unweighted(4, true, &[(0, 1), (1, 2), (2, 3), (0, 2)]).unwrap();
        let p = DemandSet::new(&g, [(0, 3)]).unwrap();
        let out = build_reachability_slack(&g, &p, &ParamOverrides::default(), 9).unwrap();
        // fewest hops: 0 -> 2 -> 3
        assert_eq!(out.subgraph.edge_ids().collect::<Vec<_>>(), vec![2, 3]);
        assert_eq!(out.claimed, vec![0]);
    }

    #[test]
    fn long_pairs_route_through_the_hub() {
        // a directed path 0 -> 1 -> ... -> 29 and 8 long pairs
        let n = 30;
        let arcs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        let g = Graph::unweighted(n, true, &arcs).unwrap();
        let p = DemandSet::new(&g, (0..8).map(|i| (i, n - 1 - i))).unwrap();
        let o = ParamOverrides {
            ell: Some(2),
            ..Default::default()
        };
        let mut complete = 0;
        for seed in 0..10 {
            let out = build_reachability_slack(&g, &p, &o, seed).unwrap();
            let rep = verify_all(&g, &out.subgraph, &p, ErrorBudget::Reachability);
            for id in &out.claimed {
                assert!(rep.rows()[*id].satisfied);
            }
            assert!(out.subgraph.len() <= out.budget());
            complete += usize::from(out.claimed.len() == 8);
        }
        assert!(complete > 0);
    }

    #[test]
    fn rejects_undirected_input() {
        let g = Graph::undirected(3, &[(0, 1), (1, 2)]).unwrap();
        let p = DemandSet::new(&g, [(0, 2)]).unwrap();
        assert!(build_reachability_slack(&g, &p, &ParamOverrides::default(), 0).is_err());
    }
}

use std::collections::BTreeMap;

use crate::constructions::{run_with_routes, BuildOutput, Kind, ParamOverrides, Params, PhaseStat};
use crate::demand::DemandSet;
use crate::error::Result;
use crate::graph::{Graph, NodeId, Path, Subgraph};
use crate::oracle::CanonicalTree;
use crate::par;
use crate::sampling::{derive_seed, sample_nodes, Seed};
use crate::search::{Direction, Metric};

/// Distance preserver with slack.
///
/// Pairs whose canonical path has at most `ell` hops get that path. Every
/// node sampled with probability `1/ell` contributes its out- and (on
/// directed graphs) in- shortest path trees, which preserve any pair whose
/// canonical path passes through it.
pub fn build_preserver_slack(
    g: &Graph,
    pairs: &DemandSet,
    overrides: &ParamOverrides,
    seed: Seed,
) -> Result<BuildOutput> {
    run_with_routes(Kind::Preserver, g, pairs, overrides, seed)
}

pub(super) fn slack(
    g: &Graph,
    pairs: &DemandSet,
    routes: &[&Path],
    params: Params,
    seed: Seed,
) -> Result<BuildOutput> {
    let n = g.node_count();
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

    // trees only serve long pairs
    let q = if short < pairs.len() {
        params.probability
    } else {
        0.0
    };
    let sample = sample_nodes(n, q, derive_seed(seed, 1))?;
    let directions: &[Direction] = if g.is_directed() {
        &[Direction::Out, Direction::In]
    } else {
        &[Direction::Out]
    };
    let roots: Vec<(NodeId, Direction)> = sample
        .nodes()
        .iter()
        .flat_map(|&r| directions.iter().map(move |&d| (r, d)))
        .collect();
    let trees = par::map(&roots, |&(r, d)| {
        CanonicalTree::build(g, r, d, Metric::Weighted).to_subgraph(g)
    });
    let before = h.len();
    for t in &trees {
        h.union_with(t);
    }
    let added_trees = h.len() - before;

    let in_sample = sample.mask(n);
    for (pair, path) in pairs.iter().zip(routes) {
        if path.hops() > params.ell && path.nodes().iter().any(|&v| in_sample[v]) {
            claimed.push(pair.id);
        }
    }
    claimed.sort_unstable();

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
                name: "sample-trees",
                added: added_trees,
                budget: roots.len() * (n - 1),
            },
        ],
        claimed,
        samples: vec![("R", sample.len())],
    })
}

/// What a source-restricted preserver keeps: exact distances or reachability.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PreserveMode {
    Distance,
    Reachability,
}

/// Exact preserver for pairs drawn from `S × V` (or `V × S`).
///
/// Takes the union of one canonical path per pair: shortest paths in
/// `Distance` mode, fewest-hop paths in `Reachability` mode. The side with
/// fewer distinct endpoints is used as the tree roots, so `V × S` inputs are
/// served by in-trees.
pub fn build_sxv_preserver(
    g: &Graph,
    pairs: &DemandSet,
    mode: PreserveMode,
) -> Result<BuildOutput> {
    if mode == PreserveMode::Reachability {
        Kind::Reachability.check_graph(g)?;
    }
    for p in pairs.iter() {
        g.check_node(p.s)?;
        g.check_node(p.t)?;
    }
    let endpoints = pairs.endpoints();
    let (subgraph, stat) = sxv_union(g, &endpoints, mode);
    let params = Params::for_kind(
        Kind::Preserver,
        g.node_count(),
        pairs.len(),
        &ParamOverrides::default(),
    );
    Ok(BuildOutput {
        subgraph,
        params,
        phases: vec![stat],
        claimed: pairs.iter().map(|p| p.id).collect(),
        samples: Vec::new(),
    })
}

/// Union of canonical paths for raw `(s, t)` pairs; unreachable pairs add nothing.
pub(crate) fn sxv_union(
    g: &Graph,
    pairs: &[(NodeId, NodeId)],
    mode: PreserveMode,
) -> (Subgraph, PhaseStat) {
    let metric = match mode {
        PreserveMode::Distance => Metric::Weighted,
        PreserveMode::Reachability => Metric::Hops,
    };
    let mut by_source: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    let mut by_target: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    for &(s, t) in pairs {
        by_source.entry(s).or_default().push(t);
        by_target.entry(t).or_default().push(s);
    }
    // roots on the side with fewer distinct endpoints
    let (groups, direction) = if by_source.len() <= by_target.len() {
        (by_source, Direction::Out)
    } else {
        (by_target, Direction::In)
    };
    let groups: Vec<(NodeId, Vec<NodeId>)> = groups.into_iter().collect();
    let parts = par::map(&groups, |(root, others)| {
        let tree = CanonicalTree::build(g, *root, direction, metric);
        let mut h = Subgraph::empty(g);
        let mut hops = 0;
        for &x in others {
            if let Some(path) = tree.path(g, x) {
                hops += path.hops();
                h.extend(path.edges().iter().copied());
            }
        }
        (h, hops)
    });
    let mut h = Subgraph::empty(g);
    let mut budget = 0;
    for (part, hops) in &parts {
        h.union_with(part);
        budget += hops;
    }
    let added = h.len();
    (
        h,
        PhaseStat {
            name: "canonical-paths",
            added,
            budget,
        },
    )
}

use std::collections::{BTreeMap, HashSet};

use super::plus2::{bfs_forest, closed_neighborhood};
use crate::constructions::{
    run_with_routes, BuildOutput, Kind, ParamOverrides, Params, PhaseStat, Route,
};
use crate::demand::DemandSet;
use crate::error::Result;
use crate::graph::{Graph, NodeId, Path, Subgraph, Weight};
use crate::oracle::CanonicalTree;
use crate::par;
use crate::sampling::{d_initialization, derive_seed, sample_nodes, Seed};
use crate::search::{Direction, Metric};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Class {
    Short,
    Medium,
    Long,
}

/// +4 pairwise spanner with slack on an undirected unweighted graph.
///
/// Pairs are classified by how many canonical-path edges the
/// `d`-initialization misses: short (at most `ell`), medium (at most the
/// medium threshold `n/d²`) and long. Short pairs get their missing edges.
/// Long pairs are caught by BFS trees at a `d/n` sample. Medium pairs get
/// their first and last `ell` missing edges; then, for every two nodes of a
/// `1/(ell d)` sample, the closest pair of their neighbours joined by a path
/// missing few edges gets that path.
pub fn build_plus4_slack(
    g: &Graph,
    pairs: &DemandSet,
    overrides: &ParamOverrides,
    seed: Seed,
) -> Result<BuildOutput> {
    run_with_routes(Kind::Plus4, g, pairs, overrides, seed)
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
    let threshold = params.medium_threshold;
    let init = d_initialization(g, params.d)?;
    let mut h = init.clone();
    let mut claimed = Vec::new();
    let routes: Vec<Route> = routes.iter().map(|p| Route::new(p, &init)).collect();
    let classes: Vec<Class> = routes
        .iter()
        .map(|r| match r.missing_count() {
            x if x <= ell => Class::Short,
            x if x <= threshold => Class::Medium,
            _ => Class::Long,
        })
        .collect();

    let (mut short, mut medium, mut long, mut open_medium) = (0, 0, 0, 0);
    let (mut added_short, mut added_ends) = (0, 0);
    for ((pair, route), class) in pairs.iter().zip(&routes).zip(&classes) {
        match class {
            Class::Short => {
                short += 1;
                added_short += h.extend(route.missing_edges());
                claimed.push(pair.id);
            }
            Class::Medium => {
                medium += 1;
                added_ends += h.extend(route.prefix_suffix_edges(ell));
                if route.prefix_suffix_cover(ell) {
                    claimed.push(pair.id);
                } else {
                    open_medium += 1;
                }
            }
            Class::Long => long += 1,
        }
    }
    let snapshot = h.clone();

    let q_long = if long > 0 {
        params.probability_long
    } else {
        0.0
    };
    let roots = sample_nodes(n, q_long, derive_seed(seed, 1))?;
    let added_trees = h.union_with(&bfs_forest(g, &roots));

    let q_medium = if open_medium > 0 {
        params.probability
    } else {
        0.0
    };
    let hubs = sample_nodes(n, q_medium, derive_seed(seed, 2))?;
    let links = link_hubs(g, &snapshot, hubs.nodes(), threshold);
    let hub_pairs = hubs.len() * hubs.len().saturating_sub(1) / 2;
    let mut added_links = 0;
    let mut by_start: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    for link in &links {
        by_start.entry(link.from).or_default().push(link.to);
    }
    let by_start: Vec<(NodeId, Vec<NodeId>)> = by_start.into_iter().collect();
    let link_paths = par::map(&by_start, |(u, targets)| {
        let tree = CanonicalTree::build(g, *u, Direction::Out, Metric::Hops);
        targets
            .iter()
            .flat_map(|&t| {
                tree.path(g, t)
                    .expect("linked nodes are connected")
                    .edges()
                    .to_vec()
            })
            .collect::<Vec<_>>()
    });
    for edges in link_paths {
        added_links += h.extend(edges);
    }

    // claims beyond the short and fully covered medium pairs
    let near_root = closed_neighborhood(g, None, &roots);
    let linked: HashSet<(NodeId, NodeId)> = links.iter().map(|l| l.hubs).collect();
    let mut hub_of: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    for &r in hubs.nodes() {
        for &(v, e) in g.out_neighbors(r) {
            if snapshot.contains(e) {
                hub_of[v].push(r);
            }
        }
    }
    for ((pair, route), class) in pairs.iter().zip(&routes).zip(&classes) {
        if *class == Class::Short {
            continue;
        }
        if route.path.nodes().iter().any(|&v| near_root[v]) {
            claimed.push(pair.id);
            continue;
        }
        if *class == Class::Medium && !route.prefix_suffix_cover(ell) {
            let heads: HashSet<NodeId> = route
                .exact_prefix_nodes(ell)
                .iter()
                .flat_map(|&v| hub_of[v].iter().copied())
                .collect();
            let tails: HashSet<NodeId> = route
                .exact_suffix_nodes(ell)
                .iter()
                .flat_map(|&v| hub_of[v].iter().copied())
                .collect();
            let joined = heads.iter().any(|&a| {
                tails
                    .iter()
                    .any(|&b| a == b || linked.contains(&(a.min(b), a.max(b))))
            });
            if joined {
                claimed.push(pair.id);
            }
        }
    }
    claimed.sort_unstable();
    claimed.dedup();

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
                budget: medium * 2 * ell,
            },
            PhaseStat {
                name: "bfs-trees",
                added: added_trees,
                budget: roots.len() * (n - 1),
            },
            PhaseStat {
                name: "hub-links",
                added: added_links,
                budget: hub_pairs * threshold,
            },
        ],
        claimed,
        samples: vec![("R1", roots.len()), ("R2", hubs.len())],
    })
}

/// A path bought for the unordered hub pair `hubs`, from `from` to `to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Link {
    hubs: (NodeId, NodeId),
    from: NodeId,
    to: NodeId,
}

/// For every unordered pair of hubs, the neighbours `u`, `u'` (one per hub,
/// adjacent through `snapshot`) whose canonical `u ⇝ u'` path misses at most
/// `threshold` snapshot edges, minimising `(dist(u, u'), u, u')`. Both
/// orientations of the pair are candidates.
fn link_hubs(g: &Graph, snapshot: &Subgraph, hubs: &[NodeId], threshold: usize) -> Vec<Link> {
    let k = hubs.len();
    if k < 2 {
        return Vec::new();
    }
    let near: Vec<Vec<NodeId>> = hubs
        .iter()
        .map(|&r| {
            let mut v: Vec<NodeId> = g
                .out_neighbors(r)
                .iter()
                .filter(|&&(_, e)| snapshot.contains(e))
                .map(|&(v, _)| v)
                .collect();
            v.sort_unstable();
            v
        })
        .collect();

    type Best = Option<(Weight, NodeId, NodeId)>;
    // best[i][j]: u next to hub i, u' next to hub j
    let best: Vec<Vec<Best>> = par::map_range(k, |i| {
        let mut row: Vec<Best> = vec![None; k];
        for &u in &near[i] {
            let tree = CanonicalTree::build(g, u, Direction::Out, Metric::Hops);
            let miss = missing_along(g, &tree, snapshot);
            for j in (0..k).filter(|&j| j != i) {
                for &w in &near[j] {
                    let Some(dist) = tree.dist(w) else { continue };
                    if miss[w] <= threshold {
                        let key = (dist, u, w);
                        if row[j].is_none_or(|b| key < b) {
                            row[j] = Some(key);
                        }
                    }
                }
            }
        }
        row
    });

    let mut links = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let choice = match (best[i][j], best[j][i]) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            };
            if let Some((_, from, to)) = choice {
                links.push(Link {
                    hubs: (hubs[i], hubs[j]),
                    from,
                    to,
                });
            }
        }
    }
    links
}

/// Number of `snapshot`-missing edges on the canonical path from the root to each node.
fn missing_along(g: &Graph, tree: &CanonicalTree, snapshot: &Subgraph) -> Vec<usize> {
    let mut miss = vec![usize::MAX; g.node_count()];
    miss[tree.root()] = 0;
    for &v in &tree.order()[1..] {
        let e = tree.parent_edge(v).expect("non-root nodes have a parent");
        let p = g.edge(e).other(v);
        miss[v] = miss[p] + usize::from(!snapshot.contains(e));
    }
    miss
}

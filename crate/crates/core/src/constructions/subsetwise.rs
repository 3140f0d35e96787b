use crate::constructions::{BuildOutput, Kind, ParamOverrides, Params, PhaseStat};
use crate::error::Result;
use crate::graph::{Graph, NodeId, Weight};
use crate::oracle::CanonicalTree;
use crate::par;
use crate::sampling::d_initialization;
use crate::search::{distances, Direction, Metric, UNREACHABLE};

/// +2 spanner for all pairs of `S × S` on an undirected unweighted graph.
///
/// Greedy path buying over a `⌈√|S|⌉`-initialization: pairs are visited in
/// nondecreasing distance and any pair still stretched by more than +2 gets
/// the missing edges of its canonical path. Every connected pair of `S` ends
/// within +2; nothing here is probabilistic.
pub fn build_subsetwise_plus2(g: &Graph, s_set: &[NodeId]) -> Result<BuildOutput> {
    Kind::Plus2.check_graph(g)?;
    for &v in s_set {
        g.check_node(v)?;
    }
    let mut s: Vec<NodeId> = s_set.to_vec();
    s.sort_unstable();
    s.dedup();

    let n = g.node_count();
    let d = ceil_sqrt(s.len()).max(1);
    let init = d_initialization(g, d)?;
    let mut h = init.clone();

    let trees = par::map(&s, |&u| {
        CanonicalTree::build(g, u, Direction::Out, Metric::Hops)
    });
    let mut order: Vec<(Weight, usize, usize)> = Vec::new();
    for (i, tree) in trees.iter().enumerate() {
        for (j, &v) in s.iter().enumerate().skip(i + 1) {
            if let Some(dist) = tree.dist(v) {
                order.push((dist, i, j));
            }
        }
    }
    order.sort_unstable();

    // Distances in H only shrink as edges are added, so a stale row that
    // already certifies a pair stays valid. Rows are refreshed on failure.
    let mut rows: Vec<Option<Vec<Weight>>> = vec![None; s.len()];
    let within = |rows: &[Option<Vec<Weight>>], i: usize, j: usize, bound: Weight| {
        rows[i]
            .as_ref()
            .is_some_and(|r| r[s[j]] != UNREACHABLE && r[s[j]] <= bound)
    };
    let mut bought = 0;
    let mut added_paths = 0;
    for &(dist, i, j) in &order {
        let bound = dist + 2;
        if within(&rows, i, j, bound) || within(&rows, j, i, bound) {
            continue;
        }
        rows[i] = Some(distances(g, Some(&h), s[i], Direction::Out, Metric::Hops));
        if within(&rows, i, j, bound) {
            continue;
        }
        let path = trees[i].path(g, s[j]).expect("pair is connected");
        added_paths += h.extend(path.edges().iter().copied());
        bought += 1;
    }

    let pairs = s.len() * s.len().saturating_sub(1) / 2;
    let mut params = Params::for_kind(Kind::Plus2, n, pairs, &ParamOverrides::default());
    params.d = d;
    Ok(BuildOutput {
        subgraph: h,
        params,
        phases: vec![
            PhaseStat {
                name: "d-initialization",
                added: init.len(),
                budget: n * d,
            },
            PhaseStat {
                name: "bought-paths",
                added: added_paths,
                budget: bought * (n - 1),
            },
        ],
        claimed: Vec::new(),
        samples: vec![("S", s.len())],
    })
}

fn ceil_sqrt(x: usize) -> usize {
    let mut r = (x as f64).sqrt() as usize;
    while r * r < x {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= x {
        r -= 1;
    }
    r
}

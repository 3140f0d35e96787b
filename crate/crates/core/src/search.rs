//! Plain single-source searches (BFS and Dijkstra).
//!
//! These compute distances only, with no tie-breaking of any kind. The
//! verification oracle and the satisfaction checks are built on them so that
//! a bug in the canonical-path comparator cannot certify its own output.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use fixedbitset::FixedBitSet;

use crate::graph::{Graph, NodeId, Subgraph, Weight};

/// Distance of a node not reachable from the source.
pub const UNREACHABLE: Weight = Weight::MAX;

/// Which way edges are followed: `Out` from the source, `In` towards it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Out,
    In,
}

/// Path length: the graph's own weights, or hop count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Metric {
    Weighted,
    Hops,
}

impl Metric {
    /// Whether searches under this metric on `g` reduce to BFS.
    pub fn is_unit(self, g: &Graph) -> bool {
        self == Metric::Hops || !g.is_weighted()
    }
}

/// Distances from `source` to every node (to `source` when `dir` is `In`),
/// following only edges of `within` when given.
pub fn distances(
    g: &Graph,
    within: Option<&Subgraph>,
    source: NodeId,
    dir: Direction,
    metric: Metric,
) -> Vec<Weight> {
    if metric.is_unit(g) {
        bfs(g, within, source, dir)
    } else {
        dijkstra(g, within, source, dir)
    }
}

fn bfs(g: &Graph, within: Option<&Subgraph>, source: NodeId, dir: Direction) -> Vec<Weight> {
    let mut dist = vec![UNREACHABLE; g.node_count()];
    let mut queue = VecDeque::new();
    dist[source] = 0;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let du = dist[u];
        for &(v, e) in g.neighbors(u, dir) {
            if dist[v] != UNREACHABLE || within.is_some_and(|h| !h.contains(e)) {
                continue;
            }
            dist[v] = du + 1;
            queue.push_back(v);
        }
    }
    dist
}

fn dijkstra(g: &Graph, within: Option<&Subgraph>, source: NodeId, dir: Direction) -> Vec<Weight> {
    let mut dist = vec![UNREACHABLE; g.node_count()];
    let mut heap = BinaryHeap::new();
    dist[source] = 0;
    heap.push(Reverse((0, source)));
    while let Some(Reverse((du, u))) = heap.pop() {
        if du > dist[u] {
            continue;
        }
        for &(v, e) in g.neighbors(u, dir) {
            if within.is_some_and(|h| !h.contains(e)) {
                continue;
            }
            let nd = du + g.edge(e).weight;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Reverse((nd, v)));
            }
        }
    }
    dist
}

/// Nodes reachable from `source`, following only edges of `within` when given.
pub fn reachable(g: &Graph, within: Option<&Subgraph>, source: NodeId) -> FixedBitSet {
    let mut seen = FixedBitSet::with_capacity(g.node_count());
    let mut stack = vec![source];
    seen.insert(source);
    while let Some(u) = stack.pop() {
        for &(v, e) in g.out_neighbors(u) {
            if seen.contains(v) || within.is_some_and(|h| !h.contains(e)) {
                continue;
            }
            seen.insert(v);
            stack.push(v);
        }
    }
    seen
}

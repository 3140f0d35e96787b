//! Canonical (consistent) shortest paths.
//!
//! Among all shortest paths between two nodes the canonical one minimises,
//! in order: total weight, hop count, and the lexicographic sequence of its
//! edge ids read from the source. The order is strict, so the canonical path
//! is unique, and any subpath of a canonical path is the canonical path
//! between its own endpoints.
//!
//! A [`CanonicalTree`] holds the canonical paths from one root. It is built
//! by a `(weight, hops)` search followed by a layer-by-layer pass over the
//! shortest-path DAG: a node's parent edge minimises `(rank of parent, edge
//! id)`, where the rank orders the canonical paths of the previous layer.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::sync::{Arc, Mutex};

use crate::error::{unsupported, Result};
use crate::graph::{EdgeId, Graph, NodeId, Path, Subgraph, Weight};
use crate::par;
use crate::search::{Direction, Metric, UNREACHABLE};

const NO_EDGE: EdgeId = EdgeId::MAX;

/// Canonical shortest paths from (`Out`) or to (`In`) a single root.
///
/// In-trees are canonical for the reversed graph, i.e. edge sequences are
/// compared starting from the root.
#[derive(Clone, Debug)]
pub struct CanonicalTree {
    root: NodeId,
    direction: Direction,
    dist: Vec<Weight>,
    parent: Vec<EdgeId>,
    order: Vec<NodeId>,
}

impl CanonicalTree {
    pub fn build(g: &Graph, root: NodeId, direction: Direction, metric: Metric) -> Self {
        let n = g.node_count();
        let unit = metric.is_unit(g);
        let w = |e: EdgeId| if unit { 1 } else { g.edge(e).weight };

        // (weight, hops) lexicographic distances, and nodes bucketed by hops
        let mut dist = vec![UNREACHABLE; n];
        let mut hops = vec![usize::MAX; n];
        dist[root] = 0;
        hops[root] = 0;
        let mut layers: Vec<Vec<NodeId>> = Vec::new();
        if unit {
            let mut frontier = vec![root];
            while !frontier.is_empty() {
                let mut next = Vec::new();
                for &u in &frontier {
                    for &(v, _) in g.neighbors(u, direction) {
                        if dist[v] == UNREACHABLE {
                            dist[v] = dist[u] + 1;
                            hops[v] = hops[u] + 1;
                            next.push(v);
                        }
                    }
                }
                layers.push(std::mem::replace(&mut frontier, next));
            }
        } else {
            let mut heap = BinaryHeap::new();
            heap.push(Reverse((0, 0usize, root)));
            let mut settled = vec![false; n];
            while let Some(Reverse((du, hu, u))) = heap.pop() {
                if settled[u] {
                    continue;
                }
                settled[u] = true;
                if layers.len() <= hu {
                    layers.resize_with(hu + 1, Vec::new);
                }
                layers[hu].push(u);
                for &(v, e) in g.neighbors(u, direction) {
                    let key = (du + w(e), hu + 1);
                    if !settled[v] && key < (dist[v], hops[v]) {
                        dist[v] = key.0;
                        hops[v] = key.1;
                        heap.push(Reverse((key.0, key.1, v)));
                    }
                }
            }
        }

        let back = match direction {
            Direction::Out => Direction::In,
            Direction::In => Direction::Out,
        };
        let mut parent = vec![NO_EDGE; n];
        let mut rank = vec![usize::MAX; n];
        rank[root] = 0;
        let mut next_rank = 1;
        let mut order = Vec::with_capacity(n);
        order.push(root);
        let mut keyed: Vec<(usize, EdgeId, NodeId)> = Vec::new();
        for layer in layers.iter().skip(1) {
            keyed.clear();
            for &v in layer {
                let best = g
                    .neighbors(v, back)
                    .iter()
                    .filter(|&&(u, e)| {
                        dist[u] != UNREACHABLE
                            && hops[u] + 1 == hops[v]
                            && dist[u] + w(e) == dist[v]
                    })
                    .map(|&(u, e)| (rank[u], e))
                    .min()
                    .expect("every non-root node of a layer has a predecessor");
                parent[v] = best.1;
                keyed.push((best.0, best.1, v));
            }
            keyed.sort_unstable();
            for &(_, _, v) in &keyed {
                rank[v] = next_rank;
                next_rank += 1;
                order.push(v);
            }
        }

        CanonicalTree {
            root,
            direction,
            dist,
            parent,
            order,
        }
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// Distance from the root (to the root for in-trees); `None` if unreachable.
    #[inline]
    pub fn dist(&self, v: NodeId) -> Option<Weight> {
        match self.dist[v] {
            UNREACHABLE => None,
            d => Some(d),
        }
    }

    #[inline]
    pub fn parent_edge(&self, v: NodeId) -> Option<EdgeId> {
        match self.parent[v] {
            NO_EDGE => None,
            e => Some(e),
        }
    }

    /// Reachable nodes with every node listed after its parent.
    pub fn order(&self) -> &[NodeId] {
        &self.order
    }

    /// The canonical path between the root and `v`, oriented along the
    /// tree direction (root to `v` for out-trees, `v` to root for in-trees).
    pub fn path(&self, g: &Graph, v: NodeId) -> Option<Path> {
        let weight = self.dist(v)?;
        let mut nodes = vec![v];
        let mut edges = Vec::new();
        let mut x = v;
        while let Some(e) = self.parent_edge(x) {
            x = g.edge(e).other(x);
            nodes.push(x);
            edges.push(e);
        }
        if self.direction == Direction::Out {
            nodes.reverse();
            edges.reverse();
        }
        Some(Path::from_parts(nodes, edges, weight))
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.order.iter().filter_map(|&v| self.parent_edge(v))
    }

    pub fn to_subgraph(&self, g: &Graph) -> Subgraph {
        let mut h = Subgraph::empty(g);
        h.extend(self.edge_ids());
        h
    }
}

/// Shared provider of canonical paths, memoising one out-tree per source.
///
/// The cache holds at most `capacity` trees; beyond that an arbitrary entry is
/// evicted. Eviction never changes results, only timing.
pub struct CanonicalPathOracle<'g> {
    graph: &'g Graph,
    metric: Metric,
    capacity: usize,
    cache: Mutex<HashMap<NodeId, Arc<CanonicalTree>>>,
}

impl<'g> CanonicalPathOracle<'g> {
    pub const DEFAULT_CAPACITY: usize = 256;

    pub fn new(graph: &'g Graph) -> Self {
        Self::with_metric(graph, Metric::Weighted)
    }

    pub fn with_metric(graph: &'g Graph, metric: Metric) -> Self {
        CanonicalPathOracle {
            graph,
            metric,
            capacity: Self::DEFAULT_CAPACITY,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_capacity(mut self, capacity: usize) -> Self {
        self.capacity = capacity.max(1);
        self
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn tree(&self, source: NodeId) -> Result<Arc<CanonicalTree>> {
        self.graph.check_node(source)?;
        if let Some(t) = self.cache.lock().unwrap().get(&source) {
            return Ok(Arc::clone(t));
        }
        // built outside the lock; concurrent misses may build twice, harmlessly
        let tree = Arc::new(CanonicalTree::build(
            self.graph,
            source,
            Direction::Out,
            self.metric,
        ));
        let mut cache = self.cache.lock().unwrap();
        if cache.len() >= self.capacity {
            if let Some(&k) = cache.keys().next() {
                cache.remove(&k);
            }
        }
        cache.insert(source, Arc::clone(&tree));
        Ok(tree)
    }

    /// The canonical `u ⇝ v` path, or `None` when `v` is unreachable.
    pub fn canonical_path(&self, u: NodeId, v: NodeId) -> Result<Option<Path>> {
        self.graph.check_node(v)?;
        Ok(self.tree(u)?.path(self.graph, v))
    }

    /// `dist(u, v)`, or `None` for infinity.
    pub fn distance(&self, u: NodeId, v: NodeId) -> Result<Option<Weight>> {
        self.graph.check_node(v)?;
        Ok(self.tree(u)?.dist(v))
    }
}

/// Canonical shortest-path tree at `root`. `In` trees require a directed graph;
/// on undirected graphs the out-tree already covers both directions.
pub fn shortest_path_tree(g: &Graph, root: NodeId, direction: Direction) -> Result<Subgraph> {
    g.check_node(root)?;
    if direction == Direction::In && !g.is_directed() {
        return Err(unsupported("in-trees are only defined on directed graphs"));
    }
    Ok(CanonicalTree::build(g, root, direction, Metric::Weighted).to_subgraph(g))
}

/// Edges of `path` absent from `h`, in path order.
pub fn missing_edges(path: &Path, h: &Subgraph) -> Vec<EdgeId> {
    path.edges()
        .iter()
        .copied()
        .filter(|&e| !h.contains(e))
        .collect()
}

/// Canonical paths for a batch of `(s, t)` pairs, one tree per distinct
/// source, computed in parallel. Output is index-aligned with `pairs`.
pub fn batch_paths(g: &Graph, metric: Metric, pairs: &[(NodeId, NodeId)]) -> Vec<Option<Path>> {
    let mut by_source: HashMap<NodeId, Vec<usize>> = HashMap::new();
    for (i, &(s, _)) in pairs.iter().enumerate() {
        by_source.entry(s).or_default().push(i);
    }
    let mut groups: Vec<(NodeId, Vec<usize>)> = by_source.into_iter().collect();
    groups.sort_unstable_by_key(|(s, _)| *s);

    let found = par::map(&groups, |(s, idx)| {
        let tree = CanonicalTree::build(g, *s, Direction::Out, metric);
        idx.iter()
            .map(|&i| (i, tree.path(g, pairs[i].1)))
            .collect::<Vec<_>>()
    });
    let mut out = vec![None; pairs.len()];
    for (i, p) in found.into_iter().flatten() {
        out[i] = p;
    }
    out
}

//! Immutable input graphs, edge-subset subgraphs and paths.

use fixedbitset::FixedBitSet;
use std::collections::HashSet;

use crate::error::{input, Result};
use crate::search::Direction;

pub type NodeId = usize;
pub type EdgeId = usize;
/// Edge weights and path lengths. Unweighted graphs carry weight 1 everywhere.
pub type Weight = u64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub weight: Weight,
}

impl Edge {
    pub fn new(u: NodeId, v: NodeId, weight: Weight) -> Self {
        Edge { u, v, weight }
    }

    /// The endpoint opposite to `x`. `x` must be an endpoint.
    #[inline]
    pub fn other(&self, x: NodeId) -> NodeId {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

/// A simple graph in compressed adjacency form.
///
/// Node ids are dense in `[0, n)`, edge ids dense in `[0, m)` in insertion
/// order. Adjacency lists are ordered by edge id. For undirected graphs the
/// out-lists hold both orientations and there are no separate in-lists.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    directed: bool,
    weighted: bool,
    edges: Vec<Edge>,
    out_start: Vec<usize>,
    out_adj: Vec<(NodeId, EdgeId)>,
    in_start: Vec<usize>,
    in_adj: Vec<(NodeId, EdgeId)>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, parallel edges, out-of-range
    /// endpoints and non-positive weights. Unweighted graphs must use weight 1.
    pub fn new(n: usize, directed: bool, weighted: bool, edges: Vec<Edge>) -> Result<Self> {
        if n == 0 {
            return Err(input("graph must have at least one node"));
        }
        let mut seen = HashSet::with_capacity(edges.len());
        for (id, e) in edges.iter().enumerate() {
            if e.u >= n || e.v >= n {
                return Err(input(format!(
                    "edge {id} ({}, {}) has an endpoint outside [0, {n})",
                    e.u, e.v
                )));
            }
            if e.u == e.v {
                return Err(input(format!("edge {id} is a self-loop at node {}", e.u)));
            }
            if e.weight == 0 {
                return Err(input(format!("edge {id} has non-positive weight")));
            }
            if !weighted && e.weight != 1 {
                return Err(input(format!(
                    "edge {id} has weight {} in an unweighted graph",
                    e.weight
                )));
            }
            let key = if directed || e.u < e.v {
                (e.u, e.v)
            } else {
                (e.v, e.u)
            };
            if !seen.insert(key) {
                return Err(input(format!(
                    "edge {id} ({}, {}) is a parallel edge",
                    e.u, e.v
                )));
            }
        }

        let (out_start, out_adj, in_start, in_adj) = if directed {
            let (os, oa) = csr(n, edges.iter().enumerate().map(|(id, e)| (e.u, e.v, id)));
            let (is, ia) = csr(n, edges.iter().enumerate().map(|(id, e)| (e.v, e.u, id)));
            (os, oa, is, ia)
        } else {
            let both = edges
                .iter()
                .enumerate()
                .flat_map(|(id, e)| [(e.u, e.v, id), (e.v, e.u, id)]);
            let (os, oa) = csr(n, both);
            (os, oa, Vec::new(), Vec::new())
        };

        Ok(Graph {
            n,
            directed,
            weighted,
            edges,
            out_start,
            out_adj,
            in_start,
            in_adj,
        })
    }

    /// Unweighted graph from an endpoint list.
    pub fn unweighted(n: usize, directed: bool, pairs: &[(NodeId, NodeId)]) -> Result<Self> {
        let edges = pairs.iter().map(|&(u, v)| Edge::new(u, v, 1)).collect();
        Graph::new(n, directed, false, edges)
    }

    /// Undirected unweighted graph, the setting of the additive spanners.
    pub fn undirected(n: usize, pairs: &[(NodeId, NodeId)]) -> Result<Self> {
        Graph::unweighted(n, false, pairs)
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn is_directed(&self) -> bool {
        self.directed
    }

    #[inline]
    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    #[inline]
    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// `(neighbor, edge)` pairs leaving `v`.
    #[inline]
    pub fn out_neighbors(&self, v: NodeId) -> &[(NodeId, EdgeId)] {
        &self.out_adj[self.out_start[v]..self.out_start[v + 1]]
    }

    /// `(neighbor, edge)` pairs entering `v`; identical to the out-list when undirected.
    #[inline]
    pub fn in_neighbors(&self, v: NodeId) -> &[(NodeId, EdgeId)] {
        if self.directed {
            &self.in_adj[self.in_start[v]..self.in_start[v + 1]]
        } else {
            self.out_neighbors(v)
        }
    }

    #[inline]
    pub fn neighbors(&self, v: NodeId, dir: Direction) -> &[(NodeId, EdgeId)] {
        match dir {
            Direction::Out => self.out_neighbors(v),
            Direction::In => self.in_neighbors(v),
        }
    }

    /// Out-degree (the degree, for undirected graphs).
    #[inline]
    pub fn degree(&self, v: NodeId) -> usize {
        self.out_start[v + 1] - self.out_start[v]
    }

    /// Edge id joining `u` to `v` (in that direction if directed).
    pub fn find_edge(&self, u: NodeId, v: NodeId) -> Option<EdgeId> {
        if u >= self.n || v >= self.n {
            return None;
        }
        self.out_neighbors(u)
            .iter()
            .find(|&&(x, _)| x == v)
            .map(|&(_, e)| e)
    }

    pub fn check_node(&self, v: NodeId) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(input(format!("node {v} out of range [0, {})", self.n)))
        }
    }
}

fn csr(
    n: usize,
    arcs: impl Iterator<Item = (NodeId, NodeId, EdgeId)> + Clone,
) -> (Vec<usize>, Vec<(NodeId, EdgeId)>) {
    let mut start = vec![0usize; n + 1];
    for (from, _, _) in arcs.clone() {
        start[from + 1] += 1;
    }
    for i in 0..n {
        start[i + 1] += start[i];
    }
    let mut fill = start.clone();
    let mut adj = vec![(0, 0); start[n]];
    // arcs arrive in edge-id order, so every list ends up sorted by edge id
    for (from, to, id) in arcs {
        adj[fill[from]] = (to, id);
        fill[from] += 1;
    }
    (start, adj)
}

/// A set of edge ids of a parent graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgraph {
    bits: FixedBitSet,
}

impl Subgraph {
    pub fn empty(parent: &Graph) -> Self {
        Subgraph {
            bits: FixedBitSet::with_capacity(parent.edge_count()),
        }
    }

    pub fn full(parent: &Graph) -> Self {
        let mut bits = FixedBitSet::with_capacity(parent.edge_count());
        bits.insert_range(..);
        Subgraph { bits }
    }

    pub fn from_edges(parent: &Graph, edges: impl IntoIterator<Item = EdgeId>) -> Result<Self> {
        let mut h = Subgraph::empty(parent);
        for e in edges {
            if e >= parent.edge_count() {
                return Err(input(format!("edge id {e} not in parent graph")));
            }
            h.bits.insert(e);
        }
        Ok(h)
    }

    /// Number of edges in the parent graph.
    pub fn parent_edge_count(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn contains(&self, e: EdgeId) -> bool {
        self.bits.contains(e)
    }

    /// Inserts `e`; returns true if it was absent.
    #[inline]
    pub fn insert(&mut self, e: EdgeId) -> bool {
        !self.bits.put(e)
    }

    /// Inserts every edge, returning how many were new.
    pub fn extend(&mut self, edges: impl IntoIterator<Item = EdgeId>) -> usize {
        edges.into_iter().filter(|&e| self.insert(e)).count()
    }

    /// In-place union; returns the number of newly added edges.
    ///
    /// Panics if the two subgraphs belong to parents of different sizes.
    pub fn union_with(&mut self, other: &Subgraph) -> usize {
        assert_eq!(
            self.bits.len(),
            other.bits.len(),
            "union of subgraphs of different parents"
        );
        let before = self.len();
        self.bits.union_with(&other.bits);
        self.len() - before
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    /// Edge ids in increasing order.
    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.bits.ones()
    }

    pub fn is_subset(&self, other: &Subgraph) -> bool {
        self.bits.is_subset(&other.bits)
    }
}

/// A simple path in a parent graph, stored as its node and edge sequences.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    nodes: Vec<NodeId>,
    edges: Vec<EdgeId>,
    weight: Weight,
}

impl Path {
    /// The zero-length path at `v`.
    pub fn trivial(v: NodeId) -> Self {
        Path {
            nodes: vec![v],
            edges: Vec::new(),
            weight: 0,
        }
    }

    pub(crate) fn from_parts(nodes: Vec<NodeId>, edges: Vec<EdgeId>, weight: Weight) -> Self {
        debug_assert_eq!(nodes.len(), edges.len() + 1);
        Path {
            nodes,
            edges,
            weight,
        }
    }

    /// Builds a path from a node sequence, checking that consecutive nodes
    /// are joined by an edge and no node repeats.
    pub fn from_nodes(g: &Graph, nodes: &[NodeId]) -> Result<Self> {
        if nodes.is_empty() {
            return Err(input("a path needs at least one node"));
        }
        let mut seen = HashSet::with_capacity(nodes.len());
        let mut edges = Vec::with_capacity(nodes.len() - 1);
        let mut weight = 0;
        for &v in nodes {
            g.check_node(v)?;
            if !seen.insert(v) {
                return Err(input(format!("node {v} repeats on the path")));
            }
        }
        for w in nodes.windows(2) {
            let e = g
                .find_edge(w[0], w[1])
                .ok_or_else(|| input(format!("no edge from {} to {}", w[0], w[1])))?;
            weight += g.edge(e).weight;
            edges.push(e);
        }
        Ok(Path::from_parts(nodes.to_vec(), edges, weight))
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn weight(&self) -> Weight {
        self.weight
    }

    pub fn hops(&self) -> usize {
        self.edges.len()
    }

    pub fn source(&self) -> NodeId {
        self.nodes[0]
    }

    pub fn target(&self) -> NodeId {
        *self.nodes.last().expect("paths are non-empty")
    }

    /// Indices into `edges()` of the edges absent from `h`, in path order.
    pub(crate) fn missing_positions(&self, h: &Subgraph) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, &e)| !h.contains(e))
            .map(|(i, _)| i)
            .collect()
    }
}

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::seq::{index, SliceRandom};
use rand::Rng;

use crate::error::{input, Error, Result};
use crate::graph::{Edge, Graph, NodeId, Weight};
use crate::sampling::{rng, Seed};

/// Recipe for a synthetic graph.
///
/// Textual form: `gnm:n=1000,m=4000[,directed][,max_weight=10]`,
/// `grid:side=32[,directed]`, `layered-dag:n=1000,m=4000`,
/// `tree:n=1000[,directed]`. Directed grids point right and down, directed
/// trees point away from node 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphSpec {
    Gnm {
        n: usize,
        m: usize,
        directed: bool,
        /// Uniform integer weights in `[1, max_weight]`; `None` is unweighted.
        max_weight: Option<Weight>,
    },
    Grid {
        side: usize,
        directed: bool,
    },
    LayeredDag {
        n: usize,
        m: usize,
    },
    Tree {
        n: usize,
        directed: bool,
    },
}

impl GraphSpec {
    /// `G(n, m)` with average degree `avg_degree` (undirected count `n·deg/2`).
    pub fn gnm_avg_degree(n: usize, avg_degree: usize) -> Self {
        GraphSpec::Gnm {
            n,
            m: n * avg_degree / 2,
            directed: false,
            max_weight: None,
        }
    }

    pub fn node_count(&self) -> usize {
        match *self {
            GraphSpec::Gnm { n, .. }
            | GraphSpec::LayeredDag { n, .. }
            | GraphSpec::Tree { n, .. } => n,
            GraphSpec::Grid { side, .. } => side * side,
        }
    }

    pub fn is_directed(&self) -> bool {
        match *self {
            GraphSpec::Gnm { directed, .. }
            | GraphSpec::Grid { directed, .. }
            | GraphSpec::Tree { directed, .. } => directed,
            GraphSpec::LayeredDag { .. } => true,
        }
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dir = |d: bool| if d { ",directed" } else { "" };
        match *self {
            GraphSpec::Gnm {
                n,
                m,
                directed,
                max_weight,
            } => {
                write!(f, "gnm:n={n},m={m}{}", dir(directed))?;
                if let Some(w) = max_weight {
                    write!(f, ",max_weight={w}")?;
                }
                Ok(())
            }
            GraphSpec::Grid { side, directed } => write!(f, "grid:side={side}{}", dir(directed)),
            GraphSpec::LayeredDag { n, m } => write!(f, "layered-dag:n={n},m={m}"),
            GraphSpec::Tree { n, directed } => write!(f, "tree:n={n}{}", dir(directed)),
        }
    }
}

impl FromStr for GraphSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut n = None;
        let mut m = None;
        let mut side = None;
        let mut directed = false;
        let mut max_weight = None;
        for item in rest.split(',').filter(|x| !x.is_empty()) {
            let num = |v: &str| {
                v.parse::<usize>()
                    .map_err(|_| input(format!("bad number `{v}` in graph spec `{s}`")))
            };
            match item.split_once('=') {
                Some(("n", v)) => n = Some(num(v)?),
                Some(("m", v)) => m = Some(num(v)?),
                Some(("side", v)) => side = Some(num(v)?),
                Some(("max_weight", v)) => max_weight = Some(num(v)? as Weight),
                None if item == "directed" => directed = true,
                _ => return Err(input(format!("unknown field `{item}` in graph spec `{s}`"))),
            }
        }
        let need = |x: Option<usize>, what: &str| {
            x.ok_or_else(|| input(format!("graph spec `{s}` needs {what}")))
        };
        match kind {
            "gnm" => Ok(GraphSpec::Gnm {
                n: need(n, "n")?,
                m: need(m, "m")?,
                directed,
                max_weight,
            }),
            "grid" => {
                let side = match (side, n) {
                    (Some(k), _) => k,
                    (None, Some(n)) => (n as f64).sqrt().round() as usize,
                    _ => return Err(input(format!("graph spec `{s}` needs side or n"))),
                };
                Ok(GraphSpec::Grid { side, directed })
            }
            "layered-dag" => Ok(GraphSpec::LayeredDag {
                n: need(n, "n")?,
                m: need(m, "m")?,
            }),
            "tree" => Ok(GraphSpec::Tree {
                n: need(n, "n")?,
                directed,
            }),
            _ => Err(input(format!("unknown graph kind `{kind}`"))),
        }
    }
}

/// Builds the graph described by `spec`; the same `(spec, seed)` gives the same graph.
pub fn generate_graph(spec: &GraphSpec, seed: Seed) -> Result<Graph> {
    let mut rng = rng(seed);
    match *spec {
        GraphSpec::Gnm {
            n,
            m,
            directed,
            max_weight,
        } => {
            if n == 0 {
                return Err(input("gnm needs n >= 1"));
            }
            if max_weight == Some(0) {
                return Err(input("max_weight must be at least 1"));
            }
            let slots = if directed {
                n * (n - 1)
            } else {
                n * (n - 1) / 2
            };
            if m > slots {
                return Err(input(format!(
                    "gnm with n = {n} has at most {slots} edges, asked for {m}"
                )));
            }
            let mut picked = index::sample(&mut rng, slots, m).into_vec();
            picked.sort_unstable();
            // random edge ids, so the smallest-id rule of d-initialization is arbitrary
            picked.shuffle(&mut rng);
            let edges = picked
                .into_iter()
                .map(|k| {
                    let (u, v) = if directed {
                        ordered_slot(n, k)
                    } else {
                        unordered_slot(n, k)
                    };
                    let w = max_weight.map_or(1, |mw| rng.gen_range(1..=mw));
                    Edge::new(u, v, w)
                })
                .collect();
            Graph::new(n, directed, max_weight.is_some(), edges)
        }
        GraphSpec::Grid { side, directed } => {
            if side == 0 {
                return Err(input("grid needs side >= 1"));
            }
            let mut e = Vec::with_capacity(2 * side * side);
            for r in 0..side {
                for c in 0..side {
                    let v = r * side + c;
                    if c + 1 < side {
                        e.push((v, v + 1));
                    }
                    if r + 1 < side {
                        e.push((v, v + side));
                    }
                }
            }
            Graph::unweighted(side * side, directed, &e)
        }
        GraphSpec::LayeredDag { n, m } => {
            if n == 0 {
                return Err(input("layered-dag needs n >= 1"));
            }
            let layers = ceil_sqrt(n);
            // layer i holds nodes [start[i], start[i + 1])
            let start: Vec<usize> = (0..=layers).map(|i| i * n / layers).collect();
            let blocks: Vec<usize> = (0..layers.saturating_sub(1))
                .map(|i| (start[i + 1] - start[i]) * (start[i + 2] - start[i + 1]))
                .collect();
            let slots: usize = blocks.iter().sum();
            if m > slots {
                return Err(input(format!(
                    "layered-dag with n = {n} has at most {slots} edges, asked for {m}"
                )));
            }
            let mut picked = index::sample(&mut rng, slots, m).into_vec();
            picked.sort_unstable();
            picked.shuffle(&mut rng);
            let edges: Vec<(NodeId, NodeId)> = picked
                .into_iter()
                .map(|mut k| {
                    let mut i = 0;
                    while k >= blocks[i] {
                        k -= blocks[i];
                        i += 1;
                    }
                    let width = start[i + 2] - start[i + 1];
                    (start[i] + k / width, start[i + 1] + k % width)
                })
                .collect();
            Graph::unweighted(n, true, &edges)
        }
        GraphSpec::Tree { n, directed } => {
            if n == 0 {
                return Err(input("tree needs n >= 1"));
            }
            let mut e = random_tree(n, &mut rng);
            if directed {
                orient_from_root(n, &mut e);
            }
            Graph::unweighted(n, directed, &e)
        }
    }
}

/// `k`-th pair `(u, v)`, `u < v`, in row-major order of the upper triangle.
fn unordered_slot(n: usize, k: usize) -> (NodeId, NodeId) {
    // row u starts at u·n - u(u+1)/2
    let row_start = |u: usize| u * n - u * (u + 1) / 2;
    let (mut lo, mut hi) = (0, n - 1);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if row_start(mid) <= k {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, lo + 1 + (k - row_start(lo)))
}

fn ordered_slot(n: usize, k: usize) -> (NodeId, NodeId) {
    let u = k / (n - 1);
    let r = k % (n - 1);
    (u, if r >= u { r + 1 } else { r })
}

fn ceil_sqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r.max(1)
}

/// Uniform labelled tree from a random Prüfer sequence.
fn random_tree<R: Rng>(n: usize, rng: &mut R) -> Vec<(NodeId, NodeId)> {
    if n < 2 {
        return Vec::new();
    }
    let code: Vec<NodeId> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &x in &code {
        degree[x] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<NodeId>> =
        (0..n).filter(|&v| degree[v] == 1).map(Reverse).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &x in &code {
        let Reverse(leaf) = leaves.pop().expect("a tree always has a leaf");
        edges.push((leaf.min(x), leaf.max(x)));
        degree[x] -= 1;
        if degree[x] == 1 {
            leaves.push(Reverse(x));
        }
    }
    let Reverse(a) = leaves.pop().expect("two leaves remain");
    let Reverse(b) = leaves.pop().expect("two leaves remain");
    edges.push((a.min(b), a.max(b)));
    edges
}

fn orient_from_root(n: usize, edges: &mut [(NodeId, NodeId)]) {
    let mut adj = vec![Vec::new(); n];
    for (i, &(u, v)) in edges.iter().enumerate() {
        adj[u].push(i);
        adj[v].push(i);
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(x) = queue.pop_front() {
        for &i in &adj[x] {
            let (u, v) = edges[i];
            let y = if u == x { v } else { u };
            if !seen[y] {
                seen[y] = true;
                edges[i] = (x, y);
                queue.push_back(y);
            }
        }
    }
}

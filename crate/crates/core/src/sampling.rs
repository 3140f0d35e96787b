//! Seeded Bernoulli node sampling and d-initialization.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{input, unsupported, Result};
use crate::graph::{Graph, NodeId, Subgraph};

/// Seed of every randomized step. Identical seeds and inputs give identical outputs.
pub type Seed = u64;

/// The deterministic generator used throughout the crate.
pub fn rng(seed: Seed) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Independent-looking child seed for stream `index` of `seed`.
pub fn derive_seed(seed: Seed, index: u64) -> Seed {
    seed ^ splitmix64(index.wrapping_add(0x5851_f42d_4c95_7f2d))
}

/// A node set drawn by independent coin flips.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeSample {
    nodes: Vec<NodeId>,
    probability: f64,
    seed: Seed,
}

impl NodeSample {
    /// Sampled node ids, increasing.
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn probability(&self) -> f64 {
        self.probability
    }

    pub fn seed(&self) -> Seed {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Membership mask over `[0, n)`.
    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &v in &self.nodes {
            m[v] = true;
        }
        m
    }
}

/// Includes each of the `n` nodes independently with probability `q`.
pub fn sample_nodes(n: usize, q: f64, seed: Seed) -> Result<NodeSample> {
    if !(0.0..=1.0).contains(&q) {
        return Err(input(format!("sampling probability {q} outside [0, 1]")));
    }
    let mut rng = rng(seed);
    let nodes = (0..n).filter(|_| rng.gen_bool(q)).collect();
    Ok(NodeSample {
        nodes,
        probability: q,
        seed,
    })
}

/// Clamps a computed probability into `[0, 1]`; NaN maps to 0.
pub fn clamp_probability(q: f64) -> f64 {
    if q.is_nan() {
        0.0
    } else {
        q.clamp(0.0, 1.0)
    }
}

/// Keeps, for every node, its `d` incident edges of smallest id (all of
/// them when its degree is at most `d`).
pub fn d_initialization(g: &Graph, d: usize) -> Result<Subgraph> {
    if g.is_directed() || g.is_weighted() {
        return Err(unsupported(
            "d-initialization needs an undirected unweighted graph",
        ));
    }
    if d == 0 {
        return Err(input("d-initialization needs d >= 1"));
    }
    let mut h = Subgraph::empty(g);
    for v in 0..g.node_count() {
        // adjacency lists are sorted by edge id
        h.extend(g.out_neighbors(v).iter().take(d).map(|&(_, e)| e));
    }
    Ok(h)
}

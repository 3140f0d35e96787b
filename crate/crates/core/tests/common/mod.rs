#![allow(dead_code)]

use sparsify::graph::{Graph, Subgraph};
use sparsify::harness::{generate_graph, GraphSpec};

pub const INF: u64 = u64::MAX;

/// Floyd-Warshall over the edges of `g` (restricted to `within` if given).
pub fn apsp(g: &Graph, within: Option<&Subgraph>) -> Vec<Vec<u64>> {
    let n = g.node_count();
    let mut d = vec![vec![INF; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0;
    }
    for (id, e) in g.edges().iter().enumerate() {
        if within.is_some_and(|h| !h.contains(id)) {
            continue;
        }
        d[e.u][e.v] = d[e.u][e.v].min(e.weight);
        if !g.is_directed() {
            d[e.v][e.u] = d[e.v][e.u].min(e.weight);
        }
    }
    for k in 0..n {
        let dk = d[k].clone();
        for row in d.iter_mut() {
            let a = row[k];
            if a == INF {
                continue;
            }
            for (x, &b) in row.iter_mut().zip(&dk) {
                if b != INF && a + b < *x {
                    *x = a + b;
                }
            }
        }
    }
    d
}

pub fn gnm(n: usize, avg_degree: usize, seed: u64) -> Graph {
    generate_graph(&GraphSpec::gnm_avg_degree(n, avg_degree), seed).unwrap()
}

pub fn directed_gnm(n: usize, m: usize, max_weight: Option<u64>, seed: u64) -> Graph {
    let spec = GraphSpec::Gnm {
        n,
        m,
        directed: true,
        max_weight,
    };
    generate_graph(&spec, seed).unwrap()
}

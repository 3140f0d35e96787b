//! Brute-force verification of demand-pair satisfaction.
//!
//! Distances come from fresh plain searches in `G` and in `H` for every
//! demand source. Nothing here touches the canonical-path comparator, so a
//! tie-breaking bug cannot certify its own output.

use std::collections::{BTreeMap, HashSet};
use std::io::Write;

use rand::Rng;

use crate::constructions::ErrorBudget;
use crate::demand::DemandSet;
use crate::error::{unsupported, Result};
use crate::graph::{Graph, NodeId, Subgraph, Weight};
use crate::oracle::CanonicalPathOracle;
use crate::par;
use crate::sampling::{rng, Seed};
use crate::search::{distances, Direction, Metric, UNREACHABLE};

/// Audit of one demand pair. `None` distances are infinite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyRow {
    pub pair_id: usize,
    pub s: NodeId,
    pub t: NodeId,
    pub dist_g: Option<Weight>,
    pub dist_h: Option<Weight>,
    pub satisfied: bool,
}

impl VerifyRow {
    /// `dist_h - dist_g`, or `None` when `t` is unreachable in `H`.
    pub fn error(&self) -> Option<Weight> {
        match (self.dist_g, self.dist_h) {
            (Some(g), Some(h)) => Some(h.saturating_sub(g)),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    rows: Vec<VerifyRow>,
    budget: ErrorBudget,
    h_edges: usize,
}

impl VerifyReport {
    /// Per-pair rows in demand order (increasing pair id).
    pub fn rows(&self) -> &[VerifyRow] {
        &self.rows
    }

    pub fn budget(&self) -> ErrorBudget {
        self.budget
    }

    pub fn h_edges(&self) -> usize {
        self.h_edges
    }

    pub fn satisfied_count(&self) -> usize {
        self.rows.iter().filter(|r| r.satisfied).count()
    }

    /// Satisfied share of the pairs; 1.0 for an empty demand set.
    pub fn satisfied_fraction(&self) -> f64 {
        if self.rows.is_empty() {
            1.0
        } else {
            self.satisfied_count() as f64 / self.rows.len() as f64
        }
    }

    pub fn all_satisfied(&self) -> bool {
        self.rows.iter().all(|r| r.satisfied)
    }

    /// Largest additive error; `None` if some pair is disconnected in `H`.
    pub fn max_error(&self) -> Option<Weight> {
        self.rows
            .iter()
            .try_fold(0, |acc, r| r.error().map(|e| acc.max(e)))
    }

    /// CSV with columns `pair_id,s,t,dist_g,dist_h,error,satisfied`; infinity is `inf`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let fmt = |d: Option<Weight>| d.map_or_else(|| "inf".to_string(), |d| d.to_string());
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "pair_id",
            "s",
            "t",
            "dist_g",
            "dist_h",
            "error",
            "satisfied",
        ])?;
        for r in &self.rows {
            w.write_record([
                r.pair_id.to_string(),
                r.s.to_string(),
                r.t.to_string(),
                fmt(r.dist_g),
                fmt(r.dist_h),
                fmt(r.error()),
                r.satisfied.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Checks every pair of `pairs` against `dist_H(s, t) <= dist_G(s, t) + k`.
pub fn verify_all(g: &Graph, h: &Subgraph, pairs: &DemandSet, k: ErrorBudget) -> VerifyReport {
    assert_eq!(
        h.parent_edge_count(),
        g.edge_count(),
        "subgraph does not belong to this graph"
    );
    let mut by_source: BTreeMap<NodeId, Vec<usize>> = BTreeMap::new();
    for (i, p) in pairs.iter().enumerate() {
        by_source.entry(p.s).or_default().push(i);
    }
    let groups: Vec<(NodeId, Vec<usize>)> = by_source.into_iter().collect();
    let found = par::map(&groups, |(s, idx)| {
        let in_g = distances(g, None, *s, Direction::Out, Metric::Weighted);
        let in_h = distances(g, Some(h), *s, Direction::Out, Metric::Weighted);
        idx.iter()
            .map(|&i| {
                let t = pairs.pairs()[i].t;
                (i, finite(in_g[t]), finite(in_h[t]))
            })
            .collect::<Vec<_>>()
    });

    let mut rows: Vec<VerifyRow> = pairs
        .iter()
        .map(|p| VerifyRow {
            pair_id: p.id,
            s: p.s,
            t: p.t,
            dist_g: None,
            dist_h: None,
            satisfied: false,
        })
        .collect();
    for (i, dg, dh) in found.into_iter().flatten() {
        rows[i].dist_g = dg;
        rows[i].dist_h = dh;
        rows[i].satisfied = k.admits(dg, dh);
    }
    VerifyReport {
        rows,
        budget: k,
        h_edges: h.len(),
    }
}

fn finite(d: Weight) -> Option<Weight> {
    (d != UNREACHABLE).then_some(d)
}

/// Checks the neighbourhood bound of a `d`-initialization `h`: for random
/// node pairs, the canonical shortest path missing `x` edges of `h` must have
/// at least `x·d/3` distinct nodes adjacent to it in `h`.
pub fn check_neighborhood_lemma(
    g: &Graph,
    h: &Subgraph,
    d: usize,
    trials: usize,
    seed: Seed,
) -> Result<bool> {
    if g.is_directed() || g.is_weighted() {
        return Err(unsupported(
            "the neighbourhood bound needs an undirected unweighted graph",
        ));
    }
    let n = g.node_count();
    if n < 2 {
        return Ok(true);
    }
    let mut rng = rng(seed);
    let picks: Vec<(NodeId, NodeId)> = (0..trials)
        .map(|_| {
            let u = rng.gen_range(0..n);
            let v = (u + rng.gen_range(1..n)) % n;
            (u, v)
        })
        .collect();
    let oracle = CanonicalPathOracle::with_metric(g, Metric::Hops);
    let ok = par::map(&picks, |&(u, v)| {
        let Some(path) = oracle.canonical_path(u, v).expect("nodes in range") else {
            return true;
        };
        let missing = path.edges().iter().filter(|&&e| !h.contains(e)).count();
        let mut adjacent = HashSet::new();
        for &x in path.nodes() {
            for &(y, e) in g.out_neighbors(x) {
                if h.contains(e) {
                    adjacent.insert(y);
                }
            }
        }
        3 * adjacent.len() >= missing * d
    });
    Ok(ok.into_iter().all(|b| b))
}

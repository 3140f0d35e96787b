//! From slack to complete: run a slack builder, drop the pairs it satisfied,
//! repeat on the rest, and finish the last few pairs exactly.
//!
//! Each round satisfies a constant fraction of what is left in expectation,
//! so the per-round sizes form a geometric series and the union stays within
//! a constant factor of the first round.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::{Duration, Instant};

use crate::constructions::preserver::{sxv_union, PreserveMode};
use crate::constructions::reachability::base_case_limit;
use crate::constructions::{
    build_slack_routed, canonical_routes, BuildOutput, ErrorBudget, Kind, ParamOverrides,
};
use crate::demand::{DemandPair, DemandSet};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, Path, Subgraph, Weight};
use crate::par;
use crate::sampling::{derive_seed, Seed};
use crate::search::{self, Direction, Metric, UNREACHABLE};
use crate::verify::verify_all;

#[derive(Clone, Debug, PartialEq)]
pub struct BootstrapConfig {
    pub kind: Kind,
    /// Pair count at or below which the exact base builder takes over;
    /// `None` picks the kind's default.
    pub p_star: Option<usize>,
    /// Slack rounds are capped at `max_rounds_factor · (⌈log₂ p⌉ + 1)`.
    pub max_rounds_factor: usize,
    pub seed: Seed,
    pub overrides: ParamOverrides,
}

impl BootstrapConfig {
    pub fn new(kind: Kind, seed: Seed) -> Self {
        BootstrapConfig {
            kind,
            p_star: None,
            max_rounds_factor: 50,
            seed,
            overrides: ParamOverrides::default(),
        }
    }

    /// 4 for preservers and spanners, `⌈√n⌉` for reachability.
    pub fn default_p_star(kind: Kind, n: usize) -> usize {
        match kind {
            Kind::Reachability => base_case_limit(n),
            _ => 4,
        }
    }

    pub fn effective_p_star(&self, n: usize) -> usize {
        self.p_star
            .unwrap_or_else(|| Self::default_p_star(self.kind, n))
            .max(1)
    }

    pub fn max_rounds(&self, p: usize) -> usize {
        self.max_rounds_factor.max(1) * (ceil_log2(p) + 1)
    }
}

fn ceil_log2(p: usize) -> usize {
    if p <= 1 {
        0
    } else {
        (usize::BITS - (p - 1).leading_zeros()) as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RoundKind {
    Slack,
    /// Exact builder on at most `p*` pairs.
    Base,
    /// Exact builder after the round cap was hit.
    ForcedBase,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundRecord {
    pub round: usize,
    pub kind: RoundKind,
    pub seed: Seed,
    /// `|P_i|` at the start of the round.
    pub pairs_remaining: usize,
    pub satisfied: usize,
    pub edges_added: usize,
    pub cumulative_edges: usize,
    /// A-priori size budget of the round's builder.
    pub budget: usize,
}

impl RoundRecord {
    pub fn satisfied_fraction(&self) -> f64 {
        if self.pairs_remaining == 0 {
            1.0
        } else {
            self.satisfied as f64 / self.pairs_remaining as f64
        }
    }
}

#[derive(Clone, Debug)]
pub struct SparsifyReport {
    pub kind: Kind,
    pub seed: Seed,
    pub initial_pairs: usize,
    pub rounds: Vec<RoundRecord>,
    pub total_edges: usize,
    pub forced_base: bool,
    pub wall_time: Duration,
}

impl SparsifyReport {
    pub fn slack_rounds(&self) -> impl Iterator<Item = &RoundRecord> {
        self.rounds.iter().filter(|r| r.kind == RoundKind::Slack)
    }

    /// `satisfied_i / |P_i|` of every slack round.
    pub fn slack_fractions(&self) -> Vec<f64> {
        self.slack_rounds()
            .map(RoundRecord::satisfied_fraction)
            .collect()
    }

    /// Sum of every round's budget.
    pub fn total_budget(&self) -> usize {
        self.rounds.iter().map(|r| r.budget).sum()
    }

    /// One line per round: `round,pairs_remaining,satisfied,edges_added,cumulative_edges`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "round",
            "pairs_remaining",
            "satisfied",
            "edges_added",
            "cumulative_edges",
        ])?;
        for r in &self.rounds {
            w.write_record([
                r.round.to_string(),
                r.pairs_remaining.to_string(),
                r.satisfied.to_string(),
                r.edges_added.to_string(),
                r.cumulative_edges.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Whether `dist_H(s, t) <= dist_G(s, t) + k` (reachability for `k = ∞`).
pub fn is_satisfied(
    g: &Graph,
    h: &Subgraph,
    pair: (NodeId, NodeId),
    k: ErrorBudget,
) -> Result<bool> {
    let (s, t) = pair;
    g.check_node(s)?;
    g.check_node(t)?;
    Ok(match k {
        ErrorBudget::Reachability => search::reachable(g, Some(h), s).contains(t),
        ErrorBudget::Additive(_) => {
            let dg = search::distances(g, None, s, Direction::Out, Metric::Weighted)[t];
            let dh = search::distances(g, Some(h), s, Direction::Out, Metric::Weighted)[t];
            k.admits(finite(dg), finite(dh))
        }
    })
}

fn finite(d: Weight) -> Option<Weight> {
    (d != UNREACHABLE).then_some(d)
}

/// Satisfaction of each pair in `h`, given `dist_G` per pair.
fn satisfied_mask(
    g: &Graph,
    h: &Subgraph,
    pairs: &[DemandPair],
    dist_g: &[Weight],
    k: ErrorBudget,
) -> Vec<bool> {
    let mut by_source: BTreeMap<NodeId, Vec<usize>> = BTreeMap::new();
    for (i, p) in pairs.iter().enumerate() {
        by_source.entry(p.s).or_default().push(i);
    }
    let groups: Vec<(NodeId, Vec<usize>)> = by_source.into_iter().collect();
    let checked = par::map(&groups, |(s, idx)| match k {
        ErrorBudget::Reachability => {
            let seen = search::reachable(g, Some(h), *s);
            idx.iter()
                .map(|&i| (i, seen.contains(pairs[i].t)))
                .collect::<Vec<_>>()
        }
        ErrorBudget::Additive(_) => {
            let dh = search::distances(g, Some(h), *s, Direction::Out, Metric::Weighted);
            idx.iter()
                .map(|&i| (i, k.admits(Some(dist_g[i]), finite(dh[pairs[i].t]))))
                .collect()
        }
    });
    let mut mask = vec![false; pairs.len()];
    for (i, ok) in checked.into_iter().flatten() {
        mask[i] = ok;
    }
    mask
}

/// Complete sparsifier of `kind` for every pair of `pairs`.
///
/// While more than `p*` pairs remain, runs the slack builder with a fresh
/// derived seed, adds its output to `H` and drops the pairs `H` now
/// satisfies. The remaining pairs get their canonical paths (the exact
/// source-restricted preserver for reachability). If the round cap is hit the
/// leftovers go to that exact step as well and the report is flagged. The
/// result is verified against every pair before it is returned.
pub fn bootstrap_complete(
    g: &Graph,
    pairs: &DemandSet,
    cfg: &BootstrapConfig,
) -> Result<(Subgraph, SparsifyReport)> {
    let started = Instant::now();
    let kind = cfg.kind;
    kind.check_graph(g)?;
    let budget = kind.error_budget();
    let routes = canonical_routes(g, kind.metric(), pairs)?;
    let p_star = cfg.effective_p_star(g.node_count());
    let max_rounds = cfg.max_rounds(pairs.len());

    // (pair, route index) of the pairs still open
    let mut open: Vec<(DemandPair, usize)> = pairs.iter().copied().zip(0..routes.len()).collect();
    let mut h = Subgraph::empty(g);
    let mut rounds = Vec::new();

    let mut round = 0;
    while open.len() > p_star && round < max_rounds {
        let seed = derive_seed(cfg.seed, round as u64);
        let current = DemandSet::from_pairs(open.iter().map(|(p, _)| *p).collect());
        let refs: Vec<&Path> = open.iter().map(|&(_, i)| &routes[i]).collect();
        let out: BuildOutput = build_slack_routed(kind, g, &current, &refs, &cfg.overrides, seed)?;
        let edges_added = h.union_with(&out.subgraph);

        let dist_g: Vec<Weight> = refs.iter().map(|p| p.weight()).collect();
        let mask = satisfied_mask(g, &h, current.pairs(), &dist_g, budget);
        let satisfied = mask.iter().filter(|&&b| b).count();
        rounds.push(RoundRecord {
            round,
            kind: RoundKind::Slack,
            seed,
            pairs_remaining: open.len(),
            satisfied,
            edges_added,
            cumulative_edges: h.len(),
            budget: out.budget(),
        });
        let mut keep = mask.iter().map(|&b| !b);
        open.retain(|_| keep.next().unwrap());
        round += 1;
    }

    let forced_base = open.len() > p_star;
    if !open.is_empty() {
        let (exact, hops) = if kind == Kind::Reachability {
            let endpoints: Vec<(NodeId, NodeId)> = open.iter().map(|(p, _)| (p.s, p.t)).collect();
            let (sub, stat) = sxv_union(g, &endpoints, PreserveMode::Reachability);
            (sub, stat.budget)
        } else {
            let mut sub = Subgraph::empty(g);
            let mut hops = 0;
            for &(_, i) in &open {
                sub.extend(routes[i].edges().iter().copied());
                hops += routes[i].hops();
            }
            (sub, hops)
        };
        let edges_added = h.union_with(&exact);
        rounds.push(RoundRecord {
            round,
            kind: if forced_base {
                RoundKind::ForcedBase
            } else {
                RoundKind::Base
            },
            seed: cfg.seed,
            pairs_remaining: open.len(),
            satisfied: open.len(),
            edges_added,
            cumulative_edges: h.len(),
            budget: hops,
        });
    }

    let check = verify_all(g, &h, pairs, budget);
    if !check.all_satisfied() {
        return Err(Error::Verification(format!(
            "{} of {} pairs unsatisfied after bootstrap",
            pairs.len() - check.satisfied_count(),
            pairs.len()
        )));
    }

    let report = SparsifyReport {
        kind,
        seed: cfg.seed,
        initial_pairs: pairs.len(),
        total_edges: h.len(),
        rounds,
        forced_base,
        wall_time: started.elapsed(),
    };
    Ok((h, report))
}

/// One slack round on all of `pairs`, reported like a bootstrap run.
pub fn run_slack_once(
    g: &Graph,
    pairs: &DemandSet,
    kind: Kind,
    overrides: &ParamOverrides,
    seed: Seed,
) -> Result<(BuildOutput, SparsifyReport)> {
    let started = Instant::now();
    kind.check_graph(g)?;
    let routes = canonical_routes(g, kind.metric(), pairs)?;
    let refs: Vec<&Path> = routes.iter().collect();
    let out = build_slack_routed(kind, g, pairs, &refs, overrides, seed)?;
    let satisfied = verify_all(g, &out.subgraph, pairs, kind.error_budget()).satisfied_count();
    let report = SparsifyReport {
        kind,
        seed,
        initial_pairs: pairs.len(),
        rounds: vec![RoundRecord {
            round: 0,
            kind: RoundKind::Slack,
            seed,
            pairs_remaining: pairs.len(),
            satisfied,
            edges_added: out.subgraph.len(),
            cumulative_edges: out.subgraph.len(),
            budget: out.budget(),
        }],
        total_edges: out.subgraph.len(),
        forced_base: false,
        wall_time: started.elapsed(),
    };
    Ok((out, report))
}

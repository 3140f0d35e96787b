use std::collections::{BTreeMap, BTreeSet, HashSet};

use log::warn;

use crate::error::{input, Result};
use crate::graph::{Graph, NodeId};
use crate::search;

/// A demand pair `(s, t)` with an id that survives filtering and removal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DemandPair {
    pub id: usize,
    pub s: NodeId,
    pub t: NodeId,
}

/// The demand pairs `P`, ordered by id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DemandSet {
    pairs: Vec<DemandPair>,
}

impl DemandSet {
    /// Validates raw pairs against `g`.
    ///
    /// Out-of-range endpoints are an error. Pairs with `s == t`, repeated
    /// pairs and pairs with `t` unreachable from `s` are dropped with a
    /// warning. Surviving pairs get ids `0..p` in input order.
    pub fn new(g: &Graph, raw: impl IntoIterator<Item = (NodeId, NodeId)>) -> Result<Self> {
        let raw: Vec<(NodeId, NodeId)> = raw.into_iter().collect();
        for &(s, t) in &raw {
            if s >= g.node_count() || t >= g.node_count() {
                return Err(input(format!(
                    "demand pair ({s}, {t}) outside [0, {})",
                    g.node_count()
                )));
            }
        }

        let sources: Vec<NodeId> = raw
            .iter()
            .map(|&(s, _)| s)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let reach: BTreeMap<NodeId, _> = sources
            .iter()
            .copied()
            .zip(crate::par::map(&sources, |&s| {
                search::reachable(g, None, s)
            }))
            .collect();

        let (mut trivial, mut dups, mut unreachable) = (0usize, 0usize, 0usize);
        let mut seen = HashSet::new();
        let mut pairs = Vec::new();
        for (s, t) in raw {
            if s == t {
                trivial += 1;
            } else if !seen.insert((s, t)) {
                dups += 1;
            } else if !reach[&s].contains(t) {
                unreachable += 1;
            } else {
                pairs.push(DemandPair {
                    id: pairs.len(),
                    s,
                    t,
                });
            }
        }
        if trivial > 0 {
            warn!("dropped {trivial} demand pairs with s = t");
        }
        if dups > 0 {
            warn!("dropped {dups} duplicate demand pairs");
        }
        if unreachable > 0 {
            warn!("dropped {unreachable} unreachable demand pairs");
        }
        Ok(DemandSet { pairs })
    }

    pub(crate) fn from_pairs(pairs: Vec<DemandPair>) -> Self {
        debug_assert!(pairs.windows(2).all(|w| w[0].id < w[1].id));
        DemandSet { pairs }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[DemandPair] {
        &self.pairs
    }

    pub fn iter(&self) -> impl Iterator<Item = &DemandPair> {
        self.pairs.iter()
    }

    /// Keeps only pairs for which `keep` holds; ids are unchanged.
    pub fn retain(&mut self, keep: impl FnMut(&DemandPair) -> bool) {
        self.pairs.retain(keep);
    }

    pub(crate) fn endpoints(&self) -> Vec<(NodeId, NodeId)> {
        self.pairs.iter().map(|p| (p.s, p.t)).collect()
    }
}

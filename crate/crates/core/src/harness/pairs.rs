use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use rand::seq::index;
use rand::Rng;

use crate::demand::DemandSet;
use crate::error::{input, Error, Result};
use crate::graph::{Graph, NodeId};
use crate::sampling::{rng, Seed};
use crate::search::reachable;

/// How demand pairs are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairMode {
    /// `p` distinct reachable pairs, uniform.
    Uniform { p: usize },
    /// Every reachable ordered pair of distinct nodes of a random `S`, `|S| = s`.
    SubsetCross { s: usize },
    /// `p` distinct reachable pairs with sources in a random `S`, `|S| = s`.
    Sxv { s: usize, p: usize },
}

impl fmt::Display for PairMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            PairMode::Uniform { p } => write!(f, "uniform:p={p}"),
            PairMode::SubsetCross { s } => write!(f, "subset-cross:s={s}"),
            PairMode::Sxv { s, p } => write!(f, "sxv:s={s},p={p}"),
        }
    }
}

impl FromStr for PairMode {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
        let mut p = None;
        let mut s = None;
        for item in rest.split(',').filter(|x| !x.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| input(format!("bad field `{item}` in pair mode")))?;
            let v: usize = v
                .parse()
                .map_err(|_| input(format!("bad number `{v}` in pair mode")))?;
            match k {
                "p" => p = Some(v),
                "s" => s = Some(v),
                _ => return Err(input(format!("unknown field `{k}` in pair mode"))),
            }
        }
        let need = |x: Option<usize>, what: &str| {
            x.ok_or_else(|| input(format!("pair mode `{text}` needs {what}")))
        };
        match kind {
            "uniform" => Ok(PairMode::Uniform { p: need(p, "p")? }),
            "subset-cross" => Ok(PairMode::SubsetCross { s: need(s, "s")? }),
            "sxv" => Ok(PairMode::Sxv {
                s: need(s, "s")?,
                p: need(p, "p")?,
            }),
            _ => Err(input(format!("unknown pair mode `{kind}`"))),
        }
    }
}

/// Reachability rows computed on demand.
struct Reach<'g> {
    g: &'g Graph,
    rows: HashMap<NodeId, FixedBitSet>,
    connected: bool,
}

impl<'g> Reach<'g> {
    fn new(g: &'g Graph) -> Self {
        // undirected and connected: every pair is reachable
        let connected = !g.is_directed() && reachable(g, None, 0).count_ones(..) == g.node_count();
        Reach {
            g,
            rows: HashMap::new(),
            connected,
        }
    }

    fn ok(&mut self, s: NodeId, t: NodeId) -> bool {
        if self.connected {
            return true;
        }
        let g = self.g;
        self.rows
            .entry(s)
            .or_insert_with(|| reachable(g, None, s))
            .contains(t)
    }
}

/// Draws demand pairs; the same `(graph, mode, seed)` gives the same pairs.
pub fn sample_pairs(g: &Graph, mode: PairMode, seed: Seed) -> Result<DemandSet> {
    let n = g.node_count();
    let mut rng = rng(seed);
    let mut reach = Reach::new(g);
    let raw = match mode {
        PairMode::Uniform { p } => {
            if p == 0 {
                return Err(input("need p >= 1 pairs"));
            }
            let sources: Vec<NodeId> = (0..n).collect();
            draw(&mut reach, &sources, p, &mut rng)?
        }
        PairMode::SubsetCross { s } => {
            let subset = subset(n, s, &mut rng)?;
            let mut out = Vec::new();
            for &a in &subset {
                for &b in &subset {
                    if a != b && reach.ok(a, b) {
                        out.push((a, b));
                    }
                }
            }
            out
        }
        PairMode::Sxv { s, p } => {
            if p == 0 {
                return Err(input("need p >= 1 pairs"));
            }
            let subset = subset(n, s, &mut rng)?;
            draw(&mut reach, &subset, p, &mut rng)?
        }
    };
    DemandSet::new(g, raw)
}

fn subset<R: Rng>(n: usize, s: usize, rng: &mut R) -> Result<Vec<NodeId>> {
    if s == 0 || s > n {
        return Err(input(format!("subset size {s} outside [1, {n}]")));
    }
    let mut v = index::sample(rng, n, s).into_vec();
    v.sort_unstable();
    Ok(v)
}

/// `p` distinct reachable pairs `(s, t)`, `s ∈ sources`, `s ≠ t`.
///
/// Rejection sampling first; if that stalls, all valid pairs are enumerated
/// and `p` of them are drawn uniformly.
fn draw<R: Rng>(
    reach: &mut Reach<'_>,
    sources: &[NodeId],
    p: usize,
    rng: &mut R,
) -> Result<Vec<(NodeId, NodeId)>> {
    let n = reach.g.node_count();
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(p);
    let attempts = 50 * p + 1000;
    for _ in 0..attempts {
        if out.len() == p || n < 2 {
            break;
        }
        let s = sources[rng.gen_range(0..sources.len())];
        let t = rng.gen_range(0..n);
        if s != t && !seen.contains(&(s, t)) && reach.ok(s, t) {
            seen.insert((s, t));
            out.push((s, t));
        }
    }
    if out.len() == p {
        return Ok(out);
    }
    let mut all = Vec::new();
    for &s in sources {
        for t in 0..n {
            if s != t && reach.ok(s, t) {
                all.push((s, t));
            }
        }
    }
    if all.len() < p {
        return Err(input(format!(
            "only {} reachable pairs available, asked for {p}",
            all.len()
        )));
    }
    Ok(index::sample(rng, all.len(), p)
        .into_iter()
        .map(|i| all[i])
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::undirected(n, &e).unwrap()
    }

    #[test]
    fn subset_cross_is_all_ordered_pairs() {
        let p = sample_pairs(&cycle(10), PairMode::SubsetCross { s: 3 }, 4).unwrap();
        assert_eq!(p.len(), 6);
        let nodes: HashSet<_> = p.iter().flat_map(|x| [x.s, x.t]).collect();
        assert_eq!(nodes.len(), 3);
    }

    #[test]
    fn uniform_single_pair() {
        let p = sample_pairs(&cycle(10), PairMode::Uniform { p: 1 }, 0).unwrap();
        assert_eq!(p.len(), 1);
        assert_ne!(p.pairs()[0].s, p.pairs()[0].t);
    }

    #[test]
    fn sxv_sources_come_from_a_small_set() {
        let p = sample_pairs(&cycle(30), PairMode::Sxv { s: 2, p: 10 }, 5).unwrap();
        assert_eq!(p.len(), 10);
        let sources: HashSet<_> = p.iter().map(|x| x.s).collect();
        assert!(sources.len() <= 2);
    }

    #[test]
    fn directed_sampling_only_returns_reachable_pairs() {
        // a directed path: only forward pairs are reachable
        let e: Vec<_> = (1..8).map(|i| (i - 1, i)).collect();
        let g = Graph::unweighted(8, true, &e).unwrap();
        let p = sample_pairs(&g, PairMode::Uniform { p: 28 }, 2).unwrap();
        assert_eq!(p.len(), 28);
        assert!(p.iter().all(|x| x.s < x.t));
        assert!(sample_pairs(&g, PairMode::Uniform { p: 29 }, 2).is_err());
    }

    #[test]
    fn sampling_is_reproducible() {
        let g = cycle(40);
        let a = sample_pairs(&g, PairMode::Uniform { p: 25 }, 8).unwrap();
        assert_eq!(a, sample_pairs(&g, PairMode::Uniform { p: 25 }, 8).unwrap());
    }

    #[test]
    fn mode_text() {
        for t in ["uniform:p=5", "subset-cross:s=3", "sxv:s=2,p=10"] {
            assert_eq!(t.parse::<PairMode>().unwrap().to_string(), t);
        }
        assert!("sxv:s=2".parse::<PairMode>().is_err());
        assert!(sample_pairs(&cycle(4), PairMode::SubsetCross { s: 5 }, 0).is_err());
    }
}

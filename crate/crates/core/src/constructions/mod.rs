//! Sparsifiers with slack, and the two exact subroutines they call.
//!
//! Each builder is a pure function of `(graph, pairs, parameters, seed)`. A
//! builder satisfies every "short" pair outright and each remaining pair
//! with constant probability; [`BuildOutput::claimed`] lists the pairs whose
//! satisfaction follows from the construction itself (the sample happened to
//! land where the argument needs it).

use std::fmt;
use std::str::FromStr;

use crate::demand::DemandSet;
use crate::error::{input, unsupported, Error, Result};
use crate::graph::{Graph, Path, Subgraph, Weight};
use crate::oracle::batch_paths;
use crate::sampling::{clamp_probability, Seed};
use crate::search::Metric;

mod plus2;
mod plus4;
mod plus6;
pub(crate) mod preserver;
pub(crate) mod reachability;
mod subsetwise;

pub use plus2::build_plus2_slack;
pub use plus4::build_plus4_slack;
pub use plus6::build_plus6_slack;
pub use preserver::{build_preserver_slack, build_sxv_preserver, PreserveMode};
pub use reachability::build_reachability_slack;
pub use subsetwise::build_subsetwise_plus2;

/// The sparsifier families, each fixing its additive error budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    /// Distances preserved exactly.
    Preserver,
    /// Only `s ⇝ t` reachability preserved.
    Reachability,
    Plus2,
    Plus4,
    Plus6,
}

impl Kind {
    pub const ALL: [Kind; 5] = [
        Kind::Preserver,
        Kind::Reachability,
        Kind::Plus2,
        Kind::Plus4,
        Kind::Plus6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Preserver => "preserver",
            Kind::Reachability => "reach",
            Kind::Plus2 => "plus2",
            Kind::Plus4 => "plus4",
            Kind::Plus6 => "plus6",
        }
    }

    pub fn error_budget(self) -> ErrorBudget {
        match self {
            Kind::Preserver => ErrorBudget::Additive(0),
            Kind::Reachability => ErrorBudget::Reachability,
            Kind::Plus2 => ErrorBudget::Additive(2),
            Kind::Plus4 => ErrorBudget::Additive(4),
            Kind::Plus6 => ErrorBudget::Additive(6),
        }
    }

    pub fn is_spanner(self) -> bool {
        matches!(self, Kind::Plus2 | Kind::Plus4 | Kind::Plus6)
    }

    /// Metric of the canonical paths the builder works with.
    pub fn metric(self) -> Metric {
        match self {
            Kind::Reachability => Metric::Hops,
            _ => Metric::Weighted,
        }
    }

    /// Exponent `c` of `p` in the size bound `O(n^b p^c)`.
    pub fn p_exponent(self) -> f64 {
        match self {
            Kind::Preserver => 0.5,
            Kind::Reachability => 2.0 / 3.0,
            Kind::Plus2 => 1.0 / 3.0,
            Kind::Plus4 => 2.0 / 7.0,
            Kind::Plus6 => 0.25,
        }
    }

    /// Reference size `n^b p^c` of the kind's bound (`(np)^{2/3}` for reachability).
    pub fn bound_reference(self, n: usize, p: usize) -> f64 {
        let (n, p) = (n as f64, p as f64);
        match self {
            Kind::Reachability => (n * p).powf(2.0 / 3.0),
            k => n * p.powf(k.p_exponent()),
        }
    }

    /// Rejects graphs outside the kind's setting.
    pub fn check_graph(self, g: &Graph) -> Result<()> {
        match self {
            Kind::Preserver => Ok(()),
            Kind::Reachability if g.is_directed() => Ok(()),
            Kind::Reachability => Err(unsupported("reachability preservers need a directed graph")),
            _ if !g.is_directed() && !g.is_weighted() => Ok(()),
            k => Err(unsupported(format!(
                "{} spanners need an undirected unweighted graph",
                k.name()
            ))),
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Kind::ALL
            .into_iter()
            .find(|k| k.name() == s || (s == "reachability" && *k == Kind::Reachability))
            .ok_or_else(|| input(format!("unknown kind `{s}`")))
    }
}

/// The `k` of a `+k` guarantee; `Reachability` is `k = ∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ErrorBudget {
    Additive(Weight),
    Reachability,
}

impl ErrorBudget {
    /// Whether `dist_h` meets the budget against `dist_g` (`None` is infinity).
    pub fn admits(self, dist_g: Option<Weight>, dist_h: Option<Weight>) -> bool {
        match (self, dist_g, dist_h) {
            (_, _, None) => false,
            (ErrorBudget::Reachability, _, Some(_)) => true,
            (ErrorBudget::Additive(_), None, Some(_)) => true,
            (ErrorBudget::Additive(k), Some(g), Some(h)) => h <= g.saturating_add(k),
        }
    }
}

impl fmt::Display for ErrorBudget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ErrorBudget::Additive(k) => write!(f, "{k}"),
            ErrorBudget::Reachability => f.write_str("inf"),
        }
    }
}

impl FromStr for ErrorBudget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inf" | "infinity" | "reach" => Ok(ErrorBudget::Reachability),
            _ => s
                .parse()
                .map(ErrorBudget::Additive)
                .map_err(|_| input(format!("bad error budget `{s}`"))),
        }
    }
}

/// Optional replacements for the default parameters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParamOverrides {
    pub ell: Option<usize>,
    pub d: Option<usize>,
    pub medium_threshold: Option<usize>,
}

/// Resolved parameters of one builder invocation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Params {
    /// Short/long threshold: hops (preservers) or missing edges (spanners).
    pub ell: usize,
    /// Initialization degree; unused by the preservers.
    pub d: usize,
    /// Medium/long threshold of the +4 spanner; unused elsewhere.
    pub medium_threshold: usize,
    /// Main sampling probability.
    pub probability: f64,
    /// Second sample of the +4 spanner (BFS roots for long pairs).
    pub probability_long: f64,
}

impl Params {
    /// Defaults for `kind` on `n` nodes and `p` pairs, then `overrides`.
    pub fn for_kind(kind: Kind, n: usize, p: usize, overrides: &ParamOverrides) -> Self {
        let (n, p) = (n as u128, p.max(1) as u128);
        let (ell, d) = match kind {
            // ell^2 p <= n^2
            Kind::Preserver => (floor_root(n * n, p, 2), 1),
            // ell^3 p <= n^2
            Kind::Reachability => (floor_root(n * n, p, 3), 1),
            // d^3 <= p, ell^3 p^2 <= n^3
            Kind::Plus2 => (floor_root(n.pow(3), p * p, 3), floor_root(p, 1, 3)),
            // d^7 <= p^2, ell^7 p^5 <= n^7
            Kind::Plus4 => (
                floor_root(n.saturating_pow(7), p.saturating_pow(5), 7),
                floor_root(p * p, 1, 7),
            ),
            // d^4 <= p, ell^4 p^3 <= n^4
            Kind::Plus6 => (floor_root(n.pow(4), p.pow(3), 4), floor_root(p, 1, 4)),
        };
        let ell = overrides.ell.unwrap_or(ell as usize).max(1);
        let d = overrides.d.unwrap_or(d as usize).max(1);
        let medium_threshold = overrides
            .medium_threshold
            .unwrap_or(n as usize / (d * d))
            .max(1);
        let probability = match kind {
            Kind::Preserver | Kind::Reachability => 1.0 / ell as f64,
            _ => 1.0 / (ell as f64 * d as f64),
        };
        Params {
            ell,
            d,
            medium_threshold,
            probability: clamp_probability(probability),
            probability_long: clamp_probability(d as f64 / n as f64),
        }
    }
}

/// Largest `x` with `x^k * den <= num`, at least 1.
fn floor_root(num: u128, den: u128, k: u32) -> u64 {
    let fits = |x: u128| {
        x.checked_pow(k)
            .and_then(|v| v.checked_mul(den))
            .is_some_and(|v| v <= num)
    };
    let (mut lo, mut hi) = (1u128, 1u128);
    while fits(hi) {
        lo = hi;
        hi *= 2;
    }
    // fits(lo) or lo == 1, !fits(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo as u64
}

/// Edges added by one phase of a build, and the phase's a-priori size budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseStat {
    pub name: &'static str,
    pub added: usize,
    pub budget: usize,
}

/// Result of one builder invocation.
#[derive(Clone, Debug)]
pub struct BuildOutput {
    pub subgraph: Subgraph,
    pub params: Params,
    pub phases: Vec<PhaseStat>,
    /// Ids of the pairs the construction itself guarantees, increasing.
    pub claimed: Vec<usize>,
    /// Sizes of the node samples drawn, by name.
    pub samples: Vec<(&'static str, usize)>,
}

impl BuildOutput {
    /// Sum of the phase budgets; the subgraph never exceeds it.
    pub fn budget(&self) -> usize {
        self.phases.iter().map(|p| p.budget).sum()
    }

    fn empty(g: &Graph, params: Params) -> Self {
        BuildOutput {
            subgraph: Subgraph::empty(g),
            params,
            phases: Vec::new(),
            claimed: Vec::new(),
            samples: Vec::new(),
        }
    }
}

/// Runs the slack builder of `kind` with default parameters adjusted by `overrides`.
pub fn build_slack(
    kind: Kind,
    g: &Graph,
    pairs: &DemandSet,
    overrides: &ParamOverrides,
    seed: Seed,
) -> Result<BuildOutput> {
    match kind {
        Kind::Preserver => build_preserver_slack(g, pairs, overrides, seed),
        Kind::Reachability => build_reachability_slack(g, pairs, overrides, seed),
        Kind::Plus2 => build_plus2_slack(g, pairs, overrides, seed),
        Kind::Plus4 => build_plus4_slack(g, pairs, overrides, seed),
        Kind::Plus6 => build_plus6_slack(g, pairs, overrides, seed),
    }
}

/// Same as [`build_slack`] with the pairs' canonical paths precomputed
/// (`routes[i]` belongs to `pairs.pairs()[i]`).
pub(crate) fn build_slack_routed(
    kind: Kind,
    g: &Graph,
    pairs: &DemandSet,
    routes: &[&Path],
    overrides: &ParamOverrides,
    seed: Seed,
) -> Result<BuildOutput> {
    kind.check_graph(g)?;
    let params = Params::for_kind(kind, g.node_count(), pairs.len(), overrides);
    if pairs.is_empty() {
        return Ok(BuildOutput::empty(g, params));
    }
    match kind {
        Kind::Preserver => preserver::slack(g, pairs, routes, params, seed),
        Kind::Reachability => reachability::slack(g, pairs, routes, params, seed),
        Kind::Plus2 => plus2::slack(g, pairs, routes, params, seed),
        Kind::Plus4 => plus4::slack(g, pairs, routes, params, seed),
        Kind::Plus6 => plus6::slack(g, pairs, routes, params, seed),
    }
}

/// Canonical path of every demand pair under `metric`, aligned with `pairs`.
pub(crate) fn canonical_routes(g: &Graph, metric: Metric, pairs: &DemandSet) -> Result<Vec<Path>> {
    for p in pairs.iter() {
        g.check_node(p.s)?;
        g.check_node(p.t)?;
    }
    batch_paths(g, metric, &pairs.endpoints())
        .into_iter()
        .zip(pairs.iter())
        .map(|(path, p)| {
            path.ok_or_else(|| input(format!("demand pair ({}, {}) is unreachable", p.s, p.t)))
        })
        .collect()
}

fn run_with_routes(
    kind: Kind,
    g: &Graph,
    pairs: &DemandSet,
    overrides: &ParamOverrides,
    seed: Seed,
) -> Result<BuildOutput> {
    kind.check_graph(g)?;
    let routes = canonical_routes(g, kind.metric(), pairs)?;
    let refs: Vec<&Path> = routes.iter().collect();
    build_slack_routed(kind, g, pairs, &refs, overrides, seed)
}

/// Missing-edge positions of a route against a snapshot, with the helpers
/// the spanner builders share.
pub(crate) struct Route<'a> {
    pub path: &'a Path,
    /// Indices into `path.edges()` of edges absent from the snapshot.
    pub missing: Vec<usize>,
}

impl<'a> Route<'a> {
    pub fn new(path: &'a Path, snapshot: &Subgraph) -> Self {
        Route {
            path,
            missing: path.missing_positions(snapshot),
        }
    }

    pub fn missing_count(&self) -> usize {
        self.missing.len()
    }

    pub fn missing_edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.missing.iter().map(|&i| self.path.edges()[i])
    }

    /// The first and last `ell` missing edges.
    pub fn prefix_suffix_edges(&self, ell: usize) -> impl Iterator<Item = usize> + '_ {
        let x = self.missing.len();
        let edges = self.path.edges();
        self.missing
            .iter()
            .enumerate()
            .filter(move |&(j, _)| j < ell || j + ell >= x)
            .map(move |(_, &i)| edges[i])
    }

    /// Whether prefix and suffix together cover every missing edge.
    pub fn prefix_suffix_cover(&self, ell: usize) -> bool {
        self.missing.len() <= 2 * ell
    }

    /// Once the prefix is added, distances from the source are exact up to
    /// the first missing edge after it: the nodes `path.nodes()[..=end]`.
    /// Only meaningful when `!prefix_suffix_cover(ell)`.
    pub fn exact_prefix_nodes(&self, ell: usize) -> &[usize] {
        &self.path.nodes()[..=self.missing[ell]]
    }

    /// Mirror of [`Route::exact_prefix_nodes`] at the target end.
    pub fn exact_suffix_nodes(&self, ell: usize) -> &[usize] {
        let x = self.missing.len();
        &self.path.nodes()[self.missing[x - ell - 1] + 1..]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floor_root_is_exact_on_perfect_powers() {
        assert_eq!(floor_root(64, 1, 3), 4);
        assert_eq!(floor_root(63, 1, 3), 3);
        assert_eq!(floor_root(4096 * 4096, 4096, 2), 64);
        assert_eq!(floor_root(0, 1, 2), 1);
        assert_eq!(floor_root(u128::MAX, 1, 7), floor_root(u128::MAX, 1, 7));
    }

    #[test]
    fn default_parameters() {
        let none = ParamOverrides::default();
        let p = Params::for_kind(Kind::Plus2, 1000, 300, &none);
        // 300^{1/3} = 6.69, 1000 / 300^{2/3} = 22.4
        assert_eq!((p.d, p.ell), (6, 22));
        assert!((p.probability - 1.0 / 132.0).abs() < 1e-12);

        let p = Params::for_kind(Kind::Plus4, 4096, 4096, &none);
        // 4096^{2/7} = 10.77, 4096 / 4096^{5/7} = 10.77, 4096 / 100 = 40
        assert_eq!((p.d, p.ell, p.medium_threshold), (10, 10, 40));
        assert!((p.probability_long - 10.0 / 4096.0).abs() < 1e-12);

        let p = Params::for_kind(Kind::Plus6, 4096, 4096, &none);
        assert_eq!((p.d, p.ell), (8, 8));

        let p = Params::for_kind(Kind::Preserver, 4096, 4096, &none);
        assert_eq!(p.ell, 64);

        // n^{2/3} / p^{1/3} = 100 / 6.69
        let p = Params::for_kind(Kind::Reachability, 1000, 300, &none);
        assert_eq!(p.ell, 14);

        let p = Params::for_kind(Kind::Preserver, 50, 1, &none);
        assert_eq!(p.ell, 50);
    }

    #[test]
    fn parameters_floor_and_clamp() {
        // p close to n^2: ell would be below 1
        let p = Params::for_kind(Kind::Plus2, 10, 90, &ParamOverrides::default());
        assert_eq!(p.ell, 1);
        assert!(p.probability <= 1.0);
        let o = ParamOverrides {
            ell: Some(0),
            d: Some(3),
            medium_threshold: None,
        };
        let p = Params::for_kind(Kind::Plus4, 100, 10, &o);
        assert_eq!((p.ell, p.d, p.medium_threshold), (1, 3, 11));
        assert_eq!(p.probability, 1.0 / 3.0);
    }

    #[test]
    fn error_budget_comparisons() {
        let k2 = ErrorBudget::Additive(2);
        assert!(k2.admits(Some(3), Some(5)));
        assert!(!k2.admits(Some(3), Some(6)));
        assert!(!k2.admits(Some(3), None));
        assert!(ErrorBudget::Reachability.admits(Some(3), Some(100)));
        assert_eq!(
            "inf".parse::<ErrorBudget>().unwrap(),
            ErrorBudget::Reachability
        );
        assert_eq!(
            "4".parse::<ErrorBudget>().unwrap(),
            ErrorBudget::Additive(4)
        );
        assert!("x".parse::<ErrorBudget>().is_err());
    }

    #[test]
    fn kind_names_round_trip() {
        for k in Kind::ALL {
            assert_eq!(k.name().parse::<Kind>().unwrap(), k);
        }
        assert!("plus3".parse::<Kind>().is_err());
    }

    #[test]
    fn route_prefix_and_suffix() {
        let g = Graph::undirected(8, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)])
            .unwrap();
        let path = Path::from_nodes(&g, &[0, 1, 2, 3, 4, 5, 6, 7]).unwrap();
        // present: edges 1 and 4
        let snap = Subgraph::from_edges(&g, [1, 4]).unwrap();
        let r = Route::new(&path, &snap);
        assert_eq!(r.missing, vec![0, 2, 3, 5, 6]);
        assert_eq!(
            r.prefix_suffix_edges(2).collect::<Vec<_>>(),
            vec![0, 2, 5, 6]
        );
        assert!(!r.prefix_suffix_cover(2));
        assert!(r.prefix_suffix_cover(3));
        assert_eq!(r.exact_prefix_nodes(2), &[0, 1, 2, 3]);
        assert_eq!(r.exact_suffix_nodes(2), &[4, 5, 6, 7]);
    }
}

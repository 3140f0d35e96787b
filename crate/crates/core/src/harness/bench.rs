use std::io::Write;

use serde::Serialize;

use crate::bootstrap::{bootstrap_complete, BootstrapConfig};
use crate::constructions::Kind;
use crate::error::{Error, Result};
use crate::harness::generate::{generate_graph, GraphSpec};
use crate::harness::pairs::{sample_pairs, PairMode};
use crate::par;
use crate::sampling::{derive_seed, Seed};
use crate::verify::verify_all;

/// One complete-sparsifier run of a benchmark sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub kind: String,
    pub n: usize,
    /// Edges of the input graph.
    pub m: usize,
    pub p: usize,
    pub seed: Seed,
    /// `|E(H)|`.
    pub edges: usize,
    pub rounds: usize,
    /// Mean satisfied fraction over the slack rounds; 1 if there were none.
    pub mean_fraction: f64,
    pub forced_base: bool,
    /// Summed per-round budgets; never below `edges`.
    pub budget: usize,
    pub wall_ms: u64,
    /// `n·p^c` for the kind's exponent `c`.
    pub bound_reference: f64,
}

/// Runs bootstrap plus full verification for every `(p, seed)`.
///
/// The graph depends on the seed only, so one seed sees the same graph at
/// every `p`. Pairs are drawn uniformly. An unsatisfied pair is an error.
/// Rows come back sorted by `(p, seed)`.
pub fn run_benchmark(
    kind: Kind,
    spec: &GraphSpec,
    p_list: &[usize],
    seeds: &[Seed],
) -> Result<Vec<BenchRow>> {
    let graphs: Vec<_> = par::map(seeds, |&seed| generate_graph(spec, seed))
        .into_iter()
        .collect::<Result<_>>()?;
    for g in &graphs {
        kind.check_graph(g)?;
    }
    let mut jobs: Vec<(usize, usize)> = p_list
        .iter()
        .flat_map(|&p| (0..seeds.len()).map(move |i| (p, i)))
        .collect();
    jobs.sort_unstable_by_key(|&(p, i)| (p, seeds[i]));

    let rows = par::map(&jobs, |&(p, i)| -> Result<BenchRow> {
        let g = &graphs[i];
        let seed = seeds[i];
        let pairs = sample_pairs(g, PairMode::Uniform { p }, derive_seed(seed, p as u64))?;
        let cfg = BootstrapConfig::new(kind, seed);
        let (h, report) = bootstrap_complete(g, &pairs, &cfg)?;
        let check = verify_all(g, &h, &pairs, kind.error_budget());
        if !check.all_satisfied() {
            return Err(Error::Verification(format!(
                "{kind} on {spec} with p = {p}, seed = {seed}: {} pairs unsatisfied",
                pairs.len() - check.satisfied_count()
            )));
        }
        let fractions = report.slack_fractions();
        let mean_fraction = if fractions.is_empty() {
            1.0
        } else {
            fractions.iter().sum::<f64>() / fractions.len() as f64
        };
        Ok(BenchRow {
            kind: kind.name().to_string(),
            n: g.node_count(),
            m: g.edge_count(),
            p: pairs.len(),
            seed,
            edges: h.len(),
            rounds: report.rounds.len(),
            mean_fraction,
            forced_base: report.forced_base,
            budget: report.total_budget(),
            wall_ms: report.wall_time.as_millis() as u64,
            bound_reference: kind.bound_reference(g.node_count(), pairs.len()),
        })
    });
    rows.into_iter().collect()
}

pub fn write_bench_csv<W: Write>(out: W, rows: &[BenchRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

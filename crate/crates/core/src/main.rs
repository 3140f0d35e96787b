use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use log::info;

use sparsify::bootstrap::{bootstrap_complete, run_slack_once, BootstrapConfig, SparsifyReport};
use sparsify::constructions::{ErrorBudget, Kind, ParamOverrides};
use sparsify::demand::DemandSet;
use sparsify::graph::Subgraph;
use sparsify::harness::{
    fit_exponent, generate_graph, run_benchmark, sample_pairs, write_bench_csv, GraphSpec, PairMode,
};
use sparsify::sampling::Seed;
use sparsify::verify::verify_all;
use sparsify::{io as gio, Error, Result};

#[derive(Parser)]
#[command(
    name = "sparsify",
    version,
    about = "Sparse spanners and preservers for demand pairs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// One slack round; only the pairs the builder claims are checked.
    Slack,
    /// Bootstrap until every pair is satisfied.
    Complete,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic graph.
    Generate {
        /// gnm, grid, layered-dag or tree
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        /// Grid side length (instead of n).
        #[arg(long)]
        side: Option<usize>,
        #[arg(long)]
        directed: bool,
        /// Random integer weights in [1, max] (gnm only).
        #[arg(long)]
        max_weight: Option<u64>,
        #[arg(long, env = "SPARSIFY_SEED", default_value_t = 0)]
        seed: Seed,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw demand pairs for a graph.
    Pairs {
        #[arg(long)]
        graph: PathBuf,
        /// uniform, subset-cross or sxv
        #[arg(long, default_value = "uniform")]
        mode: String,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long, env = "SPARSIFY_SEED", default_value_t = 0)]
        seed: Seed,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a sparsifier and verify it.
    Sparsify {
        #[arg(long)]
        kind: Kind,
        #[arg(long, value_enum, default_value = "complete")]
        mode: Mode,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        pairs: PathBuf,
        #[arg(long, env = "SPARSIFY_SEED", default_value_t = 0)]
        seed: Seed,
        /// Subgraph output (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-round CSV report.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        medium_threshold: Option<usize>,
        /// Pair count handed to the exact builder (complete mode).
        #[arg(long)]
        p_star: Option<usize>,
    },
    /// Check a subgraph against demand pairs.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        sub: PathBuf,
        #[arg(long)]
        pairs: PathBuf,
        /// Additive error allowed, or `inf` for reachability.
        #[arg(long, default_value = "0")]
        k: ErrorBudget,
        /// Per-pair CSV (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep p on synthetic graphs and write one CSV row per run.
    Bench {
        #[arg(long)]
        kind: Kind,
        /// e.g. gnm:n=1000,m=4000
        #[arg(long)]
        spec: GraphSpec,
        #[arg(long, value_delimiter = ',', required = true)]
        p_list: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "0")]
        seeds: Vec<Seed>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also fit the edge-count exponent with this baseline.
        #[arg(long)]
        fit_baseline: Option<f64>,
    },
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(gio::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

/// `Ok(true)` when every verification passed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Generate {
            kind,
            n,
            m,
            side,
            directed,
            max_weight,
            seed,
            out,
        } => {
            let mut text = format!("{kind}:");
            for (key, val) in [("n", n), ("m", m), ("side", side)] {
                if let Some(v) = val {
                    text.push_str(&format!("{key}={v},"));
                }
            }
            if let Some(w) = max_weight {
                text.push_str(&format!("max_weight={w},"));
            }
            if directed {
                text.push_str("directed");
            }
            let spec: GraphSpec = text.parse()?;
            let g = generate_graph(&spec, seed)?;
            info!("{spec}: {} nodes, {} edges", g.node_count(), g.edge_count());
            gio::write_graph(output(&out)?, &g)?;
            Ok(true)
        }
        Command::Pairs {
            graph,
            mode,
            p,
            s,
            seed,
            out,
        } => {
            let g = gio::load_graph(graph)?;
            let mut text = format!("{mode}:");
            if let Some(p) = p {
                text.push_str(&format!("p={p},"));
            }
            if let Some(s) = s {
                text.push_str(&format!("s={s}"));
            }
            let mode: PairMode = text.parse()?;
            let pairs = sample_pairs(&g, mode, seed)?;
            let raw: Vec<_> = pairs.iter().map(|x| (x.s, x.t)).collect();
            gio::write_pairs(output(&out)?, &raw)?;
            Ok(true)
        }
        Command::Sparsify {
            kind,
            mode,
            graph,
            pairs,
            seed,
            out,
            report,
            ell,
            d,
            medium_threshold,
            p_star,
        } => {
            let g = gio::load_graph(graph)?;
            let demand = DemandSet::new(&g, gio::load_pairs(pairs)?)?;
            let overrides = ParamOverrides {
                ell,
                d,
                medium_threshold,
            };
            let (h, rep, ok): (Subgraph, SparsifyReport, bool) = match mode {
                Mode::Complete => {
                    let mut cfg = BootstrapConfig::new(kind, seed);
                    cfg.overrides = overrides;
                    cfg.p_star = p_star;
                    let (h, rep) = bootstrap_complete(&g, &demand, &cfg)?;
                    (h, rep, true)
                }
                Mode::Slack => {
                    let (out, rep) = run_slack_once(&g, &demand, kind, &overrides, seed)?;
                    let check = verify_all(&g, &out.subgraph, &demand, kind.error_budget());
                    let ok = out.claimed.iter().all(|&id| check.rows()[id].satisfied);
                    if !ok {
                        log::error!("a claimed pair is not satisfied");
                    }
                    (out.subgraph, rep, ok)
                }
            };
            eprintln!(
                "{kind}: {} pairs, {} of {} edges kept, {} round(s)",
                demand.len(),
                h.len(),
                g.edge_count(),
                rep.rounds.len()
            );
            gio::write_subgraph(output(&out)?, &g, &h)?;
            if let Some(path) = report {
                rep.write_csv(gio::create(path)?)?;
            }
            Ok(ok)
        }
        Command::Verify {
            graph,
            sub,
            pairs,
            k,
            out,
        } => {
            let g = gio::load_graph(graph)?;
            let h = gio::load_subgraph(sub, &g)?;
            let demand = DemandSet::new(&g, gio::load_pairs(pairs)?)?;
            let rep = verify_all(&g, &h, &demand, k);
            rep.write_csv(output(&out)?)?;
            eprintln!(
                "{} of {} pairs satisfied with error budget {k}",
                rep.satisfied_count(),
                demand.len()
            );
            Ok(rep.all_satisfied())
        }
        Command::Bench {
            kind,
            spec,
            p_list,
            seeds,
            out,
            fit_baseline,
        } => {
            let rows = run_benchmark(kind, &spec, &p_list, &seeds)?;
            write_bench_csv(output(&out)?, &rows)?;
            if let Some(b) = fit_baseline {
                let fit = fit_exponent(&rows, b)?;
                eprintln!(
                    "exponent {:.4} (r^2 {:.4}, {} points{})",
                    fit.exponent,
                    fit.r_squared,
                    fit.points,
                    if fit.degenerate {
                        ", constant data"
                    } else {
                        ""
                    }
                );
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ Error::Verification(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

//! Synthetic graphs, demand sampling, benchmark sweeps and exponent fitting.

mod bench;
mod fit;
mod generate;
mod pairs;

pub use bench::{run_benchmark, write_bench_csv, BenchRow};
pub use fit::{fit_exponent, ExponentFit};
pub use generate::{generate_graph, GraphSpec};
pub use pairs::{sample_pairs, PairMode};

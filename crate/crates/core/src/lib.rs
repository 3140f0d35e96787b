//! Sparse subgraphs that preserve distances or reachability between demand pairs.
//!
//! Every builder in [`constructions`] first produces a sparsifier *with
//! slack*: a subgraph that satisfies a constant fraction of the demand pairs
//! in expectation, built from random node samples that hit the long
//! canonical shortest paths. [`bootstrap::bootstrap_complete`] repeats a
//! slack builder on the unsatisfied pairs until all of them are served.
//!
//! Supported targets:
//!
//! | kind        | guarantee                         | graphs                         |
//! |-------------|-----------------------------------|--------------------------------|
//! | `preserver` | `dist_H = dist_G`                 | any, weighted or not           |
//! | `reach`     | `t` reachable from `s` in `H`     | directed                       |
//! | `plus2`     | `dist_H ≤ dist_G + 2`             | undirected, unweighted         |
//! | `plus4`     | `dist_H ≤ dist_G + 4`             | undirected, unweighted         |
//! | `plus6`     | `dist_H ≤ dist_G + 6`             | undirected, unweighted         |
//!
//! ```
//! use sparsify::bootstrap::{bootstrap_complete, BootstrapConfig};
//! use sparsify::constructions::Kind;
//! use sparsify::demand::DemandSet;
//! use sparsify::graph::Graph;
//! use sparsify::verify::verify_all;
//!
//! let g = Graph::undirected(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]).unwrap();
//! let pairs = DemandSet::new(&g, [(0, 3), (1, 4)]).unwrap();
//! let (h, _report) = bootstrap_complete(&g, &pairs, &BootstrapConfig::new(Kind::Plus2, 7)).unwrap();
//! assert!(verify_all(&g, &h, &pairs, Kind::Plus2.error_budget()).all_satisfied());
//! ```

pub mod bootstrap;
pub mod constructions;
pub mod demand;
pub mod error;
pub mod graph;
pub mod harness;
pub mod io;
pub mod oracle;
pub mod par;
pub mod sampling;
pub mod search;
pub mod verify;

pub use error::{Error, Result};

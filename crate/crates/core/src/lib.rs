//! Min-max correlation clustering and min-max multicut.
//!
//! The objective in both problems is the worst cluster rather than the total:
//! a clustering is charged the largest per-cluster disagreement, a multicut the
//! largest part boundary. Solvers work by covering the vertices with cheap
//! LP-rounded sets under multiplicative weights and aggregating the cover into
//! a partition.
//!
//! * [`cc_complete`] solves complete unit-weight signed graphs directly.
//! * [`multicut`] handles weighted graphs with source-sink pairs, plus the
//!   variant where every part must hold a terminal.
//! * [`reduction`] turns any signed graph into a multicut instance.
//! * [`oracle`] gives exact optima by enumeration for small inputs.
//! * [`lp`] is the bounded-variable simplex with lazy cuts underneath.
//!
//! ```
//! use minmax_cc::cc_complete::solve_cc_complete;
//! use minmax_cc::graph::{max_disagreement, SignedGraph};
//!
//! // Triangle with one negative edge: some cluster always pays 1.
//! let g = SignedGraph::complete(3, &[(1, 2)]).unwrap();
//! let (clustering, _) = solve_cc_complete(&g, 0, None).unwrap();
//! assert_eq!(max_disagreement(&g, &clustering), 1.0);
//! ```

pub mod error;
pub mod graph;
pub mod lp;
pub mod cc_complete;
pub mod cover;
pub mod metric;
pub mod oracle;
pub mod reduction;
pub mod multicut;
pub mod io;
pub mod gen;
pub mod bench;
pub mod cli;

pub use error::{Error, Result};

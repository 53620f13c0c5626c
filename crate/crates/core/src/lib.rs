//! Approximation algorithms for pairwise distance preservers, pairwise
//! spanners and uniform-cost directed Steiner forest, the junction-tree
//! machinery behind them, hardness-reduction instance generators, and
//! brute-force oracles for checking all of it on small graphs.

pub mod bench;
pub mod dsf;
pub mod error;
pub mod graph;
pub mod hardness;
pub mod junction;
pub mod lp;
pub mod oracle;
pub mod preserver;
pub mod rng;
pub mod rounding;

pub use error::{Error, Result};

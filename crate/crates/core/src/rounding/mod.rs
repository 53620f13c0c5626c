//! Randomized edge rounding, greedy hitting sets, height reduction and
//! tree rounding for group Steiner instances.

mod gkr;
mod height;
mod hitting;
mod round;
mod zelikovsky;

pub use gkr::{gkr_pass, gkr_round, monotonize, pass_count, tree_group_flow, GKR_MAX_ATTEMPTS};
pub use height::{height_reduce, project_tree, HeightOptions, ShallowTree};
pub use hitting::hitting_set;
pub use round::{randomized_round, retention_probability};
pub use zelikovsky::{zelikovsky_reduce, Arborescence, ReducedTree};

//! Minimum-density junction trees under per-pair distance bounds.

mod bucket;
mod layered;
mod lp;
mod pipeline;
mod prune;

pub use bucket::{bucket_and_scale, Bucketing};
pub use layered::{
    build_gr, connectivity_suffices, prune_relevant, routable_through, LabelCoverInstance, LabelPair,
    LayeredJunctionGraph, NodeKind,
};
pub use lp::{join_trees, solve_label_cover_lp, JoinedTree, LabelCoverSolution, PairSolution};
pub use pipeline::{junction_tree_density, satisfied_through, JunctionOptions, JunctionOutcome, PipelineTrace};
pub use prune::{median_prune, product_is_related, retains_half, PairMass, PrunedPair};

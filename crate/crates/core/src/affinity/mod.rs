//! Pairwise superpixel distances, affinities, the seeded adjacency graph and
//! shortest paths to the virtual seed node.

mod distance;
mod geodesic;
mod graph;

pub use distance::{
    affinity, color_distance, intervening_contour, line_max, sine_distance,
    sine_spatial_distance, AffinityMatrix, EdgeWeights, BORDER_BETA,
};
pub use geodesic::geodesic_to_virtual;
pub use graph::{build_graph, SaliencyGraph, SeedRole, SeedSet};

use crate::error::{Error, Result};
use crate::image_core::SuperpixelFeatures;
use crate::matrix::SquareMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedRole {
    Background,
    Foreground,
}

/// Superpixels attached to a virtual node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedSet {
    role: SeedRole,
    members: Vec<usize>,
}

impl SeedSet {
    /// Members are sorted and deduplicated. Empty sets are rejected.
    pub fn new(role: SeedRole, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if members.is_empty() {
            return Err(Error::NoSeeds);
        }
        Ok(Self { role, members })
    }

    pub fn role(&self) -> SeedRole {
        self.role
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Adjacency graph over superpixels plus zero-cost edges from every seed to
/// a single virtual node.
#[derive(Debug, Clone, PartialEq)]
pub struct SaliencyGraph {
    node_count: usize,
    edges: Vec<(usize, usize, f64)>,
    seeds: Vec<usize>,
}

impl SaliencyGraph {
    /// Build from an explicit edge list. Costs must be finite and non-negative.
    pub fn from_edges(
        node_count: usize,
        edges: Vec<(usize, usize, f64)>,
        seeds: &SeedSet,
    ) -> Result<Self> {
        if let Some(&s) = seeds.members().iter().find(|&&s| s >= node_count) {
            return Err(Error::SeedOutOfRange {
                index: s,
                count: node_count,
            });
        }
        for &(i, j, c) in &edges {
            if i >= node_count || j >= node_count || !(c >= 0.0) || !c.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "edges",
                    reason: format!("bad edge ({i}, {j}, {c})"),
                });
            }
        }
        Ok(Self {
            node_count,
            edges,
            seeds: seeds.members().to_vec(),
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Undirected superpixel edges `(i, j, cost)` with `i < j`.
    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    /// Seeds attached to the virtual node; each virtual edge costs 0.
    pub fn virtual_seed_edges(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.seeds.iter().map(|&s| (s, 0.0))
    }

    pub fn seeds(&self) -> &[usize] {
        &self.seeds
    }

    pub(crate) fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.node_count];
        for &(i, j, c) in &self.edges {
            adj[i].push((j, c));
            adj[j].push((i, c));
        }
        adj
    }
}

/// Connect each superpixel to its spatial neighbours only, with traversal
/// cost `1 - A(i, j)`, and attach the seeds to the virtual node.
pub fn build_graph(
    feats: &[SuperpixelFeatures],
    a: &SquareMatrix,
    seeds: &SeedSet,
) -> Result<SaliencyGraph> {
    let mut edges = Vec::new();
    for (i, f) in feats.iter().enumerate() {
        for &j in f.neighbors.iter().filter(|&&j| j > i) {
            edges.push((i, j, (1.0 - a.get(i, j)).clamp(0.0, 1.0)));
        }
    }
    SaliencyGraph::from_edges(feats.len(), edges, seeds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image_core::BorderSides;

    fn feats(neighbors: Vec<Vec<usize>>) -> Vec<SuperpixelFeatures> {
        neighbors
            .into_iter()
            .map(|nb| SuperpixelFeatures {
                mean_color: [0.0; 3],
                centroid: [0.0; 2],
                area_fraction: 0.0,
                pixel_count: 1,
                border: BorderSides::default(),
                neighbors: nb,
            })
            .collect()
    }

    #[test]
    fn two_node_graph() {
        let f = feats(vec![vec![1], vec![0]]);
        let a = SquareMatrix::from_vec(2, vec![1.0, 0.6, 0.6, 1.0]);
        let seeds = SeedSet::new(SeedRole::Background, [1]).unwrap();
        let g = build_graph(&f, &a, &seeds).unwrap();
        assert_eq!(g.edges().len(), 1);
        let (i, j, c) = g.edges()[0];
        assert_eq!((i, j), (0, 1));
        assert!((c - 0.4).abs() < 1e-12);
        assert_eq!(g.virtual_seed_edges().collect::<Vec<_>>(), vec![(1, 0.0)]);
    }

    #[test]
    fn non_adjacent_pairs_get_no_edge() {
        let f = feats(vec![vec![1], vec![0, 2], vec![1]]);
        let a = SquareMatrix::from_vec(3, vec![1.0; 9]);
        let seeds = SeedSet::new(SeedRole::Background, [0]).unwrap();
        let g = build_graph(&f, &a, &seeds).unwrap();
        assert!(g.edges().iter().all(|&(i, j, _)| !(i == 0 && j == 2)));
        assert_eq!(g.edges().len(), 2);
    }

    #[test]
    fn empty_seed_set_is_rejected() {
        assert!(matches!(
            SeedSet::new(SeedRole::Foreground, std::iter::empty()),
            Err(Error::NoSeeds)
        ));
    }

    #[test]
    fn out_of_range_seed_is_rejected() {
        let seeds = SeedSet::new(SeedRole::Foreground, [5]).unwrap();
        assert!(SaliencyGraph::from_edges(3, vec![], &seeds).is_err());
    }
}

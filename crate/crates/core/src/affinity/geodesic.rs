use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::SaliencyGraph;

#[derive(Debug, Clone, Copy, PartialEq)]
struct State {
    cost: f64,
    node: usize,
}

impl Eq for State {}

impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Minimal accumulated edge cost from every node to the virtual node.
///
/// Seeds start at 0. Nodes in components without a seed receive the largest
/// finite cost plus the largest single edge cost.
pub fn geodesic_to_virtual(graph: &SaliencyGraph) -> Vec<f64> {
    let n = graph.node_count();
    let adj = graph.adjacency();
    let mut dist = vec![f64::INFINITY; n];
    let mut heap = BinaryHeap::new();
    for (s, c) in graph.virtual_seed_edges() {
        dist[s] = c;
        heap.push(State { cost: c, node: s });
    }
    while let Some(State { cost, node }) = heap.pop() {
        if cost > dist[node] {
            continue;
        }
        for &(next, w) in &adj[node] {
            let nc = cost + w;
            if nc < dist[next] {
                dist[next] = nc;
                heap.push(State {
                    cost: nc,
                    node: next,
                });
            }
        }
    }
    if dist.iter().any(|d| d.is_infinite()) {
        let max_finite = dist
            .iter()
            .copied()
            .filter(|d| d.is_finite())
            .fold(0.0, f64::max);
        let max_edge = graph.edges().iter().map(|e| e.2).fold(0.0, f64::max);
        for d in dist.iter_mut().filter(|d| d.is_infinite()) {
            *d = max_finite + max_edge;
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affinity::{SeedRole, SeedSet};

    #[test]
    fn chain_with_shortcut() {
        let seeds = SeedSet::new(SeedRole::Background, [2]).unwrap();
        let g =
            SaliencyGraph::from_edges(3, vec![(0, 1, 0.2), (1, 2, 0.3), (0, 2, 0.9)], &seeds)
                .unwrap();
        let d = geodesic_to_virtual(&g);
        assert_eq!(d[2], 0.0);
        assert!((d[1] - 0.3).abs() < 1e-15);
        assert!((d[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn everything_seeded_is_zero() {
        let seeds = SeedSet::new(SeedRole::Background, 0..4).unwrap();
        let g = SaliencyGraph::from_edges(4, vec![(0, 1, 0.5), (2, 3, 0.7)], &seeds).unwrap();
        assert!(geodesic_to_virtual(&g).iter().all(|&d| d == 0.0));
    }

    #[test]
    fn disconnected_component_fallback() {
        let seeds = SeedSet::new(SeedRole::Background, [0]).unwrap();
        let g = SaliencyGraph::from_edges(4, vec![(0, 1, 0.25), (2, 3, 0.5)], &seeds).unwrap();
        let d = geodesic_to_virtual(&g);
        assert_eq!(d, vec![0.0, 0.25, 0.75, 0.75]);
    }
}

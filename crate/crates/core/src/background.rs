//! Divergence-driven background seed selection and the background-based
//! saliency map.

use crate::affinity::{geodesic_to_virtual, SaliencyGraph, SeedRole, SeedSet};
use crate::error::Result;
use crate::image_core::{BorderSides, SuperpixelFeatures};
use crate::matrix::{minmax_normalize, SquareMatrix};

/// Normalized image center.
const CENTER: [f64; 2] = [0.5, 0.5];

#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceScores {
    /// Affinity-weighted scatter around each node's weighted mean position.
    pub div_c: Vec<f64>,
    /// Affinity-weighted scatter around the image center.
    pub div_m: Vec<f64>,
    pub div: Vec<f64>,
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// High divergence means similar-looking mass is spread widely, which is
/// typical of background.
pub fn divergence(a: &SquareMatrix, feats: &[SuperpixelFeatures]) -> DivergenceScores {
    let n = feats.len();
    let raw: Vec<(f64, f64)> = crate::par::map_range(n, |i| {
        let row = a.row(i);
        let total: f64 = row.iter().sum();
        let mut rho = [0.0, 0.0];
        for (aij, f) in row.iter().zip(feats) {
            rho[0] += aij * f.centroid[0];
            rho[1] += aij * f.centroid[1];
        }
        rho = [rho[0] / total, rho[1] / total];
        let (mut sc, mut sm) = (0.0, 0.0);
        for (aij, f) in row.iter().zip(feats) {
            sc += aij * dist(f.centroid, rho);
            sm += aij * dist(f.centroid, CENTER);
        }
        (sc / total, sm / total)
    });
    let div_c = minmax_normalize(&raw.iter().map(|r| r.0).collect::<Vec<_>>());
    let div_m = minmax_normalize(&raw.iter().map(|r| r.1).collect::<Vec<_>>());
    let sum: Vec<f64> = div_c.iter().zip(&div_m).map(|(c, m)| c + m).collect();
    DivergenceScores {
        div: minmax_normalize(&sum),
        div_c,
        div_m,
    }
}

/// Per-side removal thresholds. The bottom side gets the largest one since
/// objects touch it most often.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BorderThresholds {
    pub down: f64,
    pub top: f64,
    pub left: f64,
    pub right: f64,
}

impl BorderThresholds {
    pub fn from_down(down: f64) -> Self {
        let top = down / 3.0;
        Self {
            down,
            top,
            left: 2.0 * top,
            right: 2.0 * top,
        }
    }

    /// Down threshold is the mean divergence over all superpixels.
    pub fn from_divergence(div: &[f64]) -> Self {
        let mean = if div.is_empty() {
            0.0
        } else {
            div.iter().sum::<f64>() / div.len() as f64
        };
        Self::from_down(mean)
    }

    /// Largest threshold among the sides a superpixel touches.
    pub fn for_sides(&self, sides: BorderSides) -> Option<f64> {
        [
            (BorderSides::DOWN, self.down),
            (BorderSides::TOP, self.top),
            (BorderSides::LEFT, self.left),
            (BorderSides::RIGHT, self.right),
        ]
        .iter()
        .filter(|(s, _)| sides.contains(*s))
        .map(|&(_, t)| t)
        .reduce(f64::max)
    }
}

/// Every superpixel touching the image border.
pub fn all_border_seeds(feats: &[SuperpixelFeatures]) -> Result<SeedSet> {
    SeedSet::new(
        SeedRole::Background,
        feats
            .iter()
            .enumerate()
            .filter(|(_, f)| !f.border.is_empty())
            .map(|(i, _)| i),
    )
}

pub fn select_background_seeds_with(
    div: &[f64],
    feats: &[SuperpixelFeatures],
    thresholds: &BorderThresholds,
) -> Result<SeedSet> {
    let kept: Vec<usize> = feats
        .iter()
        .enumerate()
        .filter_map(|(i, f)| {
            let t = thresholds.for_sides(f.border)?;
            (div[i] >= t).then_some(i)
        })
        .collect();
    if kept.is_empty() {
        return all_border_seeds(feats);
    }
    SeedSet::new(SeedRole::Background, kept)
}

/// Border superpixels minus those whose divergence falls below their side's
/// threshold. Falls back to the full border set if nothing survives.
pub fn select_background_seeds(div: &[f64], feats: &[SuperpixelFeatures]) -> Result<SeedSet> {
    select_background_seeds_with(div, feats, &BorderThresholds::from_divergence(div))
}

/// Normalized geodesic cost to the virtual background node; high values are
/// far from the background.
pub fn background_saliency(graph: &SaliencyGraph) -> Vec<f64> {
    minmax_normalize(&geodesic_to_virtual(graph))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn feat(centroid: [f64; 2], sides: &[BorderSides]) -> SuperpixelFeatures {
        let mut border = BorderSides::default();
        for &s in sides {
            border.insert(s);
        }
        SuperpixelFeatures {
            mean_color: [0.0; 3],
            centroid,
            area_fraction: 0.0,
            pixel_count: 1,
            border,
            neighbors: vec![],
        }
    }

    #[test]
    fn threshold_ratios() {
        let t = BorderThresholds::from_down(0.6);
        assert!((t.top - 0.2).abs() < 1e-15);
        assert!((t.left - 0.4).abs() < 1e-15);
        assert_eq!(t.left, t.right);
    }

    #[test]
    fn uniform_affinity_gives_zero_divergence() {
        let f = vec![
            feat([0.1, 0.2], &[]),
            feat([0.9, 0.3], &[]),
            feat([0.4, 0.8], &[]),
        ];
        let a = SquareMatrix::from_vec(3, vec![1.0; 9]);
        let d = divergence(&a, &f);
        assert!(d.div_c.iter().all(|&v| v == 0.0));
        assert!(d.div.iter().all(|&v| v.is_finite()));
    }

    #[test]
    fn compact_blob_has_lower_divergence() {
        // 0: blob at the center; 1, 2: gray regions at opposite corners that
        // look alike and not like the blob.
        let f = vec![
            feat([0.5, 0.5], &[]),
            feat([0.1, 0.1], &[BorderSides::TOP]),
            feat([0.9, 0.9], &[BorderSides::DOWN]),
        ];
        let a = SquareMatrix::from_vec(3, vec![1.0, 0.01, 0.01, 0.01, 1.0, 0.9, 0.01, 0.9, 1.0]);
        let d = divergence(&a, &f);
        assert!(d.div[0] < d.div[1] && d.div[0] < d.div[2]);
        assert_eq!(d.div[0], 0.0);
    }

    #[test]
    fn uniform_divergence_keeps_whole_border() {
        let f = vec![
            feat([0.0, 0.0], &[BorderSides::TOP, BorderSides::LEFT]),
            feat([0.5, 0.5], &[]),
            feat([1.0, 1.0], &[BorderSides::DOWN]),
        ];
        let seeds = select_background_seeds(&[0.0, 0.0, 0.0], &f).unwrap();
        assert_eq!(seeds.members(), &[0, 2]);
    }

    #[test]
    fn low_divergence_bottom_node_is_removed() {
        let f = vec![
            feat([0.0, 0.0], &[BorderSides::TOP]),
            feat([0.5, 1.0], &[BorderSides::DOWN]),
            feat([1.0, 0.5], &[BorderSides::RIGHT]),
            feat([0.5, 0.5], &[]),
        ];
        // mean = 0.5 -> down 0.5, top 1/6, right 1/3
        let div = [0.9, 0.3, 0.6, 0.2];
        let seeds = select_background_seeds(&div, &f).unwrap();
        assert_eq!(seeds.members(), &[0, 2]);
    }

    #[test]
    fn multi_side_uses_the_strictest_threshold() {
        let t = BorderThresholds::from_down(0.9);
        let mut s = BorderSides::default();
        s.insert(BorderSides::TOP);
        s.insert(BorderSides::DOWN);
        assert_eq!(t.for_sides(s), Some(0.9));
        assert_eq!(t.for_sides(BorderSides::default()), None);
    }

    #[test]
    fn empty_result_falls_back_to_border() {
        let f = vec![
            feat([0.0, 0.0], &[BorderSides::TOP]),
            feat([0.5, 0.5], &[]),
        ];
        let seeds =
            select_background_seeds_with(&[0.0, 1.0], &f, &BorderThresholds::from_down(0.9))
                .unwrap();
        assert_eq!(seeds.members(), &[0]);
    }

    #[test]
    fn chain_background_saliency() {
        let seeds = SeedSet::new(SeedRole::Background, [2]).unwrap();
        let g =
            SaliencyGraph::from_edges(3, vec![(0, 1, 0.2), (1, 2, 0.3), (0, 2, 0.9)], &seeds)
                .unwrap();
        let s = background_saliency(&g);
        assert!((s[0] - 1.0).abs() < 1e-12);
        assert!((s[1] - 0.6).abs() < 1e-12);
        assert_eq!(s[2], 0.0);
    }
}

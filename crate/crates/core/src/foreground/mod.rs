//! Visual rarity, compact foreground regions by parametric min-cut, and the
//! foreground-based saliency map.

mod maxflow;

pub use maxflow::{FlowNetwork, PottsEnergy};

use crate::affinity::{geodesic_to_virtual, SaliencyGraph, SeedRole, SeedSet};
use crate::error::{Error, Result};
use crate::image_core::SuperpixelFeatures;
use crate::matrix::{minmax_normalize, SquareMatrix};
use crate::refine::otsu_threshold;

/// Lower clamp on the background-based saliency before taking `-ln`.
pub const SALIENCY_FLOOR: f64 = 1e-6;

/// Commonness score: affinity mass to spatial neighbours plus affinity mass
/// to similarly colored superpixels (`dc < phi`). Normalized to [0, 1];
/// rare superpixels score low.
pub fn rarity(
    a: &SquareMatrix,
    dc: &SquareMatrix,
    feats: &[SuperpixelFeatures],
    phi: f64,
) -> Vec<f64> {
    let raw = crate::par::map_range(feats.len(), |i| {
        let spatial: f64 = feats[i].neighbors.iter().map(|&j| a.get(i, j)).sum();
        let color: f64 = (0..feats.len())
            .filter(|&j| j != i && dc.get(i, j) < phi)
            .map(|j| a.get(i, j))
            .sum();
        spatial + color
    });
    minmax_normalize(&raw)
}

/// Descending grid of `eta` values, spaced logarithmically in their distance
/// from `max + 1` so the grid is finest where regions first appear.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaSweep {
    pub max: f64,
    pub min: f64,
    pub steps: usize,
}

impl Default for EtaSweep {
    fn default() -> Self {
        Self {
            max: 4.0,
            min: -16.0,
            steps: 32,
        }
    }
}

impl EtaSweep {
    pub fn values(&self) -> Vec<f64> {
        if self.steps <= 1 {
            return vec![self.max];
        }
        let span = self.max - self.min + 1.0;
        (0..self.steps)
            .map(|k| {
                if k + 1 == self.steps {
                    self.min
                } else {
                    self.max + 1.0 - span.powf(k as f64 / (self.steps - 1) as f64)
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForegroundRegion {
    members: Vec<usize>,
    /// `None` when the sweep produced no usable region and the Otsu
    /// fallback was taken.
    eta_used: Option<f64>,
}

impl ForegroundRegion {
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn eta_used(&self) -> Option<f64> {
        self.eta_used
    }

    pub fn is_fallback(&self) -> bool {
        self.eta_used.is_none()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn to_seeds(&self) -> Result<SeedSet> {
        SeedSet::new(SeedRole::Foreground, self.members.iter().copied())
    }
}

/// The energy minimized for a single `eta`.
pub fn foreground_energy(
    con_bp: &[f64],
    rare: &[f64],
    a: &SquareMatrix,
    feats: &[SuperpixelFeatures],
    eta: f64,
) -> PottsEnergy {
    let unary = con_bp
        .iter()
        .zip(rare)
        .zip(feats)
        .map(|((&s, &r), f)| -s.clamp(SALIENCY_FLOOR, 1.0).ln() + eta * f.area_fraction + r)
        .collect();
    let mut pairwise = Vec::new();
    for (i, f) in feats.iter().enumerate() {
        for &j in f.neighbors.iter().filter(|&&j| j > i) {
            pairwise.push((i, j, a.get(i, j)));
        }
    }
    PottsEnergy { unary, pairwise }
}

/// Minimal minimizers for every `eta` of the sweep, in sweep order.
pub fn sweep_minimizers(
    con_bp: &[f64],
    rare: &[f64],
    a: &SquareMatrix,
    feats: &[SuperpixelFeatures],
    sweep: &EtaSweep,
) -> Vec<(f64, Vec<bool>)> {
    let etas = sweep.values();
    crate::par::map_slice(&etas, |&eta| {
        (eta, foreground_energy(con_bp, rare, a, feats, eta).minimize())
    })
}

/// Region at the largest `eta` whose minimizer is non-empty and covers at
/// most `max_area` of the image; otherwise `con_bp` thresholded at Otsu.
pub fn extract_foreground(
    con_bp: &[f64],
    rare: &[f64],
    a: &SquareMatrix,
    feats: &[SuperpixelFeatures],
    sweep: &EtaSweep,
    max_area: f64,
) -> Result<ForegroundRegion> {
    if con_bp.len() != feats.len() || rare.len() != feats.len() {
        return Err(Error::InvalidParameter {
            name: "con_bp",
            reason: "score length differs from superpixel count".into(),
        });
    }
    let mut results = sweep_minimizers(con_bp, rare, a, feats, sweep);
    results.sort_by(|x, y| y.0.total_cmp(&x.0));
    for (eta, labels) in &results {
        let members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i]).collect();
        if members.is_empty() {
            continue;
        }
        let area: f64 = members.iter().map(|&i| feats[i].area_fraction).sum();
        if area <= max_area {
            return Ok(ForegroundRegion {
                members,
                eta_used: Some(*eta),
            });
        }
        break;
    }
    Ok(otsu_region(con_bp))
}

/// `con_bp >= otsu(con_bp)`, or the single most salient node if that is empty.
pub fn otsu_region(con_bp: &[f64]) -> ForegroundRegion {
    let t = otsu_threshold(con_bp);
    let mut members: Vec<usize> = (0..con_bp.len()).filter(|&i| con_bp[i] >= t).collect();
    if members.is_empty() {
        let best = (0..con_bp.len())
            .max_by(|&i, &j| con_bp[i].total_cmp(&con_bp[j]).then(j.cmp(&i)))
            .unwrap_or(0);
        members.push(best);
    }
    ForegroundRegion {
        members,
        eta_used: None,
    }
}

/// `1 - normalized geodesic cost` to the virtual foreground node; seeds get 1.
pub fn foreground_saliency(graph: &SaliencyGraph) -> Vec<f64> {
    minmax_normalize(&geodesic_to_virtual(graph))
        .into_iter()
        .map(|v| 1.0 - v)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image_core::BorderSides;

    fn feat(neighbors: Vec<usize>, area: f64) -> SuperpixelFeatures {
        SuperpixelFeatures {
            mean_color: [0.0; 3],
            centroid: [0.0; 2],
            area_fraction: area,
            pixel_count: 1,
            border: BorderSides::default(),
            neighbors,
        }
    }

    #[test]
    fn uniform_affinity_gives_zero_rarity() {
        let f = vec![feat(vec![1], 0.5), feat(vec![0], 0.5)];
        let a = SquareMatrix::from_vec(2, vec![1.0; 4]);
        let dc = SquareMatrix::zeros(2);
        assert_eq!(rarity(&a, &dc, &f, 0.15), vec![0.0, 0.0]);
    }

    #[test]
    fn rarity_by_hand() {
        // 0 is odd-colored with neighbours 1 and 2 (A = 0.1);
        // 1, 2, 3 share a color (dc = 0.05) with A = 0.8 among them.
        let f = vec![
            feat(vec![1, 2], 0.25),
            feat(vec![0, 3], 0.25),
            feat(vec![0, 3], 0.25),
            feat(vec![1, 2], 0.25),
        ];
        let mut a = SquareMatrix::from_vec(4, vec![0.8; 16]);
        let mut dc = SquareMatrix::from_vec(4, vec![0.05; 16]);
        for i in 0..4 {
            a.set(i, i, 1.0);
            dc.set(i, i, 0.0);
            if i != 0 {
                a.set(0, i, 0.1);
                a.set(i, 0, 0.1);
                dc.set(0, i, 0.9);
                dc.set(i, 0, 0.9);
            }
        }
        // raw: [0.2, 0.1+0.8+1.6, 0.1+0.8+1.6, 1.6+1.6] = [0.2, 2.5, 2.5, 3.2]
        let r = rarity(&a, &dc, &f, 0.15);
        assert_eq!(r[0], 0.0);
        assert!((r[1] - 2.3 / 3.0).abs() < 1e-12);
        assert_eq!(r[3], 1.0);
    }

    #[test]
    fn sweep_grid_endpoints_and_order() {
        let v = EtaSweep::default().values();
        assert_eq!(v.len(), 32);
        assert_eq!(v[0], 4.0);
        assert_eq!(v[31], -16.0);
        assert!(v.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn positive_costs_fall_back_to_otsu() {
        let f = vec![feat(vec![1], 0.5), feat(vec![0], 0.5)];
        let a = SquareMatrix::from_vec(2, vec![1.0, 0.5, 0.5, 1.0]);
        let sweep = EtaSweep {
            max: 4.0,
            min: 1.0,
            steps: 4,
        };
        // rare = 1 everywhere keeps every unary positive for eta >= 1
        let region =
            extract_foreground(&[0.2, 0.9], &[1.0, 1.0], &a, &f, &sweep, 0.6).unwrap();
        assert!(region.is_fallback());
        assert_eq!(region.members(), &[1]);
    }

    #[test]
    fn chain_foreground_saliency() {
        let seeds = SeedSet::new(SeedRole::Foreground, [2]).unwrap();
        let g =
            SaliencyGraph::from_edges(3, vec![(0, 1, 0.2), (1, 2, 0.3), (0, 2, 0.9)], &seeds)
                .unwrap();
        let s = foreground_saliency(&g);
        assert!(s[0].abs() < 1e-12);
        assert!((s[1] - 0.4).abs() < 1e-12);
        assert_eq!(s[2], 1.0);
    }
}

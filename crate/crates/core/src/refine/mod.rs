//! Map integration, node gating, mid-level clustering and extended manifold
//! ranking.

mod cluster;
mod emr;
mod otsu;

pub use cluster::{midlevel_cluster, Clustering, MidlevelAffinity};
pub use emr::{emr_solve, emr_solve_raw, Laplacian, RESIDUAL_BOUND};
pub use otsu::{
    histogram, otsu_bin, otsu_threshold, quantize, two_level_otsu, two_level_otsu_bins, BINS,
};

use crate::error::{Error, Result};
use crate::image_core::{GrayImage, Labels};
use crate::matrix::minmax_normalize;

/// `con_bp * (1 - exp(-kappa * con_fp))` before normalization.
pub fn integrate_raw(con_bp: &[f64], con_fp: &[f64], kappa: f64) -> Vec<f64> {
    con_bp
        .iter()
        .zip(con_fp)
        .map(|(&b, &f)| b * (1.0 - (-kappa * f).exp()))
        .collect()
}

pub fn integrate(con_bp: &[f64], con_fp: &[f64], kappa: f64) -> Vec<f64> {
    minmax_normalize(&integrate_raw(con_bp, con_fp, kappa))
}

/// Active (`true`) and suppressed nodes for the ranking diffusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeGate {
    pub delta: Vec<bool>,
}

impl NodeGate {
    pub fn all_active(n: usize) -> Self {
        Self {
            delta: vec![true; n],
        }
    }

    pub fn active_count(&self) -> usize {
        self.delta.iter().filter(|&&d| d).count()
    }
}

fn above_high_threshold(values: &[f64]) -> Vec<bool> {
    let (_, high) = two_level_otsu(values);
    values.iter().map(|&v| v >= high).collect()
}

/// Nodes at or above the upper two-level Otsu threshold of the integrated
/// map, united with the same selection on the objectness scores. If the
/// union is empty every node stays active.
pub fn gate_nodes(s_com: &[f64], objectness: Option<&[f64]>) -> Result<NodeGate> {
    let mut delta = above_high_threshold(s_com);
    if let Some(obj) = objectness {
        if obj.len() != s_com.len() {
            return Err(Error::ObjectnessMismatch);
        }
        for (d, o) in delta.iter_mut().zip(above_high_threshold(obj)) {
            *d |= o;
        }
    }
    if !delta.iter().any(|&d| d) {
        delta.iter_mut().for_each(|d| *d = true);
    }
    Ok(NodeGate { delta })
}

/// Paint each superpixel with `round(255 * score)`.
pub fn render_saliency(scores: &[f64], labels: &Labels) -> GrayImage {
    let levels: Vec<u8> = scores
        .iter()
        .map(|&v| (v.clamp(0.0, 1.0) * 255.0).round() as u8)
        .collect();
    let data = labels.data().iter().map(|&l| levels[l as usize]).collect();
    GrayImage::new(labels.width(), labels.height(), data).expect("label field dims")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integration_values() {
        assert_eq!(integrate_raw(&[0.0], &[0.7], 4.0), vec![0.0]);
        assert_eq!(integrate_raw(&[0.7], &[0.0], 4.0), vec![0.0]);
        let v = integrate_raw(&[1.0], &[1.0], 4.0)[0];
        assert!((v - (1.0 - (-4.0f64).exp())).abs() < 1e-12);
        assert!((v - 0.981684).abs() < 1e-6);
    }

    #[test]
    fn gate_on_bimodal_map() {
        // The high mode is tight, so the extra split lands in the low mode.
        let s = [0.0, 0.1, 0.2, 0.95, 0.95, 0.95, 0.3];
        let g = gate_nodes(&s, None).unwrap();
        assert_eq!(g.delta, vec![false, false, false, true, true, true, false]);
    }

    #[test]
    fn full_objectness_activates_everything() {
        let s = [0.05, 0.1, 0.0, 0.95, 1.0];
        let g = gate_nodes(&s, Some(&[1.0; 5])).unwrap();
        assert_eq!(g.active_count(), 5);
    }

    #[test]
    fn objectness_length_is_checked() {
        assert!(matches!(
            gate_nodes(&[0.1, 0.2], Some(&[1.0])),
            Err(Error::ObjectnessMismatch)
        ));
    }

    #[test]
    fn render_quantizes_per_label() {
        let labels = Labels::new(3, 1, vec![0, 1, 1]).unwrap();
        let img = render_saliency(&[1.0, 0.5], &labels);
        assert_eq!(img.data(), &[255, 128, 128]);
        let ones = render_saliency(&[1.0, 1.0], &labels);
        assert!(ones.data().iter().all(|&v| v == 255));
    }
}

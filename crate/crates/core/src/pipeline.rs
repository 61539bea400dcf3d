//! The full per-image pipeline: superpixels, affinities, background map,
//! foreground map, integration and ranking refinement.

use crate::affinity::{
    affinity, build_graph, color_distance, geodesic_to_virtual, intervening_contour,
    sine_spatial_distance, AffinityMatrix, SeedSet,
};
use crate::background::{all_border_seeds, divergence, select_background_seeds, DivergenceScores};
use crate::config::{PipelineConfig, SeedMode};
use crate::error::{Error, Result};
use crate::foreground::{extract_foreground, rarity, ForegroundRegion};
use crate::image_core::{
    compute_edge_map, rgb_to_lab, slic_segment, EdgeMap, GrayImage, RgbImage, SlicParams,
    SuperpixelMap,
};
use crate::matrix::minmax_normalize;
use crate::refine::{
    emr_solve, gate_nodes, integrate, midlevel_cluster, render_saliency, Clustering,
    MidlevelAffinity, NodeGate,
};

/// Optional per-image side inputs.
#[derive(Debug, Clone, Copy, Default)]
pub struct SideInputs<'a> {
    /// Replaces the built-in Sobel edge map.
    pub edge_map: Option<&'a EdgeMap>,
    /// Per-pixel objectness, `value / 255`.
    pub objectness: Option<&'a GrayImage>,
}

/// Every intermediate product of one pipeline run.
#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub superpixels: SuperpixelMap,
    pub affinity: AffinityMatrix,
    pub divergence: DivergenceScores,
    pub background_seeds: SeedSet,
    pub background_cost: Vec<f64>,
    pub con_bp: Vec<f64>,
    pub rare: Vec<f64>,
    pub foreground: ForegroundRegion,
    pub foreground_cost: Vec<f64>,
    pub con_fp: Vec<f64>,
    pub s_com: Vec<f64>,
    pub gate: NodeGate,
    pub clusters: Clustering,
    pub final_scores: Vec<f64>,
    pub saliency: GrayImage,
}

pub fn run_pipeline(
    image: &RgbImage,
    side: SideInputs<'_>,
    config: &PipelineConfig,
) -> Result<PipelineOutput> {
    config.validate()?;
    let (w, h) = (image.width(), image.height());
    let lab = rgb_to_lab(image);
    let edge_owned;
    let edge = match side.edge_map {
        Some(e) => {
            if (e.width(), e.height()) != (w, h) {
                return Err(Error::DimensionMismatch {
                    left_w: e.width(),
                    left_h: e.height(),
                    right_w: w,
                    right_h: h,
                });
            }
            e
        }
        None => {
            edge_owned = compute_edge_map(&lab);
            &edge_owned
        }
    };
    let superpixels = slic_segment(
        &lab,
        &SlicParams {
            n_target: config.n_superpixels,
            compactness: config.slic_compactness,
            iterations: config.slic_iterations,
        },
    )?;
    let feats = superpixels.features();

    let dc = color_distance(feats);
    let ds = sine_spatial_distance(feats);
    let dedge = intervening_contour(feats, edge, &dc, &ds, config.beta);
    let aff = affinity(dc, ds, dedge, config.sigma_w, config.edge_weights);

    let div = divergence(&aff.a, feats);
    let background_seeds = match config.seeds {
        SeedMode::Filtered => select_background_seeds(&div.div, feats)?,
        SeedMode::AllBorder => all_border_seeds(feats)?,
    };
    let bg_graph = build_graph(feats, &aff.a, &background_seeds)?;
    let background_cost = geodesic_to_virtual(&bg_graph);
    let con_bp = minmax_normalize(&background_cost);

    let rare = rarity(&aff.a, &aff.dc, feats, config.phi);
    let foreground = extract_foreground(
        &con_bp,
        &rare,
        &aff.a,
        feats,
        &config.eta_sweep,
        config.fg_max_area,
    )?;
    let fg_graph = build_graph(feats, &aff.a, &foreground.to_seeds()?)?;
    let foreground_cost = geodesic_to_virtual(&fg_graph);
    let con_fp: Vec<f64> = minmax_normalize(&foreground_cost)
        .into_iter()
        .map(|v| 1.0 - v)
        .collect();

    let s_com = integrate(&con_bp, &con_fp, config.kappa);

    let n = feats.len();
    let objectness = match side.objectness {
        Some(o) => {
            o.same_dims(w, h)?;
            let data = o.data();
            Some(superpixels.average_pixels(|p| f64::from(data[p]) / 255.0))
        }
        None => None,
    };
    let gate = if config.refine.uses_gate() {
        gate_nodes(&s_com, objectness.as_deref())?
    } else {
        NodeGate::all_active(n)
    };
    let clusters = if config.refine.uses_clusters() {
        midlevel_cluster(feats, config.tau_c)
    } else {
        Clustering::singletons(n)
    };
    let final_scores = if config.refine == crate::config::RefineMode::None {
        s_com.clone()
    } else {
        let p = MidlevelAffinity::new(feats, &aff.a, clusters.clone());
        emr_solve(&p, &gate, &s_com, config.mu, config.laplacian)?
    };
    let saliency = render_saliency(&final_scores, superpixels.labels());

    Ok(PipelineOutput {
        superpixels,
        affinity: aff,
        divergence: div,
        background_seeds,
        background_cost,
        con_bp,
        rare,
        foreground,
        foreground_cost,
        con_fp,
        s_com,
        gate,
        clusters,
        final_scores,
        saliency,
    })
}

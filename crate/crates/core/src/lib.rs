//! Graph-based salient object detection.
//!
//! An image is over-segmented into SLIC superpixels; affinities combine
//! color, sine spatial distance and intervening contours. Background seeds
//! are border superpixels filtered by affinity-weighted divergence, and
//! shortest paths to a virtual background node give a first saliency map.
//! A compact foreground region is extracted by parametric min-cut with a
//! rarity term, shortest paths to a virtual foreground node give a second
//! map, and the two are integrated and refined by manifold ranking with
//! suppressed nodes and mid-level clusters.

pub mod affinity;
pub mod background;
pub mod batch;
pub mod config;
pub mod error;
pub mod evaluation;
pub mod foreground;
pub mod image_core;
pub mod io;
pub mod matrix;
pub mod par;
pub mod pipeline;
pub mod refine;
pub mod synth;

pub use config::PipelineConfig;
pub use error::{Error, Result};
pub use pipeline::{run_pipeline, PipelineOutput, SideInputs};

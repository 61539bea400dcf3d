use std::f64::consts::PI;

use crate::image_core::{EdgeMap, SuperpixelFeatures};
use crate::matrix::SquareMatrix;

/// Color/spatial mix used instead of the line maximum between two border
/// superpixels.
pub const BORDER_BETA: f64 = 0.5;

/// Which distance components enter the affinity exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EdgeWeights {
    Color,
    ColorSpatial,
    #[default]
    Full,
}

impl std::str::FromStr for EdgeWeights {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "color" => Ok(Self::Color),
            "colorSpatial" => Ok(Self::ColorSpatial),
            "full" => Ok(Self::Full),
            other => Err(format!("unknown edgeWeights `{other}`")),
        }
    }
}

impl std::fmt::Display for EdgeWeights {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Color => "color",
            Self::ColorSpatial => "colorSpatial",
            Self::Full => "full",
        })
    }
}

/// Affinities and the normalized component distances they were built from.
#[derive(Debug, Clone, PartialEq)]
pub struct AffinityMatrix {
    pub a: SquareMatrix,
    pub dc: SquareMatrix,
    pub ds: SquareMatrix,
    pub dedge: SquareMatrix,
}

impl AffinityMatrix {
    pub fn n(&self) -> usize {
        self.a.n()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a.get(i, j)
    }
}

fn lab_distance(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// Euclidean Lab distance between mean colors, min-max normalized over all
/// entries (the zero diagonal included).
pub fn color_distance(feats: &[SuperpixelFeatures]) -> SquareMatrix {
    SquareMatrix::symmetric(feats.len(), |i, j| {
        lab_distance(feats[i].mean_color, feats[j].mean_color)
    })
    .minmax_normalized()
}

/// Sine distance between two normalized positions, scaled into [0, 1].
pub fn sine_distance(a: [f64; 2], b: [f64; 2]) -> f64 {
    let sx = (PI * (a[0] - b[0]).abs()).sin();
    let sy = (PI * (a[1] - b[1]).abs()).sin();
    ((sx * sx + sy * sy).sqrt() / std::f64::consts::SQRT_2).clamp(0.0, 1.0)
}

pub fn sine_spatial_distance(feats: &[SuperpixelFeatures]) -> SquareMatrix {
    SquareMatrix::symmetric(feats.len(), |i, j| {
        if i == j {
            0.0
        } else {
            sine_distance(feats[i].centroid, feats[j].centroid)
        }
    })
}

/// Maximum of the edge map along the Bresenham line from `p0` to `p1`,
/// endpoints included.
pub fn line_max(edge: &EdgeMap, p0: (usize, usize), p1: (usize, usize)) -> f64 {
    let (mut x, mut y) = (p0.0 as i64, p0.1 as i64);
    let (x1, y1) = (p1.0 as i64, p1.1 as i64);
    let dx = (x1 - x).abs();
    let dy = -(y1 - y).abs();
    let sx = if x < x1 { 1 } else { -1 };
    let sy = if y < y1 { 1 } else { -1 };
    let mut err = dx + dy;
    let mut best = 0.0f64;
    loop {
        best = best.max(edge.get(x as usize, y as usize));
        if x == x1 && y == y1 {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x += sx;
        }
        if e2 <= dx {
            err += dx;
            y += sy;
        }
    }
    best
}

/// Intervening-contour distance. Pairs of border superpixels use
/// `beta * dc + (1 - beta) * ds` instead of the line maximum.
pub fn intervening_contour(
    feats: &[SuperpixelFeatures],
    edge: &EdgeMap,
    dc: &SquareMatrix,
    ds: &SquareMatrix,
    beta: f64,
) -> SquareMatrix {
    let (w, h) = (edge.width(), edge.height());
    let to_px = |c: [f64; 2]| {
        (
            ((c[0] * (w - 1) as f64).round() as usize).min(w - 1),
            ((c[1] * (h - 1) as f64).round() as usize).min(h - 1),
        )
    };
    let px: Vec<_> = feats.iter().map(|f| to_px(f.centroid)).collect();
    SquareMatrix::symmetric(feats.len(), |i, j| {
        if i == j {
            0.0
        } else if !feats[i].border.is_empty() && !feats[j].border.is_empty() {
            beta * dc.get(i, j) + (1.0 - beta) * ds.get(i, j)
        } else {
            line_max(edge, px[i], px[j])
        }
    })
}

/// `A(i, j) = exp(-(sum of selected distances) / (2 sigma^2))`.
pub fn affinity(
    dc: SquareMatrix,
    ds: SquareMatrix,
    dedge: SquareMatrix,
    sigma: f64,
    mode: EdgeWeights,
) -> AffinityMatrix {
    let n = dc.n();
    let denom = 2.0 * sigma * sigma;
    let a = SquareMatrix::symmetric(n, |i, j| {
        let d = match mode {
            EdgeWeights::Color => dc.get(i, j),
            EdgeWeights::ColorSpatial => dc.get(i, j) + ds.get(i, j),
            EdgeWeights::Full => dc.get(i, j) + ds.get(i, j) + dedge.get(i, j),
        };
        if i == j {
            1.0
        } else {
            // Keep A strictly positive.
            (-d / denom).exp().max(f64::MIN_POSITIVE)
        }
    });
    AffinityMatrix { a, dc, ds, dedge }
}

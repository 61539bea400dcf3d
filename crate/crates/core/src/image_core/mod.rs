//! Image ingestion, CIELAB conversion, edge maps, SLIC superpixels and
//! per-superpixel features.

mod color;
mod edges;
mod features;
mod slic;

pub use color::{rgb_to_lab, srgb_to_lab};
pub use edges::{compute_edge_map, EdgeMap};
pub use features::{extract_features, BorderSides, SuperpixelFeatures, SuperpixelMap};
pub use slic::{slic_labels, slic_segment, SlicParams};

use crate::error::{Error, Result};

/// Smallest accepted input side length.
pub const MIN_INPUT_SIDE: usize = 16;

/// Row-major 8-bit RGB image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    width: usize,
    height: usize,
    pixels: Vec<[u8; 3]>,
}

impl RgbImage {
    pub fn new(width: usize, height: usize, pixels: Vec<[u8; 3]>) -> Result<Self> {
        if width < MIN_INPUT_SIDE || height < MIN_INPUT_SIDE {
            return Err(Error::ImageTooSmallForInput { width, height });
        }
        if pixels.len() != width * height {
            return Err(Error::PixelCount {
                expected: width * height,
                actual: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> [u8; 3],
    ) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self::new(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.pixels
    }

    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        self.pixels[y * self.width + x]
    }
}

/// Row-major CIELAB image (L in [0, 100]).
#[derive(Debug, Clone, PartialEq)]
pub struct LabImage {
    width: usize,
    height: usize,
    pixels: Vec<[f64; 3]>,
}

impl LabImage {
    /// Build directly from Lab triples. No minimum size is enforced here so
    /// that small hand-built fixtures can be used.
    pub fn new(width: usize, height: usize, pixels: Vec<[f64; 3]>) -> Result<Self> {
        if pixels.len() != width * height || width == 0 || height == 0 {
            return Err(Error::PixelCount {
                expected: width * height,
                actual: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[[f64; 3]] {
        &self.pixels
    }

    pub fn pixel(&self, x: usize, y: usize) -> [f64; 3] {
        self.pixels[y * self.width + x]
    }
}

/// Row-major 8-bit single-channel image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::PixelCount {
                expected: width * height,
                actual: data.len(),
            });
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    pub fn same_dims(&self, width: usize, height: usize) -> Result<()> {
        if self.width != width || self.height != height {
            return Err(Error::DimensionMismatch {
                left_w: self.width,
                left_h: self.height,
                right_w: width,
                right_h: height,
            });
        }
        Ok(())
    }
}

/// Per-pixel superpixel labels in `[0, count)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labels {
    width: usize,
    height: usize,
    data: Vec<u32>,
    count: usize,
}

impl Labels {
    /// Wrap a raw label field. Labels must form a dense range `0..count`.
    pub fn new(width: usize, height: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != width * height || data.is_empty() {
            return Err(Error::PixelCount {
                expected: width * height,
                actual: data.len(),
            });
        }
        let count = data.iter().copied().max().map_or(0, |m| m as usize + 1);
        let mut used = vec![false; count];
        for &l in &data {
            used[l as usize] = true;
        }
        if used.iter().any(|u| !u) {
            return Err(Error::InvalidParameter {
                name: "labels",
                reason: "label range has unused indices".into(),
            });
        }
        Ok(Self {
            width,
            height,
            data,
            count,
        })
    }

    pub(crate) fn from_dense(width: usize, height: usize, data: Vec<u32>, count: usize) -> Self {
        Self {
            width,
            height,
            data,
            count,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> usize {
        self.data[y * self.width + x] as usize
    }
}

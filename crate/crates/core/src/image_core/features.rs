use super::{LabImage, Labels};

/// Which image sides a superpixel touches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BorderSides(u8);

impl BorderSides {
    pub const TOP: Self = Self(1);
    pub const DOWN: Self = Self(2);
    pub const LEFT: Self = Self(4);
    pub const RIGHT: Self = Self(8);

    pub fn contains(self, side: Self) -> bool {
        self.0 & side.0 == side.0
    }

    pub fn insert(&mut self, side: Self) {
        self.0 |= side.0;
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn bits(self) -> u8 {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuperpixelFeatures {
    /// Mean CIELAB color.
    pub mean_color: [f64; 3],
    /// Mean pixel position divided by `(width - 1, height - 1)`.
    pub centroid: [f64; 2],
    pub area_fraction: f64,
    pub pixel_count: usize,
    pub border: BorderSides,
    /// Sorted indices of 4-adjacent superpixels.
    pub neighbors: Vec<usize>,
}

/// A label field together with the features of every superpixel.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperpixelMap {
    labels: Labels,
    features: Vec<SuperpixelFeatures>,
}

impl SuperpixelMap {
    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn features(&self) -> &[SuperpixelFeatures] {
        &self.features
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    /// Image dimensions in pixels.
    pub fn dims(&self) -> (usize, usize) {
        (self.labels.width(), self.labels.height())
    }

    /// Average a per-pixel map over each superpixel.
    pub fn average_pixels(&self, values: impl Fn(usize) -> f64) -> Vec<f64> {
        let mut sums = vec![0.0; self.len()];
        for (p, &l) in self.labels.data().iter().enumerate() {
            sums[l as usize] += values(p);
        }
        sums.iter()
            .zip(&self.features)
            .map(|(s, f)| s / f.pixel_count as f64)
            .collect()
    }
}

pub fn extract_features(labels: Labels, img: &LabImage) -> SuperpixelMap {
    let (w, h) = (labels.width(), labels.height());
    let n = labels.count();
    let mut sums = vec![[0.0f64; 5]; n];
    let mut counts = vec![0usize; n];
    let mut border = vec![BorderSides::default(); n];
    let mut adjacent = vec![std::collections::BTreeSet::new(); n];
    for y in 0..h {
        for x in 0..w {
            let l = labels.get(x, y);
            let p = img.pixel(x, y);
            let s = &mut sums[l];
            s[0] += p[0];
            s[1] += p[1];
            s[2] += p[2];
            s[3] += x as f64;
            s[4] += y as f64;
            counts[l] += 1;
            if y == 0 {
                border[l].insert(BorderSides::TOP);
            }
            if y + 1 == h {
                border[l].insert(BorderSides::DOWN);
            }
            if x == 0 {
                border[l].insert(BorderSides::LEFT);
            }
            if x + 1 == w {
                border[l].insert(BorderSides::RIGHT);
            }
            if x + 1 < w {
                let r = labels.get(x + 1, y);
                if r != l {
                    adjacent[l].insert(r);
                    adjacent[r].insert(l);
                }
            }
            if y + 1 < h {
                let d = labels.get(x, y + 1);
                if d != l {
                    adjacent[l].insert(d);
                    adjacent[d].insert(l);
                }
            }
        }
    }
    let total = (w * h) as f64;
    let sx = if w > 1 { (w - 1) as f64 } else { 1.0 };
    let sy = if h > 1 { (h - 1) as f64 } else { 1.0 };
    let features = (0..n)
        .map(|i| {
            let c = counts[i] as f64;
            let s = &sums[i];
            SuperpixelFeatures {
                mean_color: [s[0] / c, s[1] / c, s[2] / c],
                centroid: [s[3] / c / sx, s[4] / c / sy],
                area_fraction: c / total,
                pixel_count: counts[i],
                border: border[i],
                neighbors: adjacent[i].iter().copied().collect(),
            }
        })
        .collect();
    SuperpixelMap { labels, features }
}

use super::{GrayImage, LabImage};
use crate::error::{Error, Result};

/// Per-pixel edge probability in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeMap {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl EdgeMap {
    pub fn new(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != width * height {
            return Err(Error::PixelCount {
                expected: width * height,
                actual: values.len(),
            });
        }
        if let Some(&bad) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::EdgeValueOutOfRange(bad));
        }
        Ok(Self {
            width,
            height,
            values,
        })
    }

    /// Interpret an 8-bit map as probabilities `value / 255`.
    pub fn from_gray(gray: &GrayImage) -> Self {
        Self {
            width: gray.width(),
            height: gray.height(),
            values: gray.data().iter().map(|&v| f64::from(v) / 255.0).collect(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[y * self.width + x]
    }
}

/// 3x3 Sobel gradient magnitude on the L channel, min-max normalized.
/// Borders replicate the nearest pixel.
pub fn compute_edge_map(img: &LabImage) -> EdgeMap {
    let (w, h) = (img.width(), img.height());
    let l = |x: isize, y: isize| {
        let xc = x.clamp(0, w as isize - 1) as usize;
        let yc = y.clamp(0, h as isize - 1) as usize;
        img.pixel(xc, yc)[0]
    };
    let rows: Vec<Vec<f64>> = crate::par::map_range(h, |y| {
        let y = y as isize;
        (0..w as isize)
            .map(|x| {
                let gx = (l(x + 1, y - 1) + 2.0 * l(x + 1, y) + l(x + 1, y + 1))
                    - (l(x - 1, y - 1) + 2.0 * l(x - 1, y) + l(x - 1, y + 1));
                let gy = (l(x - 1, y + 1) + 2.0 * l(x, y + 1) + l(x + 1, y + 1))
                    - (l(x - 1, y - 1) + 2.0 * l(x, y - 1) + l(x + 1, y - 1));
                gx.hypot(gy)
            })
            .collect()
    });
    let mut values: Vec<f64> = rows.into_iter().flatten().collect();
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if hi - lo > 1e-12 {
        for v in &mut values {
            *v = ((*v - lo) / (hi - lo)).clamp(0.0, 1.0);
        }
    } else {
        values.iter_mut().for_each(|v| *v = 0.0);
    }
    EdgeMap {
        width: w,
        height: h,
        values,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lab_from_l(w: usize, h: usize, f: impl Fn(usize, usize) -> f64) -> LabImage {
        let mut px = Vec::new();
        for y in 0..h {
            for x in 0..w {
                px.push([f(x, y), 0.0, 0.0]);
            }
        }
        LabImage::new(w, h, px).unwrap()
    }

    #[test]
    fn constant_image_has_no_edges() {
        let e = compute_edge_map(&lab_from_l(20, 20, |_, _| 42.0));
        assert!(e.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn vertical_step_peaks_at_the_step() {
        let k = 11;
        let e = compute_edge_map(&lab_from_l(24, 18, |x, _| if x < k { 10.0 } else { 70.0 }));
        for y in 0..18 {
            for x in 0..24 {
                let v = e.get(x, y);
                if x + 1 == k || x == k {
                    assert!((v - 1.0).abs() < 1e-12, "({x},{y}) = {v}");
                }
                if x + 2 < k || x > k + 2 {
                    assert!(v < 0.05, "({x},{y}) = {v}");
                }
            }
        }
    }

    #[test]
    fn external_map_is_validated_and_passed_through() {
        let g = GrayImage::from_fn(4, 4, |x, y| (x * 60 + y) as u8);
        let e = EdgeMap::from_gray(&g);
        assert_eq!(e.get(2, 3), 123.0 / 255.0);
        assert!(EdgeMap::new(2, 1, vec![0.5, 1.5]).is_err());
        assert!(EdgeMap::new(2, 1, vec![0.5, 1.0]).is_ok());
    }
}

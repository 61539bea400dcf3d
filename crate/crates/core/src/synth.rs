//! Deterministic synthetic corpus: 300x200 images with uniform or gradient
//! backgrounds and one or two contrasting shapes, with exact ground truth.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::image_core::{GrayImage, RgbImage};

pub const WIDTH: usize = 300;
pub const HEIGHT: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Background {
    Uniform([u8; 3]),
    /// Linear blend from the first color to the second, left to right.
    Horizontal([u8; 3], [u8; 3]),
    /// Top to bottom.
    Vertical([u8; 3], [u8; 3]),
    Diagonal([u8; 3], [u8; 3]),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    Rect { x0: f64, y0: f64, x1: f64, y1: f64 },
    Ellipse { cx: f64, cy: f64, rx: f64, ry: f64 },
    Triangle { a: (f64, f64), b: (f64, f64), c: (f64, f64) },
}

impl Shape {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        match *self {
            Shape::Rect { x0, y0, x1, y1 } => x >= x0 && x < x1 && y >= y0 && y < y1,
            Shape::Ellipse { cx, cy, rx, ry } => {
                ((x - cx) / rx).powi(2) + ((y - cy) / ry).powi(2) <= 1.0
            }
            Shape::Triangle { a, b, c } => {
                let side = |p: (f64, f64), q: (f64, f64)| {
                    (q.0 - p.0) * (y - p.1) - (q.1 - p.1) * (x - p.0)
                };
                let (d1, d2, d3) = (side(a, b), side(b, c), side(c, a));
                let neg = d1 < 0.0 || d2 < 0.0 || d3 < 0.0;
                let pos = d1 > 0.0 || d2 > 0.0 || d3 > 0.0;
                !(neg && pos)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneSpec {
    pub name: &'static str,
    pub background: Background,
    pub shapes: Vec<(Shape, [u8; 3])>,
    /// Amplitude of uniform per-channel noise.
    pub noise: u8,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticCase {
    pub name: String,
    pub image: RgbImage,
    pub ground_truth: GrayImage,
}

fn lerp(a: [u8; 3], b: [u8; 3], t: f64) -> [f64; 3] {
    [0, 1, 2].map(|c| f64::from(a[c]) + (f64::from(b[c]) - f64::from(a[c])) * t)
}

impl Background {
    fn color(&self, x: usize, y: usize, w: usize, h: usize) -> [f64; 3] {
        let tx = x as f64 / (w - 1) as f64;
        let ty = y as f64 / (h - 1) as f64;
        match *self {
            Background::Uniform(c) => c.map(f64::from),
            Background::Horizontal(a, b) => lerp(a, b, tx),
            Background::Vertical(a, b) => lerp(a, b, ty),
            Background::Diagonal(a, b) => lerp(a, b, (tx + ty) / 2.0),
        }
    }
}

pub fn render(spec: &SceneSpec, seed: u64) -> SyntheticCase {
    render_sized(spec, seed, WIDTH, HEIGHT)
}

/// Render at an arbitrary size; shape coordinates are scaled from the
/// 300x200 reference frame.
pub fn render_sized(spec: &SceneSpec, seed: u64, width: usize, height: usize) -> SyntheticCase {
    let (sx, sy) = (WIDTH as f64 / width as f64, HEIGHT as f64 / height as f64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pixels = Vec::with_capacity(width * height);
    let mut gt = Vec::with_capacity(width * height);
    for y in 0..height {
        for x in 0..width {
            let (px, py) = ((x as f64 + 0.5) * sx, (y as f64 + 0.5) * sy);
            let mut color = spec.background.color(x, y, width, height);
            let mut inside = false;
            for (shape, c) in &spec.shapes {
                if shape.contains(px, py) {
                    color = c.map(f64::from);
                    inside = true;
                }
            }
            let n = f64::from(spec.noise);
            let rgb = color.map(|v| {
                let jitter = if spec.noise > 0 { rng.gen_range(-n..=n) } else { 0.0 };
                (v + jitter).round().clamp(0.0, 255.0) as u8
            });
            pixels.push(rgb);
            gt.push(if inside { 255 } else { 0 });
        }
    }
    SyntheticCase {
        name: spec.name.to_string(),
        image: RgbImage::new(width, height, pixels).expect("synthetic dims"),
        ground_truth: GrayImage::new(width, height, gt).expect("synthetic dims"),
    }
}

/// Name of the scene whose object touches the bottom border.
pub const BOTTOM_BORDER_CASE: &str = "bottom_block";

/// The 20 scene descriptions of the standard corpus.
pub fn scene_specs() -> Vec<SceneSpec> {
    use Background::*;
    let rect = |x0, y0, x1, y1| Shape::Rect { x0, y0, x1, y1 };
    let ellipse = |cx, cy, rx, ry| Shape::Ellipse { cx, cy, rx, ry };
    let spec = |name, background, shapes: Vec<(Shape, [u8; 3])>| SceneSpec {
        name,
        background,
        shapes,
        noise: 4,
    };
    vec![
        spec("red_disc_gray", Uniform([128, 128, 128]), vec![(ellipse(150.0, 100.0, 45.0, 45.0), [220, 30, 30])]),
        spec("blue_rect_sand", Uniform([210, 190, 150]), vec![(rect(100.0, 60.0, 200.0, 140.0), [30, 60, 200])]),
        spec("green_ellipse_dark", Uniform([40, 40, 50]), vec![(ellipse(150.0, 95.0, 70.0, 40.0), [60, 200, 80])]),
        spec("yellow_disc_hgrad", Horizontal([40, 70, 120], [90, 120, 170]), vec![(ellipse(160.0, 100.0, 40.0, 40.0), [240, 220, 40])]),
        spec("white_rect_vgrad", Vertical([30, 90, 40], [70, 140, 60]), vec![(rect(110.0, 50.0, 190.0, 150.0), [245, 245, 245])]),
        spec("magenta_tri_gray", Uniform([150, 150, 140]), vec![(Shape::Triangle { a: (150.0, 40.0), b: (90.0, 160.0), c: (210.0, 160.0) }, [200, 40, 180])]),
        spec("orange_disc_dgrad", Diagonal([60, 60, 90], [120, 120, 150]), vec![(ellipse(140.0, 110.0, 50.0, 45.0), [250, 140, 20])]),
        spec("dark_rect_light", Uniform([230, 230, 225]), vec![(rect(90.0, 70.0, 210.0, 150.0), [30, 30, 35])]),
        spec("two_discs", Uniform([100, 130, 160]), vec![
            (ellipse(100.0, 100.0, 35.0, 35.0), [230, 60, 40]),
            (ellipse(205.0, 95.0, 30.0, 30.0), [230, 60, 40]),
        ]),
        spec("two_rects_hgrad", Horizontal([200, 200, 190], [160, 170, 180]), vec![
            (rect(60.0, 60.0, 130.0, 140.0), [20, 40, 140]),
            (rect(170.0, 50.0, 240.0, 130.0), [20, 40, 140]),
        ]),
        spec(BOTTOM_BORDER_CASE, Uniform([120, 160, 200]), vec![(rect(105.0, 110.0, 195.0, 200.0), [200, 60, 30])]),
        spec("cyan_ellipse_brown", Uniform([120, 80, 50]), vec![(ellipse(150.0, 100.0, 60.0, 35.0), [40, 220, 220])]),
        spec("purple_rect_vgrad", Vertical([220, 220, 200], [180, 190, 160]), vec![(rect(120.0, 40.0, 180.0, 160.0), [110, 30, 150])]),
        spec("red_tri_hgrad", Horizontal([50, 100, 60], [80, 140, 90]), vec![(Shape::Triangle { a: (100.0, 150.0), b: (200.0, 150.0), c: (150.0, 50.0) }, [230, 50, 50])]),
        spec("pink_disc_navy", Uniform([25, 30, 80]), vec![(ellipse(130.0, 90.0, 38.0, 38.0), [250, 170, 190])]),
        spec("small_disc_gray", Uniform([90, 90, 90]), vec![(ellipse(150.0, 100.0, 28.0, 28.0), [250, 250, 120])]),
        spec("wide_rect_dgrad", Diagonal([180, 200, 220], [140, 160, 190]), vec![(rect(70.0, 75.0, 230.0, 135.0), [150, 40, 20])]),
        spec("disc_and_rect", Uniform([200, 200, 200]), vec![
            (ellipse(95.0, 100.0, 32.0, 32.0), [20, 120, 40]),
            (rect(175.0, 65.0, 235.0, 135.0), [20, 120, 40]),
        ]),
        spec("lime_ellipse_vgrad", Vertical([70, 40, 90], [110, 70, 120]), vec![(ellipse(150.0, 105.0, 55.0, 50.0), [170, 230, 40])]),
        spec("black_disc_white", Uniform([240, 240, 240]), vec![(ellipse(155.0, 95.0, 42.0, 42.0), [15, 15, 15])]),
    ]
}

/// The standard 20-image corpus.
pub fn synthetic_corpus() -> Vec<SyntheticCase> {
    scene_specs()
        .iter()
        .enumerate()
        .map(|(i, s)| render(s, 0x5a11_e000 + i as u64))
        .collect()
}

/// Write `images/`, `gt/` and `manifest.csv` for the standard corpus.
pub fn write_corpus(dir: &std::path::Path) -> crate::error::Result<()> {
    let io_err = |path: &std::path::Path| {
        let path = path.to_path_buf();
        move |source| crate::error::Error::Io { path, source }
    };
    let images = dir.join("images");
    let gt = dir.join("gt");
    for d in [&images, &gt] {
        std::fs::create_dir_all(d).map_err(io_err(d))?;
    }
    let mut manifest = String::from("image,gt,edge,objectness\n");
    for case in synthetic_corpus() {
        let file = format!("{}.png", case.name);
        crate::io::write_rgb_png(&images.join(&file), &case.image)?;
        crate::io::write_gray_png(&gt.join(&file), &case.ground_truth)?;
        manifest.push_str(&format!("images/{file},gt/{file},,\n"));
    }
    let path = dir.join("manifest.csv");
    std::fs::write(&path, manifest).map_err(io_err(&path))
}

//! PNG/JPEG reading and PNG writing.

use std::path::Path;

use crate::error::{Error, Result};
use crate::image_core::{GrayImage, Labels, RgbImage};

fn decode(path: &Path) -> Result<image::DynamicImage> {
    image::open(path).map_err(|source| match source {
        image::ImageError::IoError(e) => Error::Io {
            path: path.to_path_buf(),
            source: e,
        },
        other => Error::Decode {
            path: path.to_path_buf(),
            source: other,
        },
    })
}

fn encode_err(path: &Path) -> impl FnOnce(image::ImageError) -> Error + '_ {
    move |source| Error::Decode {
        path: path.to_path_buf(),
        source,
    }
}

/// Read an image as 8-bit RGB; grayscale inputs are promoted.
pub fn read_rgb(path: &Path) -> Result<RgbImage> {
    let img = decode(path)?.to_rgb8();
    let (w, h) = (img.width() as usize, img.height() as usize);
    let pixels = img.pixels().map(|p| p.0).collect();
    RgbImage::new(w, h, pixels)
}

/// Read an image as 8-bit grayscale.
pub fn read_gray(path: &Path) -> Result<GrayImage> {
    let img = decode(path)?.to_luma8();
    let (w, h) = (img.width() as usize, img.height() as usize);
    GrayImage::new(w, h, img.into_raw())
}

pub fn write_gray_png(path: &Path, img: &GrayImage) -> Result<()> {
    image::save_buffer_with_format(
        path,
        img.data(),
        img.width() as u32,
        img.height() as u32,
        image::ExtendedColorType::L8,
        image::ImageFormat::Png,
    )
    .map_err(encode_err(path))
}

pub fn write_rgb_png(path: &Path, img: &RgbImage) -> Result<()> {
    let raw: Vec<u8> = img.pixels().iter().flatten().copied().collect();
    image::save_buffer_with_format(
        path,
        &raw,
        img.width() as u32,
        img.height() as u32,
        image::ExtendedColorType::Rgb8,
        image::ImageFormat::Png,
    )
    .map_err(encode_err(path))
}

/// Label field as a 16-bit grayscale PNG.
pub fn write_labels_png(path: &Path, labels: &Labels) -> Result<()> {
    let buf = image::ImageBuffer::<image::Luma<u16>, Vec<u16>>::from_raw(
        labels.width() as u32,
        labels.height() as u32,
        labels.data().iter().map(|&l| l as u16).collect(),
    )
    .expect("label buffer size");
    buf.save_with_format(path, image::ImageFormat::Png)
        .map_err(encode_err(path))
}

pub fn read_labels_png(path: &Path) -> Result<Labels> {
    let img = decode(path)?.to_luma16();
    let (w, h) = (img.width() as usize, img.height() as usize);
    Labels::new(w, h, img.into_raw().into_iter().map(u32::from).collect())
}

pub fn is_image_path(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .map(|e| matches!(e.to_ascii_lowercase().as_str(), "png" | "jpg" | "jpeg"))
        .unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gray_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("g.png");
        let g = GrayImage::from_fn(17, 5, |x, y| (x * 13 + y) as u8);
        write_gray_png(&p, &g).unwrap();
        assert_eq!(read_gray(&p).unwrap(), g);
    }

    #[test]
    fn gray_file_is_promoted_to_rgb() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("g.png");
        let g = GrayImage::from_fn(16, 16, |x, _| x as u8 * 10);
        write_gray_png(&p, &g).unwrap();
        let rgb = read_rgb(&p).unwrap();
        assert_eq!(rgb.pixel(3, 2), [30, 30, 30]);
    }

    #[test]
    fn labels_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("l.png");
        let l = Labels::new(3, 2, vec![0, 1, 300, 2, 299, 3]);
        assert!(l.is_err());
        let l = Labels::new(3, 2, vec![0, 1, 5, 2, 4, 3]).unwrap();
        write_labels_png(&p, &l).unwrap();
        assert_eq!(read_labels_png(&p).unwrap(), l);
    }

    #[test]
    fn garbage_file_is_a_decode_error() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.png");
        std::fs::write(&p, b"not a png").unwrap();
        assert!(matches!(read_rgb(&p), Err(Error::Decode { .. })));
    }
}

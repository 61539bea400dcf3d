//! Benchmark metrics: PR and ROC curves over the 256 binarization
//! thresholds, maximal F-measure, MAE and ROC-AUC.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image_core::GrayImage;

/// Weight of precision in the F-measure.
pub const BETA_SQUARED: f64 = 0.3;
/// Ground-truth pixels at or above this value are foreground.
pub const GT_THRESHOLD: u8 = 128;
pub const THRESHOLDS: usize = 256;

/// Binary ground-truth mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    data: Vec<bool>,
}

impl BinaryMask {
    pub fn new(width: usize, height: usize, data: Vec<bool>) -> Result<Self> {
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

    pub fn from_gray(gray: &GrayImage) -> Self {
        Self {
            width: gray.width(),
            height: gray.height(),
            data: gray.data().iter().map(|&v| v >= GT_THRESHOLD).collect(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[bool] {
        &self.data
    }

    pub fn positives(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }
}

fn check_dims(s: &GrayImage, g: &BinaryMask) -> Result<()> {
    s.same_dims(g.width, g.height)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub threshold: usize,
    pub precision: f64,
    pub recall: f64,
    pub fpr: f64,
    pub tpr: f64,
}

/// Confusion counts for every threshold via value histograms.
struct Counts {
    pos: [u64; THRESHOLDS],
    neg: [u64; THRESHOLDS],
}

impl Counts {
    fn new(s: &GrayImage, g: &BinaryMask) -> Self {
        let mut pos = [0u64; THRESHOLDS];
        let mut neg = [0u64; THRESHOLDS];
        for (&v, &gt) in s.data().iter().zip(&g.data) {
            if gt {
                pos[v as usize] += 1;
            } else {
                neg[v as usize] += 1;
            }
        }
        Self { pos, neg }
    }

    fn curve(&self) -> Vec<CurvePoint> {
        let total_pos: u64 = self.pos.iter().sum();
        let total_neg: u64 = self.neg.iter().sum();
        let mut tp = 0u64;
        let mut fp = 0u64;
        let mut points = vec![
            CurvePoint {
                threshold: 0,
                precision: 0.0,
                recall: 0.0,
                fpr: 0.0,
                tpr: 0.0
            };
            THRESHOLDS
        ];
        for t in (0..THRESHOLDS).rev() {
            tp += self.pos[t];
            fp += self.neg[t];
            let (precision, recall) = precision_recall(tp, fp, total_pos - tp);
            points[t] = CurvePoint {
                threshold: t,
                precision,
                recall,
                fpr: if total_neg == 0 {
                    0.0
                } else {
                    fp as f64 / total_neg as f64
                },
                tpr: recall,
            };
        }
        points
    }
}

fn precision_recall(tp: u64, fp: u64, fn_: u64) -> (f64, f64) {
    let precision = if tp + fp == 0 {
        1.0
    } else {
        tp as f64 / (tp + fp) as f64
    };
    let recall = if tp + fn_ == 0 {
        1.0
    } else {
        tp as f64 / (tp + fn_) as f64
    };
    (precision, recall)
}

/// Precision and recall of `s >= t` against `g`. Empty predictions have
/// precision 1; empty ground truth has recall 1.
pub fn pr_at_threshold(s: &GrayImage, g: &BinaryMask, t: u8) -> Result<(f64, f64)> {
    check_dims(s, g)?;
    let (mut tp, mut fp, mut fn_) = (0, 0, 0);
    for (&v, &gt) in s.data().iter().zip(&g.data) {
        match (v >= t, gt) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => {}
        }
    }
    Ok(precision_recall(tp, fp, fn_))
}

/// Weighted harmonic mean of precision and recall; 0 when both vanish.
pub fn f_measure(precision: f64, recall: f64, beta2: f64) -> f64 {
    let denom = beta2 * precision + recall;
    if denom <= 0.0 {
        0.0
    } else {
        (1.0 + beta2) * precision * recall / denom
    }
}

pub fn pr_curve(s: &GrayImage, g: &BinaryMask) -> Result<Vec<CurvePoint>> {
    check_dims(s, g)?;
    Ok(Counts::new(s, g).curve())
}

pub fn max_f_measure(curve: &[CurvePoint]) -> f64 {
    curve
        .iter()
        .map(|p| f_measure(p.precision, p.recall, BETA_SQUARED))
        .fold(0.0, f64::max)
}

/// Mean absolute difference between `s / 255` and the binary mask.
pub fn mae(s: &GrayImage, g: &BinaryMask) -> Result<f64> {
    check_dims(s, g)?;
    let total: f64 = s
        .data()
        .iter()
        .zip(&g.data)
        .map(|(&v, &gt)| (f64::from(v) / 255.0 - if gt { 1.0 } else { 0.0 }).abs())
        .sum();
    Ok(total / s.data().len() as f64)
}

/// Trapezoidal area under the ROC curve anchored at (0,0) and (1,1).
pub fn auc_from_curve(curve: &[CurvePoint]) -> f64 {
    let mut pts: Vec<(f64, f64)> = vec![(0.0, 0.0)];
    pts.extend(curve.iter().rev().map(|p| (p.fpr, p.tpr)));
    pts.push((1.0, 1.0));
    pts.windows(2)
        .map(|w| (w[1].0 - w[0].0) * (w[1].1 + w[0].1) / 2.0)
        .sum::<f64>()
        .clamp(0.0, 1.0)
}

/// ROC-AUC and whether it was degenerate (ground truth all one class, in
/// which case 1 is reported).
pub fn roc_auc(s: &GrayImage, g: &BinaryMask) -> Result<(f64, bool)> {
    check_dims(s, g)?;
    let p = g.positives();
    if p == 0 || p == g.data.len() {
        return Ok((1.0, true));
    }
    Ok((auc_from_curve(&Counts::new(s, g).curve()), false))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImageMetrics {
    pub image_id: String,
    pub max_f: f64,
    pub mae: f64,
    pub auc: f64,
    pub auc_degenerate: bool,
    pub curve: Vec<CurvePoint>,
}

pub fn evaluate_image(image_id: &str, s: &GrayImage, g: &BinaryMask) -> Result<ImageMetrics> {
    let curve = pr_curve(s, g)?;
    let (auc, auc_degenerate) = roc_auc(s, g)?;
    Ok(ImageMetrics {
        image_id: image_id.to_string(),
        max_f: max_f_measure(&curve),
        mae: mae(s, g)?,
        auc,
        auc_degenerate,
        curve,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Aggregates {
    pub mean_max_f: f64,
    #[serde(rename = "meanMAE")]
    pub mean_mae: f64,
    #[serde(rename = "meanAUC")]
    pub mean_auc: f64,
    pub image_count: usize,
    /// Images whose ground truth was all foreground or all background.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub degenerate_auc: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub per_image: Vec<ImageMetrics>,
    /// Per-threshold means over images.
    pub curve: Vec<CurvePoint>,
    pub aggregates: Aggregates,
}

/// Aggregates are plain means over images; the curve is averaged per
/// threshold.
pub fn aggregate(per_image: Vec<ImageMetrics>) -> EvalReport {
    let n = per_image.len().max(1) as f64;
    let mut curve: Vec<CurvePoint> = (0..THRESHOLDS)
        .map(|t| CurvePoint {
            threshold: t,
            precision: 0.0,
            recall: 0.0,
            fpr: 0.0,
            tpr: 0.0,
        })
        .collect();
    for m in &per_image {
        for (acc, p) in curve.iter_mut().zip(&m.curve) {
            acc.precision += p.precision / n;
            acc.recall += p.recall / n;
            acc.fpr += p.fpr / n;
            acc.tpr += p.tpr / n;
        }
    }
    let mean = |f: fn(&ImageMetrics) -> f64| per_image.iter().map(f).sum::<f64>() / n;
    let aggregates = Aggregates {
        mean_max_f: mean(|m| m.max_f),
        mean_mae: mean(|m| m.mae),
        mean_auc: mean(|m| m.auc),
        image_count: per_image.len(),
        degenerate_auc: per_image
            .iter()
            .filter(|m| m.auc_degenerate)
            .map(|m| m.image_id.clone())
            .collect(),
        notes: vec![
            "aggregates are unweighted means over images".into(),
            "precision at an empty prediction is 1; binarization keeps pixels >= threshold".into(),
            "reference expectation on the ASD benchmark: meanMaxF >= 0.85 (informational only)"
                .into(),
        ],
    };
    EvalReport {
        per_image,
        curve,
        aggregates,
    }
}

/// Sibling paths for the curve CSV and JSON summary of a report file.
pub fn report_paths(report: &Path) -> (PathBuf, PathBuf) {
    let stem = report
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "report".into());
    let dir = report.parent().unwrap_or_else(|| Path::new(""));
    (
        dir.join(format!("{stem}_curves.csv")),
        dir.join(format!("{stem}_summary.json")),
    )
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn write_per_image_csv(path: &Path, report: &EvalReport) -> Result<()> {
    let mut out = String::from("image,maxF,mae,auc\n");
    for m in &report.per_image {
        out.push_str(&format!("{},{:.6},{:.6},{:.6}\n", m.image_id, m.max_f, m.mae, m.auc));
    }
    std::fs::write(path, out).map_err(io_err(path))
}

pub fn write_curve_csv(path: &Path, curve: &[CurvePoint]) -> Result<()> {
    let mut out = String::from("threshold,precision,recall,fpr,tpr\n");
    for p in curve {
        out.push_str(&format!(
            "{},{:.6},{:.6},{:.6},{:.6}\n",
            p.threshold, p.precision, p.recall, p.fpr, p.tpr
        ));
    }
    std::fs::write(path, out).map_err(io_err(path))
}

pub fn write_summary_json(path: &Path, aggregates: &Aggregates) -> Result<()> {
    let mut f = std::fs::File::create(path).map_err(io_err(path))?;
    let json = serde_json::to_string_pretty(aggregates).expect("aggregates serialize");
    writeln!(f, "{json}").map_err(io_err(path))
}

/// Write the per-image CSV at `path` plus the curve CSV and summary JSON
/// next to it.
pub fn write_report(path: &Path, report: &EvalReport) -> Result<()> {
    let (curves, summary) = report_paths(path);
    write_per_image_csv(path, report)?;
    write_curve_csv(&curves, &report.curve)?;
    write_summary_json(&summary, &report.aggregates)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gray(w: usize, h: usize, data: &[u8]) -> GrayImage {
        GrayImage::new(w, h, data.to_vec()).unwrap()
    }

    fn mask(w: usize, h: usize, data: &[u8]) -> BinaryMask {
        BinaryMask::new(w, h, data.iter().map(|&v| v != 0).collect()).unwrap()
    }

    #[test]
    fn perfect_map() {
        let g = mask(2, 2, &[1, 0, 0, 1]);
        let s = gray(2, 2, &[255, 0, 0, 255]);
        for t in 1..=255u8 {
            assert_eq!(pr_at_threshold(&s, &g, t).unwrap(), (1.0, 1.0));
        }
        let m = evaluate_image("x", &s, &g).unwrap();
        assert_eq!(m.max_f, 1.0);
        assert_eq!(m.mae, 0.0);
        assert_eq!(m.auc, 1.0);
    }

    #[test]
    fn zero_threshold_predicts_everything() {
        let g = mask(2, 2, &[1, 0, 0, 0]);
        let s = gray(2, 2, &[3, 200, 0, 9]);
        assert_eq!(pr_at_threshold(&s, &g, 0).unwrap(), (0.25, 1.0));
    }

    #[test]
    fn hand_counted_4x4() {
        #[rustfmt::skip]
        let s = gray(4, 4, &[
            200, 150, 10, 0,
            180,  90, 60, 0,
             40, 130, 20, 5,
              0,   0, 70, 255,
        ]);
        #[rustfmt::skip]
        let g = mask(4, 4, &[
            1, 1, 0, 0,
            1, 1, 0, 0,
            0, 0, 0, 0,
            0, 0, 0, 1,
        ]);
        // t = 100: predicted {200,150,180,130,255}; TP = 4, FP = 1, FN = 1
        let (p, r) = pr_at_threshold(&s, &g, 100).unwrap();
        assert!((p - 0.8).abs() < 1e-12 && (r - 0.8).abs() < 1e-12);
        // t = 160: predicted {200,180,255}; TP = 3, FP = 0, FN = 2
        let (p, r) = pr_at_threshold(&s, &g, 160).unwrap();
        assert_eq!((p, r), (1.0, 0.6));
        let curve = pr_curve(&s, &g).unwrap();
        assert_eq!((curve[100].precision, curve[100].recall), (0.8, 0.8));
    }

    #[test]
    fn f_measure_values() {
        assert!((f_measure(0.5, 0.5, BETA_SQUARED) - 0.5).abs() < 1e-12);
        assert_eq!(f_measure(0.7, 0.0, BETA_SQUARED), 0.0);
        assert!((f_measure(0.9, 0.6, BETA_SQUARED) - 0.806897).abs() < 1e-6);
    }

    #[test]
    fn mae_values() {
        let g = mask(2, 2, &[1, 0, 1, 0]);
        assert_eq!(mae(&gray(2, 2, &[255, 0, 255, 0]), &g).unwrap(), 0.0);
        assert_eq!(mae(&gray(2, 2, &[0, 255, 0, 255]), &g).unwrap(), 1.0);
        // two pixels off by 0.5 (value 127.5 is not representable; use a
        // 510-step scale check instead)
        let half = gray(2, 2, &[255, 0, 0, 0]);
        assert_eq!(mae(&half, &g).unwrap(), 0.25);
    }

    #[test]
    fn constant_map_auc_is_chance() {
        let g = mask(2, 2, &[1, 0, 1, 0]);
        let (auc, degenerate) = roc_auc(&gray(2, 2, &[77; 4]), &g).unwrap();
        assert_eq!(auc, 0.5);
        assert!(!degenerate);
    }

    #[test]
    fn degenerate_ground_truth_is_flagged() {
        let g = mask(2, 2, &[0; 4]);
        assert_eq!(roc_auc(&gray(2, 2, &[1, 2, 3, 4]), &g).unwrap(), (1.0, true));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let g = mask(2, 2, &[0; 4]);
        assert!(mae(&gray(4, 1, &[0; 4]), &g).is_err());
        assert!(pr_at_threshold(&gray(1, 4, &[0; 4]), &g, 3).is_err());
    }
}

//! Directory-level drivers: batch detection, evaluation against ground truth
//! and ablation over a manifest.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::config::PipelineConfig;
use crate::error::{Error, Result};
use crate::evaluation::{aggregate, evaluate_image, write_report, Aggregates, BinaryMask, EvalReport};
use crate::image_core::{EdgeMap, GrayImage};
use crate::io::{is_image_path, read_gray, read_rgb, write_gray_png, write_labels_png};
use crate::par::{map_slice, with_threads};
use crate::pipeline::{run_pipeline, PipelineOutput, SideInputs};

/// Suffix appended to the stem of every saliency map written by `detect`.
pub const SALIENCY_SUFFIX: &str = "_saliency";

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// A single image file, or every png/jpg/jpeg in a directory sorted by name.
pub fn collect_inputs(input: &Path) -> Result<Vec<PathBuf>> {
    let meta = std::fs::metadata(input).map_err(io_err(input))?;
    if meta.is_file() {
        return Ok(vec![input.to_path_buf()]);
    }
    let mut files: Vec<PathBuf> = std::fs::read_dir(input)
        .map_err(io_err(input))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && is_image_path(p))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::Dataset(format!(
            "no png/jpg images in {}",
            input.display()
        )));
    }
    Ok(files)
}

#[derive(Debug, Clone, Default)]
pub struct DetectOptions {
    /// Directory holding `<stem>.png` edge maps.
    pub edge_dir: Option<PathBuf>,
    /// Directory holding `<stem>.png` objectness maps.
    pub objectness_dir: Option<PathBuf>,
    pub dump_stages: bool,
    /// Worker threads across images; 0 uses every core.
    pub jobs: usize,
}

#[derive(Debug, Default)]
pub struct DetectSummary {
    pub written: Vec<PathBuf>,
    pub failed: Vec<(PathBuf, String)>,
}

fn side_map(dir: Option<&Path>, stem: &str) -> Result<Option<GrayImage>> {
    let Some(dir) = dir else { return Ok(None) };
    let path = dir.join(format!("{stem}.png"));
    if !path.exists() {
        return Err(Error::Dataset(format!("missing side input {}", path.display())));
    }
    read_gray(&path).map(Some)
}

/// Run the pipeline on one image file with optional side inputs looked up by
/// stem.
pub fn run_file(
    path: &Path,
    config: &PipelineConfig,
    edge_dir: Option<&Path>,
    objectness_dir: Option<&Path>,
) -> Result<PipelineOutput> {
    let stem = file_stem(path);
    let image = read_rgb(path)?;
    let edge = side_map(edge_dir, &stem)?.map(|g| EdgeMap::from_gray(&g));
    let objectness = side_map(objectness_dir, &stem)?;
    run_pipeline(
        &image,
        SideInputs {
            edge_map: edge.as_ref(),
            objectness: objectness.as_ref(),
        },
        config,
    )
}

fn to_gray(values: &[f64], out: &PipelineOutput) -> GrayImage {
    crate::refine::render_saliency(values, out.superpixels.labels())
}

/// Per-stage maps, a per-superpixel CSV, the affinity matrix and the label
/// field.
pub fn dump_stages(dir: &Path, stem: &str, out: &PipelineOutput) -> Result<()> {
    let fgmask: Vec<f64> = (0..out.superpixels.len())
        .map(|i| if out.foreground.contains(i) { 1.0 } else { 0.0 })
        .collect();
    let maps: [(&str, &[f64]); 7] = [
        ("div", &out.divergence.div),
        ("conbp", &out.con_bp),
        ("rare", &out.rare),
        ("fgmask", &fgmask),
        ("confp", &out.con_fp),
        ("scom", &out.s_com),
        ("final", &out.final_scores),
    ];
    for (name, values) in maps {
        let path = dir.join(format!("{stem}_{name}.png"));
        write_gray_png(&path, &to_gray(values, out))?;
    }

    let mut csv = String::from(
        "superpixel,div,conbp,rare,fgmask,confp,scom,delta,cluster,final,bgcost,fgcost\n",
    );
    for i in 0..out.superpixels.len() {
        writeln!(
            csv,
            "{i},{},{},{},{},{},{},{},{},{},{},{}",
            out.divergence.div[i],
            out.con_bp[i],
            out.rare[i],
            fgmask[i],
            out.con_fp[i],
            out.s_com[i],
            u8::from(out.gate.delta[i]),
            out.clusters.assignment[i],
            out.final_scores[i],
            out.background_cost[i],
            out.foreground_cost[i],
        )
        .expect("string write");
    }
    let path = dir.join(format!("{stem}_stages.csv"));
    std::fs::write(&path, csv).map_err(io_err(&path))?;

    let a = &out.affinity.a;
    let mut csv = String::new();
    for i in 0..a.n() {
        let row: Vec<String> = a.row(i).iter().map(|v| v.to_string()).collect();
        csv.push_str(&row.join(","));
        csv.push('\n');
    }
    let path = dir.join(format!("{stem}_affinity.csv"));
    std::fs::write(&path, csv).map_err(io_err(&path))?;

    write_labels_png(&dir.join(format!("{stem}_labels.png")), out.superpixels.labels())
}

/// Where the saliency map for `input` goes. A single input with an explicit
/// `.png` output path is written there; otherwise `output` is a directory.
pub fn output_path(input: &Path, output: &Path, single: bool) -> PathBuf {
    if single && output.extension().is_some_and(|e| e.eq_ignore_ascii_case("png")) {
        output.to_path_buf()
    } else {
        output.join(format!("{}{SALIENCY_SUFFIX}.png", file_stem(input)))
    }
}

/// Detect saliency for every input. Images that fail are reported in the
/// summary and skipped.
pub fn detect(
    inputs: &[PathBuf],
    output: &Path,
    config: &PipelineConfig,
    opts: &DetectOptions,
) -> Result<DetectSummary> {
    config.validate()?;
    let single = inputs.len() == 1;
    let dest_dir = if single && output.extension().is_some_and(|e| e.eq_ignore_ascii_case("png")) {
        output.parent().map(Path::to_path_buf).unwrap_or_default()
    } else {
        output.to_path_buf()
    };
    if !dest_dir.as_os_str().is_empty() {
        std::fs::create_dir_all(&dest_dir).map_err(io_err(&dest_dir))?;
    }
    let threads = if opts.jobs == 0 {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    } else {
        opts.jobs
    };
    let results = with_threads(threads, || {
        map_slice(inputs, |path| -> Result<PathBuf> {
            let out = run_file(
                path,
                config,
                opts.edge_dir.as_deref(),
                opts.objectness_dir.as_deref(),
            )?;
            let dest = output_path(path, output, single);
            write_gray_png(&dest, &out.saliency)?;
            if opts.dump_stages {
                dump_stages(&dest_dir, &file_stem(path), &out)?;
            }
            Ok(dest)
        })
    });
    let mut summary = DetectSummary::default();
    for (path, r) in inputs.iter().zip(results) {
        match r {
            Ok(dest) => summary.written.push(dest),
            Err(e) => {
                log::warn!("skipping {}: {e}", path.display());
                summary.failed.push((path.clone(), e.to_string()));
            }
        }
    }
    Ok(summary)
}

fn images_by_stem(dir: &Path, strip_suffix: bool) -> Result<BTreeMap<String, PathBuf>> {
    let mut map = BTreeMap::new();
    for path in collect_inputs(dir)? {
        let mut stem = file_stem(&path);
        if strip_suffix {
            if let Some(s) = stem.strip_suffix(SALIENCY_SUFFIX) {
                stem = s.to_string();
            }
        }
        if let Some(prev) = map.insert(stem.clone(), path.clone()) {
            return Err(Error::Dataset(format!(
                "stem collision for '{stem}': {} and {}",
                prev.display(),
                path.display()
            )));
        }
    }
    Ok(map)
}

/// Pair saliency maps with ground-truth masks by stem. A trailing
/// `_saliency` on prediction stems is ignored.
pub fn pair_by_stem(pred_dir: &Path, gt_dir: &Path) -> Result<Vec<(String, PathBuf, PathBuf)>> {
    let preds = images_by_stem(pred_dir, true)?;
    let gts = images_by_stem(gt_dir, false)?;
    let pairs: Vec<_> = preds
        .into_iter()
        .filter_map(|(stem, p)| gts.get(&stem).map(|g| (stem, p, g.clone())))
        .collect();
    if pairs.is_empty() {
        return Err(Error::Dataset(format!(
            "no prediction/ground-truth pairs between {} and {}",
            pred_dir.display(),
            gt_dir.display()
        )));
    }
    Ok(pairs)
}

pub fn evaluate_pairs(pairs: &[(String, PathBuf, PathBuf)]) -> Result<EvalReport> {
    let metrics = map_slice(pairs, |(stem, pred, gt)| {
        let s = read_gray(pred)?;
        let g = BinaryMask::from_gray(&read_gray(gt)?);
        evaluate_image(stem, &s, &g)
    });
    Ok(aggregate(metrics.into_iter().collect::<Result<Vec<_>>>()?))
}

pub fn evaluate_dirs(pred_dir: &Path, gt_dir: &Path) -> Result<EvalReport> {
    evaluate_pairs(&pair_by_stem(pred_dir, gt_dir)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub image: PathBuf,
    pub gt: PathBuf,
    pub edge: Option<PathBuf>,
    pub objectness: Option<PathBuf>,
}

/// CSV with header `image,gt,edge,objectness`; the last two columns may be
/// empty. Relative paths resolve against the manifest's directory.
pub fn read_manifest(path: &Path) -> Result<Vec<ManifestEntry>> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    let base = path.parent().unwrap_or_else(|| Path::new(""));
    let resolve = |s: &str| -> Option<PathBuf> {
        let s = s.trim();
        (!s.is_empty()).then(|| base.join(s))
    };
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Dataset(format!("{}: empty manifest", path.display())))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols.len() < 2 || cols[0] != "image" || cols[1] != "gt" {
        return Err(Error::Dataset(format!(
            "{}: expected header image,gt,edge,objectness",
            path.display()
        )));
    }
    let mut entries = Vec::new();
    for (n, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        let get = |i: usize| fields.get(i).and_then(|s| resolve(s));
        match (get(0), get(1)) {
            (Some(image), Some(gt)) => entries.push(ManifestEntry {
                image,
                gt,
                edge: get(2),
                objectness: get(3),
            }),
            _ => {
                return Err(Error::Dataset(format!(
                    "{}: row {} needs image and gt",
                    path.display(),
                    n + 2
                )))
            }
        }
    }
    if entries.is_empty() {
        return Err(Error::Dataset(format!("{}: no rows", path.display())));
    }
    Ok(entries)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variant {
    pub name: String,
    pub overrides: Vec<(String, String)>,
}

impl Variant {
    pub fn apply(&self, base: &PipelineConfig) -> Result<PipelineConfig> {
        let mut cfg = base.clone();
        for (k, v) in &self.overrides {
            cfg.set(k, v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// `name:key=val,key=val;name2:...`. A variant with no overrides runs the
/// base configuration.
pub fn parse_variants(text: &str) -> Result<Vec<Variant>> {
    let mut out = Vec::new();
    for chunk in text.split(';').map(str::trim).filter(|c| !c.is_empty()) {
        let (name, body) = chunk.split_once(':').unwrap_or((chunk, ""));
        let name = name.trim();
        if name.is_empty() {
            return Err(Error::Config(format!("variant without a name: '{chunk}'")));
        }
        let mut overrides = Vec::new();
        for kv in body.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("variant {name}: expected key=value, got '{kv}'")))?;
            overrides.push((k.trim().to_string(), v.trim().to_string()));
        }
        out.push(Variant {
            name: name.to_string(),
            overrides,
        });
    }
    if out.is_empty() {
        return Err(Error::Config("empty variant list".into()));
    }
    Ok(out)
}

/// Evaluate one configuration over the manifest entries.
pub fn evaluate_manifest(entries: &[ManifestEntry], config: &PipelineConfig) -> Result<EvalReport> {
    let metrics = map_slice(entries, |e| {
        let image = read_rgb(&e.image)?;
        let edge = e
            .edge
            .as_deref()
            .map(read_gray)
            .transpose()?
            .map(|g| EdgeMap::from_gray(&g));
        let objectness = e.objectness.as_deref().map(read_gray).transpose()?;
        let out = run_pipeline(
            &image,
            SideInputs {
                edge_map: edge.as_ref(),
                objectness: objectness.as_ref(),
            },
            config,
        )?;
        let gt = BinaryMask::from_gray(&read_gray(&e.gt)?);
        evaluate_image(&file_stem(&e.image), &out.saliency, &gt)
    });
    Ok(aggregate(metrics.into_iter().collect::<Result<Vec<_>>>()?))
}

/// Run every variant, writing `<out>/<name>.csv` (plus curves and summary)
/// and `<out>/ablation.csv`.
pub fn ablate(
    entries: &[ManifestEntry],
    variants: &[Variant],
    base: &PipelineConfig,
    out: &Path,
) -> Result<Vec<(String, Aggregates)>> {
    if variants.is_empty() {
        return Err(Error::Config("empty variant list".into()));
    }
    let configs = variants
        .iter()
        .map(|v| v.apply(base))
        .collect::<Result<Vec<_>>>()?;
    std::fs::create_dir_all(out).map_err(io_err(out))?;
    let mut rows = Vec::new();
    let mut csv = String::from("variant,meanMaxF,meanMAE,meanAUC,imageCount\n");
    for (v, cfg) in variants.iter().zip(&configs) {
        let report = evaluate_manifest(entries, cfg)?;
        write_report(&out.join(format!("{}.csv", v.name)), &report)?;
        let a = &report.aggregates;
        writeln!(
            csv,
            "{},{:.6},{:.6},{:.6},{}",
            v.name, a.mean_max_f, a.mean_mae, a.mean_auc, a.image_count
        )
        .expect("string write");
        rows.push((v.name.clone(), report.aggregates));
    }
    let path = out.join("ablation.csv");
    std::fs::write(&path, csv).map_err(io_err(&path))?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variants_parse() {
        let v = parse_variants("base:;noRefine:refine=none, kappa=2 ;seedsAll:seeds=allBorder").unwrap();
        assert_eq!(v.len(), 3);
        assert_eq!(v[0].overrides, vec![]);
        assert_eq!(
            v[1].overrides,
            vec![("refine".into(), "none".into()), ("kappa".into(), "2".into())]
        );
        assert!(parse_variants(" ; ").is_err());
        assert!(parse_variants("x:kappa").is_err());
    }

    #[test]
    fn variant_apply_validates() {
        let v = parse_variants("bad:kappa=banana").unwrap();
        assert!(v[0].apply(&PipelineConfig::default()).is_err());
    }

    #[test]
    fn manifest_resolves_relative_paths() {
        let dir = tempfile::tempdir().unwrap();
        let m = dir.path().join("m.csv");
        std::fs::write(&m, "image,gt,edge,objectness\na.png,gt/a.png,,\nb.png,gt/b.png,e/b.png,\n").unwrap();
        let entries = read_manifest(&m).unwrap();
        assert_eq!(entries.len(), 2);
        assert_eq!(entries[0].gt, dir.path().join("gt/a.png"));
        assert_eq!(entries[0].edge, None);
        assert_eq!(entries[1].edge, Some(dir.path().join("e/b.png")));
    }

    #[test]
    fn output_path_rules() {
        let p = output_path(Path::new("in/cat.jpg"), Path::new("out"), false);
        assert_eq!(p, Path::new("out/cat_saliency.png"));
        let p = output_path(Path::new("in/cat.jpg"), Path::new("x.png"), true);
        assert_eq!(p, Path::new("x.png"));
    }
}

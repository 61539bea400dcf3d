//! SLIC superpixels: k-means in (L, a, b, x, y) with grid initialization,
//! a fixed number of iterations and connectivity enforcement.

use std::collections::VecDeque;

use super::{extract_features, LabImage, Labels, SuperpixelMap};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlicParams {
    pub n_target: usize,
    pub compactness: f64,
    pub iterations: usize,
}

impl Default for SlicParams {
    fn default() -> Self {
        Self {
            n_target: 250,
            compactness: 10.0,
            iterations: 10,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Center {
    lab: [f64; 3],
    x: f64,
    y: f64,
}

/// Segment and extract features in one step.
pub fn slic_segment(img: &LabImage, params: &SlicParams) -> Result<SuperpixelMap> {
    let labels = slic_labels(img, params)?;
    Ok(extract_features(labels, img))
}

/// Choose a `cols x rows` seed grid whose count is closest to `n` and whose
/// cells are closest to square. Ties prefer more columns.
fn grid_shape(n: usize, w: usize, h: usize) -> (usize, usize) {
    let ideal = (n as f64 * w as f64 / h as f64).sqrt();
    let lo = (ideal.floor() as usize).max(1);
    let mut best: Option<(usize, f64, usize, usize)> = None;
    for cols in [lo, lo + 1] {
        let rows = ((n as f64 / cols as f64).round() as usize).max(1);
        let count_err = (cols * rows).abs_diff(n);
        let aspect = ((w as f64 / cols as f64) / (h as f64 / rows as f64)).ln().abs();
        let better = match best {
            None => true,
            Some((ce, asp, bc, _)) => {
                count_err < ce
                    || (count_err == ce && aspect < asp - 1e-12)
                    || (count_err == ce && (aspect - asp).abs() <= 1e-12 && cols > bc)
            }
        };
        if better {
            best = Some((count_err, aspect, cols, rows));
        }
    }
    let (_, _, cols, rows) = best.expect("at least one candidate");
    (cols, rows)
}

fn lab_dist2(a: [f64; 3], b: [f64; 3]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)
}

fn gradient(img: &LabImage, x: usize, y: usize) -> f64 {
    let (w, h) = (img.width(), img.height());
    let xl = x.saturating_sub(1);
    let xr = (x + 1).min(w - 1);
    let yu = y.saturating_sub(1);
    let yd = (y + 1).min(h - 1);
    lab_dist2(img.pixel(xr, y), img.pixel(xl, y)) + lab_dist2(img.pixel(x, yd), img.pixel(x, yu))
}

/// Run SLIC and return a dense, 4-connected label field.
pub fn slic_labels(img: &LabImage, params: &SlicParams) -> Result<Labels> {
    if params.n_target == 0 {
        return Err(Error::InvalidParameter {
            name: "n_target",
            reason: "must be at least 1".into(),
        });
    }
    if !(params.compactness > 0.0) {
        return Err(Error::InvalidParameter {
            name: "compactness",
            reason: "must be positive".into(),
        });
    }
    let (w, h) = (img.width(), img.height());
    let (cols, rows) = grid_shape(params.n_target, w, h);
    if cols > w || rows > h {
        return Err(Error::ImageTooSmall);
    }
    let k = cols * rows;
    let step = ((w * h) as f64 / k as f64).sqrt();

    let mut centers = Vec::with_capacity(k);
    for r in 0..rows {
        for c in 0..cols {
            let x = (c as f64 + 0.5) * w as f64 / cols as f64 - 0.5;
            let y = (r as f64 + 0.5) * h as f64 / rows as f64 - 0.5;
            let (mut bx, mut by) = (x.round() as usize, y.round() as usize);
            // Move the seed off edges: lowest gradient in its 3x3 window.
            let mut best = gradient(img, bx, by);
            let (cx, cy) = (bx, by);
            let mut moved = false;
            for ny in cy.saturating_sub(1)..=(cy + 1).min(h - 1) {
                for nx in cx.saturating_sub(1)..=(cx + 1).min(w - 1) {
                    let g = gradient(img, nx, ny);
                    if g < best {
                        best = g;
                        bx = nx;
                        by = ny;
                        moved = true;
                    }
                }
            }
            let (sx, sy) = if moved { (bx as f64, by as f64) } else { (x, y) };
            centers.push(Center {
                lab: img.pixel(bx, by),
                x: sx,
                y: sy,
            });
        }
    }

    // Initial assignment: the grid cell each pixel falls into.
    let mut labels: Vec<u32> = Vec::with_capacity(w * h);
    for y in 0..h {
        let r = (y * rows / h).min(rows - 1);
        for x in 0..w {
            let c = (x * cols / w).min(cols - 1);
            labels.push((r * cols + c) as u32);
        }
    }

    let spatial_weight = (params.compactness / step).powi(2);
    let bw = ((w as f64 - 0.5) / step).floor() as usize + 1;
    let bh = ((h as f64 - 0.5) / step).floor() as usize + 1;
    let bucket_of = |v: f64, n: usize| (((v + 0.5) / step).floor().max(0.0) as usize).min(n - 1);

    for _ in 0..params.iterations {
        let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); bw * bh];
        for (i, c) in centers.iter().enumerate() {
            buckets[bucket_of(c.y, bh) * bw + bucket_of(c.x, bw)].push(i);
        }
        let centers_ref = &centers;
        let buckets_ref = &buckets;
        crate::par::for_each_chunk_mut(&mut labels, w, |y, row| {
            let by = bucket_of(y as f64, bh);
            for (x, label) in row.iter_mut().enumerate() {
                let bx = bucket_of(x as f64, bw);
                let p = img.pixel(x, y);
                let mut best = f64::INFINITY;
                let mut best_idx = usize::MAX;
                for nby in by.saturating_sub(1)..=(by + 1).min(bh - 1) {
                    for nbx in bx.saturating_sub(1)..=(bx + 1).min(bw - 1) {
                        for &ci in &buckets_ref[nby * bw + nbx] {
                            let c = &centers_ref[ci];
                            let dx = x as f64 - c.x;
                            let dy = y as f64 - c.y;
                            if dx.abs() > step || dy.abs() > step {
                                continue;
                            }
                            let d = lab_dist2(p, c.lab) + (dx * dx + dy * dy) * spatial_weight;
                            if d < best || (d == best && ci < best_idx) {
                                best = d;
                                best_idx = ci;
                            }
                        }
                    }
                }
                if best_idx != usize::MAX {
                    *label = best_idx as u32;
                }
            }
        });

        let mut sums = vec![[0.0f64; 6]; k];
        for y in 0..h {
            for x in 0..w {
                let l = labels[y * w + x] as usize;
                let p = img.pixel(x, y);
                let s = &mut sums[l];
                s[0] += p[0];
                s[1] += p[1];
                s[2] += p[2];
                s[3] += x as f64;
                s[4] += y as f64;
                s[5] += 1.0;
            }
        }
        for (c, s) in centers.iter_mut().zip(&sums) {
            if s[5] > 0.0 {
                c.lab = [s[0] / s[5], s[1] / s[5], s[2] / s[5]];
                c.x = s[3] / s[5];
                c.y = s[4] / s[5];
            }
        }
    }

    enforce_connectivity(&mut labels, w, h, k);
    let count = compact_labels(&mut labels, k);
    Ok(Labels::from_dense(w, h, labels, count))
}

/// Keep the largest 4-connected component of every label. Every other
/// component is merged into the largest adjacent label whose pixels are
/// already settled (ties go to the lowest label).
fn enforce_connectivity(labels: &mut [u32], w: usize, h: usize, k: usize) {
    let n = w * h;
    let mut comp = vec![usize::MAX; n];
    let mut comps: Vec<(u32, Vec<usize>)> = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let label = labels[start];
        let mut pixels = vec![start];
        comp[start] = id;
        queue.push_back(start);
        while let Some(p) = queue.pop_front() {
            let (x, y) = (p % w, p / w);
            let mut visit = |q: usize| {
                if comp[q] == usize::MAX && labels[q] == label {
                    comp[q] = id;
                    pixels.push(q);
                    queue.push_back(q);
                }
            };
            if x > 0 {
                visit(p - 1);
            }
            if x + 1 < w {
                visit(p + 1);
            }
            if y > 0 {
                visit(p - w);
            }
            if y + 1 < h {
                visit(p + w);
            }
        }
        comps.push((label, pixels));
    }

    let mut main_comp = vec![usize::MAX; k];
    for (id, (label, pixels)) in comps.iter().enumerate() {
        let m = &mut main_comp[*label as usize];
        if *m == usize::MAX || comps[*m].1.len() < pixels.len() {
            *m = id;
        }
    }
    let mut area = vec![0usize; k];
    let mut settled = vec![false; n];
    let mut pending = Vec::new();
    for (id, (label, pixels)) in comps.iter().enumerate() {
        if main_comp[*label as usize] == id {
            area[*label as usize] += pixels.len();
            for &p in pixels {
                settled[p] = true;
            }
        } else {
            pending.push(id);
        }
    }

    while !pending.is_empty() {
        let mut still = Vec::new();
        for id in pending {
            let pixels = &comps[id].1;
            let mut target: Option<u32> = None;
            for &p in pixels {
                let (x, y) = (p % w, p / w);
                let mut consider = |q: usize| {
                    if settled[q] && comp[q] != id {
                        let l = labels[q];
                        target = Some(match target {
                            None => l,
                            Some(t) => {
                                let (at, al) = (area[t as usize], area[l as usize]);
                                if al > at || (al == at && l < t) {
                                    l
                                } else {
                                    t
                                }
                            }
                        });
                    }
                };
                if x > 0 {
                    consider(p - 1);
                }
                if x + 1 < w {
                    consider(p + 1);
                }
                if y > 0 {
                    consider(p - w);
                }
                if y + 1 < h {
                    consider(p + w);
                }
            }
            match target {
                Some(t) => {
                    for &p in pixels {
                        labels[p] = t;
                        settled[p] = true;
                    }
                    area[t as usize] += pixels.len();
                }
                None => still.push(id),
            }
        }
        pending = still;
    }
}

/// Renumber used labels to `0..count`, preserving order.
fn compact_labels(labels: &mut [u32], k: usize) -> usize {
    let mut map = vec![u32::MAX; k];
    for &l in labels.iter() {
        map[l as usize] = 0;
    }
    let mut next = 0u32;
    for m in map.iter_mut() {
        if *m == 0 {
            *m = next;
            next += 1;
        }
    }
    for l in labels.iter_mut() {
        *l = map[*l as usize];
    }
    next as usize
}

//! Single- and two-level Otsu thresholds on values in [0, 1], quantized to
//! 256 bins with `bin = round(255 * v)`.
//!
//! A threshold at bin `k` splits `bin < k` from `bin >= k`. It is reported
//! as the value `(k - 0.5) / 255`, so `v >= threshold` is exactly
//! `bin(v) >= k`.

pub const BINS: usize = 256;

pub fn quantize(v: f64) -> usize {
    (v.clamp(0.0, 1.0) * 255.0 + 0.5).floor() as usize
}

pub fn histogram(values: &[f64]) -> [u64; BINS] {
    let mut hist = [0u64; BINS];
    for &v in values {
        hist[quantize(v)] += 1;
    }
    hist
}

fn bin_threshold(k: usize) -> f64 {
    (k as f64 - 0.5) / 255.0
}

fn constant_value(values: &[f64]) -> Option<f64> {
    let first = *values.first()?;
    values.iter().all(|&v| v == first).then_some(first)
}

fn prefix(hist: &[u64; BINS]) -> ([u64; BINS + 1], [u64; BINS + 1]) {
    let mut count = [0u64; BINS + 1];
    let mut moment = [0u64; BINS + 1];
    for b in 0..BINS {
        count[b + 1] = count[b] + hist[b];
        moment[b + 1] = moment[b] + hist[b] * b as u64;
    }
    (count, moment)
}

// Between-class variance up to terms constant over the split: sum of
// S_c^2 / n_c over non-empty classes.
fn class_term(count: u64, moment: u64) -> f64 {
    if count == 0 {
        0.0
    } else {
        (moment as f64) * (moment as f64) / count as f64
    }
}

/// Best two-level split `(k1, k2)` with `1 <= k1 < k2 <= 255`. Classes are
/// `[0, k1)`, `[k1, k2)` and `[k2, 256)`. Ties go to the lexicographically
/// smallest pair.
pub fn two_level_otsu_bins(hist: &[u64; BINS]) -> (usize, usize) {
    let (count, moment) = prefix(hist);
    let mut best = f64::NEG_INFINITY;
    let mut arg = (1, 2);
    for k1 in 1..BINS - 1 {
        let low = class_term(count[k1], moment[k1]);
        for k2 in k1 + 1..BINS {
            let mid = class_term(count[k2] - count[k1], moment[k2] - moment[k1]);
            let high = class_term(count[BINS] - count[k2], moment[BINS] - moment[k2]);
            let v = low + mid + high;
            if v > best {
                best = v;
                arg = (k1, k2);
            }
        }
    }
    arg
}

/// `(t_low, t_high)` in value space. Constant input returns the constant
/// for both.
pub fn two_level_otsu(values: &[f64]) -> (f64, f64) {
    if let Some(c) = constant_value(values) {
        return (c, c);
    }
    let (k1, k2) = two_level_otsu_bins(&histogram(values));
    (bin_threshold(k1), bin_threshold(k2))
}

/// Best single split `k` in `1..=255`; ties go to the smallest `k`.
pub fn otsu_bin(hist: &[u64; BINS]) -> usize {
    let (count, moment) = prefix(hist);
    let mut best = f64::NEG_INFINITY;
    let mut arg = 1;
    for k in 1..BINS {
        let v = class_term(count[k], moment[k])
            + class_term(count[BINS] - count[k], moment[BINS] - moment[k]);
        if v > best {
            best = v;
            arg = k;
        }
    }
    arg
}

pub fn otsu_threshold(values: &[f64]) -> f64 {
    if let Some(c) = constant_value(values) {
        return c;
    }
    bin_threshold(otsu_bin(&histogram(values)))
}

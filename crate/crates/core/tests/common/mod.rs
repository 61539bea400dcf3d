//! Independent reference implementations and random instance generators
//! shared by the integration tests.

#![allow(dead_code)]

use graphsal::image_core::{BorderSides, SuperpixelFeatures};
use graphsal::matrix::SquareMatrix;
use graphsal::refine::Clustering;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------- graphs

/// Random undirected edge list on `n` nodes with costs in `[0, 1)`.
pub fn random_edges(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Vec<(usize, usize, f64)> {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                edges.push((i, j, rng.gen_range(0.0..1.0)));
            }
        }
    }
    edges
}

/// Minimum over seeds of the cheapest simple path, by exhaustive DFS.
/// Unreachable nodes receive `max finite + max edge cost`.
pub fn brute_force_geodesic(n: usize, edges: &[(usize, usize, f64)], seeds: &[usize]) -> Vec<f64> {
    let mut adj = vec![Vec::new(); n];
    for &(i, j, c) in edges {
        adj[i].push((j, c));
        adj[j].push((i, c));
    }
    fn dfs(
        node: usize,
        cost: f64,
        adj: &[Vec<(usize, f64)>],
        seeds: &[usize],
        visited: &mut Vec<bool>,
        best: &mut f64,
    ) {
        if seeds.contains(&node) {
            *best = best.min(cost);
        }
        for &(next, c) in &adj[node] {
            if !visited[next] {
                visited[next] = true;
                dfs(next, cost + c, adj, seeds, visited, best);
                visited[next] = false;
            }
        }
    }
    let mut out: Vec<f64> = (0..n)
        .map(|start| {
            let mut visited = vec![false; n];
            visited[start] = true;
            let mut best = f64::INFINITY;
            dfs(start, 0.0, &adj, seeds, &mut visited, &mut best);
            best
        })
        .collect();
    let max_finite = out.iter().copied().filter(|v| v.is_finite()).fold(0.0, f64::max);
    let max_edge = edges.iter().map(|e| e.2).fold(0.0, f64::max);
    for v in out.iter_mut().filter(|v| v.is_infinite()) {
        *v = max_finite + max_edge;
    }
    out
}

// ---------------------------------------------------------------- superpixel graphs

pub fn plain_feature(area_fraction: f64) -> SuperpixelFeatures {
    SuperpixelFeatures {
        mean_color: [50.0, 0.0, 0.0],
        centroid: [0.5, 0.5],
        area_fraction,
        pixel_count: 1,
        border: BorderSides::default(),
        neighbors: Vec::new(),
    }
}

/// Random connected adjacency (a random spanning tree plus extra edges)
/// with random area fractions summing to 1 and a random symmetric affinity
/// matrix with unit diagonal.
pub fn random_superpixel_graph(
    rng: &mut ChaCha8Rng,
    n: usize,
    extra_density: f64,
) -> (Vec<SuperpixelFeatures>, SquareMatrix) {
    let mut adj = vec![vec![false; n]; n];
    for i in 1..n {
        let j = rng.gen_range(0..i);
        adj[i][j] = true;
        adj[j][i] = true;
    }
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(extra_density) {
                adj[i][j] = true;
                adj[j][i] = true;
            }
        }
    }
    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let feats = (0..n)
        .map(|i| SuperpixelFeatures {
            neighbors: (0..n).filter(|&j| adj[i][j]).collect(),
            ..plain_feature(raw[i] / total)
        })
        .collect();
    let mut a = SquareMatrix::zeros(n);
    for i in 0..n {
        a.set(i, i, 1.0);
        for j in i + 1..n {
            let v = rng.gen_range(0.001..1.0);
            a.set(i, j, v);
            a.set(j, i, v);
        }
    }
    (feats, a)
}

/// Random clustering numbered by first occurrence.
pub fn random_clustering(rng: &mut ChaCha8Rng, n: usize, max_clusters: usize) -> Clustering {
    let raw: Vec<usize> = (0..n).map(|_| rng.gen_range(0..max_clusters)).collect();
    let mut map = std::collections::HashMap::new();
    let assignment = raw
        .iter()
        .map(|r| {
            let next = map.len();
            *map.entry(*r).or_insert(next)
        })
        .collect();
    Clustering {
        assignment,
        count: map.len(),
    }
}

// ---------------------------------------------------------------- binary energies

/// Foreground energy evaluated straight from its definition.
pub fn direct_energy(
    labels: &[bool],
    con_bp: &[f64],
    rare: &[f64],
    a: &SquareMatrix,
    feats: &[SuperpixelFeatures],
    eta: f64,
) -> f64 {
    let mut e = 0.0;
    for i in 0..labels.len() {
        if labels[i] {
            e += -con_bp[i].clamp(1e-6, 1.0).ln() + eta * feats[i].area_fraction + rare[i];
        }
        for &j in &feats[i].neighbors {
            if j > i && labels[i] != labels[j] {
                e += a.get(i, j);
            }
        }
    }
    e
}

/// Exhaustive minimum over all `2^n` labelings.
pub fn brute_force_min(n: usize, energy: impl Fn(&[bool]) -> f64) -> f64 {
    let mut best = f64::INFINITY;
    let mut labels = vec![false; n];
    for mask in 0u32..(1 << n) {
        for (i, l) in labels.iter_mut().enumerate() {
            *l = mask >> i & 1 == 1;
        }
        best = best.min(energy(&labels));
    }
    best
}

// ---------------------------------------------------------------- linear algebra

/// Solve `m x = b` by Gauss-Jordan elimination with partial pivoting.
pub fn dense_solve(m: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut aug: Vec<Vec<f64>> = m
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| aug[x][col].abs().total_cmp(&aug[y][col].abs()))
            .unwrap();
        aug.swap(col, pivot);
        let p = aug[col][col];
        assert!(p.abs() > 1e-300, "singular system");
        for v in aug[col].iter_mut() {
            *v /= p;
        }
        for r in 0..n {
            if r != col {
                let factor = aug[r][col];
                if factor != 0.0 {
                    for c in col..=n {
                        aug[r][c] -= factor * aug[col][c];
                    }
                }
            }
        }
    }
    aug.iter().map(|r| r[n]).collect()
}

/// Dense `P = W + Q`: `W` holds affinities on adjacency edges, `Q` is 1 for
/// every pair in the same cluster (diagonal included).
pub fn dense_midlevel(feats: &[SuperpixelFeatures], a: &SquareMatrix, c: &Clustering) -> Vec<Vec<f64>> {
    let n = feats.len();
    let mut p = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            if c.assignment[i] == c.assignment[j] {
                p[i][j] += 1.0;
            }
        }
        for &j in &feats[i].neighbors {
            p[i][j] += a.get(i, j);
        }
    }
    p
}

/// System matrix of the ranking solve.
pub fn dense_ranking_matrix(p: &[Vec<f64>], delta: &[bool], mu: f64, normalized: bool) -> Vec<Vec<f64>> {
    let n = p.len();
    let alpha = 1.0 / (1.0 + mu);
    let d: Vec<f64> = p.iter().map(|r| r.iter().sum()).collect();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let gate = if delta[j] { 1.0 } else { 0.0 };
                    let eye = if i == j { 1.0 } else { 0.0 };
                    if normalized {
                        eye - alpha * p[i][j] * gate / (d[i] * d[j]).sqrt()
                    } else {
                        eye * d[i] - alpha * p[i][j] * gate
                    }
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(m: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    m.iter().map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

// ---------------------------------------------------------------- thresholds

/// Two-level Otsu by direct search over every `(k1, k2)` pair, comparing
/// between-class scores as exact rationals. Classes are `[0,k1)`,
/// `[k1,k2)`, `[k2,256)`; the first maximal pair in lexicographic order wins.
pub fn brute_force_two_level_otsu(hist: &[u64; 256]) -> (usize, usize) {
    // sum over classes of S_c^2 / n_c as (numerator, denominator)
    fn score(classes: [(u128, u128); 3]) -> (u128, u128) {
        let mut num = 0u128;
        let mut den = 1u128;
        for (n, s) in classes {
            if n == 0 {
                continue;
            }
            // num/den + s^2/n
            num = num * n + s * s * den;
            den *= n;
        }
        (num, den)
    }
    let total_n: u128 = hist.iter().map(|&h| h as u128).sum();
    let total_s: u128 = hist.iter().enumerate().map(|(b, &h)| b as u128 * h as u128).sum();
    let mut best: Option<((u128, u128), (usize, usize))> = None;
    for k1 in 1..255 {
        let (mut n0, mut s0) = (0u128, 0u128);
        for b in 0..k1 {
            n0 += hist[b] as u128;
            s0 += b as u128 * hist[b] as u128;
        }
        let (mut n1, mut s1) = (0u128, 0u128);
        for k2 in k1 + 1..256 {
            let b = k2 - 1;
            n1 += hist[b] as u128;
            s1 += b as u128 * hist[b] as u128;
            let n2 = total_n - n0 - n1;
            let s2 = total_s - s0 - s1;
            let v = score([(n0, s0), (n1, s1), (n2, s2)]);
            let better = match best {
                None => true,
                Some(((bn, bd), _)) => v.0 * bd > bn * v.1,
            };
            if better {
                best = Some((v, (k1, k2)));
            }
        }
    }
    best.unwrap().1
}

// ---------------------------------------------------------------- metrics

/// ROC-AUC as the Mann-Whitney statistic with ties counted as one half.
pub fn rank_auc(scores: &[u8], truth: &[bool]) -> f64 {
    let pos: Vec<u8> = scores.iter().zip(truth).filter(|t| *t.1).map(|t| *t.0).collect();
    let neg: Vec<u8> = scores.iter().zip(truth).filter(|t| !*t.1).map(|t| *t.0).collect();
    let mut wins = 0.0;
    for &p in &pos {
        for &q in &neg {
            wins += if p > q {
                1.0
            } else if p == q {
                0.5
            } else {
                0.0
            };
        }
    }
    wins / (pos.len() * neg.len()) as f64
}

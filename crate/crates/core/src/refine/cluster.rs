use crate::image_core::SuperpixelFeatures;
use crate::matrix::SquareMatrix;

/// Superpixel to cluster assignment with clusters numbered `0..count` in
/// order of their lowest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clustering {
    pub assignment: Vec<usize>,
    pub count: usize,
}

impl Clustering {
    pub fn singletons(n: usize) -> Self {
        Self {
            assignment: (0..n).collect(),
            count: n,
        }
    }

    pub fn same(&self, i: usize, j: usize) -> bool {
        self.assignment[i] == self.assignment[j]
    }

    /// Members of every cluster, ascending.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut m = vec![Vec::new(); self.count];
        for (i, &c) in self.assignment.iter().enumerate() {
            m[c].push(i);
        }
        m
    }
}

fn lab_distance(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// Agglomerative color clustering over the adjacency graph. The adjacent
/// pair of clusters with the smallest mean-color distance (scaled like the
/// normalized color distance) is merged while that distance is below
/// `tau`. Ties go to the lowest index pair.
pub fn midlevel_cluster(feats: &[SuperpixelFeatures], tau: f64) -> Clustering {
    let n = feats.len();
    let scale = {
        let mut m = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                m = m.max(lab_distance(feats[i].mean_color, feats[j].mean_color));
            }
        }
        m
    };
    // Pixel-weighted color sums and counts per live cluster.
    let mut sum: Vec<[f64; 3]> = feats
        .iter()
        .map(|f| f.mean_color.map(|c| c * f.pixel_count as f64))
        .collect();
    let mut weight: Vec<f64> = feats.iter().map(|f| f.pixel_count as f64).collect();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut adj: Vec<std::collections::BTreeSet<usize>> = feats
        .iter()
        .map(|f| f.neighbors.iter().copied().collect())
        .collect();
    let mean = |s: [f64; 3], w: f64| s.map(|c| c / w);

    loop {
        let mut best: Option<(f64, usize, usize)> = None;
        for a in 0..n {
            if parent[a] != a {
                continue;
            }
            for &b in adj[a].range(a + 1..) {
                let d = if scale > 0.0 {
                    lab_distance(mean(sum[a], weight[a]), mean(sum[b], weight[b])) / scale
                } else {
                    0.0
                };
                if best.is_none_or(|(bd, _, _)| d < bd) {
                    best = Some((d, a, b));
                }
            }
        }
        match best {
            Some((d, a, b)) if d < tau => {
                parent[b] = a;
                for c in 0..3 {
                    sum[a][c] += sum[b][c];
                }
                weight[a] += weight[b];
                let moved = std::mem::take(&mut adj[b]);
                for c in moved {
                    adj[c].remove(&b);
                    if c != a {
                        adj[c].insert(a);
                        adj[a].insert(c);
                    }
                }
                adj[a].remove(&b);
                adj[a].remove(&a);
            }
            _ => break,
        }
    }

    let find = |mut i: usize| {
        while parent[i] != i {
            i = parent[i];
        }
        i
    };
    let mut ids = vec![usize::MAX; n];
    let mut next = 0;
    let assignment = (0..n)
        .map(|i| {
            let r = find(i);
            if ids[r] == usize::MAX {
                ids[r] = next;
                next += 1;
            }
            ids[r]
        })
        .collect();
    Clustering {
        assignment,
        count: next,
    }
}

/// Mid-level similarity `P = W + Q`: `W` keeps affinities between spatial
/// neighbours, `Q` is 1 for superpixels sharing a cluster (diagonal
/// included). Stored sparsely.
#[derive(Debug, Clone, PartialEq)]
pub struct MidlevelAffinity {
    /// Neighbour weights `w_ij` per row, ascending by `j`.
    pub neighbor_weights: Vec<Vec<(usize, f64)>>,
    pub clusters: Clustering,
    /// Row sums of `P`.
    pub degree: Vec<f64>,
}

impl MidlevelAffinity {
    pub fn new(feats: &[SuperpixelFeatures], a: &SquareMatrix, clusters: Clustering) -> Self {
        let neighbor_weights: Vec<Vec<(usize, f64)>> = feats
            .iter()
            .enumerate()
            .map(|(i, f)| f.neighbors.iter().map(|&j| (j, a.get(i, j))).collect())
            .collect();
        let sizes = clusters.members().iter().map(Vec::len).collect::<Vec<_>>();
        let degree = neighbor_weights
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter().map(|e| e.1).sum::<f64>() + sizes[clusters.assignment[i]] as f64
            })
            .collect();
        Self {
            neighbor_weights,
            clusters,
            degree,
        }
    }

    pub fn n(&self) -> usize {
        self.degree.len()
    }

    pub fn to_dense(&self) -> SquareMatrix {
        let n = self.n();
        let mut p = SquareMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                if self.clusters.same(i, j) {
                    p.set(i, j, 1.0);
                }
            }
            for &(j, w) in &self.neighbor_weights[i] {
                p.set(i, j, p.get(i, j) + w);
            }
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image_core::BorderSides;

    fn feat(color: f64, neighbors: Vec<usize>) -> SuperpixelFeatures {
        SuperpixelFeatures {
            mean_color: [color, 0.0, 0.0],
            centroid: [0.0; 2],
            area_fraction: 0.25,
            pixel_count: 10,
            border: BorderSides::default(),
            neighbors,
        }
    }

    // 2x2 grid: 0 1 / 2 3, tones dark on the left, light on the right.
    fn two_tone() -> Vec<SuperpixelFeatures> {
        vec![
            feat(10.0, vec![1, 2]),
            feat(80.0, vec![0, 3]),
            feat(12.0, vec![0, 3]),
            feat(81.0, vec![1, 2]),
        ]
    }

    #[test]
    fn zero_tau_keeps_singletons() {
        let c = midlevel_cluster(&two_tone(), 0.0);
        assert_eq!(c, Clustering::singletons(4));
    }

    #[test]
    fn uniform_colors_form_one_cluster() {
        let f: Vec<_> = two_tone().into_iter().map(|mut f| {
            f.mean_color = [5.0, 5.0, 5.0];
            f
        }).collect();
        let c = midlevel_cluster(&f, 0.1);
        assert_eq!(c.count, 1);
    }

    #[test]
    fn two_tone_instance_by_hand() {
        let f = two_tone();
        let c = midlevel_cluster(&f, 0.1);
        // max distance 71; first merge (1,3) at 1/71, then (0,2) at 2/71,
        // then the tones are 69.5/71 apart.
        assert_eq!(c.assignment, vec![0, 1, 0, 1]);
        let mut a = SquareMatrix::from_vec(4, vec![0.5; 16]);
        a.set(0, 1, 0.2);
        a.set(1, 0, 0.2);
        let p = MidlevelAffinity::new(&f, &a, c);
        let d = p.to_dense();
        // row 0: w01 = 0.2, w02 = 0.5, q00 = q02 = 1
        assert_eq!(d.row(0), &[1.0, 0.2, 1.5, 0.0]);
        assert_eq!(d.row(3), &[0.0, 1.5, 0.5, 1.0]);
        assert!(d.is_symmetric(0.0));
        assert!((p.degree[0] - 2.7).abs() < 1e-12);
    }
}

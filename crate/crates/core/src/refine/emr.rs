//! Extended manifold ranking: solve `(D - alpha P I_f) f = y` (or the
//! normalized form `(I - alpha D^-1/2 P D^-1/2 I_f) f = y`) by Gauss-Seidel.
//! Both system matrices are non-singular M-matrices, so the iteration
//! converges for any `mu > 0`.

use super::{MidlevelAffinity, NodeGate};
use crate::error::{Error, Result};
use crate::matrix::minmax_normalize;

/// Largest accepted `||M f - y||_inf`.
pub const RESIDUAL_BOUND: f64 = 1e-8;
const TARGET_RESIDUAL: f64 = 1e-12;
const MAX_SWEEPS: usize = 200_000;
const CHECK_EVERY: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Laplacian {
    Normalized,
    #[default]
    Unnormalized,
}

impl std::str::FromStr for Laplacian {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "normalized" => Ok(Self::Normalized),
            "unnormalized" => Ok(Self::Unnormalized),
            other => Err(format!("unknown laplacian `{other}`")),
        }
    }
}

impl std::fmt::Display for Laplacian {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Normalized => "normalized",
            Self::Unnormalized => "unnormalized",
        })
    }
}

struct System<'a> {
    p: &'a MidlevelAffinity,
    alpha: f64,
    /// Diagonal of the base matrix (`D` or `I`).
    base: Vec<f64>,
    /// Row scale `r_i` and column scale `s_j * delta_j` of the propagation term.
    row_scale: Vec<f64>,
    col_scale: Vec<f64>,
}

impl System<'_> {
    fn diag(&self, i: usize) -> f64 {
        // p_ii = 1 (w_ii = 0, q_ii = 1)
        self.base[i] - self.alpha * self.row_scale[i] * self.col_scale[i]
    }

    fn cluster_sums(&self, f: &[f64]) -> Vec<f64> {
        let mut c = vec![0.0; self.p.clusters.count];
        for (i, &k) in self.p.clusters.assignment.iter().enumerate() {
            c[k] += self.col_scale[i] * f[i];
        }
        c
    }

    /// `alpha * r_i * sum_j p_ij * col_j * f_j` over `j != i`.
    fn off_diagonal(&self, i: usize, f: &[f64], clusters: &[f64]) -> f64 {
        let neigh: f64 = self.p.neighbor_weights[i]
            .iter()
            .map(|&(j, w)| w * self.col_scale[j] * f[j])
            .sum();
        let mates = clusters[self.p.clusters.assignment[i]] - self.col_scale[i] * f[i];
        self.alpha * self.row_scale[i] * (neigh + mates)
    }

    fn residual(&self, f: &[f64], y: &[f64]) -> f64 {
        let clusters = self.cluster_sums(f);
        (0..f.len())
            .map(|i| (self.diag(i) * f[i] - self.off_diagonal(i, f, &clusters) - y[i]).abs())
            .fold(0.0, f64::max)
    }
}

/// Raw ranking scores `f` (before normalization).
pub fn emr_solve_raw(
    p: &MidlevelAffinity,
    gate: &NodeGate,
    y: &[f64],
    mu: f64,
    laplacian: Laplacian,
) -> Result<Vec<f64>> {
    let n = p.n();
    if y.len() != n || gate.delta.len() != n {
        return Err(Error::InvalidParameter {
            name: "y",
            reason: "length differs from superpixel count".into(),
        });
    }
    if !(mu > 0.0) {
        return Err(Error::InvalidParameter {
            name: "mu",
            reason: "must be positive".into(),
        });
    }
    let alpha = 1.0 / (1.0 + mu);
    let delta = |j: usize| if gate.delta[j] { 1.0 } else { 0.0 };
    let system = match laplacian {
        Laplacian::Unnormalized => System {
            p,
            alpha,
            base: p.degree.clone(),
            row_scale: vec![1.0; n],
            col_scale: (0..n).map(delta).collect(),
        },
        Laplacian::Normalized => {
            let inv_sqrt: Vec<f64> = p.degree.iter().map(|d| 1.0 / d.sqrt()).collect();
            System {
                p,
                alpha,
                base: vec![1.0; n],
                col_scale: (0..n).map(|j| delta(j) * inv_sqrt[j]).collect(),
                row_scale: inv_sqrt,
            }
        }
    };

    let mut f: Vec<f64> = (0..n).map(|i| y[i] / system.diag(i)).collect();
    let mut clusters = system.cluster_sums(&f);
    let scale = y.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut residual = system.residual(&f, y);
    let mut sweeps = 0;
    while residual > TARGET_RESIDUAL * scale && sweeps < MAX_SWEEPS {
        for _ in 0..CHECK_EVERY {
            for i in 0..n {
                let next = (y[i] + system.off_diagonal(i, &f, &clusters)) / system.diag(i);
                let k = p.clusters.assignment[i];
                clusters[k] += system.col_scale[i] * (next - f[i]);
                f[i] = next;
            }
            // Refresh to keep the running sums from drifting.
            clusters = system.cluster_sums(&f);
        }
        sweeps += CHECK_EVERY;
        residual = system.residual(&f, y);
    }
    if !(residual <= RESIDUAL_BOUND) {
        return Err(Error::SolveFailed {
            residual,
            iterations: sweeps,
        });
    }
    Ok(f)
}

/// Normalized ranking scores `f*` in [0, 1].
pub fn emr_solve(
    p: &MidlevelAffinity,
    gate: &NodeGate,
    y: &[f64],
    mu: f64,
    laplacian: Laplacian,
) -> Result<Vec<f64>> {
    Ok(minmax_normalize(&emr_solve_raw(p, gate, y, mu, laplacian)?))
}

/// Dense row-major `n x n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    /// Build a matrix row by row, possibly in parallel.
    pub fn from_rows(n: usize, row: impl Fn(usize) -> Vec<f64> + Sync + Send) -> Self {
        let rows = crate::par::map_range(n, |i| {
            let r = row(i);
            assert_eq!(r.len(), n, "row {i} has wrong length");
            r
        });
        Self {
            n,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Build a symmetric matrix from a function evaluated on `i <= j`.
    pub fn symmetric(n: usize, f: impl Fn(usize, usize) -> f64 + Sync + Send) -> Self {
        let upper = crate::par::map_range(n, |i| (i..n).map(|j| f(i, j)).collect::<Vec<_>>());
        let mut m = Self::zeros(n);
        for (i, row) in upper.into_iter().enumerate() {
            for (off, v) in row.into_iter().enumerate() {
                let j = i + off;
                m.data[i * n + j] = v;
                m.data[j * n + i] = v;
            }
        }
        m
    }

    pub fn from_vec(n: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), n * n);
        Self { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Element-wise sum.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    /// Min-max normalize all entries to [0, 1]; a constant matrix becomes zeros.
    pub fn minmax_normalized(&self) -> Self {
        Self {
            n: self.n,
            data: minmax_normalize(&self.data),
        }
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| (self.get(i, j) - self.get(j, i)).abs() <= tol))
    }
}

/// Min-max normalize to [0, 1]. Constant (or empty) input maps to zeros.
pub fn minmax_normalize(values: &[f64]) -> Vec<f64> {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let range = hi - lo;
    if !(range > 1e-15) {
        return vec![0.0; values.len()];
    }
    values
        .iter()
        .map(|&v| ((v - lo) / range).clamp(0.0, 1.0))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minmax_endpoints_and_degenerate() {
        assert_eq!(minmax_normalize(&[2.0, 4.0, 3.0]), vec![0.0, 1.0, 0.5]);
        assert_eq!(minmax_normalize(&[7.0, 7.0]), vec![0.0, 0.0]);
        assert!(minmax_normalize(&[]).is_empty());
    }

    #[test]
    fn symmetric_builder_mirrors() {
        let m = SquareMatrix::symmetric(4, |i, j| (i * 10 + j) as f64);
        assert!(m.is_symmetric(0.0));
        assert_eq!(m.get(3, 1), 13.0);
    }
}

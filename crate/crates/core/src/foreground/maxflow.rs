//! Dinic max-flow on real capacities, used for exact minimization of binary
//! energies with non-negative Potts pairwise terms.

use std::collections::VecDeque;

const EPS: f64 = 1e-12;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: f64,
}

#[derive(Debug, Clone)]
pub struct FlowNetwork {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        Self {
            arcs: Vec::new(),
            out: vec![Vec::new(); nodes],
        }
    }

    /// Add `u -> v` with capacity `cap` and `v -> u` with `rev_cap`.
    pub fn add_edge(&mut self, u: usize, v: usize, cap: f64, rev_cap: f64) {
        debug_assert!(cap >= 0.0 && rev_cap >= 0.0);
        self.out[u].push(self.arcs.len());
        self.arcs.push(Arc { to: v, cap });
        self.out[v].push(self.arcs.len());
        self.arcs.push(Arc {
            to: u,
            cap: rev_cap,
        });
    }

    fn levels(&self, s: usize) -> Vec<i64> {
        let mut level = vec![-1; self.out.len()];
        level[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &e in &self.out[u] {
                let a = &self.arcs[e];
                if a.cap > EPS && level[a.to] < 0 {
                    level[a.to] = level[u] + 1;
                    q.push_back(a.to);
                }
            }
        }
        level
    }

    fn augment(&mut self, u: usize, t: usize, pushed: f64, level: &[i64], it: &mut [usize]) -> f64 {
        if u == t {
            return pushed;
        }
        while it[u] < self.out[u].len() {
            let e = self.out[u][it[u]];
            let (to, cap) = (self.arcs[e].to, self.arcs[e].cap);
            if cap > EPS && level[to] == level[u] + 1 {
                let d = self.augment(to, t, pushed.min(cap), level, it);
                if d > 0.0 {
                    self.arcs[e].cap -= d;
                    self.arcs[e ^ 1].cap += d;
                    return d;
                }
            }
            it[u] += 1;
        }
        0.0
    }

    /// Push the maximum flow from `s` to `t` and return its value.
    pub fn max_flow(&mut self, s: usize, t: usize) -> f64 {
        let mut flow = 0.0;
        loop {
            let level = self.levels(s);
            if level[t] < 0 {
                return flow;
            }
            let mut it = vec![0; self.out.len()];
            loop {
                let f = self.augment(s, t, f64::INFINITY, &level, &mut it);
                if f <= 0.0 {
                    break;
                }
                flow += f;
            }
        }
    }

    /// Nodes reachable from `s` in the residual network: the smallest
    /// source side among all minimum cuts.
    pub fn source_side(&self, s: usize) -> Vec<bool> {
        self.levels(s).iter().map(|&l| l >= 0).collect()
    }
}

/// Binary labeling energy: `sum_i unary[i] * x_i + sum_(i,j) w_ij * [x_i != x_j]`
/// with `w_ij >= 0`. `x_i = 1` means foreground.
#[derive(Debug, Clone, PartialEq)]
pub struct PottsEnergy {
    pub unary: Vec<f64>,
    pub pairwise: Vec<(usize, usize, f64)>,
}

impl PottsEnergy {
    pub fn energy(&self, labels: &[bool]) -> f64 {
        let u: f64 = self
            .unary
            .iter()
            .zip(labels)
            .filter(|(_, &l)| l)
            .map(|(u, _)| u)
            .sum();
        let p: f64 = self
            .pairwise
            .iter()
            .filter(|&&(i, j, _)| labels[i] != labels[j])
            .map(|e| e.2)
            .sum();
        u + p
    }

    /// Exact minimizer via s-t min-cut. Among optimal labelings, returns the
    /// one with the fewest foreground nodes.
    pub fn minimize(&self) -> Vec<bool> {
        let n = self.unary.len();
        let (s, t) = (n, n + 1);
        let mut net = FlowNetwork::new(n + 2);
        for (i, &u) in self.unary.iter().enumerate() {
            if u > 0.0 {
                net.add_edge(i, t, u, 0.0);
            } else if u < 0.0 {
                net.add_edge(s, i, -u, 0.0);
            }
        }
        for &(i, j, w) in &self.pairwise {
            if w > 0.0 {
                net.add_edge(i, j, w, w);
            }
        }
        net.max_flow(s, t);
        let mut side = net.source_side(s);
        side.truncate(n);
        side
    }
}

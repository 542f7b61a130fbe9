//! Reverse Cuthill–McKee ordering and envelope (profile) Cholesky.

use std::collections::VecDeque;

use crate::assembly::SparseSymmetricMatrix;
use crate::error::{FemError, Result};

fn adjacency(a: &SparseSymmetricMatrix) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); a.dim];
    for (r, c, _) in a.entries() {
        if r != c {
            adj[r].push(c);
            adj[c].push(r);
        }
    }
    adj
}

fn bfs_levels(adj: &[Vec<usize>], start: usize, level: &mut [usize]) -> (usize, Vec<usize>) {
    level.fill(usize::MAX);
    level[start] = 0;
    let mut queue = VecDeque::from([start]);
    let mut order = Vec::new();
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &w in &adj[v] {
            if level[w] == usize::MAX {
                level[w] = level[v] + 1;
                queue.push_back(w);
            }
        }
    }
    let depth = order.last().map_or(0, |&v| level[v]);
    (depth, order)
}

/// Reverse Cuthill–McKee permutation: `perm[new] = old`.
pub fn rcm(a: &SparseSymmetricMatrix) -> Vec<usize> {
    let n = a.dim;
    let adj = adjacency(a);
    let degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut visited = vec![false; n];
    let mut level = vec![usize::MAX; n];
    let mut perm = Vec::with_capacity(n);
    for seed in 0..n {
        if visited[seed] {
            continue;
        }
        // pseudo-peripheral start: walk to a minimum-degree vertex of the last level
        let mut start = seed;
        let (mut depth, mut order) = bfs_levels(&adj, start, &mut level);
        loop {
            let candidate = order
                .iter()
                .copied()
                .filter(|&v| level[v] == depth)
                .min_by_key(|&v| degree[v])
                .expect("nonempty level");
            let (d, o) = bfs_levels(&adj, candidate, &mut level);
            if d <= depth {
                break;
            }
            (start, depth, order) = (candidate, d, o);
        }
        let first = perm.len();
        perm.push(start);
        visited[start] = true;
        let mut head = first;
        while head < perm.len() {
            let v = perm[head];
            head += 1;
            let mut next: Vec<usize> = adj[v].iter().copied().filter(|&w| !visited[w]).collect();
            next.sort_unstable_by_key(|&w| (degree[w], w));
            for w in next {
                visited[w] = true;
                perm.push(w);
            }
        }
    }
    perm.reverse();
    perm
}

/// Lower Cholesky factor of `P A Pᵀ` stored row by row from each row's first
/// structural nonzero.
#[derive(Debug, Clone)]
pub struct EnvelopeCholesky {
    perm: Vec<usize>,
    first: Vec<usize>,
    start: Vec<usize>,
    values: Vec<f64>,
}

impl EnvelopeCholesky {
    pub fn factor(a: &SparseSymmetricMatrix, perm: Vec<usize>) -> Result<Self> {
        let n = a.dim;
        let mut inv = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut first: Vec<usize> = (0..n).collect();
        for (r, c, _) in a.entries() {
            let (i, j) = (inv[r].max(inv[c]), inv[r].min(inv[c]));
            first[i] = first[i].min(j);
        }
        let mut start = vec![0; n + 1];
        for i in 0..n {
            start[i + 1] = start[i] + (i - first[i] + 1);
        }
        let mut values = vec![0.0; start[n]];
        for (r, c, v) in a.entries() {
            let (i, j) = (inv[r].max(inv[c]), inv[r].min(inv[c]));
            values[start[i] + j - first[i]] += v;
        }
        for i in 0..n {
            let fi = first[i];
            let (done, row) = values.split_at_mut(start[i]);
            let row = &mut row[..i - fi + 1];
            for j in fi..i {
                let fj = first[j];
                let k0 = fi.max(fj);
                let lj = &done[start[j]..start[j + 1]];
                let dot: f64 = row[k0 - fi..j - fi]
                    .iter()
                    .zip(&lj[k0 - fj..j - fj])
                    .map(|(x, y)| x * y)
                    .sum();
                row[j - fi] = (row[j - fi] - dot) / lj[j - fj];
            }
            let d = row[i - fi] - row[..i - fi].iter().map(|x| x * x).sum::<f64>();
            if !(d > 0.0) || !d.is_finite() {
                return Err(FemError::NotPositiveDefinite { pivot: i, value: d });
            }
            row[i - fi] = d.sqrt();
        }
        Ok(Self { perm, first, start, values })
    }

    /// Number of stored factor entries.
    pub fn envelope_size(&self) -> usize {
        self.values.len()
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.values[self.start[i]..self.start[i + 1]]
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.perm.len();
        let mut y: Vec<f64> = self.perm.iter().map(|&o| b[o]).collect();
        for i in 0..n {
            let row = self.row(i);
            let fi = self.first[i];
            let dot: f64 = row[..i - fi].iter().zip(&y[fi..i]).map(|(l, v)| l * v).sum();
            y[i] = (y[i] - dot) / row[i - fi];
        }
        for i in (0..n).rev() {
            let row = self.row(i);
            let fi = self.first[i];
            y[i] /= row[i - fi];
            let xi = y[i];
            for (yk, l) in y[fi..i].iter_mut().zip(&row[..i - fi]) {
                *yk -= l * xi;
            }
        }
        let mut x = vec![0.0; n];
        for (new, &old) in self.perm.iter().enumerate() {
            x[old] = y[new];
        }
        x
    }
}

//! P1 stiffness and consistent mass matrices with Dirichlet elimination.

use nalgebra::DMatrix;

use crate::error::{FemError, Result};
use crate::mesh::Mesh;

/// Symmetric matrix stored as the CSR lower triangle (diagonal included).
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymmetricMatrix {
    pub dim: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub values: Vec<f64>,
}

impl SparseSymmetricMatrix {
    /// Builds the matrix from `(row, col, value)` triples with `col <= row`;
    /// duplicates are summed.
    pub fn from_lower_triplets(dim: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        debug_assert!(triplets.iter().all(|&(r, c, _)| c <= r && r < dim));
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0; dim + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last = None;
        for (r, c, v) in triplets {
            if last == Some((r, c)) {
                *values.last_mut().expect("nonempty") += v;
            } else {
                col_idx.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..dim {
            row_ptr[r + 1] += row_ptr[r];
        }
        Self { dim, row_ptr, col_idx, values }
    }

    /// Iterates the stored lower-triangle entries.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dim).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |p| (r, self.col_idx[p], self.values[p]))
        })
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let (r, c) = if c > r { (c, r) } else { (r, c) };
        let row = &self.col_idx[self.row_ptr[r]..self.row_ptr[r + 1]];
        row.binary_search(&c).map_or(0.0, |p| self.values[self.row_ptr[r] + p])
    }

    /// `y = A x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim];
        for r in 0..self.dim {
            let mut acc = 0.0;
            for p in self.row_ptr[r]..self.row_ptr[r + 1] {
                let (c, v) = (self.col_idx[p], self.values[p]);
                acc += v * x[c];
                if c != r {
                    y[c] += v * x[r];
                }
            }
            y[r] += acc;
        }
        y
    }

    /// `y = |A| x`, entrywise absolute values.
    pub fn abs_mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim];
        for r in 0..self.dim {
            for p in self.row_ptr[r]..self.row_ptr[r + 1] {
                let (c, v) = (self.col_idx[p], self.values[p].abs());
                y[r] += v * x[c];
                if c != r {
                    y[c] += v * x[r];
                }
            }
        }
        y
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut d = DMatrix::zeros(self.dim, self.dim);
        for (r, c, v) in self.entries() {
            d[(r, c)] = v;
            d[(c, r)] = v;
        }
        d
    }
}

/// Stiffness `K`, mass `M`, and the map between free indices and mesh vertices.
#[derive(Debug, Clone)]
pub struct Assembled {
    pub stiffness: SparseSymmetricMatrix,
    pub mass: SparseSymmetricMatrix,
    /// Mesh vertex of each free index.
    pub free_vertices: Vec<usize>,
    /// Free index of each mesh vertex, `None` for Dirichlet vertices.
    pub free_index: Vec<Option<usize>>,
}

/// Element matrices of the P1 triangle with vertices `p`.
pub fn element_matrices(p: [[f64; 2]; 3]) -> Option<([[f64; 3]; 3], [[f64; 3]; 3])> {
    let area2 = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
    let scale = [0, 1, 2]
        .iter()
        .map(|&i| {
            let q = p[(i + 1) % 3];
            (q[0] - p[i][0]).powi(2) + (q[1] - p[i][1]).powi(2)
        })
        .fold(0.0, f64::max);
    if area2 <= 1e-14 * scale || !area2.is_finite() {
        return None;
    }
    let area = area2 / 2.0;
    // ∇φ_i = (y_j - y_k, x_k - x_j) / (2A)
    let grad: [[f64; 2]; 3] = std::array::from_fn(|i| {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        [(p[j][1] - p[k][1]) / area2, (p[k][0] - p[j][0]) / area2]
    });
    let mut ke = [[0.0; 3]; 3];
    let mut me = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            ke[i][j] = area * (grad[i][0] * grad[j][0] + grad[i][1] * grad[j][1]);
            me[i][j] = area / if i == j { 6.0 } else { 12.0 };
        }
    }
    Some((ke, me))
}

/// Assembles `K` and `M` on the vertices not touching a Dirichlet edge.
pub fn assemble(mesh: &Mesh) -> Result<Assembled> {
    let fixed = mesh.dirichlet_vertices();
    let mut free_index = vec![None; mesh.vertices.len()];
    let mut free_vertices = Vec::new();
    for (v, &f) in fixed.iter().enumerate() {
        if !f {
            free_index[v] = Some(free_vertices.len());
            free_vertices.push(v);
        }
    }
    if free_vertices.is_empty() {
        return Err(FemError::NoFreeVertices);
    }
    let mut kt = Vec::with_capacity(mesh.triangles.len() * 6);
    let mut mt = Vec::with_capacity(mesh.triangles.len() * 6);
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let (ke, me) = element_matrices(tri.map(|v| mesh.vertices[v])).ok_or(FemError::DegenerateTriangle(t))?;
        for a in 0..3 {
            let Some(i) = free_index[tri[a]] else { continue };
            for b in 0..3 {
                let Some(j) = free_index[tri[b]] else { continue };
                if j <= i {
                    kt.push((i, j, ke[a][b]));
                    mt.push((i, j, me[a][b]));
                }
            }
        }
    }
    let n = free_vertices.len();
    Ok(Assembled {
        stiffness: SparseSymmetricMatrix::from_lower_triplets(n, kt),
        mass: SparseSymmetricMatrix::from_lower_triplets(n, mt),
        free_vertices,
        free_index,
    })
}

//! Mesh → assembly → eigensolve, and postprocessing of the eigenvectors.

use std::fmt::Write as _;

use crate::assembly::assemble;
use crate::eigen::{solve_eigs, EigenPair};
use crate::error::{FemError, Result};
use crate::mesh::{build_mesh, BoundarySpec, Domain, Mesh, MeshParams};

/// Closed-form function used to fix eigenvector signs: `(index, point) ↦ value`.
pub type Reference<'a> = &'a (dyn Fn(usize, [f64; 2]) -> f64 + Sync);

#[derive(Debug, Clone)]
pub struct MixedSolution {
    pub mesh: Mesh,
    pub pairs: Vec<EigenPair>,
    /// Mesh vertex of each free index.
    pub free_vertices: Vec<usize>,
}

/// Builds the mesh for `bc`, assembles and solves for the `count` smallest eigenpairs.
pub fn solve_mixed(
    domain: Domain,
    bc: BoundarySpec,
    count: usize,
    params: MeshParams,
    tol: f64,
    reference: Option<Reference>,
) -> Result<MixedSolution> {
    let mesh = build_mesh(domain, bc, params)?;
    solve_on_mesh(mesh, count, tol, reference)
}

/// Assembles and solves on a prepared mesh.
///
/// Signs are fixed so that `∫ u_j r_j ≥ 0` for the reference `r_j`, or, without
/// a reference, so that the largest-magnitude coefficient is positive.
pub fn solve_on_mesh(mesh: Mesh, count: usize, tol: f64, reference: Option<Reference>) -> Result<MixedSolution> {
    let sys = assemble(&mesh)?;
    let mut pairs = solve_eigs(&sys.stiffness, &sys.mass, count, tol)?;
    for (j, p) in pairs.iter_mut().enumerate() {
        let score = match reference {
            Some(f) => {
                let r: Vec<f64> = sys.free_vertices.iter().map(|&v| f(j, mesh.vertices[v])).collect();
                sys.mass.mul_vec(&r).iter().zip(&p.vector).map(|(a, b)| a * b).sum()
            }
            None => p.vector.iter().copied().fold(0.0, |best: f64, x| if x.abs() > best.abs() { x } else { best }),
        };
        if score < 0.0 {
            p.vector.iter_mut().for_each(|x| *x = -*x);
        }
    }
    Ok(MixedSolution { mesh, pairs, free_vertices: sys.free_vertices })
}

impl MixedSolution {
    /// Values of eigenvector `j` at every mesh vertex (zero on Dirichlet vertices).
    pub fn nodal_values(&self, j: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.mesh.vertices.len()];
        for (&v, &x) in self.free_vertices.iter().zip(&self.pairs[j].vector) {
            out[v] = x;
        }
        out
    }

    pub fn lambdas(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.lambda).collect()
    }

    /// CSV `vertex_index,x,y,value` for eigenvector `j`.
    pub fn eigenvector_csv(&self, j: usize) -> String {
        let mut s = String::from("vertex_index,x,y,value\n");
        for (i, (v, u)) in self.mesh.vertices.iter().zip(self.nodal_values(j)).enumerate() {
            let _ = writeln!(s, "{i},{:e},{:e},{:e}", v[0], v[1], u);
        }
        s
    }
}

/// Bucket grid over the mesh bounding box for point location.
pub struct Locator<'a> {
    mesh: &'a Mesh,
    origin: [f64; 2],
    cell: [f64; 2],
    dims: [usize; 2],
    buckets: Vec<Vec<usize>>,
}

impl<'a> Locator<'a> {
    pub fn new(mesh: &'a Mesh) -> Self {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for v in &mesh.vertices {
            for d in 0..2 {
                lo[d] = lo[d].min(v[d]);
                hi[d] = hi[d].max(v[d]);
            }
        }
        let side = ((mesh.triangles.len() as f64).sqrt() as usize).clamp(1, 1024);
        let dims = [side, side];
        let cell = [0, 1].map(|d| ((hi[d] - lo[d]) / side as f64).max(f64::MIN_POSITIVE));
        let mut buckets = vec![Vec::new(); side * side];
        for (t, tri) in mesh.triangles.iter().enumerate() {
            let ps = tri.map(|v| mesh.vertices[v]);
            let range = |d: usize| {
                let a = ps.iter().map(|p| p[d]).fold(f64::INFINITY, f64::min);
                let b = ps.iter().map(|p| p[d]).fold(f64::NEG_INFINITY, f64::max);
                let f = |x: f64| (((x - lo[d]) / cell[d]).floor().max(0.0) as usize).min(dims[d] - 1);
                f(a)..=f(b)
            };
            for j in range(1) {
                for i in range(0) {
                    buckets[j * side + i].push(t);
                }
            }
        }
        Self { mesh, origin: lo, cell, dims, buckets }
    }

    /// Triangle containing `p` and its barycentric coordinates.
    pub fn locate(&self, p: [f64; 2]) -> Option<(usize, [f64; 3])> {
        let idx = |d: usize| {
            let x = ((p[d] - self.origin[d]) / self.cell[d]).floor();
            (x >= -1.0 && x <= self.dims[d] as f64).then(|| (x.max(0.0) as usize).min(self.dims[d] - 1))
        };
        let (i, j) = (idx(0)?, idx(1)?);
        self.buckets[j * self.dims[0] + i].iter().find_map(|&t| {
            let b = barycentric(self.mesh.triangles[t].map(|v| self.mesh.vertices[v]), p);
            b.iter().all(|&x| x >= -1e-10).then_some((t, b))
        })
    }

    /// P1 interpolant of nodal `values` at `p`.
    pub fn interpolate(&self, values: &[f64], p: [f64; 2]) -> Result<f64> {
        let (t, b) = self.locate(p).ok_or(FemError::OutsideMesh(p[0], p[1]))?;
        let tri = self.mesh.triangles[t];
        Ok((0..3).map(|i| b[i] * values[tri[i]]).sum())
    }
}

fn barycentric(t: [[f64; 2]; 3], p: [f64; 2]) -> [f64; 3] {
    let det = (t[1][0] - t[0][0]) * (t[2][1] - t[0][1]) - (t[2][0] - t[0][0]) * (t[1][1] - t[0][1]);
    let l1 = ((p[0] - t[0][0]) * (t[2][1] - t[0][1]) - (t[2][0] - t[0][0]) * (p[1] - t[0][1])) / det;
    let l2 = ((t[1][0] - t[0][0]) * (p[1] - t[0][1]) - (p[0] - t[0][0]) * (t[1][1] - t[0][1])) / det;
    [1.0 - l1 - l2, l1, l2]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::Variant;

    #[test]
    fn interpolation_reproduces_linear_functions() {
        let mesh = build_mesh(Domain::HalfDisk, BoundarySpec::new(Variant::Dnd, 0.3), MeshParams::new(0.1, 2)).unwrap();
        let loc = Locator::new(&mesh);
        let f = |p: [f64; 2]| 2.0 * p[0] - 3.0 * p[1] + 0.5;
        let values: Vec<f64> = mesh.vertices.iter().map(|&v| f(v)).collect();
        for p in [[0.0, 0.5], [0.31, 0.01], [-0.7, 0.6], [0.0, 0.0]] {
            assert!((loc.interpolate(&values, p).unwrap() - f(p)).abs() < 1e-12);
        }
        assert!(loc.interpolate(&values, [0.9, 0.9]).is_err());
        assert!(loc.interpolate(&values, [0.0, -0.1]).is_err());
    }
}

//! Smallest eigenpairs of `K u = λ M u` by shift-invert Lanczos, plus a dense
//! reference solver.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::assembly::SparseSymmetricMatrix;
use crate::cholesky::{rcm, EnvelopeCholesky};
use crate::error::{FemError, Result};

pub const DEFAULT_TOL: f64 = 1e-10;
const SEED: u64 = 0x5eed_1a5c;
const FLOOR_FACTOR: f64 = 8.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenPair {
    pub lambda: f64,
    /// Coefficients over the free vertices, `M`-normalized.
    #[serde(skip)]
    pub vector: Vec<f64>,
    /// `‖K u − λ M u‖` in the `M⁻¹` dual norm over `‖u‖_M`.
    pub residual: f64,
    /// Rounding level of `residual`: what a correctly rounded eigenvector
    /// would still show, from `|K||u| + |λ||M||u|`.
    pub residual_floor: f64,
}

impl EigenPair {
    /// Whether the pair meets tolerance `tol`, relative to `max(1, λ)`, or
    /// sits at the rounding floor.
    pub fn converged(&self, tol: f64) -> bool {
        self.residual <= (tol * self.lambda.max(1.0)).max(self.residual_floor)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

struct Operator<'a> {
    k: &'a SparseSymmetricMatrix,
    m: &'a SparseSymmetricMatrix,
    k_factor: EnvelopeCholesky,
    m_factor: EnvelopeCholesky,
}

impl Operator<'_> {
    /// `K⁻¹ M x`.
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.k_factor.solve(&self.m.mul_vec(x))
    }

    fn dual_norm(&self, r: &[f64]) -> f64 {
        dot(r, &self.m_factor.solve(r)).max(0.0).sqrt()
    }

    /// Residual of `(λ, u)` and the level below which rounding of `u` and of
    /// the products makes it meaningless, both relative to `‖u‖_M`.
    fn residual(&self, lambda: f64, u: &[f64]) -> (f64, f64) {
        let mut r = self.k.mul_vec(u);
        axpy(&mut r, -lambda, &self.m.mul_vec(u));
        let abs_u: Vec<f64> = u.iter().map(|x| x.abs()).collect();
        let mut bound = self.k.abs_mul_vec(&abs_u);
        axpy(&mut bound, lambda.abs(), &self.m.abs_mul_vec(&abs_u));
        let norm = dot(u, &self.m.mul_vec(u)).sqrt();
        (self.dual_norm(&r) / norm, FLOOR_FACTOR * f64::EPSILON * self.dual_norm(&bound) / norm)
    }
}

/// The `count` smallest eigenpairs of `K u = λ M u`, ascending, each with
/// residual at most `tol · max(1, λ)`, or at most the rounding level of the
/// residual itself when that is larger (strongly graded meshes).
///
/// Krylov iteration on `K⁻¹ M` in the `M` inner product with full
/// reorthogonalization. The start vector is a fixed-seed random vector
/// smoothed by two applications of `K⁻¹ M`, so every run is reproducible.
pub fn solve_eigs(
    k: &SparseSymmetricMatrix,
    m: &SparseSymmetricMatrix,
    count: usize,
    tol: f64,
) -> Result<Vec<EigenPair>> {
    let n = k.dim;
    if m.dim != n {
        return Err(FemError::Precondition("K and M differ in dimension".into()));
    }
    if count == 0 || 4 * count > n {
        return Err(FemError::Precondition(format!(
            "count {count} must lie in 1..={} for dimension {n}",
            n / 4
        )));
    }
    if !(tol > 0.0) {
        return Err(FemError::Precondition(format!("tolerance must be positive, got {tol}")));
    }
    let perm = rcm(k);
    let op = Operator {
        k,
        m,
        k_factor: EnvelopeCholesky::factor(k, perm.clone())?,
        m_factor: EnvelopeCholesky::factor(m, perm)?,
    };
    let max_iter = (10 * count + 200).min(n);
    let min_iter = (2 * count + 10).min(max_iter);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);

    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut q = random_smooth(&op, &mut rng, &[]);
    let mut worst = f64::INFINITY;

    while basis.len() < max_iter {
        let mq = m.mul_vec(&q);
        let mut w = op.k_factor.solve(&mq);
        let a = dot(&w, &mq);
        axpy(&mut w, -a, &q);
        if let (Some(prev), Some(&b)) = (basis.last(), beta.last()) {
            axpy(&mut w, -b, prev);
        }
        basis.push(q);
        alpha.push(a);
        for _ in 0..2 {
            let mw = m.mul_vec(&w);
            for v in &basis {
                let c = dot(v, &mw);
                axpy(&mut w, -c, v);
            }
        }
        let b = dot(&w, &m.mul_vec(&w)).max(0.0).sqrt();
        let j = basis.len();

        if j >= min_iter || b <= 1e-12 * a.abs() {
            if let Some(pairs) = try_extract(&op, &basis, &alpha, &beta, b, count, tol, &mut worst) {
                return Ok(pairs);
            }
        }
        if b <= 1e-12 * a.abs() {
            // invariant subspace: continue from a fresh direction
            beta.push(0.0);
            q = random_smooth(&op, &mut rng, &basis);
        } else {
            beta.push(b);
            q = w.into_iter().map(|x| x / b).collect();
        }
    }
    Err(FemError::NoConvergence { iterations: basis.len(), residual: worst })
}

/// Random vector, smoothed and `M`-orthonormalized against `basis`.
fn random_smooth(op: &Operator, rng: &mut ChaCha8Rng, basis: &[Vec<f64>]) -> Vec<f64> {
    let n = op.k.dim;
    let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    v = op.apply(&op.apply(&v));
    for _ in 0..2 {
        let mv = op.m.mul_vec(&v);
        for u in basis {
            let c = dot(u, &mv);
            axpy(&mut v, -c, u);
        }
    }
    let norm = dot(&v, &op.m.mul_vec(&v)).sqrt();
    v.iter().map(|x| x / norm).collect()
}

#[allow(clippy::too_many_arguments)]
fn try_extract(
    op: &Operator,
    basis: &[Vec<f64>],
    alpha: &[f64],
    beta: &[f64],
    last_beta: f64,
    count: usize,
    tol: f64,
    worst: &mut f64,
) -> Option<Vec<EigenPair>> {
    let j = basis.len();
    if j < count {
        return None;
    }
    let mut t = DMatrix::zeros(j, j);
    for i in 0..j {
        t[(i, i)] = alpha[i];
        if i + 1 < j {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let mut order: Vec<usize> = (0..j).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let top = &order[..count];
    // cheap estimate first: |β_j s_j| bounds the Ritz residual of K⁻¹M
    for &i in top {
        let theta = eig.eigenvalues[i];
        if !(theta > 0.0) {
            return None;
        }
        let est = (last_beta * eig.eigenvectors[(j - 1, i)]).abs() / theta;
        if est > tol {
            *worst = est;
            return None;
        }
    }
    // Roundoff in the Krylov basis is rough and K amplifies it; one more
    // application of K⁻¹M followed by Rayleigh–Ritz removes it.
    let width = (count + 4).min(j);
    let smoothed: Vec<Vec<f64>> = order[..width]
        .iter()
        .map(|&i| {
            let mut u = vec![0.0; op.k.dim];
            for (c, v) in basis.iter().enumerate() {
                axpy(&mut u, eig.eigenvectors[(c, i)], v);
            }
            op.apply(&u)
        })
        .collect();
    let pairs = rayleigh_ritz(op, &smoothed, count)?;
    *worst = pairs.iter().map(|p| p.residual).fold(0.0, f64::max);
    pairs.iter().all(|p| p.converged(tol)).then_some(pairs)
}

/// Lowest `count` Ritz pairs of `(K, M)` on the span of `vectors`.
fn rayleigh_ritz(op: &Operator, vectors: &[Vec<f64>], count: usize) -> Option<Vec<EigenPair>> {
    let w = vectors.len();
    let kv: Vec<Vec<f64>> = vectors.iter().map(|v| op.k.mul_vec(v)).collect();
    let mv: Vec<Vec<f64>> = vectors.iter().map(|v| op.m.mul_vec(v)).collect();
    let ks = DMatrix::from_fn(w, w, |a, b| 0.5 * (dot(&vectors[a], &kv[b]) + dot(&vectors[b], &kv[a])));
    let ms = DMatrix::from_fn(w, w, |a, b| 0.5 * (dot(&vectors[a], &mv[b]) + dot(&vectors[b], &mv[a])));
    let l = ms.cholesky()?.l();
    let linv = l.try_inverse()?;
    let c = &linv * ks * linv.transpose();
    let eig = SymmetricEigen::new((&c + c.transpose()) * 0.5);
    let coeffs = linv.transpose() * &eig.eigenvectors;
    let mut order: Vec<usize> = (0..w).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    Some(
        order[..count]
            .iter()
            .map(|&i| {
                let lambda = eig.eigenvalues[i];
                let mut u = vec![0.0; op.k.dim];
                for (c, v) in vectors.iter().enumerate() {
                    axpy(&mut u, coeffs[(c, i)], v);
                }
                let (residual, residual_floor) = op.residual(lambda, &u);
                EigenPair { lambda, vector: u, residual, residual_floor }
            })
            .collect(),
    )
}

/// Dense reference: all generalized eigenvalues ascending, with
/// `M`-orthonormal eigenvectors in the columns.
pub fn dense_eigs(k: &SparseSymmetricMatrix, m: &SparseSymmetricMatrix) -> Result<(Vec<f64>, DMatrix<f64>)> {
    if k.dim > 2000 {
        return Err(FemError::Precondition(format!("dense solver limited to dimension 2000, got {}", k.dim)));
    }
    let chol = m
        .to_dense()
        .cholesky()
        .ok_or(FemError::NotPositiveDefinite { pivot: 0, value: f64::NAN })?;
    let l = chol.l();
    let linv = l
        .clone()
        .try_inverse()
        .ok_or(FemError::NotPositiveDefinite { pivot: 0, value: f64::NAN })?;
    let c = &linv * k.to_dense() * linv.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..k.dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = linv.transpose() * eig.eigenvectors.select_columns(&order);
    Ok((values, vectors))
}

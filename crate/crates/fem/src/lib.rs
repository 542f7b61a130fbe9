//! P1 finite-element eigensolver for the Laplacian on the half-square
//! `(-π/2, π/2) × (0, π/2)` and the unit half-disk, with a Neumann or
//! Dirichlet window `[-ε, ε] × {0}` on the bottom edge.

pub mod assembly;
pub mod cholesky;
pub mod eigen;
pub mod error;
pub mod mesh;
pub mod solver;

pub use assembly::{assemble, Assembled, SparseSymmetricMatrix};
pub use eigen::{dense_eigs, solve_eigs, EigenPair, DEFAULT_TOL};
pub use error::{FemError, Result};
pub use mesh::{build_mesh, build_shared_mesh, BoundarySpec, Domain, EdgeTag, Mesh, MeshParams, Variant};
pub use solver::{solve_mixed, solve_on_mesh, MixedSolution};

//! Tensor-grid meshes of the half-square and polar meshes of the half-disk,
//! clustered toward the junction points `(±ε, 0)`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{FemError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Domain {
    /// `(-π/2, π/2) × (0, π/2)`.
    HalfSquare,
    /// `{|x| < 1, x2 > 0}`, approximated by a polygon.
    HalfDisk,
}

impl Domain {
    /// Half-length of the bottom edge.
    pub fn half_width(self) -> f64 {
        match self {
            Domain::HalfSquare => FRAC_PI_2,
            Domain::HalfDisk => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Neumann on the window, Dirichlet elsewhere.
    Dnd,
    /// Dirichlet on the window and the upper boundary, Neumann on the rest of the bottom.
    Ndn,
    FullDirichlet,
    /// Neumann on the whole bottom edge.
    NeumannBottom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EdgeTag {
    Dirichlet,
    Neumann,
}

impl EdgeTag {
    fn name(self) -> &'static str {
        match self {
            EdgeTag::Dirichlet => "D",
            EdgeTag::Neumann => "N",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundarySpec {
    pub variant: Variant,
    /// Half-length of the window `[-ε, ε] × {0}`.
    pub epsilon: f64,
}

impl BoundarySpec {
    pub fn new(variant: Variant, epsilon: f64) -> Self {
        Self { variant, epsilon }
    }

    /// Tag of a boundary edge with midpoint `mid`.
    pub fn tag(&self, mid: [f64; 2]) -> EdgeTag {
        if mid[1] != 0.0 {
            return EdgeTag::Dirichlet;
        }
        let inside = mid[0].abs() < self.epsilon;
        match (self.variant, inside) {
            (Variant::FullDirichlet, _) => EdgeTag::Dirichlet,
            (Variant::NeumannBottom, _) => EdgeTag::Neumann,
            (Variant::Dnd, true) | (Variant::Ndn, false) => EdgeTag::Neumann,
            (Variant::Dnd, false) | (Variant::Ndn, true) => EdgeTag::Dirichlet,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeshParams {
    pub target_h: f64,
    pub grading_levels: u32,
}

impl Default for MeshParams {
    fn default() -> Self {
        Self { target_h: 0.02, grading_levels: 8 }
    }
}

impl MeshParams {
    pub fn new(target_h: f64, grading_levels: u32) -> Self {
        Self { target_h, grading_levels }
    }

    /// Spacing of the innermost graded cell; only meaningful when `grading_levels > 0`.
    pub fn finest_spacing(&self) -> f64 {
        self.target_h * 0.5f64.powi(self.grading_levels as i32)
    }

    fn validate(&self) -> Result<()> {
        if !(1e-3..=0.2).contains(&self.target_h) {
            return Err(FemError::InvalidParameters(format!(
                "target_h must lie in [1e-3, 0.2], got {}",
                self.target_h
            )));
        }
        if self.grading_levels > 12 {
            return Err(FemError::InvalidParameters(format!(
                "grading_levels must lie in 0..=12, got {}",
                self.grading_levels
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryEdge {
    pub vertices: [usize; 2],
    pub tag: EdgeTag,
}

#[derive(Debug, Clone, Serialize)]
pub struct Mesh {
    pub domain: Domain,
    pub bc: BoundarySpec,
    pub vertices: Vec<[f64; 2]>,
    /// Counterclockwise vertex triples.
    pub triangles: Vec<[usize; 3]>,
    pub boundary_edges: Vec<BoundaryEdge>,
    pub h_min: f64,
    pub h_max: f64,
}

/// Sorted 1-D coordinates on `[a, b]` with geometric clusters (ratio 1/2,
/// `levels` levels) on both sides of every point in `centers`, and uniform
/// filling with spacing at most `h` elsewhere. `centers` may include `a`, `b`.
fn graded_line(a: f64, b: f64, centers: &[f64], h: f64, levels: u32) -> Vec<f64> {
    let mut anchors: Vec<f64> = vec![a, b];
    anchors.extend(centers.iter().copied().filter(|&c| c > a && c < b));
    sort_dedup(&mut anchors, 0.0);

    let mut points = anchors.clone();
    for &c in centers {
        let pos = anchors.iter().position(|&x| x == c);
        let Some(pos) = pos else { continue };
        for (neighbor, sign) in [(pos.checked_sub(1), -1.0), (Some(pos + 1), 1.0)] {
            let Some(&other) = neighbor.and_then(|i| anchors.get(i)) else { continue };
            let room = (other - c).abs();
            let hl = h.min(room / 2.0);
            for l in 0..=levels {
                points.push(c + sign * hl * 0.5f64.powi(l as i32));
            }
        }
    }
    sort_dedup(&mut points, 1e-13 * (b - a));

    let mut out = Vec::with_capacity(points.len() * 2);
    for w in points.windows(2) {
        out.push(w[0]);
        let gap = w[1] - w[0];
        let pieces = (gap / h * (1.0 - 1e-9)).ceil().max(1.0) as usize;
        for i in 1..pieces {
            out.push(w[0] + gap * i as f64 / pieces as f64);
        }
    }
    out.push(*points.last().expect("nonempty"));
    out
}

fn sort_dedup(v: &mut Vec<f64>, tol: f64) {
    v.sort_by(f64::total_cmp);
    v.dedup_by(|x, y| (*x - *y).abs() <= tol);
}

fn validate_pivots(domain: Domain, bc: &BoundarySpec, pivots: &[f64], params: &MeshParams) -> Result<()> {
    params.validate()?;
    let limit = domain.half_width() - params.target_h;
    let finest = params.finest_spacing();
    for &e in pivots.iter().chain(std::iter::once(&bc.epsilon)) {
        if !e.is_finite() || e < 0.0 || e >= limit {
            return Err(FemError::InvalidParameters(format!(
                "epsilon {e} must lie in [0, {limit:.4}) for this domain and target_h"
            )));
        }
        if params.grading_levels > 0 && e > 0.0 && e < 4.0 * finest {
            return Err(FemError::InvalidParameters(format!(
                "epsilon {e} is below 4x the finest graded spacing {finest:e}; the junction cell would collapse"
            )));
        }
    }
    if bc.epsilon > 0.0 && !pivots.contains(&bc.epsilon) {
        return Err(FemError::InvalidParameters(format!(
            "epsilon {} is not among the mesh junction points",
            bc.epsilon
        )));
    }
    Ok(())
}

/// Mesh graded toward `(±ε, 0)` with `ε = bc.epsilon`.
pub fn build_mesh(domain: Domain, bc: BoundarySpec, params: MeshParams) -> Result<Mesh> {
    let pivots: Vec<f64> = if bc.epsilon > 0.0 { vec![bc.epsilon] } else { vec![] };
    build_shared_mesh(domain, bc, &pivots, params)
}

/// Mesh graded toward `(±e, 0)` for every `e` in `pivots`, so that one mesh
/// serves a whole ε-sweep; only the boundary tags change between sweep points.
pub fn build_shared_mesh(domain: Domain, bc: BoundarySpec, pivots: &[f64], params: MeshParams) -> Result<Mesh> {
    validate_pivots(domain, &bc, pivots, &params)?;
    let positive: Vec<f64> = pivots.iter().copied().filter(|&e| e > 0.0).collect();
    let (vertices, triangles, boundary) = match domain {
        Domain::HalfSquare => square_grid(&positive, &params),
        Domain::HalfDisk => disk_grid(&positive, &params),
    };
    let mut mesh = Mesh {
        domain,
        bc,
        vertices,
        triangles,
        boundary_edges: boundary
            .into_iter()
            .map(|vertices| BoundaryEdge { vertices, tag: EdgeTag::Dirichlet })
            .collect(),
        h_min: f64::INFINITY,
        h_max: 0.0,
    };
    mesh.retag(bc);
    for t in &mesh.triangles {
        for e in 0..3 {
            let l = dist(mesh.vertices[t[e]], mesh.vertices[t[(e + 1) % 3]]);
            mesh.h_min = mesh.h_min.min(l);
            mesh.h_max = mesh.h_max.max(l);
        }
    }
    Ok(mesh)
}

type Grid = (Vec<[f64; 2]>, Vec<[usize; 3]>, Vec<[usize; 2]>);

fn square_grid(pivots: &[f64], params: &MeshParams) -> Grid {
    let h = params.target_h;
    let centers: Vec<f64> = pivots.iter().flat_map(|&e| [-e, e]).collect();
    let xs = graded_line(-FRAC_PI_2, FRAC_PI_2, &centers, h, params.grading_levels);
    let ys = graded_line(0.0, FRAC_PI_2, &[0.0], h, params.grading_levels);
    let (nx, ny) = (xs.len(), ys.len());
    let id = |i: usize, j: usize| j * nx + i;
    let vertices = ys.iter().flat_map(|&y| xs.iter().map(move |&x| [x, y])).collect();
    let mut triangles = Vec::with_capacity(2 * (nx - 1) * (ny - 1));
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            // diagonals mirror across x1 = 0
            if xs[i] + xs[i + 1] < 0.0 {
                triangles.push([a, b, d]);
                triangles.push([b, c, d]);
            } else {
                triangles.push([a, b, c]);
                triangles.push([a, c, d]);
            }
        }
    }
    let mut boundary = Vec::new();
    for i in 0..nx - 1 {
        boundary.push([id(i, 0), id(i + 1, 0)]);
        boundary.push([id(i + 1, ny - 1), id(i, ny - 1)]);
    }
    for j in 0..ny - 1 {
        boundary.push([id(nx - 1, j), id(nx - 1, j + 1)]);
        boundary.push([id(0, j + 1), id(0, j)]);
    }
    (vertices, triangles, boundary)
}

fn disk_grid(pivots: &[f64], params: &MeshParams) -> Grid {
    let h = params.target_h;
    let levels = params.grading_levels;
    let rs = graded_line(0.0, 1.0, pivots, h, levels);
    // angular clustering at θ = 0, π so that the arc spacing at r = ε matches
    // the radial spacing at the junction
    let theta_levels = pivots
        .iter()
        .map(|&e| (levels as f64 + e.log2()).ceil().clamp(0.0, levels as f64) as u32)
        .max()
        .unwrap_or(0);
    let ths = graded_line(0.0, PI, &[0.0, PI], h, theta_levels);
    let (nr, nt) = (rs.len(), ths.len());
    let id = |i: usize, j: usize| 1 + (i - 1) * nt + j;
    let mut vertices = vec![[0.0, 0.0]];
    for &r in &rs[1..] {
        for (j, &t) in ths.iter().enumerate() {
            vertices.push(if j == 0 {
                [r, 0.0]
            } else if j == nt - 1 {
                [-r, 0.0]
            } else {
                [r * t.cos(), r * t.sin()]
            });
        }
    }
    let mut triangles = Vec::new();
    for j in 0..nt - 1 {
        triangles.push([0, id(1, j), id(1, j + 1)]);
    }
    for i in 1..nr - 1 {
        for j in 0..nt - 1 {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            if ths[j] + ths[j + 1] < PI {
                triangles.push([a, b, c]);
                triangles.push([a, c, d]);
            } else {
                triangles.push([a, b, d]);
                triangles.push([b, c, d]);
            }
        }
    }
    let mut boundary = vec![[0, id(1, 0)], [id(1, nt - 1), 0]];
    for i in 1..nr - 1 {
        boundary.push([id(i, 0), id(i + 1, 0)]);
        boundary.push([id(i + 1, nt - 1), id(i, nt - 1)]);
    }
    for j in 0..nt - 1 {
        boundary.push([id(nr - 1, j), id(nr - 1, j + 1)]);
    }
    (vertices, triangles, boundary)
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

impl Mesh {
    /// Re-tag every boundary edge for a new boundary specification.
    pub fn retag(&mut self, bc: BoundarySpec) {
        for e in &mut self.boundary_edges {
            let [p, q] = e.vertices.map(|v| self.vertices[v]);
            e.tag = bc.tag([(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0]);
        }
        self.bc = bc;
    }

    /// Copy of the mesh with new boundary tags; errors if `(±ε, 0)` are not vertices.
    pub fn with_boundary(&self, bc: BoundarySpec) -> Result<Mesh> {
        if bc.epsilon > 0.0 && !self.has_vertex([bc.epsilon, 0.0]) {
            return Err(FemError::InvalidParameters(format!(
                "epsilon {} is not a junction vertex of this mesh",
                bc.epsilon
            )));
        }
        let mut m = self.clone();
        m.retag(bc);
        Ok(m)
    }

    pub fn has_vertex(&self, p: [f64; 2]) -> bool {
        self.vertices.contains(&p)
    }

    /// Vertices lying on a Dirichlet edge.
    pub fn dirichlet_vertices(&self) -> Vec<bool> {
        let mut fixed = vec![false; self.vertices.len()];
        for e in &self.boundary_edges {
            if e.tag == EdgeTag::Dirichlet {
                fixed[e.vertices[0]] = true;
                fixed[e.vertices[1]] = true;
            }
        }
        fixed
    }

    /// Signed area of triangle `t`.
    pub fn area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t].map(|v| self.vertices[v]);
        0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
    }

    /// Plain-text export: a header line, then vertex, triangle and edge lines.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "vertices {} triangles {} edges {}",
            self.vertices.len(),
            self.triangles.len(),
            self.boundary_edges.len()
        );
        for v in &self.vertices {
            let _ = writeln!(s, "{:e} {:e}", v[0], v[1]);
        }
        for t in &self.triangles {
            let _ = writeln!(s, "{} {} {}", t[0], t[1], t[2]);
        }
        for e in &self.boundary_edges {
            let _ = writeln!(s, "{} {} {}", e.vertices[0], e.vertices[1], e.tag.name());
        }
        s
    }
}

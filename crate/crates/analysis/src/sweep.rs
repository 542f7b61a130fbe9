//! ε-sweeps on a shared mesh, Richardson combination, and monotonicity checks.

use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use junction_fem::{build_mesh, build_shared_mesh, solve_on_mesh, BoundarySpec, Domain, MeshParams, Variant};

use crate::error::{AnalysisError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub epsilon: f64,
    /// 1-based eigenvalue index.
    pub index: usize,
    pub lambda: f64,
    pub residual: f64,
    pub n_dof: usize,
    pub h_min: f64,
}

/// Rows grouped by ε (strictly monotone, unique), indices `1..=n` within each group.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepTable {
    rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn new(rows: Vec<SweepRow>) -> Result<Self> {
        let t = Self { rows };
        let eps = t.epsilons();
        let up = eps.windows(2).all(|w| w[1] > w[0]);
        let down = eps.windows(2).all(|w| w[1] < w[0]);
        if !(up || down) {
            return Err(AnalysisError::Invalid("epsilons must be unique and strictly monotone".into()));
        }
        for &e in &eps {
            let idx: Vec<usize> = t.rows.iter().filter(|r| r.epsilon == e).map(|r| r.index).collect();
            if idx.iter().enumerate().any(|(i, &j)| j != i + 1) {
                return Err(AnalysisError::Invalid(format!("indices at epsilon {e} must run 1, 2, ...")));
            }
        }
        Ok(t)
    }

    pub fn rows(&self) -> &[SweepRow] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Distinct ε values in table order.
    pub fn epsilons(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for r in &self.rows {
            if out.last() != Some(&r.epsilon) {
                out.push(r.epsilon);
            }
        }
        out
    }

    /// `(ε, λ_index(ε))` in table order.
    pub fn column(&self, index: usize) -> Vec<(f64, f64)> {
        self.rows.iter().filter(|r| r.index == index).map(|r| (r.epsilon, r.lambda)).collect()
    }

    pub fn at(&self, epsilon: f64) -> Vec<SweepRow> {
        self.rows.iter().filter(|r| r.epsilon == epsilon).copied().collect()
    }

    /// Eigenvalues at one ε in index order.
    pub fn column_values(&self, epsilon: f64) -> Vec<f64> {
        self.rows.iter().filter(|r| r.epsilon == epsilon).map(|r| r.lambda).collect()
    }

    pub fn max_index(&self) -> usize {
        self.rows.iter().map(|r| r.index).max().unwrap_or(0)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        for r in &self.rows {
            wr.serialize(r)?;
        }
        if self.rows.is_empty() {
            wr.write_record(["epsilon", "index", "lambda", "residual", "n_dof", "h_min"])?;
        }
        wr.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let rows = rd.deserialize().collect::<std::result::Result<Vec<SweepRow>, _>>()?;
        Self::new(rows)
    }
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub table: SweepTable,
    /// ε values that could not be solved, with the reason.
    pub failures: Vec<(f64, String)>,
}

/// Solves the `variant` problem for every ε on one mesh graded at all of
/// them, keeping the first `index_count` eigenvalues. ε values that fail are
/// reported in [`SweepReport::failures`] without stopping the others.
pub fn sweep(
    domain: Domain,
    variant: Variant,
    eps_list: &[f64],
    index_count: usize,
    params: MeshParams,
    tol: f64,
) -> Result<SweepReport> {
    if eps_list.is_empty() {
        return Err(AnalysisError::Invalid("empty epsilon list".into()));
    }
    if index_count == 0 {
        return Err(AnalysisError::Invalid("index_count must be positive".into()));
    }
    let up = eps_list.windows(2).all(|w| w[1] > w[0]);
    let down = eps_list.windows(2).all(|w| w[1] < w[0]);
    if !(up || down) {
        return Err(AnalysisError::Invalid("epsilons must be unique and strictly monotone".into()));
    }
    let mut failures = Vec::new();
    let mut good = Vec::new();
    for &e in eps_list {
        match build_mesh(domain, BoundarySpec::new(variant, e), params) {
            Ok(_) => good.push(e),
            Err(err) => failures.push((e, err.to_string())),
        }
    }
    if good.is_empty() {
        return Err(AnalysisError::Invalid(format!("no solvable epsilon: {failures:?}")));
    }
    let base = build_shared_mesh(domain, BoundarySpec::new(variant, good[0]), &good, params)?;
    let results: Vec<_> = good
        .par_iter()
        .map(|&e| {
            let mesh = base.with_boundary(BoundarySpec::new(variant, e))?;
            solve_on_mesh(mesh, index_count, tol, None)
        })
        .collect();
    let mut rows = Vec::new();
    for (&e, res) in good.iter().zip(results) {
        match res {
            Ok(sol) => rows.extend(sol.pairs.iter().enumerate().map(|(j, p)| SweepRow {
                epsilon: e,
                index: j + 1,
                lambda: p.lambda,
                residual: p.residual,
                n_dof: p.vector.len(),
                h_min: base.h_min,
            })),
            Err(err) => failures.push((e, err.to_string())),
        }
    }
    Ok(SweepReport { table: SweepTable::new(rows)?, failures })
}

/// Richardson combination `(2^p λ_fine − λ_coarse) / (2^p − 1)` of two sweeps
/// on meshes with `h` and `h/2`.
pub fn richardson(coarse: &SweepTable, fine: &SweepTable, order: u32) -> Result<SweepTable> {
    if coarse.epsilons() != fine.epsilons() || coarse.rows.len() != fine.rows.len() {
        return Err(AnalysisError::GridMismatch);
    }
    let w = 2f64.powi(order as i32);
    let rows = coarse
        .rows
        .iter()
        .zip(&fine.rows)
        .map(|(c, f)| {
            if c.index != f.index {
                return Err(AnalysisError::GridMismatch);
            }
            Ok(SweepRow {
                lambda: (w * f.lambda - c.lambda) / (w - 1.0),
                residual: c.residual.max(f.residual),
                ..*f
            })
        })
        .collect::<Result<Vec<_>>>()?;
    SweepTable::new(rows)
}

/// Pairs `(ε_small, ε_large, index)` where the eigenvalue moves the wrong way
/// by more than `2·tol·max(1, λ)`: DND eigenvalues must not increase with ε,
/// NDN eigenvalues must not decrease.
pub fn monotonicity_violations(table: &SweepTable, variant: Variant, tol: f64) -> Vec<(f64, f64, usize)> {
    let sign = match variant {
        Variant::Ndn => -1.0,
        _ => 1.0,
    };
    let mut out = Vec::new();
    for index in 1..=table.max_index() {
        let mut col = table.column(index);
        col.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in col.windows(2) {
            let ((e0, l0), (e1, l1)) = (w[0], w[1]);
            if sign * (l1 - l0) > 2.0 * tol * l0.max(1.0) {
                out.push((e0, e1, index));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(epsilon: f64, index: usize, lambda: f64) -> SweepRow {
        SweepRow { epsilon, index, lambda, residual: 0.0, n_dof: 10, h_min: 0.1 }
    }

    #[test]
    fn csv_round_trip() {
        let t = SweepTable::new(vec![row(0.2, 1, 4.5), row(0.2, 2, 7.9), row(0.1, 1, 4.9), row(0.1, 2, 7.99)]).unwrap();
        let csv = t.to_csv();
        assert!(csv.starts_with("epsilon,index,lambda,residual,n_dof,h_min\n"));
        assert_eq!(SweepTable::read_csv(csv.as_bytes()).unwrap(), t);
        assert_eq!(t.epsilons(), vec![0.2, 0.1]);
        assert_eq!(t.column(2), vec![(0.2, 7.9), (0.1, 7.99)]);
    }

    #[test]
    fn rejects_malformed_tables() {
        assert!(SweepTable::new(vec![row(0.1, 1, 1.0), row(0.2, 1, 1.0), row(0.15, 1, 1.0)]).is_err());
        assert!(SweepTable::new(vec![row(0.1, 2, 1.0)]).is_err());
        assert!(SweepTable::new(vec![row(0.1, 1, 1.0), row(0.2, 1, 1.0), row(0.1, 2, 1.0)]).is_err());
    }

    #[test]
    fn richardson_removes_second_order_error() {
        let exact = |e: f64| 5.0 - 2.0 * e * e;
        let coarse = SweepTable::new(vec![row(0.1, 1, exact(0.1) + 4.0 * 0.01), row(0.2, 1, exact(0.2) + 4.0 * 0.01)]).unwrap();
        let fine = SweepTable::new(vec![row(0.1, 1, exact(0.1) + 0.01), row(0.2, 1, exact(0.2) + 0.01)]).unwrap();
        let r = richardson(&coarse, &fine, 2).unwrap();
        for (e, l) in r.column(1) {
            assert!((l - exact(e)).abs() < 1e-14);
        }
        let other = SweepTable::new(vec![row(0.3, 1, 1.0), row(0.2, 1, 1.0)]).unwrap();
        assert!(matches!(richardson(&coarse, &other, 2), Err(AnalysisError::GridMismatch)));
    }

    #[test]
    fn monotonicity_detection() {
        let t = SweepTable::new(vec![row(0.1, 1, 4.9), row(0.2, 1, 4.8), row(0.3, 1, 4.85)]).unwrap();
        assert_eq!(monotonicity_violations(&t, Variant::Dnd, 1e-10), vec![(0.2, 0.3, 1)]);
        assert_eq!(monotonicity_violations(&t, Variant::Ndn, 1e-10), vec![(0.1, 0.2, 1)]);
    }

    #[test]
    fn empty_list_is_an_error() {
        let r = sweep(Domain::HalfSquare, Variant::Dnd, &[], 1, MeshParams::new(0.1, 2), 1e-10);
        assert!(matches!(r, Err(AnalysisError::Invalid(_))));
    }

    #[test]
    fn bad_epsilon_is_reported_without_aborting() {
        let r = sweep(Domain::HalfSquare, Variant::Dnd, &[0.5, 0.3, 1e-5], 1, MeshParams::new(0.1, 2), 1e-10).unwrap();
        assert_eq!(r.table.epsilons(), vec![0.5, 0.3]);
        assert_eq!(r.failures.len(), 1);
        assert_eq!(r.failures[0].0, 1e-5);
    }
}

//! Aharonov–Bohm spectrum as the union of the DND and NDN half spectra.

use crate::error::{AnalysisError, Result};
use crate::sweep::{SweepRow, SweepTable};

/// Per-ε sorted union of two sweeps, re-indexed from 1. Both tables must
/// share the same ε grid; an empty table is the identity.
pub fn merge_ab(dnd: &SweepTable, ndn: &SweepTable) -> Result<SweepTable> {
    if dnd.is_empty() {
        return Ok(ndn.clone());
    }
    if ndn.is_empty() {
        return Ok(dnd.clone());
    }
    let eps = dnd.epsilons();
    if eps != ndn.epsilons() {
        return Err(AnalysisError::GridMismatch);
    }
    let mut rows = Vec::new();
    for e in eps {
        let mut group: Vec<SweepRow> = dnd.at(e);
        group.extend(ndn.at(e));
        group.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
        rows.extend(group.into_iter().enumerate().map(|(j, r)| SweepRow { index: j + 1, ..r }));
    }
    SweepTable::new(rows)
}

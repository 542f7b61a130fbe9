//! ε-sweeps of the mixed eigenvalue problems, asymptotic fits, the
//! Aharonov–Bohm merge of the two half spectra, and blow-up comparisons.

pub mod blowup;
pub mod error;
pub mod fit;
pub mod merge;
pub mod sweep;

pub use blowup::{blowup_compare, blowup_samples, BlowupSample};
pub use error::{AnalysisError, Result};
pub use fit::{fit_log, fit_power, AsymptoticFit, FitKind};
pub use merge::merge_ab;
pub use sweep::{monotonicity_violations, richardson, sweep, SweepReport, SweepRow, SweepTable};

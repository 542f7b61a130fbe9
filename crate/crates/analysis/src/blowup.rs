//! Comparison of a rescaled DND eigenfunction with the limit profile `β Φ_k`.

use serde::Serialize;

use junction_core::exact_spectra::{Flavor, Normalization, VanishingData};
use junction_core::profiles::{phi, CartesianPoint, ProfileId};
use junction_fem::solver::Locator;
use junction_fem::MixedSolution;

use crate::error::{AnalysisError, Result};

pub const ANGLES: usize = 24;
pub const RADII: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlowupSample {
    pub x1: f64,
    pub x2: f64,
    /// `ε^{-k} u(εx)` from the P1 interpolant.
    pub rescaled: f64,
    /// `β Φ_k(x)`.
    pub profile: f64,
}

/// Samples `ε^{-k} u(εx)` and `β Φ_k(x)` on a `24 × 20` polar grid of the
/// upper half-disk of radius `radius`, skipping points within `exclusion` of
/// the window ends `(±1, 0)`.
pub fn blowup_samples(
    solution: &MixedSolution,
    pair: usize,
    epsilon: f64,
    data: &VanishingData,
    radius: f64,
    exclusion: f64,
) -> Result<Vec<BlowupSample>> {
    if data.flavor != Flavor::Sine || data.normalization != Normalization::HalfDomain {
        return Err(AnalysisError::Invalid("blow-up needs sine-flavor, half-domain vanishing data".into()));
    }
    if pair >= solution.pairs.len() {
        return Err(AnalysisError::Invalid(format!("pair {pair} out of range")));
    }
    if !(epsilon > 0.0 && radius > 0.0 && exclusion >= 0.0) {
        return Err(AnalysisError::Invalid("epsilon and radius must be positive".into()));
    }
    let k = ProfileId::new(data.k)?;
    let values = solution.nodal_values(pair);
    let loc = Locator::new(&solution.mesh);
    let scale = epsilon.powi(-(data.k as i32));
    let mut out = Vec::with_capacity(ANGLES * RADII);
    for i in 0..ANGLES {
        let t = (i as f64 + 0.5) * std::f64::consts::PI / ANGLES as f64;
        for j in 0..RADII {
            let r = (j as f64 + 0.5) * radius / RADII as f64;
            let (x1, x2) = (r * t.cos(), r * t.sin());
            if (x1 - 1.0).hypot(x2) < exclusion || (x1 + 1.0).hypot(x2) < exclusion {
                continue;
            }
            out.push(BlowupSample {
                x1,
                x2,
                rescaled: scale * loc.interpolate(&values, [epsilon * x1, epsilon * x2])?,
                profile: data.beta * phi(k, CartesianPoint::new(x1, x2)),
            });
        }
    }
    Ok(out)
}

/// Relative RMS difference between the two columns of [`blowup_samples`].
pub fn blowup_compare(
    solution: &MixedSolution,
    pair: usize,
    epsilon: f64,
    data: &VanishingData,
    radius: f64,
    exclusion: f64,
) -> Result<f64> {
    let samples = blowup_samples(solution, pair, epsilon, data, radius, exclusion)?;
    let num: f64 = samples.iter().map(|s| (s.rescaled - s.profile).powi(2)).sum();
    let den: f64 = samples.iter().map(|s| s.profile * s.profile).sum();
    if den == 0.0 {
        return Err(AnalysisError::Invalid("no sample points outside the exclusion disks".into()));
    }
    Ok((num / den).sqrt())
}

//! Least-squares fits of `λ(ε) − λ₀` to power and inverse-log laws.

use serde::{Deserialize, Serialize};

use crate::error::{AnalysisError, Result};
use crate::sweep::SweepTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitKind {
    Power,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticFit {
    pub lambda0: f64,
    pub kind: FitKind,
    /// Log-log slope; zero for the log kind.
    pub exponent_fit: f64,
    pub coefficient_fit: f64,
    pub coefficient_extrapolated: f64,
    pub r_squared: f64,
}

/// Slope, intercept and `r²` of the least-squares line through `(x, y)`.
fn line(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let r2 = if syy > 0.0 { (1.0 - ss_res / syy).clamp(0.0, 1.0) } else { 1.0 };
    (slope, intercept, r2)
}

fn points(table: &SweepTable, index: usize, below_one: bool) -> Result<Vec<(f64, f64)>> {
    let pts: Vec<(f64, f64)> = table
        .column(index)
        .into_iter()
        .filter(|&(e, _)| e > 0.0 && (!below_one || e < 1.0))
        .collect();
    if pts.len() < 3 {
        return Err(AnalysisError::Invalid(format!(
            "need at least 3 distinct positive epsilons for index {index}, got {}",
            pts.len()
        )));
    }
    Ok(pts)
}

/// Fits `λ₀ − λ(ε) ≈ c ε^p`.
///
/// `exponent_fit` and `coefficient_fit` come from the log-log line. The
/// extrapolated coefficient fixes `p` to the nearest integer and fits
/// `(λ₀ − λ(ε))/ε^p` linearly in `ε²`, reporting the value at `ε = 0`.
pub fn fit_power(table: &SweepTable, index: usize, lambda0: f64) -> Result<AsymptoticFit> {
    let pts = points(table, index, false)?;
    let gaps: Vec<f64> = pts.iter().map(|&(_, l)| lambda0 - l).collect();
    let sign = gaps[0].signum();
    if gaps.iter().any(|&g| g == 0.0 || g.signum() != sign) {
        return Err(AnalysisError::MixedSigns(format!("gaps {gaps:?}")));
    }
    let x: Vec<f64> = pts.iter().map(|&(e, _)| e.ln()).collect();
    let y: Vec<f64> = gaps.iter().map(|g| g.abs().ln()).collect();
    let (p, b, r2) = line(&x, &y);
    let n = p.round() as i32;
    let e2: Vec<f64> = pts.iter().map(|&(e, _)| e * e).collect();
    let c: Vec<f64> = pts.iter().zip(&gaps).map(|(&(e, _), g)| g / e.powi(n)).collect();
    let (_, c0, _) = line(&e2, &c);
    Ok(AsymptoticFit {
        lambda0,
        kind: FitKind::Power,
        exponent_fit: p,
        coefficient_fit: sign * b.exp(),
        coefficient_extrapolated: c0,
        r_squared: r2,
    })
}

/// Fits `λ(ε) − λ₀ ≈ a + b/|log ε|`; `coefficient_fit = b`, and the slope
/// of the fit through the origin is `coefficient_extrapolated`.
pub fn fit_log(table: &SweepTable, index: usize, lambda0: f64) -> Result<AsymptoticFit> {
    let pts = points(table, index, true)?;
    let gaps: Vec<f64> = pts.iter().map(|&(_, l)| l - lambda0).collect();
    if gaps.iter().any(|&g| g <= 0.0) {
        return Err(AnalysisError::MixedSigns(format!(
            "log law needs lambda above lambda0 everywhere, gaps {gaps:?}"
        )));
    }
    let x: Vec<f64> = pts.iter().map(|&(e, _)| 1.0 / e.ln().abs()).collect();
    let (b, _, r2) = line(&x, &gaps);
    let through_origin = x.iter().zip(&gaps).map(|(a, g)| a * g).sum::<f64>() / x.iter().map(|a| a * a).sum::<f64>();
    Ok(AsymptoticFit {
        lambda0,
        kind: FitKind::Log,
        exponent_fit: 0.0,
        coefficient_fit: b,
        coefficient_extrapolated: through_origin,
        r_squared: r2,
    })
}

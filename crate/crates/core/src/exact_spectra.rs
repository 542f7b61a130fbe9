//! Exact Dirichlet spectra of the square `(-π/2, π/2)²` and the unit disk,
//! the vanishing data of their eigenfunctions at the origin, and the
//! leading-order expansions of the eigenvalues as the Neumann window (or the
//! pair of Aharonov–Bohm poles) shrinks.

use std::f64::consts::{PI, SQRT_2};

use serde::Serialize;

use crate::combinatorics::{self, central_binom};
use crate::error::{CoreError, Result};
use crate::special_functions::{bessel_j_prime, find_zero};

/// Parity of an eigenfunction in `x2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Symmetric,
    Antisymmetric,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub value: f64,
    /// `(m, n)` for the square, `(n, k)` for the disk.
    pub label: (u32, u32),
    pub parity: Parity,
    pub multiplicity: u32,
}

/// Which of the two half-domain problems an eigenvalue belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HalfProblem {
    /// Dirichlet everywhere except a Neumann window on the bottom.
    Dnd,
    /// Dirichlet on the window and the upper boundary, Neumann elsewhere on the bottom.
    Ndn,
}

const MAX_SQUARE_COUNT: usize = 10_000;
const MAX_DISK_COUNT: usize = 50;

fn check_count(count: usize, max: usize) -> Result<()> {
    if count == 0 || count > max {
        return Err(CoreError::OutOfRange(format!(
            "count must lie in 1..={max}, got {count}"
        )));
    }
    Ok(())
}

fn x2_parity(n: u32) -> Parity {
    if n % 2 == 0 {
        Parity::Antisymmetric
    } else {
        Parity::Symmetric
    }
}

/// Sorted entries for all `(m, n)` with `m, n >= 1` produced by `value`,
/// where `index_of(n)` maps the enumeration index to the `x2` label.
fn lattice_spectrum<F, G>(count: usize, value: F, label_n: G) -> Vec<SpectrumEntry>
where
    F: Fn(u32, u32) -> u32,
    G: Fn(u32) -> u32,
{
    let mut side = 8u32;
    loop {
        let mut pairs: Vec<(u32, u32, u32)> = (1..=side)
            .flat_map(|m| (1..=side).map(move |n| (m, n)))
            .map(|(m, n)| (value(m, n), m, label_n(n)))
            .collect();
        pairs.sort_by_key(|&(v, m, n)| (v, x2_parity(n) == Parity::Symmetric, m));
        // any pair outside the enumerated box has value above this bound
        let bound = value(side + 1, 1).min(value(1, side + 1));
        if pairs.len() >= count && pairs[count - 1].0 < bound {
            return pairs
                .iter()
                .take(count)
                .map(|&(v, m, n)| SpectrumEntry {
                    value: v as f64,
                    label: (m, n),
                    parity: x2_parity(n),
                    multiplicity: pairs.iter().filter(|p| p.0 == v).count() as u32,
                })
                .collect();
        }
        side *= 2;
    }
}

/// First `count` Dirichlet eigenvalues `m² + n²` of the square, tagged with
/// `(m, n)` and the `x2`-parity of `(2/π) f_m(x1) f_n(x2)`. Equal values are
/// listed antisymmetric first.
pub fn square_spectrum(count: usize) -> Result<Vec<SpectrumEntry>> {
    check_count(count, MAX_SQUARE_COUNT)?;
    Ok(lattice_spectrum(count, |m, n| m * m + n * n, |n| n))
}

/// Limit spectra on the half-square `(-π/2, π/2) × (0, π/2)`: `m² + (2n)²`
/// for the full-Dirichlet limit of the DND problem and `m² + (2n-1)²` for the
/// Neumann-bottom limit of the NDN problem. Labels use full-square indices.
pub fn half_square_limit_spectrum(variant: HalfProblem, count: usize) -> Result<Vec<SpectrumEntry>> {
    check_count(count, MAX_SQUARE_COUNT)?;
    Ok(match variant {
        HalfProblem::Dnd => lattice_spectrum(count, |m, n| m * m + 4 * n * n, |n| 2 * n),
        HalfProblem::Ndn => lattice_spectrum(count, |m, n| m * m + (2 * n - 1) * (2 * n - 1), |n| 2 * n - 1),
    })
}

/// First `count` (≤ 50) Dirichlet eigenvalues of the unit disk, `j_{n,k}²`,
/// with the two copies of each `n >= 1` eigenvalue listed antisymmetric
/// (`sin nt`) first.
pub fn disk_spectrum(count: usize) -> Result<Vec<SpectrumEntry>> {
    check_count(count, MAX_DISK_COUNT)?;
    const ORDERS: u32 = 11;
    const ZEROS: u32 = 6;
    let mut entries = Vec::new();
    for n in 0..=ORDERS {
        for k in 1..=ZEROS {
            let j = find_zero(n, k)?.value;
            let v = j * j;
            if n == 0 {
                entries.push(SpectrumEntry { value: v, label: (0, k), parity: Parity::Symmetric, multiplicity: 1 });
            } else {
                for parity in [Parity::Antisymmetric, Parity::Symmetric] {
                    entries.push(SpectrumEntry { value: v, label: (n, k), parity, multiplicity: 2 });
                }
            }
        }
    }
    entries.sort_by(|a, b| a.value.total_cmp(&b.value));
    let first_missing = find_zero(ORDERS + 1, 1)?.value.min(find_zero(0, ZEROS + 1)?.value);
    if entries[count - 1].value >= first_missing * first_missing {
        return Err(CoreError::OutOfRange(format!("disk spectrum table too short for count {count}")));
    }
    entries.truncate(count);
    Ok(entries)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    /// `β r^k sin(kt)`: the eigenfunction is odd in `x2` (DND side).
    Sine,
    /// `β r^k cos(kt)`: even in `x2` (NDN side).
    Cosine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// Unit L² norm on the whole symmetric domain.
    FullDomain,
    /// Unit L² norm on the upper half.
    HalfDomain,
}

/// Leading polar term `β r^k sin(kt)` (or `cos`) of an eigenfunction at 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VanishingData {
    pub k: u32,
    pub beta: f64,
    pub flavor: Flavor,
    pub normalization: Normalization,
}

impl VanishingData {
    pub fn new(k: u32, beta: f64, flavor: Flavor, normalization: Normalization) -> Result<Self> {
        if k == 0 || k > combinatorics::MAX_ORDER {
            return Err(CoreError::OutOfRange(format!("vanishing order k = {k}")));
        }
        if beta == 0.0 || !beta.is_finite() {
            return Err(CoreError::Precondition(format!("beta must be finite and nonzero, got {beta}")));
        }
        Ok(Self { k, beta, flavor, normalization })
    }

    /// Restricting a full-domain normalized eigenfunction to one half and
    /// renormalizing multiplies it by √2.
    pub fn to_half_domain(self) -> Self {
        match self.normalization {
            Normalization::HalfDomain => self,
            Normalization::FullDomain => Self {
                beta: self.beta * SQRT_2,
                normalization: Normalization::HalfDomain,
                ..self
            },
        }
    }
}

/// Value at the origin of the full-domain normalized square eigenfunction
/// `u_{m,n}`, when it does not vanish there.
pub fn square_point_value(m: u32, n: u32) -> Option<f64> {
    (m % 2 == 1 && n % 2 == 1).then_some(2.0 / PI)
}

/// Order `k` and coefficient `β` of `u_{m,n} = (2/π) f_m(x1) f_n(x2)` at the origin.
pub fn vanishing_data_square(m: u32, n: u32, normalization: Normalization) -> Result<VanishingData> {
    if m == 0 || n == 0 {
        return Err(CoreError::OutOfRange(format!("square index ({m}, {n})")));
    }
    let (mf, nf) = (m as f64, n as f64);
    let full = match (m % 2, n % 2) {
        (1, 1) => {
            return Err(CoreError::NotCovered(format!(
                "u_({m},{n}) does not vanish at the origin (value 2/pi)"
            )))
        }
        (0, 1) => VanishingData::new(1, 2.0 * mf / PI, Flavor::Cosine, Normalization::FullDomain)?,
        (1, 0) => VanishingData::new(1, 2.0 * nf / PI, Flavor::Sine, Normalization::FullDomain)?,
        _ => VanishingData::new(2, mf * nf / PI, Flavor::Sine, Normalization::FullDomain)?,
    };
    Ok(match normalization {
        Normalization::FullDomain => full,
        Normalization::HalfDomain => full.to_half_domain(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExpansionKind {
    /// `λ(ε) = λ₀ + c ε^p`.
    Power,
    /// `λ(ε) = λ₀ + c / |log ε|`.
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticExpansion {
    pub lambda0: f64,
    pub kind: ExpansionKind,
    pub coefficient: f64,
    /// Power of ε; zero for the log kind.
    pub exponent: u32,
}

impl AsymptoticExpansion {
    pub fn power(lambda0: f64, coefficient: f64, exponent: u32) -> Self {
        Self { lambda0, kind: ExpansionKind::Power, coefficient, exponent }
    }

    pub fn log(lambda0: f64, coefficient: f64) -> Self {
        Self { lambda0, kind: ExpansionKind::Log, coefficient, exponent: 0 }
    }

    /// Leading-order prediction at `eps`.
    pub fn evaluate(&self, eps: f64) -> f64 {
        match self.kind {
            ExpansionKind::Power => self.lambda0 + self.coefficient * eps.powi(self.exponent as i32),
            ExpansionKind::Log => self.lambda0 + self.coefficient / eps.ln().abs(),
        }
    }
}

/// Expansion of the DND eigenvalue whose half-domain normalized Dirichlet
/// eigenfunction vanishes like `β r^k sin(kt)`:
/// `λ(ε) = λ₀ - β² kπ/2^{2k-1} C(k-1,⌊(k-1)/2⌋)² ε^{2k}`.
pub fn dnd_expansion(lambda0: f64, v: &VanishingData) -> Result<AsymptoticExpansion> {
    if v.flavor != Flavor::Sine || v.normalization != Normalization::HalfDomain {
        return Err(CoreError::Precondition(
            "DND expansion needs sine-flavored, half-domain normalized vanishing data".into(),
        ));
    }
    let kappa = combinatorics::constants(v.k)?.kappa_lead.to_f64();
    Ok(AsymptoticExpansion::power(lambda0, -v.beta * v.beta * kappa, 2 * v.k))
}

/// Input of [`ndn_expansion`]: either the nonzero value of the full-domain
/// normalized eigenfunction at the origin, or its vanishing data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NdnInput {
    PointValue(f64),
    Vanishing(VanishingData),
}

/// Expansion of an NDN eigenvalue: `2π u(0)² / |log ε|` when `u(0) ≠ 0`,
/// otherwise `+kπβ̂²/4^{k-1} C(k-1,⌊(k-1)/2⌋)² ε^{2k}` for `β̂ r^k cos(kt)`.
pub fn ndn_expansion(lambda0: f64, input: NdnInput) -> Result<AsymptoticExpansion> {
    match input {
        NdnInput::PointValue(u0) => {
            if u0 == 0.0 || !u0.is_finite() {
                return Err(CoreError::Precondition(format!("point value must be finite and nonzero, got {u0}")));
            }
            Ok(AsymptoticExpansion::log(lambda0, 2.0 * PI * u0 * u0))
        }
        NdnInput::Vanishing(v) => {
            if v.flavor != Flavor::Cosine || v.normalization != Normalization::FullDomain {
                return Err(CoreError::Precondition(
                    "NDN power expansion needs cosine-flavored, full-domain normalized vanishing data".into(),
                ));
            }
            let c_k = combinatorics::constants(v.k)?.c_k.to_f64();
            Ok(AsymptoticExpansion::power(lambda0, PI * v.beta * v.beta * c_k, 2 * v.k))
        }
    }
}

/// Single-pole expansion `λ(a_ε) = λ₀ - kπβ₀²/2^{2k-1} C(k-1,⌊(k-1)/2⌋)² cos(kα) ε^k`
/// for an odd number `k` of nodal lines at the pole, in the frame where one
/// nodal line is tangent to the positive `x1` semi-axis.
pub fn monopole_expansion(lambda0: f64, k: u32, beta0: f64, alpha: f64) -> Result<AsymptoticExpansion> {
    if k % 2 == 0 {
        return Err(CoreError::Precondition(format!("monopole order k must be odd, got {k}")));
    }
    if beta0 == 0.0 || !beta0.is_finite() {
        return Err(CoreError::Precondition(format!("beta0 must be finite and nonzero, got {beta0}")));
    }
    let kappa = combinatorics::constants(k)?.kappa_lead.to_f64();
    let c = -kappa * beta0 * beta0 * (k as f64 * alpha).cos();
    Ok(AsymptoticExpansion::power(lambda0, c, k))
}

/// Expansions of the Aharonov–Bohm eigenvalues emanating from `j_{n,k}²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "multiplicity", rename_all = "lowercase")]
pub enum DiskExpansion {
    Simple { expansion: AsymptoticExpansion },
    Double { lower: AsymptoticExpansion, upper: AsymptoticExpansion },
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `2 / |J_0'(j_{0,k})|²` on a log scale for `n = 0`; otherwise the pair
/// `∓ 2n j^{2n} / ((n!)² 4^{2n-1} |J_n'(j)|²) · C(n-1,⌊(n-1)/2⌋)² ε^{2n}`.
pub fn disk_ab_expansions(n: u32, k: u32) -> Result<DiskExpansion> {
    let j = find_zero(n, k)?.value;
    let dj = bessel_j_prime(n, j)?;
    if n == 0 {
        return Ok(DiskExpansion::Simple {
            expansion: AsymptoticExpansion::log(j * j, 2.0 / (dj * dj)),
        });
    }
    let b = central_binom(n) as f64;
    let magnitude = 2.0 * n as f64 * j.powi(2 * n as i32)
        / (factorial(n).powi(2) * 4f64.powi(2 * n as i32 - 1) * dj * dj)
        * b
        * b;
    Ok(DiskExpansion::Double {
        lower: AsymptoticExpansion::power(j * j, -magnitude, 2 * n),
        upper: AsymptoticExpansion::power(j * j, magnitude, 2 * n),
    })
}

/// Symmetric domains with a closed-form Dirichlet spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExactDomain {
    Square,
    Disk,
}

/// Leading-order expansion of the `index`-th (1-based) two-pole
/// Aharonov–Bohm eigenvalue, together with the half problem it comes from.
///
/// Equal eigenvalues split as the antisymmetric (DND) branch taking the lower
/// index and the symmetric (NDN) branch the upper one. Eigenvalues that are
/// not simple within their own half problem are rejected.
pub fn ab_expansion(domain: ExactDomain, index: usize) -> Result<(HalfProblem, AsymptoticExpansion)> {
    if index == 0 {
        return Err(CoreError::OutOfRange("eigenvalue index is 1-based".into()));
    }
    match domain {
        ExactDomain::Square => {
            let all = square_spectrum(index + 8)?;
            let e = all[index - 1];
            let same = all
                .iter()
                .filter(|o| o.value == e.value && o.parity == e.parity)
                .count();
            if same > 1 {
                return Err(CoreError::NotCovered(format!(
                    "eigenvalue {} is not simple in its half problem",
                    e.value
                )));
            }
            let (m, n) = e.label;
            if e.parity == Parity::Antisymmetric {
                let v = vanishing_data_square(m, n, Normalization::HalfDomain)?;
                Ok((HalfProblem::Dnd, dnd_expansion(e.value, &v)?))
            } else if let Some(u0) = square_point_value(m, n) {
                Ok((HalfProblem::Ndn, ndn_expansion(e.value, NdnInput::PointValue(u0))?))
            } else {
                let v = vanishing_data_square(m, n, Normalization::FullDomain)?;
                Ok((HalfProblem::Ndn, ndn_expansion(e.value, NdnInput::Vanishing(v))?))
            }
        }
        ExactDomain::Disk => {
            let e = *disk_spectrum(index)?.last().expect("nonempty");
            let (n, k) = e.label;
            match disk_ab_expansions(n, k)? {
                DiskExpansion::Simple { expansion } => Ok((HalfProblem::Ndn, expansion)),
                DiskExpansion::Double { lower, upper } => Ok(if e.parity == Parity::Antisymmetric {
                    (HalfProblem::Dnd, lower)
                } else {
                    (HalfProblem::Ndn, upper)
                }),
            }
        }
    }
}

//! Exact binomial sums and the constants of the leading-order eigenvalue
//! expansions, kept as rational multiples of powers of π so that the
//! identities between them can be checked with `==`.
//!
//! All integers fit in 128 bits for vanishing orders up to [`MAX_ORDER`]:
//! the largest quantity involved is `40 * C(39,19)^2 < 2^78` over `2^79`.

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{CoreError, Result};

/// Largest vanishing order accepted by [`constants`] and [`sum_s`].
pub const MAX_ORDER: u32 = 40;

/// Largest `n` accepted by [`binom`].
pub const MAX_BINOM_N: u32 = 100;

/// Exact binomial coefficient `C(n, r)`, zero when `r > n`.
///
/// # Panics
///
/// Panics if `n > MAX_BINOM_N`.
pub fn binom(n: u32, r: u32) -> u128 {
    assert!(n <= MAX_BINOM_N, "binom: n = {n} exceeds {MAX_BINOM_N}");
    if r > n {
        return 0;
    }
    let r = r.min(n - r) as u128;
    let n = n as u128;
    let mut acc: u128 = 1;
    for i in 0..r {
        // acc * (n - i) is divisible by (i + 1) since acc = C(n, i)
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `C(k-1, floor((k-1)/2))`, the central binomial coefficient that appears
/// squared in every leading coefficient.
pub fn central_binom(k: u32) -> u128 {
    binom(k - 1, (k - 1) / 2)
}

fn check_order(k: u32) -> Result<()> {
    if k == 0 || k > MAX_ORDER {
        return Err(CoreError::OutOfRange(format!(
            "vanishing order k = {k} must lie in 1..={MAX_ORDER}"
        )));
    }
    Ok(())
}

/// `sum_{j=0}^{floor((k-1)/2)} (k - 2j) C(k, j)^2`, evaluated term by term.
pub fn sum_s(k: u32) -> Result<u128> {
    check_order(k)?;
    let total = (0..=(k - 1) / 2)
        .map(|j| {
            let c = binom(k, j);
            (k - 2 * j) as u128 * c * c
        })
        .sum();
    Ok(total)
}

/// A rational number times `π^pi_power`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PiRational {
    pub coeff: Ratio<i128>,
    pub pi_power: u32,
}

impl PiRational {
    pub fn new(numer: i128, denom: i128, pi_power: u32) -> Self {
        Self {
            coeff: Ratio::new(numer, denom),
            pi_power,
        }
    }

    pub fn rational(r: Ratio<i128>) -> Self {
        Self {
            coeff: r,
            pi_power: 0,
        }
    }

    pub fn times_pi(r: Ratio<i128>) -> Self {
        Self {
            coeff: r,
            pi_power: 1,
        }
    }

    pub fn numer(&self) -> i128 {
        *self.coeff.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.coeff.denom()
    }

    /// Multiply the rational part by an exact rational.
    pub fn scale(self, factor: Ratio<i128>) -> Self {
        Self {
            coeff: self.coeff * factor,
            pi_power: self.pi_power,
        }
    }

    pub fn neg(self) -> Self {
        self.scale(-Ratio::one())
    }

    pub fn to_f64(&self) -> f64 {
        let c = self.numer().to_f64().unwrap_or(f64::NAN) / self.denom().to_f64().unwrap_or(f64::NAN);
        c * std::f64::consts::PI.powi(self.pi_power as i32)
    }
}

impl fmt::Display for PiRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.coeff.is_negative() { "-" } else { "" };
        let n = self.numer().abs();
        let d = self.denom();
        if self.coeff.is_zero() {
            return write!(f, "0");
        }
        let pi = match self.pi_power {
            0 => String::new(),
            1 => "pi".to_string(),
            p => format!("pi^{p}"),
        };
        match (n, d, pi.is_empty()) {
            (n, 1, true) => write!(f, "{sign}{n}"),
            (1, 1, false) => write!(f, "{sign}{pi}"),
            (n, 1, false) => write!(f, "{sign}{n}*{pi}"),
            (n, d, true) => write!(f, "{sign}{n}/{d}"),
            (1, d, false) => write!(f, "{sign}{pi}/{d}"),
            (n, d, false) => write!(f, "{sign}{n}*{pi}/{d}"),
        }
    }
}

/// Every closed-form constant attached to a vanishing order `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantSet {
    pub k: u32,
    /// `sum (k - 2j) C(k, j)^2`.
    pub sum_s: u128,
    /// Limit of `(λ_N - λ_N(ε)) / (β² ε^{2k})`.
    pub kappa_lead: PiRational,
    /// Segment capacity constant `C_k` (rational).
    pub c_k: PiRational,
    /// Minimal energy of the correction profile.
    pub frak_m: PiRational,
    /// Same minimum for the half-profile problem of the single-pole case.
    pub frak_m_prime: PiRational,
    /// `∫_{-1}^{1} ∂_{x2} w_k · w_k dx1`.
    pub junction_integral: PiRational,
}

/// Evaluate every constant for vanishing order `k` (1 ≤ k ≤ [`MAX_ORDER`]).
pub fn constants(k: u32) -> Result<ConstantSet> {
    let sum = sum_s(k)?;
    let b = central_binom(k) as i128;
    let kb2 = k as i128 * b * b;
    let two_pow = 1i128 << (2 * k - 1);
    let four_pow = 1i128 << (2 * (k - 1));

    let junction_integral = PiRational::times_pi(Ratio::new(-kb2, two_pow));
    let half = Ratio::new(1, 2);
    let frak_m = junction_integral.scale(half);
    let frak_m_prime = frak_m.scale(half);
    let kappa_lead = PiRational::times_pi(Ratio::new(kb2, two_pow));
    let c_k = PiRational::rational(Ratio::new(kb2, four_pow));

    Ok(ConstantSet {
        k,
        sum_s: sum,
        kappa_lead,
        c_k,
        frak_m,
        frak_m_prime,
        junction_integral,
    })
}

/// `kπ / 2^{2k-1} · C(k-1, ⌊(k-1)/2⌋)²` as a float.
pub fn kappa_lead_f64(k: u32) -> Result<f64> {
    Ok(constants(k)?.kappa_lead.to_f64())
}

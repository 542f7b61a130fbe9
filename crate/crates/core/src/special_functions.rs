//! Bessel functions of the first kind of integer order and their zeros.
//!
//! `J_n` is summed from its ascending series. Near `z = 60` the individual
//! terms reach `1e24` while the sum is `O(0.1)`, so the series is evaluated
//! exactly in binary fixed point (256 fractional bits) on the exact binary
//! value of `z` and only rounded to `f64` at the end.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{CoreError, Result};

/// Largest |z| accepted by [`bessel_j`] and [`bessel_j_prime`].
pub const MAX_ARGUMENT: f64 = 60.0;
/// Largest order accepted by [`bessel_j`] and [`bessel_j_prime`].
pub const MAX_ORDER: u32 = 20;
/// Largest order and zero index accepted by [`bessel_zero`].
pub const MAX_ZERO_INDEX: u32 = 10;

const FRACTION_BITS: u32 = 256;
const SCAN_STEP: f64 = 0.1;
const BISECTION_WIDTH: f64 = 1e-8;
const NEWTON_STEPS: usize = 5;

/// `k`-th positive zero of `J_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BesselZero {
    pub n: u32,
    pub k: u32,
    pub value: f64,
    /// `|J_n(value)|`.
    pub residual: f64,
}

fn check_range(n: u32, z: f64) -> Result<()> {
    if n > MAX_ORDER || !(z.abs() <= MAX_ARGUMENT) {
        return Err(CoreError::OutOfRange(format!(
            "Bessel evaluation needs n <= {MAX_ORDER} and |z| <= {MAX_ARGUMENT}, got n = {n}, z = {z}"
        )));
    }
    Ok(())
}

/// Exact fixed-point image of a finite non-negative `f64`.
fn to_fixed(z: f64) -> BigInt {
    let bits = z.to_bits();
    let exponent = ((bits >> 52) & 0x7ff) as i64;
    let fraction = bits & ((1u64 << 52) - 1);
    let (mantissa, exp2) = if exponent == 0 {
        (fraction, -1074)
    } else {
        (fraction | (1u64 << 52), exponent - 1075)
    };
    let shift = FRACTION_BITS as i64 + exp2;
    let m = BigInt::from(mantissa);
    if shift >= 0 {
        m << shift as usize
    } else {
        m >> (-shift) as usize
    }
}

fn fixed_to_f64(v: &BigInt) -> f64 {
    v.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-(FRACTION_BITS as i32))
}

/// Series terms `(-1)^k (z/2)^{n+2k} / (k! (n+k)!)` in fixed point, for `z >= 0`.
fn series_terms(n: u32, z: f64) -> Vec<BigInt> {
    let half = to_fixed(z) >> 1usize;
    let half_sq = (&half * &half) >> FRACTION_BITS as usize;
    let mut t = BigInt::from(1) << FRACTION_BITS as usize;
    for i in 1..=n {
        t = ((t * &half) >> FRACTION_BITS as usize) / i;
    }
    let mut terms = vec![t.clone()];
    let half_sq_f = fixed_to_f64(&half_sq);
    let mut k: u64 = 1;
    loop {
        let denom = k * (n as u64 + k);
        t = -((t * &half_sq) >> FRACTION_BITS as usize) / denom;
        let decreasing = denom as f64 > half_sq_f;
        let done = decreasing && t.is_zero();
        terms.push(t.clone());
        if done || k > 400 {
            break;
        }
        k += 1;
    }
    terms
}

/// `J_n(z)` from the ascending series, for `n <= 20`, `|z| <= 60`.
pub fn bessel_j(n: u32, z: f64) -> Result<f64> {
    check_range(n, z)?;
    let a = z.abs();
    let sum: BigInt = series_terms(n, a).into_iter().sum();
    let v = fixed_to_f64(&sum);
    Ok(if z < 0.0 && n % 2 == 1 { -v } else { v })
}

/// `J_n'(z)` from the term-wise differentiated series.
pub fn bessel_j_prime(n: u32, z: f64) -> Result<f64> {
    check_range(n, z)?;
    let a = z.abs();
    if a == 0.0 {
        return Ok(if n == 1 { 0.5 } else { 0.0 });
    }
    // d/dz (z/2)^{n+2k} = (n+2k)/z · (z/2)^{n+2k}
    let weighted: BigInt = series_terms(n, a)
        .into_iter()
        .enumerate()
        .map(|(k, t)| t * (n as u64 + 2 * k as u64))
        .sum();
    let v = fixed_to_f64(&weighted) / a;
    // J_n' has the parity opposite to J_n.
    Ok(if z < 0.0 && n % 2 == 0 { -v } else { v })
}

/// Locate the `k`-th positive zero of `J_n` without the public index cap:
/// sign-change scan from `z = n` with step 0.1, bisection to width `1e-8`,
/// then up to five Newton steps.
pub(crate) fn find_zero(n: u32, k: u32) -> Result<BesselZero> {
    if k == 0 {
        return Err(CoreError::OutOfRange("zero index k must be >= 1".into()));
    }
    let mut lo = n as f64;
    let mut f_lo = bessel_j(n, lo)?;
    let mut found = 0;
    let bracket = loop {
        let hi = lo + SCAN_STEP;
        if hi > MAX_ARGUMENT {
            return Err(CoreError::NoBracket {
                n,
                k,
                limit: MAX_ARGUMENT,
            });
        }
        let f_hi = bessel_j(n, hi)?;
        if f_lo.signum() != f_hi.signum() && f_lo != 0.0 {
            found += 1;
            if found == k {
                break (lo, hi, f_lo);
            }
        }
        lo = hi;
        f_lo = f_hi;
    };

    let (mut a, mut b, mut fa) = bracket;
    while b - a > BISECTION_WIDTH {
        let m = 0.5 * (a + b);
        let fm = bessel_j(n, m)?;
        if fm == 0.0 {
            a = m;
            b = m;
            break;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    let mut z = 0.5 * (a + b);
    for _ in 0..NEWTON_STEPS {
        let f = bessel_j(n, z)?;
        if f == 0.0 {
            break;
        }
        let step = f / bessel_j_prime(n, z)?;
        z -= step;
        if step.abs() <= 1e-16 * z {
            break;
        }
    }
    let residual = bessel_j(n, z)?.abs();
    Ok(BesselZero {
        n,
        k,
        value: z,
        residual,
    })
}

/// `j_{n,k}`, the `k`-th positive zero of `J_n`, for `n, k <= 10`.
pub fn bessel_zero(n: u32, k: u32) -> Result<BesselZero> {
    if n > MAX_ZERO_INDEX || k > MAX_ZERO_INDEX {
        return Err(CoreError::OutOfRange(format!(
            "bessel_zero needs n, k <= {MAX_ZERO_INDEX}, got ({n}, {k})"
        )));
    }
    find_zero(n, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Plain bisection on the series to a 1e-13 bracket; independent of the
    /// scan/Newton path.
    fn bisection_oracle(n: u32, mut a: f64, mut b: f64) -> f64 {
        let mut fa = bessel_j(n, a).unwrap();
        while b - a > 1e-13 {
            let m = 0.5 * (a + b);
            let fm = bessel_j(n, m).unwrap();
            if fm.signum() == fa.signum() {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn values_at_origin() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j_prime(0, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j_prime(1, 0.0).unwrap(), 0.5);
    }

    #[test]
    fn known_values() {
        // Reference values of J_0, J_1 at moderate and large arguments.
        let cases = [
            (0, 1.0, 0.765_197_686_557_966_6),
            (1, 1.0, 0.440_050_585_744_933_5),
            (0, 10.0, -0.245_935_764_451_348_3),
            (2, 5.0, 0.046_565_116_277_752_2),
            (0, 50.0, 0.055_812_327_669_251_8),
        ];
        for (n, z, want) in cases {
            let got = bessel_j(n, z).unwrap();
            assert!((got - want).abs() < 1e-14, "J_{n}({z}) = {got}, want {want}");
        }
    }

    #[test]
    fn parity_for_negative_arguments() {
        for n in 0..5 {
            let a = bessel_j(n, 3.7).unwrap();
            let b = bessel_j(n, -3.7).unwrap();
            assert_eq!(b, if n % 2 == 0 { a } else { -a });
        }
    }

    #[test]
    fn derivative_recurrence() {
        for n in 1..=10 {
            for i in 1..60 {
                let z = i as f64 * 0.97;
                let lhs = bessel_j_prime(n, z).unwrap();
                let rhs = 0.5 * (bessel_j(n - 1, z).unwrap() - bessel_j(n + 1, z).unwrap());
                assert!((lhs - rhs).abs() < 1e-10, "n={n} z={z}");
            }
        }
        let j0 = bessel_j_prime(0, 2.5).unwrap();
        assert!((j0 + bessel_j(1, 2.5).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn out_of_range_is_rejected() {
        assert!(bessel_j(21, 1.0).is_err());
        assert!(bessel_j(0, 60.5).is_err());
        assert!(bessel_j_prime(0, f64::NAN).is_err());
        assert!(bessel_zero(11, 1).is_err());
        assert!(bessel_zero(0, 0).is_err());
    }

    #[test]
    fn first_zeros_match_bisection_oracle() {
        let cases = [
            (0, 2.404_825_557_7, 2.3, 2.5),
            (1, 3.831_705_970_2, 3.7, 3.9),
            (2, 5.135_622_301_8, 5.0, 5.2),
        ];
        for (n, want, a, b) in cases {
            let z = bessel_zero(n, 1).unwrap();
            let oracle = bisection_oracle(n, a, b);
            assert!((z.value - oracle).abs() < 1e-9, "n={n}");
            assert!((z.value - want).abs() < 1e-9, "n={n}: {}", z.value);
        }
        assert!(bessel_j(0, 2.404_825_557_695_773).unwrap().abs() < 1e-12);
    }

    #[test]
    fn zero_table_properties() {
        let mut table = Vec::new();
        for n in 0..=5 {
            for k in 1..=5 {
                let z = bessel_zero(n, k).unwrap();
                assert!(z.residual <= 1e-12, "residual J_{n} at zero {k}: {}", z.residual);
                assert!(bessel_j_prime(n, z.value).unwrap().abs() > 0.05);
                table.push(z);
            }
        }
        let at = |n: u32, k: u32| table[(n * 5 + k - 1) as usize].value;
        for n in 0..=5 {
            for k in 1..5 {
                assert!(at(n, k) < at(n, k + 1));
            }
        }
        for n in 0..5 {
            for k in 1..5 {
                assert!(at(n, k) < at(n + 1, k) && at(n + 1, k) < at(n, k + 1));
            }
        }
        assert!(0.0 < at(0, 1) && at(0, 1) < at(1, 1) && at(1, 1) < at(2, 1));
        assert!(at(2, 1) < at(0, 2) && at(0, 2) < at(1, 2));
        for (i, a) in table.iter().enumerate() {
            for b in &table[i + 1..] {
                assert!((a.value - b.value).abs() > 1e-6);
            }
        }
    }

    #[test]
    fn largest_supported_zero_is_accurate() {
        let z = bessel_zero(10, 10).unwrap();
        assert!(z.value < 50.0);
        assert!(z.residual <= 1e-12);
    }
}

//! Elliptic coordinates on the upper half-plane and the limit blow-up
//! profiles built from them.
//!
//! The confocal map `F(ξ, η) = (cosh ξ cos η, sinh ξ sin η)` sends the strip
//! `(0, ∞) × (0, π)` conformally onto the upper half-plane, the segment
//! `ξ = 0` onto `Γ₁ = [-1, 1] × {0}` and the rays `η ∈ {0, π}` onto
//! `s = {|x1| ≥ 1, x2 = 0}`. In these coordinates the correction profile
//! `w_k` is a finite exponential–trigonometric sum `W_k`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::combinatorics::{binom, central_binom, MAX_ORDER};
use crate::error::{CoreError, Result};
use crate::quadrature;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EllipticPoint {
    pub xi: f64,
    pub eta: f64,
}

impl EllipticPoint {
    pub fn new(xi: f64, eta: f64) -> Result<Self> {
        if !(xi >= 0.0 && xi.is_finite()) || !(0.0..=PI).contains(&eta) {
            return Err(CoreError::OutOfRange(format!(
                "elliptic point needs xi >= 0 and eta in [0, pi], got ({xi}, {eta})"
            )));
        }
        Ok(Self { xi, eta })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CartesianPoint {
    pub x1: f64,
    pub x2: f64,
}

impl CartesianPoint {
    pub fn new(x1: f64, x2: f64) -> Self {
        Self { x1, x2 }
    }

    pub fn norm(&self) -> f64 {
        self.x1.hypot(self.x2)
    }
}

/// Vanishing order / harmonic degree of a profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ProfileId(u32);

impl ProfileId {
    pub fn new(k: u32) -> Result<Self> {
        if k == 0 || k > MAX_ORDER {
            return Err(CoreError::OutOfRange(format!(
                "profile order k = {k} must lie in 1..={MAX_ORDER}"
            )));
        }
        Ok(Self(k))
    }

    pub fn k(self) -> u32 {
        self.0
    }

    /// `(k - 2j, C(k, j) / 2^{k-1})` for `j = 0..=⌊(k-1)/2⌋`.
    fn modes(self) -> impl Iterator<Item = (f64, f64)> {
        let k = self.0;
        let scale = 0.5f64.powi(k as i32 - 1);
        (0..=(k - 1) / 2).map(move |j| ((k - 2 * j) as f64, binom(k, j) as f64 * scale))
    }
}

pub fn from_elliptic(p: EllipticPoint) -> CartesianPoint {
    CartesianPoint {
        x1: p.xi.cosh() * p.eta.cos(),
        x2: p.xi.sinh() * p.eta.sin(),
    }
}

/// Inverse of [`from_elliptic`] on the closed upper half-plane.
///
/// `s = sinh²ξ` and `-q = -sin²η` are the two roots of
/// `t² - (|x|² - 1) t - x2² = 0`; each is taken from the branch without
/// cancellation and the other recovered from the product `s q = x2²`.
/// Points with `x2 < 0` are treated as their mirror image.
pub fn to_elliptic(x: CartesianPoint) -> EllipticPoint {
    let x2 = x.x2.abs();
    let b = x.x1 * x.x1 + x2 * x2 - 1.0;
    let d = b.hypot(2.0 * x2);
    let (s, q) = if b >= 0.0 {
        let s = 0.5 * (b + d);
        let q = if s > 0.0 { x2 * x2 / s } else { 0.0 };
        (s, q)
    } else {
        let q = 0.5 * (d - b);
        (x2 * x2 / q, q)
    };
    let xi = s.sqrt().asinh();
    let sin_eta = q.sqrt().min(1.0);
    let cos_eta = x.x1 / xi.cosh();
    EllipticPoint {
        xi,
        eta: sin_eta.atan2(cos_eta),
    }
}

/// Conformal scale factor `|sinh(ξ + iη)| = sqrt(cosh²ξ - cos²η)`.
pub fn scale_factor(p: EllipticPoint) -> f64 {
    let sh = p.xi.sinh();
    let s = p.eta.sin();
    (sh * sh + s * s).sqrt()
}

/// `ψ_k(x) = r^k sin(k t) = Im((x1 + i x2)^k)`, by repeated complex
/// multiplication so that it vanishes exactly on the real axis.
pub fn psi(k: ProfileId, x: CartesianPoint) -> f64 {
    let (mut re, mut im) = (1.0, 0.0);
    for _ in 0..k.k() {
        (re, im) = (re * x.x1 - im * x.x2, re * x.x2 + im * x.x1);
    }
    im
}

/// `Ψ_k = ψ_k ∘ F` as a finite sum of `sinh(mξ) sin(mη)`.
pub fn psi_elliptic(k: ProfileId, p: EllipticPoint) -> f64 {
    k.modes()
        .map(|(m, c)| c * (m * p.xi).sinh() * (m * p.eta).sin())
        .sum()
}

/// `∂Ψ_k/∂ξ`.
pub fn psi_elliptic_dxi(k: ProfileId, p: EllipticPoint) -> f64 {
    k.modes()
        .map(|(m, c)| c * m * (m * p.xi).cosh() * (m * p.eta).sin())
        .sum()
}

/// `W_k = w_k ∘ F`, the correction profile in elliptic coordinates.
pub fn w_profile(k: ProfileId, p: EllipticPoint) -> f64 {
    k.modes()
        .map(|(m, c)| c * (-m * p.xi).exp() * (m * p.eta).sin())
        .sum()
}

/// `∂W_k/∂ξ`.
pub fn w_profile_dxi(k: ProfileId, p: EllipticPoint) -> f64 {
    k.modes()
        .map(|(m, c)| -c * m * (-m * p.xi).exp() * (m * p.eta).sin())
        .sum()
}

/// Coefficients of `sin(mη)` in `∂_ξΨ_k(0, ·)` and `∂_ξW_k(0, ·)`, mode by mode.
pub fn normal_derivative_coefficients(k: ProfileId) -> Vec<(u32, f64, f64)> {
    k.modes()
        .map(|(m, c)| (m as u32, c * m, -c * m))
        .collect()
}

/// Limit blow-up profile `Φ_k = ψ_k + w_k`.
pub fn phi(k: ProfileId, x: CartesianPoint) -> f64 {
    psi(k, x) + w_profile(k, to_elliptic(x))
}

/// Quadrature of `∫_{-1}^{1} ∂_{x2}w_k · w_k dx1`, written in elliptic
/// coordinates as `∫_0^π ∂_ξW_k(0,η) W_k(0,η) dη`.
pub fn junction_integral_quad(k: ProfileId, n_quad: usize) -> Result<f64> {
    if n_quad < 16 {
        return Err(CoreError::Precondition(format!(
            "junction integral needs n_quad >= 16, got {n_quad}"
        )));
    }
    let f = |eta: f64| {
        let p = EllipticPoint { xi: 0.0, eta };
        w_profile_dxi(k, p) * w_profile(k, p)
    };
    Ok(quadrature::composite(f, 0.0, PI, n_quad))
}

/// Closed form of the junction integral, `-kπ/2^{2k-1} · C(k-1, ⌊(k-1)/2⌋)²`.
pub fn junction_integral_exact(k: ProfileId) -> f64 {
    let b = central_binom(k.k()) as f64;
    -(k.k() as f64) * PI * b * b / 2f64.powi(2 * k.k() as i32 - 1)
}

/// `∫_0^π Φ_k(cos t, sin t) sin(kt) dt` by composite quadrature.
pub fn fourier_phi(k: ProfileId, n_quad: usize) -> Result<f64> {
    if n_quad < 64 {
        return Err(CoreError::Precondition(format!(
            "fourier_phi needs n_quad >= 64, got {n_quad}"
        )));
    }
    let kf = k.k() as f64;
    let f = |t: f64| phi(k, CartesianPoint::new(t.cos(), t.sin())) * (kf * t).sin();
    Ok(quadrature::composite(f, 0.0, PI, n_quad))
}

/// Closed form `π/2^{2k} · C(k-1, ⌊(k-1)/2⌋)² + π/2` of [`fourier_phi`].
pub fn fourier_phi_exact(k: ProfileId) -> f64 {
    let b = central_binom(k.k()) as f64;
    PI * b * b / 4f64.powi(k.k() as i32) + PI / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn pid(k: u32) -> ProfileId {
        ProfileId::new(k).unwrap()
    }

    fn ep(xi: f64, eta: f64) -> EllipticPoint {
        EllipticPoint::new(xi, eta).unwrap()
    }

    #[test]
    fn from_elliptic_examples() {
        let a = from_elliptic(ep(0.0, 0.0));
        assert_eq!((a.x1, a.x2), (1.0, 0.0));
        let b = from_elliptic(ep(0.0, PI));
        assert_abs_diff_eq!(b.x1, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b.x2, 0.0, epsilon = 1e-15);
        let c = from_elliptic(ep(1.0, PI / 2.0));
        assert_abs_diff_eq!(c.x1, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.x2, 1.175_201_193_6, epsilon = 1e-10);
    }

    #[test]
    fn to_elliptic_examples() {
        let f = to_elliptic(CartesianPoint::new(1.0, 0.0));
        assert_eq!((f.xi, f.eta), (0.0, 0.0));
        let g = to_elliptic(CartesianPoint::new(-1.0, 0.0));
        assert_eq!((g.xi, g.eta), (0.0, PI));
        let p = to_elliptic(CartesianPoint::new(0.0, 1f64.sinh()));
        assert_abs_diff_eq!(p.xi, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(p.eta, PI / 2.0, epsilon = 1e-14);
        let q = to_elliptic(CartesianPoint::new(2f64.cosh(), 0.0));
        assert_abs_diff_eq!(q.xi, 2.0, epsilon = 1e-14);
        assert_eq!(q.eta, 0.0);
    }

    #[test]
    fn inverse_is_accurate_next_to_the_segment() {
        for &x1 in &[-0.9, -0.3, 0.0, 0.5, 0.99] {
            let x = CartesianPoint::new(x1, 1e-8);
            let y = from_elliptic(to_elliptic(x));
            assert!((y.x1 - x.x1).abs() < 1e-15 && (y.x2 - x.x2).abs() < 1e-20);
        }
    }

    #[test]
    fn scale_factor_examples() {
        assert_abs_diff_eq!(scale_factor(ep(0.0, PI / 2.0)), 1.0, epsilon = 1e-15);
        assert_eq!(scale_factor(ep(0.0, 0.0)), 0.0);
        assert_abs_diff_eq!(scale_factor(ep(1.0, 0.0)), 1f64.sinh(), epsilon = 1e-15);
    }

    #[test]
    fn psi_examples() {
        assert_abs_diff_eq!(psi(pid(1), CartesianPoint::new(0.0, 1.0)), 1.0, epsilon = 1e-15);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(psi(pid(2), CartesianPoint::new(s, s)), 1.0, epsilon = 1e-15);
        for k in 1..=6 {
            for &x1 in &[-1.0, -0.4, 0.0, 0.7, 1.0] {
                assert_abs_diff_eq!(psi(pid(k), CartesianPoint::new(x1, 0.0)), 0.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn psi_elliptic_examples() {
        assert_eq!(psi_elliptic(pid(1), ep(0.0, 1.3)), 0.0);
        assert_abs_diff_eq!(psi_elliptic(pid(1), ep(1.0, PI / 2.0)), 1f64.sinh(), epsilon = 1e-15);
        let p = ep(0.3, 1.0);
        assert_abs_diff_eq!(psi_elliptic(pid(3), p), psi(pid(3), from_elliptic(p)), epsilon = 1e-14);
    }

    #[test]
    fn w_profile_examples() {
        assert_abs_diff_eq!(w_profile(pid(1), ep(0.0, PI / 2.0)), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(w_profile(pid(2), ep(0.0, PI / 4.0)), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(w_profile(pid(3), ep(0.0, PI / 2.0)), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn phi_examples() {
        for k in 1..=5 {
            for &x1 in &[-7.0, -2.0, -1.0, 1.0, 1.5, 30.0] {
                assert_abs_diff_eq!(phi(pid(k), CartesianPoint::new(x1, 0.0)), 0.0, epsilon = 1e-12);
            }
        }
        assert_abs_diff_eq!(phi(pid(1), CartesianPoint::new(0.0, 0.0)), 1.0, epsilon = 1e-15);
        // w_1 = Im(sqrt(z^2 - 1) - z) decays like 1/|x|, so Φ₁(0, 10) ≈ ψ₁ + 1/20.
        let v = phi(pid(1), CartesianPoint::new(0.0, 10.0));
        let w1 = 101f64.sqrt() - 10.0;
        assert_abs_diff_eq!(v, 10.0 + w1, epsilon = 1e-12);
        assert!((v - 10.0).abs() < 0.06);
    }

    #[test]
    fn neumann_matching_on_the_segment() {
        for k in 1..=8 {
            for (_, dpsi, dw) in normal_derivative_coefficients(pid(k)) {
                assert_eq!(dpsi + dw, 0.0);
            }
            for i in 1..50 {
                let p = ep(0.0, PI * i as f64 / 50.0);
                let s = psi_elliptic_dxi(pid(k), p) + w_profile_dxi(pid(k), p);
                assert!(s.abs() <= 1e-12, "k={k}: {s}");
            }
        }
    }

    #[test]
    fn dirichlet_on_the_rays() {
        for k in 1..=8 {
            for i in 0..=100 {
                let xi = 0.1 * i as f64;
                assert!(w_profile(pid(k), ep(xi, 0.0)).abs() <= 1e-12);
                assert!(w_profile(pid(k), ep(xi, PI)).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn decay_bound() {
        for k in 1..=8 {
            for i in 0..40 {
                let xi = 1.0 + 0.25 * i as f64;
                for j in 0..=20 {
                    let eta = PI * j as f64 / 20.0;
                    assert!(w_profile(pid(k), ep(xi, eta)).abs() <= 2.0 * (-xi).exp());
                }
            }
        }
    }

    fn fd_laplacian_max(k: ProfileId, h: f64) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 1..=8 {
            for j in 1..=8 {
                let xi = 0.2 + 0.15 * i as f64;
                let eta = 0.3 + 0.25 * j as f64;
                let c = w_profile(k, ep(xi, eta));
                let lap = (w_profile(k, ep(xi + h, eta))
                    + w_profile(k, ep(xi - h, eta))
                    + w_profile(k, ep(xi, eta + h))
                    + w_profile(k, ep(xi, eta - h))
                    - 4.0 * c)
                    / (h * h);
                worst = worst.max(lap.abs());
            }
        }
        worst
    }

    #[test]
    fn w_profile_is_harmonic_to_second_order() {
        for k in 1..=5 {
            let coarse = fd_laplacian_max(pid(k), 0.04);
            let fine = fd_laplacian_max(pid(k), 0.02);
            let ratio = coarse / fine;
            assert!((3.5..=4.5).contains(&ratio), "k={k}: ratio {ratio}");
        }
    }

    #[test]
    fn junction_integral_matches_closed_form() {
        let cases = [(1, -PI / 2.0), (2, -PI / 4.0), (3, -3.0 * PI / 8.0)];
        for (k, want) in cases {
            let got = junction_integral_quad(pid(k), 2048).unwrap();
            assert_abs_diff_eq!(got, want, epsilon = 1e-12);
        }
        for k in 1..=8 {
            let got = junction_integral_quad(pid(k), 2048).unwrap();
            assert!((got - junction_integral_exact(pid(k))).abs() <= 1e-8);
        }
        assert!(junction_integral_quad(pid(1), 8).is_err());
    }

    #[test]
    fn fourier_coefficient_examples() {
        let cases = [(1, 3.0 * PI / 4.0), (2, 9.0 * PI / 16.0), (3, 9.0 * PI / 16.0)];
        for (k, want) in cases {
            assert_abs_diff_eq!(fourier_phi_exact(pid(k)), want, epsilon = 1e-14);
            let got = fourier_phi(pid(k), 4096).unwrap();
            assert!((got - want).abs() <= 1e-6, "k={k}: {got} vs {want}");
        }
        assert!(fourier_phi(pid(1), 32).is_err());
    }

    proptest! {
        #[test]
        fn round_trip_through_elliptic_coordinates(x1 in -20.0f64..20.0, x2 in 1e-8f64..20.0) {
            let x = CartesianPoint::new(x1, x2);
            prop_assume!((x1 - 1.0).hypot(x2) >= 1e-6 && (x1 + 1.0).hypot(x2) >= 1e-6);
            let y = from_elliptic(to_elliptic(x));
            let err = (y.x1 - x.x1).hypot(y.x2 - x.x2);
            prop_assert!(err <= 1e-12 * (1.0 + x.norm()), "err {}", err);
        }

        #[test]
        fn psi_is_conformally_consistent(k in 1u32..=8, xi in 0.0f64..3.0, eta in 0.0f64..PI) {
            let p = ep(xi, eta);
            let a = psi_elliptic(pid(k), p);
            let b = psi(pid(k), from_elliptic(p));
            prop_assert!((a - b).abs() <= 1e-10 * (1.0 + a.abs()));
        }
    }
}

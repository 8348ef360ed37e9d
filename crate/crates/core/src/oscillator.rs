//! Eigenfunctions of `-Δ + x² + y²` and the two-term family
//! `Φ^θ_n = cos θ φ_{n,0} + sin θ φ_{0,n}`.
//!
//! Pointwise values use the Gaussian-scaled representative
//! `cos θ ĥ_n(x) ĥ_0(y) + sin θ ĥ_0(x) ĥ_n(y)`, a positive multiple of
//! `Φ^θ_n` with the same zero set. Sign queries far from the origin go through
//! the polynomial part `cos θ H_n(x) + sin θ H_n(y)` in log form instead,
//! since the Gaussian factor underflows there.

use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::error::{Error, Result};
use crate::hermite::{eval_hermite, hermite_function_derivative, hermite_functions};

/// `φ_{m,n}(x, y) = H_m(x) H_n(y) e^{-(x²+y²)/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductEigenfunction {
    pub m: usize,
    pub n: usize,
}

impl ProductEigenfunction {
    pub fn new(m: usize, n: usize) -> Self {
        ProductEigenfunction { m, n }
    }

    /// `2(m + n + 1)`.
    pub fn eigenvalue(&self) -> u64 {
        2 * (self.m as u64 + self.n as u64 + 1)
    }

    /// `ĥ_m(x) ĥ_n(y)`.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        eval_hermite(self.m, x).scaled * eval_hermite(self.n, y).scaled
    }

    /// `(-Δ + x² + y²) u` at `(x, y)` with a 5-point Laplacian of step `h`.
    pub fn apply_hamiltonian_fd(&self, x: f64, y: f64, h: f64) -> f64 {
        let c = self.eval(x, y);
        let lap = (self.eval(x + h, y) + self.eval(x - h, y) + self.eval(x, y + h) + self.eval(x, y - h)
            - 4.0 * c)
            / (h * h);
        -lap + (x * x + y * y) * c
    }
}

/// `Φ^θ_n` for odd `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Superposition {
    n: usize,
    angle: Angle,
}

impl Superposition {
    pub fn new(n: usize, angle: Angle) -> Result<Self> {
        if n.is_multiple_of(2) {
            return Err(Error::EvenDegree(n));
        }
        Ok(Superposition { n, angle })
    }

    pub fn from_radians(n: usize, theta: f64) -> Result<Self> {
        Self::new(n, Angle::from_radians(theta)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn angle(&self) -> Angle {
        self.angle
    }

    pub fn theta(&self) -> f64 {
        self.angle.radians()
    }

    pub fn coefficients(&self) -> (f64, f64) {
        self.angle.coefficients()
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let (c, s) = self.coefficients();
        eval_with(self.n, c, s, x, y)
    }

    /// Sign and normalised value of `cos θ H_n(x) + sin θ H_n(y)`, divided by
    /// `max(|H_n(x)|, |H_n(y)|)`. Never overflows or underflows.
    pub fn polynomial_normalized(&self, x: f64, y: f64) -> f64 {
        let (c, s) = self.coefficients();
        polynomial_normalized_with(self.n, c, s, x, y)
    }

    pub fn grad(&self, x: f64, y: f64) -> (f64, f64) {
        let (c, s) = self.coefficients();
        let n = self.n;
        let hx = hermite_functions(n, x);
        let hy = hermite_functions(n, y);
        let dnx = hermite_function_derivative(&hx, n, x);
        let dny = hermite_function_derivative(&hy, n, y);
        let d0x = hermite_function_derivative(&hx, 0, x);
        let d0y = hermite_function_derivative(&hy, 0, y);
        (
            c * dnx * hy[0] + s * d0x * hy[n],
            c * hx[n] * d0y + s * hx[0] * dny,
        )
    }

    /// Analytic Hessian of the scaled representative, using
    /// `ĥ_k'' = (t² - 2k - 1) ĥ_k`.
    pub fn hessian(&self, x: f64, y: f64) -> [[f64; 2]; 2] {
        let (c, s) = self.coefficients();
        let n = self.n;
        let hx = hermite_functions(n, x);
        let hy = hermite_functions(n, y);
        let second = |h: &[f64], k: usize, t: f64| (t * t - 2.0 * k as f64 - 1.0) * h[k];
        let dxx = c * second(&hx, n, x) * hy[0] + s * second(&hx, 0, x) * hy[n];
        let dyy = c * hx[n] * second(&hy, 0, y) + s * hx[0] * second(&hy, n, y);
        let dxy = c * hermite_function_derivative(&hx, n, x) * hermite_function_derivative(&hy, 0, y)
            + s * hermite_function_derivative(&hx, 0, x) * hermite_function_derivative(&hy, n, y);
        [[dxx, dxy], [dxy, dyy]]
    }
}

fn eval_with(n: usize, c: f64, s: f64, x: f64, y: f64) -> f64 {
    let (hnx, h0x) = (eval_hermite(n, x).scaled, eval_hermite(0, x).scaled);
    let (hny, h0y) = (eval_hermite(n, y).scaled, eval_hermite(0, y).scaled);
    c * (hnx * h0y) + s * (h0x * hny)
}

pub(crate) fn polynomial_normalized_with(n: usize, c: f64, s: f64, x: f64, y: f64) -> f64 {
    let ex = eval_hermite(n, x);
    let ey = eval_hermite(n, y);
    let m = ex.log_abs.max(ey.log_abs);
    if m == f64::NEG_INFINITY {
        return 0.0;
    }
    let a = if ex.sign == 0 { 0.0 } else { c * ex.sign as f64 * (ex.log_abs - m).exp() };
    let b = if ey.sign == 0 { 0.0 } else { s * ey.sign as f64 * (ey.log_abs - m).exp() };
    a + b
}

pub fn eval_superposition(s: &Superposition, x: f64, y: f64) -> f64 {
    s.eval(x, y)
}

pub fn grad_superposition(s: &Superposition, x: f64, y: f64) -> (f64, f64) {
    s.grad(x, y)
}

/// Residuals of the three reflection identities for odd `n`:
///
/// - `Φ^θ(-x, y) = Φ^{π-θ}(x, y)`
/// - `Φ^θ(x, -y) = -Φ^{π-θ}(x, y)`
/// - `Φ^θ(y, x) = Φ^{π/2-θ}(x, y)`
///
/// Each residual is relative to the largest magnitude involved.
pub fn symmetry_check(s: &Superposition, x: f64, y: f64) -> [f64; 3] {
    let n = s.n();
    let (c, si) = s.coefficients();
    let rel = |a: f64, b: f64| {
        let m = a.abs().max(b.abs());
        if m == 0.0 {
            0.0
        } else {
            (a - b).abs() / m
        }
    };
    // cos(π-θ) = -cos θ, sin(π-θ) = sin θ; cos(π/2-θ) = sin θ, sin(π/2-θ) = cos θ
    let reflect_x = rel(eval_with(n, c, si, -x, y), eval_with(n, -c, si, x, y));
    let reflect_y = rel(eval_with(n, c, si, x, -y), -eval_with(n, -c, si, x, y));
    let swap = rel(eval_with(n, c, si, y, x), eval_with(n, si, c, x, y));
    [reflect_x, reflect_y, swap]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// Bookkeeping for the eigenspace `E_ℓ` spanned by `φ_{ℓ-j,j}`, `0 ≤ j ≤ ℓ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenspaceInfo {
    pub ell: usize,
    pub dimension: usize,
    pub eigenvalue: u64,
    /// Behaviour under `(x, y) ↦ (-x, -y)`.
    pub parity: Parity,
}

pub fn eigenspace_info(ell: usize) -> EigenspaceInfo {
    EigenspaceInfo {
        ell,
        dimension: ell + 1,
        eigenvalue: 2 * (ell as u64 + 1),
        parity: if ell.is_multiple_of(2) { Parity::Even } else { Parity::Odd },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::hermite_zeros;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn three_quarter(n: usize) -> Superposition {
        Superposition::new(n, Angle::from_fraction_of_pi(3, 4).unwrap()).unwrap()
    }

    #[test]
    fn product_eigenvalue_and_fd_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (m, n) in [(0, 0), (1, 2), (3, 0), (4, 4), (2, 5)] {
            let p = ProductEigenfunction::new(m, n);
            assert_eq!(p.eigenvalue(), 2 * (m + n + 1) as u64);
            for _ in 0..20 {
                let x = rng.random_range(-2.5..2.5);
                let y = rng.random_range(-2.5..2.5);
                let u = p.eval(x, y);
                if u.abs() < 1e-3 {
                    continue;
                }
                let hu = p.apply_hamiltonian_fd(x, y, 1e-3);
                let lambda = p.eigenvalue() as f64;
                assert!((hu - lambda * u).abs() < 1e-5 * (lambda * u).abs(), "m={m} n={n}");
            }
        }
    }

    #[test]
    fn even_degree_rejected() {
        assert_eq!(Superposition::from_radians(4, 0.3), Err(Error::EvenDegree(4)));
    }

    #[test]
    fn angle_reduction_flips_sign_only() {
        let a = Superposition::from_radians(3, 0.4).unwrap();
        let b = Superposition::from_radians(3, 0.4 + PI).unwrap();
        assert!((a.theta() - b.theta()).abs() < 1e-15);
        // the unreduced function is the negative; the reduced one is identical
        let (c, s) = ((0.4 + PI).cos(), (0.4 + PI).sin());
        let raw = c * eval_hermite(3, 0.7).scaled * eval_hermite(0, -0.2).scaled
            + s * eval_hermite(0, 0.7).scaled * eval_hermite(3, -0.2).scaled;
        assert!((raw + a.eval(0.7, -0.2)).abs() < 1e-14);
    }

    #[test]
    fn diagonal_vanishes_at_three_quarter_pi() {
        for n in [1, 3, 5, 9] {
            let s = three_quarter(n);
            for &t in &[-2.0, -0.3, 0.0, 0.9, 3.0] {
                assert_eq!(s.eval(t, t), 0.0);
            }
        }
    }

    #[test]
    fn horizontal_lines_at_half_pi() {
        let s = Superposition::new(5, Angle::from_fraction_of_pi(1, 2).unwrap()).unwrap();
        for &z in &hermite_zeros(5).unwrap().zeros {
            for &x in &[-2.0, 0.1, 1.7] {
                assert!(s.eval(x, z).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn lattice_point_is_a_zero() {
        let s = Superposition::from_radians(3, PI / 8.0).unwrap();
        let z = hermite_zeros(3).unwrap().zeros;
        assert!(s.eval(z[0], z[1]).abs() < 1e-15);
        for &a in &z {
            for &b in &z {
                assert!(s.eval(a, b).abs() < 1e-14);
                let (gx, gy) = s.grad(a, b);
                // not a critical zero, and the tangent is neither horizontal nor vertical
                assert!(gx.abs() > 1e-6 && gy.abs() > 1e-6);
            }
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let n = 2 * rng.random_range(0..6) + 1;
            let s = Superposition::from_radians(n, rng.random_range(0.0..PI)).unwrap();
            let x = rng.random_range(-3.0..3.0);
            let y = rng.random_range(-3.0..3.0);
            let h = 1e-6;
            let fx = (s.eval(x + h, y) - s.eval(x - h, y)) / (2.0 * h);
            let fy = (s.eval(x, y + h) - s.eval(x, y - h)) / (2.0 * h);
            let (gx, gy) = s.grad(x, y);
            let scale = gx.abs().max(gy.abs()).max(1e-3);
            assert!((fx - gx).abs() < 1e-6 * scale.max(1.0) && (fy - gy).abs() < 1e-6 * scale.max(1.0));
        }
    }

    #[test]
    fn diagonal_critical_zero_n3() {
        let s = three_quarter(3);
        let a = hermite_zeros(2).unwrap().zeros[0];
        let (gx, gy) = s.grad(a, a);
        assert!(gx.abs() < 1e-14 && gy.abs() < 1e-14);
    }

    #[test]
    fn symmetry_examples() {
        let s = Superposition::from_radians(5, 0.3).unwrap();
        for r in symmetry_check(&s, 1.1, -0.7) {
            assert!(r < 1e-12);
        }
        let q = Superposition::new(5, Angle::from_fraction_of_pi(1, 4).unwrap()).unwrap();
        assert_eq!(q.eval(0.4, -1.3), q.eval(-1.3, 0.4));
        let h = Superposition::new(3, Angle::from_fraction_of_pi(1, 2).unwrap()).unwrap();
        assert_eq!(h.eval(0.8, -0.6), -h.eval(0.8, 0.6));
    }

    #[test]
    fn eigenspace_examples() {
        let e0 = eigenspace_info(0);
        assert_eq!((e0.dimension, e0.eigenvalue, e0.parity), (1, 2, Parity::Even));
        let e2 = eigenspace_info(2);
        assert_eq!((e2.dimension, e2.eigenvalue), (3, 6));
        let e7 = eigenspace_info(7);
        assert_eq!((e7.dimension, e7.parity), (8, Parity::Odd));
    }

    #[test]
    fn zero_set_equivalence_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10_000 {
            let n = 2 * rng.random_range(0..8) + 1;
            let s = Superposition::from_radians(n, rng.random_range(0.0..PI)).unwrap();
            let x = rng.random_range(-5.0..5.0);
            let y = rng.random_range(-5.0..5.0);
            let v = s.eval(x, y);
            let p = s.polynomial_normalized(x, y);
            if p.abs() < 1e-10 {
                continue;
            }
            assert_eq!(v > 0.0, p > 0.0, "n={n} x={x} y={y}");
        }
    }

    #[test]
    fn checkerboard_inclusion() {
        // nodal points off the lattice lie where H_n(x) H_n(y) < 0
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut checked = 0;
        while checked < 10_000 {
            let n = 2 * rng.random_range(1..6) + 1;
            let theta = rng.random_range(1e-3..PI / 4.0);
            let s = Superposition::from_radians(n, theta).unwrap();
            let zeros = hermite_zeros(n).unwrap().zeros;
            let x = rng.random_range(-4.0..4.0);
            if zeros.iter().any(|z| (z - x).abs() < 1e-6) {
                continue;
            }
            let ys = crate::roots::sampled_zeros(|y| s.polynomial_normalized(x, y), -12.0, 12.0, 2000, 0.0);
            for y in ys {
                if zeros.iter().any(|z| (z - y).abs() < 1e-6) {
                    continue;
                }
                let prod = eval_hermite(n, x).sign * eval_hermite(n, y).sign;
                assert_eq!(prod, -1, "n={n} theta={theta} x={x} y={y}");
                checked += 1;
            }
        }
    }
}

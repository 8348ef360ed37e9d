//! Reference computations that share no code with the library.
#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};

/// Monomial coefficients of `H_n`, lowest degree first, by the explicit sum
/// `H_n(t) = n! Σ_m (-1)^m (2t)^{n-2m} / (m! (n-2m)!)`.
pub fn hermite_monomials(n: usize) -> Vec<f64> {
    let fact = |k: usize| (1..=k).fold(1.0f64, |a, b| a * b as f64);
    let mut c = vec![0.0; n + 1];
    for m in 0..=n / 2 {
        let k = n - 2 * m;
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        c[k] = sign * fact(n) / (fact(m) * fact(k)) * 2f64.powi(k as i32);
    }
    c
}

/// `(p(t), Σ |c_k| |t|^k)`: value and the scale that bounds its rounding error.
pub fn horner(c: &[f64], t: f64) -> (f64, f64) {
    let mut v = 0.0;
    let mut s = 0.0;
    for &a in c.iter().rev() {
        v = v * t + a;
        s = s * t.abs() + a.abs();
    }
    (v, s)
}

pub fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(k, a)| k as f64 * a).collect()
}

pub fn hermite_value(n: usize, t: f64) -> f64 {
    horner(&hermite_monomials(n), t).0
}

/// Zeros of `H_m` as eigenvalues of the symmetric Jacobi matrix of the
/// recurrence (Golub–Welsch), ascending.
pub fn golub_welsch_zeros(m: usize) -> Vec<f64> {
    let mut j = DMatrix::<f64>::zeros(m, m);
    for k in 1..m {
        let b = (k as f64 / 2.0).sqrt();
        j[(k - 1, k)] = b;
        j[(k, k - 1)] = b;
    }
    let mut z: Vec<f64> = SymmetricEigen::new(j).eigenvalues.iter().copied().collect();
    z.sort_by(|a, b| a.partial_cmp(b).unwrap());
    z
}

/// `√π 2^n n!` by direct product.
pub fn hermite_norm_closed_form(n: usize) -> f64 {
    std::f64::consts::PI.sqrt() * (1..=n).fold(1.0, |a, k| a * 2.0 * k as f64)
}

//! Physicists' Hermite polynomials `H_n` (leading coefficient `2^n`).
//!
//! Values are carried in two forms: sign plus `ln|H_n(t)|`, which is what
//! ratio computations need since raw `H_n` overflows a double somewhere near
//! n ≈ 150, and the normalised Hermite function
//! `ĥ_n(t) = H_n(t) e^{-t²/2} / (π^{1/4} 2^{n/2} (n!)^{1/2})`, which stays
//! bounded and is what pointwise evaluation of eigenfunctions uses.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots::safeguarded_newton;

/// Rescale threshold for the upward recurrence.
const RESCALE_ABOVE: f64 = 1e100;

/// One evaluation of `H_n(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HermiteEval {
    pub degree: usize,
    /// -1, 0 or +1.
    pub sign: i8,
    /// `ln|H_n(t)|`, `-inf` when `sign == 0`.
    pub log_abs: f64,
    /// `ĥ_n(t)`.
    pub scaled: f64,
}

impl HermiteEval {
    /// `H_n(t)` as a plain float; overflows to ±inf for large degrees.
    pub fn value(&self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            self.sign as f64 * self.log_abs.exp()
        }
    }
}

/// `H_n(t) = cur·e^{log_scale}` and `H_{n-1}(t) = prev·e^{log_scale}`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RawPair {
    pub cur: f64,
    pub prev: f64,
    pub log_scale: f64,
}

/// Upward three-term recurrence with renormalisation of the running pair.
/// The operations only depend on `|t|` up to exact sign flips, so
/// `H_n(-t) = (-1)^n H_n(t)` holds bit for bit.
pub(crate) fn raw_pair(n: usize, t: f64) -> RawPair {
    if n == 0 {
        return RawPair {
            cur: 1.0,
            prev: 0.0,
            log_scale: 0.0,
        };
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * t;
    let mut log_scale = 0.0;
    for k in 2..=n {
        let next = 2.0 * t * cur - 2.0 * (k - 1) as f64 * prev;
        prev = cur;
        cur = next;
        let m = cur.abs().max(prev.abs());
        if m > RESCALE_ABOVE {
            cur /= m;
            prev /= m;
            log_scale += m.ln();
        }
    }
    RawPair {
        cur,
        prev,
        log_scale,
    }
}

fn sign_of(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

fn make_eval(degree: usize, t: f64, sign: i8, log_abs: f64) -> HermiteEval {
    let scaled = if sign == 0 {
        0.0
    } else {
        sign as f64 * (log_abs - 0.5 * t * t - 0.5 * hermite_norm_sq(degree)).exp()
    };
    HermiteEval {
        degree,
        sign,
        log_abs,
        scaled,
    }
}

pub fn eval_hermite(n: usize, t: f64) -> HermiteEval {
    let raw = raw_pair(n, t);
    let sign = sign_of(raw.cur);
    let log_abs = if sign == 0 {
        f64::NEG_INFINITY
    } else {
        raw.cur.abs().ln() + raw.log_scale
    };
    make_eval(n, t, sign, log_abs)
}

/// `H'_n(t) = 2n H_{n-1}(t)`.
///
/// The result is tagged with degree `n - 1` (the degree of the derivative),
/// so its `scaled` field is `2n ĥ_{n-1}(t)`. For `n = 0` the derivative is
/// identically zero.
pub fn eval_hermite_derivative(n: usize, t: f64) -> HermiteEval {
    if n == 0 {
        return HermiteEval {
            degree: 0,
            sign: 0,
            log_abs: f64::NEG_INFINITY,
            scaled: 0.0,
        };
    }
    let base = eval_hermite(n - 1, t);
    let factor = (2 * n) as f64;
    HermiteEval {
        degree: n - 1,
        sign: base.sign,
        log_abs: base.log_abs + factor.ln(),
        scaled: base.scaled * factor,
    }
}

/// `ln(π^{1/2} 2^n n!)`, the log of `∫ e^{-t²} H_n(t)² dt`.
pub fn hermite_norm_sq(n: usize) -> f64 {
    0.5 * PI.ln() + n as f64 * LN_2 + libm::lgamma(n as f64 + 1.0)
}

/// `ĥ_0(t), …, ĥ_{n_max}(t)` from the normalised recurrence
/// `ĥ_k = √(2/k) t ĥ_{k-1} - √((k-1)/k) ĥ_{k-2}`.
///
/// Cheap and bounded, but `ĥ_0` underflows for `|t| > ~38`; use
/// [`eval_hermite`] when far-field values matter.
pub fn hermite_functions(n_max: usize, t: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let h0 = PI.powf(-0.25) * (-0.5 * t * t).exp();
    out.push(h0);
    if n_max == 0 {
        return out;
    }
    out.push(2f64.sqrt() * t * h0);
    for k in 2..=n_max {
        let kf = k as f64;
        let v = (2.0 / kf).sqrt() * t * out[k - 1] - ((kf - 1.0) / kf).sqrt() * out[k - 2];
        out.push(v);
    }
    out
}

/// `ĥ'_k(t) = √(2k) ĥ_{k-1}(t) - t ĥ_k(t)`, given the output of
/// [`hermite_functions`].
pub fn hermite_function_derivative(h: &[f64], k: usize, t: f64) -> f64 {
    let lower = if k == 0 { 0.0 } else { (2.0 * k as f64).sqrt() * h[k - 1] };
    lower - t * h[k]
}

/// Ordered simple zeros `t_{n,1} < … < t_{n,n}` of `H_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroTable {
    pub degree: usize,
    pub zeros: Vec<f64>,
}

impl ZeroTable {
    /// Rows `i,t_{n,i}` with 17 significant digits, 1-based `i`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("i,t\n");
        for (i, z) in self.zeros.iter().enumerate() {
            s.push_str(&format!("{},{}\n", i + 1, crate::fmt_f64(*z)));
        }
        s
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    pub fn min_gap(&self) -> f64 {
        self.zeros
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }
}

fn zeros_from_previous(k: usize, previous: &[f64]) -> Result<Vec<f64>> {
    // every zero of H_k lies strictly inside (-√(2k+1), √(2k+1))
    let bound = (2.0 * k as f64 + 1.0).sqrt();
    let mut edges = Vec::with_capacity(k + 1);
    edges.push(-bound);
    edges.extend_from_slice(previous);
    edges.push(bound);
    let mut zeros = Vec::with_capacity(k);
    for i in 0..k {
        let (lo, hi) = (edges[i], edges[i + 1]);
        let eval = |t: f64| {
            let raw = raw_pair(k, t);
            let step = raw.cur / (2.0 * k as f64 * raw.prev);
            (raw.cur, step)
        };
        let root = safeguarded_newton(eval, lo, hi, 0.5 * (lo + hi), 100).ok_or(Error::NoConvergence {
            what: "hermite_zeros",
            n: k,
            index: i + 1,
        })?;
        zeros.push(root);
    }
    // enforce exact antisymmetry and the exact middle zero for odd k
    for i in 0..k / 2 {
        let j = k - 1 - i;
        let r = 0.5 * (zeros[j] - zeros[i]);
        zeros[i] = -r;
        zeros[j] = r;
    }
    if k % 2 == 1 {
        zeros[k / 2] = 0.0;
    }
    Ok(zeros)
}

/// Zero tables for every degree `1..=n`, built by induction: the zeros of
/// `H_{k-1}` bracket those of `H_k` (interlacing), and each root is found by
/// bracketed Newton iteration.
pub fn hermite_zero_tables(n: usize) -> Result<Vec<ZeroTable>> {
    if n == 0 {
        return Err(Error::InvalidDegree {
            what: "hermite_zeros",
            n,
            requirement: "n >= 1",
        });
    }
    let mut tables: Vec<ZeroTable> = Vec::with_capacity(n);
    let mut previous: Vec<f64> = Vec::new();
    for k in 1..=n {
        let zeros = zeros_from_previous(k, &previous)?;
        previous = zeros.clone();
        tables.push(ZeroTable { degree: k, zeros });
    }
    Ok(tables)
}

pub fn hermite_zeros(n: usize) -> Result<ZeroTable> {
    let mut tables = hermite_zero_tables(n)?;
    Ok(tables.pop().expect("n >= 1"))
}

/// `H_n` at the zeros of `H_{n-1}`, i.e. at the local extrema of `H_n`.
pub fn local_extrema(n: usize) -> Result<Vec<(f64, HermiteEval)>> {
    if n < 2 {
        return Err(Error::InvalidDegree {
            what: "local_extrema",
            n,
            requirement: "n >= 2",
        });
    }
    let zeros = hermite_zeros(n - 1)?;
    Ok(zeros.zeros.iter().map(|&t| (t, eval_hermite(n, t))).collect())
}

/// `ln Θ_n(t)` with `Θ_n = 2n H_n² + H_n'²`. `Θ_n' = 4t H_n'² ≥ 0`, so this
/// is non-decreasing on `t ≥ 0`.
pub fn theta_functional_ln(n: usize, t: f64) -> f64 {
    let h = eval_hermite(n, t);
    let d = eval_hermite_derivative(n, t);
    let a = 2.0 * h.log_abs + (2.0 * n as f64).ln();
    let b = 2.0 * d.log_abs;
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// `e^{-t²} Θ_n(t)`, overflow-free for moderate `t`.
pub fn theta_functional(n: usize, t: f64) -> f64 {
    (theta_functional_ln(n, t) - t * t).exp()
}

/// `(√(2n+1) - t_{n,n}) √6 (2n+1)^{1/6}`: the largest zero approaches
/// `√(2n+1)` at rate `(2n+1)^{-1/6}` and this rescaled gap tends to an
/// Airy-zero constant. A consistency probe on the zero finder.
pub fn first_zero_asymptotic_residual(n: usize) -> Result<f64> {
    let table = hermite_zeros(n)?;
    let largest = *table.zeros.last().expect("n >= 1");
    let m = 2.0 * n as f64 + 1.0;
    Ok((m.sqrt() - largest) * 6f64.sqrt() * m.powf(1.0 / 6.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Brute-force monomial expansion, valid for small n only.
    fn hermite_monomial(n: usize, t: f64) -> f64 {
        let mut coeffs: Vec<Vec<f64>> = vec![vec![1.0], vec![0.0, 2.0]];
        for k in 2..=n {
            let mut c = vec![0.0; k + 1];
            for (i, a) in coeffs[k - 1].iter().enumerate() {
                c[i + 1] += 2.0 * a;
            }
            for (i, a) in coeffs[k - 2].iter().enumerate() {
                c[i] -= 2.0 * (k - 1) as f64 * a;
            }
            coeffs.push(c);
        }
        coeffs[n].iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    #[test]
    fn low_degree_values() {
        let h0 = eval_hermite(0, 1.7);
        assert_eq!((h0.sign, h0.log_abs), (1, 0.0));
        let h1 = eval_hermite(1, -0.5);
        assert_eq!(h1.sign, -1);
        assert!(h1.log_abs.abs() < 1e-15);
        let h3 = eval_hermite(3, 0.5f64.sqrt());
        assert!((h3.value() + 4.0 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn derivative_examples() {
        let d = eval_hermite_derivative(1, 0.3);
        assert!((d.value() - 2.0).abs() < 1e-15);
        let d = eval_hermite_derivative(3, 0.0);
        assert!((d.value() + 12.0).abs() < 1e-12);
        assert_eq!(eval_hermite_derivative(0, 1.0).sign, 0);
    }

    #[test]
    fn matches_monomial_expansion() {
        for n in 0..=12 {
            for &t in &[-3.1, -1.0, -0.2, 0.0, 0.7, 2.5] {
                let a = eval_hermite(n, t).value();
                let b = hermite_monomial(n, t);
                assert!((a - b).abs() <= 1e-11 * b.abs().max(1.0), "n={n} t={t} {a} {b}");
            }
        }
    }

    #[test]
    fn no_overflow_at_large_degree() {
        let n = 10_000;
        let t = 2.0 * (2.0 * n as f64 + 1.0).sqrt();
        let h = eval_hermite(n, t);
        assert!(h.log_abs.is_finite());
        assert_eq!(h.sign, 1);
        let h = eval_hermite(n, 0.37);
        assert!(h.log_abs.is_finite());
        assert!(h.scaled.abs() < 1.1);
    }

    #[test]
    fn small_zero_tables() {
        assert_eq!(hermite_zeros(1).unwrap().zeros, vec![0.0]);
        let z2 = hermite_zeros(2).unwrap().zeros;
        assert!((z2[1] - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(z2[0], -z2[1]);
        let z3 = hermite_zeros(3).unwrap().zeros;
        assert!((z3[2] - 1.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(z3[1], 0.0);
        assert!(matches!(hermite_zeros(0), Err(Error::InvalidDegree { .. })));
    }

    #[test]
    fn zero_residuals_and_interlacing() {
        let tables = hermite_zero_tables(50).unwrap();
        for (k, table) in tables.iter().enumerate() {
            let n = k + 1;
            assert_eq!(table.len(), n);
            for &z in &table.zeros {
                assert!(eval_hermite(n, z).scaled.abs() < 1e-12, "n={n} z={z}");
            }
            for w in table.zeros.windows(2) {
                assert!(w[0] < w[1]);
            }
            if k > 0 {
                let prev = &tables[k - 1].zeros;
                for (i, p) in prev.iter().enumerate() {
                    assert!(table.zeros[i] < *p && *p < table.zeros[i + 1]);
                }
            }
        }
    }

    #[test]
    fn norm_values() {
        assert!((hermite_norm_sq(0) - 0.5723649429247001).abs() < 1e-15);
        assert!((hermite_norm_sq(1) - (2.0 * PI.sqrt()).ln()).abs() < 1e-15);
    }

    #[test]
    fn normalised_recurrence_agrees_with_log_form() {
        for &t in &[-6.0, -2.2, 0.0, 0.4, 3.3, 9.0] {
            let h = hermite_functions(60, t);
            for (n, v) in h.iter().enumerate() {
                let w = eval_hermite(n, t).scaled;
                assert!((v - w).abs() <= 1e-12 * w.abs().max(1e-300) + 1e-300, "n={n} t={t}");
            }
        }
    }

    #[test]
    fn theta_functional_at_zero() {
        // Θ_1(0) = 2·1·0 + 2² = 4
        assert!((theta_functional(1, 0.0) - 4.0).abs() < 1e-14);
        assert!((theta_functional_ln(1, 0.0) - 4f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn theta_monotone_n7() {
        let mut last = f64::NEG_INFINITY;
        for k in 0..10_000 {
            let t = 6.0 * k as f64 / 9_999.0;
            let v = theta_functional_ln(7, t);
            assert!(v >= last - 1e-12, "t={t}");
            last = v;
        }
    }

    #[test]
    fn successive_maxima_increase_n6() {
        let ext = local_extrema(6).unwrap();
        let positive: Vec<f64> = ext.iter().filter(|(t, _)| *t >= 0.0).map(|(_, h)| h.log_abs).collect();
        assert!(positive.len() >= 2);
        for w in positive.windows(2) {
            assert!(w[1] > w[0]);
        }
    }

    #[test]
    fn airy_residual_probe() {
        let r50 = first_zero_asymptotic_residual(50).unwrap();
        let r100 = first_zero_asymptotic_residual(100).unwrap();
        let r200 = first_zero_asymptotic_residual(200).unwrap();
        let r400 = first_zero_asymptotic_residual(400).unwrap();
        assert!((r50 - r200).abs() < 0.05);
        assert!((r400 - r200).abs() < (r100 - r50).abs());
        for r in [r50, r100, r200, r400] {
            assert!((4.4..=4.7).contains(&r), "{r}");
        }
    }

    #[test]
    fn zero_table_csv() {
        let csv = hermite_zeros(3).unwrap().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[2], "2,0.0000000000000000e0");
    }

    proptest! {
        #[test]
        fn parity_is_exact(n in 0usize..40, t in -8.0f64..8.0) {
            let a = eval_hermite(n, t);
            let b = eval_hermite(n, -t);
            prop_assert_eq!(a.log_abs, b.log_abs);
            let expected = if n % 2 == 0 { a.sign } else { -a.sign };
            prop_assert_eq!(b.sign, expected);
        }

        #[test]
        fn derivative_identity_vs_finite_difference(n in 1usize..=12, t in -5.0f64..5.0) {
            let h = 1e-5;
            let fd = (eval_hermite(n, t + h).value() - eval_hermite(n, t - h).value()) / (2.0 * h);
            let d = eval_hermite_derivative(n, t).value();
            let scale = d.abs().max(eval_hermite(n, t).value().abs()).max(1.0);
            prop_assert!((fd - d).abs() <= 1e-6 * scale, "fd={} d={}", fd, d);
        }

        #[test]
        fn scaled_invariant(n in 0usize..200, t in -20.0f64..20.0) {
            let e = eval_hermite(n, t);
            prop_assert!(e.scaled.abs() <= 1.1);
            if e.scaled.abs() > 1e-300 {
                let ln_norm = hermite_norm_sq(n);
                let rebuilt = e.sign as f64 * (e.log_abs - 0.5 * t * t - 0.5 * ln_norm).exp();
                prop_assert!((rebuilt - e.scaled).abs() <= 1e-12 * e.scaled.abs());
            }
        }
    }
}

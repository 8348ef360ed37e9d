//! Upper bounds for the number of nodal domains of eigenfunctions in the
//! eigenspace `E_ℓ` (eigenvalue `2(ℓ+1)`, spanned by `φ_{ℓ-j,j}`), and an
//! empirical check of the parity-improved bound on random elements.
//!
//! - Courant: `μ_C(ℓ) = ℓ(ℓ+1)/2 + 1`, one more than the number of
//!   eigenvalues below `2(ℓ+1)` counted with multiplicity.
//! - Parity-improved: `μ_L(2r) = 2(r² + 1)`, `μ_L(2r+1) = 2r(r+1) + 2`.
//!
//! `μ_L(ℓ) < μ_C(ℓ)` for ℓ ≥ 3, so only ℓ ≤ 2 can be Courant sharp.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermite::hermite_functions;
use crate::nodal::{count_domains, SampleLines, SignGrid};

pub const DEFAULT_SEED: u64 = 20_240_601;
pub const DEFAULT_RESOLUTION: usize = 768;
/// Half-width factor applied to `√(2ℓ+1) + 1.5`.
pub const DEFAULT_BOX_FACTOR: f64 = 2.0;
/// Largest ℓ accepted by the empirical check.
pub const MAX_EMPIRICAL_ELL: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CourantBounds {
    pub ell: usize,
    pub mu_c: u64,
    pub mu_l: u64,
    pub courant_sharp_possible: bool,
}

pub fn courant_bounds(ell: usize) -> CourantBounds {
    let l = ell as u64;
    let mu_c = l * (l + 1) / 2 + 1;
    let r = l / 2;
    let mu_l = if l.is_multiple_of(2) { 2 * (r * r + 1) } else { 2 * r * (r + 1) + 2 };
    CourantBounds {
        ell,
        mu_c,
        mu_l,
        courant_sharp_possible: ell <= 2,
    }
}

pub fn courant_table(l_max: usize) -> Vec<CourantBounds> {
    (0..=l_max).map(courant_bounds).collect()
}

pub fn courant_table_csv(l_max: usize) -> String {
    let mut out = String::from("ell,mu_C,mu_L,sharp\n");
    for b in courant_table(l_max) {
        out.push_str(&format!("{},{},{},{}\n", b.ell, b.mu_c, b.mu_l, b.courant_sharp_possible));
    }
    out
}

/// `Σ_j c_j ĥ_{ℓ-j}(x) ĥ_j(y)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenspaceElement {
    pub ell: usize,
    pub coefficients: Vec<f64>,
}

impl EigenspaceElement {
    pub fn new(ell: usize, coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.len() != ell + 1 {
            return Err(Error::InvalidInput(format!(
                "E_{ell} needs {} coefficients, got {}",
                ell + 1,
                coefficients.len()
            )));
        }
        Ok(EigenspaceElement { ell, coefficients })
    }

    /// Coefficients uniform on the unit sphere of `R^{ℓ+1}`.
    pub fn random_full(ell: usize, rng: &mut impl Rng) -> Self {
        let mut c: Vec<f64> = (0..=ell).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let norm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
        c.iter_mut().for_each(|v| *v /= norm);
        EigenspaceElement { ell, coefficients: c }
    }

    /// `cos α φ_{ℓ-j,j} + sin α φ_{ℓ-k,k}` for random `j ≠ k` and α (a single
    /// product term when ℓ = 0).
    pub fn random_two_term(ell: usize, rng: &mut impl Rng) -> Self {
        let mut c = vec![0.0; ell + 1];
        if ell == 0 {
            c[0] = 1.0;
        } else {
            let j = rng.random_range(0..=ell);
            let mut k = rng.random_range(0..ell);
            if k >= j {
                k += 1;
            }
            let alpha: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            c[j] = alpha.cos();
            c[k] = alpha.sin();
        }
        EigenspaceElement { ell, coefficients: c }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let hx = hermite_functions(self.ell, x);
        let hy = hermite_functions(self.ell, y);
        self.coefficients
            .iter()
            .enumerate()
            .map(|(j, c)| c * hx[self.ell - j] * hy[j])
            .sum()
    }

    /// `|u(-x,-y) - (-1)^ℓ u(x,y)|` relative to `|u(x,y)|`.
    pub fn parity_residual(&self, x: f64, y: f64) -> f64 {
        let u = self.eval(x, y);
        let v = self.eval(-x, -y);
        let sign = if self.ell.is_multiple_of(2) { 1.0 } else { -1.0 };
        let m = u.abs().max(v.abs());
        if m == 0.0 {
            0.0
        } else {
            (v - sign * u).abs() / m
        }
    }

    /// Nodal domains inside `[-half, half]²`, `half = box_factor (√(2ℓ+1) + 1.5)`.
    pub fn domain_count(&self, resolution: usize, box_factor: f64) -> usize {
        let half = box_factor * (((2 * self.ell + 1) as f64).sqrt() + 1.5);
        let grid = SignGrid::from_fn(SampleLines::square(half, resolution, &[], &[]), |x, y| self.eval(x, y));
        count_domains(&grid).total
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalSample {
    /// "full" or "two-term".
    pub kind: String,
    pub coefficients: Vec<f64>,
    pub domain_count: usize,
    pub parity_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalReport {
    pub ell: usize,
    pub bounds: CourantBounds,
    pub seed: u64,
    pub samples: Vec<EmpiricalSample>,
    /// Indices of samples with more than `μ_L` domains.
    pub violations: Vec<usize>,
    /// Indices of samples of odd ℓ with an odd domain count.
    pub parity_count_violations: Vec<usize>,
    pub max_parity_residual: f64,
}

impl EmpiricalReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty() && self.parity_count_violations.is_empty() && self.max_parity_residual < 1e-12
    }

    pub fn max_domain_count(&self) -> usize {
        self.samples.iter().map(|s| s.domain_count).max().unwrap_or(0)
    }
}

/// Counts nodal domains of `samples` random elements of `E_ℓ` (alternating
/// full-coefficient and two-term elements) and checks `μ ≤ μ_L(ℓ)`, the
/// evenness of counts for odd ℓ, and the parity `u(-x,-y) = (-1)^ℓ u(x,y)`.
/// Sample `k` draws from its own generator seeded with `seed + k`, so the
/// report does not depend on thread scheduling.
pub fn empirical_domain_bound_check(ell: usize, samples: usize, seed: u64, resolution: usize) -> Result<EmpiricalReport> {
    if ell > MAX_EMPIRICAL_ELL {
        return Err(Error::InvalidInput(format!(
            "empirical check supports ℓ ≤ {MAX_EMPIRICAL_ELL}, got {ell}"
        )));
    }
    let bounds = courant_bounds(ell);
    let results: Vec<EmpiricalSample> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
            let (kind, u) = if k % 2 == 0 {
                ("full", EigenspaceElement::random_full(ell, &mut rng))
            } else {
                ("two-term", EigenspaceElement::random_two_term(ell, &mut rng))
            };
            let parity_residual = (0..8)
                .map(|_| {
                    let x = rng.random_range(-3.0..3.0);
                    let y = rng.random_range(-3.0..3.0);
                    u.parity_residual(x, y)
                })
                .fold(0.0, f64::max);
            EmpiricalSample {
                kind: kind.into(),
                domain_count: u.domain_count(resolution, DEFAULT_BOX_FACTOR),
                coefficients: u.coefficients,
                parity_residual,
            }
        })
        .collect();
    let violations = results
        .iter()
        .enumerate()
        .filter(|(_, s)| s.domain_count as u64 > bounds.mu_l)
        .map(|(k, _)| k)
        .collect();
    let parity_count_violations = results
        .iter()
        .enumerate()
        .filter(|(_, s)| ell % 2 == 1 && s.domain_count % 2 == 1)
        .map(|(k, _)| k)
        .collect();
    let max_parity_residual = results.iter().map(|s| s.parity_residual).fold(0.0, f64::max);
    Ok(EmpiricalReport {
        ell,
        bounds,
        seed,
        samples: results,
        violations,
        parity_count_violations,
        max_parity_residual,
    })
}

//! Critical zeros of `Φ^θ_n` and the table of critical angles.
//!
//! A critical zero must sit at a point `(t_{n-1,i}, t_{n-1,j})` built from
//! zeros of `H_{n-1}`, and it is a zero exactly when θ solves
//! `cos θ H_n(t_{n-1,i}) + sin θ H_n(t_{n-1,j}) = 0`. Every such θ in
//! `(0, π)` is a critical angle; between consecutive critical angles the
//! nodal set is a smooth curve whose topology does not change.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::error::{Error, Result};
use crate::hermite::{eval_hermite, hermite_zero_tables, HermiteEval};

/// Tolerance for deciding that an input θ is one of the critical angles.
pub const CRITICAL_ANGLE_TOL: f64 = 1e-12;
/// Tolerance used to merge equal critical values.
pub const DISTINCT_TOL: f64 = 1e-10;

pub const THREE_QUARTER_PI: f64 = PI * 3.0 / 4.0;

fn check_odd(n: usize, min: usize) -> Result<()> {
    if n.is_multiple_of(2) {
        return Err(Error::EvenDegree(n));
    }
    if n < min {
        return Err(Error::InvalidDegree {
            what: "critical",
            n,
            requirement: "odd n >= 3",
        });
    }
    Ok(())
}

/// `(cos θ a + sin θ b) / max(|a|, |b|)` for `a`, `b` in log form.
fn combine(c: f64, s: f64, a: &HermiteEval, b: &HermiteEval) -> f64 {
    let m = a.log_abs.max(b.log_abs);
    let term = |h: &HermiteEval| if h.sign == 0 { 0.0 } else { h.sign as f64 * (h.log_abs - m).exp() };
    c * term(a) + s * term(b)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalAngleEntry {
    /// 1-based index into the zeros of `H_{n-1}` (x coordinate).
    pub i: usize,
    /// 1-based index into the zeros of `H_{n-1}` (y coordinate).
    pub j: usize,
    pub theta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularInterval {
    pub lo: f64,
    pub hi: f64,
}

impl RegularInterval {
    pub fn contains(&self, theta: f64) -> bool {
        theta > self.lo && theta < self.hi
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalAngleTable {
    pub n: usize,
    pub entries: Vec<CriticalAngleEntry>,
    pub theta_c: f64,
    /// Distinct critical values, ascending.
    pub distinct: Vec<f64>,
    /// Open intervals between consecutive breakpoints of `[0, π]`.
    ///
    /// The breakpoints are the distinct critical values plus 0, π/2 and π:
    /// at θ = 0 and θ = π/2 the function degenerates to a single product
    /// eigenfunction whose nodal set is `n` parallel lines, so the topology
    /// also changes there even though no critical zero exists.
    pub regular_intervals: Vec<RegularInterval>,
    /// Zeros of `H_{n-1}`.
    pub extrema: Vec<f64>,
    /// `H_n` at the zeros of `H_{n-1}`.
    #[serde(skip)]
    pub extremum_values: Vec<HermiteEval>,
}

/// The unique θ in `(0, π)` with `cos θ a + sin θ b = 0`.
fn solve_angle(a: &HermiteEval, b: &HermiteEval) -> f64 {
    assert!(a.sign != 0 && b.sign != 0, "H_n and H_{{n-1}} share no zero");
    if a.sign == b.sign && a.log_abs == b.log_abs {
        return THREE_QUARTER_PI;
    }
    let tan = -(a.sign * b.sign) as f64 * (a.log_abs - b.log_abs).exp();
    if tan > 0.0 {
        tan.atan()
    } else {
        PI + tan.atan()
    }
}

pub fn critical_angles(n: usize) -> Result<CriticalAngleTable> {
    check_odd(n, 3)?;
    let tables = hermite_zero_tables(n - 1)?;
    let extrema = tables[n - 2].zeros.clone();
    let values: Vec<HermiteEval> = extrema.iter().map(|&t| eval_hermite(n, t)).collect();
    let mut entries = Vec::with_capacity((n - 1) * (n - 1));
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            entries.push(CriticalAngleEntry {
                i: i + 1,
                j: j + 1,
                theta: solve_angle(&values[i], &values[j]),
            });
        }
    }
    let theta_c = entries.iter().map(|e| e.theta).fold(f64::INFINITY, f64::min);

    let mut sorted: Vec<f64> = entries.iter().map(|e| e.theta).collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite angles"));
    let mut distinct: Vec<f64> = Vec::new();
    for v in sorted {
        match distinct.last() {
            Some(&last) if (v - last).abs() <= DISTINCT_TOL => {}
            _ => distinct.push(v),
        }
    }

    let mut breaks = vec![0.0, PI / 2.0, PI];
    breaks.extend(distinct.iter().copied());
    breaks.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    breaks.dedup_by(|a, b| (*a - *b).abs() <= DISTINCT_TOL);
    let regular_intervals = breaks
        .windows(2)
        .map(|w| RegularInterval { lo: w[0], hi: w[1] })
        .collect();

    Ok(CriticalAngleTable {
        n,
        entries,
        theta_c,
        distinct,
        regular_intervals,
        extrema,
        extremum_values: values,
    })
}

impl CriticalAngleTable {
    pub fn theta(&self, i: usize, j: usize) -> f64 {
        self.entries[(i - 1) * (self.n - 1) + (j - 1)].theta
    }

    /// `|cos θ H_n(t_{n-1,i}) + sin θ H_n(t_{n-1,j})|`, relative to the
    /// larger of the two Hermite values.
    pub fn residual(&self, entry: &CriticalAngleEntry) -> f64 {
        let a = &self.extremum_values[entry.i - 1];
        let b = &self.extremum_values[entry.j - 1];
        combine(entry.theta.cos(), entry.theta.sin(), a, b).abs()
    }

    pub fn is_critical(&self, theta: f64, tol: f64) -> bool {
        self.distinct.iter().any(|v| (v - theta).abs() <= tol)
    }

    pub fn interval_index(&self, theta: f64) -> Option<usize> {
        self.regular_intervals.iter().position(|r| r.contains(theta))
    }

    /// The regular interval adjacent to a critical value on the given side.
    pub fn interval_below(&self, value: f64) -> Option<RegularInterval> {
        self.regular_intervals
            .iter()
            .copied()
            .find(|r| (r.hi - value).abs() <= DISTINCT_TOL)
    }

    pub fn interval_above(&self, value: f64) -> Option<RegularInterval> {
        self.regular_intervals
            .iter()
            .copied()
            .find(|r| (r.lo - value).abs() <= DISTINCT_TOL)
    }

    pub fn zeros_at(&self, angle: &Angle, tol: f64) -> Vec<CriticalZero> {
        let theta = angle.radians();
        let (c, s) = angle.coefficients();
        let n = self.n;
        let second = |t: f64| eval_hermite(n - 2, t).sign as f64 * (4 * n * (n - 1)) as f64;
        self.entries
            .iter()
            .filter(|e| (e.theta - theta).abs() <= tol)
            .map(|e| {
                let (a, b) = (self.extrema[e.i - 1], self.extrema[e.j - 1]);
                let sx = sign_i8(c * second(a));
                let sy = sign_i8(s * second(b));
                CriticalZero {
                    i: e.i,
                    j: e.j,
                    location: (a, b),
                    hessian_signature: (sx, sy),
                }
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("# n={} theta_c={}\ni,j,theta_ij\n", self.n, crate::fmt_f64(self.theta_c));
        for e in &self.entries {
            out.push_str(&format!("{},{},{}\n", e.i, e.j, crate::fmt_f64(e.theta)));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "schema": crate::SCHEMA_VERSION,
            "n": self.n,
            "theta_c": self.theta_c,
            "distinct": self.distinct,
            "regular_intervals": self.regular_intervals.iter().map(|r| [r.lo, r.hi]).collect::<Vec<_>>(),
            "entries": self.entries,
        })
    }
}

fn sign_i8(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// A double crossing of the nodal set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalZero {
    pub i: usize,
    pub j: usize,
    pub location: (f64, f64),
    /// Signs of `cos θ H_n''(t_{n-1,i})` and `sin θ H_n''(t_{n-1,j})`, the
    /// diagonal of the Hessian up to a positive factor. Opposite signs make the
    /// point a saddle and its zero set two transversal branches.
    pub hessian_signature: (i8, i8),
}

pub fn critical_zeros_at(n: usize, angle: &Angle) -> Result<Vec<CriticalZero>> {
    Ok(critical_angles(n)?.zeros_at(angle, CRITICAL_ANGLE_TOL))
}

/// How a double crossing on the diagonal opens when θ moves off 3π/4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Opening {
    /// The vertical line through the former crossing carries no zero nearby.
    Vertical,
    /// The horizontal line through the former crossing carries no zero nearby.
    Horizontal,
}

/// Local sign configuration at the crossing `(t_{n-1,i}, t_{n-1,i})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignCase {
    /// `i` even.
    I,
    /// `i` odd.
    II,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesingularizationVerdict {
    pub n: usize,
    pub i: usize,
    pub epsilon: f64,
    pub case: SignCase,
    /// `(-1)^i (H_n(t) - (1+ε) H_n(t_{n-1,i})) ≥ 0` on the whole interval.
    pub vertical_holds: bool,
    /// `(-1)^{i+1} (H_n(t_{n-1,i}) - (1-ε) H_n(t)) ≥ 0` on the whole interval.
    pub horizontal_holds: bool,
    /// Opening produced by weighting `H_n(x)` with `1+ε` (θ above 3π/4).
    pub positive_epsilon: Opening,
    /// Opening produced by weighting `H_n(x)` with `1-ε` (θ below 3π/4).
    pub negative_epsilon: Opening,
    /// First violating grid point and the offending value, if any.
    pub counterexample: Option<(f64, f64)>,
}

impl DesingularizationVerdict {
    pub fn holds(&self) -> bool {
        self.vertical_holds && self.horizontal_holds
    }
}

/// Checks on a 1000-point grid of `(t_{n,i}, t_{n,i+1})` the sign
/// inequalities that make every crossing at θ = 3π/4 open the same way.
pub fn desingularization_signs(n: usize, i: usize, epsilon: f64) -> Result<DesingularizationVerdict> {
    check_odd(n, 3)?;
    if i == 0 || i >= n {
        return Err(Error::InvalidInput(format!("index i = {i} must lie in 1..={}", n - 1)));
    }
    if !(0.0..=0.05).contains(&epsilon) {
        return Err(Error::InvalidInput(format!("epsilon = {epsilon} must lie in [0, 0.05]")));
    }
    let tables = hermite_zero_tables(n)?;
    let zn = &tables[n - 1].zeros;
    let a = tables[n - 2].zeros[i - 1];
    let ha = eval_hermite(n, a);
    let sign_i = if i.is_multiple_of(2) { 1.0 } else { -1.0 };
    let (lo, hi) = (zn[i - 1], zn[i]);
    // values normalised by |H_n(t_{n-1,i})|; only rounding is tolerated
    let tol = -1e-12;
    let mut vertical_holds = true;
    let mut horizontal_holds = true;
    let mut counterexample = None;
    let points = 1000;
    for k in 1..=points {
        let t = lo + (hi - lo) * k as f64 / (points + 1) as f64;
        let ht = eval_hermite(n, t);
        let rel = if ht.sign == 0 { 0.0 } else { ht.sign as f64 * (ht.log_abs - ha.log_abs).exp() };
        let ra = ha.sign as f64;
        let displayed = sign_i * (rel - (1.0 + epsilon) * ra);
        let mirrored = -sign_i * (ra - (1.0 - epsilon) * rel);
        if displayed < tol {
            vertical_holds = false;
            counterexample.get_or_insert((t, displayed));
        }
        if mirrored < tol {
            horizontal_holds = false;
            counterexample.get_or_insert((t, mirrored));
        }
    }
    Ok(DesingularizationVerdict {
        n,
        i,
        epsilon,
        case: if i.is_multiple_of(2) { SignCase::I } else { SignCase::II },
        vertical_holds,
        horizontal_holds,
        positive_epsilon: Opening::Vertical,
        negative_epsilon: Opening::Horizontal,
        counterexample,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VjVerdict {
    pub n: usize,
    pub theta: f64,
    pub theta_c: f64,
    pub checked: usize,
    /// `(i, j, normalised v_j(t_{n-1,i}))` for every wrong sign.
    pub violations: Vec<(usize, usize, f64)>,
}

impl VjVerdict {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `v_j(t_{n-1,i}) = cos θ H_n(t_{n-1,j}) + sin θ H_n(t_{n-1,i})` must have
/// the sign `(-1)^{j+1}` for all `i, j` whenever `0 < θ < θ_c`. Angles above
/// θ_c are accepted and report the violated signs.
pub fn vj_sign_check(n: usize, theta: f64) -> Result<VjVerdict> {
    let table = critical_angles(n)?;
    Ok(vj_sign_check_with(&table, theta))
}

pub fn vj_sign_check_with(table: &CriticalAngleTable, theta: f64) -> VjVerdict {
    let (c, s) = (theta.cos(), theta.sin());
    let vals = &table.extremum_values;
    let m = table.n - 1;
    let mut violations = Vec::new();
    for j in 1..=m {
        let want = if (j + 1) % 2 == 0 { 1.0 } else { -1.0 };
        for i in 1..=m {
            let v = combine(c, s, &vals[j - 1], &vals[i - 1]);
            // NaN counts as a violation
            if (want * v).partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
                violations.push((i, j, v));
            }
        }
    }
    VjVerdict {
        n: table.n,
        theta,
        theta_c: table.theta_c,
        checked: m * m,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn n3_table() {
        let t = critical_angles(3).unwrap();
        assert_eq!(t.entries.len(), 4);
        assert!((t.theta(1, 1) - THREE_QUARTER_PI).abs() < 1e-15);
        assert!((t.theta(2, 2) - THREE_QUARTER_PI).abs() < 1e-15);
        assert!((t.theta(1, 2) - FRAC_PI_4).abs() < 1e-12);
        assert!((t.theta(2, 1) - FRAC_PI_4).abs() < 1e-12);
        assert!((t.theta_c - FRAC_PI_4).abs() < 1e-12);
        assert_eq!(t.distinct.len(), 2);
    }

    #[test]
    fn diagonal_entries_are_three_quarter_pi() {
        for n in [5, 7, 9, 11] {
            let t = critical_angles(n).unwrap();
            for i in 1..n {
                assert_eq!(t.theta(i, i), THREE_QUARTER_PI);
            }
        }
    }

    #[test]
    fn residuals_and_reciprocal_tangents() {
        for n in [5, 7, 9] {
            let t = critical_angles(n).unwrap();
            assert!(t.theta_c > 0.0);
            assert!(t.distinct.len() <= (n - 1) * (n - 1));
            for e in &t.entries {
                assert!(e.theta > 0.0 && e.theta < PI);
                assert!(t.residual(e) < 1e-12, "n={n} {e:?}");
                let back = t.theta(e.j, e.i);
                assert!((e.theta.tan() * back.tan() - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn regular_intervals_cover_zero_to_pi() {
        let t = critical_angles(7).unwrap();
        assert_eq!(t.regular_intervals.first().unwrap().lo, 0.0);
        assert_eq!(t.regular_intervals.last().unwrap().hi, PI);
        for w in t.regular_intervals.windows(2) {
            assert_eq!(w[0].hi, w[1].lo);
        }
        assert!(t.interval_index(PI / 2.0).is_none());
        let below = t.interval_below(THREE_QUARTER_PI).unwrap();
        let above = t.interval_above(THREE_QUARTER_PI).unwrap();
        assert_eq!(below.hi, above.lo);
    }

    #[test]
    fn critical_zero_lists() {
        assert!(critical_zeros_at(3, &Angle::from_radians(0.4).unwrap()).unwrap().is_empty());
        let tq = Angle::from_fraction_of_pi(3, 4).unwrap();
        let z3 = critical_zeros_at(3, &tq).unwrap();
        assert_eq!(z3.len(), 2);
        assert!(z3.iter().all(|z| z.i == z.j));
        let z7 = critical_zeros_at(7, &tq).unwrap();
        assert_eq!(z7.len(), 6);
        for z in &z7 {
            assert_eq!(z.i, z.j);
            assert_eq!(z.location.0, z.location.1);
            assert_eq!(z.hessian_signature.0, -z.hessian_signature.1);
        }
    }

    #[test]
    fn hessian_signature_matches_analytic_hessian() {
        use crate::oscillator::Superposition;
        let table = critical_angles(7).unwrap();
        for e in table.entries.iter().step_by(5) {
            let angle = Angle::from_radians(e.theta).unwrap();
            let zs = table.zeros_at(&angle, CRITICAL_ANGLE_TOL);
            let s = Superposition::new(7, angle).unwrap();
            for z in zs {
                let h = s.hessian(z.location.0, z.location.1);
                assert_eq!(sign_i8(h[0][0]), z.hessian_signature.0);
                assert_eq!(sign_i8(h[1][1]), z.hessian_signature.1);
                let diag = h[0][0].abs().min(h[1][1].abs());
                assert!(h[0][1].abs() < 1e-10 * diag);
                // finite-difference cross check of the mixed derivative
                let (x, y) = z.location;
                let d = 1e-4;
                let fd = (s.eval(x + d, y + d) - s.eval(x + d, y - d) - s.eval(x - d, y + d) + s.eval(x - d, y - d))
                    / (4.0 * d * d);
                assert!(fd.abs() < 1e-6 * diag.max(1e-3));
            }
        }
    }

    #[test]
    fn desingularization_examples() {
        let v = desingularization_signs(7, 3, 0.01).unwrap();
        assert!(v.holds(), "{v:?}");
        let v = desingularization_signs(3, 1, 0.02).unwrap();
        assert!(v.holds());
        assert_eq!(v.case, SignCase::II);
        assert_eq!(desingularization_signs(5, 2, 0.01).unwrap().case, SignCase::I);
        let v0 = desingularization_signs(5, 2, 0.0).unwrap();
        assert!(v0.holds());
        assert!(desingularization_signs(5, 5, 0.01).is_err());
        assert!(desingularization_signs(5, 1, 0.2).is_err());
    }

    #[test]
    fn vj_examples() {
        assert!(vj_sign_check(3, PI / 8.0).unwrap().holds());
        let t7 = critical_angles(7).unwrap();
        let v = vj_sign_check_with(&t7, 0.99 * t7.theta_c);
        assert!(v.holds());
        assert_eq!(v.checked, 36);
        let bad = vj_sign_check(3, FRAC_PI_4 + 0.01).unwrap();
        assert!(!bad.violations.is_empty());
    }

    #[test]
    fn vj_matches_sine_form() {
        let t = critical_angles(7).unwrap();
        let theta = 0.5 * t.theta_c;
        for i in 1..7 {
            for j in 1..7 {
                let hj = t.extremum_values[j - 1].value();
                let hi = t.extremum_values[i - 1].value();
                let direct = theta.cos() * hj + theta.sin() * hi;
                let tji = t.theta(j, i);
                let via = hj * (tji - theta).sin() / tji.sin();
                assert!((direct - via).abs() <= 1e-10 * direct.abs().max(hj.abs()));
            }
        }
    }

    #[test]
    fn even_and_small_degrees_rejected() {
        assert_eq!(critical_angles(4).unwrap_err(), Error::EvenDegree(4));
        assert!(matches!(critical_angles(1), Err(Error::InvalidDegree { .. })));
    }

    #[test]
    fn csv_and_json_exports() {
        let t = critical_angles(9).unwrap();
        let csv = t.to_csv();
        assert!(csv.starts_with("# n=9 theta_c="));
        assert_eq!(csv.lines().count(), 2 + 64);
        let j = t.to_json();
        assert_eq!(j["schema"], 1);
        assert!(j["regular_intervals"].as_array().unwrap().len() >= 3);
    }
}

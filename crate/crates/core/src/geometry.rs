//! Barrier constants that confine the nodal set of `Φ^θ_n` to a box outside
//! of which it consists of two unbounded arcs.
//!
//! For θ in `(0, π/4]` and `M = H_n(t_{n-1,1})` (the first local maximum of
//! `H_n`, positive for odd n):
//!
//! - `t_left` is the unique `t < t_{n,1}` with `H_n(t) = -M`;
//! - `t_top` is the unique `t > t_{n,n}` with `tan θ H_n(t) = M`.
//!
//! Other angles are brought into `(0, π/4]` by the reflections
//! `Φ^θ(-x, y) = Φ^{π-θ}(x, y)` and `Φ^θ(y, x) = Φ^{π/2-θ}(x, y)`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::error::{Error, Result};
use crate::hermite::{eval_hermite, hermite_zero_tables};
use crate::oscillator::polynomial_normalized_with;
use crate::roots::{safeguarded_newton, sampled_zeros};

pub const DEFAULT_MARGIN: f64 = 1.25;

/// Samples used for 1-D zero counting on a bounded interval.
const LINE_SAMPLES: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Rect {
    pub fn square(half_width: f64) -> Self {
        Rect {
            x_min: -half_width,
            x_max: half_width,
            y_min: -half_width,
            y_max: half_width,
        }
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x_min && x <= self.x_max && y >= self.y_min && y <= self.y_max
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        self.x_min <= other.x_min && self.x_max >= other.x_max && self.y_min <= other.y_min && self.y_max >= other.y_max
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }
}

fn check_odd(n: usize) -> Result<()> {
    if n.is_multiple_of(2) {
        return Err(Error::EvenDegree(n));
    }
    if n < 3 {
        return Err(Error::InvalidDegree {
            what: "barrier",
            n,
            requirement: "odd n >= 3",
        });
    }
    Ok(())
}

fn check_barrier_angle(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta <= FRAC_PI_4 * (1.0 + 1e-15)) {
        return Err(Error::InvalidAngle(format!("barrier constants need θ in (0, π/4], got {theta}")));
    }
    Ok(())
}

/// Zeros of `H_n` plus `ln M`.
struct Levels {
    zn: Vec<f64>,
    ln_m: f64,
}

fn levels(n: usize) -> Result<Levels> {
    let tables = hermite_zero_tables(n)?;
    let zn = tables[n - 1].zeros.clone();
    let m = eval_hermite(n, tables[n - 2].zeros[0]);
    debug_assert_eq!(m.sign, 1);
    Ok(Levels { zn, ln_m: m.log_abs })
}

/// Solves `H_n(t) / M = target` on a monotone bracket of `H_n`.
fn solve_level(n: usize, ln_m: f64, target: f64, lo: f64, hi: f64) -> Option<f64> {
    let rel = |h: &crate::hermite::HermiteEval| {
        if h.sign == 0 {
            0.0
        } else {
            h.sign as f64 * (h.log_abs - ln_m).exp()
        }
    };
    let eval = |t: f64| {
        let f = rel(&eval_hermite(n, t)) - target;
        let d = (2 * n) as f64 * rel(&eval_hermite(n - 1, t));
        (f, f / d)
    };
    safeguarded_newton(eval, lo, hi, 0.5 * (lo + hi), 200)
}

/// The unique `t < t_{n,1}` with `H_n(t) = -H_n(t_{n-1,1})`.
pub fn barrier_left(n: usize) -> Result<f64> {
    check_odd(n)?;
    let lv = levels(n)?;
    barrier_left_with(n, &lv)
}

fn barrier_left_with(n: usize, lv: &Levels) -> Result<f64> {
    let hi = lv.zn[0];
    let mut step = 1.0;
    let mut lo = hi - step;
    // H_n → -∞ as t → -∞; grow the bracket until it passes the level
    while eval_rel(n, lv.ln_m, lo) > -1.0 {
        step *= 2.0;
        lo = hi - step;
    }
    solve_level(n, lv.ln_m, -1.0, lo, hi).ok_or(Error::NoConvergence {
        what: "barrier_left",
        n,
        index: 0,
    })
}

fn eval_rel(n: usize, ln_m: f64, t: f64) -> f64 {
    let h = eval_hermite(n, t);
    if h.sign == 0 {
        0.0
    } else {
        h.sign as f64 * (h.log_abs - ln_m).exp()
    }
}

/// The unique `t > t_{n,n}` with `tan θ H_n(t) = H_n(t_{n-1,1})`, θ ∈ (0, π/4].
pub fn barrier_top(n: usize, theta: f64) -> Result<f64> {
    check_odd(n)?;
    check_barrier_angle(theta)?;
    let lv = levels(n)?;
    barrier_top_with(n, theta, &lv)
}

fn barrier_top_with(n: usize, theta: f64, lv: &Levels) -> Result<f64> {
    let target = 1.0 / theta.tan();
    let lo = *lv.zn.last().expect("n >= 1");
    let mut step = 1.0;
    let mut hi = lo + step;
    while eval_rel(n, lv.ln_m, hi) < target {
        step *= 2.0;
        hi = lo + step;
    }
    solve_level(n, lv.ln_m, target, lo, hi).ok_or(Error::NoConvergence {
        what: "barrier_top",
        n,
        index: n,
    })
}

/// `-(cot θ)^{1/n}`, the slope of both exterior arcs at infinity.
pub fn asymptote_slope(n: usize, theta: f64) -> Result<f64> {
    check_odd(n)?;
    check_barrier_angle(theta)?;
    Ok(-(1.0 / theta.tan()).powf(1.0 / n as f64))
}

/// The point `(x, y)` of the exterior arc above the box for a given
/// `x < t_{n,1}`: the unique `y > t_{n,n}` with `Φ^θ_n(x, y) = 0`.
pub fn exterior_arc_point(n: usize, theta: f64, x: f64) -> Result<(f64, f64)> {
    check_odd(n)?;
    check_barrier_angle(theta)?;
    let lv = levels(n)?;
    if x >= lv.zn[0] {
        return Err(Error::InvalidInput(format!("x = {x} must lie left of t_{{n,1}} = {}", lv.zn[0])));
    }
    // sin θ H_n(y) = -cos θ H_n(x), solved in units of |H_n(x)|
    let hx = eval_hermite(n, x);
    let target = -hx.sign as f64 / theta.tan();
    let lo = *lv.zn.last().expect("n >= 1");
    let mut step = 1.0;
    let mut hi = lo + step;
    while eval_rel(n, hx.log_abs, hi) < target {
        step *= 2.0;
        hi = lo + step;
    }
    let y = solve_level(n, hx.log_abs, target, lo, hi).ok_or(Error::NoConvergence {
        what: "exterior_arc_point",
        n,
        index: 0,
    })?;
    Ok((x, y))
}

/// Maps θ ∈ [0, π) to the angle in `[0, π/4]` related to it by the
/// reflections and the swap of coordinates. The returned angle is 0 exactly
/// for the degenerate angles 0 and π/2.
pub fn canonical_angle(angle: &Angle) -> f64 {
    let t = angle.radians();
    let (c, s) = angle.coefficients();
    if c == 0.0 || s == 0.0 {
        return 0.0;
    }
    if angle.is_exactly(1, 4) || angle.is_exactly(3, 4) {
        return FRAC_PI_4;
    }
    let reflected = if t > FRAC_PI_2 { PI - t } else { t };
    if reflected > FRAC_PI_4 {
        FRAC_PI_2 - reflected
    } else {
        reflected
    }
}

/// Barrier constants for one (n, θ) and the boxes derived from them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BarrierData {
    pub n: usize,
    /// The input angle.
    pub theta: f64,
    /// Its representative in `(0, π/4]`.
    pub canonical_theta: f64,
    pub t_left: f64,
    pub t_top: f64,
    pub margin: f64,
    /// `[-t_top, t_top] × [t_left, -t_left]` for the canonical angle.
    pub rect: Rect,
    /// Square of half-width `margin · max(t_top, -t_left)`. It is invariant
    /// under all the reflections, so it serves every angle mapped to the
    /// same canonical angle.
    pub nodal_box: Rect,
}

impl BarrierData {
    pub fn new(n: usize, angle: &Angle, margin: f64) -> Result<Self> {
        check_odd(n)?;
        if !(margin >= 1.0 && margin.is_finite()) {
            return Err(Error::InvalidInput(format!("margin must be >= 1, got {margin}")));
        }
        let canonical = canonical_angle(angle);
        if canonical == 0.0 {
            return Err(Error::InvalidAngle(format!(
                "θ = {angle} is degenerate (a single product eigenfunction); barriers are undefined"
            )));
        }
        let lv = levels(n)?;
        let t_left = barrier_left_with(n, &lv)?;
        let t_top = barrier_top_with(n, canonical, &lv)?;
        let half = margin * t_top.max(-t_left);
        Ok(BarrierData {
            n,
            theta: angle.radians(),
            canonical_theta: canonical,
            t_left,
            t_top,
            margin,
            rect: Rect {
                x_min: -t_top,
                x_max: t_top,
                y_min: t_left,
                y_max: -t_left,
            },
            nodal_box: Rect::square(half),
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("plain data");
        v["schema"] = serde_json::json!(crate::SCHEMA_VERSION);
        v
    }
}

/// Box used for nodal tracing at any angle, degenerate angles included.
pub fn nodal_box(n: usize, angle: &Angle, margin: f64) -> Result<Rect> {
    if canonical_angle(angle) == 0.0 {
        check_odd(n)?;
        let zn = hermite_zero_tables(n)?.pop().expect("n >= 1").zeros;
        let last = *zn.last().expect("n >= 1");
        return Ok(Rect::square(margin * (last + 1.0)));
    }
    Ok(BarrierData::new(n, angle, margin)?.nodal_box)
}

/// Zero count of `g` on `[lo, ∞)`, given that `g` is monotone beyond
/// `mono` with limit sign `sign_at_infinity`.
fn count_with_tail<F: Fn(f64) -> f64>(g: F, lo: f64, mono: f64, sign_at_infinity: f64) -> usize {
    let hi = mono.max(lo) + 1.0;
    let inner = sampled_zeros(&g, lo, hi, LINE_SAMPLES, 0.0).len();
    let end = g(hi);
    inner + usize::from(end != 0.0 && end.signum() != sign_at_infinity)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingCheck {
    /// "a", "b", "c1" or "c2".
    pub item: String,
    /// The fixed coordinate of the line.
    pub t: f64,
    pub expected: usize,
    pub found: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarrierVerdict {
    pub n: usize,
    pub theta: f64,
    pub checks: Vec<CrossingCheck>,
}

impl BarrierVerdict {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.expected == c.found)
    }

    pub fn counterexamples(&self) -> Vec<&CrossingCheck> {
        self.checks.iter().filter(|c| c.expected != c.found).collect()
    }
}

/// Verifies by 1-D zero counting that horizontal and vertical lines outside
/// the barriers cross the nodal set exactly once:
///
/// - (a) for `x = t ≤ t_{n,1}`, one zero in `y ∈ [t_{n,n}, ∞)`;
/// - (b) for `x = t < t_left`, one zero in `y ∈ ℝ`;
/// - (c1) for `y = t ≥ t_{n,n}`, one zero in `x ∈ (-∞, t_{n,1}]`;
/// - (c2) for `y = t > t_top`, one zero in `x ∈ ℝ`.
///
/// Each item is checked at five values of `t`. `H_n` is monotone outside
/// `[t_{n,1}, t_{n,n}]`, so tails beyond a dense window are settled by sign.
pub fn barrier_crossing_counts(n: usize, theta: f64) -> Result<BarrierVerdict> {
    check_odd(n)?;
    check_barrier_angle(theta)?;
    let lv = levels(n)?;
    let t_left = barrier_left_with(n, &lv)?;
    let t_top = barrier_top_with(n, theta, &lv)?;
    let (c, s) = (theta.cos(), theta.sin());
    let first = lv.zn[0];
    let last = *lv.zn.last().expect("n >= 1");
    let edge = 1e-9 * (1.0 + last);
    let phi = move |x: f64, y: f64| polynomial_normalized_with(n, c, s, x, y);
    let span = last - first;
    let mut checks = Vec::new();

    for k in 0..5 {
        let t = first - 0.5 * k as f64;
        // y ↦ Φ(t, y) is monotone increasing beyond t_{n,n}; find where it
        // has passed its zero
        let mut far = last + 1.0;
        while phi(t, far) <= 0.0 {
            far = last + 2.0 * (far - last);
        }
        let found = count_with_tail(|y| phi(t, y), last - edge, far, 1.0);
        checks.push(CrossingCheck {
            item: "a".into(),
            t,
            expected: 1,
            found,
        });
    }
    for k in 0..5 {
        let t = t_left - 0.25 - 0.5 * k as f64;
        let found = line_zero_count(|y| phi(t, y), first, last, span);
        checks.push(CrossingCheck {
            item: "b".into(),
            t,
            expected: 1,
            found,
        });
    }
    for k in 0..5 {
        let t = last + 0.5 * k as f64;
        // x ↦ Φ(x, t), mirrored to look rightwards: x = -u
        let mut far = -first + 1.0;
        while phi(-far, t) >= 0.0 {
            far = -first + 2.0 * (far + first);
        }
        let found = count_with_tail(|u| -phi(-u, t), -first - edge, far, 1.0);
        checks.push(CrossingCheck {
            item: "c1".into(),
            t,
            expected: 1,
            found,
        });
    }
    for k in 0..5 {
        let t = t_top + 0.25 + 0.5 * k as f64;
        let found = line_zero_count(|x| phi(x, t), first, last, span);
        checks.push(CrossingCheck {
            item: "c2".into(),
            t,
            expected: 1,
            found,
        });
    }
    Ok(BarrierVerdict { n, theta, checks })
}

/// Zeros on ℝ of `g(u) = a + b H_n(u)` (normalised): dense sampling on the
/// window where `H_n` oscillates, then at most one zero on each monotone
/// tail, decided by the sign at the window end against the sign at infinity.
fn line_zero_count<F: Fn(f64) -> f64>(g: F, first: f64, last: f64, span: f64) -> usize {
    let pad = 0.5 * span + 1.0;
    let (lo, hi) = (first - pad, last + pad);
    let inner = sampled_zeros(&g, lo, hi, LINE_SAMPLES, 0.0).len();
    // sign at ±∞ follows the H_n term; probe far enough that it dominates
    let mut far = 2.0 * pad;
    let dominated = |u: f64| {
        let a = g(u);
        let b = g(-u);
        (a, b)
    };
    let (mut right, mut left) = dominated(hi + far);
    let mut guard = 0;
    while right.signum() == left.signum() && guard < 60 {
        far *= 2.0;
        (right, left) = dominated(hi + far);
        guard += 1;
    }
    let tail = |end: f64, inf: f64| usize::from(end != 0.0 && end.signum() != inf.signum());
    inner + tail(g(hi), right) + tail(g(lo), left)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_8, SQRT_2};

    #[test]
    fn n3_left_barrier_is_minus_sqrt2() {
        let t = barrier_left(3).unwrap();
        assert!((t + SQRT_2).abs() < 1e-12, "{t}");
        let h = eval_hermite(3, t).value();
        assert!((h + 4.0 * SQRT_2).abs() < 1e-10);
    }

    #[test]
    fn left_barrier_precedes_first_zero() {
        for n in [3, 5, 7, 9] {
            let lv = levels(n).unwrap();
            let t = barrier_left(n).unwrap();
            assert!(t < lv.zn[0]);
            assert!((eval_rel(n, lv.ln_m, t) + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn n3_top_barrier_values() {
        let quarter = barrier_top(3, FRAC_PI_4).unwrap();
        assert!((quarter - SQRT_2).abs() < 1e-12);
        let eighth = barrier_top(3, FRAC_PI_8).unwrap();
        // 8t³ - 12t = 4√2 cot(π/8)
        let rhs = 4.0 * SQRT_2 / FRAC_PI_8.tan();
        assert!((8.0 * eighth.powi(3) - 12.0 * eighth - rhs).abs() < 1e-9);
        assert!((eighth - 1.602).abs() < 1e-3);
        assert!(barrier_top(3, 0.3).unwrap() > barrier_top(3, 0.7).unwrap());
    }

    #[test]
    fn top_barrier_residual_and_monotonicity() {
        for n in [3, 5, 7] {
            let lv = levels(n).unwrap();
            let mut prev = f64::INFINITY;
            for k in 1..=10 {
                let theta = FRAC_PI_4 * k as f64 / 10.0;
                let t = barrier_top(n, theta).unwrap();
                assert!(t > *lv.zn.last().unwrap());
                assert!((theta.tan() * eval_rel(n, lv.ln_m, t) - 1.0).abs() < 1e-12);
                assert!(t < prev);
                prev = t;
            }
        }
    }

    #[test]
    fn bad_angles_rejected() {
        assert!(barrier_top(3, 0.0).is_err());
        assert!(barrier_top(3, 1.0).is_err());
        assert!(barrier_left(4).is_err());
    }

    #[test]
    fn slopes() {
        assert!((asymptote_slope(3, FRAC_PI_4).unwrap() + 1.0).abs() < 1e-15);
        assert!((asymptote_slope(3, FRAC_PI_8).unwrap() + 1.34150).abs() < 1e-5);
    }

    #[test]
    fn exterior_arc_approaches_asymptote() {
        let (n, theta) = (5, 0.3);
        let slope = asymptote_slope(n, theta).unwrap();
        let top = barrier_top(n, theta).unwrap();
        let (x, y) = exterior_arc_point(n, theta, -3.0 * top).unwrap();
        assert!((y / x - slope).abs() < 0.05);
        let (x2, y2) = exterior_arc_point(n, theta, -30.0 * top).unwrap();
        assert!((y2 / x2 - slope).abs() < (y / x - slope).abs());
        let (c, s) = (theta.cos(), theta.sin());
        assert!(polynomial_normalized_with(n, c, s, x, y).abs() < 1e-12);
    }

    #[test]
    fn canonical_angles() {
        let c = |p, q| canonical_angle(&Angle::from_fraction_of_pi(p, q).unwrap());
        assert_eq!(c(3, 4), FRAC_PI_4);
        assert_eq!(c(1, 2), 0.0);
        assert_eq!(c(0, 1), 0.0);
        assert!((c(1, 8) - FRAC_PI_8).abs() < 1e-15);
        assert!((c(3, 8) - FRAC_PI_8).abs() < 1e-15);
        assert!((c(5, 8) - FRAC_PI_8).abs() < 1e-15);
        assert!((c(7, 8) - FRAC_PI_8).abs() < 1e-15);
    }

    #[test]
    fn barrier_data_boxes() {
        let b = BarrierData::new(3, &Angle::from_fraction_of_pi(1, 8).unwrap(), 1.25).unwrap();
        assert!(b.nodal_box.contains_rect(&b.rect));
        assert_eq!(b.to_json()["schema"], 1);
        assert!(BarrierData::new(3, &Angle::from_fraction_of_pi(1, 2).unwrap(), 1.25).is_err());
        let degenerate = nodal_box(3, &Angle::from_fraction_of_pi(1, 2).unwrap(), 1.25).unwrap();
        assert!(degenerate.x_max > 1.2247 + 1.0);
    }

    #[test]
    fn crossing_counts_hold() {
        for (n, theta) in [(3, FRAC_PI_8), (7, 0.2), (3, FRAC_PI_4), (5, 0.5), (9, 0.1)] {
            let v = barrier_crossing_counts(n, theta).unwrap();
            assert!(v.holds(), "n={n} θ={theta}: {:?}", v.counterexamples());
            assert_eq!(v.checks.len(), 20);
        }
    }

    #[test]
    fn crossing_count_example_lines() {
        // n=7, θ=0.2, vertical line half a unit left of the left barrier
        let t = barrier_left(7).unwrap() - 0.5;
        let (c, s) = (0.2f64.cos(), 0.2f64.sin());
        let lv = levels(7).unwrap();
        let span = lv.zn[6] - lv.zn[0];
        let found = line_zero_count(|y| polynomial_normalized_with(7, c, s, t, y), lv.zn[0], lv.zn[6], span);
        assert_eq!(found, 1);
    }
}

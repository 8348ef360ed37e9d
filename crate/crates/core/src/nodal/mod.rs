//! Nodal sets of `Φ^θ_n`: sign grids, domain counts, traced curves, line
//! intersection checks and θ sweeps.

pub mod domains;
pub mod grid;
pub mod svg;
pub mod trace;

use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::critical::{critical_angles, CriticalAngleTable, CRITICAL_ANGLE_TOL, THREE_QUARTER_PI};
use crate::error::{Error, Result};
use crate::geometry::{nodal_box, BarrierData, Rect, DEFAULT_MARGIN};
use crate::hermite::{eval_hermite, hermite_zero_tables, hermite_zeros};
use crate::oscillator::{polynomial_normalized_with, Superposition};
use crate::roots::sampled_zeros;

pub use domains::{count_domains, DomainCount};
pub use grid::{SampleLines, SignGrid};
pub use trace::{line_crossings, trace_nodal_curves, Curve, Point, TraceResult};

/// Base grid resolution for a given degree: 1024 cells across the box up to
/// n = 9, growing linearly beyond.
pub fn default_resolution(n: usize) -> usize {
    if n <= 9 {
        1024
    } else {
        1024 * n / 9
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodalConfig {
    /// Base cells across the box; `None` picks [`default_resolution`].
    pub resolution: Option<usize>,
    pub margin: f64,
    /// Rerun at doubled resolution and at doubled margin and compare.
    pub check_stability: bool,
}

impl Default for NodalConfig {
    fn default() -> Self {
        NodalConfig {
            resolution: None,
            margin: DEFAULT_MARGIN,
            check_stability: true,
        }
    }
}

/// The counts compared between stability runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunSummary {
    pub resolution: usize,
    pub domain_count: usize,
    pub curve_components: usize,
    pub unbounded_arcs: usize,
}

impl RunSummary {
    fn counts(&self) -> (usize, usize, usize) {
        (self.domain_count, self.curve_components, self.unbounded_arcs)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityRun {
    pub resolution: usize,
    pub margin: f64,
    /// `None` when the rerun failed.
    pub summary: Option<RunSummary>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalZeroHit {
    pub i: usize,
    pub j: usize,
    pub location: Point,
    pub hessian_signature: (i8, i8),
    /// Whether the tracer found a double crossing at this point.
    pub traced: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodalTopology {
    pub n: usize,
    pub theta: f64,
    /// Exact rational multiple of π when the angle was given that way.
    pub theta_over_pi: Option<(i64, i64)>,
    pub domain_count: usize,
    pub positive_domains: usize,
    pub negative_domains: usize,
    /// Smooth curves after splitting double crossings.
    pub curve_components: usize,
    pub closed_curves: usize,
    pub open_curves: usize,
    /// Curve ends on the box boundary, each the start of an arc to infinity.
    pub unbounded_arcs: usize,
    /// Connected components of the nodal set itself.
    pub nodal_set_components: usize,
    pub singular_points: Vec<Point>,
    pub diagonal_crossings: Vec<Point>,
    pub antidiagonal_crossings: Vec<Point>,
    pub critical_zero_hits: Vec<CriticalZeroHit>,
    /// True when the counts agree under doubled resolution and doubled margin.
    pub stability: bool,
    pub stability_runs: Vec<StabilityRun>,
    pub resolution: usize,
    pub margin: f64,
    #[serde(rename = "box")]
    pub bounds: Rect,
}

impl NodalTopology {
    /// One connected curve, no crossings, two ends at infinity.
    pub fn is_single_simple_arc(&self) -> bool {
        self.curve_components == 1
            && self.open_curves == 1
            && self.nodal_set_components == 1
            && self.singular_points.is_empty()
            && self.unbounded_arcs == 2
    }

    /// The counts that must not change inside a regular interval.
    pub fn summary(&self) -> (usize, usize, usize, usize, usize) {
        (
            self.domain_count,
            self.curve_components,
            self.closed_curves,
            self.unbounded_arcs,
            self.nodal_set_components,
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("plain data");
        v["schema"] = serde_json::json!(crate::SCHEMA_VERSION);
        v
    }
}

/// Everything produced by one analysis, including curve geometry.
#[derive(Debug, Clone)]
pub struct NodalAnalysis {
    pub topology: NodalTopology,
    pub curves: Vec<Curve>,
    pub barrier: Option<BarrierData>,
    pub angle: Angle,
    /// Largest spacing between sample lines in the base run.
    pub spacing: f64,
}

/// Replaces angles within [`CRITICAL_ANGLE_TOL`] of a multiple of π/4 by the
/// exact multiple, so that symmetric coefficients are exact.
pub fn snap_angle(angle: Angle) -> Angle {
    if angle.fraction_of_pi().is_some() {
        return angle;
    }
    let t = angle.radians();
    for k in 0..=4i64 {
        if (t - k as f64 * FRAC_PI_4).abs() <= CRITICAL_ANGLE_TOL {
            return Angle::from_fraction_of_pi(k, 4).expect("valid");
        }
    }
    angle
}

fn min_resolution(half: f64, min_gap: f64) -> usize {
    (2.0 * half / (0.25 * min_gap)).ceil() as usize
}

/// Sign grid of `Φ^θ_n` on the square `[-half, half]²`.
///
/// Sample lines include the zeros of `H_{n-1}` exactly (so that every cell is
/// a monotone patch) and are refined 4× within one spacing of the zeros of
/// `H_n` and `H_{n-1}`. Critical zeros active at θ are marked as zero samples.
pub fn build_sign_grid(s: &Superposition, half: f64, resolution: usize, table: &CriticalAngleTable) -> Result<SignGrid> {
    let n = s.n();
    let tables = hermite_zero_tables(n)?;
    let zn = &tables[n - 1];
    let zm = &tables[n - 2];
    let h = 2.0 * half / resolution as f64;
    let required = 0.25 * zn.min_gap();
    if h > required {
        return Err(Error::ResolutionTooCoarse {
            spacing: h,
            required,
            min_resolution: min_resolution(half, zn.min_gap()),
        });
    }
    let mut refine = zn.zeros.clone();
    refine.extend(zm.zeros.iter().copied());
    let lines = SampleLines::square(half, resolution, &zm.zeros, &refine);
    let (c, si) = s.coefficients();
    let ln_scale = eval_hermite(n, half).log_abs;
    let part = move |coef: f64, t: f64| {
        let e = eval_hermite(n, t);
        if e.sign == 0 {
            0.0
        } else {
            coef * e.sign as f64 * (e.log_abs - ln_scale).exp()
        }
    };
    let mut grid = SignGrid::separable_sum(lines, |x| part(c, x), |y| part(si, y));
    for z in table.zeros_at(&s.angle(), CRITICAL_ANGLE_TOL) {
        grid.mark_zero(z.location.0, z.location.1);
    }
    Ok(grid)
}

struct Run {
    domains: DomainCount,
    trace: TraceResult,
    spacing: f64,
    bounds: Rect,
}

impl Run {
    fn summary(&self, resolution: usize) -> RunSummary {
        RunSummary {
            resolution,
            domain_count: self.domains.total,
            curve_components: self.trace.curves.len(),
            unbounded_arcs: self.trace.boundary_ends,
        }
    }
}

fn single_run(s: &Superposition, half: f64, resolution: usize, table: &CriticalAngleTable) -> Result<Run> {
    let grid = build_sign_grid(s, half, resolution, table)?;
    let domains = count_domains(&grid);
    let trace = trace_nodal_curves(&grid)?;
    Ok(Run {
        domains,
        trace,
        spacing: grid.max_spacing(),
        bounds: grid.bounds(),
    })
}

/// Full analysis of `Φ^θ_n`: domain count, traced curves, crossings with the
/// diagonals, critical zeros, and (optionally) the stability reruns.
pub fn analyze(n: usize, angle: Angle, config: &NodalConfig) -> Result<NodalAnalysis> {
    let table = critical_angles(n)?;
    analyze_with(&table, angle, config)
}

pub fn analyze_with(table: &CriticalAngleTable, angle: Angle, config: &NodalConfig) -> Result<NodalAnalysis> {
    let n = table.n;
    let angle = snap_angle(angle);
    let s = Superposition::new(n, angle)?;
    let half = nodal_box(n, &angle, config.margin)?.x_max;
    let barrier = BarrierData::new(n, &angle, config.margin).ok();
    let resolution = config.resolution.unwrap_or_else(|| default_resolution(n));
    let base = single_run(&s, half, resolution, table)?;
    let base_summary = base.summary(resolution);

    let mut runs = Vec::new();
    let mut stability = true;
    if config.check_stability {
        let min_gap = hermite_zeros(n)?.min_gap();
        let wide = (2.0 * half, resolution.max(min_resolution(2.0 * half, min_gap)), 2.0 * config.margin);
        for (h, res, margin) in [(half, 2 * resolution, config.margin), wide] {
            let run = single_run(&s, h, res, table);
            let (summary, error) = match run {
                Ok(r) => (Some(r.summary(res)), None),
                Err(e) => (None, Some(e.to_string())),
            };
            stability &= summary.map(|x| x.counts()) == Some(base_summary.counts());
            runs.push(StabilityRun {
                resolution: res,
                margin,
                summary,
                error,
            });
        }
    }

    let (c, si) = s.coefficients();
    let on_line_tol = 2.0 * base.spacing;
    let diagonal_crossings = refined_crossings(n, c, si, &base.trace.curves, 1.0, on_line_tol, base.spacing);
    let antidiagonal_crossings = refined_crossings(n, c, si, &base.trace.curves, -1.0, on_line_tol, base.spacing);

    let critical_zero_hits = table
        .zeros_at(&angle, CRITICAL_ANGLE_TOL)
        .into_iter()
        .map(|z| CriticalZeroHit {
            i: z.i,
            j: z.j,
            location: z.location,
            hessian_signature: z.hessian_signature,
            traced: base
                .trace
                .singular_points
                .iter()
                .any(|p| (p.0 - z.location.0).abs() < 1e-12 && (p.1 - z.location.1).abs() < 1e-12),
        })
        .collect();

    let topology = NodalTopology {
        n,
        theta: angle.radians(),
        theta_over_pi: angle.fraction_of_pi(),
        domain_count: base.domains.total,
        positive_domains: base.domains.positive,
        negative_domains: base.domains.negative,
        curve_components: base.trace.curves.len(),
        closed_curves: base.trace.closed_curves(),
        open_curves: base.trace.open_curves(),
        unbounded_arcs: base.trace.boundary_ends,
        nodal_set_components: base.trace.nodal_set_components,
        singular_points: base.trace.singular_points.clone(),
        diagonal_crossings,
        antidiagonal_crossings,
        critical_zero_hits,
        stability,
        stability_runs: runs,
        resolution,
        margin: config.margin,
        bounds: base.bounds,
    };
    Ok(NodalAnalysis {
        topology,
        curves: base.trace.curves,
        barrier,
        angle,
        spacing: base.spacing,
    })
}

/// True when the whole line `y = α x` lies in the nodal set, which for odd n
/// happens on the diagonal when `cos θ = -sin θ` and on the antidiagonal when
/// `cos θ = sin θ`.
fn line_in_nodal_set(c: f64, s: f64, alpha: f64) -> bool {
    (alpha == 1.0 && c == -s) || (alpha == -1.0 && c == s)
}

/// Crossings of the traced curves with `y = α x`, each moved onto the exact
/// zero of `Φ` along the line nearest to the traced estimate. When the line is
/// itself nodal, the crossing branches meet it where the derivative across
/// the line vanishes, and that derivative is used instead.
fn refined_crossings(n: usize, c: f64, s: f64, curves: &[Curve], alpha: f64, on_line_tol: f64, spacing: f64) -> Vec<Point> {
    let inside = line_in_nodal_set(c, s, alpha);
    let tol = if inside { on_line_tol } else { 0.0 };
    let mut pts: Vec<Point> = line_crossings(curves, alpha, tol)
        .into_iter()
        .map(|(x0, _)| {
            let w = 3.0 * spacing;
            let f = |x: f64| {
                if inside {
                    // gradient of c H_n(x) + s H_n(y) against the normal (-α, 1), over 2n
                    polynomial_normalized_with(n - 1, -alpha * c, s, x, alpha * x)
                } else {
                    polynomial_normalized_with(n, c, s, x, alpha * x)
                }
            };
            let roots = sampled_zeros(f, x0 - w, x0 + w, 64, 0.0);
            let x = roots
                .into_iter()
                .min_by(|a, b| (a - x0).abs().partial_cmp(&(b - x0).abs()).expect("finite"))
                .unwrap_or(x0);
            (x, alpha * x)
        })
        .collect();
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite"));
    pts
}

/// Real zeros of `x ↦ cos θ H_n(x) + sin θ H_n(α x)`, a polynomial of degree
/// at most n, so there are at most n of them.
///
/// All zeros lie within the Cauchy bound of the coefficients. The window
/// `|x| ≤ 4√(2n+1) + 2` is sampled densely; the rest of the Cauchy interval
/// on geometrically growing steps.
pub fn line_intersection_oracle(n: usize, theta: f64, alpha: f64) -> Result<Vec<f64>> {
    let angle = snap_angle(Angle::from_radians(theta)?);
    Superposition::new(n, angle)?;
    let (c, s) = angle.coefficients();
    if line_in_nodal_set(c, s, alpha) {
        return Err(Error::InvalidInput(format!(
            "the line y = {alpha} x lies in the nodal set at θ = {angle}"
        )));
    }
    let h = hermite_coefficients(n);
    let coeffs: Vec<f64> = (0..=n).map(|k| c * h[k] + s * h[k] * alpha.powi(k as i32)).collect();
    let max = coeffs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let Some(deg) = (0..=n).rev().find(|&k| coeffs[k].abs() > 1e-13 * max) else {
        return Ok(Vec::new());
    };
    if deg == 0 {
        return Ok(Vec::new());
    }
    let cauchy = 1.0 + (0..deg).map(|k| (coeffs[k] / coeffs[deg]).abs()).fold(0.0, f64::max);
    let f = |x: f64| polynomial_normalized_with(n, c, s, x, alpha * x);
    let window = (4.0 * ((2 * n + 1) as f64).sqrt() + 2.0).min(cauchy);
    let mut zeros = sampled_zeros(f, -window, window, 40_000, 0.0);
    if cauchy > window {
        let steps = ((cauchy / window).ln() / 1e-3).ceil() as usize + 1;
        let mut outer: Vec<f64> = (0..=steps).map(|k| window * (cauchy / window).powf(k as f64 / steps as f64)).collect();
        outer.dedup();
        for side in [1.0, -1.0] {
            for w in outer.windows(2) {
                let (a, b) = (side * w[0], side * w[1]);
                let (fa, fb) = (f(a), f(b));
                if fb == 0.0 {
                    zeros.push(b);
                } else if fa != 0.0 && fa.signum() != fb.signum() {
                    if let Some(r) = crate::roots::bisect(f, a.min(b), a.max(b), 1e-13 * b.abs()) {
                        zeros.push(r);
                    }
                }
            }
        }
    }
    zeros.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    Ok(zeros)
}

/// Coefficients of `H_n` in the monomial basis (exact integers for n ≲ 25).
fn hermite_coefficients(n: usize) -> Vec<f64> {
    let mut prev = vec![1.0];
    if n == 0 {
        return prev;
    }
    let mut cur = vec![0.0, 2.0];
    for k in 2..=n {
        let mut next = vec![0.0; k + 1];
        for (i, &a) in cur.iter().enumerate() {
            next[i + 1] += 2.0 * a;
        }
        for (i, &a) in prev.iter().enumerate() {
            next[i] -= 2.0 * (k - 1) as f64 * a;
        }
        prev = cur;
        cur = next;
    }
    cur
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineCheck {
    pub n: usize,
    pub theta: f64,
    pub alpha: f64,
    /// Zeros of the restricted polynomial on the whole line.
    pub polynomial_zeros: usize,
    /// Of those, the ones inside the comparison window.
    pub polynomial_zeros_inside: usize,
    /// Traced crossings inside the comparison window.
    pub traced_inside: usize,
}

impl LineCheck {
    pub fn holds(&self) -> bool {
        self.polynomial_zeros <= self.n && self.polynomial_zeros_inside == self.traced_inside
    }
}

/// Compares the traced crossings with `y = α x` against the polynomial zero
/// count. Both sides are restricted to points whose coordinates stay two grid
/// spacings inside the box, so curves clipped at the edge do not count.
pub fn line_check(analysis: &NodalAnalysis, alpha: f64) -> Result<LineCheck> {
    let t = &analysis.topology;
    let zeros = line_intersection_oracle(t.n, t.theta, alpha)?;
    let b = t.bounds;
    let pad = 2.0 * analysis.spacing;
    let inside = |x: f64| {
        let y = alpha * x;
        x > b.x_min + pad && x < b.x_max - pad && y > b.y_min + pad && y < b.y_max - pad
    };
    let (c, s) = analysis.angle.coefficients();
    let traced = refined_crossings(t.n, c, s, &analysis.curves, alpha, 0.0, analysis.spacing);
    Ok(LineCheck {
        n: t.n,
        theta: t.theta,
        alpha,
        polynomial_zeros: zeros.len(),
        polynomial_zeros_inside: zeros.iter().filter(|&&x| inside(x)).count(),
        traced_inside: traced.iter().filter(|p| inside(p.0)).count(),
    })
}

/// Domain count of the product eigenfunction `φ_{m,k}` on a square box that
/// contains all its nodal lines.
pub fn product_domain_count(m: usize, k: usize, resolution: usize, margin: f64) -> Result<usize> {
    let last = |d: usize| -> Result<f64> {
        Ok(if d == 0 {
            0.0
        } else {
            *hermite_zeros(d)?.zeros.last().expect("d >= 1")
        })
    };
    let half = margin * (last(m)?.max(last(k)?) + 1.0);
    let lines = SampleLines::square(half, resolution, &[], &[]);
    let grid = SignGrid::separable_product(
        lines,
        |x| eval_hermite(m, x).sign as f64,
        |y| eval_hermite(k, y).sign as f64,
    );
    Ok(count_domains(&grid).total)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub theta: f64,
    /// Index into the regular intervals, `None` at a critical or degenerate angle.
    pub interval: Option<usize>,
    pub critical: bool,
    pub topology: NodalTopology,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepFailure {
    pub theta: f64,
    pub check: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub n: usize,
    pub theta_c: f64,
    pub rows: Vec<SweepRow>,
    pub failures: Vec<SweepFailure>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Midpoints of all regular intervals followed by all critical values.
pub fn auto_thetas(table: &CriticalAngleTable) -> Vec<f64> {
    let mut out: Vec<f64> = table.regular_intervals.iter().map(|r| r.midpoint()).collect();
    out.extend(table.distinct.iter().copied());
    out
}

/// Runs the analysis for each θ and checks:
///
/// - (a) in the two regular intervals next to 3π/4, two domains and one
///   simple arc;
/// - (b) the same for θ in `(0, θ_c)`;
/// - (c) identical topology summaries for all θ in the same regular interval;
/// - every reported count is stable.
pub fn theorem_sweep(n: usize, thetas: &[f64], config: &NodalConfig) -> Result<SweepReport> {
    if thetas.is_empty() {
        return Err(Error::InvalidInput("empty θ list".into()));
    }
    let table = critical_angles(n)?;
    let below = table.interval_below(THREE_QUARTER_PI);
    let above = table.interval_above(THREE_QUARTER_PI);
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for &theta in thetas {
        let angle = snap_angle(Angle::from_radians(theta)?);
        let t = angle.radians();
        let critical = table.is_critical(t, 1e-9);
        let interval = if critical { None } else { table.interval_index(t) };
        let analysis = analyze_with(&table, angle, config)?;
        let topo = analysis.topology;
        let mut fail = |check: &str, detail: String| {
            failures.push(SweepFailure {
                theta: t,
                check: check.into(),
                detail,
            })
        };
        if !topo.stability {
            fail("stability", format!("{:?}", topo.stability_runs));
        }
        let two_domain_expected = interval.is_some()
            && ([below, above].iter().flatten().any(|r| r.contains(t)) || (t > 0.0 && t < table.theta_c));
        if two_domain_expected && !(topo.domain_count == 2 && topo.is_single_simple_arc()) {
            fail(
                "two-domains",
                format!(
                    "domain_count {}, curves {}, arcs {}",
                    topo.domain_count, topo.curve_components, topo.unbounded_arcs
                ),
            );
        }
        rows.push(SweepRow {
            theta: t,
            interval,
            critical,
            topology: topo,
        });
    }
    for (k, row) in rows.iter().enumerate() {
        let Some(iv) = row.interval else { continue };
        if let Some(first) = rows[..k].iter().find(|r| r.interval == Some(iv)) {
            if first.topology.summary() != row.topology.summary() {
                failures.push(SweepFailure {
                    theta: row.theta,
                    check: "constant-on-interval".into(),
                    detail: format!("{:?} vs {:?} at θ = {}", row.topology.summary(), first.topology.summary(), first.theta),
                });
            }
        }
    }
    Ok(SweepReport {
        n,
        theta_c: table.theta_c,
        rows,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_8, PI};

    fn quick() -> NodalConfig {
        NodalConfig {
            resolution: Some(256),
            margin: DEFAULT_MARGIN,
            check_stability: true,
        }
    }

    #[test]
    fn hermite_coefficients_match_h3() {
        assert_eq!(hermite_coefficients(3), vec![0.0, -12.0, 0.0, 8.0]);
    }

    #[test]
    fn n3_below_critical_has_two_domains() {
        let a = analyze(3, Angle::from_fraction_of_pi(1, 8).unwrap(), &quick()).unwrap();
        let t = &a.topology;
        assert_eq!(t.domain_count, 2);
        assert!(t.is_single_simple_arc());
        assert!(t.stability);
    }

    #[test]
    fn n3_three_quarter_pi() {
        let a = analyze(3, Angle::from_fraction_of_pi(3, 4).unwrap(), &quick()).unwrap();
        let t = &a.topology;
        assert_eq!(t.domain_count, 4);
        assert_eq!(t.closed_curves, 1);
        assert_eq!(t.open_curves, 1);
        assert_eq!(t.unbounded_arcs, 2);
        assert_eq!(t.singular_points.len(), 2);
        assert_eq!(t.diagonal_crossings.len(), 2);
        assert_eq!(t.antidiagonal_crossings.len(), 3);
        let z2 = hermite_zeros(2).unwrap().zeros;
        for (p, z) in t.diagonal_crossings.iter().zip(&z2) {
            assert!((p.0 - z).abs() < 1e-12 && (p.1 - z).abs() < 1e-12);
        }
        assert!(t.critical_zero_hits.iter().all(|h| h.traced));
    }

    #[test]
    fn float_three_quarter_pi_is_snapped() {
        let a = analyze(3, Angle::from_radians(0.75 * PI).unwrap(), &quick()).unwrap();
        assert_eq!(a.topology.theta_over_pi, Some((3, 4)));
        assert_eq!(a.topology.domain_count, 4);
    }

    #[test]
    fn degenerate_angle_gives_stripes() {
        let a = analyze(5, Angle::from_fraction_of_pi(1, 2).unwrap(), &quick()).unwrap();
        assert_eq!(a.topology.domain_count, 6);
        assert_eq!(a.topology.open_curves, 5);
    }

    #[test]
    fn oracle_examples() {
        let tq = 0.75 * PI;
        assert_eq!(line_intersection_oracle(3, tq, -1.0).unwrap().len(), 3);
        assert_eq!(line_intersection_oracle(3, tq, 0.0).unwrap().len(), 3);
        assert!(line_intersection_oracle(3, tq, 1.0).is_err());
    }

    #[test]
    fn line_checks_agree() {
        let a = analyze(5, Angle::from_radians(2.0).unwrap(), &quick()).unwrap();
        for alpha in [-3.0, -0.7, 0.2, 1.5] {
            let c = line_check(&a, alpha).unwrap();
            assert!(c.holds(), "{c:?}");
        }
    }

    #[test]
    fn coarse_resolution_rejected() {
        let cfg = NodalConfig {
            resolution: Some(8),
            ..quick()
        };
        let err = analyze(9, Angle::from_radians(FRAC_PI_8).unwrap(), &cfg).unwrap_err();
        assert!(matches!(err, Error::ResolutionTooCoarse { .. }));
    }

    #[test]
    fn product_counts() {
        assert_eq!(product_domain_count(0, 0, 128, 1.25).unwrap(), 1);
        assert_eq!(product_domain_count(2, 3, 128, 1.25).unwrap(), 12);
    }

    #[test]
    fn swap_symmetry_of_topology() {
        let a = analyze(5, Angle::from_radians(0.3).unwrap(), &quick()).unwrap();
        let b = analyze(5, Angle::from_radians(PI / 2.0 - 0.3).unwrap(), &quick()).unwrap();
        assert_eq!(a.topology.summary(), b.topology.summary());
    }

    #[test]
    fn sweep_n3_auto() {
        let table = critical_angles(3).unwrap();
        let thetas = auto_thetas(&table);
        let r = theorem_sweep(3, &thetas, &quick()).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.rows.iter().filter(|r| r.critical).count(), 2);
    }
}

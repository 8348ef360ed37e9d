//! Command implementations. Each command builds a JSON report, writes its
//! files under `--out`, and lists failed verifications.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use qho_nodal::courant::{
    courant_table, courant_table_csv, empirical_domain_bound_check, DEFAULT_RESOLUTION, DEFAULT_SEED, MAX_EMPIRICAL_ELL,
};
use qho_nodal::critical::{critical_angles, CriticalAngleTable, THREE_QUARTER_PI};
use qho_nodal::hermite::{eval_hermite, eval_hermite_derivative, hermite_zeros};
use qho_nodal::nodal::svg::render_svg;
use qho_nodal::nodal::{analyze_with, auto_thetas, snap_angle, theorem_sweep, NodalConfig, NodalTopology};
use qho_nodal::{fmt_f64, Angle, SCHEMA_VERSION};

use crate::config::ConfigFile;
use crate::{Cli, Command};

/// Relative tolerance of the Hermite identity checks.
const IDENTITY_TOL: f64 = 1e-10;
/// Residual tolerance for critical-angle entries.
const CRITICAL_RESIDUAL_TOL: f64 = 1e-12;
const DEFAULT_L_MAX: usize = 5;

const CONFIG_KEYS: &[&str] = &[
    "n",
    "theta",
    "theta_over_pi",
    "resolution",
    "margin",
    "seed",
    "out",
    "svg",
    "allow_unstable",
    "thetas",
    "thetas_over_pi",
    "l_max",
    "samples",
];

pub struct Outcome {
    pub stdout: String,
    pub passed: bool,
}

/// Command-line flags merged over the optional config file.
#[derive(Debug, Clone, Default)]
struct Settings {
    n: Option<usize>,
    angle: Option<Angle>,
    resolution: Option<usize>,
    margin: Option<f64>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    svg: Option<PathBuf>,
    allow_unstable: bool,
    thetas: Option<String>,
    thetas_over_pi: Option<String>,
    l_max: Option<usize>,
    samples: Option<usize>,
}

impl Settings {
    fn resolve(cli: &Cli) -> Result<Self> {
        let file = match &cli.common.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        if let Some(k) = file.keys().find(|k| !CONFIG_KEYS.contains(k)) {
            bail!("unknown config key {k:?}");
        }
        let c = &cli.common;
        let angle = if c.theta.is_some() || c.theta_over_pi.is_some() {
            parse_angle(c.theta, c.theta_over_pi.as_deref())?
        } else {
            parse_angle(file.parsed("theta")?, file.get("theta_over_pi"))?
        };
        let (mut thetas, mut thetas_over_pi, mut l_max, mut samples) = (None, None, None, None);
        match &cli.command {
            Command::Sweep {
                thetas: a,
                thetas_over_pi: b,
            } => {
                if a.is_some() || b.is_some() {
                    (thetas, thetas_over_pi) = (a.clone(), b.clone());
                } else {
                    thetas = file.get("thetas").map(str::to_string);
                    thetas_over_pi = file.get("thetas_over_pi").map(str::to_string);
                }
            }
            Command::Courant { l_max: a, samples: b } => {
                l_max = a.or(file.parsed("l_max")?);
                samples = b.or(file.parsed("samples")?);
            }
            _ => {}
        }
        Ok(Settings {
            n: c.n.or(file.parsed("n")?),
            angle,
            resolution: c.resolution.or(file.parsed("resolution")?),
            margin: c.margin.or(file.parsed("margin")?),
            seed: c.seed.or(file.parsed("seed")?),
            out: c.out.clone().or(file.get("out").map(PathBuf::from)),
            svg: c.svg.clone().or(file.get("svg").map(PathBuf::from)),
            allow_unstable: c.allow_unstable || file.parsed("allow_unstable")?.unwrap_or(false),
            thetas,
            thetas_over_pi,
            l_max,
            samples,
        })
    }

    fn n(&self) -> Result<usize> {
        self.n.ok_or_else(|| anyhow!("--n is required"))
    }

    fn angle(&self) -> Result<Angle> {
        self.angle.ok_or_else(|| anyhow!("--theta or --theta-over-pi is required"))
    }

    fn nodal_config(&self) -> Result<NodalConfig> {
        let mut cfg = NodalConfig::default();
        if let Some(r) = self.resolution {
            if r < 8 {
                bail!("--resolution must be at least 8");
            }
            cfg.resolution = Some(r);
        }
        if let Some(m) = self.margin {
            if !(m.is_finite() && m >= 1.0) {
                bail!("--margin must be a finite number >= 1");
            }
            cfg.margin = m;
        }
        Ok(cfg)
    }
}

fn parse_angle(theta: Option<f64>, over_pi: Option<&str>) -> Result<Option<Angle>> {
    match (theta, over_pi) {
        (Some(_), Some(_)) => bail!("theta and theta_over_pi are mutually exclusive"),
        (Some(t), None) => Ok(Some(Angle::from_radians(t)?)),
        (None, Some(p)) => Ok(Some(Angle::parse_fraction_of_pi(p)?)),
        (None, None) => Ok(None),
    }
}

/// Verification failures collected during a run.
#[derive(Default)]
struct Failures(Vec<Value>);

impl Failures {
    fn push(&mut self, check: &str, detail: impl Into<String>) {
        self.0.push(json!({ "check": check, "detail": detail.into() }));
    }

    fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn report(command: &str, body: Value, failures: Failures, warnings: Vec<String>) -> (Value, bool) {
    let passed = failures.is_empty();
    let mut v = json!({
        "schema": SCHEMA_VERSION,
        "command": command,
        "status": if passed { "passed" } else { "failed" },
        "failures": failures.0,
    });
    if !warnings.is_empty() {
        v["warnings"] = json!(warnings);
    }
    if let (Value::Object(dst), Value::Object(src)) = (&mut v, body) {
        dst.extend(src);
    }
    (v, passed)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let settings = Settings::resolve(cli)?;
    let (name, files, value, passed) = match &cli.command {
        Command::Hermite => cmd_hermite(&settings)?,
        Command::Critical => cmd_critical(&settings)?,
        Command::Trace => cmd_trace(&settings)?,
        Command::Sweep { .. } => cmd_sweep(&settings)?,
        Command::Courant { .. } => cmd_courant(&settings)?,
    };
    let stdout = pretty(&value);
    if let Some(dir) = &settings.out {
        for (file, contents) in &files {
            write_file(&dir.join(file), contents)?;
        }
        write_file(&dir.join(&name), &format!("{stdout}\n"))?;
    }
    Ok(Outcome { stdout, passed })
}

/// (report file name, other files, report, passed)
type CommandResult = (String, Vec<(String, String)>, Value, bool);

fn cmd_hermite(s: &Settings) -> Result<CommandResult> {
    let n = s.n()?;
    if n == 0 {
        bail!("n must be at least 1: H_0 has no zeros");
    }
    let table = hermite_zeros(n)?;
    let mut failures = Failures::default();

    // recurrence, derivative identity and lowering identity on a fixed grid
    let (mut recurrence, mut derivative, mut lowering) = (0.0f64, 0.0f64, 0.0f64);
    for k in 0..=240 {
        let t = -6.0 + 0.05 * k as f64;
        let h = |m: usize| eval_hermite(m, t).value();
        let dh = |m: usize| eval_hermite_derivative(m, t).value();
        let rel = |r: f64, scale: f64| if scale == 0.0 { r.abs() } else { r.abs() / scale };
        if n >= 2 {
            let a = 2.0 * t * h(n - 1);
            let b = 2.0 * (n - 1) as f64 * h(n - 2);
            recurrence = recurrence.max(rel(h(n) - (a - b), a.abs() + b.abs()));
        }
        let d = 2.0 * n as f64 * h(n - 1);
        derivative = derivative.max(rel(dh(n) - d, d.abs()));
        let (a, b) = (2.0 * t * h(n - 1), dh(n - 1));
        lowering = lowering.max(rel(h(n) - (a - b), a.abs() + b.abs()));
    }
    // each zero is within a relative Newton step of 1e-12
    let zero_step = table
        .zeros
        .iter()
        .map(|&z| (eval_hermite(n, z).value() / eval_hermite_derivative(n, z).value()).abs() / (1.0 + z.abs()))
        .fold(0.0f64, f64::max);
    for (check, v, tol) in [
        ("recurrence", recurrence, IDENTITY_TOL),
        ("derivative", derivative, IDENTITY_TOL),
        ("lowering", lowering, IDENTITY_TOL),
        ("zero_residual", zero_step, 1e-12),
    ] {
        if v > tol {
            failures.push(check, format!("max relative residual {v:e} exceeds {tol:e}"));
        }
    }
    let body = json!({
        "n": n,
        "zeros": table.zeros,
        "identities": {
            "recurrence": recurrence,
            "derivative": derivative,
            "lowering": lowering,
            "zero_residual": zero_step,
        },
    });
    let (value, passed) = report("hermite", body, failures, vec![]);
    Ok((format!("hermite_n{n}.json"), vec![(format!("hermite_n{n}.csv"), table.to_csv())], value, passed))
}

fn cmd_critical(s: &Settings) -> Result<CommandResult> {
    let n = s.n()?;
    let table = critical_angles(n)?;
    let mut failures = Failures::default();
    for e in &table.entries {
        let r = table.residual(e);
        if r > CRITICAL_RESIDUAL_TOL {
            failures.push("residual", format!("θ({},{}): residual {r:e}", e.i, e.j));
        }
        if e.i == e.j && (e.theta - THREE_QUARTER_PI).abs() > 1e-12 {
            failures.push("diagonal", format!("θ({0},{0}) = {1}", e.i, e.theta));
        }
    }
    let (value, passed) = report("critical", table.to_json(), failures, vec![]);
    Ok((format!("critical_n{n}.json"), vec![(format!("critical_n{n}.csv"), table.to_csv())], value, passed))
}

/// Theorem predictions that apply at one angle: two domains and one simple
/// arc below θ_c and in the regular intervals next to 3π/4; a diagonal plus
/// `(n-1)/2` closed curves and `n+1` domains at 3π/4.
fn theorem_checks(table: &CriticalAngleTable, angle: &Angle, topo: &NodalTopology, failures: &mut Failures) {
    let t = angle.radians();
    if angle.is_exactly(3, 4) {
        let n = table.n;
        if topo.domain_count != n + 1 || topo.open_curves != 1 || topo.closed_curves != (n - 1) / 2 {
            failures.push(
                "three-quarter-pi",
                format!(
                    "domains {}, open {}, closed {}; expected {}, 1, {}",
                    topo.domain_count,
                    topo.open_curves,
                    topo.closed_curves,
                    n + 1,
                    (n - 1) / 2
                ),
            );
        }
        return;
    }
    if table.is_critical(t, 1e-9) {
        return;
    }
    let near = [table.interval_below(THREE_QUARTER_PI), table.interval_above(THREE_QUARTER_PI)]
        .iter()
        .flatten()
        .any(|r| r.contains(t));
    if (near || (t > 0.0 && t < table.theta_c)) && !(topo.domain_count == 2 && topo.is_single_simple_arc()) {
        failures.push(
            "two-domains",
            format!(
                "domains {}, curves {}, arcs {}",
                topo.domain_count, topo.curve_components, topo.unbounded_arcs
            ),
        );
    }
}

fn cmd_trace(s: &Settings) -> Result<CommandResult> {
    let n = s.n()?;
    let table = critical_angles(n)?;
    let angle = snap_angle(s.angle()?);
    let cfg = s.nodal_config()?;
    let analysis = analyze_with(&table, angle, &cfg)?;
    let topo = &analysis.topology;
    let mut failures = Failures::default();
    let mut warnings = Vec::new();
    let verified = topo.stability || s.allow_unstable;
    if !topo.stability {
        let detail = format!("counts change under refinement: {}", serde_json::to_string(&topo.stability_runs)?);
        if s.allow_unstable {
            warnings.push(detail);
        } else {
            failures.push("stability", detail);
        }
    }
    let mut files = Vec::new();
    let mut body = json!({ "n": n, "theta": angle.radians() });
    if verified {
        theorem_checks(&table, &angle, topo, &mut failures);
        body["topology"] = topo.to_json();
        body["barrier"] = analysis.barrier.as_ref().map(|b| b.to_json()).unwrap_or(Value::Null);
        let svg = render_svg(&analysis)?;
        if let Some(path) = &s.svg {
            write_file(path, &svg)?;
        } else if s.out.is_some() {
            files.push((format!("trace_n{n}.svg"), svg));
        }
    }
    let (value, passed) = report("trace", body, failures, warnings);
    Ok((format!("trace_n{n}.json"), files, value, passed))
}

fn parse_list(text: &str, over_pi: bool) -> Result<Vec<f64>> {
    let items: Vec<&str> = text.split(',').map(str::trim).filter(|t| !t.is_empty()).collect();
    if items.is_empty() {
        bail!("empty θ list");
    }
    items
        .into_iter()
        .map(|t| {
            if over_pi {
                Ok(Angle::parse_fraction_of_pi(t)?.radians())
            } else {
                t.parse::<f64>().map_err(|e| anyhow!("bad angle {t:?}: {e}"))
            }
        })
        .collect()
}

fn cmd_sweep(s: &Settings) -> Result<CommandResult> {
    let n = s.n()?;
    let table = critical_angles(n)?;
    let thetas = match (&s.thetas, &s.thetas_over_pi) {
        (Some(_), Some(_)) => bail!("thetas and thetas_over_pi are mutually exclusive"),
        (None, Some(list)) => parse_list(list, true)?,
        (Some(list), None) if list.trim() != "auto" => parse_list(list, false)?,
        _ => {
            let mut v = auto_thetas(&table);
            v.sort_by(f64::total_cmp);
            v
        }
    };
    let cfg = s.nodal_config()?;
    let sweep = theorem_sweep(n, &thetas, &cfg)?;
    let mut failures = Failures::default();
    let mut warnings = Vec::new();
    for f in &sweep.failures {
        let detail = format!("θ = {}: {}", f.theta, f.detail);
        if f.check == "stability" && s.allow_unstable {
            warnings.push(detail);
        } else {
            failures.push(&f.check, detail);
        }
    }

    let mut csv = String::from(
        "theta,theta_over_pi,interval,critical,domain_count,curve_components,closed_curves,open_curves,unbounded_arcs,nodal_set_components,singular_points,stable\n",
    );
    let mut files = Vec::new();
    let mut rows = Vec::new();
    for (k, row) in sweep.rows.iter().enumerate() {
        let t = &row.topology;
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            fmt_f64(row.theta),
            fmt_f64(row.theta / PI),
            row.interval.map(|i| i.to_string()).unwrap_or_default(),
            row.critical,
            t.domain_count,
            t.curve_components,
            t.closed_curves,
            t.open_curves,
            t.unbounded_arcs,
            t.nodal_set_components,
            t.singular_points.len(),
            t.stability
        ));
        let mut v = t.to_json();
        v["interval"] = json!(row.interval);
        v["critical"] = json!(row.critical);
        files.push((format!("sweep_n{n}/theta_{k:03}.json"), format!("{}\n", pretty(&v))));
        rows.push(json!({
            "theta": row.theta,
            "interval": row.interval,
            "critical": row.critical,
            "domain_count": t.domain_count,
            "curve_components": t.curve_components,
            "closed_curves": t.closed_curves,
            "open_curves": t.open_curves,
            "unbounded_arcs": t.unbounded_arcs,
            "nodal_set_components": t.nodal_set_components,
            "singular_points": t.singular_points.len(),
            "stable": t.stability,
        }));
    }
    files.push((format!("sweep_n{n}.csv"), csv));
    let body = json!({
        "n": n,
        "theta_c": sweep.theta_c,
        "regular_intervals": table.regular_intervals.iter().map(|r| [r.lo, r.hi]).collect::<Vec<_>>(),
        "rows": rows,
    });
    let (value, passed) = report("sweep", body, failures, warnings);
    Ok((format!("sweep_n{n}.json"), files, value, passed))
}

fn cmd_courant(s: &Settings) -> Result<CommandResult> {
    let l_max = s.l_max.unwrap_or(DEFAULT_L_MAX);
    let samples = s.samples.unwrap_or(0);
    let seed = s.seed.unwrap_or(DEFAULT_SEED);
    let resolution = s.resolution.unwrap_or(DEFAULT_RESOLUTION);
    let mut failures = Failures::default();
    let mut warnings = Vec::new();
    let table = courant_table(l_max);
    let mut empirical = Vec::new();
    if samples > 0 {
        if l_max > MAX_EMPIRICAL_ELL {
            warnings.push(format!("empirical check limited to ℓ ≤ {MAX_EMPIRICAL_ELL}"));
        }
        for ell in 0..=l_max.min(MAX_EMPIRICAL_ELL) {
            let r = empirical_domain_bound_check(ell, samples, seed, resolution)?;
            if !r.holds() {
                failures.push(
                    "empirical-bound",
                    format!(
                        "ℓ = {ell}: over-bound samples {:?}, odd counts {:?}, parity residual {:e}",
                        r.violations, r.parity_count_violations, r.max_parity_residual
                    ),
                );
            }
            empirical.push(serde_json::to_value(&r)?);
        }
    }
    let body = json!({
        "l_max": l_max,
        "samples": samples,
        "seed": seed,
        "resolution": resolution,
        "table": table,
        "empirical": empirical,
    });
    let (value, passed) = report("courant", body, failures, warnings);
    Ok(("courant.json".into(), vec![("courant.csv".into(), courant_table_csv(l_max))], value, passed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_lists() {
        assert_eq!(parse_list("0.1, 0.2", false).unwrap(), vec![0.1, 0.2]);
        let v = parse_list("1/4,3/4", true).unwrap();
        assert!((v[1] - THREE_QUARTER_PI).abs() < 1e-15);
        assert!(parse_list(" , ", false).is_err());
        assert!(parse_list("x", false).is_err());
    }

    #[test]
    fn exclusive_angles() {
        assert!(parse_angle(Some(1.0), Some("1/4")).is_err());
        assert!(parse_angle(None, Some("3/4")).unwrap().unwrap().is_exactly(3, 4));
        assert!(parse_angle(None, None).unwrap().is_none());
    }

    #[test]
    fn report_status() {
        let mut f = Failures::default();
        let (v, ok) = report("x", json!({"a": 1}), Failures::default(), vec![]);
        assert!(ok);
        assert_eq!(v["status"], "passed");
        assert_eq!(v["a"], 1);
        f.push("c", "d");
        let (v, ok) = report("x", json!({}), f, vec!["w".into()]);
        assert!(!ok);
        assert_eq!(v["failures"][0]["check"], "c");
        assert_eq!(v["warnings"][0], "w");
    }
}

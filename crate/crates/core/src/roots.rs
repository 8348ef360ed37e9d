//! Bracketed scalar root finding and 1-D zero counting.

/// Newton iteration kept inside a sign-change bracket.
///
/// `eval(t)` returns `(f(t), f(t)/f'(t))`; only the sign of `f` and the
/// Newton step are used, so callers may return any positively rescaled `f`.
/// A Newton candidate that leaves the bracket is pulled back to the midpoint
/// between the iterate and the violated end; after three such rejections in
/// a row the step falls back to bisection.
pub fn safeguarded_newton<F>(mut eval: F, lo: f64, hi: f64, start: f64, max_iter: usize) -> Option<f64>
where
    F: FnMut(f64) -> (f64, f64),
{
    let (mut lo, mut hi) = (lo.min(hi), lo.max(hi));
    let f_lo = eval(lo).0;
    let f_hi = eval(hi).0;
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_hi == 0.0 {
        return Some(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return None;
    }
    let lo_sign = f_lo.signum();
    let mut t = start.clamp(lo, hi);
    let mut rejected = 0;
    for _ in 0..max_iter {
        let (f, step) = eval(t);
        if f == 0.0 {
            return Some(t);
        }
        if f.signum() == lo_sign {
            lo = t;
        } else {
            hi = t;
        }
        let tol = 4.0 * f64::EPSILON * t.abs().max(1.0);
        if hi - lo <= tol {
            return Some(0.5 * (lo + hi));
        }
        let mut next = t - step;
        if !(next > lo && next < hi) || !step.is_finite() {
            rejected += 1;
            next = if rejected >= 3 {
                rejected = 0;
                0.5 * (lo + hi)
            } else if !step.is_finite() {
                0.5 * (lo + hi)
            } else if next <= lo {
                0.5 * (t + lo)
            } else {
                0.5 * (t + hi)
            };
        } else {
            rejected = 0;
            if step.abs() <= tol {
                return Some(next);
            }
        }
        t = next;
    }
    None
}

/// Plain bisection on a sign-change bracket. Returns `None` when the ends do
/// not bracket a root.
pub fn bisect<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Option<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= tol || m == a || m == b {
            return Some(m);
        }
        let fm = f(m);
        if fm == 0.0 {
            return Some(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

/// Locates the zeros of `f` on `[lo, hi]` by dense sampling followed by
/// bisection on every sign change.
///
/// Samples with `|f| <= zero_tol` count as zeros; a run of consecutive
/// near-zero samples is one zero. Counts, not locations, are the contract.
pub fn sampled_zeros<F>(mut f: F, lo: f64, hi: f64, samples: usize, zero_tol: f64) -> Vec<f64>
where
    F: FnMut(f64) -> f64,
{
    let samples = samples.max(2);
    let h = (hi - lo) / (samples - 1) as f64;
    let ts: Vec<f64> = (0..samples).map(|k| lo + h * k as f64).collect();
    let vs: Vec<f64> = ts.iter().map(|&t| f(t)).collect();
    let classify = |v: f64| -> i8 {
        if v.abs() <= zero_tol {
            0
        } else if v > 0.0 {
            1
        } else {
            -1
        }
    };
    let mut roots = Vec::new();
    let mut k = 0;
    while k < samples {
        let s = classify(vs[k]);
        if s == 0 {
            let start = k;
            while k + 1 < samples && classify(vs[k + 1]) == 0 {
                k += 1;
            }
            roots.push(0.5 * (ts[start] + ts[k]));
            k += 1;
            continue;
        }
        if k + 1 < samples {
            let s_next = classify(vs[k + 1]);
            if s_next != 0 && s_next != s {
                if let Some(r) = bisect(&mut f, ts[k], ts[k + 1], 1e-13 * (1.0 + ts[k].abs())) {
                    roots.push(r);
                }
            }
        }
        k += 1;
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn newton_finds_sqrt2() {
        let r = safeguarded_newton(|t| (t * t - 2.0, (t * t - 2.0) / (2.0 * t)), 0.5, 3.0, 3.0, 100).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn newton_survives_bad_steps() {
        // atan has Newton steps that overshoot far from the root
        let r = safeguarded_newton(|t| (t.atan(), t.atan() * (1.0 + t * t)), -5.0, 20.0, 19.0, 100).unwrap();
        assert!(r.abs() < 1e-14);
    }

    #[test]
    fn newton_rejects_non_bracket() {
        assert!(safeguarded_newton(|t| (t * t + 1.0, 0.0), -1.0, 1.0, 0.0, 10).is_none());
    }

    #[test]
    fn sampled_zeros_of_cubic() {
        let z = sampled_zeros(|t| t * (t - 1.0) * (t + 2.0), -3.0, 3.0, 4096, 0.0);
        assert_eq!(z.len(), 3);
        assert!((z[0] + 2.0).abs() < 1e-10);
        assert!(z[1].abs() < 1e-10);
        assert!((z[2] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn bisect_none_without_bracket() {
        assert!(bisect(|t| t * t + 1.0, -1.0, 1.0, 1e-12).is_none());
    }
}

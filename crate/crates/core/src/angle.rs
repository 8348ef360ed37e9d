//! Mixing angles, kept as exact rational multiples of π when possible.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An angle in `[0, π)`.
///
/// `Φ^{θ+π} = -Φ^θ`, so the zero set only depends on θ mod π and every
/// constructor reduces into `[0, π)`. Angles built from a fraction of π keep
/// the reduced fraction so that special angles (π/4, π/2, 3π/4) have exactly
/// symmetric coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Angle {
    radians: f64,
    over_pi: Option<(i64, i64)>,
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.abs()
}

impl Angle {
    pub fn from_radians(radians: f64) -> Result<Self> {
        if !radians.is_finite() {
            return Err(Error::InvalidAngle(format!("{radians} is not finite")));
        }
        let r = radians.rem_euclid(PI);
        // rem_euclid can round up to exactly π
        let r = if r >= PI { 0.0 } else { r };
        Ok(Angle {
            radians: r,
            over_pi: None,
        })
    }

    /// `θ = (p/q)·π`, reduced mod π.
    pub fn from_fraction_of_pi(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidAngle("zero denominator".into()));
        }
        let (mut p, mut q) = if q < 0 { (-p, -q) } else { (p, q) };
        p = p.rem_euclid(q);
        let g = gcd(p, q).max(1);
        p /= g;
        q /= g;
        Ok(Angle {
            radians: PI * p as f64 / q as f64,
            over_pi: Some((p, q)),
        })
    }

    /// Parses `"3/4"`, `"1"` or a decimal such as `"0.75"` as a multiple of π.
    pub fn parse_fraction_of_pi(text: &str) -> Result<Self> {
        let text = text.trim();
        if let Some((a, b)) = text.split_once('/') {
            let p: i64 = a
                .trim()
                .parse()
                .map_err(|_| Error::InvalidAngle(format!("bad numerator in {text:?}")))?;
            let q: i64 = b
                .trim()
                .parse()
                .map_err(|_| Error::InvalidAngle(format!("bad denominator in {text:?}")))?;
            return Self::from_fraction_of_pi(p, q);
        }
        if let Ok(p) = text.parse::<i64>() {
            return Self::from_fraction_of_pi(p, 1);
        }
        let v: f64 = text
            .parse()
            .map_err(|_| Error::InvalidAngle(format!("cannot parse {text:?}")))?;
        Self::from_radians(v * PI)
    }

    pub fn radians(&self) -> f64 {
        self.radians
    }

    pub fn fraction_of_pi(&self) -> Option<(i64, i64)> {
        self.over_pi
    }

    pub fn is_exactly(&self, p: i64, q: i64) -> bool {
        match (self.over_pi, Angle::from_fraction_of_pi(p, q)) {
            (Some(a), Ok(b)) => Some(a) == b.over_pi,
            _ => false,
        }
    }

    /// `(cos θ, sin θ)`, exact at multiples of π/4.
    pub fn coefficients(&self) -> (f64, f64) {
        if let Some((p, q)) = self.over_pi {
            match (p, q) {
                (0, 1) => return (1.0, 0.0),
                (1, 2) => return (0.0, 1.0),
                (1, 4) => return (FRAC_1_SQRT_2, FRAC_1_SQRT_2),
                (3, 4) => return (-FRAC_1_SQRT_2, FRAC_1_SQRT_2),
                _ => {}
            }
        }
        (self.radians.cos(), self.radians.sin())
    }

    /// True for θ = 0 and θ = π/2, where `Φ^θ_n` is a single product
    /// eigenfunction and its nodal set is a family of parallel lines.
    pub fn is_degenerate(&self) -> bool {
        let (c, s) = self.coefficients();
        c == 0.0 || s == 0.0
    }

    /// `π - θ`, reduced.
    pub fn supplement(&self) -> Angle {
        match self.over_pi {
            Some((p, q)) => Angle::from_fraction_of_pi(q - p, q).expect("q > 0"),
            None => Angle::from_radians(PI - self.radians).expect("finite"),
        }
    }

    /// `π/2 - θ`, reduced.
    pub fn complement(&self) -> Angle {
        match self.over_pi {
            Some((p, q)) => Angle::from_fraction_of_pi(q - 2 * p, 2 * q).expect("q > 0"),
            None => Angle::from_radians(PI / 2.0 - self.radians).expect("finite"),
        }
    }

    pub fn approx_eq(&self, other: f64, tol: f64) -> bool {
        (self.radians - other).abs() <= tol
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.over_pi {
            Some((0, _)) => write!(f, "0"),
            Some((p, 1)) => write!(f, "{p}π"),
            Some((p, q)) => write!(f, "{p}π/{q}"),
            None => write!(f, "{}", self.radians),
        }
    }
}

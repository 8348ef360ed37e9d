//! SVG rendering of a traced nodal set.
//!
//! Conventions: 800×800 canvas, y axis pointing up; zeros of `H_n` as grey
//! lines, zeros of `H_{n-1}` as blue lines, diagonal and antidiagonal dashed,
//! lattice points `(t_{n,i}, t_{n,j})` as dots, critical zeros as red
//! circles, nodal curves in black.

use std::fmt::Write as _;

use super::NodalAnalysis;
use crate::error::Result;
use crate::hermite::hermite_zero_tables;

const SIZE: f64 = 800.0;
const PAD: f64 = 20.0;

struct Frame {
    x_min: f64,
    y_max: f64,
    scale: f64,
}

impl Frame {
    fn x(&self, x: f64) -> f64 {
        PAD + (x - self.x_min) * self.scale
    }

    fn y(&self, y: f64) -> f64 {
        PAD + (self.y_max - y) * self.scale
    }
}

pub fn render_svg(analysis: &NodalAnalysis) -> Result<String> {
    let t = &analysis.topology;
    let b = t.bounds;
    let scale = (SIZE - 2.0 * PAD) / b.width().max(b.height());
    let f = Frame {
        x_min: b.x_min,
        y_max: b.y_max,
        scale,
    };
    let tables = hermite_zero_tables(t.n)?;
    let zn = &tables[t.n - 1].zeros;
    let zm = &tables[t.n - 2].zeros;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="800" viewBox="0 0 800 800">"#
    );
    let _ = writeln!(out, r#"<title>n={} theta={:.6}</title>"#, t.n, t.theta);
    let _ = writeln!(out, r#"<rect x="0" y="0" width="800" height="800" fill="white"/>"#);
    let line = |out: &mut String, x1: f64, y1: f64, x2: f64, y2: f64, style: &str| {
        let _ = writeln!(
            out,
            r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" {style}/>"#,
            f.x(x1),
            f.y(y1),
            f.x(x2),
            f.y(y2)
        );
    };
    for (zeros, style) in [
        (zn, r##"stroke="#aaaaaa" stroke-width="1""##),
        (zm, r##"stroke="#3366cc" stroke-width="1""##),
    ] {
        let _ = writeln!(out, "<g>");
        for &z in zeros {
            line(&mut out, z, b.y_min, z, b.y_max, style);
            line(&mut out, b.x_min, z, b.x_max, z, style);
        }
        let _ = writeln!(out, "</g>");
    }
    let lo = b.x_min.max(b.y_min);
    let hi = b.x_max.min(b.y_max);
    let dashed = r##"stroke="#666666" stroke-width="1" stroke-dasharray="6,4""##;
    line(&mut out, lo, lo, hi, hi, dashed);
    line(&mut out, lo, -lo, hi, -hi, dashed);

    let _ = writeln!(out, r#"<g fill="none" stroke="black" stroke-width="2">"#);
    for c in &analysis.curves {
        let tag = if c.closed { "polygon" } else { "polyline" };
        let mut pts = String::new();
        for (k, &(x, y)) in c.points.iter().enumerate() {
            if k > 0 {
                pts.push(' ');
            }
            let _ = write!(pts, "{:.2},{:.2}", f.x(x), f.y(y));
        }
        let _ = writeln!(out, r#"<{tag} points="{pts}"/>"#);
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(out, r#"<g fill="black">"#);
    for &x in zn {
        for &y in zn {
            let _ = writeln!(out, r#"<circle cx="{:.3}" cy="{:.3}" r="3"/>"#, f.x(x), f.y(y));
        }
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r#"<g fill="none" stroke="red" stroke-width="2">"#);
    for h in &t.critical_zero_hits {
        let _ = writeln!(
            out,
            r#"<circle cx="{:.3}" cy="{:.3}" r="7"/>"#,
            f.x(h.location.0),
            f.y(h.location.1)
        );
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    Ok(out)
}

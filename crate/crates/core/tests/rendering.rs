//! SVG output is compared byte-for-byte with stored golden files. Set
//! `UPDATE_GOLDEN=1` to rewrite them after an intended rendering change.

use std::path::PathBuf;

use qho_nodal::nodal::svg::render_svg;
use qho_nodal::nodal::{analyze, NodalConfig};
use qho_nodal::Angle;

fn check_golden(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(expected == actual, "{} differs from the rendered output", path.display());
}

fn render(n: usize, angle: Angle, resolution: usize) -> String {
    let config = NodalConfig {
        resolution: Some(resolution),
        check_stability: false,
        ..NodalConfig::default()
    };
    render_svg(&analyze(n, angle, &config).unwrap()).unwrap()
}

#[test]
fn three_quarter_pi_n3() {
    let svg = render(3, Angle::from_fraction_of_pi(3, 4).unwrap(), 128);
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches("<polygon").count(), 1);
    assert_eq!(svg.matches("<polyline").count(), 1);
    check_golden("n3_three_quarter_pi.svg", &svg);
}

#[test]
fn below_critical_n5() {
    let svg = render(5, Angle::from_fraction_of_pi(1, 16).unwrap(), 128);
    assert_eq!(svg.matches("<polyline").count(), 1);
    assert_eq!(svg.matches("<polygon").count(), 0);
    check_golden("n5_pi_over_16.svg", &svg);
}

#[test]
fn rendering_is_deterministic() {
    let a = render(5, Angle::from_radians(2.0).unwrap(), 96);
    let b = render(5, Angle::from_radians(2.0).unwrap(), 96);
    assert_eq!(a, b);
}

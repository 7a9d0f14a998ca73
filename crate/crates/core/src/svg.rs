//! Constellation figures: one disc per vector in a grid, orthographic
//! projection viewed from +Y. A sphere point (sin t cos p, sin t sin p, cos t)
//! lands at disc coordinates (x, z); front-hemisphere points (y >= 0) are
//! filled, back-hemisphere points hollow, and merged points print their
//! multiplicity. Output bytes are deterministic: no timestamps, floats at
//! 9 significant digits.

use std::fmt::Write as _;

use crate::majorana::Constellation;

const DISC_RADIUS: f64 = 70.0;
const CELL_W: f64 = 180.0;
const CELL_H: f64 = 200.0;
const MARGIN: f64 = 20.0;
const POINT_RADIUS: f64 = 4.0;

/// Formats with 9 significant digits, plain decimal.
pub fn fmt_svg(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (8 - magnitude).clamp(0, 17) as usize;
    format!("{x:.decimals$}")
}

/// Renders labeled constellations as an SVG grid.
pub fn render_svg(items: &[(String, Constellation)], columns: usize) -> String {
    assert!(!items.is_empty(), "nothing to render");
    let columns = columns.max(1).min(items.len());
    let rows = items.len().div_ceil(columns);
    let width = MARGIN * 2.0 + CELL_W * columns as f64;
    let height = MARGIN * 2.0 + CELL_H * rows as f64;

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        fmt_svg(width),
        fmt_svg(height),
        fmt_svg(width),
        fmt_svg(height)
    );
    s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    for (index, (label, constellation)) in items.iter().enumerate() {
        let col = index % columns;
        let row = index / columns;
        let cx = MARGIN + CELL_W * col as f64 + CELL_W / 2.0;
        let cy = MARGIN + CELL_H * row as f64 + DISC_RADIUS + 10.0;
        let _ = writeln!(
            s,
            "<g><circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>",
            fmt_svg(cx),
            fmt_svg(cy),
            fmt_svg(DISC_RADIUS)
        );
        // equator guide
        let _ = writeln!(
            s,
            "<ellipse cx=\"{}\" cy=\"{}\" rx=\"{}\" ry=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"0.4\" stroke-dasharray=\"3 3\"/>",
            fmt_svg(cx),
            fmt_svg(cy),
            fmt_svg(DISC_RADIUS),
            fmt_svg(DISC_RADIUS * 0.22)
        );

        let mut entries: Vec<(f64, f64, u32)> = constellation
            .points()
            .iter()
            .map(|p| (p.theta, p.phi, p.multiplicity))
            .collect();
        if constellation.south_pole_count() > 0 {
            entries.push((std::f64::consts::PI, 0.0, constellation.south_pole_count()));
        }
        entries.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

        for (theta, phi, mult) in entries {
            let x3 = theta.sin() * phi.cos();
            let y3 = theta.sin() * phi.sin();
            let z3 = theta.cos();
            let px = cx + DISC_RADIUS * x3;
            let py = cy - DISC_RADIUS * z3;
            let front = y3 >= 0.0;
            let _ = writeln!(
                s,
                "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\" stroke=\"black\" stroke-width=\"1\"/>",
                fmt_svg(px),
                fmt_svg(py),
                fmt_svg(POINT_RADIUS),
                if front { "black" } else { "none" }
            );
            if mult > 1 {
                let _ = writeln!(
                    s,
                    "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"11\">x{mult}</text>",
                    fmt_svg(px + POINT_RADIUS + 2.0),
                    fmt_svg(py - POINT_RADIUS)
                );
            }
        }
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"14\">{label}</text>\n</g>",
            fmt_svg(cx),
            fmt_svg(cy + DISC_RADIUS + 24.0)
        );
    }
    s.push_str("</svg>\n");
    s
}

//! SVG drawing of measure supports on the equilateral embedding.

use std::fmt::Write;

use hivepoly::{LatticePoint, TriMeasure};

const UNIT: f64 = 40.0;
const MARGIN: f64 = 1.5;

fn embed(p: LatticePoint) -> (f64, f64) {
    let (x, y) = (f64::from(p.x), f64::from(p.y));
    (x - 0.5 * y, y * 3f64.sqrt() / 2.0)
}

/// One panel per measure, laid out left to right.
pub fn svg(measures: &[TriMeasure]) -> String {
    let panel = |m: &TriMeasure| f64::from(m.r()) + 2.0 * MARGIN;
    let width: f64 = measures.iter().map(panel).sum::<f64>().max(1.0) * UNIT;
    let height = measures.iter().map(|m| f64::from(m.r()) * 3f64.sqrt() / 2.0 + 2.0 * MARGIN).fold(1.0, f64::max) * UNIT;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.1}" height="{height:.1}" viewBox="0 0 {width:.1} {height:.1}">"#
    );
    let mut offset = 0.0;
    for m in measures {
        let r = f64::from(m.r());
        // The triangle spans [0, r] horizontally; stubs reach one unit further.
        let ox = offset + MARGIN * UNIT;
        let oy = height - MARGIN * UNIT;
        let map = |p: LatticePoint| {
            let (x, y) = embed(p);
            (ox + x * UNIT, oy - y * UNIT)
        };
        let _ = writeln!(out, r#"  <g class="measure">"#);
        let ri = m.r() as i32;
        let corners = [LatticePoint::new(0, 0), LatticePoint::new(ri, 0), LatticePoint::new(ri, ri)];
        let pts: Vec<String> = corners
            .iter()
            .map(|&c| {
                let (x, y) = map(c);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            out,
            r#"    <polygon points="{}" fill="none" stroke="gray" stroke-width="1" stroke-dasharray="2,4"/>"#,
            pts.join(" ")
        );
        for (e, d) in m.entries() {
            let (a, b) = e.endpoints();
            let ((x1, y1), (x2, y2)) = (map(a), map(b));
            let _ = writeln!(
                out,
                r#"    <line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="black" stroke-width="{:.1}" stroke-linecap="round"><title>{e}: {d}</title></line>"#,
                2.0 * d as f64
            );
        }
        let _ = writeln!(out, "  </g>");
        offset += (r + 2.0 * MARGIN) * UNIT;
    }
    out.push_str("</svg>\n");
    out
}

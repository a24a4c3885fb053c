//! Plain SVG drawings of polygons (or coordinate-plane projections) with point overlays.

use std::fmt::Write;

use toric::polytope::DelzantPolytope;
use toric::rational::format_point;
use toric::{Point, Rational};

const SIZE: f64 = 480.0;
const MARGIN: f64 = 48.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MarkKind {
    Survivor,
    Marked,
}

impl MarkKind {
    fn class(self) -> &'static str {
        match self {
            MarkKind::Survivor => "survivor",
            MarkKind::Marked => "marked",
        }
    }
}

fn cross(o: &[Rational; 2], a: &[Rational; 2], b: &[Rational; 2]) -> Rational {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

/// Exact convex hull, counter-clockwise, collinear points dropped.
fn hull(mut pts: Vec<[Rational; 2]>) -> Vec<[Rational; 2]> {
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<[Rational; 2]> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive()
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<[Rational; 2]> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive()
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Renders `poly` projected to the coordinates `(i, j)` (0-based).
pub fn render(
    poly: &DelzantPolytope,
    (i, j): (usize, usize),
    marks: &[(Point, MarkKind)],
) -> String {
    let proj = |p: &[Rational]| [p[i].clone(), p[j].clone()];
    let outline = hull(poly.vertices().iter().map(|v| proj(v)).collect());

    let xs: Vec<f64> = outline.iter().map(|p| p[0].to_f64()).collect();
    let ys: Vec<f64> = outline.iter().map(|p| p[1].to_f64()).collect();
    let (x0, x1) = (xs.iter().cloned().fold(f64::INFINITY, f64::min), xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
    let (y0, y1) = (ys.iter().cloned().fold(f64::INFINITY, f64::min), ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
    let span = (x1 - x0).max(y1 - y0).max(f64::MIN_POSITIVE);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    let sx = |x: &Rational| MARGIN + (x.to_f64() - x0) * scale;
    let sy = |y: &Rational| SIZE - MARGIN - (y.to_f64() - y0) * scale;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    out.push_str(
        "<style>.poly{fill:#eef2fb;stroke:#1d2b53;stroke-width:1.5}\
         .vertex{fill:#1d2b53}.survivor{fill:#c0392b}.marked{fill:none;stroke:#1e7d32;stroke-width:2}\
         text{font-family:sans-serif;font-size:11px;fill:#333}</style>\n",
    );
    let _ = writeln!(out, "<title>{}</title>", escape(poly.label()));
    let path: Vec<String> = outline
        .iter()
        .map(|p| format!("{:.3},{:.3}", sx(&p[0]), sy(&p[1])))
        .collect();
    let _ = writeln!(out, r#"<polygon class="poly" points="{}"/>"#, path.join(" "));
    for p in &outline {
        let _ = writeln!(
            out,
            r#"<circle class="vertex" cx="{:.3}" cy="{:.3}" r="2.5"/><text x="{:.3}" y="{:.3}">{}</text>"#,
            sx(&p[0]),
            sy(&p[1]),
            sx(&p[0]) + 4.0,
            sy(&p[1]) - 4.0,
            escape(&format_point(p)),
        );
    }
    for (pt, kind) in marks {
        let q = proj(pt);
        let r = if *kind == MarkKind::Survivor { 3.5 } else { 6.0 };
        let _ = writeln!(
            out,
            r#"<circle class="{}" cx="{:.3}" cy="{:.3}" r="{r}"><title>{}</title></circle>"#,
            kind.class(),
            sx(&q[0]),
            sy(&q[1]),
            escape(&format_point(pt)),
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{MARGIN}" y="{:.3}">x{} horizontal, x{} vertical</text>"#,
        SIZE - 12.0,
        i + 1,
        j + 1
    );
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

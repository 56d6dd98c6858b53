use std::fmt::Write;

use super::{Address, Refinement};
use crate::geometry::{ConvexPolygon, Point2};

/// Cells and a polyline to draw over a refinement, e.g. an arc chain and
/// its junctions.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Highlight {
    pub cells: Vec<(Address, ConvexPolygon)>,
    pub polyline: Vec<Point2>,
}

/// 9 significant digits, trailing zeros trimmed, no exponent.
fn num(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return "0".to_owned();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (8 - magnitude).clamp(0, 30) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.truncate(s.trim_end_matches('0').len());
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".to_owned();
    }
    s
}

fn path_data(points: &[Point2], closed: bool) -> String {
    let mut d = String::new();
    for (k, p) in points.iter().enumerate() {
        let cmd = if k == 0 { 'M' } else { 'L' };
        let _ = write!(d, "{cmd}{} {} ", num(p.x), num(p.y));
    }
    if closed {
        d.push('Z');
    } else {
        d.pop();
    }
    d
}

/// SVG 1.1 document with one `<path id="cell-<address>">` per cell, in
/// refinement order. The viewBox is the bounding box of `base`; y points up.
pub fn render_svg(
    refinement: &Refinement,
    base: &ConvexPolygon,
    m: usize,
    highlights: &[Highlight],
) -> String {
    let vs = base.vertices();
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for v in vs {
        x0 = x0.min(v.x);
        y0 = y0.min(v.y);
        x1 = x1.max(v.x);
        y1 = y1.max(v.y);
    }
    let (w, h) = (x1 - x0, y1 - y0);
    let stroke = num(w.max(h) * 2e-3);

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{} {} {} {}\" width=\"800\" height=\"{}\">",
        num(x0),
        num(y0),
        num(w),
        num(h),
        num((800.0 * h / w).round()),
    );
    let _ = writeln!(out, "<g transform=\"matrix(1 0 0 -1 0 {})\">", num(y0 + y1));
    let _ = writeln!(
        out,
        "<g id=\"cells\" fill=\"#cfd8e3\" stroke=\"#2b3a4a\" stroke-width=\"{stroke}\" stroke-linejoin=\"round\">"
    );
    for (addr, cell) in &refinement.cells {
        let _ = writeln!(
            out,
            "<path id=\"cell-{}\" d=\"{}\"/>",
            addr.token(m),
            path_data(cell.vertices(), true)
        );
    }
    out.push_str("</g>\n");
    for (k, hl) in highlights.iter().enumerate() {
        let _ = writeln!(
            out,
            "<g id=\"arc-{}\" fill=\"#f2a541\" fill-opacity=\"0.6\" stroke=\"#b5541c\" stroke-width=\"{stroke}\">",
            k + 1
        );
        for (addr, cell) in &hl.cells {
            let _ = writeln!(
                out,
                "<path id=\"arc-{}-cell-{}\" d=\"{}\"/>",
                k + 1,
                addr.token(m),
                path_data(cell.vertices(), true)
            );
        }
        if hl.polyline.len() > 1 {
            let _ = writeln!(
                out,
                "<path id=\"arc-{}-junctions\" fill=\"none\" stroke=\"#7a1f1f\" stroke-width=\"{}\" d=\"{}\"/>",
                k + 1,
                num(w.max(h) * 4e-3),
                path_data(&hl.polyline, false)
            );
        }
        out.push_str("</g>\n");
    }
    out.push_str("</g>\n</svg>\n");
    out
}

use std::fmt::Write;

use num_traits::Signed;

use super::chain::PolyChain;
use super::ChainError;
use crate::rational::to_f64;

const POSITIVE: &str = "#1f5fa8";
const NEGATIVE: &str = "#c0392b";

/// One path per cell, y axis pointing up, stroke colour by coefficient sign.
pub fn to_svg(t: &PolyChain, size_px: f64) -> Result<String, ChainError> {
    if t.n != 2 {
        return Err(ChainError::DimensionMismatch("SVG export needs n = 2".into()));
    }
    let (lo, hi) = match t.bbox() {
        Some((lo, hi)) => (
            lo.iter().map(to_f64).collect::<Vec<_>>(),
            hi.iter().map(to_f64).collect::<Vec<_>>(),
        ),
        None => (vec![0.0, 0.0], vec![1.0, 1.0]),
    };
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-12);
    let pad = 0.05 * span;
    let scale = size_px / (span + 2.0 * pad);
    let map = |x: f64, y: f64| ((x - lo[0] + pad) * scale, (hi[1] - y + pad) * scale);

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size_px:.0}" height="{size_px:.0}" viewBox="0 0 {size_px:.0} {size_px:.0}">"#
    )
    .unwrap();
    let width = (size_px / 400.0).max(0.5);
    for (v, c) in t.cells() {
        let colour = if c.is_negative() { NEGATIVE } else { POSITIVE };
        let mut path = String::new();
        for (i, p) in v.iter().enumerate() {
            let (x, y) = map(to_f64(&p[0]), to_f64(&p[1]));
            write!(path, "{}{x:.3} {y:.3} ", if i == 0 { "M" } else { "L" }).unwrap();
        }
        match t.d {
            0 => {
                let (x, y) = map(to_f64(&v[0][0]), to_f64(&v[0][1]));
                writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="{:.3}" fill="{colour}"/>"#, 2.0 * width).unwrap();
            }
            1 => writeln!(s, r#"<path d="{}" stroke="{colour}" stroke-width="{width:.3}" fill="none"/>"#, path.trim_end()).unwrap(),
            _ => writeln!(
                s,
                r#"<path d="{}Z" stroke="{colour}" stroke-width="{:.3}" fill="{colour}" fill-opacity="0.25"/>"#,
                path,
                width / 2.0
            )
            .unwrap(),
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Wavefront OBJ: `l` records for segments, `f` records for triangles.
pub fn to_obj(t: &PolyChain) -> Result<String, ChainError> {
    if t.n != 3 || t.d == 0 || t.d > 2 {
        return Err(ChainError::DimensionMismatch("OBJ export needs n = 3 and d in {1, 2}".into()));
    }
    let mut s = String::new();
    let mut next = 1usize;
    for (v, c) in t.cells() {
        let mut ids = Vec::with_capacity(v.len());
        for p in v {
            writeln!(s, "v {} {} {}", to_f64(&p[0]), to_f64(&p[1]), to_f64(&p[2])).unwrap();
            ids.push(next);
            next += 1;
        }
        if c.is_negative() {
            ids.swap(0, 1);
        }
        let tag = if t.d == 1 { "l" } else { "f" };
        let list: Vec<String> = ids.iter().map(|i| i.to_string()).collect();
        writeln!(s, "{tag} {}", list.join(" ")).unwrap();
    }
    Ok(s)
}

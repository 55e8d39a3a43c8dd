//! Vector export of brush strokes as a minimal SVG 1.1 document.

use crate::raster::Rgb;
use crate::stroke::BrushStroke;
use std::fmt::Write;

fn rgb_attr(color: Rgb) -> String {
    let q = |c: f64| c.clamp(0.0, 255.0).round() as u8;
    format!("rgb({},{},{})", q(color[0]), q(color[1]), q(color[2]))
}

/// Serializes `strokes` (in paint order, earliest first) as an SVG
/// document of the given pixel dimensions over a solid background.
///
/// Only `rect` and `path` elements are emitted; strokes use round caps
/// and joins to match the raster renderer. The output is deterministic
/// for identical input.
pub fn export_svg(strokes: &[BrushStroke], width: usize, height: usize, background: Rgb) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    );
    let _ = writeln!(
        out,
        "  <rect width=\"{width}\" height=\"{height}\" fill=\"{}\"/>",
        rgb_attr(background)
    );
    for stroke in strokes {
        let Some(first) = stroke.segments.first() else {
            continue;
        };
        let mut d = format!("M {:.4} {:.4}", first[0].x, first[0].y);
        for seg in &stroke.segments {
            let _ = write!(
                d,
                " C {:.4} {:.4} {:.4} {:.4} {:.4} {:.4}",
                seg[1].x, seg[1].y, seg[2].x, seg[2].y, seg[3].x, seg[3].y
            );
        }
        let _ = writeln!(
            out,
            "  <path d=\"{d}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{:.4}\" stroke-linecap=\"round\" stroke-linejoin=\"round\"/>",
            rgb_attr(stroke.color),
            stroke.width
        );
    }
    out.push_str("</svg>\n");
    out
}

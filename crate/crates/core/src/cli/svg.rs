//! Deterministic SVG 1.1 stack diagrams.
//!
//! Coordinates are computed exactly and rounded to three decimals only when
//! written, so identical inputs give byte-identical documents.

use crate::rational::{format_rational, to_f64, Rational};
use crate::stack::BlockSet;
use std::fmt::Write;

const DRAW_WIDTH: f64 = 560.0;
const MARGIN: f64 = 40.0;
const BLOCK_HEIGHT: f64 = 28.0;
const TABLE_HEIGHT: f64 = 36.0;
const HEADER: f64 = 56.0;
const BANNER: f64 = 32.0;

/// Everything needed to draw one stack.
#[derive(Debug, Clone)]
pub struct StackDrawing<'a> {
    pub blocks: &'a BlockSet,
    /// Top to bottom.
    pub order: &'a [usize],
    /// Midpoints, aligned with `order`.
    pub positions: &'a [Rational],
    /// Position in `order` of the highlighted block.
    pub protruding: Option<usize>,
    pub overhang: Rational,
    /// Shown as a banner across the top when set.
    pub warning: Option<String>,
}

fn num(x: f64) -> String {
    let s = format!("{x:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

pub fn render_svg(d: &StackDrawing<'_>) -> String {
    let edges: Vec<(f64, f64)> = d
        .order
        .iter()
        .zip(d.positions)
        .map(|(&i, x)| {
            let w = d.blocks[i].half_width();
            (to_f64(&(x - w)), to_f64(&(x + w)))
        })
        .collect();
    let lo = edges.iter().map(|e| e.0).fold(0.0f64, f64::min);
    let hi = edges.iter().map(|e| e.1).fold(0.0f64, f64::max);
    // Leave room left of the stack for the table top.
    let span = (hi - lo).max(f64::MIN_POSITIVE);
    let lo = lo - 0.15 * span;
    let span = hi - lo;
    let scale = DRAW_WIDTH / span;
    let sx = |x: f64| MARGIN + (x - lo) * scale;

    let banner = if d.warning.is_some() { BANNER } else { 0.0 };
    let top = banner + HEADER;
    let n = d.order.len() as f64;
    let table_y = top + n * BLOCK_HEIGHT;
    let width = DRAW_WIDTH + 2.0 * MARGIN;
    let height = table_y + TABLE_HEIGHT + MARGIN / 2.0;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        num(width),
        num(height),
        num(width),
        num(height)
    );
    let _ = writeln!(
        s,
        r##"<rect x="0" y="0" width="{}" height="{}" fill="#ffffff"/>"##,
        num(width),
        num(height)
    );
    if let Some(msg) = &d.warning {
        let _ = writeln!(
            s,
            r##"<rect class="warning" x="0" y="0" width="{}" height="{}" fill="#c0392b"/>"##,
            num(width),
            num(BANNER)
        );
        let _ = writeln!(
            s,
            r##"<text x="{}" y="{}" font-family="monospace" font-size="13" fill="#ffffff">UNBALANCED: {}</text>"##,
            num(MARGIN / 2.0),
            num(BANNER * 0.65),
            escape(msg)
        );
    }

    // Table top and its edge.
    let edge_x = sx(0.0);
    let _ = writeln!(
        s,
        r##"<rect class="table" x="{}" y="{}" width="{}" height="{}" fill="#b0a08a"/>"##,
        num(MARGIN / 2.0),
        num(table_y),
        num(edge_x - MARGIN / 2.0),
        num(TABLE_HEIGHT)
    );
    let _ = writeln!(
        s,
        r##"<line class="table-edge" x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="#333333" stroke-width="1" stroke-dasharray="4 3"/>"##,
        num(top - 12.0),
        num(table_y + TABLE_HEIGHT),
        x = num(edge_x)
    );

    for (k, ((&i, _), &(l, r))) in d.order.iter().zip(d.positions).zip(&edges).enumerate() {
        let y = top + k as f64 * BLOCK_HEIGHT;
        let (class, fill) = if d.protruding == Some(k) {
            ("block protruding", "#f4a259")
        } else {
            ("block", "#8ecae6")
        };
        let _ = writeln!(
            s,
            r##"<rect class="{class}" x="{}" y="{}" width="{}" height="{}" fill="{fill}" stroke="#1d3557" stroke-width="1"/>"##,
            num(sx(l)),
            num(y),
            num((r - l) * scale),
            num(BLOCK_HEIGHT)
        );
        let _ = writeln!(
            s,
            r##"<text x="{}" y="{}" font-family="monospace" font-size="12" text-anchor="middle" fill="#1d3557">{}</text>"##,
            num(sx((l + r) / 2.0)),
            num(y + BLOCK_HEIGHT * 0.65),
            i + 1
        );
    }

    // Overhang dimension line from the table edge to the rightmost point.
    let reach = sx(to_f64(&d.overhang));
    let dim_y = top - 18.0;
    let _ = writeln!(
        s,
        r##"<line class="overhang" x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="#1d3557" stroke-width="1.5"/>"##,
        num(edge_x),
        num(reach),
        y = num(dim_y)
    );
    let _ = writeln!(
        s,
        r##"<line x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="#1d3557" stroke-width="1"/>"##,
        num(dim_y - 5.0),
        num(table_y),
        x = num(reach)
    );
    let _ = writeln!(
        s,
        r##"<text class="annotation" x="{}" y="{}" font-family="monospace" font-size="14" text-anchor="middle" fill="#1d3557">{}</text>"##,
        num((edge_x + reach) / 2.0),
        num(dim_y - 8.0),
        escape(&format_rational(&d.overhang))
    );
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn harmonic() -> (BlockSet, Vec<Rational>) {
        let blocks = BlockSet::from_pairs((0..3).map(|_| (int(1), int(1)))).unwrap();
        (blocks, vec![frac(5, 6), frac(-1, 6), frac(-2, 3)])
    }

    #[test]
    fn draws_every_block_and_the_annotation() {
        let (blocks, pos) = harmonic();
        let d = StackDrawing {
            blocks: &blocks,
            order: &[0, 1, 2],
            positions: &pos,
            protruding: Some(0),
            overhang: frac(11, 6),
            warning: None,
        };
        let svg = render_svg(&d);
        assert!(svg.starts_with("<?xml"));
        assert_eq!(svg.matches(r#"class="block"#).count(), 3);
        assert_eq!(svg.matches("block protruding").count(), 1);
        assert!(svg.contains(">11/6</text>"));
        assert!(svg.contains("table-edge"));
        assert!(!svg.contains("UNBALANCED"));
        assert_eq!(svg, render_svg(&d));
    }

    #[test]
    fn warning_banner_is_escaped() {
        let (blocks, pos) = harmonic();
        let svg = render_svg(&StackDrawing {
            blocks: &blocks,
            order: &[0, 1, 2],
            positions: &pos,
            protruding: None,
            overhang: frac(11, 6),
            warning: Some("a < b".into()),
        });
        assert!(svg.contains("UNBALANCED: a &lt; b"));
    }

    #[test]
    fn numbers_are_trimmed() {
        assert_eq!(num(2.5), "2.5");
        assert_eq!(num(3.0), "3");
        assert_eq!(num(-0.0001), "0");
        assert_eq!(num(1.23456), "1.235");
    }
}

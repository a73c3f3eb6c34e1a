use std::fmt::Write;

use super::layout::{CellKind, Direction, LayoutGrid};
use super::{PanelData, PanelSpec, Style};
use crate::error::{Error, Result};

/// Fixed two-decimal formatting keeps the output byte-stable.
fn n(x: f64) -> String {
    let s = format!("{x:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Start offsets of fine tracks `min..=max+1`: even tracks are 2D panels,
/// odd tracks 1D strips.
fn offsets(min: i64, max: i64, style: &Style) -> Vec<f64> {
    let mut out = Vec::with_capacity((max - min + 2) as usize);
    let mut acc = 0.0;
    for k in min..=max + 1 {
        out.push(acc);
        acc += if k.rem_euclid(2) == 0 {
            style.panel_size
        } else {
            style.gap * style.panel_size
        };
    }
    out
}

struct Rect {
    x: f64,
    y: f64,
    w: f64,
    h: f64,
}

struct Scale {
    lo: f64,
    hi: f64,
}

impl Scale {
    fn of(values: impl Iterator<Item = f64>) -> Self {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values.filter(|v| v.is_finite()) {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !lo.is_finite() {
            return Scale { lo: 0.0, hi: 1.0 };
        }
        if hi - lo < 1e-12 {
            return Scale { lo: lo - 0.5, hi: hi + 0.5 };
        }
        Scale { lo, hi }
    }

    /// `[0, 1]` when every value already lies there (copula scale).
    fn unit_or_of(values: &[f64]) -> Self {
        if values.iter().all(|v| (0.0..=1.0).contains(v)) {
            Scale { lo: 0.0, hi: 1.0 }
        } else {
            Scale::of(values.iter().copied())
        }
    }

    fn frac(&self, v: f64) -> f64 {
        (v - self.lo) / (self.hi - self.lo)
    }
}

const INSET: f64 = 0.04;

fn px(r: &Rect, sx: &Scale, x: f64) -> f64 {
    r.x + r.w * (INSET + (1.0 - 2.0 * INSET) * sx.frac(x))
}

fn py(r: &Rect, sy: &Scale, y: f64) -> f64 {
    r.y + r.h * (1.0 - INSET - (1.0 - 2.0 * INSET) * sy.frac(y))
}

fn scatter(out: &mut String, r: &Rect, x: &[f64], y: &[f64], style: &Style) {
    let (sx, sy) = (Scale::unit_or_of(x), Scale::unit_or_of(y));
    let rad = style.point_radius * style.panel_size;
    let _ = writeln!(
        out,
        "<g fill=\"{}\" fill-opacity=\"{}\">",
        style.point_color,
        n(style.point_opacity)
    );
    for (&a, &b) in x.iter().zip(y) {
        if a.is_finite() && b.is_finite() {
            let _ = writeln!(
                out,
                "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
                n(px(r, &sx, a)),
                n(py(r, &sy, b)),
                n(rad)
            );
        }
    }
    out.push_str("</g>\n");
}

fn acf_bars(out: &mut String, r: &Rect, values: &[f64], band: f64, style: &Style) {
    let m = values.iter().fold(band, |m, v| m.max(v.abs())) * 1.2;
    let sy = Scale { lo: -m, hi: m };
    let k = values.len().max(1) as f64;
    let zero = py(r, &sy, 0.0);
    let _ = writeln!(
        out,
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"0.5\"/>",
        n(r.x),
        n(zero),
        n(r.x + r.w),
        n(zero),
        style.frame_color
    );
    for yb in [band, -band] {
        let y = py(r, &sy, yb);
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"0.6\" stroke-dasharray=\"3,2\"/>",
            n(r.x),
            n(y),
            n(r.x + r.w),
            n(y),
            style.line_color
        );
    }
    let sx = Scale { lo: 0.0, hi: k };
    for (i, v) in values.iter().enumerate() {
        let x = px(r, &sx, i as f64 + 0.5);
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"1\"/>",
            n(x),
            n(zero),
            n(x),
            n(py(r, &sy, *v)),
            style.line_color
        );
    }
}

fn polygon(out: &mut String, r: &Rect, s: &Scale, x: &[f64], lower: &[f64], upper: &[f64], fill: &str) {
    let mut pts = String::new();
    for (a, b) in x.iter().zip(upper) {
        let _ = write!(pts, "{},{} ", n(px(r, s, *a)), n(py(r, s, *b)));
    }
    for (a, b) in x.iter().zip(lower).rev() {
        let _ = write!(pts, "{},{} ", n(px(r, s, *a)), n(py(r, s, *b)));
    }
    let _ = writeln!(out, "<polygon points=\"{}\" fill=\"{fill}\" stroke=\"none\"/>", pts.trim_end());
}

fn qq(
    out: &mut String,
    r: &Rect,
    sample: &[f64],
    theoretical: &[f64],
    envelope: Option<&crate::margins::QQEnvelope>,
    style: &Style,
) {
    // the simulated range has very long tails; the widest level band sets
    // the scale and the panel clip cuts the rest
    let mut all: Vec<f64> = sample.iter().chain(theoretical).copied().collect();
    if let Some(b) = envelope.and_then(|e| e.bands.last()) {
        all.extend(b.lower.iter().chain(&b.upper));
    }
    let s = Scale::of(all.into_iter());
    if let Some(e) = envelope {
        polygon(out, r, &s, theoretical, &e.min, &e.max, &style.band_greys[3]);
        // widest band first so darker inner bands stay visible
        for (k, b) in e.bands.iter().enumerate().rev() {
            let grey = &style.band_greys[k.min(2)];
            polygon(out, r, &s, theoretical, &b.lower, &b.upper, grey);
        }
    }
    let _ = writeln!(
        out,
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"0.4\"/>",
        n(px(r, &s, s.lo)),
        n(py(r, &s, s.lo)),
        n(px(r, &s, s.hi)),
        n(py(r, &s, s.hi)),
        style.line_color
    );
    let rad = style.point_radius * style.panel_size;
    let _ = writeln!(
        out,
        "<g fill=\"{}\" fill-opacity=\"{}\">",
        style.point_color,
        n(style.point_opacity)
    );
    for (a, b) in theoretical.iter().zip(sample) {
        let _ = writeln!(
            out,
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
            n(px(r, &s, *a)),
            n(py(r, &s, *b)),
            n(rad)
        );
    }
    out.push_str("</g>\n");
}

fn label(out: &mut String, r: &Rect, text: &str, style: &Style) {
    let (cx, cy) = (r.x + r.w / 2.0, r.y + r.h / 2.0);
    let vertical = r.h > r.w;
    let size = style.font_size.min(0.8 * r.w.min(r.h));
    let rotate = if vertical {
        format!(" transform=\"rotate(-90 {} {})\"", n(cx), n(cy))
    } else {
        String::new()
    };
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" font-family=\"{}\" font-size=\"{}\" text-anchor=\"middle\" dominant-baseline=\"central\"{rotate}>{}</text>",
        n(cx),
        n(cy),
        escape(&style.font_family),
        n(size),
        escape(text)
    );
}

fn arrow(out: &mut String, r: &Rect, d: Direction, style: &Style) {
    let (cx, cy) = (r.x + r.w / 2.0, r.y + r.h / 2.0);
    let a = 0.35 * r.w.min(r.h);
    let b = 2.0 * a;
    let pts = match d {
        Direction::Right => [(cx - a, cy - b), (cx + a, cy), (cx - a, cy + b)],
        Direction::Left => [(cx + a, cy - b), (cx - a, cy), (cx + a, cy + b)],
        Direction::Down => [(cx - b, cy - a), (cx, cy + a), (cx + b, cy - a)],
        Direction::Up => [(cx - b, cy + a), (cx, cy - a), (cx + b, cy + a)],
    };
    let _ = writeln!(
        out,
        "<polyline points=\"{},{} {},{} {},{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1\"/>",
        n(pts[0].0),
        n(pts[0].1),
        n(pts[1].0),
        n(pts[1].1),
        n(pts[2].0),
        n(pts[2].1),
        style.line_color
    );
}

/// Renders a layout to a standalone SVG 1.1 document. `panels[k]` fills
/// the `k`-th data panel; `names` supplies the label text for variates.
pub fn render(grid: &LayoutGrid, panels: &[PanelSpec], names: &[String], style: &Style) -> Result<String> {
    let count = grid.panel_count();
    if panels.len() != count {
        return Err(Error::DimensionMismatch {
            expected: count,
            got: panels.len(),
        });
    }
    let mut out = String::new();
    let Some((r0, r1, c0, c1)) = grid.bounds() else {
        out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        out.push_str("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"0\" height=\"0\" viewBox=\"0 0 0 0\">\n</svg>\n");
        return Ok(out);
    };
    let xs = offsets(c0, c1, style);
    let ys = offsets(r0, r1, style);
    let (width, height) = (xs[xs.len() - 1], ys[ys.len() - 1]);
    let rect = |row: i64, col: i64| {
        let (i, j) = ((row - r0) as usize, (col - c0) as usize);
        Rect {
            x: xs[j],
            y: ys[i],
            w: xs[j + 1] - xs[j],
            h: ys[i + 1] - ys[i],
        }
    };
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        n(width),
        n(height),
        n(width),
        n(height)
    );
    let _ = writeln!(
        out,
        "<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"{}\"/>",
        n(width),
        n(height),
        style.background
    );
    for cell in &grid.cells {
        let r = rect(cell.row, cell.col);
        match cell.kind {
            CellKind::Panel => {
                let k = cell.panel.expect("panel index");
                let spec = &panels[k];
                let _ = writeln!(
                    out,
                    "<clipPath id=\"clip-{k}\"><rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/></clipPath>",
                    n(r.x),
                    n(r.y),
                    n(r.w),
                    n(r.h)
                );
                let _ = writeln!(out, "<g class=\"panel\" id=\"panel-{k}\" clip-path=\"url(#clip-{k})\">");
                let _ = writeln!(
                    out,
                    "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"0.5\"/>",
                    n(r.x),
                    n(r.y),
                    n(r.w),
                    n(r.h),
                    style.frame_color
                );
                match &spec.data {
                    PanelData::Scatter { x, y } => scatter(&mut out, &r, x, y, style),
                    PanelData::Acf { values, band } => acf_bars(&mut out, &r, values, *band, style),
                    PanelData::Qq {
                        sample,
                        theoretical,
                        envelope,
                    } => qq(&mut out, &r, sample, theoretical, envelope.as_ref(), style),
                }
                if let Some(t) = &spec.title {
                    let _ = writeln!(
                        out,
                        "<text x=\"{}\" y=\"{}\" font-family=\"{}\" font-size=\"{}\">{}</text>",
                        n(r.x + 3.0),
                        n(r.y + style.font_size),
                        escape(&style.font_family),
                        n(style.font_size),
                        escape(t)
                    );
                }
                out.push_str("</g>\n");
            }
            CellKind::Separator => {}
            CellKind::Label => {
                let v = cell.label.expect("label variate");
                let text = names.get(v).ok_or_else(|| {
                    Error::InvalidArgument(format!("no name for variate {v}"))
                })?;
                label(&mut out, &r, text, style);
            }
            CellKind::Arrow => arrow(&mut out, &r, cell.arrow.expect("arrow direction"), style),
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zenpath::Zenpath;
    use crate::zenplot::{layout, scatter_panel};

    #[test]
    fn empty_grid_is_valid_svg() {
        let svg = render(&LayoutGrid::default(), &[], &[], &Style::default()).unwrap();
        assert!(svg.contains("<svg") && svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn panel_count_must_match() {
        let g = layout(&Zenpath::chain(3), None, 9).unwrap();
        assert!(render(&g, &[], &["a".into(), "b".into(), "c".into()], &Style::default()).is_err());
    }

    #[test]
    fn deterministic_with_opacity_and_escaped_labels() {
        let g = layout(&Zenpath::chain(3), None, 9).unwrap();
        let p = vec![
            scatter_panel(&[0.1, 0.1, 0.9], &[0.2, 0.2, 0.5]).unwrap(),
            scatter_panel(&[0.3, 0.7], &[0.4, 0.6]).unwrap(),
        ];
        let names = vec!["A&B".to_string(), "C".to_string(), "D".to_string()];
        let a = render(&g, &p, &names, &Style::default()).unwrap();
        let b = render(&g, &p, &names, &Style::default()).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("fill-opacity=\"0.25\""));
        assert!(a.contains("A&amp;B"));
        // two coincident points are both drawn and composite darker
        assert_eq!(a.matches("<circle").count(), 5);
    }

    #[test]
    fn number_format() {
        assert_eq!(n(-0.0001), "0.00");
        assert_eq!(n(1.005), "1.00");
        assert_eq!(n(12.3456), "12.35");
    }
}

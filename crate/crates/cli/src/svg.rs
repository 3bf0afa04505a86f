//! Bare-bones SVG line plots for quick looks.

use std::fmt::Write as _;

const W: f64 = 640.0;
const H: f64 = 420.0;
const MARGIN: f64 = 48.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#555555"];

pub struct Series<'a> {
    pub label: String,
    pub xs: &'a [f64],
    pub ys: &'a [f64],
    pub dashed: bool,
}

/// Axis limits are the finite data range; non-finite points break the line.
pub fn line_plot(title: &str, x_label: &str, y_label: &str, series: &[Series<'_>]) -> String {
    let finite = series.iter().flat_map(|s| s.xs.iter().zip(s.ys)).filter(|(x, y)| x.is_finite() && y.is_finite());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (&x, &y) in finite {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !(x1 > x0) {
        (x0, x1) = (x0.min(0.0), x0.max(0.0) + 1.0);
    }
    if !(y1 > y0) {
        (y0, y1) = (y0.min(0.0), y0.max(0.0) + 1.0);
    }
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (W - 2.0 * MARGIN);
    let py = |y: f64| H - MARGIN - (y - y0) / (y1 - y0) * (H - 2.0 * MARGIN);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ =
        writeln!(out, r#"<text x="{}" y="18" text-anchor="middle" font-size="13">{}</text>"#, W / 2.0, escape(title));
    let _ = writeln!(
        out,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * MARGIN,
        H - 2.0 * MARGIN
    );
    for (v, anchor, x, y) in [(x0, "start", MARGIN, H - MARGIN + 14.0), (x1, "end", W - MARGIN, H - MARGIN + 14.0)] {
        let _ = writeln!(out, r#"<text x="{x}" y="{y}" text-anchor="{anchor}">{}</text>"#, tick(v));
    }
    for (v, y) in [(y0, H - MARGIN), (y1, MARGIN + 8.0)] {
        let _ = writeln!(out, r#"<text x="{}" y="{y}" text-anchor="end">{}</text>"#, MARGIN - 4.0, tick(v));
    }
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, W / 2.0, H - 12.0, escape(x_label));
    let _ = writeln!(
        out,
        r#"<text x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">{}</text>"#,
        H / 2.0,
        H / 2.0,
        escape(y_label)
    );

    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let dash = if s.dashed { r#" stroke-dasharray="6 4""# } else { "" };
        let mut d = String::new();
        let mut pen_down = false;
        for (&x, &y) in s.xs.iter().zip(s.ys) {
            if x.is_finite() && y.is_finite() {
                let _ = write!(d, "{}{:.2},{:.2} ", if pen_down { "L" } else { "M" }, px(x), py(y));
                pen_down = true;
            } else {
                pen_down = false;
            }
        }
        let _ = writeln!(out, r#"<path d="{}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>"#, d.trim_end());
        let ly = MARGIN + 14.0 + 14.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{ly}" text-anchor="end" fill="{color}">{}</text>"#,
            W - MARGIN - 6.0,
            escape(&s.label)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-3 || v.abs() >= 1e4) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

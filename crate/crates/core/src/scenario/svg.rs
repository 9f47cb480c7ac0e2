//! Minimal line charts.

use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;
const COLORS: [&str; 3] = ["#1f77b4", "#d62728", "#2ca02c"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// One polyline per series; `None` samples break the line.
pub fn line_chart(title: &str, x_label: &str, xs: &[f64], series: &[Vec<Option<f64>>]) -> String {
    let finite = |v: &&f64| v.is_finite();
    let x_min = xs.iter().filter(finite).copied().fold(f64::INFINITY, f64::min);
    let x_max = xs.iter().filter(finite).copied().fold(f64::NEG_INFINITY, f64::max);
    let ys = series.iter().flatten().flatten().filter(finite);
    let (mut y_min, mut y_max) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &y| {
        (lo.min(y), hi.max(y))
    });
    if !y_min.is_finite() {
        (y_min, y_max) = (0.0, 1.0);
    }
    if y_max - y_min < 1e-12 {
        y_min -= 0.5;
        y_max += 0.5;
    }
    let x_span = if x_max > x_min { x_max - x_min } else { 1.0 };
    let sx = |x: f64| MARGIN + (x - x_min) / x_span * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y_min) / (y_max - y_min) * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="30" text-anchor="middle" font-size="16">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="12">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 15.0,
        escape(x_label)
    );
    for (x, anchor, label) in [(MARGIN, "start", x_min), (WIDTH - MARGIN, "end", x_max)] {
        let _ = writeln!(
            out,
            r#"<text x="{x}" y="{}" text-anchor="{anchor}" font-size="10">{label:.3}</text>"#,
            HEIGHT - MARGIN + 14.0
        );
    }
    for (y, label) in [(HEIGHT - MARGIN, y_min), (MARGIN + 10.0, y_max)] {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{y}" text-anchor="end" font-size="10">{label:.3}</text>"#,
            MARGIN - 4.0
        );
    }
    for (s, ys) in series.iter().enumerate() {
        let color = COLORS[s % COLORS.len()];
        let mut segment: Vec<String> = Vec::new();
        let flush = |segment: &mut Vec<String>, out: &mut String| {
            if segment.len() > 1 {
                let _ = writeln!(
                    out,
                    r#"<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{}"/>"#,
                    segment.join(" ")
                );
            }
            segment.clear();
        };
        for (x, y) in xs.iter().zip(ys) {
            match y {
                Some(y) if y.is_finite() && x.is_finite() => {
                    segment.push(format!("{:.2},{:.2}", sx(*x), sy(*y)));
                }
                _ => flush(&mut segment, &mut out),
            }
        }
        flush(&mut segment, &mut out);
    }
    out.push_str("</svg>\n");
    out
}

//! Static density-versus-coverage plots.

use std::fmt::Write;

const W: f64 = 480.0;
const H: f64 = 360.0;
const M: f64 = 48.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn px(x: f64) -> f64 {
    M + x.clamp(0.0, 1.0) * (W - 2.0 * M)
}

fn py(y: f64) -> f64 {
    H - M - y.clamp(0.0, 1.0) * (H - 2.0 * M)
}

/// One polyline per named series of `(coverage, density)` points, on unit axes.
pub fn density_coverage(series: &[(String, Vec<(f64, f64)>)]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<path d="M{x0} {y1} L{x0} {y0} L{x1} {y0}" fill="none" stroke="black"/>"#,
        x0 = px(0.0),
        x1 = px(1.0),
        y0 = py(0.0),
        y1 = py(1.0)
    );
    for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let _ = writeln!(
            s,
            r#"<line x1="{x}" y1="{y}" x2="{x}" y2="{y2}" stroke="black"/><text x="{x}" y="{ty}" font-size="11" text-anchor="middle">{t}</text>"#,
            x = px(t),
            y = py(0.0),
            y2 = py(0.0) + 4.0,
            ty = py(0.0) + 16.0
        );
        let _ = writeln!(
            s,
            r#"<line x1="{x}" y1="{y}" x2="{x2}" y2="{y}" stroke="black"/><text x="{tx}" y="{ty}" font-size="11" text-anchor="end">{t}</text>"#,
            x = px(0.0),
            x2 = px(0.0) - 4.0,
            y = py(t),
            tx = px(0.0) - 6.0,
            ty = py(t) + 4.0
        );
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">coverage</text>"#, W / 2.0, H - 8.0);
    let _ = writeln!(
        s,
        r#"<text x="14" y="{y}" font-size="12" text-anchor="middle" transform="rotate(-90 14 {y})">density</text>"#,
        y = H / 2.0
    );
    for (k, (name, pts)) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let coords: Vec<String> =
            pts.iter().filter(|p| p.0.is_finite() && p.1.is_finite()).map(|p| format!("{:.2},{:.2}", px(p.0), py(p.1))).collect();
        let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#, coords.join(" "));
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="11" fill="{color}">{}</text>"#,
            W - M - 60.0,
            M + 14.0 * k as f64,
            escape(name)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

//! Minimal self-contained SVG 1.1 log-log plots.

use std::fmt::Write;

const WIDTH: f64 = 480.0;
const HEIGHT: f64 = 360.0;
const MARGIN: f64 = 60.0;

/// Scatter of positive `points` on log-log axes, with an optional curve
/// sampled from `curve` over the same `x` range.
pub fn loglog(title: &str, x_label: &str, y_label: &str, points: &[(f64, f64)], curve: Option<&dyn Fn(f64) -> f64>) -> String {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.0 > 0.0 && p.1 > 0.0 && p.0.is_finite() && p.1.is_finite())
        .map(|p| (p.0.log10(), p.1.log10()))
        .collect();
    let mut line = Vec::new();
    if let (Some(f), false) = (curve, pts.is_empty()) {
        let (a, b) = range(pts.iter().map(|p| p.0));
        for i in 0..=48 {
            let lx = a + (b - a) * i as f64 / 48.0;
            let y = f(10f64.powf(lx));
            if y > 0.0 && y.is_finite() {
                line.push((lx, y.log10()));
            }
        }
    }
    let (x0, x1) = pad(range(pts.iter().chain(&line).map(|p| p.0)));
    let (y0, y1) = pad(range(pts.iter().chain(&line).map(|p| p.1)));
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#, WIDTH / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    for d in (x0.ceil() as i32)..=(x1.floor() as i32) {
        let x = sx(d as f64);
        let _ = writeln!(s, r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#, HEIGHT - MARGIN, HEIGHT - MARGIN + 5.0);
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="11">1e{d}</text>"#, HEIGHT - MARGIN + 18.0);
    }
    for d in (y0.ceil() as i32)..=(y1.floor() as i32) {
        let y = sy(d as f64);
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{y:.2}" x2="{MARGIN}" y2="{y:.2}" stroke="black"/>"#, MARGIN - 5.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="11">1e{d}</text>"#, MARGIN - 8.0, y + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12">{}</text>"#, WIDTH / 2.0, HEIGHT - 12.0, escape(x_label));
    let _ = writeln!(
        s,
        r#"<text x="16" y="{0}" text-anchor="middle" font-family="sans-serif" font-size="12" transform="rotate(-90 16 {0})">{1}</text>"#,
        HEIGHT / 2.0,
        escape(y_label)
    );
    if line.len() > 1 {
        let path: Vec<String> = line.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="1.5"/>"#, path.join(" "));
    }
    for &(x, y) in &pts {
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="firebrick"/>"#, sx(x), sy(y));
    }
    s.push_str("</svg>\n");
    s
}

fn range(v: impl Iterator<Item = f64>) -> (f64, f64) {
    v.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)))
}

fn pad((a, b): (f64, f64)) -> (f64, f64) {
    if !a.is_finite() || !b.is_finite() {
        return (0.0, 1.0);
    }
    let w = (b - a).max(0.1);
    (a - 0.05 * w, b + 0.05 * w)
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plot_is_well_formed() {
        let pts = [(0.05, 0.0127), (0.1, 0.051), (0.2, 0.2)];
        let f = |e: f64| 5.0 * e * e;
        let s = loglog("gap <fit>", "eps", "gap", &pts, Some(&f));
        assert!(s.starts_with("<?xml"));
        assert!(s.trim_end().ends_with("</svg>"));
        assert_eq!(s.matches("<circle").count(), 3);
        assert_eq!(s.matches("<polyline").count(), 1);
        assert!(s.contains("gap &lt;fit&gt;"));
        assert_eq!(s, loglog("gap <fit>", "eps", "gap", &pts, Some(&f)));
    }

    #[test]
    fn nonpositive_points_are_dropped() {
        let s = loglog("t", "x", "y", &[(0.1, -1.0), (0.0, 1.0), (0.2, 1.0)], None);
        assert_eq!(s.matches("<circle").count(), 1);
    }
}

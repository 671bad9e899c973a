//! Static SVG line plots, one per compartment.
//!
//! Each figure is 600x400 with linear axes. Controlled trajectories are
//! drawn solid, uncontrolled ones dotted, one color per fractional order,
//! with a legend naming the two line styles.

use std::fmt::Write as _;

const WIDTH: f64 = 600.0;
const HEIGHT: f64 = 400.0;
const MARGIN_LEFT: f64 = 62.0;
const MARGIN_RIGHT: f64 = 16.0;
const MARGIN_TOP: f64 = 28.0;
const MARGIN_BOTTOM: f64 = 46.0;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

/// One curve: node times against one compartment's values.
pub(crate) struct Series {
    /// Entry drawn next to the curve color, e.g. `alpha = 0.75`.
    pub label: String,
    /// Palette index; series sharing an order share a color.
    pub color_index: usize,
    /// Dotted stroke (used for uncontrolled runs).
    pub dotted: bool,
    /// `(t, value)` pairs.
    pub points: Vec<(f64, f64)>,
}

fn fmt_coord(v: f64) -> String {
    let s = format!("{v:.2}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let magnitude = v.abs();
    let s = if magnitude >= 1000.0 {
        format!("{v:.0}")
    } else if magnitude >= 1.0 {
        format!("{v:.1}")
    } else {
        format!("{v:.3}")
    };
    let trimmed = s.trim_end_matches('0').trim_end_matches('.');
    trimmed.to_string()
}

fn nice_ticks(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..=count)
        .map(|i| lo + (hi - lo) * i as f64 / count as f64)
        .collect()
}

/// Renders one compartment figure. Returns the SVG document text.
pub(crate) fn render_figure(title: &str, y_label: &str, series: &[Series]) -> String {
    let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for s in series {
        for &(x, y) in &s.points {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    if !x_min.is_finite() || x_max <= x_min {
        x_min = 0.0;
        x_max = 1.0;
    }
    if !y_min.is_finite() {
        y_min = 0.0;
        y_max = 1.0;
    }
    let pad = ((y_max - y_min) * 0.05).max(1e-12);
    let (y_lo, y_hi) = (y_min - pad, y_max + pad);

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = |y: f64| MARGIN_TOP + (y_hi - y) / (y_hi - y_lo) * plot_h;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="18" font-family="sans-serif" font-size="14" text-anchor="middle">{title}</text>"#,
        MARGIN_LEFT + plot_w / 2.0
    );

    // Axes with ticks and grid lines.
    for t in nice_ticks(x_min, x_max, 5) {
        let px = sx(t);
        let _ = writeln!(
            out,
            r##"<line x1="{x}" y1="{y1}" x2="{x}" y2="{y2}" stroke="#ddd" stroke-width="1"/>"##,
            x = fmt_coord(px),
            y1 = fmt_coord(MARGIN_TOP),
            y2 = fmt_coord(MARGIN_TOP + plot_h),
        );
        let _ = writeln!(
            out,
            r#"<text x="{x}" y="{y}" font-family="sans-serif" font-size="11" text-anchor="middle">{v}</text>"#,
            x = fmt_coord(px),
            y = fmt_coord(MARGIN_TOP + plot_h + 16.0),
            v = fmt_tick(t),
        );
    }
    for t in nice_ticks(y_lo, y_hi, 5) {
        let py = sy(t);
        let _ = writeln!(
            out,
            r##"<line x1="{x1}" y1="{y}" x2="{x2}" y2="{y}" stroke="#ddd" stroke-width="1"/>"##,
            x1 = fmt_coord(MARGIN_LEFT),
            x2 = fmt_coord(MARGIN_LEFT + plot_w),
            y = fmt_coord(py),
        );
        let _ = writeln!(
            out,
            r#"<text x="{x}" y="{y}" font-family="sans-serif" font-size="11" text-anchor="end">{v}</text>"#,
            x = fmt_coord(MARGIN_LEFT - 6.0),
            y = fmt_coord(py + 4.0),
            v = fmt_tick(t),
        );
    }
    let _ = writeln!(
        out,
        r##"<rect x="{x}" y="{y}" width="{w}" height="{h}" fill="none" stroke="#333" stroke-width="1"/>"##,
        x = fmt_coord(MARGIN_LEFT),
        y = fmt_coord(MARGIN_TOP),
        w = fmt_coord(plot_w),
        h = fmt_coord(plot_h),
    );
    let _ = writeln!(
        out,
        r#"<text x="{x}" y="{y}" font-family="sans-serif" font-size="12" text-anchor="middle">t</text>"#,
        x = fmt_coord(MARGIN_LEFT + plot_w / 2.0),
        y = fmt_coord(HEIGHT - 10.0),
    );
    let _ = writeln!(
        out,
        r#"<text x="14" y="{y}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 14 {y})">{y_label}</text>"#,
        y = fmt_coord(MARGIN_TOP + plot_h / 2.0),
    );

    for s in series {
        let color = PALETTE[s.color_index % PALETTE.len()];
        let dash = if s.dotted { r#" stroke-dasharray="2,4""# } else { "" };
        let mut points = String::with_capacity(s.points.len() * 12);
        for &(x, y) in &s.points {
            let _ = write!(points, "{},{} ", fmt_coord(sx(x)), fmt_coord(sy(y)));
        }
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{}"/>"#,
            points.trim_end(),
        );
    }

    // Legend: line styles, then one color swatch per distinct label.
    let legend_x = MARGIN_LEFT + plot_w - 150.0;
    let mut legend_y = MARGIN_TOP + 14.0;
    let mut styles: Vec<(&str, bool)> = Vec::new();
    if series.iter().any(|s| !s.dotted) {
        styles.push(("with control", false));
    }
    if series.iter().any(|s| s.dotted) {
        styles.push(("without control", true));
    }
    for (label, dotted) in styles {
        let dash = if dotted { r#" stroke-dasharray="2,4""# } else { "" };
        let _ = writeln!(
            out,
            r##"<line x1="{x1}" y1="{y}" x2="{x2}" y2="{y}" stroke="#333" stroke-width="1.5"{dash}/>"##,
            x1 = fmt_coord(legend_x),
            x2 = fmt_coord(legend_x + 28.0),
            y = fmt_coord(legend_y - 4.0),
        );
        let _ = writeln!(
            out,
            r#"<text x="{x}" y="{y}" font-family="sans-serif" font-size="11">{label}</text>"#,
            x = fmt_coord(legend_x + 34.0),
            y = fmt_coord(legend_y),
        );
        legend_y += 16.0;
    }
    let mut seen: Vec<&str> = Vec::new();
    for s in series {
        if seen.contains(&s.label.as_str()) {
            continue;
        }
        seen.push(&s.label);
        let color = PALETTE[s.color_index % PALETTE.len()];
        let _ = writeln!(
            out,
            r#"<rect x="{x}" y="{y}" width="10" height="10" fill="{color}"/>"#,
            x = fmt_coord(legend_x),
            y = fmt_coord(legend_y - 10.0),
        );
        let _ = writeln!(
            out,
            r#"<text x="{x}" y="{y}" font-family="sans-serif" font-size="11">{label}</text>"#,
            x = fmt_coord(legend_x + 16.0),
            y = fmt_coord(legend_y),
            label = s.label,
        );
        legend_y += 16.0;
    }

    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<Series> {
        vec![
            Series {
                label: "alpha = 0.75".into(),
                color_index: 0,
                dotted: false,
                points: vec![(0.0, 1.0), (0.5, 2.0), (1.0, 1.5)],
            },
            Series {
                label: "alpha = 0.75".into(),
                color_index: 0,
                dotted: true,
                points: vec![(0.0, 1.0), (0.5, 3.0), (1.0, 2.5)],
            },
        ]
    }

    #[test]
    fn figure_is_wellformed_and_styled() {
        let svg = render_figure("I", "I(t)", &sample());
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("stroke-dasharray"));
        assert!(svg.contains("with control"));
        assert!(svg.contains("without control"));
        // One legend swatch: both series share the label.
        assert_eq!(svg.matches("alpha = 0.75").count(), 1);
        assert!(svg.contains(r#"width="600" height="400""#));
    }

    #[test]
    fn degenerate_ranges_do_not_produce_nan_coordinates() {
        let flat = vec![Series {
            label: "alpha = 1".into(),
            color_index: 1,
            dotted: false,
            points: vec![(0.0, 5.0), (1.0, 5.0)],
        }];
        let svg = render_figure("S", "S(t)", &flat);
        assert!(!svg.contains("NaN"));
        assert!(!svg.contains("inf"));
    }
}

//! Minimal SVG polyline plot with an enforced equal aspect ratio, so
//! circular orbits render as circles.

/// Render an `(x, y)` polyline. One uniform scale maps both axes; the
/// viewport adapts to the data's aspect ratio.
pub fn polyline_svg(points: &[(f64, f64)], title: &str) -> String {
    let (mut min_x, mut max_x) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut min_y, mut max_y) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in points {
        min_x = min_x.min(x);
        max_x = max_x.max(x);
        min_y = min_y.min(y);
        max_y = max_y.max(y);
    }
    if points.is_empty() || !min_x.is_finite() {
        min_x = 0.0;
        max_x = 1.0;
        min_y = 0.0;
        max_y = 1.0;
    }
    let span_x = (max_x - min_x).max(1e-12);
    let span_y = (max_y - min_y).max(1e-12);
    let span = span_x.max(span_y);
    let pad = 0.05 * span;
    let scale = 760.0 / (span + 2.0 * pad);
    let width = (span_x + 2.0 * pad) * scale + 40.0;
    let height = (span_y + 2.0 * pad) * scale + 40.0;

    let map = |x: f64, y: f64| -> (f64, f64) {
        (
            20.0 + (x - min_x + pad) * scale,
            20.0 + (max_y - y + pad) * scale,
        )
    };

    let mut path = String::new();
    for &(x, y) in points {
        let (px, py) = map(x, y);
        path.push_str(&format!("{px:.4},{py:.4} "));
    }

    let stroke = 1.5;
    format!(
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.1}\" height=\"{h:.1}\" ",
            "viewBox=\"0 0 {w:.1} {h:.1}\">\n",
            "<title>{title}</title>\n",
            "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
            "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"{stroke}\" points=\"{path}\"/>\n",
            "</svg>\n"
        ),
        w = width,
        h = height,
        title = title,
        stroke = stroke,
        path = path.trim_end(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aspect_ratio_matches_data() {
        // A 2:1 box must produce a ~2:1 viewport (minus fixed margins).
        let pts = vec![(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (0.0, 1.0)];
        let svg = polyline_svg(&pts, "box");
        let width: f64 = extract_attr(&svg, "width");
        let height: f64 = extract_attr(&svg, "height");
        let data_ratio = (2.0 + 2.0 * 0.1) / (1.0 + 2.0 * 0.1);
        let svg_ratio = (width - 40.0) / (height - 40.0);
        // Attributes are rounded to 0.1 px.
        assert!((svg_ratio - data_ratio).abs() < 1e-3, "{svg_ratio} vs {data_ratio}");
    }

    #[test]
    fn deterministic_output() {
        let pts: Vec<(f64, f64)> = (0..100)
            .map(|i| {
                let t = i as f64 * 0.1;
                (t.cos(), t.sin())
            })
            .collect();
        assert_eq!(polyline_svg(&pts, "a"), polyline_svg(&pts, "a"));
    }

    fn extract_attr(svg: &str, name: &str) -> f64 {
        let tag = format!("{name}=\"");
        let start = svg.find(&tag).unwrap() + tag.len();
        let end = svg[start..].find('"').unwrap() + start;
        svg[start..end].parse().unwrap()
    }
}

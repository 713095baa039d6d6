use std::fmt::Write;

use super::explore::Histogram;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 320.0;
const MARGIN: f64 = 40.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Minimal standalone SVG bar chart of a histogram.
pub fn histogram_svg(hist: &Histogram, caption: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="20" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(caption)
    );
    let max_len = hist.0.keys().next_back().copied().unwrap_or(0);
    let max_count = hist.0.values().copied().max().unwrap_or(0);
    if max_count > 0 {
        let plot_w = WIDTH - 2.0 * MARGIN;
        let plot_h = HEIGHT - 2.0 * MARGIN;
        let bar_w = plot_w / (max_len + 1) as f64;
        for (len, count) in &hist.0 {
            let h = plot_h * *count as f64 / max_count as f64;
            let _ = writeln!(
                out,
                r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#4477aa"><title>{len}: {count}</title></rect>"##,
                MARGIN + *len as f64 * bar_w,
                HEIGHT - MARGIN - h,
                bar_w.max(1.0),
                h
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{MARGIN}" y="{}" font-family="sans-serif" font-size="11">0</text><text x="{}" y="{}" text-anchor="end" font-family="sans-serif" font-size="11">{max_len}</text>"#,
            HEIGHT - MARGIN / 2.0,
            WIDTH - MARGIN,
            HEIGHT - MARGIN / 2.0,
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_bar_per_bin() {
        let h = Histogram::from_values([1, 1, 3]);
        let svg = histogram_svg(&h, "a < b");
        assert_eq!(svg.matches("<rect").count(), 2);
        assert!(svg.contains("a &lt; b"));
        assert!(histogram_svg(&Histogram::default(), "x").ends_with("</svg>\n"));
    }
}

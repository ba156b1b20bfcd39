//! Static SVG line plots over `k ∈ [0, 1)`: estimated curves, exact overlays
//! and Bragg peak markers.

use std::fmt::Write as _;

pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    pub color: &'static str,
    pub dashed: bool,
}

/// A point mass drawn as a stem from 0 to `height`.
pub struct Marker {
    pub x: f64,
    pub height: f64,
    pub label: String,
}

pub struct LinePlot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    pub markers: Vec<Marker>,
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const MARGIN_L: f64 = 64.0;
const MARGIN_R: f64 = 24.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 52.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

impl LinePlot {
    fn y_range(&self) -> (f64, f64) {
        let ys = self
            .series
            .iter()
            .flat_map(|s| s.points.iter().map(|p| p.1))
            .chain(self.markers.iter().map(|m| m.height))
            .filter(|y| y.is_finite());
        let (lo, hi) = ys.fold((0.0f64, 0.0f64), |(lo, hi), y| (lo.min(y), hi.max(y)));
        let hi = if hi - lo < 1e-12 { lo + 1.0 } else { hi };
        (lo, hi + 0.05 * (hi - lo))
    }

    pub fn render(&self) -> String {
        let (y_lo, y_hi) = self.y_range();
        let pw = WIDTH - MARGIN_L - MARGIN_R;
        let ph = HEIGHT - MARGIN_T - MARGIN_B;
        let sx = |x: f64| MARGIN_L + x * pw;
        let sy = |y: f64| MARGIN_T + (y_hi - y) / (y_hi - y_lo) * ph;

        let mut out = String::new();
        writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        )
        .unwrap();
        writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
        writeln!(
            out,
            r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        )
        .unwrap();

        // axes and ticks
        writeln!(
            out,
            r#"<path d="M{:.1},{:.1} V{:.1} H{:.1}" stroke="black" fill="none"/>"#,
            sx(0.0),
            MARGIN_T,
            MARGIN_T + ph,
            sx(1.0)
        )
        .unwrap();
        for i in 0..=4 {
            let x = i as f64 / 4.0;
            writeln!(
                out,
                r#"<line x1="{0:.1}" y1="{1:.1}" x2="{0:.1}" y2="{2:.1}" stroke="black"/><text x="{0:.1}" y="{3:.1}" text-anchor="middle">{4}</text>"#,
                sx(x),
                MARGIN_T + ph,
                MARGIN_T + ph + 5.0,
                MARGIN_T + ph + 19.0,
                x
            )
            .unwrap();
        }
        for i in 0..=4 {
            let y = y_lo + (y_hi - y_lo) * i as f64 / 4.0;
            writeln!(
                out,
                r#"<line x1="{0:.1}" y1="{1:.1}" x2="{2:.1}" y2="{1:.1}" stroke="black"/><text x="{3:.1}" y="{4:.1}" text-anchor="end">{5:.3}</text>"#,
                MARGIN_L - 5.0,
                sy(y),
                MARGIN_L,
                MARGIN_L - 8.0,
                sy(y) + 4.0,
                y
            )
            .unwrap();
        }
        writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            MARGIN_L + pw / 2.0,
            HEIGHT - 12.0,
            escape(&self.x_label)
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
            MARGIN_T + ph / 2.0,
            MARGIN_T + ph / 2.0,
            escape(&self.y_label)
        )
        .unwrap();

        for s in &self.series {
            let pts: Vec<String> = s
                .points
                .iter()
                .filter(|p| p.1.is_finite())
                .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            let dash = if s.dashed {
                r#" stroke-dasharray="6 4""#
            } else {
                ""
            };
            writeln!(
                out,
                r#"<polyline fill="none" stroke="{}" stroke-width="1.5"{dash} points="{}"><title>{}</title></polyline>"#,
                s.color,
                pts.join(" "),
                escape(&s.name)
            )
            .unwrap();
        }
        for m in &self.markers {
            writeln!(
                out,
                r#"<g class="peak"><line x1="{0:.2}" y1="{1:.2}" x2="{0:.2}" y2="{2:.2}" stroke="crimson" stroke-width="2"/><circle cx="{0:.2}" cy="{2:.2}" r="4" fill="crimson"/><text x="{0:.2}" y="{3:.2}" text-anchor="middle" fill="crimson">{4}</text></g>"#,
                sx(m.x),
                sy(0.0),
                sy(m.height),
                sy(m.height) - 8.0,
                escape(&m.label)
            )
            .unwrap();
        }

        // legend
        for (i, s) in self.series.iter().enumerate() {
            let y = MARGIN_T + 14.0 + 16.0 * i as f64;
            let x = WIDTH - MARGIN_R - 200.0;
            writeln!(
                out,
                r#"<line x1="{x:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="{}" stroke-width="2"/><text x="{:.1}" y="{:.1}">{}</text>"#,
                x + 20.0,
                s.color,
                x + 26.0,
                y + 4.0,
                escape(&s.name)
            )
            .unwrap();
        }
        out.push_str("</svg>\n");
        out
    }
}

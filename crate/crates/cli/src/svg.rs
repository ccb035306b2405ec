//! Plain-text SVG emission. Output depends only on the inputs.

use std::fmt::Write;

use hypzero::potential::{LevelCurve, Rect, RegionGrid};
use num_complex::Complex64;

const WIDTH: f64 = 800.0;

const REGION_FILL: [&str; 8] = [
    "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5",
];
const CURVE_STROKE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

pub struct Figure<'a> {
    pub bbox: Rect,
    pub grid: Option<&'a RegionGrid>,
    pub curves: &'a [LevelCurve],
    pub roots: &'a [Complex64],
    pub branch_points: &'a [Complex64],
}

impl Figure<'_> {
    fn height(&self) -> f64 {
        (WIDTH * self.bbox.height() / self.bbox.width()).round()
    }

    fn px(&self, z: Complex64) -> (f64, f64) {
        let b = &self.bbox;
        (
            (z.re - b.x0) / b.width() * WIDTH,
            (b.y1 - z.im) / b.height() * self.height(),
        )
    }

    pub fn render(&self) -> String {
        let h = self.height();
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{h}" viewBox="0 0 {WIDTH} {h}">"#
        );
        let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
        if let Some(g) = self.grid {
            self.regions(&mut s, g);
        }
        self.axes(&mut s);
        self.level_curves(&mut s);
        self.zeros(&mut s);
        self.markers(&mut s);
        s.push_str("</svg>\n");
        s
    }

    /// One rectangle per horizontal run of equal labels.
    fn regions(&self, s: &mut String, g: &RegionGrid) {
        let _ = writeln!(s, r#"<g id="regions" fill-opacity="0.45" stroke="none">"#);
        let r = g.resolution;
        for row in 0..r {
            let mut col = 0;
            while col < r {
                let label = g.labels[row * r + col];
                let start = col;
                while col < r && g.labels[row * r + col] == label {
                    col += 1;
                }
                if label == 0 {
                    continue;
                }
                let lo = Complex64::new(
                    g.bbox.x0 + start as f64 * g.dx(),
                    g.bbox.y0 + (row + 1) as f64 * g.dy(),
                );
                let hi = Complex64::new(g.bbox.x0 + col as f64 * g.dx(), g.bbox.y0 + row as f64 * g.dy());
                let (x0, y0) = self.px(lo);
                let (x1, y1) = self.px(hi);
                let _ = writeln!(
                    s,
                    r#"<rect x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                    x1 - x0,
                    y1 - y0,
                    REGION_FILL[(label as usize - 1) % REGION_FILL.len()]
                );
            }
        }
        s.push_str("</g>\n");
    }

    fn axes(&self, s: &mut String) {
        let _ = writeln!(s, r##"<g id="axes" stroke="#bbbbbb" stroke-width="0.5">"##);
        let b = &self.bbox;
        if b.y0 < 0.0 && b.y1 > 0.0 {
            let (x0, y) = self.px(Complex64::new(b.x0, 0.0));
            let (x1, _) = self.px(Complex64::new(b.x1, 0.0));
            let _ = writeln!(s, r#"<line x1="{x0:.2}" y1="{y:.2}" x2="{x1:.2}" y2="{y:.2}"/>"#);
        }
        if b.x0 < 0.0 && b.x1 > 0.0 {
            let (x, y0) = self.px(Complex64::new(0.0, b.y0));
            let (_, y1) = self.px(Complex64::new(0.0, b.y1));
            let _ = writeln!(s, r#"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{y1:.2}"/>"#);
        }
        s.push_str("</g>\n");
    }

    fn level_curves(&self, s: &mut String) {
        let _ = writeln!(s, r#"<g id="curves" fill="none" stroke-width="1.2">"#);
        for c in self.curves {
            let color = CURVE_STROKE[(c.pair.0 * 7 + c.pair.1) % CURVE_STROKE.len()];
            let mut pts = String::new();
            for &z in &c.points {
                let (x, y) = self.px(z);
                let _ = write!(pts, "{x:.2},{y:.2} ");
            }
            let tag = if c.closed { "polygon" } else { "polyline" };
            let _ = writeln!(s, r#"<{tag} stroke="{color}" points="{}"/>"#, pts.trim_end());
        }
        s.push_str("</g>\n");
    }

    fn zeros(&self, s: &mut String) {
        let _ = writeln!(s, r##"<g id="zeros" fill="#000000">"##);
        for &z in self.roots {
            let (x, y) = self.px(z);
            let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2"/>"#);
        }
        s.push_str("</g>\n");
    }

    fn markers(&self, s: &mut String) {
        let _ = writeln!(
            s,
            r##"<g id="branch-points" fill="#ffffff" stroke="#d62728" stroke-width="2">"##
        );
        for &z in self.branch_points {
            let (x, y) = self.px(z);
            let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="5"/>"#);
        }
        s.push_str("</g>\n");
        let _ = writeln!(s, r##"<g id="singular" stroke="#000000" stroke-width="1.5">"##);
        for z in [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)] {
            let (x, y) = self.px(z);
            let _ = writeln!(
                s,
                r#"<path d="M{:.2},{:.2}L{:.2},{:.2}M{:.2},{:.2}L{:.2},{:.2}"/>"#,
                x - 5.0,
                y - 5.0,
                x + 5.0,
                y + 5.0,
                x - 5.0,
                y + 5.0,
                x + 5.0,
                y - 5.0
            );
        }
        s.push_str("</g>\n");
    }
}

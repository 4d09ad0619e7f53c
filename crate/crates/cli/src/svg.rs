//! SVG figures of the fundamental strip and of prescribed-hole arcs.
//!
//! Both axes share one scale so circles stay circles. The root element
//! carries `data-domain="x0 x1 y0 y1"` and `data-margin` so a reader can map
//! plot coordinates back to the plane.

use std::fmt::Write;

const HEIGHT: f64 = 640.0;
const MARGIN: f64 = 40.0;

const STRIP_FILL: &str = "#e8eef4";
const SEMI_STABLE_FILL: &str = "#f6d98b";
const WR_STROKE: &str = "#c0392b";
const ARC_STROKE: &str = "#1e8449";
const POINT_FILL: &str = "#1f4e79";

pub struct Viewport {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    scale: f64,
    width: f64,
}

impl Viewport {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        let scale = (HEIGHT - 2.0 * MARGIN) / (y1 - y0);
        Viewport {
            x0,
            x1,
            y0,
            y1,
            scale,
            width: 2.0 * MARGIN + scale * (x1 - x0),
        }
    }

    pub fn px(&self, x: f64, y: f64) -> (f64, f64) {
        (
            MARGIN + (x - self.x0) * self.scale,
            HEIGHT - MARGIN - (y - self.y0) * self.scale,
        )
    }

    fn len(&self, r: f64) -> f64 {
        r * self.scale
    }
}

struct Doc {
    vp: Viewport,
    body: String,
}

impl Doc {
    fn new(vp: Viewport, title: &str) -> Self {
        let mut body = String::new();
        writeln!(body, "<title>{title}</title>").unwrap();
        Doc { vp, body }
    }

    fn p(&self, x: f64, y: f64) -> String {
        let (u, v) = self.vp.px(x, y);
        format!("{u:.3} {v:.3}")
    }

    fn el(&mut self, s: String) {
        self.body.push_str(&s);
        self.body.push('\n');
    }

    fn axes(&mut self) {
        let (x0, x1, y0, y1) = (self.vp.x0, self.vp.x1, self.vp.y0, self.vp.y1);
        let s = format!(
            r##"<path id="axes" d="M {} L {} M {} L {}" stroke="#555" stroke-width="1" fill="none"/>"##,
            self.p(x0, 0.0f64.max(y0)),
            self.p(x1, 0.0f64.max(y0)),
            self.p(0.0, y0),
            self.p(0.0, y1)
        );
        self.el(s);
        for (x, label) in [(0.0, "0"), (0.5, "1/2")] {
            let (u, v) = self.vp.px(x, y0);
            self.el(format!(
                r#"<text x="{u:.3}" y="{:.3}" font-size="12" text-anchor="middle">{label}</text>"#,
                v + 16.0
            ));
        }
    }

    /// Path along the circle of radius `r` centred at `c` between two of its points.
    fn arc(&self, from: (f64, f64), to: (f64, f64), r: f64, sweep: u8) -> String {
        let rr = self.vp.len(r);
        format!(
            "M {} A {rr:.3} {rr:.3} 0 0 {sweep} {}",
            self.p(from.0, from.1),
            self.p(to.0, to.1)
        )
    }

    fn point(&mut self, id: &str, x: f64, y: f64, label: &str) {
        let (u, v) = self.vp.px(x, y);
        self.el(format!(
            r#"<circle id="{id}" cx="{u:.3}" cy="{v:.3}" r="3.5" fill="{POINT_FILL}"><title>{label}</title></circle>"#
        ));
    }

    fn finish(self) -> String {
        let (x0, x1, y0, y1) = (self.vp.x0, self.vp.x1, self.vp.y0, self.vp.y1);
        format!(
            concat!(
                r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.3} {h:.3}" "#,
                r#"data-domain="{x0} {x1} {y0} {y1}" data-margin="{m}">"#,
                "\n{body}</svg>\n"
            ),
            w = self.vp.width,
            h = HEIGHT,
            m = MARGIN,
            x0 = x0,
            x1 = x1,
            y0 = y0,
            y1 = y1,
            body = self.body,
        )
    }
}

fn strip_and_arc(doc: &mut Doc, top: f64) {
    let h = 3f64.sqrt() / 2.0;
    let strip = format!(
        r#"<path id="strip" d="M {} L {} L {} L {} {} Z" fill="{STRIP_FILL}" stroke="none"/>"#,
        doc.p(0.0, 1.0),
        doc.p(0.0, top),
        doc.p(0.5, top),
        doc.p(0.5, h),
        doc.arc((0.5, h), (0.0, 1.0), 1.0, 0).replacen("M ", "L ", 1)
    );
    doc.el(strip);
    // semi-stable classes: lambda_1 = 1 >= sqrt(det) = sqrt(b)
    let band = format!(
        r#"<path id="semi-stable" d="M {} L {} L {} {} Z" fill="{SEMI_STABLE_FILL}" fill-opacity="0.8" stroke="none"/>"#,
        doc.p(0.0, 1.0),
        doc.p(0.5, 1.0),
        doc.p(0.5, h),
        doc.arc((0.5, h), (0.0, 1.0), 1.0, 0).replacen("M ", "L ", 1)
    );
    doc.el(band);
    let wr = format!(
        r#"<path id="wr-arc" d="{}" stroke="{WR_STROKE}" stroke-width="3" fill="none"/>"#,
        doc.arc((0.0, 1.0), (0.5, h), 1.0, 1)
    );
    doc.el(wr);
}

/// The fundamental strip with the well-rounded arc and the semi-stable band.
pub fn domain(points: &[(f64, f64, String)]) -> String {
    let top = points
        .iter()
        .map(|p| p.1 * 1.05)
        .fold(2.0f64, f64::max);
    let mut doc = Doc::new(
        Viewport::new(-0.1, 0.6, 0.0, top),
        "Fundamental strip: well-rounded arc and semi-stable band",
    );
    strip_and_arc(&mut doc, top);
    doc.axes();
    for (k, (x, y, label)) in points.iter().enumerate() {
        doc.point(&format!("tau-{k}"), *x, *y, label);
    }
    if points.len() > 1 {
        let d: Vec<String> = points.iter().map(|(x, y, _)| doc.p(*x, *y)).collect();
        doc.el(format!(
            r##"<path id="sequence" d="M {}" stroke="{POINT_FILL}" stroke-width="1" stroke-dasharray="4 3" fill="none"/>"##,
            d.join(" L ")
        ));
    }
    doc.finish()
}

/// The arc of classes with deep hole `1/2 + t i`, sample radii and the minimal-slope line.
pub fn arc(t: f64, samples: &[(f64, f64, String)]) -> String {
    let r = (0.25 + t * t).sqrt();
    let top = t + r;
    let q = 2.0 * t + (4.0 * t * t + 1.0).sqrt();
    let y1 = (top * 1.15).max(2.0);
    let mut doc = Doc::new(
        Viewport::new(-0.1, 0.6, 0.0, y1),
        &format!("Classes with prescribed deep hole 1/2 + {t}i"),
    );
    strip_and_arc(&mut doc, y1);
    doc.axes();
    let path = format!(
        r#"<path id="prescribed-arc" d="{}" stroke="{ARC_STROKE}" stroke-width="3" fill="none"/>"#,
        doc.arc((0.0, 2.0 * t), (0.5, top), r, 1)
    );
    doc.el(path);
    let line = format!(
        r##"<path id="min-slope" d="M {} L {}" stroke="#333" stroke-width="1.5" stroke-dasharray="6 4" fill="none"/>"##,
        doc.p(0.0, 0.0),
        doc.p(0.5, q / 2.0)
    );
    doc.el(line);
    for (k, (x, y, label)) in samples.iter().enumerate() {
        let ray = format!(
            r##"<path id="radius-{k}" d="M {} L {}" stroke="#888" stroke-width="1" fill="none"/>"##,
            doc.p(0.0, 0.0),
            doc.p(*x, *y)
        );
        doc.el(ray);
        doc.point(&format!("sample-{k}"), *x, *y, label);
    }
    doc.point("tau0", 0.5, t, &format!("1/2 + {t}i"));
    doc.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_scales() {
        let vp = Viewport::new(-0.1, 0.6, 0.0, 2.0);
        let (a, b) = vp.px(0.0, 0.0);
        let (c, d) = vp.px(1.0, 1.0);
        assert!(((c - a) - (b - d)).abs() < 1e-9);
    }
}

//! Deterministic SVG output on a fixed 1024 x 1024 canvas.
//!
//! Disk models put the unit disk at the center with radius 500 px. The
//! half-plane view shows `re` in `[-2, 2]` and `im` in `(0, 4]`. All numbers
//! are printed with three decimals so identical input gives identical bytes.

use std::f64::consts::{PI, TAU};
use std::fmt::Write;

use hvd_core::{Model, Primitive, Vec2};

use crate::formats::{EdgeRole, SceneFile};

pub const CANVAS: f64 = 1024.0;
const DISK_SCALE: f64 = 500.0;
const HALFPLANE_SCALE: f64 = 250.0;
const HALFPLANE_MARGIN: f64 = 12.0;
/// Sweeps this close to a full turn are drawn as circles.
const FULL_TURN_TOLERANCE: f64 = 1e-12;

const STYLE: &str = "\
.frame{fill:none;stroke:#444444;stroke-width:1.5}\
.bisector{fill:none;stroke:#1f4e79;stroke-width:1.5}\
.boundary{fill:none;stroke:#c0392b;stroke-width:2.5}\
.delaunay{fill:none;stroke:#7d3c98;stroke-width:1.2}\
.ball{fill:#2e7d32;fill-opacity:0.15;stroke:#2e7d32;stroke-width:1.5}\
.site{fill:#111111}\
.center{fill:#2e7d32}\
.label{font-family:sans-serif;font-size:12px;fill:#111111}";

/// Fixed-precision number; never prints `-0.000`.
fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".to_owned()
    } else {
        s
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

pub struct Canvas {
    model: Model,
    body: String,
}

impl Canvas {
    pub fn new(model: Model) -> Self {
        let mut body = String::new();
        let _ = write!(
            body,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1024\" height=\"1024\" viewBox=\"0 0 1024 1024\">\n<style>{STYLE}</style>\n"
        );
        let mut canvas = Self { model, body };
        match model {
            Model::HalfPlane => {
                canvas.body.push_str(
                    "<defs><clipPath id=\"view\"><rect x=\"12.000\" y=\"12.000\" width=\"1000.000\" height=\"1000.000\"/></clipPath></defs>\n",
                );
                let (a, b) = (
                    canvas.to_px(Vec2::new(-2.0, 0.0)),
                    canvas.to_px(Vec2::new(2.0, 0.0)),
                );
                canvas.line_px("frame", a, b);
                canvas.body.push_str("<g clip-path=\"url(#view)\">\n");
            }
            _ => {
                canvas.body.push_str(
                    "<circle class=\"frame\" cx=\"512.000\" cy=\"512.000\" r=\"500.000\"/>\n<g>\n",
                );
            }
        }
        canvas
    }

    /// Model coordinates to pixels.
    pub fn to_px(&self, p: Vec2) -> Vec2 {
        match self.model {
            Model::HalfPlane => Vec2::new(
                HALFPLANE_MARGIN + HALFPLANE_SCALE * (p.x + 2.0),
                CANVAS - HALFPLANE_MARGIN - HALFPLANE_SCALE * p.y,
            ),
            _ => Vec2::new(
                CANVAS / 2.0 + DISK_SCALE * p.x,
                CANVAS / 2.0 - DISK_SCALE * p.y,
            ),
        }
    }

    fn scale(&self) -> f64 {
        match self.model {
            Model::HalfPlane => HALFPLANE_SCALE,
            _ => DISK_SCALE,
        }
    }

    /// The visible canvas in model coordinates, as `(min, max)`.
    fn view(&self) -> (Vec2, Vec2) {
        let s = self.scale();
        match self.model {
            Model::HalfPlane => (
                Vec2::new(-2.0 - HALFPLANE_MARGIN / s, -HALFPLANE_MARGIN / s),
                Vec2::new(2.0 + HALFPLANE_MARGIN / s, 4.0 + HALFPLANE_MARGIN / s),
            ),
            _ => {
                let h = CANVAS / 2.0 / s;
                (Vec2::new(-h, -h), Vec2::new(h, h))
            }
        }
    }

    fn line_px(&mut self, class: &str, a: Vec2, b: Vec2) {
        let _ = writeln!(
            self.body,
            "<line class=\"{class}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
            num(a.x),
            num(a.y),
            num(b.x),
            num(b.y)
        );
    }

    pub fn primitive(&mut self, p: &Primitive, class: &str) {
        match *p {
            Primitive::Segment { start, end } => {
                let (a, b) = (self.to_px(start), self.to_px(end));
                self.line_px(class, a, b);
            }
            Primitive::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => self.arc(class, center, radius, start_angle, sweep),
            Primitive::Line {
                point,
                direction,
                t_start,
                t_end,
            } => {
                let lo = t_start.unwrap_or(f64::NEG_INFINITY);
                let hi = t_end.unwrap_or(f64::INFINITY);
                if let Some((lo, hi)) = self.clip_line(point, direction, lo, hi) {
                    let a = self.to_px(point + direction * lo);
                    let b = self.to_px(point + direction * hi);
                    self.line_px(class, a, b);
                }
            }
        }
    }

    /// Parameter range of `point + t * direction` inside the view.
    fn clip_line(&self, point: Vec2, direction: Vec2, lo: f64, hi: f64) -> Option<(f64, f64)> {
        let (min, max) = self.view();
        let (mut lo, mut hi) = (lo, hi);
        for (p, d, a, b) in [
            (point.x, direction.x, min.x, max.x),
            (point.y, direction.y, min.y, max.y),
        ] {
            if d == 0.0 {
                if p < a || p > b {
                    return None;
                }
                continue;
            }
            let (t0, t1) = ((a - p) / d, (b - p) / d);
            lo = lo.max(t0.min(t1));
            hi = hi.min(t0.max(t1));
        }
        (lo < hi).then_some((lo, hi))
    }

    fn arc(&mut self, class: &str, center: Vec2, radius: f64, start_angle: f64, sweep: f64) {
        let c = self.to_px(center);
        let r = radius * self.scale();
        if sweep.abs() >= TAU - FULL_TURN_TOLERANCE {
            let _ = writeln!(
                self.body,
                "<circle class=\"{class}\" cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
                num(c.x),
                num(c.y),
                num(r)
            );
            return;
        }
        // counter-clockwise in model space is the negative SVG direction
        let flag = if sweep > 0.0 { 0 } else { 1 };
        let parts = if sweep.abs() > PI { 2 } else { 1 };
        let step = sweep / f64::from(parts);
        let at = |a: f64| self.to_px(center + Vec2::from_angle(a) * radius);
        let start = at(start_angle);
        let mut d = format!("M{},{}", num(start.x), num(start.y));
        for k in 1..=parts {
            let p = at(start_angle + step * f64::from(k));
            let _ = write!(
                d,
                " A{},{} 0 0 {flag} {},{}",
                num(r),
                num(r),
                num(p.x),
                num(p.y)
            );
        }
        let _ = writeln!(self.body, "<path class=\"{class}\" d=\"{d}\"/>");
    }

    /// Closed polygon through model-space points.
    pub fn polygon(&mut self, points: &[Vec2], class: &str) {
        let coords: Vec<String> = points
            .iter()
            .map(|&p| {
                let q = self.to_px(p);
                format!("{},{}", num(q.x), num(q.y))
            })
            .collect();
        let _ = writeln!(
            self.body,
            "<polygon class=\"{class}\" points=\"{}\"/>",
            coords.join(" ")
        );
    }

    pub fn point(&mut self, p: Vec2, class: &str, label: Option<&str>) {
        let q = self.to_px(p);
        let _ = writeln!(
            self.body,
            "<circle class=\"{class}\" cx=\"{}\" cy=\"{}\" r=\"4.000\"/>",
            num(q.x),
            num(q.y)
        );
        if let Some(label) = label {
            let _ = writeln!(
                self.body,
                "<text class=\"label\" x=\"{}\" y=\"{}\">{}</text>",
                num(q.x + 6.0),
                num(q.y - 6.0),
                escape(label)
            );
        }
    }

    pub fn finish(mut self) -> String {
        self.body.push_str("</g>\n</svg>\n");
        self.body
    }
}

fn class_of(role: EdgeRole) -> &'static str {
    match role {
        EdgeRole::Bisector => "bisector",
        EdgeRole::Boundary => "boundary",
        EdgeRole::Delaunay => "delaunay",
    }
}

/// Draws the scene's edges ordered by their site indices, then its sites.
pub fn scene_canvas(scene: &SceneFile) -> Canvas {
    let mut canvas = Canvas::new(scene.model);
    let mut order: Vec<usize> = (0..scene.edges.len()).collect();
    order.sort_by(|&a, &b| {
        scene.edges[a]
            .sites
            .cmp(&scene.edges[b].sites)
            .then(a.cmp(&b))
    });
    for e in order {
        let edge = &scene.edges[e];
        for piece in &edge.pieces {
            canvas.primitive(piece, class_of(edge.role));
        }
    }
    for site in &scene.sites {
        canvas.point(Vec2::new(site.x, site.y), "site", site.label.as_deref());
    }
    canvas
}

pub fn render_scene_svg(scene: &SceneFile) -> String {
    scene_canvas(scene).finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_are_fixed_and_unsigned_at_zero() {
        assert_eq!(num(-0.0001), "0.000");
        assert_eq!(num(1.23456), "1.235");
        assert_eq!(num(-2.5), "-2.500");
    }

    #[test]
    fn labels_are_escaped() {
        assert_eq!(escape("a<b & \"c\""), "a&lt;b &amp; &quot;c&quot;");
    }

    #[test]
    fn pixel_maps() {
        let disk = Canvas::new(Model::Poincare);
        assert_eq!(disk.to_px(Vec2::new(1.0, 1.0)), Vec2::new(1012.0, 12.0));
        let hp = Canvas::new(Model::HalfPlane);
        assert_eq!(hp.to_px(Vec2::new(-2.0, 4.0)), Vec2::new(12.0, 12.0));
        assert_eq!(hp.to_px(Vec2::new(2.0, 0.0)), Vec2::new(1012.0, 1012.0));
    }

    #[test]
    fn ccw_arcs_use_the_negative_sweep_flag() {
        let mut c = Canvas::new(Model::Poincare);
        c.primitive(
            &Primitive::Arc {
                center: Vec2::ZERO,
                radius: 0.5,
                start_angle: 0.0,
                sweep: PI / 2.0,
            },
            "bisector",
        );
        let svg = c.finish();
        assert!(svg.contains("M762.000,512.000 A250.000,250.000 0 0 0 512.000,262.000"));
    }

    #[test]
    fn long_arcs_split_and_full_turns_become_circles() {
        let mut c = Canvas::new(Model::Klein);
        c.primitive(
            &Primitive::Arc {
                center: Vec2::ZERO,
                radius: 1.0,
                start_angle: 0.0,
                sweep: -1.5 * PI,
            },
            "boundary",
        );
        c.primitive(
            &Primitive::Arc {
                center: Vec2::ZERO,
                radius: 1.0,
                start_angle: 0.3,
                sweep: TAU,
            },
            "boundary",
        );
        let svg = c.finish();
        assert_eq!(svg.matches(" A500.000,500.000 0 0 1 ").count(), 2);
        assert!(svg
            .contains("<circle class=\"boundary\" cx=\"512.000\" cy=\"512.000\" r=\"500.000\"/>"));
    }

    #[test]
    fn unbounded_lines_are_clipped_to_the_view() {
        let mut c = Canvas::new(Model::HalfPlane);
        c.primitive(
            &Primitive::Line {
                point: Vec2::new(1.0, 0.0),
                direction: Vec2::new(0.0, 1.0),
                t_start: Some(0.0),
                t_end: None,
            },
            "bisector",
        );
        c.primitive(
            &Primitive::Line {
                point: Vec2::new(10.0, 0.0),
                direction: Vec2::new(0.0, 1.0),
                t_start: None,
                t_end: None,
            },
            "bisector",
        );
        let svg = c.finish();
        assert!(svg.contains(
            "<line class=\"bisector\" x1=\"762.000\" y1=\"1012.000\" x2=\"762.000\" y2=\"0.000\"/>"
        ));
        assert_eq!(svg.matches("class=\"bisector\"").count(), 1);
    }
}

//! Deterministic SVG rendering of spectral regions.

use std::fmt::Write;

use crate::classifier::{Certainty, Component, Shape, SpectralRegion};

/// Rectangle of the complex plane mapped onto a `width × height` canvas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viewport {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub width: u32,
    pub height: u32,
}

pub const DEFAULT_WIDTH: u32 = 800;
pub const DEFAULT_HEIGHT: u32 = 600;

impl Viewport {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Self {
        Viewport {
            re_min,
            re_max,
            im_min,
            im_max,
            width: DEFAULT_WIDTH,
            height: DEFAULT_HEIGHT,
        }
    }

    pub fn is_valid(&self) -> bool {
        [self.re_min, self.re_max, self.im_min, self.im_max]
            .iter()
            .all(|x| x.is_finite())
            && self.re_max > self.re_min
            && self.im_max > self.im_min
            && self.width > 0
            && self.height > 0
    }

    /// A view centred on the origin that shows every finite feature of `region`
    /// with a margin, keeping unit aspect ratio.
    pub fn fit(region: &SpectralRegion) -> Self {
        let mut reach: f64 = 1.0;
        for c in region.components() {
            for x in c.shape.params() {
                if x.is_finite() {
                    reach = reach.max(x.abs());
                }
            }
        }
        let half_w = 1.25 * reach;
        let half_h = half_w * DEFAULT_HEIGHT as f64 / DEFAULT_WIDTH as f64;
        Viewport::new(-half_w, half_w, -half_h, half_h)
    }

    fn x(&self, re: f64) -> f64 {
        (re - self.re_min) / (self.re_max - self.re_min) * self.width as f64
    }

    fn y(&self, im: f64) -> f64 {
        (self.im_max - im) / (self.im_max - self.im_min) * self.height as f64
    }

    /// Pixels per unit along the real axis.
    fn scale_x(&self) -> f64 {
        self.width as f64 / (self.re_max - self.re_min)
    }

    fn scale_y(&self) -> f64 {
        self.height as f64 / (self.im_max - self.im_min)
    }

    fn clip_x(&self, re: f64) -> f64 {
        self.x(re).clamp(0.0, self.width as f64)
    }
}

fn class(c: Certainty) -> &'static str {
    match c {
        Certainty::Certified => "certified",
        Certainty::BoundaryUnresolved => "boundary_unresolved",
        Certainty::UnknownOpenAnnulus => "unknown_question2",
    }
}

fn paint(c: Certainty) -> &'static str {
    match c {
        Certainty::Certified => "fill=\"#3465a4\" fill-opacity=\"0.8\"",
        Certainty::BoundaryUnresolved => "fill=\"#3465a4\" fill-opacity=\"0.4\"",
        Certainty::UnknownOpenAnnulus => "fill=\"url(#hatch)\"",
    }
}

fn stroke(c: Certainty) -> &'static str {
    match c {
        Certainty::Certified => "stroke=\"#3465a4\" stroke-opacity=\"0.8\"",
        Certainty::BoundaryUnresolved => "stroke=\"#3465a4\" stroke-opacity=\"0.4\"",
        Certainty::UnknownOpenAnnulus => "stroke=\"#cc0000\" stroke-dasharray=\"4 3\"",
    }
}

fn circle_path(out: &mut String, cx: f64, cy: f64, rx: f64, ry: f64) {
    let _ = write!(
        out,
        "M {:.3} {:.3} A {rx:.3} {ry:.3} 0 1 0 {:.3} {cy:.3} A {rx:.3} {ry:.3} 0 1 0 {:.3} {cy:.3} Z ",
        cx + rx,
        cy,
        cx - rx,
        cx + rx
    );
}

fn component(out: &mut String, v: &Viewport, c: &Component) {
    let cls = format!("{} {}", c.shape.kind(), class(c.certainty));
    let (w, h) = (v.width as f64, v.height as f64);
    let rect = |out: &mut String, lo: f64, hi: f64, dashed: bool| {
        let (x0, x1) = (v.clip_x(lo), v.clip_x(hi));
        if x1 > x0 {
            let extra = if dashed { " stroke=\"#3465a4\" stroke-dasharray=\"2 2\"" } else { "" };
            let _ = writeln!(
                out,
                "  <rect class=\"{cls}\" x=\"{x0:.3}\" y=\"0.000\" width=\"{:.3}\" height=\"{h:.3}\" {}{extra}/>",
                x1 - x0,
                paint(c.certainty)
            );
        }
    };
    let (cx, cy) = (v.x(0.0), v.y(0.0));
    let (sx, sy) = (v.scale_x(), v.scale_y());
    match c.shape {
        Shape::HalfPlaneLeft { b } => rect(out, f64::NEG_INFINITY, b, false),
        Shape::VStrip { a, b } => rect(out, a, b, false),
        Shape::OpenVStripInterior { a, b } => rect(out, a, b, true),
        Shape::VLine { c: re } => {
            let x = v.x(re);
            if (0.0..=w).contains(&x) {
                let _ = writeln!(
                    out,
                    "  <line class=\"{cls}\" x1=\"{x:.3}\" y1=\"0.000\" x2=\"{x:.3}\" y2=\"{h:.3}\" stroke-width=\"1\" {}/>",
                    stroke(c.certainty)
                );
            }
        }
        Shape::Disk { r } => {
            let mut d = String::new();
            circle_path(&mut d, cx, cy, r * sx, r * sy);
            let _ = writeln!(
                out,
                "  <path class=\"{cls}\" d=\"{}\" {}/>",
                d.trim_end(),
                paint(c.certainty)
            );
        }
        Shape::ClosedAnnulus { r1, r2 } | Shape::OpenAnnulusInterior { r1, r2 } => {
            let mut d = String::new();
            circle_path(&mut d, cx, cy, r2 * sx, r2 * sy);
            circle_path(&mut d, cx, cy, r1 * sx, r1 * sy);
            let _ = writeln!(
                out,
                "  <path class=\"{cls}\" d=\"{}\" fill-rule=\"evenodd\" {}/>",
                d.trim_end(),
                paint(c.certainty)
            );
        }
        Shape::Circle { r } => {
            let mut d = String::new();
            circle_path(&mut d, cx, cy, r * sx, r * sy);
            let _ = writeln!(
                out,
                "  <path class=\"{cls}\" d=\"{}\" fill=\"none\" stroke-width=\"1\" {}/>",
                d.trim_end(),
                stroke(c.certainty)
            );
        }
        Shape::Empty => {}
    }
    let _ = w;
}

/// SVG 1.1 document showing `region` in `viewport`, with coordinate axes.
pub fn render_svg(region: &SpectralRegion, viewport: &Viewport) -> String {
    let v = viewport;
    let (w, h) = (v.width, v.height);
    let mut out = String::new();
    let _ = writeln!(out, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    );
    out.push_str(
        "  <defs>\n    <pattern id=\"hatch\" width=\"8\" height=\"8\" patternUnits=\"userSpaceOnUse\" patternTransform=\"rotate(45)\">\n      <line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"8\" stroke=\"#cc0000\" stroke-width=\"2\"/>\n    </pattern>\n  </defs>\n",
    );
    let _ = writeln!(out, "  <rect x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"#ffffff\"/>");
    for c in region.components() {
        component(&mut out, v, c);
    }
    let (ax, ay) = (v.x(0.0), v.y(0.0));
    if (0.0..=w as f64).contains(&ax) {
        let _ = writeln!(
            out,
            "  <line class=\"axis\" x1=\"{ax:.3}\" y1=\"0.000\" x2=\"{ax:.3}\" y2=\"{h}.000\" stroke=\"#000000\" stroke-width=\"1\"/>"
        );
    }
    if (0.0..=h as f64).contains(&ay) {
        let _ = writeln!(
            out,
            "  <line class=\"axis\" x1=\"0.000\" y1=\"{ay:.3}\" x2=\"{w}.000\" y2=\"{ay:.3}\" stroke=\"#000000\" stroke-width=\"1\"/>"
        );
    }
    out.push_str("</svg>\n");
    out
}

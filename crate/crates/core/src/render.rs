//! Deterministic SVG output for curves, polygons, tangent lines, critical
//! points and billiard orbits.

use std::fmt::Write;

use crate::area::Configuration;
use crate::billiards::{BilliardOrbit, Caustic};
use crate::curves::Curve;
use crate::error::{Error, Result};
use crate::morse::MorseData;
use crate::vec2::Vec2;

/// Samples per displayed curve.
pub const CURVE_SAMPLES: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Color {
    Blue,
    Green,
    Orange,
    Red,
    Purple,
    Black,
    Gray,
}

impl Color {
    pub fn hex(self) -> &'static str {
        match self {
            Color::Blue => "#1f77b4",
            Color::Green => "#2ca02c",
            Color::Orange => "#ff7f0e",
            Color::Red => "#d62728",
            Color::Purple => "#9467bd",
            Color::Black => "#000000",
            Color::Gray => "#7f7f7f",
        }
    }
}

/// 0 blue, 1 green, 2 orange, 3 red, higher purple; degenerate black.
pub fn index_color(morse: &MorseData) -> Color {
    if !morse.is_morse() {
        return Color::Black;
    }
    match morse.index {
        0 => Color::Blue,
        1 => Color::Green,
        2 => Color::Orange,
        3 => Color::Red,
        _ => Color::Purple,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Primitive {
    Path { points: Vec<Vec2>, closed: bool, color: Color },
    Polygon { points: Vec<Vec2>, color: Color },
    Marker { at: Vec2, color: Color },
    Segment { a: Vec2, b: Vec2, color: Color },
    Label { at: Vec2, text: String },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ViewBox {
    pub min: Vec2,
    pub max: Vec2,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Scene {
    pub items: Vec<Primitive>,
}

impl Scene {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, p: Primitive) -> &mut Self {
        self.items.push(p);
        self
    }

    /// Sample a curve over one period, its bounded domain, or `[-4, 4]`.
    pub fn add_curve(&mut self, curve: &Curve, color: Color) -> Result<&mut Self> {
        let (lo, hi) = curve.search_range();
        let closed = curve.is_closed();
        let points = if let Curve::Polyline(p) = curve {
            p.vertices.clone()
        } else if curve.is_point() {
            return Ok(self.push(Primitive::Marker { at: curve.eval(0.0)?, color }));
        } else {
            let n = if closed { CURVE_SAMPLES } else { CURVE_SAMPLES - 1 };
            (0..CURVE_SAMPLES).map(|k| curve.eval(lo + (hi - lo) * k as f64 / n as f64)).collect::<Result<_>>()?
        };
        let closed = closed || matches!(curve, Curve::Polyline(p) if p.closed);
        Ok(self.push(Primitive::Path { points, closed, color }))
    }

    pub fn add_polygon(&mut self, curves: &[Curve], config: &Configuration, color: Color) -> Result<&mut Self> {
        let points = config.points(curves)?;
        for &at in &points {
            self.items.push(Primitive::Marker { at, color });
        }
        Ok(self.push(Primitive::Polygon { points, color }))
    }

    /// Tangent segments at every vertex, half the small diagonal on each side.
    pub fn add_tangent_lines(&mut self, curves: &[Curve], config: &Configuration) -> Result<&mut Self> {
        let pts = config.points(curves)?;
        let diag = Configuration::small_diagonals(&pts);
        for i in 0..config.len() {
            let c = config.curve(curves, i)?;
            if c.is_point() {
                continue;
            }
            let t = c.d1(config.vertices[i].t)?.normalized() * (0.5 * diag[i].norm());
            self.items.push(Primitive::Segment { a: pts[i] - t, b: pts[i] + t, color: Color::Gray });
        }
        Ok(self)
    }

    pub fn add_orbit(&mut self, curve: &Curve, orbit: &BilliardOrbit, color: Color) -> Result<&mut Self> {
        let points = if orbit.exterior.is_empty() {
            orbit.points.iter().map(|&t| curve.eval(t)).collect::<Result<Vec<_>>>()?
        } else {
            orbit.exterior.clone()
        };
        Ok(self.push(Primitive::Path { points, closed: false, color }))
    }

    pub fn add_caustic(&mut self, caustic: &Caustic, color: Color) -> &mut Self {
        for &at in &caustic.samples {
            self.items.push(Primitive::Marker { at, color });
        }
        self
    }

    fn coords(&self) -> impl Iterator<Item = Vec2> + '_ {
        self.items.iter().flat_map(|p| -> Box<dyn Iterator<Item = Vec2> + '_> {
            match p {
                Primitive::Path { points, .. } | Primitive::Polygon { points, .. } => Box::new(points.iter().copied()),
                Primitive::Marker { at, .. } | Primitive::Label { at, .. } => Box::new(std::iter::once(*at)),
                Primitive::Segment { a, b, .. } => Box::new([*a, *b].into_iter()),
            }
        })
    }

    /// Bounding box of all primitives grown by 5% of its extent on each side.
    pub fn viewbox(&self) -> Result<ViewBox> {
        let mut min = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut max = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in self.coords() {
            if !p.is_finite() {
                return Err(Error::InvalidInput("non-finite coordinate in scene".into()));
            }
            min = Vec2::new(min.x.min(p.x), min.y.min(p.y));
            max = Vec2::new(max.x.max(p.x), max.y.max(p.y));
        }
        if !min.is_finite() {
            return Err(Error::EmptyScene);
        }
        let ext = |a: f64, b: f64| if b > a { b - a } else { 1.0 };
        let m = Vec2::new(0.05 * ext(min.x, max.x), 0.05 * ext(min.y, max.y));
        Ok(ViewBox { min: min - m, max: max + m })
    }
}

fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn pt(p: Vec2) -> String {
    format!("{} {}", num(p.x), num(-p.y))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// SVG 1.1 document; the y axis points up in scene coordinates.
pub fn render_svg(scene: &Scene) -> Result<String> {
    if scene.items.is_empty() {
        return Err(Error::EmptyScene);
    }
    let vb = scene.viewbox()?;
    let (w, h) = (vb.max.x - vb.min.x, vb.max.y - vb.min.y);
    let unit = w.max(h);
    let stroke = num(0.004 * unit);
    let radius = num(0.008 * unit);
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{} {} {} {}\" width=\"512\" height=\"{}\">",
        num(vb.min.x),
        num(-vb.max.y),
        num(w),
        num(h),
        num(512.0 * h / w)
    );
    let _ = writeln!(out, "<g fill=\"none\" stroke-width=\"{stroke}\" stroke-linejoin=\"round\">");
    for item in &scene.items {
        match item {
            Primitive::Path { points, closed, color } => {
                let mut d = String::new();
                for (k, p) in points.iter().enumerate() {
                    let _ = write!(d, "{}{}", if k == 0 { "M " } else { " L " }, pt(*p));
                }
                if *closed {
                    d.push_str(" Z");
                }
                let _ = writeln!(out, "<path d=\"{d}\" stroke=\"{}\"/>", color.hex());
            }
            Primitive::Polygon { points, color } => {
                let list: Vec<String> = points.iter().map(|p| format!("{},{}", num(p.x), num(-p.y))).collect();
                let _ = writeln!(out, "<polygon points=\"{}\" stroke=\"{}\"/>", list.join(" "), color.hex());
            }
            Primitive::Marker { at, color } => {
                let _ = writeln!(
                    out,
                    "<circle cx=\"{}\" cy=\"{}\" r=\"{radius}\" fill=\"{}\" stroke=\"none\"/>",
                    num(at.x),
                    num(-at.y),
                    color.hex()
                );
            }
            Primitive::Segment { a, b, color } => {
                let _ = writeln!(
                    out,
                    "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\"/>",
                    num(a.x),
                    num(-a.y),
                    num(b.x),
                    num(-b.y),
                    color.hex()
                );
            }
            Primitive::Label { at, text } => {
                let _ = writeln!(
                    out,
                    "<text x=\"{}\" y=\"{}\" font-size=\"{}\" fill=\"#000000\" stroke=\"none\">{}</text>",
                    num(at.x),
                    num(-at.y),
                    num(0.03 * unit),
                    escape(text)
                );
            }
        }
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morse::eigen_index;
    use crate::linalg::SymMatrix;

    #[test]
    fn unit_circle_scene() {
        let mut s = Scene::new();
        s.add_curve(&Curve::unit_circle(), Color::Blue).unwrap();
        let vb = s.viewbox().unwrap();
        assert!((vb.min.x + 1.1).abs() < 1e-3 && (vb.max.y - 1.1).abs() < 1e-3);
        let svg = render_svg(&s).unwrap();
        assert_eq!(svg.matches("<path").count(), 1);
        let doc = roxmltree::Document::parse(&svg).unwrap();
        assert_eq!(doc.root_element().tag_name().name(), "svg");
        assert_eq!(svg, render_svg(&s).unwrap());
    }

    #[test]
    fn empty_scene_errors() {
        assert_eq!(render_svg(&Scene::new()), Err(Error::EmptyScene));
    }

    #[test]
    fn colors_by_index() {
        let m = eigen_index(&SymMatrix::from_rows(&[vec![-1.0, 0.0], vec![0.0, 2.0]]), None);
        assert_eq!(index_color(&m), Color::Green);
        let d = eigen_index(&SymMatrix::from_rows(&[vec![0.0, 0.0], vec![0.0, 2.0]]), None);
        assert_eq!(index_color(&d), Color::Black);
    }

    #[test]
    fn labels_are_escaped_and_no_negative_zero() {
        let mut s = Scene::new();
        s.push(Primitive::Label { at: Vec2::new(-0.0000001, 0.0), text: "a<b & c".into() });
        s.push(Primitive::Segment { a: Vec2::ZERO, b: Vec2::new(1.0, 1.0), color: Color::Red });
        let svg = render_svg(&s).unwrap();
        assert!(svg.contains("a&lt;b &amp; c"));
        assert!(!svg.contains("-0.000000"));
        roxmltree::Document::parse(&svg).unwrap();
    }

    #[test]
    fn non_finite_rejected() {
        let mut s = Scene::new();
        s.push(Primitive::Marker { at: Vec2::new(f64::NAN, 0.0), color: Color::Red });
        assert!(render_svg(&s).is_err());
    }
}

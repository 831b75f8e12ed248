//! Minimal SVG 1.1 / DXF R12 writers for 2D line work.
//!
//! Output is byte-stable: coordinates are printed with five decimals and
//! elements keep insertion order within each layer.

use std::fmt::Write as _;

use super::{Rect, Vec2};
use crate::format::fixed;

const PLACES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Layer {
    Outline,
    Cuts,
    Cam,
}

impl Layer {
    pub fn name(self) -> &'static str {
        match self {
            Layer::Outline => "OUTLINE",
            Layer::Cuts => "CUTS",
            Layer::Cam => "CAM",
        }
    }

    fn svg_stroke(self) -> &'static str {
        match self {
            Layer::Outline => "#0000ff",
            Layer::Cuts => "#ff0000",
            Layer::Cam => "#000000",
        }
    }

    /// AutoCAD colour index.
    fn dxf_color(self) -> u8 {
        match self {
            Layer::Outline => 5,
            Layer::Cuts => 1,
            Layer::Cam => 7,
        }
    }
}

#[derive(Debug, Clone)]
enum Element {
    Line(Vec2, Vec2),
    Rect(Rect),
    Polyline { points: Vec<Vec2>, closed: bool },
}

impl Element {
    fn edges(&self) -> Vec<(Vec2, Vec2)> {
        match self {
            Element::Line(a, b) => vec![(*a, *b)],
            Element::Rect(r) => {
                let c = [
                    r.min,
                    Vec2::new(r.max.x, r.min.y),
                    r.max,
                    Vec2::new(r.min.x, r.max.y),
                ];
                (0..4).map(|i| (c[i], c[(i + 1) % 4])).collect()
            }
            Element::Polyline { points, closed } => {
                let mut e: Vec<_> = points.windows(2).map(|w| (w[0], w[1])).collect();
                if *closed && points.len() > 2 {
                    e.push((points[points.len() - 1], points[0]));
                }
                e
            }
        }
    }
}

/// A set of layered 2D elements inside a drawing-area rectangle.
#[derive(Debug, Clone)]
pub struct Drawing {
    bounds: Rect,
    elements: Vec<(Layer, Element)>,
}

impl Drawing {
    pub fn new(bounds: Rect) -> Self {
        Self {
            bounds,
            elements: Vec::new(),
        }
    }

    pub fn add_line(&mut self, layer: Layer, a: Vec2, b: Vec2) {
        self.elements.push((layer, Element::Line(a, b)));
    }

    pub fn add_rect(&mut self, layer: Layer, rect: Rect) {
        self.elements.push((layer, Element::Rect(rect)));
    }

    pub fn add_polyline(&mut self, layer: Layer, points: &[Vec2], closed: bool) {
        self.elements.push((
            layer,
            Element::Polyline {
                points: points.to_vec(),
                closed,
            },
        ));
    }

    fn layers(&self) -> Vec<Layer> {
        let mut layers: Vec<Layer> = self.elements.iter().map(|(l, _)| *l).collect();
        layers.sort();
        layers.dedup();
        layers
    }

    /// SVG with millimetre user units. The y axis is flipped so that the
    /// drawing's lower-left corner appears at the bottom left.
    pub fn to_svg(&self) -> String {
        let b = self.bounds;
        let width = b.max.x - b.min.x;
        let height = b.max.y - b.min.y;
        let flip = b.min.y + b.max.y;
        let px = |p: Vec2| format!("{} {}", fixed(p.x, PLACES), fixed(flip - p.y, PLACES));

        let mut out = String::new();
        out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n");
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}mm\" height=\"{h}mm\" viewBox=\"{x} {y} {w} {h}\">",
            w = fixed(width, PLACES),
            h = fixed(height, PLACES),
            x = fixed(b.min.x, PLACES),
            y = fixed(b.min.y, PLACES),
        );
        for layer in self.layers() {
            let _ = writeln!(
                out,
                "  <g id=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"0.05000\">",
                layer.name(),
                layer.svg_stroke()
            );
            for (_, element) in self.elements.iter().filter(|(l, _)| *l == layer) {
                match element {
                    Element::Line(a, c) => {
                        let _ = writeln!(out, "    <path d=\"M {} L {}\"/>", px(*a), px(*c));
                    }
                    Element::Rect(r) => {
                        let _ = writeln!(
                            out,
                            "    <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>",
                            fixed(r.min.x, PLACES),
                            fixed(flip - r.max.y, PLACES),
                            fixed(r.max.x - r.min.x, PLACES),
                            fixed(r.max.y - r.min.y, PLACES),
                        );
                    }
                    Element::Polyline { points, closed } => {
                        let mut d = String::new();
                        for (i, p) in points.iter().enumerate() {
                            d.push_str(if i == 0 { "M " } else { " L " });
                            d.push_str(&px(*p));
                        }
                        if *closed {
                            d.push_str(" Z");
                        }
                        let _ = writeln!(out, "    <path d=\"{d}\"/>");
                    }
                }
            }
            out.push_str("  </g>\n");
        }
        out.push_str("</svg>\n");
        out
    }

    /// DXF R12 ASCII. Every element is flattened to `LINE` entities.
    pub fn to_dxf(&self) -> String {
        let mut out = String::new();
        let mut pair = |code: u16, value: &str| {
            let _ = writeln!(out, "{code:>3}\n{value}");
        };
        pair(0, "SECTION");
        pair(2, "HEADER");
        pair(9, "$ACADVER");
        pair(1, "AC1009");
        pair(0, "ENDSEC");

        let layers = self.layers();
        pair(0, "SECTION");
        pair(2, "TABLES");
        pair(0, "TABLE");
        pair(2, "LAYER");
        pair(70, &layers.len().to_string());
        for layer in &layers {
            pair(0, "LAYER");
            pair(2, layer.name());
            pair(70, "0");
            pair(62, &layer.dxf_color().to_string());
            pair(6, "CONTINUOUS");
        }
        pair(0, "ENDTAB");
        pair(0, "ENDSEC");

        pair(0, "SECTION");
        pair(2, "ENTITIES");
        for layer in &layers {
            for (_, element) in self.elements.iter().filter(|(l, _)| l == layer) {
                for (a, b) in element.edges() {
                    pair(0, "LINE");
                    pair(8, layer.name());
                    pair(10, &fixed(a.x, PLACES));
                    pair(20, &fixed(a.y, PLACES));
                    pair(30, &fixed(0.0, PLACES));
                    pair(11, &fixed(b.x, PLACES));
                    pair(21, &fixed(b.y, PLACES));
                    pair(31, &fixed(0.0, PLACES));
                }
            }
        }
        pair(0, "ENDSEC");
        pair(0, "EOF");
        out
    }
}

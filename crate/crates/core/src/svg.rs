//! Deterministic SVG 1.1 rendering of scenes with optional overlays.
//!
//! Coordinates are internal units times an integer scale, with y negated so
//! that the drawing is upright. Layers are drawn in the order of [`Layer`].

use std::collections::BTreeMap;
use std::fmt::Write;

use thiserror::Error;

use crate::decomposition::Decomposition;
use crate::geometry::{Coord, Location, OrthoSegment, Point, Rect, Ring, Scene};
use crate::reduction::ReductionPlan;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SvgError {
    #[error("{layer:?} overlay does not belong to this scene: {detail}")]
    MismatchedOverlay { layer: Layer, detail: String },
    #[error("scale must be positive, got {0}")]
    BadScale(Coord),
}

/// Drawing layers, bottom to top.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Layer {
    Polygon,
    Gadgets,
    Slices,
    Partition,
    SliceSegments,
    Guards,
    Transmitters,
    Crosses,
}

impl Layer {
    pub const ALL: [Layer; 8] = [
        Layer::Polygon,
        Layer::Gadgets,
        Layer::Slices,
        Layer::Partition,
        Layer::SliceSegments,
        Layer::Guards,
        Layer::Transmitters,
        Layer::Crosses,
    ];

    fn name(self) -> &'static str {
        match self {
            Layer::Polygon => "polygon",
            Layer::Gadgets => "gadgets",
            Layer::Slices => "slices",
            Layer::Partition => "partition",
            Layer::SliceSegments => "slice-segments",
            Layer::Guards => "guards",
            Layer::Transmitters => "transmitters",
            Layer::Crosses => "crosses",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Style {
    pub stroke: String,
    pub fill: String,
    pub stroke_width: Coord,
}

impl Style {
    fn new(stroke: &str, fill: &str, stroke_width: Coord) -> Self {
        Style { stroke: stroke.into(), fill: fill.into(), stroke_width }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenderSpec {
    /// Enabled layers; drawing order is always that of [`Layer`].
    pub layers: Vec<Layer>,
    pub styles: BTreeMap<Layer, Style>,
    /// Multiplier from internal units to SVG user units.
    pub scale: Coord,
}

impl Default for RenderSpec {
    fn default() -> Self {
        let styles = BTreeMap::from([
            (Layer::Polygon, Style::new("#202020", "#e8e8e8", 1)),
            (Layer::Gadgets, Style::new("#7a4fa0", "none", 1)),
            (Layer::Slices, Style::new("#3a78c2", "#3a78c2", 1)),
            (Layer::Partition, Style::new("#c23a3a", "none", 1)),
            (Layer::SliceSegments, Style::new("#2f8f4e", "none", 1)),
            (Layer::Guards, Style::new("#d08a00", "none", 2)),
            (Layer::Transmitters, Style::new("#b0006e", "none", 2)),
            (Layer::Crosses, Style::new("#000000", "#000000", 1)),
        ]);
        RenderSpec { layers: Layer::ALL.to_vec(), styles, scale: 4 }
    }
}

/// Things drawn on top of a scene, in internal units.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Overlay {
    pub gadgets: Vec<Rect>,
    pub slices: Vec<Rect>,
    pub partition: Vec<OrthoSegment>,
    pub slice_segments: Vec<OrthoSegment>,
    pub guards: Vec<OrthoSegment>,
    pub transmitters: Vec<OrthoSegment>,
    pub crosses: Vec<Point>,
}

impl Overlay {
    /// Slices, partition segments, slice segments and crosses of `d`.
    pub fn decomposition(d: &Decomposition) -> Self {
        Overlay {
            slices: d.h_slices.iter().chain(&d.v_slices).map(|s| s.rect).collect(),
            partition: d.h_partition.iter().chain(&d.v_partition).map(|p| p.segment).collect(),
            slice_segments: d.h_segments.iter().chain(&d.v_segments).map(|s| s.segment).collect(),
            crosses: d.crosses.iter().map(|c| c.point).collect(),
            ..Overlay::default()
        }
    }

    /// Outlines of every gadget and connector rectangle of `plan`.
    pub fn gadgets(plan: &ReductionPlan) -> Self {
        Overlay { gadgets: plan.rects().iter().map(|r| r.scaled(2)).collect(), ..Overlay::default() }
    }

    pub fn with_guards(mut self, guards: impl IntoIterator<Item = OrthoSegment>) -> Self {
        self.guards.extend(guards);
        self
    }

    pub fn with_transmitters(mut self, ts: impl IntoIterator<Item = OrthoSegment>) -> Self {
        self.transmitters.extend(ts);
        self
    }

    fn check(&self, scene: &Scene) -> Result<(), SvgError> {
        let mismatch = |layer, detail: String| Err(SvgError::MismatchedOverlay { layer, detail });
        for r in &self.slices {
            if scene.locate2(r.x.lo + r.x.hi, r.y.lo + r.y.hi) != Location::Interior {
                return mismatch(Layer::Slices, format!("{r:?} is not inside the polygon"));
            }
        }
        let bbox = scene.bounding_box();
        for r in &self.gadgets {
            if !bbox.contains(Point::new(r.x.lo, r.y.lo)) || !bbox.contains(Point::new(r.x.hi, r.y.hi)) {
                return mismatch(Layer::Gadgets, format!("{r:?} lies outside the scene"));
            }
        }
        let segs = [
            (Layer::Partition, &self.partition),
            (Layer::SliceSegments, &self.slice_segments),
            (Layer::Guards, &self.guards),
            (Layer::Transmitters, &self.transmitters),
        ];
        for (layer, list) in segs {
            for s in list.iter() {
                if !inside(scene, s) {
                    return mismatch(layer, format!("{s:?} leaves the polygon"));
                }
            }
        }
        for p in &self.crosses {
            if !scene.in_closure(*p) {
                return mismatch(Layer::Crosses, format!("{p:?} is outside the polygon"));
            }
        }
        Ok(())
    }
}

/// Segments may cross walls, so only their endpoints are checked.
fn inside(scene: &Scene, s: &OrthoSegment) -> bool {
    scene.in_closure(s.start()) && scene.in_closure(s.end())
}

struct Canvas {
    scale: Coord,
}

impl Canvas {
    fn x(&self, x: Coord) -> Coord {
        x * self.scale
    }

    fn y(&self, y: Coord) -> Coord {
        -y * self.scale
    }

    fn ring(&self, out: &mut String, r: &Ring) {
        for (i, p) in r.vertices.iter().enumerate() {
            let cmd = if i == 0 { 'M' } else { 'L' };
            let _ = write!(out, "{cmd}{} {} ", self.x(p.x), self.y(p.y));
        }
        out.push('Z');
    }
}

fn style_attrs(s: &Style) -> String {
    format!(r#"stroke="{}" fill="{}" stroke-width="{}""#, s.stroke, s.fill, s.stroke_width)
}

pub fn render_svg(scene: &Scene, overlay: &Overlay, spec: &RenderSpec) -> Result<String, SvgError> {
    if spec.scale <= 0 {
        return Err(SvgError::BadScale(spec.scale));
    }
    overlay.check(scene)?;
    let c = Canvas { scale: spec.scale };
    let bbox = scene.bounding_box();
    let (w, h) = (bbox.x.len() * spec.scale, bbox.y.len() * spec.scale);
    let (mx, my) = ((w + 19) / 20, (h + 19) / 20);
    let (x0, y0) = (c.x(bbox.x.lo) - mx, c.y(bbox.y.hi) - my);
    let (vw, vh) = (w + 2 * mx, h + 2 * my);
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{x0} {y0} {vw} {vh}" width="{vw}" height="{vh}">"#
    );
    let default = Style::new("#000000", "none", 1);
    for layer in Layer::ALL {
        if !spec.layers.contains(&layer) {
            continue;
        }
        let st = spec.styles.get(&layer).unwrap_or(&default);
        let body = draw_layer(&c, scene, overlay, layer, st);
        if body.is_empty() {
            continue;
        }
        let _ = writeln!(out, r#"<g id="{}">"#, layer.name());
        out.push_str(&body);
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn draw_layer(c: &Canvas, scene: &Scene, overlay: &Overlay, layer: Layer, st: &Style) -> String {
    let mut out = String::new();
    let attrs = style_attrs(st);
    let class = layer.name();
    let rect = |out: &mut String, r: &Rect, extra: &str| {
        let _ = writeln!(
            out,
            r#"<rect class="{class}" x="{}" y="{}" width="{}" height="{}" {attrs}{extra}/>"#,
            c.x(r.x.lo),
            c.y(r.y.hi),
            r.x.len() * c.scale,
            r.y.len() * c.scale
        );
    };
    let line = |out: &mut String, s: &OrthoSegment| {
        let (a, b) = (s.start(), s.end());
        let _ = writeln!(
            out,
            r#"<line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}" {attrs}/>"#,
            c.x(a.x),
            c.y(a.y),
            c.x(b.x),
            c.y(b.y)
        );
    };
    match layer {
        Layer::Polygon => {
            for comp in scene.components() {
                let mut d = String::new();
                c.ring(&mut d, &comp.outer);
                for hole in &comp.holes {
                    d.push(' ');
                    c.ring(&mut d, hole);
                }
                let _ = writeln!(out, r#"<path class="{class}" d="{d}" fill-rule="evenodd" {attrs}/>"#);
            }
        }
        Layer::Gadgets => overlay.gadgets.iter().for_each(|r| rect(&mut out, r, "")),
        Layer::Slices => overlay.slices.iter().for_each(|r| rect(&mut out, r, r#" fill-opacity="0.15""#)),
        Layer::Partition => overlay.partition.iter().for_each(|s| line(&mut out, s)),
        Layer::SliceSegments => overlay.slice_segments.iter().for_each(|s| line(&mut out, s)),
        Layer::Guards => overlay.guards.iter().for_each(|s| line(&mut out, s)),
        Layer::Transmitters => overlay.transmitters.iter().for_each(|s| line(&mut out, s)),
        Layer::Crosses => {
            for p in &overlay.crosses {
                let _ = writeln!(
                    out,
                    r#"<circle class="{class}" cx="{}" cy="{}" r="{}" {attrs}/>"#,
                    c.x(p.x),
                    c.y(p.y),
                    c.scale
                );
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::build_slices;
    use crate::geometry::{validate_scene, Axis};

    fn u() -> Scene {
        validate_scene(&[(vec![(0, 0), (12, 0), (12, 8), (8, 8), (8, 3), (4, 3), (4, 8), (0, 8)], vec![])]).unwrap()
    }

    #[test]
    fn element_counts() {
        let rect = validate_scene(&[(vec![(0, 0), (10, 0), (10, 6), (0, 6)], vec![])]).unwrap();
        let svg = render_svg(&rect, &Overlay::default(), &RenderSpec::default()).unwrap();
        assert_eq!(svg.matches("<path").count(), 1);
        assert_eq!(svg.matches("<rect").count(), 0);

        let u = u();
        let slices = build_slices(&u, 2, Axis::Horizontal).unwrap();
        let overlay = Overlay { slices: slices.iter().map(|s| s.rect).collect(), ..Overlay::default() };
        let svg = render_svg(&u, &overlay, &RenderSpec::default()).unwrap();
        assert_eq!(svg.matches("<path").count(), 1);
        assert_eq!(svg.matches("<rect class=\"slices\"").count(), 3);
        assert!(svg.contains(r#"viewBox="-5 -68 106 72""#));
    }

    #[test]
    fn deterministic_and_checked() {
        let u = u();
        let d = Decomposition::build(&u, 2).unwrap();
        let o = Overlay::decomposition(&d).with_guards([OrthoSegment::horizontal(6, 0, 24)]);
        let a = render_svg(&u, &o, &RenderSpec::default()).unwrap();
        assert_eq!(a, render_svg(&u, &o, &RenderSpec::default()).unwrap());
        let bad = Overlay::default().with_transmitters([OrthoSegment::horizontal(12, 10, 14)]);
        assert!(matches!(
            render_svg(&u, &bad, &RenderSpec::default()),
            Err(SvgError::MismatchedOverlay { layer: Layer::Transmitters, .. })
        ));
        let spec = RenderSpec { layers: vec![Layer::Polygon], ..RenderSpec::default() };
        assert!(!render_svg(&u, &o, &spec).unwrap().contains("<line"));
    }
}

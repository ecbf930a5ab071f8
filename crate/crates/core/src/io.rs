//! JSON file formats. Coordinates are in input units: integers, or
//! `{"num": n, "den": 2}` for half units.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decomposition::{Decomposition, GuardSegment};
use crate::geometry::{Axis, Coord, GeometryError, Interval, OrthoSegment, Point, PolygonWithHoles, Rect, Ring, Scene};
use crate::hitting::{HittingSolution, Method};
use crate::reduction::{Bar, BarRepresentation, GraphEdge, GraphInstance, ReductionError};
use crate::visibility::Transmitter;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}

/// A coordinate as written in files.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(Coord),
    Ratio { num: Coord, den: Coord },
}

impl Num {
    pub fn from_internal(c: Coord) -> Num {
        if c % 2 == 0 {
            Num::Int(c / 2)
        } else {
            Num::Ratio { num: c, den: 2 }
        }
    }

    pub fn to_internal(self) -> Result<Coord, IoError> {
        let out = match self {
            Num::Int(v) => v.checked_mul(2),
            Num::Ratio { num, den: 1 } => num.checked_mul(2),
            Num::Ratio { num, den: 2 } => Some(num),
            Num::Ratio { den, .. } => return Err(IoError::Format(format!("denominator {den} is not 1 or 2"))),
        };
        out.ok_or_else(|| IoError::Format("coordinate overflows".into()))
    }
}

type PointFile = [Num; 2];

#[derive(Serialize, Deserialize)]
struct ComponentFile {
    outer: Vec<PointFile>,
    #[serde(default)]
    holes: Vec<Vec<PointFile>>,
}

#[derive(Serialize, Deserialize)]
struct SceneFile {
    components: Vec<ComponentFile>,
}

fn ring_out(r: &Ring) -> Vec<PointFile> {
    r.vertices.iter().map(|p| [Num::from_internal(p.x), Num::from_internal(p.y)]).collect()
}

fn ring_in(r: &[PointFile]) -> Result<Ring, IoError> {
    let pts = r.iter().map(|[x, y]| Ok(Point::new(x.to_internal()?, y.to_internal()?))).collect::<Result<_, IoError>>()?;
    Ok(Ring::new(pts))
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("file types serialize");
    s.push('\n');
    s
}

pub fn scene_to_json(scene: &Scene) -> String {
    let components = scene
        .components()
        .iter()
        .map(|c| ComponentFile { outer: ring_out(&c.outer), holes: c.holes.iter().map(ring_out).collect() })
        .collect();
    pretty(&SceneFile { components })
}

pub fn scene_from_json(text: &str) -> Result<Scene, IoError> {
    let file: SceneFile = serde_json::from_str(text)?;
    let comps = file
        .components
        .iter()
        .map(|c| {
            Ok(PolygonWithHoles {
                outer: ring_in(&c.outer)?,
                holes: c.holes.iter().map(|h| ring_in(h)).collect::<Result<_, IoError>>()?,
            })
        })
        .collect::<Result<Vec<_>, IoError>>()?;
    Ok(Scene::from_internal(comps)?)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
enum AxisTag {
    #[serde(rename = "h")]
    H,
    #[serde(rename = "v")]
    V,
}

#[derive(Serialize, Deserialize)]
struct SegmentFile {
    axis: AxisTag,
    fixed: Num,
    span: [Num; 2],
}

impl SegmentFile {
    fn from_segment(s: &OrthoSegment) -> Self {
        SegmentFile {
            axis: match s.axis {
                Axis::Horizontal => AxisTag::H,
                Axis::Vertical => AxisTag::V,
            },
            fixed: Num::from_internal(s.fixed),
            span: [Num::from_internal(s.span.lo), Num::from_internal(s.span.hi)],
        }
    }

    fn to_segment(&self) -> Result<OrthoSegment, IoError> {
        let axis = match self.axis {
            AxisTag::H => Axis::Horizontal,
            AxisTag::V => Axis::Vertical,
        };
        let span = Interval::new(self.span[0].to_internal()?, self.span[1].to_internal()?);
        Ok(OrthoSegment::new(axis, self.fixed.to_internal()?, span))
    }
}

#[derive(Serialize, Deserialize)]
struct GuardsFile {
    guards: Vec<SegmentFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    method: Option<Method>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    size: Option<usize>,
}

/// Transmitters, plus the solver and size when they come from a solution.
pub fn transmitters_to_json(transmitters: &[Transmitter], solution: Option<&HittingSolution>) -> String {
    pretty(&GuardsFile {
        guards: transmitters.iter().map(|t| SegmentFile::from_segment(&t.segment)).collect(),
        method: solution.map(|s| s.method),
        size: solution.map(|s| s.size),
    })
}

/// Parses transmitters without checking them against a scene.
pub fn transmitters_from_json(text: &str) -> Result<Vec<Transmitter>, IoError> {
    let file: GuardsFile = serde_json::from_str(text)?;
    file.guards.iter().map(|g| Ok(Transmitter::unchecked(g.to_segment()?))).collect()
}

#[derive(Serialize, Deserialize)]
struct BarFile {
    y: Coord,
    x: [Coord; 2],
}

#[derive(Serialize, Deserialize)]
struct VertexFile {
    id: usize,
    bar: BarFile,
}

#[derive(Serialize, Deserialize)]
struct EdgeFile {
    u: usize,
    v: usize,
    strip: [Coord; 2],
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    vertices: Vec<VertexFile>,
    edges: Vec<EdgeFile>,
}

/// Graph with its bar visibility representation, integer input units.
pub fn graph_from_json(text: &str) -> Result<(GraphInstance, BarRepresentation), IoError> {
    let file: GraphFile = serde_json::from_str(text)?;
    let edges: Vec<(usize, usize)> = file.edges.iter().map(|e| (e.u, e.v)).collect();
    let graph = GraphInstance::new(file.vertices.iter().map(|v| v.id), &edges)?;
    let mut bars = BTreeMap::new();
    for v in &file.vertices {
        if bars.insert(v.id, Bar { y: v.bar.y, x: Interval::new(v.bar.x[0], v.bar.x[1]) }).is_some() {
            return Err(IoError::Format(format!("vertex {} listed twice", v.id)));
        }
    }
    let strips = file.edges.iter().map(|e| (GraphEdge::new(e.u, e.v), Interval::new(e.strip[0], e.strip[1]))).collect();
    let rep = BarRepresentation { bars, strips };
    rep.validate(&graph)?;
    Ok((graph, rep))
}

pub fn graph_to_json(graph: &GraphInstance, rep: &BarRepresentation) -> String {
    pretty(&GraphFile {
        vertices: graph
            .vertices
            .iter()
            .map(|&id| {
                let b = rep.bars[&id];
                VertexFile { id, bar: BarFile { y: b.y, x: [b.x.lo, b.x.hi] } }
            })
            .collect(),
        edges: graph
            .edges
            .iter()
            .map(|e| {
                let s = rep.strips[e];
                EdgeFile { u: e.u, v: e.v, strip: [s.lo, s.hi] }
            })
            .collect(),
    })
}

#[derive(Serialize)]
struct RectFile {
    x: [Num; 2],
    y: [Num; 2],
}

impl RectFile {
    fn new(r: &Rect) -> Self {
        RectFile {
            x: [Num::from_internal(r.x.lo), Num::from_internal(r.x.hi)],
            y: [Num::from_internal(r.y.lo), Num::from_internal(r.y.hi)],
        }
    }
}

#[derive(Serialize)]
struct GuardFile {
    id: usize,
    #[serde(flatten)]
    segment: SegmentFile,
}

#[derive(Serialize)]
struct CrossFile {
    id: usize,
    point: PointFile,
    h_slice: usize,
    v_slice: usize,
}

#[derive(Serialize)]
struct DecompositionFile {
    k: usize,
    h_slices: Vec<RectFile>,
    v_slices: Vec<RectFile>,
    h_segments: Vec<SegmentFile>,
    v_segments: Vec<SegmentFile>,
    guards: Vec<GuardFile>,
    crosses: Vec<CrossFile>,
}

fn guard_file(g: &GuardSegment) -> GuardFile {
    GuardFile { id: g.id, segment: SegmentFile::from_segment(&g.segment) }
}

pub fn decomposition_to_json(d: &Decomposition) -> String {
    pretty(&DecompositionFile {
        k: d.k,
        h_slices: d.h_slices.iter().map(|s| RectFile::new(&s.rect)).collect(),
        v_slices: d.v_slices.iter().map(|s| RectFile::new(&s.rect)).collect(),
        h_segments: d.h_segments.iter().map(|s| SegmentFile::from_segment(&s.segment)).collect(),
        v_segments: d.v_segments.iter().map(|s| SegmentFile::from_segment(&s.segment)).collect(),
        guards: d.guards.iter().map(guard_file).collect(),
        crosses: d
            .crosses
            .iter()
            .map(|c| CrossFile {
                id: c.id,
                point: [Num::from_internal(c.point.x), Num::from_internal(c.point.y)],
                h_slice: c.h_slice,
                v_slice: c.v_slice,
            })
            .collect(),
    })
}

/// Any serializable report (plans, lemma reports, coverage reports).
pub fn to_json<T: Serialize>(v: &T) -> String {
    pretty(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::validate_scene;

    #[test]
    fn num_encoding() {
        assert_eq!(Num::from_internal(6), Num::Int(3));
        assert_eq!(Num::from_internal(-3), Num::Ratio { num: -3, den: 2 });
        assert_eq!(Num::Ratio { num: 5, den: 1 }.to_internal().unwrap(), 10);
        assert!(Num::Ratio { num: 5, den: 3 }.to_internal().is_err());
        let v: Num = serde_json::from_str(r#"{"num": 7, "den": 2}"#).unwrap();
        assert_eq!(v.to_internal().unwrap(), 7);
    }

    #[test]
    fn scene_round_trip() {
        let u = validate_scene(&[(vec![(0, 0), (12, 0), (12, 8), (8, 8), (8, 3), (4, 3), (4, 8), (0, 8)], vec![])]).unwrap();
        let text = scene_to_json(&u);
        assert_eq!(scene_from_json(&text).unwrap(), u);
        let holed = validate_scene(&[(vec![(0, 0), (9, 0), (9, 9), (0, 9)], vec![vec![(3, 3), (3, 6), (6, 6), (6, 3)]])]).unwrap();
        assert_eq!(scene_from_json(&scene_to_json(&holed)).unwrap(), holed);
        assert!(scene_from_json(r#"{"components": [{"outer": [[0,0],[1,1],[0,1]]}]}"#).is_err());
        assert!(scene_from_json("[").is_err());
    }

    #[test]
    fn half_units() {
        let odd = r#"{"components":[{"outer":[[0,0],[{"num":3,"den":2},0],[{"num":3,"den":2},2],[0,2]]}]}"#;
        assert!(matches!(scene_from_json(odd), Err(IoError::Geometry(GeometryError::OddCoordinate { .. }))));
        let t = transmitters_from_json(r#"{"guards":[{"axis":"v","fixed":{"num":3,"den":2},"span":[0,2]}]}"#).unwrap();
        assert_eq!(t[0].segment, OrthoSegment::vertical(3, 0, 4));
        assert!(transmitters_to_json(&t, None).contains("\"den\": 2"));
    }

    #[test]
    fn transmitters_round_trip() {
        let ts = vec![
            Transmitter::unchecked(OrthoSegment::horizontal(16, 0, 8)),
            Transmitter::unchecked(OrthoSegment::vertical(3, 0, 5)),
        ];
        let sol = HittingSolution { selected: vec![0, 1], method: Method::Exact, size: 2 };
        let text = transmitters_to_json(&ts, Some(&sol));
        assert!(text.contains("\"method\": \"exact\""));
        assert_eq!(transmitters_from_json(&text).unwrap(), ts);
        let t = transmitters_from_json(r#"{"guards":[{"axis":"h","fixed":8,"span":[0,4]}]}"#).unwrap();
        assert_eq!(t[0].segment, OrthoSegment::horizontal(16, 0, 8));
    }

    #[test]
    fn graph_round_trip() {
        let text = r#"{"vertices":[{"id":1,"bar":{"y":0,"x":[0,8]}},{"id":2,"bar":{"y":10,"x":[0,8]}}],
                       "edges":[{"u":1,"v":2,"strip":[3,4]}]}"#;
        let (g, r) = graph_from_json(text).unwrap();
        assert_eq!((g.n(), g.m()), (2, 1));
        let again = graph_to_json(&g, &r);
        assert_eq!(graph_from_json(&again).unwrap(), (g, r));
        let bad = text.replace("[3,4]", "[7,9]");
        assert!(matches!(graph_from_json(&bad), Err(IoError::Reduction(ReductionError::BarRepInvalid(_)))));
    }
}

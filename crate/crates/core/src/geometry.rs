//! Exact scene model for orthogonal polygons with holes.
//!
//! Coordinates are "internal units": input integers multiplied by two.
//! Every vertex of a valid [`Scene`] has even coordinates, so a line at an
//! odd coordinate never contains a polygon edge and never passes through a
//! vertex.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Coord = i64;

/// Largest admissible magnitude of an internal coordinate.
pub const COORD_LIMIT: Coord = 1 << 30;

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point {
    pub x: Coord,
    pub y: Coord,
}

impl Point {
    pub const fn new(x: Coord, y: Coord) -> Self {
        Point { x, y }
    }

    /// Coordinate along `axis` (x for horizontal).
    pub fn along(self, axis: Axis) -> Coord {
        match axis {
            Axis::Horizontal => self.x,
            Axis::Vertical => self.y,
        }
    }

    /// Coordinate across `axis` (y for horizontal).
    pub fn across(self, axis: Axis) -> Coord {
        match axis {
            Axis::Horizontal => self.y,
            Axis::Vertical => self.x,
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", half(self.x), half(self.y))
    }
}

/// Formats an internal coordinate in input units.
pub fn half(c: Coord) -> String {
    if c % 2 == 0 {
        format!("{}", c / 2)
    } else {
        let sign = if c < 0 { "-" } else { "" };
        format!("{sign}{}.5", c.abs() / 2)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Axis {
    Horizontal,
    Vertical,
}

impl Axis {
    pub fn other(self) -> Axis {
        match self {
            Axis::Horizontal => Axis::Vertical,
            Axis::Vertical => Axis::Horizontal,
        }
    }

    /// Builds the point with coordinate `along` on this axis and `across` on the other.
    pub fn point(self, along: Coord, across: Coord) -> Point {
        match self {
            Axis::Horizontal => Point::new(along, across),
            Axis::Vertical => Point::new(across, along),
        }
    }
}

/// Closed interval `[lo, hi]`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub lo: Coord,
    pub hi: Coord,
}

impl Interval {
    pub fn new(a: Coord, b: Coord) -> Self {
        Interval { lo: a.min(b), hi: a.max(b) }
    }

    pub fn contains(&self, c: Coord) -> bool {
        self.lo <= c && c <= self.hi
    }

    pub fn strictly_contains(&self, c: Coord) -> bool {
        self.lo < c && c < self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Closed intersection is nonempty.
    pub fn meets(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Open intersection is nonempty.
    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo < other.hi && other.lo < self.hi
    }

    pub fn len(&self) -> Coord {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.lo == self.hi
    }
}

/// Axis-parallel closed segment: `fixed` is the coordinate of its supporting
/// line, `span` the extent along it.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OrthoSegment {
    pub axis: Axis,
    pub fixed: Coord,
    pub span: Interval,
}

impl OrthoSegment {
    pub fn new(axis: Axis, fixed: Coord, span: Interval) -> Self {
        OrthoSegment { axis, fixed, span }
    }

    pub fn horizontal(y: Coord, x0: Coord, x1: Coord) -> Self {
        Self::new(Axis::Horizontal, y, Interval::new(x0, x1))
    }

    pub fn vertical(x: Coord, y0: Coord, y1: Coord) -> Self {
        Self::new(Axis::Vertical, x, Interval::new(y0, y1))
    }

    pub fn start(&self) -> Point {
        self.axis.point(self.span.lo, self.fixed)
    }

    pub fn end(&self) -> Point {
        self.axis.point(self.span.hi, self.fixed)
    }

    pub fn contains_point(&self, p: Point) -> bool {
        p.across(self.axis) == self.fixed && self.span.contains(p.along(self.axis))
    }

    /// Closed intersection test between two axis-parallel segments.
    pub fn intersects(&self, other: &OrthoSegment) -> bool {
        if self.axis == other.axis {
            self.fixed == other.fixed && self.span.meets(&other.span)
        } else {
            self.span.contains(other.fixed) && other.span.contains(self.fixed)
        }
    }
}

/// Axis-aligned rectangle `[x] × [y]`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub x: Interval,
    pub y: Interval,
}

impl Rect {
    pub fn new(x0: Coord, y0: Coord, x1: Coord, y1: Coord) -> Self {
        Rect { x: Interval::new(x0, x1), y: Interval::new(y0, y1) }
    }

    pub fn extent(&self, axis: Axis) -> Interval {
        match axis {
            Axis::Horizontal => self.x,
            Axis::Vertical => self.y,
        }
    }

    /// Open interiors intersect.
    pub fn overlaps(&self, other: &Rect) -> bool {
        self.x.overlaps(&other.x) && self.y.overlaps(&other.y)
    }

    pub fn intersection(&self, other: &Rect) -> Option<Rect> {
        let x = Interval { lo: self.x.lo.max(other.x.lo), hi: self.x.hi.min(other.x.hi) };
        let y = Interval { lo: self.y.lo.max(other.y.lo), hi: self.y.hi.min(other.y.hi) };
        (x.lo < x.hi && y.lo < y.hi).then_some(Rect { x, y })
    }

    pub fn strictly_contains(&self, p: Point) -> bool {
        self.x.strictly_contains(p.x) && self.y.strictly_contains(p.y)
    }

    pub fn contains(&self, p: Point) -> bool {
        self.x.contains(p.x) && self.y.contains(p.y)
    }

    pub fn scaled(&self, f: Coord) -> Rect {
        Rect::new(self.x.lo * f, self.y.lo * f, self.x.hi * f, self.y.hi * f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ring {
    pub vertices: Vec<Point>,
}

impl Ring {
    pub fn new(vertices: Vec<Point>) -> Self {
        Ring { vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Twice the signed shoelace area; positive for counter-clockwise rings.
    pub fn signed_area2(&self) -> i128 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let a = self.vertices[i];
                let b = self.vertices[(i + 1) % n];
                a.x as i128 * b.y as i128 - b.x as i128 * a.y as i128
            })
            .sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    fn reversed(&self) -> Ring {
        let mut v = self.vertices.clone();
        v.reverse();
        Ring { vertices: v }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolygonWithHoles {
    pub outer: Ring,
    pub holes: Vec<Ring>,
}

/// Polygon edge with the side of its supporting line that faces the interior.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub segment: OrthoSegment,
    /// `+1` if the interior lies on the larger-coordinate side of the line.
    pub interior_side: i8,
    /// Global ring index (outer rings and holes numbered in scene order).
    pub ring: usize,
    /// Index of the edge's start vertex within its ring.
    pub index: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Location {
    Interior,
    Boundary,
    Exterior,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("ring {ring}: edge starting at vertex {vertex} is not axis-parallel or does not alternate direction")]
    NonOrthogonalEdge { ring: usize, vertex: usize },
    #[error("ring {ring}: boundary self-intersects near vertex {vertex}")]
    SelfIntersection { ring: usize, vertex: usize },
    #[error("ring {ring}: boundary touches itself or another ring at vertex {vertex}")]
    PinchVertex { ring: usize, vertex: usize },
    #[error("ring {ring}: {count} vertices, need an even count of at least 4")]
    OddVertexCount { ring: usize, count: usize },
    #[error("ring {ring}: overlaps another component or hole near vertex {vertex}")]
    OverlappingComponents { ring: usize, vertex: usize },
    #[error("ring {ring}: hole is not inside its outer ring")]
    HoleOutside { ring: usize },
    #[error("ring {ring}: vertex {vertex} has a coordinate outside the supported range")]
    CoordinateOutOfRange { ring: usize, vertex: usize },
    #[error("ring {ring}: vertex {vertex} is not on the integer input grid")]
    OddCoordinate { ring: usize, vertex: usize },
    #[error("scene has no components")]
    Empty,
}

/// One or more disjoint orthogonal polygons with holes, validated.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scene {
    components: Vec<PolygonWithHoles>,
    edges: Vec<Edge>,
}

/// Raw input ring list per component, in integer input units.
pub type RawPolygon = (Vec<(Coord, Coord)>, Vec<Vec<(Coord, Coord)>>);

/// Validates integer input rings, doubling them into internal units.
pub fn validate_scene(raw: &[RawPolygon]) -> Result<Scene, GeometryError> {
    let to_ring = |r: &Vec<(Coord, Coord)>| {
        Ring::new(r.iter().map(|&(x, y)| Point::new(x.saturating_mul(2), y.saturating_mul(2))).collect())
    };
    let comps = raw
        .iter()
        .map(|(outer, holes)| PolygonWithHoles { outer: to_ring(outer), holes: holes.iter().map(to_ring).collect() })
        .collect();
    Scene::from_internal(comps)
}

impl Scene {
    /// Validates rings given in internal units and normalizes orientation.
    pub fn from_internal(components: Vec<PolygonWithHoles>) -> Result<Scene, GeometryError> {
        if components.is_empty() {
            return Err(GeometryError::Empty);
        }
        let mut rings: Vec<(usize, bool, Ring)> = Vec::new();
        for (ci, comp) in components.iter().enumerate() {
            rings.push((ci, false, comp.outer.clone()));
            for h in &comp.holes {
                rings.push((ci, true, h.clone()));
            }
        }
        for (ri, (_, _, ring)) in rings.iter().enumerate() {
            check_ring_shape(ri, ring)?;
        }
        // Orientation: outer CCW, holes CW.
        for (_, is_hole, ring) in rings.iter_mut() {
            let a = ring.signed_area2();
            if (*is_hole && a > 0) || (!*is_hole && a < 0) {
                *ring = ring.reversed();
            }
        }
        check_boundary_crossings(&rings)?;
        check_nesting(&rings)?;

        let mut comps: Vec<PolygonWithHoles> = Vec::new();
        for (ci, is_hole, ring) in rings {
            if !is_hole {
                comps.push(PolygonWithHoles { outer: ring, holes: Vec::new() });
            } else {
                comps[ci].holes.push(ring);
            }
        }
        Ok(Scene::assemble(comps))
    }

    fn assemble(components: Vec<PolygonWithHoles>) -> Scene {
        let mut edges = Vec::new();
        let mut ri = 0;
        for comp in &components {
            for ring in std::iter::once(&comp.outer).chain(comp.holes.iter()) {
                for (i, (a, b)) in ring.edges().enumerate() {
                    let (segment, interior_side) = if a.y == b.y {
                        (OrthoSegment::horizontal(a.y, a.x, b.x), if b.x > a.x { 1 } else { -1 })
                    } else {
                        (OrthoSegment::vertical(a.x, a.y, b.y), if b.y > a.y { -1 } else { 1 })
                    };
                    edges.push(Edge { segment, interior_side, ring: ri, index: i });
                }
                ri += 1;
            }
        }
        Scene { components, edges }
    }

    pub fn components(&self) -> &[PolygonWithHoles] {
        &self.components
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edges_of(&self, axis: Axis) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.iter().filter(move |e| e.segment.axis == axis)
    }

    pub fn vertex_count(&self) -> usize {
        self.edges.len()
    }

    pub fn hole_count(&self) -> usize {
        self.components.iter().map(|c| c.holes.len()).sum()
    }

    pub fn rings(&self) -> impl Iterator<Item = &Ring> + '_ {
        self.components.iter().flat_map(|c| std::iter::once(&c.outer).chain(c.holes.iter()))
    }

    /// Twice the enclosed area in internal units squared.
    pub fn area2(&self) -> i128 {
        self.rings().map(|r| r.signed_area2()).sum()
    }

    pub fn bounding_box(&self) -> Rect {
        let mut it = self.rings().flat_map(|r| r.vertices.iter());
        let first = *it.next().expect("validated scene is nonempty");
        let (mut x0, mut y0, mut x1, mut y1) = (first.x, first.y, first.x, first.y);
        for p in it {
            x0 = x0.min(p.x);
            y0 = y0.min(p.y);
            x1 = x1.max(p.x);
            y1 = y1.max(p.y);
        }
        Rect::new(x0, y0, x1, y1)
    }

    pub fn locate(&self, p: Point) -> Location {
        self.locate2(2 * p.x, 2 * p.y)
    }

    /// Locates the point `(x2 / 2, y2 / 2)`; lets callers probe midpoints exactly.
    pub fn locate2(&self, x2: Coord, y2: Coord) -> Location {
        let mut crossings = 0usize;
        for e in &self.edges {
            let s = &e.segment;
            let (along2, across2) = match s.axis {
                Axis::Horizontal => (x2, y2),
                Axis::Vertical => (y2, x2),
            };
            if across2 == 2 * s.fixed && 2 * s.span.lo <= along2 && along2 <= 2 * s.span.hi {
                return Location::Boundary;
            }
            if s.axis == Axis::Vertical && 2 * s.fixed > x2 && 2 * s.span.lo <= y2 && y2 < 2 * s.span.hi {
                crossings += 1;
            }
        }
        if crossings % 2 == 1 {
            Location::Interior
        } else {
            Location::Exterior
        }
    }

    pub fn in_closure(&self, p: Point) -> bool {
        self.locate(p) != Location::Exterior
    }

    /// Number of interior/exterior side changes along the closed segment.
    ///
    /// Boundary stretches are transparent: touching δP without changing side
    /// counts zero, and endpoints on δP count zero.
    pub fn transition_count(&self, seg: &OrthoSegment) -> usize {
        if seg.fixed % 2 != 0 {
            // Generic line: every perpendicular edge met strictly inside is a crossing.
            let perp = seg.axis.other();
            return self
                .edges
                .iter()
                .filter(|e| {
                    e.segment.axis == perp
                        && e.segment.span.strictly_contains(seg.fixed)
                        && seg.span.strictly_contains(e.segment.fixed)
                })
                .count();
        }
        let axis = seg.axis;
        let mut breaks: BTreeSet<Coord> = BTreeSet::new();
        breaks.insert(seg.span.lo);
        breaks.insert(seg.span.hi);
        for e in &self.edges {
            let s = &e.segment;
            if s.axis == axis {
                if s.fixed == seg.fixed {
                    for c in [s.span.lo, s.span.hi] {
                        if seg.span.contains(c) {
                            breaks.insert(c);
                        }
                    }
                }
            } else if s.span.contains(seg.fixed) && seg.span.contains(s.fixed) {
                breaks.insert(s.fixed);
            }
        }
        let probe = |along2: Coord| match axis {
            Axis::Horizontal => self.locate2(along2, 2 * seg.fixed),
            Axis::Vertical => self.locate2(2 * seg.fixed, along2),
        };
        let pts: Vec<Coord> = breaks.into_iter().collect();
        let mut states = Vec::with_capacity(2 * pts.len());
        for (i, &c) in pts.iter().enumerate() {
            states.push(probe(2 * c));
            if let Some(&d) = pts.get(i + 1) {
                states.push(probe(c + d));
            }
        }
        let mut last = None;
        let mut count = 0;
        for s in states.into_iter().filter(|s| *s != Location::Boundary) {
            if let Some(l) = last {
                if l != s {
                    count += 1;
                }
            }
            last = Some(s);
        }
        count
    }

    pub fn unit_grid(&self) -> UnitGrid {
        let xs: Vec<Coord> =
            self.edges_of(Axis::Vertical).map(|e| e.segment.fixed).collect::<BTreeSet<_>>().into_iter().collect();
        let ys: Vec<Coord> =
            self.edges_of(Axis::Horizontal).map(|e| e.segment.fixed).collect::<BTreeSet<_>>().into_iter().collect();
        let (w, h) = (xs.len() - 1, ys.len() - 1);
        let mut interior = vec![false; w * h];
        for j in 0..h {
            for i in 0..w {
                interior[j * w + i] = self.locate2(xs[i] + xs[i + 1], ys[j] + ys[j + 1]) == Location::Interior;
            }
        }
        UnitGrid { xs, ys, interior }
    }

    /// One component, no holes, and every horizontal line meets it in at most one interval.
    pub fn is_y_monotone(&self) -> bool {
        self.components.len() == 1 && self.hole_count() == 0 && self.rows_are_intervals()
    }

    /// Every horizontal line meets the closed interior in at most one interval.
    pub fn rows_are_intervals(&self) -> bool {
        let g = self.unit_grid();
        (0..g.rows()).all(|j| {
            let row: Vec<bool> = (0..g.cols()).map(|i| g.is_interior(i, j)).collect();
            let runs = row.windows(2).filter(|w| !w[0] && w[1]).count() + usize::from(row[0]);
            runs <= 1
        })
    }

    /// Builds a scene from the union of rectangles (internal units).
    ///
    /// Rectangles that touch along a positive-length stretch merge into one
    /// region; corner-only contact is rejected as a pinch.
    pub fn from_rect_union(rects: &[Rect]) -> Result<Scene, GeometryError> {
        if rects.is_empty() {
            return Err(GeometryError::Empty);
        }
        let xs: Vec<Coord> =
            rects.iter().flat_map(|r| [r.x.lo, r.x.hi]).collect::<BTreeSet<_>>().into_iter().collect();
        let ys: Vec<Coord> =
            rects.iter().flat_map(|r| [r.y.lo, r.y.hi]).collect::<BTreeSet<_>>().into_iter().collect();
        let (w, h) = (xs.len() - 1, ys.len() - 1);
        let mut covered = vec![false; w * h];
        for r in rects {
            let i0 = xs.binary_search(&r.x.lo).unwrap();
            let i1 = xs.binary_search(&r.x.hi).unwrap();
            let j0 = ys.binary_search(&r.y.lo).unwrap();
            let j1 = ys.binary_search(&r.y.hi).unwrap();
            for j in j0..j1 {
                for i in i0..i1 {
                    covered[j * w + i] = true;
                }
            }
        }
        let cell = |i: isize, j: isize| -> bool {
            i >= 0 && j >= 0 && (i as usize) < w && (j as usize) < h && covered[j as usize * w + i as usize]
        };
        // Directed boundary pieces with the region on the left.
        let mut next: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
        for j in 0..h as isize {
            for i in 0..w as isize {
                if !cell(i, j) {
                    continue;
                }
                let (iu, ju) = (i as usize, j as usize);
                if !cell(i, j - 1) {
                    next.entry((iu, ju)).or_default().push((iu + 1, ju));
                }
                if !cell(i + 1, j) {
                    next.entry((iu + 1, ju)).or_default().push((iu + 1, ju + 1));
                }
                if !cell(i, j + 1) {
                    next.entry((iu + 1, ju + 1)).or_default().push((iu, ju + 1));
                }
                if !cell(i - 1, j) {
                    next.entry((iu, ju + 1)).or_default().push((iu, ju));
                }
            }
        }
        if let Some((&(i, j), _)) = next.iter().find(|(_, v)| v.len() > 1) {
            return Err(GeometryError::PinchVertex { ring: 0, vertex: i * h + j });
        }
        let mut succ: BTreeMap<(usize, usize), (usize, usize)> =
            next.into_iter().map(|(k, v)| (k, v[0])).collect();
        let mut rings = Vec::new();
        while let Some((&start, _)) = succ.iter().next() {
            let mut pts = vec![start];
            let mut cur = succ.remove(&start).unwrap();
            while cur != start {
                pts.push(cur);
                cur = succ.remove(&cur).expect("boundary pieces form closed loops");
            }
            let verts: Vec<Point> = pts.iter().map(|&(i, j)| Point::new(xs[i], ys[j])).collect();
            rings.push(Ring::new(drop_collinear(&verts)));
        }
        // Outer rings are CCW; attach each hole to the innermost outer ring containing it.
        let (outers, holes): (Vec<Ring>, Vec<Ring>) = rings.into_iter().partition(|r| r.signed_area2() > 0);
        let mut comps: Vec<PolygonWithHoles> =
            outers.into_iter().map(|o| PolygonWithHoles { outer: o, holes: Vec::new() }).collect();
        for hole in holes {
            let probe = hole.vertices[0];
            let owner = comps
                .iter()
                .enumerate()
                .filter(|(_, c)| ring_locate(&c.outer, 2 * probe.x, 2 * probe.y) != Location::Exterior)
                .min_by_key(|(_, c)| c.outer.signed_area2())
                .map(|(i, _)| i)
                .ok_or(GeometryError::HoleOutside { ring: 0 })?;
            comps[owner].holes.push(hole);
        }
        comps.sort_by_key(|c| {
            let v = c.outer.vertices.iter().min().copied().unwrap();
            (v.y, v.x)
        });
        for c in comps.iter_mut() {
            c.outer = rotate_to_min(&c.outer);
            for h in c.holes.iter_mut() {
                *h = rotate_to_min(h);
            }
            c.holes.sort_by_key(|h| h.vertices[0]);
        }
        Scene::from_internal(comps)
    }
}

fn rotate_to_min(r: &Ring) -> Ring {
    let n = r.len();
    let k = (0..n).min_by_key(|&i| (r.vertices[i].y, r.vertices[i].x)).unwrap_or(0);
    Ring::new((0..n).map(|i| r.vertices[(i + k) % n]).collect())
}

fn drop_collinear(pts: &[Point]) -> Vec<Point> {
    let n = pts.len();
    (0..n)
        .filter(|&i| {
            let a = pts[(i + n - 1) % n];
            let b = pts[i];
            let c = pts[(i + 1) % n];
            !((a.x == b.x && b.x == c.x) || (a.y == b.y && b.y == c.y))
        })
        .map(|i| pts[i])
        .collect()
}

fn check_ring_shape(ri: usize, ring: &Ring) -> Result<(), GeometryError> {
    let n = ring.len();
    if n < 4 || n % 2 == 1 {
        return Err(GeometryError::OddVertexCount { ring: ri, count: n });
    }
    for (i, p) in ring.vertices.iter().enumerate() {
        if p.x.abs() >= COORD_LIMIT || p.y.abs() >= COORD_LIMIT {
            return Err(GeometryError::CoordinateOutOfRange { ring: ri, vertex: i });
        }
        if p.x % 2 != 0 || p.y % 2 != 0 {
            return Err(GeometryError::OddCoordinate { ring: ri, vertex: i });
        }
    }
    let mut prev_h = None;
    for (i, (a, b)) in ring.edges().enumerate() {
        let h = match (a.x == b.x, a.y == b.y) {
            (false, true) => true,
            (true, false) => false,
            _ => return Err(GeometryError::NonOrthogonalEdge { ring: ri, vertex: i }),
        };
        if prev_h == Some(h) {
            return Err(GeometryError::NonOrthogonalEdge { ring: ri, vertex: i });
        }
        prev_h = Some(h);
    }
    // Closing pair: last and first edge must also alternate (guaranteed by even count).
    Ok(())
}

fn check_boundary_crossings(rings: &[(usize, bool, Ring)]) -> Result<(), GeometryError> {
    struct E {
        seg: OrthoSegment,
        ring: usize,
        idx: usize,
        len: usize,
        comp: usize,
    }
    let mut all = Vec::new();
    for (ri, (ci, _, ring)) in rings.iter().enumerate() {
        for (i, (a, b)) in ring.edges().enumerate() {
            let seg = if a.y == b.y { OrthoSegment::horizontal(a.y, a.x, b.x) } else { OrthoSegment::vertical(a.x, a.y, b.y) };
            all.push(E { seg, ring: ri, idx: i, len: ring.len(), comp: *ci });
        }
    }
    for (p, e) in all.iter().enumerate() {
        for f in &all[p + 1..] {
            if !e.seg.intersects(&f.seg) {
                continue;
            }
            if e.ring == f.ring {
                let adjacent = (e.idx + 1) % e.len == f.idx || (f.idx + 1) % f.len == e.idx;
                if adjacent {
                    // Consecutive perpendicular edges share exactly their common vertex.
                    continue;
                }
                let single_vertex = touching_vertex(&e.seg, &f.seg);
                return Err(if single_vertex {
                    GeometryError::PinchVertex { ring: e.ring, vertex: e.idx }
                } else {
                    GeometryError::SelfIntersection { ring: e.ring, vertex: e.idx }
                });
            }
            if e.comp != f.comp {
                return Err(GeometryError::OverlappingComponents { ring: f.ring, vertex: f.idx });
            }
            return Err(if touching_vertex(&e.seg, &f.seg) {
                GeometryError::PinchVertex { ring: f.ring, vertex: f.idx }
            } else {
                GeometryError::SelfIntersection { ring: f.ring, vertex: f.idx }
            });
        }
    }
    Ok(())
}

/// The two segments meet in a single point that is an endpoint of both.
fn touching_vertex(a: &OrthoSegment, b: &OrthoSegment) -> bool {
    let ends_a = [a.start(), a.end()];
    let ends_b = [b.start(), b.end()];
    if a.axis == b.axis {
        a.span.lo == b.span.hi || a.span.hi == b.span.lo
    } else {
        let p = a.axis.point(b.fixed, a.fixed);
        ends_a.contains(&p) && ends_b.contains(&p)
    }
}

fn ring_locate(ring: &Ring, x2: Coord, y2: Coord) -> Location {
    let mut crossings = 0;
    for (a, b) in ring.edges() {
        let seg = if a.y == b.y { OrthoSegment::horizontal(a.y, a.x, b.x) } else { OrthoSegment::vertical(a.x, a.y, b.y) };
        let (along2, across2) = match seg.axis {
            Axis::Horizontal => (x2, y2),
            Axis::Vertical => (y2, x2),
        };
        if across2 == 2 * seg.fixed && 2 * seg.span.lo <= along2 && along2 <= 2 * seg.span.hi {
            return Location::Boundary;
        }
        if seg.axis == Axis::Vertical && 2 * seg.fixed > x2 && 2 * seg.span.lo <= y2 && y2 < 2 * seg.span.hi {
            crossings += 1;
        }
    }
    if crossings % 2 == 1 {
        Location::Interior
    } else {
        Location::Exterior
    }
}

fn check_nesting(rings: &[(usize, bool, Ring)]) -> Result<(), GeometryError> {
    // Boundaries are pairwise disjoint here, so one vertex decides containment.
    let inside = |outer: &Ring, probe: &Ring| {
        let p = probe.vertices[0];
        ring_locate(outer, 2 * p.x, 2 * p.y) == Location::Interior
    };
    for (ri, (ci, is_hole, ring)) in rings.iter().enumerate() {
        if *is_hole {
            let outer = rings.iter().find(|(c, h, _)| c == ci && !h).map(|r| &r.2).unwrap();
            if !inside(outer, ring) {
                return Err(GeometryError::HoleOutside { ring: ri });
            }
        }
    }
    for (ri, (ci, _, ring)) in rings.iter().enumerate() {
        for (rj, (cj, hj, other)) in rings.iter().enumerate() {
            if ri == rj {
                continue;
            }
            let nested = inside(other, ring);
            if *hj && ci == cj && nested {
                // Hole inside a hole of the same component, or outer inside own hole.
                return Err(GeometryError::OverlappingComponents { ring: ri, vertex: 0 });
            }
            if !*hj && ci != cj && nested {
                // Ring of one component inside another outer ring: allowed only within one of its holes.
                let in_hole = rings
                    .iter()
                    .any(|(c, h, hr)| *c == *cj && *h && inside(hr, ring));
                if !in_hole {
                    return Err(GeometryError::OverlappingComponents { ring: ri, vertex: 0 });
                }
            }
        }
    }
    Ok(())
}

/// Elementary cells between consecutive edge lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitGrid {
    pub xs: Vec<Coord>,
    pub ys: Vec<Coord>,
    interior: Vec<bool>,
}

impl UnitGrid {
    pub fn cols(&self) -> usize {
        self.xs.len() - 1
    }

    pub fn rows(&self) -> usize {
        self.ys.len() - 1
    }

    pub fn is_interior(&self, i: usize, j: usize) -> bool {
        self.interior[j * self.cols() + i]
    }

    pub fn cell_rect(&self, i: usize, j: usize) -> Rect {
        Rect::new(self.xs[i], self.ys[j], self.xs[i + 1], self.ys[j + 1])
    }

    pub fn interior_count(&self) -> usize {
        self.interior.iter().filter(|b| **b).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rect() -> Scene {
        validate_scene(&[(vec![(0, 0), (10, 0), (10, 6), (0, 6)], vec![])]).unwrap()
    }

    fn u() -> Scene {
        validate_scene(&[(vec![(0, 0), (12, 0), (12, 8), (8, 8), (8, 3), (4, 3), (4, 8), (0, 8)], vec![])]).unwrap()
    }

    fn p(x: Coord, y: Coord) -> Point {
        Point::new(2 * x, 2 * y)
    }

    fn hseg(y: Coord, x0: Coord, x1: Coord) -> OrthoSegment {
        OrthoSegment::horizontal(2 * y, 2 * x0, 2 * x1)
    }

    #[test]
    fn fixtures_validate() {
        let r = rect();
        assert_eq!(r.components().len(), 1);
        assert_eq!(r.hole_count(), 0);
        assert_eq!(u().vertex_count(), 8);
    }

    #[test]
    fn diagonal_edge_rejected() {
        let e = validate_scene(&[(vec![(0, 0), (5, 5), (0, 5)], vec![])]).unwrap_err();
        assert!(matches!(e, GeometryError::OddVertexCount { .. } | GeometryError::NonOrthogonalEdge { .. }));
        let e = validate_scene(&[(vec![(0, 0), (5, 5), (0, 5), (0, 2)], vec![])]).unwrap_err();
        assert!(matches!(e, GeometryError::NonOrthogonalEdge { ring: 0, vertex: 0 }));
    }

    #[test]
    fn odd_vertex_count_rejected() {
        let e = validate_scene(&[(vec![(0, 0), (4, 0), (4, 4), (2, 4), (0, 4)], vec![])]).unwrap_err();
        assert!(matches!(e, GeometryError::OddVertexCount { count: 5, .. }));
    }

    #[test]
    fn self_intersection_and_pinch() {
        // Figure-eight style bow: two squares sharing a corner in one ring.
        let pinch = vec![(0, 0), (2, 0), (2, 2), (4, 2), (4, 4), (2, 4), (2, 2), (0, 2)];
        let e = validate_scene(&[(pinch, vec![])]).unwrap_err();
        assert!(matches!(e, GeometryError::PinchVertex { .. } | GeometryError::SelfIntersection { .. }), "{e:?}");
        let cross = vec![(0, 0), (6, 0), (6, 4), (2, 4), (2, -2), (4, -2), (4, 2), (0, 2)];
        let e = validate_scene(&[(cross, vec![])]).unwrap_err();
        assert!(matches!(e, GeometryError::SelfIntersection { .. }), "{e:?}");
    }

    #[test]
    fn overlapping_components_rejected() {
        let a = (vec![(0, 0), (4, 0), (4, 4), (0, 4)], vec![]);
        let b = (vec![(2, 2), (6, 2), (6, 6), (2, 6)], vec![]);
        let e = validate_scene(&[a.clone(), b]).unwrap_err();
        assert!(matches!(e, GeometryError::OverlappingComponents { .. }));
        let inner = (vec![(1, 1), (2, 1), (2, 2), (1, 2)], vec![]);
        assert!(matches!(validate_scene(&[a, inner]).unwrap_err(), GeometryError::OverlappingComponents { .. }));
    }

    #[test]
    fn holes_and_orientation() {
        // Hole given CCW gets flipped to CW; outer given CW gets flipped to CCW.
        let outer = vec![(0, 0), (0, 10), (10, 10), (10, 0)];
        let hole = vec![(4, 4), (6, 4), (6, 6), (4, 6)];
        let s = validate_scene(&[(outer, vec![hole])]).unwrap();
        assert!(s.components()[0].outer.signed_area2() > 0);
        assert!(s.components()[0].holes[0].signed_area2() < 0);
        assert_eq!(s.locate(p(5, 5)), Location::Exterior);
        assert_eq!(s.locate(p(2, 5)), Location::Interior);
        let outside = vec![(20, 20), (22, 20), (22, 22), (20, 22)];
        let e = validate_scene(&[(vec![(0, 0), (10, 0), (10, 10), (0, 10)], vec![outside])]).unwrap_err();
        assert!(matches!(e, GeometryError::HoleOutside { .. }));
    }

    #[test]
    fn point_location_examples() {
        assert_eq!(rect().locate(p(5, 3)), Location::Interior);
        assert_eq!(rect().locate(p(10, 3)), Location::Boundary);
        assert_eq!(u().locate(p(6, 5)), Location::Exterior);
        assert_eq!(u().locate(p(6, 3)), Location::Boundary);
        assert_eq!(u().locate(p(-1, 3)), Location::Exterior);
    }

    #[test]
    fn transition_count_examples() {
        assert_eq!(rect().transition_count(&hseg(3, 2, 8)), 0);
        assert_eq!(u().transition_count(&hseg(6, 2, 10)), 2);
        assert_eq!(u().transition_count(&hseg(6, 2, 6)), 1);
        // Along the notch floor: boundary only, no side change.
        assert_eq!(u().transition_count(&hseg(3, 2, 10)), 0);
        // Along the outer bottom edge, starting outside.
        assert_eq!(u().transition_count(&hseg(0, -2, 14)), 0);
        // Endpoint on the boundary counts nothing.
        assert_eq!(u().transition_count(&hseg(6, 2, 4)), 0);
    }

    #[test]
    fn unit_grid_examples() {
        let g = rect().unit_grid();
        assert_eq!((g.cols(), g.rows(), g.interior_count()), (1, 1, 1));
        let g = u().unit_grid();
        assert_eq!(g.xs, vec![0, 8, 16, 24]);
        assert_eq!(g.ys, vec![0, 6, 16]);
        assert_eq!(g.interior_count(), 5);
        assert!(!g.is_interior(1, 1));
        let two = validate_scene(&[
            (vec![(0, 0), (2, 0), (2, 2), (0, 2)], vec![]),
            (vec![(4, 0), (6, 0), (6, 2), (4, 2)], vec![]),
        ])
        .unwrap();
        let g = two.unit_grid();
        assert_eq!(g.cols(), 3);
        assert!(g.is_interior(0, 0) && !g.is_interior(1, 0) && g.is_interior(2, 0));
    }

    #[test]
    fn monotonicity() {
        assert!(rect().is_y_monotone());
        assert!(!u().is_y_monotone());
        let two = validate_scene(&[
            (vec![(0, 0), (2, 0), (2, 2), (0, 2)], vec![]),
            (vec![(4, 0), (6, 0), (6, 2), (4, 2)], vec![]),
        ])
        .unwrap();
        assert!(!two.is_y_monotone());
        let stair = validate_scene(&[(vec![(0, 0), (4, 0), (4, 2), (6, 2), (6, 4), (0, 4)], vec![])]).unwrap();
        assert!(stair.is_y_monotone());
    }

    #[test]
    fn rect_union_traces_rings() {
        let s = Scene::from_rect_union(&[Rect::new(0, 0, 24, 6), Rect::new(0, 6, 8, 16), Rect::new(16, 6, 24, 16)])
            .unwrap();
        assert_eq!(s, u());
        let ring = Scene::from_rect_union(&[
            Rect::new(0, 0, 6, 2),
            Rect::new(0, 4, 6, 6),
            Rect::new(0, 2, 2, 4),
            Rect::new(4, 2, 6, 4),
        ])
        .unwrap();
        assert_eq!(ring.hole_count(), 1);
        assert!(Scene::from_rect_union(&[Rect::new(0, 0, 2, 2), Rect::new(2, 2, 4, 4)]).is_err());
    }
}

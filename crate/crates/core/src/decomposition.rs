//! Slice/cross discretization of a scene for a given transmitter strength k.
//!
//! Horizontal partition-segments are polygon edges extended along their line
//! through up to k/2 walls; they cut the interior into horizontal slices.
//! Each slice gets a slice-segment through an odd anchor line, extended by the
//! same wall rule. Crosses are the intersections of horizontal and vertical
//! slice-segments, one per pixel (horizontal slice ∩ vertical slice).

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Axis, Coord, Interval, Location, OrthoSegment, Point, Rect, Scene};
use crate::hitting::HittingInstance;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompositionError {
    #[error("transmitter strength k = {0} must be even and non-negative")]
    OddK(usize),
    #[error("{orientation:?} face with bounding box {bbox:?} is not a rectangle")]
    NonRectangularFace { orientation: Axis, bbox: Rect },
    #[error("cross {point:?} is not strictly inside its pixel {pixel:?}")]
    CrossOutsidePixel { point: Point, pixel: Rect },
}

/// Which guard-segment axes a problem admits.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Orientation {
    Horizontal,
    Vertical,
    #[default]
    Both,
}

impl Orientation {
    pub fn admits(self, axis: Axis) -> bool {
        match self {
            Orientation::Horizontal => axis == Axis::Horizontal,
            Orientation::Vertical => axis == Axis::Vertical,
            Orientation::Both => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PartitionSegment {
    pub segment: OrthoSegment,
    /// Index into [`Scene::edges`].
    pub origin_edge: usize,
    pub interior_side: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Slice {
    pub id: usize,
    pub orientation: Axis,
    pub rect: Rect,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SliceSegment {
    pub slice: usize,
    pub segment: OrthoSegment,
}

/// Maximal axis-parallel segment in the closure of the scene through one or
/// more collinear polygon edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GuardSegment {
    pub id: usize,
    pub segment: OrthoSegment,
    pub origin_edges: Vec<usize>,
}

impl GuardSegment {
    pub fn axis(&self) -> Axis {
        self.segment.axis
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cross {
    pub id: usize,
    pub point: Point,
    /// Horizontal slice id and its slice-segment.
    pub h_slice: usize,
    pub h_support: OrthoSegment,
    /// Vertical slice id and its slice-segment.
    pub v_slice: usize,
    pub v_support: OrthoSegment,
    pub pixel: Rect,
}

impl Cross {
    /// Support perpendicular to a guard of the given axis.
    pub fn support_perpendicular_to(&self, axis: Axis) -> &OrthoSegment {
        match axis {
            Axis::Horizontal => &self.v_support,
            Axis::Vertical => &self.h_support,
        }
    }
}

/// Extends `start` along the line `line + offset` through up to k/2 walls in
/// each direction.
///
/// The walk covers interior stretches 0..=k/2 (stretch 0 contains `start`)
/// and stops on the edge closing the last covered stretch. With fewer
/// stretches it stops at the last interior-approached edge; if `start` is not
/// inside any stretch it is returned unchanged. `offset` is ±1 to probe the
/// side of an even edge line (no edge line lies within one internal unit), or
/// 0 for odd anchor lines.
pub fn extend_across_walls(
    scene: &Scene,
    axis: Axis,
    line: Coord,
    offset: i8,
    start: Interval,
    k: usize,
) -> Interval {
    let probe = line + offset as Coord;
    let crossings = crossings_on_line(scene, axis, probe);
    let stretches = crossings.len() / 2;
    let Some(t0) = (0..stretches)
        .find(|&t| Interval::new(crossings[2 * t], crossings[2 * t + 1]).contains_interval(&start))
    else {
        return start;
    };
    let walls = k / 2;
    let left = t0.saturating_sub(walls);
    let right = (t0 + walls).min(stretches - 1);
    Interval::new(crossings[2 * left], crossings[2 * right + 1])
}

/// Sorted coordinates where a generic (odd) line crosses the boundary.
fn crossings_on_line(scene: &Scene, axis: Axis, probe: Coord) -> Vec<Coord> {
    debug_assert!(probe % 2 != 0, "probe lines must avoid edge lines");
    let mut xs: Vec<Coord> = scene
        .edges_of(axis.other())
        .filter(|e| e.segment.span.strictly_contains(probe))
        .map(|e| e.segment.fixed)
        .collect();
    xs.sort_unstable();
    xs
}

pub fn partition_segments(scene: &Scene, k: usize, axis: Axis) -> Vec<PartitionSegment> {
    scene
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| e.segment.axis == axis)
        .map(|(i, e)| PartitionSegment {
            segment: OrthoSegment::new(
                axis,
                e.segment.fixed,
                extend_across_walls(scene, axis, e.segment.fixed, e.interior_side, e.segment.span, k),
            ),
            origin_edge: i,
            interior_side: e.interior_side,
        })
        .collect()
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), rank: vec![0; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

/// Faces of the interior cut by the partition-segments of `orientation`.
pub fn build_slices(scene: &Scene, k: usize, orientation: Axis) -> Result<Vec<Slice>, DecompositionError> {
    let cuts = partition_segments(scene, k, orientation);
    let mut cut_spans: BTreeMap<Coord, Vec<Interval>> = BTreeMap::new();
    for c in &cuts {
        cut_spans.entry(c.segment.fixed).or_default().push(c.segment.span);
    }
    let grid = scene.unit_grid();
    let (w, h) = (grid.cols(), grid.rows());
    let mut uf = UnionFind::new(w * h);
    let blocked = |line: Coord, cell: Interval| {
        cut_spans.get(&line).is_some_and(|spans| spans.iter().any(|s| s.contains_interval(&cell)))
    };
    for j in 0..h {
        for i in 0..w {
            if !grid.is_interior(i, j) {
                continue;
            }
            if i + 1 < w && grid.is_interior(i + 1, j) {
                let free = orientation == Axis::Horizontal
                    || !blocked(grid.xs[i + 1], Interval::new(grid.ys[j], grid.ys[j + 1]));
                if free {
                    uf.union(j * w + i, j * w + i + 1);
                }
            }
            if j + 1 < h && grid.is_interior(i, j + 1) {
                let free = orientation == Axis::Vertical
                    || !blocked(grid.ys[j + 1], Interval::new(grid.xs[i], grid.xs[i + 1]));
                if free {
                    uf.union(j * w + i, (j + 1) * w + i);
                }
            }
        }
    }
    // root -> (cell count, i0, j0, i1, j1)
    let mut faces: BTreeMap<usize, (usize, usize, usize, usize, usize)> = BTreeMap::new();
    for j in 0..h {
        for i in 0..w {
            if !grid.is_interior(i, j) {
                continue;
            }
            let r = uf.find(j * w + i);
            let f = faces.entry(r).or_insert((0, i, j, i, j));
            f.0 += 1;
            f.1 = f.1.min(i);
            f.2 = f.2.min(j);
            f.3 = f.3.max(i);
            f.4 = f.4.max(j);
        }
    }
    let mut rects = Vec::with_capacity(faces.len());
    for (count, i0, j0, i1, j1) in faces.into_values() {
        let rect = Rect::new(grid.xs[i0], grid.ys[j0], grid.xs[i1 + 1], grid.ys[j1 + 1]);
        if count != (i1 - i0 + 1) * (j1 - j0 + 1) {
            return Err(DecompositionError::NonRectangularFace { orientation, bbox: rect });
        }
        rects.push(rect);
    }
    rects.sort_by_key(|r| (r.y.lo, r.x.lo, r.y.hi, r.x.hi));
    Ok(rects.into_iter().enumerate().map(|(id, rect)| Slice { id, orientation, rect }).collect())
}

/// Odd coordinate nearest the midpoint of `iv`, strictly inside it.
pub fn odd_anchor(iv: Interval) -> Coord {
    let c = (iv.lo + iv.hi) / 2;
    if c % 2 == 0 {
        c - 1
    } else {
        c
    }
}

pub fn slice_segment(scene: &Scene, slice: &Slice, k: usize) -> SliceSegment {
    let axis = slice.orientation;
    let anchor = odd_anchor(slice.rect.extent(axis.other()));
    let span = extend_across_walls(scene, axis, anchor, 0, slice.rect.extent(axis), k);
    SliceSegment { slice: slice.id, segment: OrthoSegment::new(axis, anchor, span) }
}

/// Maximal extension of `start` along `line` that stays in the closure.
fn extend_in_closure(scene: &Scene, axis: Axis, line: Coord, start: Interval) -> Interval {
    let mut breaks: BTreeSet<Coord> = BTreeSet::new();
    for e in scene.edges() {
        let s = &e.segment;
        if s.axis == axis {
            if s.fixed == line {
                breaks.insert(s.span.lo);
                breaks.insert(s.span.hi);
            }
        } else if s.span.contains(line) {
            breaks.insert(s.fixed);
        }
    }
    let closed = |a: Coord, b: Coord| {
        let loc = match axis {
            Axis::Horizontal => scene.locate2(a + b, 2 * line),
            Axis::Vertical => scene.locate2(2 * line, a + b),
        };
        loc != Location::Exterior
    };
    let mut hi = start.hi;
    for &b in breaks.range(start.hi + 1..) {
        if !closed(hi, b) {
            break;
        }
        hi = b;
    }
    let mut lo = start.lo;
    for &b in breaks.range(..start.lo).rev() {
        if !closed(b, lo) {
            break;
        }
        lo = b;
    }
    Interval::new(lo, hi)
}

/// Γ restricted by `filter`, deduplicated, sorted by (axis, fixed, lo, hi).
pub fn guard_segments(scene: &Scene, filter: Orientation) -> Vec<GuardSegment> {
    let mut merged: BTreeMap<OrthoSegment, Vec<usize>> = BTreeMap::new();
    for (i, e) in scene.edges().iter().enumerate() {
        let axis = e.segment.axis;
        if !filter.admits(axis) {
            continue;
        }
        let span = extend_in_closure(scene, axis, e.segment.fixed, e.segment.span);
        merged.entry(OrthoSegment::new(axis, e.segment.fixed, span)).or_default().push(i);
    }
    merged
        .into_iter()
        .enumerate()
        .map(|(id, (segment, origin_edges))| GuardSegment { id, segment, origin_edges })
        .collect()
}

/// The full discretization for one k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub k: usize,
    pub h_partition: Vec<PartitionSegment>,
    pub v_partition: Vec<PartitionSegment>,
    pub h_slices: Vec<Slice>,
    pub v_slices: Vec<Slice>,
    /// Indexed by slice id.
    pub h_segments: Vec<SliceSegment>,
    pub v_segments: Vec<SliceSegment>,
    pub guards: Vec<GuardSegment>,
    pub crosses: Vec<Cross>,
}

impl Decomposition {
    pub fn build(scene: &Scene, k: usize) -> Result<Self, DecompositionError> {
        if !k.is_multiple_of(2) {
            return Err(DecompositionError::OddK(k));
        }
        let h_slices = build_slices(scene, k, Axis::Horizontal)?;
        let v_slices = build_slices(scene, k, Axis::Vertical)?;
        let h_segments: Vec<_> = h_slices.iter().map(|s| slice_segment(scene, s, k)).collect();
        let v_segments: Vec<_> = v_slices.iter().map(|s| slice_segment(scene, s, k)).collect();
        let crosses = crosses_from(&h_slices, &v_slices, &h_segments, &v_segments)?;
        Ok(Decomposition {
            k,
            h_partition: partition_segments(scene, k, Axis::Horizontal),
            v_partition: partition_segments(scene, k, Axis::Vertical),
            h_slices,
            v_slices,
            h_segments,
            v_segments,
            guards: guard_segments(scene, Orientation::Both),
            crosses,
        })
    }

    /// Pixels in cross order.
    pub fn pixels(&self) -> impl Iterator<Item = Rect> + '_ {
        self.crosses.iter().map(|c| c.pixel)
    }
}

pub fn build_crosses(scene: &Scene, k: usize) -> Result<Vec<Cross>, DecompositionError> {
    Ok(Decomposition::build(scene, k)?.crosses)
}

fn crosses_from(
    h_slices: &[Slice],
    v_slices: &[Slice],
    h_segments: &[SliceSegment],
    v_segments: &[SliceSegment],
) -> Result<Vec<Cross>, DecompositionError> {
    let mut crosses = Vec::new();
    for hs in h_slices {
        for vs in v_slices {
            let Some(pixel) = hs.rect.intersection(&vs.rect) else { continue };
            let h_support = h_segments[hs.id].segment;
            let v_support = v_segments[vs.id].segment;
            let point = Point::new(v_support.fixed, h_support.fixed);
            if !pixel.strictly_contains(point) || !h_support.contains_point(point) || !v_support.contains_point(point) {
                return Err(DecompositionError::CrossOutsidePixel { point, pixel });
            }
            crosses.push(Cross { id: 0, point, h_slice: hs.id, h_support, v_slice: vs.id, v_support, pixel });
        }
    }
    crosses.sort_by_key(|c| (c.point.y, c.point.x));
    for (i, c) in crosses.iter_mut().enumerate() {
        c.id = i;
    }
    Ok(crosses)
}

/// Cross-hitting instance over the guards admitted by `filter`.
pub fn build_instance(scene: &Scene, k: usize, filter: Orientation) -> Result<HittingInstance, DecompositionError> {
    let d = Decomposition::build(scene, k)?;
    Ok(HittingInstance::from_decomposition(&d, filter))
}

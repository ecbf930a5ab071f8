//! Gadget layout, the corner walk that connects consecutive gadgets, and the
//! guard-count bookkeeping.
//!
//! Layout coordinates are input units of the emitted scene. Bar and strip
//! x-coordinates are scaled by [`X_SCALE`]; gadgets are stacked bottom to top
//! with a uniform gap, so the input y-coordinates only fix the order.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::graph::{subdivide_edge_twice, BarRepresentation, GraphEdge, GraphInstance, VertexId};
use super::ReductionError;
use crate::geometry::{Coord, Interval, Rect, Scene};

pub const X_SCALE: Coord = 16;
const BOX_HEIGHT: Coord = 4;
const CHANNEL_WIDTH: Coord = 2;
const CHANNEL_HEIGHT: Coord = 2;
const CHANNEL_INSET: Coord = 2;
const EDGE_BOX: Coord = 2;
/// Half-width added on each side of a line-of-sight column for the bars of
/// vertices created by subdivision.
const SUBDIVISION_MARGIN: Coord = 4;
const CONNECTOR_BOX_HEIGHT: Coord = 2;
const CONNECTOR_MIN_WIDTH: Coord = 4;
const ZIG: Coord = 1;

pub fn vertex_gadget_height(k: usize) -> Coord {
    let k = k as Coord;
    (k + 1) * BOX_HEIGHT + k * CHANNEL_HEIGHT
}

/// Vertical distance between consecutive gadgets.
pub fn gadget_gap(k: usize) -> Coord {
    3 * k as Coord + 10
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    fn sign(self) -> Coord {
        match self {
            Side::Left => -1,
            Side::Right => 1,
        }
    }

    fn of(self, iv: Interval) -> Coord {
        match self {
            Side::Left => iv.lo,
            Side::Right => iv.hi,
        }
    }
}

/// `S`: the first channel is on the right, so the zig-zag runs from the
/// bottom-left to the top-right corner. `Z` is the mirror image.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Shape {
    S,
    Z,
}

impl Shape {
    fn first_channel(self) -> Side {
        match self {
            Shape::S => Side::Right,
            Shape::Z => Side::Left,
        }
    }

    fn with_first_channel(side: Side) -> Shape {
        match side {
            Side::Right => Shape::S,
            Side::Left => Shape::Z,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum GadgetKind {
    Vertex { id: VertexId },
    Edge { u: VertexId, v: VertexId },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gadget {
    pub kind: GadgetKind,
    pub x: Interval,
    pub y: Interval,
    /// Vertex gadgets only.
    pub shape: Option<Shape>,
    /// Bottom to top.
    pub boxes: Vec<Rect>,
    pub channels: Vec<Rect>,
    /// Index into `boxes` of the (k/2+1)-th box; vertex gadgets only.
    pub middle_box: Option<usize>,
    /// Bottom corner where the incoming connector attaches.
    pub entry: Option<Side>,
    /// Top corner where the outgoing connector attaches.
    pub exit: Option<Side>,
    /// Index into the subdivision log for gadgets created by subdivision.
    pub subdivision: Option<usize>,
}

impl Gadget {
    pub fn rects(&self) -> impl Iterator<Item = &Rect> + '_ {
        self.boxes.iter().chain(&self.channels)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Connector {
    /// Gadget indices.
    pub lower: usize,
    pub upper: usize,
    pub from: Side,
    pub to: Side,
    pub shape: Shape,
    pub boxes: Vec<Rect>,
    pub channels: Vec<Rect>,
    /// Three steps below the bottom box, then three above the top box.
    pub zigzags: Vec<Rect>,
    pub middle_box: usize,
}

impl Connector {
    pub fn rects(&self) -> impl Iterator<Item = &Rect> + '_ {
        self.boxes.iter().chain(&self.channels).chain(&self.zigzags)
    }
}

/// Vertical column between an edge gadget and one endpoint gadget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineOfSight {
    pub edge: GraphEdge,
    pub edge_gadget: usize,
    pub vertex_gadget: usize,
    pub x: Interval,
    pub y: Interval,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subdivision {
    /// The edge as it was before this subdivision.
    pub edge: GraphEdge,
    /// New path `lower, a, b, upper`, with `lower` below the original edge gadget.
    pub lower: VertexId,
    pub a: VertexId,
    pub b: VertexId,
    pub upper: VertexId,
    /// Gadgets bounding the gap the new gadgets were placed in.
    pub below: GadgetKind,
    pub above: GadgetKind,
    pub column: Interval,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Accounting {
    pub n: usize,
    pub m: usize,
    /// Single subdivisions; each crossed line-of-sight adds two.
    pub n_s: usize,
    pub n_prime: usize,
    pub m_prime: usize,
    /// Connector gadgets.
    pub n_c: usize,
    /// Added to the vertex cover size of the input graph: N_s / 2.
    pub kprime_offset: usize,
    /// Gadgets in bottom-to-top order.
    pub slots: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionPlan {
    pub k: usize,
    pub connected: bool,
    pub graph: GraphInstance,
    pub bars: BarRepresentation,
    /// The graph after all subdivisions.
    pub subdivided: GraphInstance,
    /// Bottom to top.
    pub gadgets: Vec<Gadget>,
    pub connectors: Vec<Connector>,
    pub lines_of_sight: Vec<LineOfSight>,
    pub subdivisions: Vec<Subdivision>,
    pub accounting: Accounting,
}

impl ReductionPlan {
    /// Edge-gadget boxes in internal units.
    pub fn edge_boxes(&self) -> Vec<Rect> {
        self.gadgets
            .iter()
            .filter(|g| matches!(g.kind, GadgetKind::Edge { .. }))
            .flat_map(|g| g.boxes.iter().map(|r| r.scaled(2)))
            .collect()
    }

    /// Vertex gadgets with their rectangles in internal units.
    pub fn vertex_gadgets(&self) -> impl Iterator<Item = (&Gadget, Vec<Rect>)> + '_ {
        self.gadgets
            .iter()
            .filter(|g| matches!(g.kind, GadgetKind::Vertex { .. }))
            .map(|g| (g, g.rects().map(|r| r.scaled(2)).collect()))
    }

    /// All rectangles of the polygon in layout units.
    pub fn rects(&self) -> Vec<Rect> {
        let mut out: Vec<Rect> = self.gadgets.iter().flat_map(|g| g.rects().copied()).collect();
        out.extend(self.connectors.iter().flat_map(|c| c.rects().copied()));
        out
    }

    pub fn scene(&self) -> Result<Scene, ReductionError> {
        let rects: Vec<Rect> = self.rects().iter().map(|r| r.scaled(2)).collect();
        Ok(Scene::from_rect_union(&rects)?)
    }
}

/// Gadget before vertical placement.
#[derive(Clone, Debug)]
struct Slot {
    kind: GadgetKind,
    x: Interval,
    entry: Option<Side>,
    exit: Option<Side>,
    subdivision: Option<usize>,
    /// Takes the exit corner that suits the next connection best instead of
    /// the diagonally opposite one.
    free_exit: bool,
}

/// For k > 2 an edge gadget is a stack of k/2 boxes, so that a vertical line
/// through it crosses the boundary k times; thin channels at its ends join the
/// boxes and leave a channel-free column in between.
fn edge_boxes(k: usize) -> usize {
    (k / 2).max(1)
}

fn edge_column(k: usize, strip: Interval) -> Interval {
    let c = X_SCALE * (strip.lo + strip.hi) / 2;
    let half = if edge_boxes(k) == 1 { EDGE_BOX / 2 } else { EDGE_BOX / 2 + 2 * ZIG };
    Interval::new(c - half, c + half)
}

fn initial_slots(k: usize, g: &GraphInstance, bars: &BarRepresentation) -> Vec<Slot> {
    // Twice the y-coordinate: bar level for vertices, midpoint for edges.
    let mut keyed: Vec<((Coord, u8, usize), Slot)> = Vec::new();
    for (i, &v) in g.vertices.iter().enumerate() {
        let b = bars.bars[&v];
        let x = Interval::new(X_SCALE * b.x.lo, X_SCALE * b.x.hi);
        keyed.push(((2 * b.y, 0, i), slot(GadgetKind::Vertex { id: v }, x)));
    }
    for (i, e) in g.edges.iter().enumerate() {
        let key = bars.bars[&e.u].y + bars.bars[&e.v].y;
        keyed.push(((key, 1, i), slot(GadgetKind::Edge { u: e.u, v: e.v }, edge_column(k, bars.strips[e]))));
    }
    keyed.sort_by_key(|(k, _)| *k);
    keyed.into_iter().map(|(_, s)| s).collect()
}

fn slot(kind: GadgetKind, x: Interval) -> Slot {
    Slot { kind, x, entry: None, exit: None, subdivision: None, free_exit: false }
}

/// A line-of-sight in slot-index form.
#[derive(Copy, Clone, Debug)]
struct Sight {
    edge: GraphEdge,
    edge_slot: usize,
    vertex_slot: usize,
    x: Interval,
}

impl Sight {
    fn spans_gap(&self, i: usize) -> bool {
        self.edge_slot.min(self.vertex_slot) <= i && i < self.edge_slot.max(self.vertex_slot)
    }
}

fn sights(slots: &[Slot]) -> Vec<Sight> {
    let index: BTreeMap<VertexId, usize> = slots
        .iter()
        .enumerate()
        .filter_map(|(i, s)| match s.kind {
            GadgetKind::Vertex { id } => Some((id, i)),
            GadgetKind::Edge { .. } => None,
        })
        .collect();
    let mut out = Vec::new();
    for (i, s) in slots.iter().enumerate() {
        if let GadgetKind::Edge { u, v } = s.kind {
            for w in [u, v] {
                out.push(Sight { edge: GraphEdge::new(u, v), edge_slot: i, vertex_slot: index[&w], x: s.x });
            }
        }
    }
    out
}

/// Lines-of-sight through gap `i` crossed by the segment between corners at
/// `x1` and `x2`, nearest to `x1` first.
fn crossed(sights: &[Sight], i: usize, x1: Coord, x2: Coord) -> Vec<Sight> {
    let span = Interval::new(x1, x2);
    let mut out: Vec<Sight> = sights.iter().copied().filter(|s| s.spans_gap(i) && s.x.overlaps(&span)).collect();
    out.sort_by_key(|s| ((s.x.lo + s.x.hi) - 2 * x1).abs());
    out
}

/// Bottom corner of `next` with the fewest crossings from `x1` (ties: left).
fn best_entry(sights: &[Sight], i: usize, x1: Coord, next: &Slot) -> (Side, Vec<Sight>) {
    let left = crossed(sights, i, x1, next.x.lo);
    let right = crossed(sights, i, x1, next.x.hi);
    if right.len() < left.len() {
        (Side::Right, right)
    } else {
        (Side::Left, left)
    }
}

/// Parses the slots bottom to top, fixing entry and exit corners. Whenever the
/// chosen connection crosses lines-of-sight, each crossed edge is subdivided
/// twice and its four new gadgets are inserted along the crossed column.
fn walk(
    mut graph: GraphInstance,
    mut slots: Vec<Slot>,
) -> Result<(GraphInstance, Vec<Slot>, Vec<Subdivision>), ReductionError> {
    let mut log: Vec<Subdivision> = Vec::new();
    slots[0].entry = Some(Side::Left);
    slots[0].exit = Some(Side::Right);
    let mut i = 0;
    while i + 1 < slots.len() {
        let x1 = slots[i].exit.expect("parsed slot has an exit").of(slots[i].x);
        let sg = sights(&slots);
        let (side, hits) = best_entry(&sg, i, x1, &slots[i + 1]);
        if hits.is_empty() {
            let exit = if slots[i + 1].free_exit && i + 2 < slots.len() {
                let cost = |top: Side| best_entry(&sg, i + 1, top.of(slots[i + 1].x), &slots[i + 2]).1.len();
                if cost(Side::Right) < cost(Side::Left) {
                    Side::Right
                } else {
                    Side::Left
                }
            } else {
                side.other()
            };
            slots[i + 1].entry = Some(side);
            slots[i + 1].exit = Some(exit);
            i += 1;
            continue;
        }
        if slots[i + 1].subdivision.is_some() {
            return Err(ReductionError::RoutingFailed(format!(
                "connection into subdivision gadget {:?} crosses {} lines-of-sight",
                slots[i + 1].kind,
                hits.len()
            )));
        }
        let (below, above) = (slots[i].kind, slots[i + 1].kind);
        let mut inserted = Vec::new();
        for s in hits {
            let GadgetKind::Edge { u, v } = slots[s.edge_slot].kind else { unreachable!("sight starts at an edge gadget") };
            let lower_is_vertex = s.vertex_slot < s.edge_slot;
            let named = |id: VertexId| match slots[s.vertex_slot].kind {
                GadgetKind::Vertex { id: w } => w == id,
                GadgetKind::Edge { .. } => false,
            };
            let (far, near) = if named(u) { (v, u) } else { (u, v) };
            let (lower, upper) = if lower_is_vertex { (near, far) } else { (far, near) };
            let (g2, a, b) = subdivide_edge_twice(&graph, lower, upper)?;
            graph = g2;
            let id = log.len();
            log.push(Subdivision {
                edge: GraphEdge::new(u, v),
                lower,
                a,
                b,
                upper,
                below,
                above,
                column: s.x,
            });
            let bar = Interval::new(s.x.lo - SUBDIVISION_MARGIN, s.x.hi + SUBDIVISION_MARGIN);
            let vx = |w: VertexId| slot(GadgetKind::Vertex { id: w }, bar);
            let ex = |p: VertexId, q: VertexId| {
                let e = GraphEdge::new(p, q);
                slot(GadgetKind::Edge { u: e.u, v: e.v }, s.x)
            };
            let (mut group, relabel) = if lower_is_vertex {
                (vec![ex(lower, a), vx(a), ex(a, b), vx(b)], GraphEdge::new(b, upper))
            } else {
                (vec![vx(a), ex(a, b), vx(b), ex(b, upper)], GraphEdge::new(lower, a))
            };
            slots[s.edge_slot].kind = GadgetKind::Edge { u: relabel.u, v: relabel.v };
            for g in group.iter_mut() {
                g.subdivision = Some(id);
            }
            group.last_mut().expect("four gadgets").free_exit = true;
            inserted.extend(group);
        }
        slots.splice(i + 1..i + 1, inserted);
    }
    Ok((graph, slots, log))
}

fn channel_x(x: Interval, side: Side, columns: &[Interval]) -> Result<Interval, ReductionError> {
    let blocked = |c: &Interval| columns.iter().any(|col| col.overlaps(c));
    let (mut c, step) = match side {
        Side::Left => (Interval::new(x.lo + CHANNEL_INSET, x.lo + CHANNEL_INSET + CHANNEL_WIDTH), 1),
        Side::Right => (Interval::new(x.hi - CHANNEL_INSET - CHANNEL_WIDTH, x.hi - CHANNEL_INSET), -1),
    };
    while blocked(&c) {
        c = Interval::new(c.lo + step, c.hi + step);
        if c.lo <= x.lo || c.hi >= x.hi {
            return Err(ReductionError::RoutingFailed(format!("no room for a channel in bar {x:?}")));
        }
    }
    Ok(c)
}

fn vertex_gadget(k: usize, s: &Slot, y0: Coord, columns: &[Interval]) -> Result<Gadget, ReductionError> {
    let entry = s.entry.unwrap_or(Side::Left);
    let shape = Shape::with_first_channel(entry.other());
    let pitch = BOX_HEIGHT + CHANNEL_HEIGHT;
    let boxes = (0..=k as Coord).map(|j| Rect::new(s.x.lo, y0 + j * pitch, s.x.hi, y0 + j * pitch + BOX_HEIGHT)).collect();
    let mut channels = Vec::with_capacity(k);
    for j in 1..=k as Coord {
        let side = if j % 2 == 1 { shape.first_channel() } else { shape.first_channel().other() };
        let cx = channel_x(s.x, side, columns)?;
        channels.push(Rect::new(cx.lo, y0 + j * pitch - CHANNEL_HEIGHT, cx.hi, y0 + j * pitch));
    }
    Ok(Gadget {
        kind: s.kind,
        x: s.x,
        y: Interval::new(y0, y0 + vertex_gadget_height(k)),
        shape: Some(shape),
        boxes,
        channels,
        middle_box: Some(k / 2),
        entry: s.entry,
        exit: s.exit,
        subdivision: s.subdivision,
    })
}

fn edge_gadget(k: usize, s: &Slot, y0: Coord) -> Gadget {
    let pitch = EDGE_BOX + ZIG;
    let count = edge_boxes(k) as Coord;
    let boxes = (0..count).map(|j| Rect::new(s.x.lo, y0 + j * pitch, s.x.hi, y0 + j * pitch + EDGE_BOX)).collect();
    let channels = (1..count)
        .map(|j| {
            let cx = if j % 2 == 1 { Interval::new(s.x.hi - ZIG, s.x.hi) } else { Interval::new(s.x.lo, s.x.lo + ZIG) };
            Rect::new(cx.lo, y0 + j * pitch - ZIG, cx.hi, y0 + j * pitch)
        })
        .collect();
    Gadget {
        kind: s.kind,
        x: s.x,
        y: Interval::new(y0, y0 + count * pitch - ZIG),
        shape: None,
        boxes,
        channels,
        middle_box: None,
        entry: s.entry,
        exit: s.exit,
        subdivision: s.subdivision,
    }
}

/// Stacks the slots bottom to top with a uniform gap.
fn place(k: usize, slots: &[Slot]) -> Result<Vec<Gadget>, ReductionError> {
    let columns: Vec<Interval> =
        slots.iter().filter(|s| matches!(s.kind, GadgetKind::Edge { .. })).map(|s| s.x).collect();
    let mut y = 0;
    let mut out = Vec::with_capacity(slots.len());
    for s in slots {
        let g = match s.kind {
            GadgetKind::Vertex { .. } => vertex_gadget(k, s, y, &columns)?,
            GadgetKind::Edge { .. } => edge_gadget(k, s, y),
        };
        y = g.y.hi + gadget_gap(k);
        out.push(g);
    }
    Ok(out)
}

/// A vertex-gadget-like stack of k+1 thin boxes in the gap between `lower`
/// and `upper`, attached to their corners through three-step zig-zags. The
/// first channel stretches to fill the gap.
fn connector(k: usize, gadgets: &[Gadget], li: usize) -> Result<Connector, ReductionError> {
    let (lower, upper) = (&gadgets[li], &gadgets[li + 1]);
    let from = lower.exit.unwrap_or(Side::Right);
    let to = upper.entry.unwrap_or(Side::Left);
    let (x1, y1) = (from.of(lower.x), lower.y.hi);
    let (x2, y2) = (to.of(upper.x), upper.y.lo);
    let (s1, s2) = (from.sign() * ZIG, to.sign() * ZIG);
    let zigzags = vec![
        Rect::new(x1 - s1, y1, x1, y1 + ZIG),
        Rect::new(x1 - s1, y1 + ZIG, x1 + s1, y1 + 2 * ZIG),
        Rect::new(x1, y1 + 2 * ZIG, x1 + s1, y1 + 3 * ZIG),
        Rect::new(x2 - s2, y2 - ZIG, x2, y2),
        Rect::new(x2 - s2, y2 - 2 * ZIG, x2 + s2, y2 - ZIG),
        Rect::new(x2, y2 - 3 * ZIG, x2 + s2, y2 - 2 * ZIG),
    ];
    let mut lo = x1.min(x1 + s1).min(x2).min(x2 + s2);
    let mut hi = x1.max(x1 + s1).max(x2).max(x2 + s2);
    if hi - lo < CONNECTOR_MIN_WIDTH {
        if s1 + s2 <= 0 {
            hi = lo + CONNECTOR_MIN_WIDTH;
        } else {
            lo = hi - CONNECTOR_MIN_WIDTH;
        }
    }
    let first = if x1 - lo <= hi - x1 { Side::Right } else { Side::Left };
    let kk = k as Coord;
    let (bottom, top) = (y1 + 3 * ZIG, y2 - 3 * ZIG);
    let stretch = (top - bottom) - (kk + 1) * CONNECTOR_BOX_HEIGHT - (kk - 1) * ZIG;
    if stretch < ZIG {
        return Err(ReductionError::RoutingFailed(format!("gap above gadget {li} is too small for a connector")));
    }
    let mut boxes = Vec::with_capacity(k + 1);
    let mut channels = Vec::with_capacity(k);
    let mut y = bottom;
    for j in 0..=k {
        boxes.push(Rect::new(lo, y, hi, y + CONNECTOR_BOX_HEIGHT));
        y += CONNECTOR_BOX_HEIGHT;
        if j < k {
            let h = if j == 0 { stretch } else { ZIG };
            let side = if j % 2 == 0 { first } else { first.other() };
            let cx = match side {
                Side::Left => Interval::new(lo, lo + ZIG),
                Side::Right => Interval::new(hi - ZIG, hi),
            };
            channels.push(Rect::new(cx.lo, y, cx.hi, y + h));
            y += h;
        }
    }
    debug_assert_eq!(y, top);
    Ok(Connector {
        lower: li,
        upper: li + 1,
        from,
        to,
        shape: Shape::with_first_channel(first),
        boxes,
        channels,
        zigzags,
        middle_box: k / 2,
    })
}

fn check_k(k: usize) -> Result<(), ReductionError> {
    if k == 0 || k % 2 == 1 {
        return Err(ReductionError::OddK(k));
    }
    Ok(())
}

fn finish(
    k: usize,
    connected: bool,
    graph: &GraphInstance,
    bars: &BarRepresentation,
    subdivided: GraphInstance,
    slots: &[Slot],
    subdivisions: Vec<Subdivision>,
) -> Result<(Scene, ReductionPlan), ReductionError> {
    let gadgets = place(k, slots)?;
    let connectors = if connected {
        (0..gadgets.len() - 1).map(|i| connector(k, &gadgets, i)).collect::<Result<Vec<_>, _>>()?
    } else {
        Vec::new()
    };
    let lines_of_sight = sights(slots)
        .into_iter()
        .map(|s| {
            let (a, b) = (s.edge_slot.min(s.vertex_slot), s.edge_slot.max(s.vertex_slot));
            LineOfSight {
                edge: s.edge,
                edge_gadget: s.edge_slot,
                vertex_gadget: s.vertex_slot,
                x: s.x,
                y: Interval::new(gadgets[a].y.hi, gadgets[b].y.lo),
            }
        })
        .collect();
    let n_s = 2 * subdivisions.len();
    let accounting = Accounting {
        n: graph.n(),
        m: graph.m(),
        n_s,
        n_prime: subdivided.n(),
        m_prime: subdivided.m(),
        n_c: connectors.len(),
        kprime_offset: n_s / 2,
        slots: gadgets.len(),
    };
    let plan = ReductionPlan {
        k,
        connected,
        graph: graph.clone(),
        bars: bars.clone(),
        subdivided,
        gadgets,
        connectors,
        lines_of_sight,
        subdivisions,
        accounting,
    };
    let scene = plan.scene()?;
    let want = if connected { 1 } else { plan.gadgets.len() };
    if scene.components().len() != want || !scene.rows_are_intervals() {
        return Err(ReductionError::RoutingFailed(format!(
            "expected a y-monotone scene with {want} components, got {}",
            scene.components().len()
        )));
    }
    Ok((scene, plan))
}

/// P′: one vertex gadget per bar and one edge gadget per strip, unconnected.
pub fn build_disconnected(
    graph: &GraphInstance,
    bars: &BarRepresentation,
    k: usize,
) -> Result<(Scene, ReductionPlan), ReductionError> {
    check_k(k)?;
    bars.validate(graph)?;
    let mut slots = initial_slots(k, graph, bars);
    for s in slots.iter_mut() {
        s.entry = Some(Side::Left);
        s.exit = Some(Side::Right);
    }
    finish(k, false, graph, bars, graph.clone(), &slots, Vec::new())
}

/// P: the gadgets of `plan` joined bottom to top by connector gadgets, with
/// edges subdivided wherever a connection would block a line-of-sight.
pub fn connect(plan: &ReductionPlan) -> Result<(Scene, ReductionPlan), ReductionError> {
    check_k(plan.k)?;
    let (subdivided, slots, log) = walk(plan.graph.clone(), initial_slots(plan.k, &plan.graph, &plan.bars))?;
    finish(plan.k, true, &plan.graph, &plan.bars, subdivided, &slots, log)
}

/// Optimal number of horizontal transmitters predicted for the plan's scene
/// when the input graph has a minimum vertex cover of `vc_size`:
/// k′ + n′ + N_c with k′ = vc_size + N_s/2 (N_c = 0 for P′).
pub fn expected_guard_count(plan: &ReductionPlan, vc_size: usize) -> usize {
    let a = &plan.accounting;
    vc_size + a.kprime_offset + a.n_prime + a.n_c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::graph::Bar;

    fn rep(bars: &[(usize, Coord, Coord, Coord)], strips: &[(usize, usize, Coord, Coord)]) -> (GraphInstance, BarRepresentation) {
        let edges: Vec<(usize, usize)> = strips.iter().map(|s| (s.0, s.1)).collect();
        let g = GraphInstance::new(bars.iter().map(|b| b.0), &edges).unwrap();
        let r = BarRepresentation {
            bars: bars.iter().map(|&(v, y, a, b)| (v, Bar { y, x: Interval::new(a, b) })).collect(),
            strips: strips.iter().map(|&(u, v, a, b)| (GraphEdge::new(u, v), Interval::new(a, b))).collect(),
        };
        (g, r)
    }

    fn k2() -> (GraphInstance, BarRepresentation) {
        rep(&[(1, 0, 0, 8), (2, 10, 0, 8)], &[(1, 2, 3, 4)])
    }

    fn c3() -> (GraphInstance, BarRepresentation) {
        rep(&[(1, 0, 0, 12), (2, 10, 0, 8), (3, 20, 4, 12)], &[(1, 2, 1, 2), (2, 3, 5, 6), (1, 3, 9, 10)])
    }

    #[test]
    fn disconnected_structure() {
        let (g, r) = k2();
        let (s, p) = build_disconnected(&g, &r, 2).unwrap();
        assert_eq!(s.components().len(), 3);
        assert!(s.rows_are_intervals());
        let boxes: Vec<usize> = p.gadgets.iter().map(|g| g.boxes.len()).collect();
        assert_eq!(boxes, vec![3, 1, 3]);
        assert_eq!(expected_guard_count(&p, 1), 3);

        let (g, r) = c3();
        let (s, p) = build_disconnected(&g, &r, 2).unwrap();
        assert_eq!(s.components().len(), 6);
        assert_eq!(expected_guard_count(&p, 2), 5);
        let (_, p) = build_disconnected(&g, &r, 4).unwrap();
        for gd in p.gadgets.iter().filter(|g| matches!(g.kind, GadgetKind::Vertex { .. })) {
            assert_eq!((gd.boxes.len(), gd.channels.len(), gd.middle_box), (5, 4, Some(2)));
            // Channels strictly inside the bar and clear of every edge column.
            for c in &gd.channels {
                assert!(gd.x.lo < c.x.lo && c.x.hi < gd.x.hi);
                assert!(p.gadgets.iter().filter(|e| matches!(e.kind, GadgetKind::Edge { .. })).all(|e| !e.x.overlaps(&c.x)));
            }
        }
        for w in p.gadgets.windows(2) {
            assert!(w[0].y.hi < w[1].y.lo);
        }
    }

    #[test]
    fn connected_accounting() {
        let (g, r) = k2();
        let (_, p) = build_disconnected(&g, &r, 2).unwrap();
        let (s, p) = connect(&p).unwrap();
        assert!(s.is_y_monotone());
        assert_eq!((p.accounting.n_s, p.accounting.n_c), (0, 2));
        assert_eq!(expected_guard_count(&p, 1), 5);
        assert_eq!(p.gadgets[0].shape, Some(Shape::S));
        assert_eq!(p.gadgets[0].exit, Some(Side::Right));

        let (g, r) = c3();
        let (_, p) = build_disconnected(&g, &r, 2).unwrap();
        let (s, p) = connect(&p).unwrap();
        assert!(s.is_y_monotone());
        let a = &p.accounting;
        assert_eq!(a.n_s, 2 * p.subdivisions.len());
        assert_eq!((a.n_prime, a.m_prime), (a.n + a.n_s, a.m + a.n_s));
        assert_eq!(a.n_c, a.n + a.m + 2 * a.n_s - 1);
        assert_eq!(a.n_c, 6 + 2 * a.n_s - 1);
        assert_eq!(p.subdivided.n(), a.n_prime);
        // Template bound: a gadget with its outgoing connector stays under 8k + 32 vertices.
        assert!(s.vertex_count() <= (8 * 2 + 32) * (a.n_prime + a.m_prime));
    }

    #[test]
    fn rejects_bad_input() {
        let (g, r) = k2();
        assert_eq!(build_disconnected(&g, &r, 3).unwrap_err(), ReductionError::OddK(3));
        assert_eq!(build_disconnected(&g, &r, 0).unwrap_err(), ReductionError::OddK(0));
        let mut bad = r.clone();
        bad.bars.get_mut(&2).unwrap().y = 0;
        assert!(matches!(build_disconnected(&g, &bad, 2), Err(ReductionError::BarRepInvalid(_))));
    }

    #[test]
    fn edge_gadgets_stack_for_larger_k() {
        let (g, r) = k2();
        let (s, p) = build_disconnected(&g, &r, 4).unwrap();
        assert_eq!(s.components().len(), 3);
        let e = &p.gadgets[1];
        assert_eq!((e.boxes.len(), e.channels.len()), (2, 1));
        let (_, p) = build_disconnected(&g, &r, 6).unwrap();
        assert_eq!(p.gadgets[1].boxes.len(), 3);
    }
}

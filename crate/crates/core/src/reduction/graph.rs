//! Source graphs for the reduction: simple undirected graphs, exact vertex
//! cover, double subdivision, and bar visibility representations.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::ReductionError;
use crate::geometry::{Coord, Interval};

/// Largest graph accepted by [`min_vertex_cover`].
pub const VERTEX_COVER_LIMIT: usize = 20;
/// Largest graph on which declared planarity and 2-connectivity are checked.
pub const BRUTE_FORCE_LIMIT: usize = 8;

pub type VertexId = usize;

/// Undirected edge, stored with `u < v`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GraphEdge {
    pub u: VertexId,
    pub v: VertexId,
}

impl GraphEdge {
    pub fn new(a: VertexId, b: VertexId) -> Self {
        GraphEdge { u: a.min(b), v: a.max(b) }
    }

    pub fn other(&self, w: VertexId) -> VertexId {
        if w == self.u {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphInstance {
    /// Sorted, distinct.
    pub vertices: Vec<VertexId>,
    /// Sorted, distinct.
    pub edges: Vec<GraphEdge>,
    pub planar: bool,
    pub biconnected: bool,
}

impl GraphInstance {
    /// Builds a simple connected graph, declared planar and 2-connected.
    /// The declaration is checked when the graph is small enough.
    pub fn new(vertices: impl IntoIterator<Item = VertexId>, edges: &[(VertexId, VertexId)]) -> Result<Self, ReductionError> {
        let vertices: BTreeSet<VertexId> = vertices.into_iter().collect();
        let mut set = BTreeSet::new();
        for &(a, b) in edges {
            if a == b {
                return Err(ReductionError::InvalidGraph(format!("loop at vertex {a}")));
            }
            if !vertices.contains(&a) || !vertices.contains(&b) {
                return Err(ReductionError::InvalidGraph(format!("edge ({a}, {b}) has an unknown endpoint")));
            }
            if !set.insert(GraphEdge::new(a, b)) {
                return Err(ReductionError::InvalidGraph(format!("repeated edge ({a}, {b})")));
            }
        }
        let g = GraphInstance {
            vertices: vertices.into_iter().collect(),
            edges: set.into_iter().collect(),
            planar: true,
            biconnected: true,
        };
        if g.vertices.is_empty() || !g.is_connected_without(None) {
            return Err(ReductionError::InvalidGraph("graph is not connected".into()));
        }
        if g.vertices.len() <= BRUTE_FORCE_LIMIT {
            if !g.is_biconnected() {
                return Err(ReductionError::InvalidGraph("graph is not 2-connected".into()));
            }
            if !g.is_planar() {
                return Err(ReductionError::InvalidGraph("graph is not planar".into()));
            }
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.edges.binary_search(&GraphEdge::new(a, b)).is_ok()
    }

    pub fn neighbours(&self, w: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.edges.iter().filter(move |e| e.u == w || e.v == w).map(move |e| e.other(w))
    }

    fn is_connected_without(&self, removed: Option<VertexId>) -> bool {
        let alive: Vec<VertexId> = self.vertices.iter().copied().filter(|&v| Some(v) != removed).collect();
        let Some(&start) = alive.first() else { return true };
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(w) = stack.pop() {
            for x in self.neighbours(w) {
                if Some(x) != removed && seen.insert(x) {
                    stack.push(x);
                }
            }
        }
        seen.len() == alive.len()
    }

    /// No cut vertex. A single edge counts as 2-connected.
    pub fn is_biconnected(&self) -> bool {
        self.is_connected_without(None)
            && (self.n() <= 2 || self.vertices.iter().all(|&v| self.is_connected_without(Some(v))))
    }

    /// Brute-force Wagner test: no K5 and no K3,3 minor.
    pub fn is_planar(&self) -> bool {
        let n = self.n();
        if n <= 4 {
            return true;
        }
        if n >= 3 && self.m() > 3 * n - 6 {
            return false;
        }
        !self.has_minor(5, &|a, b| a != b) && !self.has_minor(6, &|a, b| (a < 3) != (b < 3))
    }

    /// Is there an assignment of vertices to `t` connected branch sets (or to
    /// none) such that every pair required by `need` is joined by an edge?
    fn has_minor(&self, t: usize, need: &dyn Fn(usize, usize) -> bool) -> bool {
        let n = self.n();
        let index: BTreeMap<VertexId, usize> = self.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let adj: Vec<(usize, usize)> = self.edges.iter().map(|e| (index[&e.u], index[&e.v])).collect();
        let mut label = vec![usize::MAX; n];
        fn rec(
            i: usize,
            t: usize,
            label: &mut Vec<usize>,
            adj: &[(usize, usize)],
            need: &dyn Fn(usize, usize) -> bool,
        ) -> bool {
            let n = label.len();
            if i == n {
                return minor_ok(t, label, adj, need);
            }
            for l in (0..t).chain([usize::MAX]) {
                label[i] = l;
                if rec(i + 1, t, label, adj, need) {
                    return true;
                }
            }
            false
        }
        rec(0, t, &mut label, &adj, need)
    }
}

fn minor_ok(t: usize, label: &[usize], adj: &[(usize, usize)], need: &dyn Fn(usize, usize) -> bool) -> bool {
    let n = label.len();
    for l in 0..t {
        let members: Vec<usize> = (0..n).filter(|&i| label[i] == l).collect();
        let Some(&first) = members.first() else { return false };
        let mut seen = vec![first];
        let mut stack = vec![first];
        while let Some(w) = stack.pop() {
            for &(a, b) in adj {
                let x = if a == w {
                    b
                } else if b == w {
                    a
                } else {
                    continue;
                };
                if label[x] == l && !seen.contains(&x) {
                    seen.push(x);
                    stack.push(x);
                }
            }
        }
        if seen.len() != members.len() {
            return false;
        }
    }
    let mut joined = vec![vec![false; t]; t];
    for &(a, b) in adj {
        let (la, lb) = (label[a], label[b]);
        if la < t && lb < t {
            joined[la][lb] = true;
            joined[lb][la] = true;
        }
    }
    (0..t).all(|a| (0..t).all(|b| !need(a, b) || joined[a][b]))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexCover {
    pub size: usize,
    /// Sorted; lexicographically least among minimum covers.
    pub witness: Vec<VertexId>,
}

/// Exact minimum vertex cover by increasing-size enumeration of subsets in
/// lexicographic order.
pub fn min_vertex_cover(g: &GraphInstance) -> Result<VertexCover, ReductionError> {
    let n = g.n();
    if n > VERTEX_COVER_LIMIT {
        return Err(ReductionError::TooLarge { vertices: n, limit: VERTEX_COVER_LIMIT });
    }
    let index: BTreeMap<VertexId, usize> = g.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let masks: Vec<u32> = g.edges.iter().map(|e| (1u32 << index[&e.u]) | (1u32 << index[&e.v])).collect();
    for size in 0..=n {
        let mut pick: Vec<usize> = (0..size).collect();
        loop {
            let set: u32 = pick.iter().map(|&i| 1u32 << i).sum();
            if masks.iter().all(|&m| m & set != 0) {
                return Ok(VertexCover { size, witness: pick.iter().map(|&i| g.vertices[i]).collect() });
            }
            // Next combination in lexicographic order.
            let Some(pos) = (0..size).rev().find(|&p| pick[p] < n - size + p) else { break };
            pick[pos] += 1;
            for q in pos + 1..size {
                pick[q] = pick[q - 1] + 1;
            }
        }
    }
    unreachable!("the full vertex set is a cover")
}

/// The graph with `(u, v)` replaced by the path `u a b v`, where `a` and `b`
/// are the two smallest unused ids above the current maximum.
pub fn subdivide_edge_twice(g: &GraphInstance, u: VertexId, v: VertexId) -> Result<(GraphInstance, VertexId, VertexId), ReductionError> {
    if !g.has_edge(u, v) {
        return Err(ReductionError::NoSuchEdge(u, v));
    }
    let next = g.vertices.iter().max().map_or(0, |m| m + 1);
    let (a, b) = (next, next + 1);
    let mut edges: Vec<GraphEdge> = g.edges.iter().copied().filter(|&e| e != GraphEdge::new(u, v)).collect();
    edges.extend([GraphEdge::new(u, a), GraphEdge::new(a, b), GraphEdge::new(b, v)]);
    edges.sort();
    let mut vertices = g.vertices.clone();
    vertices.extend([a, b]);
    Ok((GraphInstance { vertices, edges, planar: g.planar, biconnected: g.biconnected }, a, b))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bar {
    pub y: Coord,
    pub x: Interval,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarRepresentation {
    pub bars: BTreeMap<VertexId, Bar>,
    #[serde(with = "pairs")]
    pub strips: BTreeMap<GraphEdge, Interval>,
}

/// Maps with non-string keys, as a list of `[key, value]` pairs.
mod pairs {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<K: Serialize, V: Serialize, S: Serializer>(m: &BTreeMap<K, V>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(m.iter())
    }

    pub fn deserialize<'de, K, V, D>(d: D) -> Result<BTreeMap<K, V>, D::Error>
    where
        K: Deserialize<'de> + Ord,
        V: Deserialize<'de>,
        D: Deserializer<'de>,
    {
        Ok(Vec::<(K, V)>::deserialize(d)?.into_iter().collect())
    }
}

impl BarRepresentation {
    /// Checks every property the construction relies on.
    pub fn validate(&self, g: &GraphInstance) -> Result<(), ReductionError> {
        let bad = |m: String| Err(ReductionError::BarRepInvalid(m));
        let ids: Vec<VertexId> = self.bars.keys().copied().collect();
        if ids != g.vertices {
            return bad("bars do not match the vertex set".into());
        }
        let strips: Vec<GraphEdge> = self.strips.keys().copied().collect();
        if strips != g.edges {
            return bad("strips do not match the edge set".into());
        }
        let ys: BTreeSet<Coord> = self.bars.values().map(|b| b.y).collect();
        if ys.len() != self.bars.len() {
            return bad("bar y-coordinates are not distinct".into());
        }
        for (v, b) in &self.bars {
            if b.x.is_empty() {
                return bad(format!("bar of vertex {v} has zero width"));
            }
        }
        let list: Vec<(&GraphEdge, &Interval)> = self.strips.iter().collect();
        for (i, (e, s)) in list.iter().enumerate() {
            if s.is_empty() {
                return bad(format!("strip of ({}, {}) has zero width", e.u, e.v));
            }
            for (f, t) in &list[i + 1..] {
                if s.meets(t) {
                    return bad(format!("strips of ({}, {}) and ({}, {}) are not disjoint", e.u, e.v, f.u, f.v));
                }
            }
            let (bu, bv) = (self.bars[&e.u], self.bars[&e.v]);
            if !bu.x.contains_interval(s) || !bv.x.contains_interval(s) {
                return bad(format!("strip of ({}, {}) leaves an endpoint bar", e.u, e.v));
            }
            let span = Interval::new(bu.y, bv.y);
            for (w, b) in &self.bars {
                if *w != e.u && *w != e.v && span.strictly_contains(b.y) && b.x.overlaps(s) {
                    return bad(format!("strip of ({}, {}) crosses the bar of vertex {w}", e.u, e.v));
                }
            }
        }
        let bottom = self.bars.iter().min_by_key(|(_, b)| b.y).map(|(&v, _)| v);
        let top = self.bars.iter().max_by_key(|(_, b)| b.y).map(|(&v, _)| v);
        for (&v, b) in &self.bars {
            let below = g.neighbours(v).any(|w| self.bars[&w].y < b.y);
            let above = g.neighbours(v).any(|w| self.bars[&w].y > b.y);
            if Some(v) != bottom && !below {
                return bad(format!("vertex {v} has no neighbour below"));
            }
            if Some(v) != top && !above {
                return bad(format!("vertex {v} has no neighbour above"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> GraphInstance {
        let edges: Vec<(usize, usize)> = (1..=n).map(|i| (i, i % n + 1)).collect();
        GraphInstance::new(1..=n, &edges).unwrap()
    }

    #[test]
    fn vertex_cover_examples() {
        assert_eq!(min_vertex_cover(&cycle(3)).unwrap(), VertexCover { size: 2, witness: vec![1, 2] });
        let k2 = GraphInstance::new([1, 2], &[(1, 2)]).unwrap();
        assert_eq!(min_vertex_cover(&k2).unwrap().size, 1);
        let (s, a, b) = subdivide_edge_twice(&cycle(3), 1, 2).unwrap();
        assert_eq!((a, b), (4, 5));
        assert_eq!((s.n(), s.m()), (5, 5));
        assert_eq!(min_vertex_cover(&s).unwrap().size, 3);
        let (p, _, _) = subdivide_edge_twice(&k2, 1, 2).unwrap();
        assert_eq!((p.n(), p.m()), (4, 3));
        assert!(matches!(subdivide_edge_twice(&k2, 1, 3), Err(ReductionError::NoSuchEdge(1, 3))));
    }

    #[test]
    fn vertex_cover_limit() {
        let edges: Vec<(usize, usize)> = (0..21).map(|i| (i, (i + 1) % 21)).collect();
        let g = GraphInstance { vertices: (0..21).collect(), edges: edges.iter().map(|&(a, b)| GraphEdge::new(a, b)).collect(), planar: true, biconnected: true };
        assert!(matches!(min_vertex_cover(&g), Err(ReductionError::TooLarge { vertices: 21, .. })));
    }

    #[test]
    fn graph_validation() {
        assert!(GraphInstance::new([1, 2, 3], &[(1, 2), (2, 3)]).is_err());
        assert!(GraphInstance::new([1, 2], &[(1, 1)]).is_err());
        let k5: Vec<(usize, usize)> = (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect();
        assert!(GraphInstance::new(0..5, &k5).is_err());
        let k33: Vec<(usize, usize)> = (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect();
        assert!(GraphInstance::new(0..6, &k33).is_err());
        let k4: Vec<(usize, usize)> = (0..4).flat_map(|a| (a + 1..4).map(move |b| (a, b))).collect();
        assert!(GraphInstance::new(0..4, &k4).is_ok());
        // Octahedron: planar, 6 vertices, 12 edges.
        let oct: Vec<(usize, usize)> =
            (0..6).flat_map(|a| (a + 1..6).map(move |b| (a, b))).filter(|&(a, b)| b != a + 3 || a >= 3).collect();
        assert_eq!(oct.len(), 12);
        assert!(GraphInstance::new(0..6, &oct).is_ok());
    }

    #[test]
    fn bar_validation() {
        let g = GraphInstance::new([1, 2], &[(1, 2)]).unwrap();
        let bars = BTreeMap::from([(1, Bar { y: 0, x: Interval::new(0, 8) }), (2, Bar { y: 10, x: Interval::new(0, 8) })]);
        let mut rep = BarRepresentation { bars, strips: BTreeMap::from([(GraphEdge::new(1, 2), Interval::new(3, 4))]) };
        assert!(rep.validate(&g).is_ok());
        rep.strips.insert(GraphEdge::new(1, 2), Interval::new(7, 9));
        assert!(matches!(rep.validate(&g), Err(ReductionError::BarRepInvalid(_))));
    }
}

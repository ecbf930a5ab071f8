//! k-transmitter visibility, transmitter canonicalization, and a sampling
//! coverage verifier that checks solutions independently of the hit relation.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decomposition::{guard_segments, Decomposition, DecompositionError, GuardSegment, Orientation};
use crate::geometry::{Axis, Coord, Interval, OrthoSegment, Point, Rect, Scene};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VisibilityError {
    #[error("transmitter {0:?} leaves the polygon")]
    NotInsidePolygon(OrthoSegment),
    #[error("no guard segment matches the canonical form {0:?}")]
    NoGuard(OrthoSegment),
}

/// Sliding transmitter: an axis-parallel segment in the closure of the scene.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Transmitter {
    pub segment: OrthoSegment,
}

impl Transmitter {
    pub fn new(scene: &Scene, segment: OrthoSegment) -> Result<Self, VisibilityError> {
        // Inside the closure iff no side change along it and one sample point is not exterior.
        let start = segment.start();
        if !scene.in_closure(start)
            || !scene.in_closure(segment.end())
            || scene.transition_count(&segment) != 0
        {
            return Err(VisibilityError::NotInsidePolygon(segment));
        }
        Ok(Transmitter { segment })
    }

    /// Skips the closure check; for segments already known to be inside.
    pub fn unchecked(segment: OrthoSegment) -> Self {
        Transmitter { segment }
    }
}

impl From<&GuardSegment> for Transmitter {
    fn from(g: &GuardSegment) -> Self {
        Transmitter { segment: g.segment }
    }
}

/// The perpendicular from `p` onto the transmitter's line lands on the
/// transmitter and crosses the boundary at most `k` times.
pub fn sees(scene: &Scene, t: &Transmitter, p: Point, k: usize) -> bool {
    let s = &t.segment;
    let along = p.along(s.axis);
    if !s.span.contains(along) {
        return false;
    }
    let perp = OrthoSegment::new(s.axis.other(), along, Interval::new(p.across(s.axis), s.fixed));
    scene.transition_count(&perp) <= k
}

/// Translates `t` perpendicular to itself to the nearer blocking edge line
/// (ties toward the smaller coordinate), then takes the guard segment there.
pub fn canonicalize_transmitter(scene: &Scene, t: &Transmitter) -> Result<GuardSegment, VisibilityError> {
    let s = &t.segment;
    let blocks = |e: &OrthoSegment| {
        if s.span.is_empty() {
            e.span.contains(s.span.lo)
        } else {
            e.span.overlaps(&s.span)
        }
    };
    let mut up: Option<Coord> = None;
    let mut down: Option<Coord> = None;
    for e in scene.edges_of(s.axis) {
        let e = &e.segment;
        if !blocks(e) {
            continue;
        }
        if e.fixed >= s.fixed {
            up = Some(up.map_or(e.fixed, |u| u.min(e.fixed)));
        }
        if e.fixed <= s.fixed {
            down = Some(down.map_or(e.fixed, |d| d.max(e.fixed)));
        }
    }
    let line = match (down, up) {
        (Some(d), Some(u)) => {
            if u - s.fixed < s.fixed - d {
                u
            } else {
                d
            }
        }
        (Some(d), None) => d,
        (None, Some(u)) => u,
        (None, None) => return Err(VisibilityError::NotInsidePolygon(*s)),
    };
    let moved = OrthoSegment::new(s.axis, line, s.span);
    let filter = match s.axis {
        Axis::Horizontal => Orientation::Horizontal,
        Axis::Vertical => Orientation::Vertical,
    };
    guard_segments(scene, filter)
        .into_iter()
        .find(|g| g.segment.fixed == line && g.segment.span.contains_interval(&s.span))
        .ok_or(VisibilityError::NoGuard(moved))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub total: usize,
    /// Sorted by (y, x).
    pub unseen: Vec<Point>,
    pub seen_per_transmitter: Vec<usize>,
    pub covered: bool,
}

/// `density` evenly spaced odd coordinates strictly inside `iv`.
fn odd_samples(iv: Interval, density: usize) -> impl Iterator<Item = Coord> {
    let d = density.max(1) as Coord;
    (0..d).map(move |i| {
        let v = iv.lo + (2 * i + 1) * iv.len() / (2 * d);
        if v % 2 != 0 {
            v
        } else if v + 1 < iv.hi {
            v + 1
        } else {
            v - 1
        }
    })
}

/// `density × density` odd-coordinate points strictly inside `r`.
pub fn pixel_samples(r: &Rect, density: usize) -> Vec<Point> {
    let xs: BTreeSet<Coord> = odd_samples(r.x, density).collect();
    let ys: BTreeSet<Coord> = odd_samples(r.y, density).collect();
    ys.iter().flat_map(|&y| xs.iter().map(move |&x| Point::new(x, y))).collect()
}

/// All sample points for a decomposition: every pixel's grid plus every cross.
pub fn coverage_samples(d: &Decomposition, density: usize) -> Vec<Point> {
    let mut pts: BTreeSet<(Coord, Coord)> = BTreeSet::new();
    for c in &d.crosses {
        pts.insert((c.point.y, c.point.x));
        for p in pixel_samples(&c.pixel, density) {
            pts.insert((p.y, p.x));
        }
    }
    pts.into_iter().map(|(y, x)| Point::new(x, y)).collect()
}

pub fn verify_coverage(
    scene: &Scene,
    transmitters: &[Transmitter],
    k: usize,
    density: usize,
) -> Result<CoverageReport, DecompositionError> {
    let d = Decomposition::build(scene, k)?;
    let samples = coverage_samples(&d, density);
    let mut seen_per_transmitter = vec![0; transmitters.len()];
    let mut unseen = Vec::new();
    for &p in &samples {
        let mut any = false;
        for (i, t) in transmitters.iter().enumerate() {
            if sees(scene, t, p, k) {
                seen_per_transmitter[i] += 1;
                any = true;
            }
        }
        if !any {
            unseen.push(p);
        }
    }
    Ok(CoverageReport { total: samples.len(), covered: unseen.is_empty(), unseen, seen_per_transmitter })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::validate_scene;

    fn u() -> Scene {
        validate_scene(&[(vec![(0, 0), (12, 0), (12, 8), (8, 8), (8, 3), (4, 3), (4, 8), (0, 8)], vec![])]).unwrap()
    }

    fn rect() -> Scene {
        validate_scene(&[(vec![(0, 0), (10, 0), (10, 6), (0, 6)], vec![])]).unwrap()
    }

    fn t(seg: OrthoSegment) -> Transmitter {
        Transmitter::unchecked(seg)
    }

    #[test]
    fn sees_examples() {
        let u = u();
        let left = t(OrthoSegment::vertical(4, 0, 16));
        assert!(sees(&u, &left, Point::new(20, 12), 2));
        assert!(sees(&u, &left, Point::new(20, 2), 2));
        assert!(!sees(&u, &left, Point::new(20, 12), 0));
        // Foot outside the span.
        let short = t(OrthoSegment::vertical(4, 0, 4));
        assert!(!sees(&u, &short, Point::new(20, 12), 4));
    }

    #[test]
    fn transmitter_must_be_inside() {
        let u = u();
        assert!(Transmitter::new(&u, OrthoSegment::horizontal(12, 4, 20)).is_err());
        assert!(Transmitter::new(&u, OrthoSegment::horizontal(6, 0, 24)).is_ok());
        assert!(Transmitter::new(&u, OrthoSegment::horizontal(30, 0, 4)).is_err());
    }

    #[test]
    fn canonicalization_examples() {
        let u = u();
        let g = canonicalize_transmitter(&u, &t(OrthoSegment::horizontal(2, 4, 6))).unwrap();
        assert_eq!(g.segment, OrthoSegment::horizontal(0, 0, 24));
        let g = canonicalize_transmitter(&rect(), &t(OrthoSegment::horizontal(6, 8, 12))).unwrap();
        assert_eq!(g.segment, OrthoSegment::horizontal(0, 0, 20));
        let g = canonicalize_transmitter(&u, &t(OrthoSegment::vertical(18, 8, 10))).unwrap();
        assert_eq!(g.segment, OrthoSegment::vertical(16, 0, 16));
    }

    #[test]
    fn coverage_examples() {
        let u = u();
        let floor = t(OrthoSegment::horizontal(6, 0, 24));
        let r = verify_coverage(&u, &[floor], 2, 3).unwrap();
        assert!(r.covered);
        assert_eq!(r.seen_per_transmitter, vec![r.total]);
        let top_left = t(OrthoSegment::horizontal(16, 0, 8));
        let r = verify_coverage(&u, &[top_left], 2, 3).unwrap();
        assert!(!r.covered);
        assert!(r.unseen.iter().any(|p| p.x > 16 && p.y > 6));
        let bottom = t(OrthoSegment::horizontal(0, 0, 20));
        assert!(verify_coverage(&rect(), &[bottom], 2, 1).unwrap().covered);
    }

    #[test]
    fn samples_are_odd_and_inside() {
        let r = Rect::new(0, 0, 2, 10);
        let s = pixel_samples(&r, 3);
        assert_eq!(s.len(), 3);
        assert!(s.iter().all(|p| p.x % 2 != 0 && p.y % 2 != 0 && r.strictly_contains(*p)));
        assert_eq!(pixel_samples(&Rect::new(0, 0, 12, 12), 3).len(), 9);
    }
}

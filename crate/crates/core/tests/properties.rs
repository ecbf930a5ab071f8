use proptest::prelude::*;

use ktrans::decomposition::{partition_segments, Decomposition};
use ktrans::geometry::{Axis, Location, OrthoSegment, Point, Scene};
use ktrans::io::{decomposition_to_json, scene_from_json, scene_to_json};
use ktrans::random::{seeded_scenes, RandomSceneParams};
use ktrans::visibility::{canonicalize_transmitter, pixel_samples, sees, Transmitter};

fn scene(seed: u64) -> Scene {
    let params = RandomSceneParams { max_vertices: 16, grid: 6, max_cells: 14, seeds: 1 };
    seeded_scenes(seed, 1, params).pop().unwrap()
}

fn odd(lo: i64, hi: i64, t: u32) -> i64 {
    let span = (hi - lo).max(2);
    let v = lo + (t as i64) % span;
    if v % 2 == 0 {
        v + 1
    } else {
        v
    }
}

/// A segment on an odd line with odd endpoints, around the bounding box.
fn segment(s: &Scene, axis: Axis, a: u32, b: u32, c: u32) -> OrthoSegment {
    let bb = s.bounding_box();
    let (along, across) = match axis {
        Axis::Horizontal => (bb.x, bb.y),
        Axis::Vertical => (bb.y, bb.x),
    };
    let fixed = odd(across.lo - 2, across.hi + 2, a);
    let (p, q) = (odd(along.lo - 2, along.hi + 2, b), odd(along.lo - 2, along.hi + 2, c));
    OrthoSegment::new(axis, fixed, ktrans::Interval::new(p.min(q), p.max(q)))
}

fn axis(h: bool) -> Axis {
    if h {
        Axis::Horizontal
    } else {
        Axis::Vertical
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transition_parity_and_additivity(seed in 0u64..10_000, h: bool, a: u32, b: u32, c: u32, m: u32) {
        let s = scene(seed);
        let seg = segment(&s, axis(h), a, b, c);
        let n = s.transition_count(&seg);
        let differ = s.locate(seg.start()) != s.locate(seg.end());
        prop_assert_eq!(n % 2 == 1, differ);
        prop_assert_eq!(n, s.transition_count(&OrthoSegment::new(seg.axis, seg.fixed, seg.span)));
        if seg.span.len() >= 2 {
            let mid = odd(seg.span.lo, seg.span.hi, m);
            let left = OrthoSegment::new(seg.axis, seg.fixed, ktrans::Interval::new(seg.span.lo, mid));
            let right = OrthoSegment::new(seg.axis, seg.fixed, ktrans::Interval::new(mid, seg.span.hi));
            prop_assert_eq!(n, s.transition_count(&left) + s.transition_count(&right));
        }
    }

    #[test]
    fn visibility_monotone_in_k(seed in 0u64..10_000, h: bool, a: u32, b: u32, c: u32, px: u32, py: u32) {
        let s = scene(seed);
        let t = Transmitter::unchecked(segment(&s, axis(h), a, b, c));
        let bb = s.bounding_box();
        let p = Point::new(odd(bb.x.lo, bb.x.hi, px), odd(bb.y.lo, bb.y.hi, py));
        for k in [0, 2, 4] {
            if sees(&s, &t, p, k) {
                prop_assert!(sees(&s, &t, p, k + 2));
            }
        }
    }

    #[test]
    fn canonical_guard_dominates(seed in 0u64..10_000, h: bool, a: u32, b: u32, c: u32) {
        let s = scene(seed);
        let seg = segment(&s, axis(h), a, b, c);
        prop_assume!(s.locate(seg.start()) == Location::Interior);
        let Ok(t) = Transmitter::new(&s, seg) else { return Ok(()) };
        let g = canonicalize_transmitter(&s, &t).unwrap();
        let gt = Transmitter::unchecked(g.segment);
        let d = Decomposition::build(&s, 2).unwrap();
        for px in d.pixels() {
            for p in pixel_samples(&px, 2) {
                for k in [0, 2] {
                    if sees(&s, &t, p, k) {
                        prop_assert!(sees(&s, &gt, p, k), "{:?} sees {:?} at k={} but {:?} does not", t, p, k, g);
                    }
                }
            }
        }
    }

    #[test]
    fn partition_extends_with_k(seed in 0u64..10_000, h: bool) {
        let s = scene(seed);
        for k in [0, 2] {
            let short = partition_segments(&s, k, axis(h));
            let long = partition_segments(&s, k + 2, axis(h));
            for p in &short {
                prop_assert!(long.iter().any(|q| q.origin_edge == p.origin_edge
                    && q.segment.fixed == p.segment.fixed
                    && q.segment.span.contains_interval(&p.segment.span)));
            }
        }
    }

    #[test]
    fn grid_area_matches_shoelace(seed in 0u64..10_000) {
        let s = scene(seed);
        let g = s.unit_grid();
        let mut area2 = 0i128;
        for j in 0..g.rows() {
            for i in 0..g.cols() {
                if g.is_interior(i, j) {
                    let r = g.cell_rect(i, j);
                    area2 += 2 * (r.x.len() as i128) * (r.y.len() as i128);
                }
            }
        }
        prop_assert_eq!(area2, s.area2());
    }

    #[test]
    fn deterministic_and_round_trips(seed in 0u64..10_000) {
        let s = scene(seed);
        let text = scene_to_json(&s);
        prop_assert_eq!(&scene_from_json(&text).unwrap(), &s);
        let a = Decomposition::build(&s, 2).unwrap();
        let b = Decomposition::build(&scene_from_json(&text).unwrap(), 2).unwrap();
        prop_assert_eq!(decomposition_to_json(&a), decomposition_to_json(&b));
        prop_assert_eq!(a, b);
    }
}

//! Random simple orthogonal polygons for property tests.
//!
//! Scenes are grown as polyominoes on a grid with random row heights and
//! column widths, then traced into a single ring. Growth attempts that pinch
//! or enclose a hole are discarded.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{Rect, Scene};

#[derive(Copy, Clone, Debug)]
pub struct RandomSceneParams {
    pub max_vertices: usize,
    pub grid: usize,
    pub max_cells: usize,
    /// Number of growth seeds; more than one may yield several components.
    pub seeds: usize,
}

impl Default for RandomSceneParams {
    fn default() -> Self {
        RandomSceneParams { max_vertices: 24, grid: 8, max_cells: 24, seeds: 1 }
    }
}

/// A hole-free orthogonal scene with at most `params.max_vertices` vertices.
/// With one seed the result is a single simple polygon.
pub fn random_simple_scene<R: Rng>(rng: &mut R, params: RandomSceneParams) -> Scene {
    loop {
        if let Some(s) = try_grow(rng, params) {
            return s;
        }
    }
}

/// `count` scenes from a fixed seed; identical on every platform.
pub fn seeded_scenes(seed: u64, count: usize, params: RandomSceneParams) -> Vec<Scene> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_simple_scene(&mut rng, params)).collect()
}

fn try_grow<R: Rng>(rng: &mut R, params: RandomSceneParams) -> Option<Scene> {
    let n = params.grid;
    // Input units 1..=3, doubled.
    let mut xs = vec![0i64];
    let mut ys = vec![0i64];
    for _ in 0..n {
        xs.push(xs.last().unwrap() + 2 * rng.gen_range(1..=3));
        ys.push(ys.last().unwrap() + 2 * rng.gen_range(1..=3));
    }
    let target = rng.gen_range((params.max_cells / 2).max(1)..=params.max_cells);
    let mut cells: Vec<(usize, usize)> = Vec::new();
    while cells.len() < params.seeds.max(1) {
        let c = (rng.gen_range(0..n), rng.gen_range(0..n));
        if !cells.contains(&c) {
            cells.push(c);
        }
    }
    let seeds = cells.len();
    let mut best: Option<Scene> = None;
    let build = |cells: &[(usize, usize)]| {
        let rects: Vec<Rect> =
            cells.iter().map(|&(i, j)| Rect::new(xs[i], ys[j], xs[i + 1], ys[j + 1])).collect();
        Scene::from_rect_union(&rects).ok()
    };
    let mut stalls = 0;
    while cells.len() < target && stalls < 20 {
        let mut frontier: Vec<(usize, usize)> = Vec::new();
        for &(i, j) in &cells {
            let nb = [(i.wrapping_sub(1), j), (i + 1, j), (i, j.wrapping_sub(1)), (i, j + 1)];
            for (a, b) in nb {
                if a < n && b < n && !cells.contains(&(a, b)) && !frontier.contains(&(a, b)) {
                    frontier.push((a, b));
                }
            }
        }
        let Some(&c) = frontier.choose(rng) else { break };
        cells.push(c);
        match build(&cells) {
            Some(s) if s.hole_count() == 0 && s.components().len() <= seeds && s.vertex_count() <= params.max_vertices => {
                best = Some(s);
                stalls = 0;
            }
            _ => {
                cells.pop();
                stalls += 1;
            }
        }
    }
    best.or_else(|| build(&cells)).filter(|s| s.hole_count() == 0 && s.vertex_count() <= params.max_vertices)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_scenes_are_simple_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let s = random_simple_scene(&mut rng, RandomSceneParams { max_vertices: 16, ..Default::default() });
            assert_eq!(s.components().len(), 1);
            assert_eq!(s.hole_count(), 0);
            assert!(s.vertex_count() <= 16);
        }
        for _ in 0..20 {
            let s = random_simple_scene(&mut rng, RandomSceneParams { max_vertices: 16, seeds: 3, ..Default::default() });
            assert!(s.components().len() <= 3);
            assert!(s.vertex_count() <= 16);
        }
        let p = RandomSceneParams::default();
        assert_eq!(seeded_scenes(3, 5, p), seeded_scenes(3, 5, p));
    }
}

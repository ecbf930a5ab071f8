//! Cross-hitting: pick the fewest guard-segments so that every cross has its
//! perpendicular support intersected by a chosen guard.

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decomposition::{Cross, Decomposition, GuardSegment, Orientation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HittingError {
    #[error("crosses {0:?} are not hit by any admissible guard")]
    Infeasible(Vec<usize>),
    #[error("no feasible selection with at most {0} guards")]
    CapExceeded(usize),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Greedy,
    Exact,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HittingSolution {
    /// Guard ids, ascending.
    pub selected: Vec<usize>,
    pub method: Method,
    pub size: usize,
}

impl HittingSolution {
    fn new(mut selected: Vec<usize>, method: Method) -> Self {
        selected.sort_unstable();
        let size = selected.len();
        HittingSolution { selected, method, size }
    }
}

/// Guard `g` hits cross `c` iff it meets the support of `c` perpendicular to `g`.
pub fn hits(g: &GuardSegment, c: &Cross) -> bool {
    g.segment.intersects(c.support_perpendicular_to(g.axis()))
}

#[derive(Clone, Debug)]
pub struct HittingInstance {
    pub guards: Vec<GuardSegment>,
    pub crosses: Vec<Cross>,
    pub filter: Orientation,
    /// Per guard: crosses it hits.
    hit_sets: Vec<FixedBitSet>,
    /// Per cross: guards hitting it.
    hitters: Vec<FixedBitSet>,
}

impl HittingInstance {
    pub fn new(guards: Vec<GuardSegment>, crosses: Vec<Cross>, filter: Orientation) -> Self {
        let (ng, nc) = (guards.len(), crosses.len());
        let mut hit_sets = vec![FixedBitSet::with_capacity(nc); ng];
        let mut hitters = vec![FixedBitSet::with_capacity(ng); nc];
        for (gi, g) in guards.iter().enumerate() {
            for (ci, c) in crosses.iter().enumerate() {
                if hits(g, c) {
                    hit_sets[gi].insert(ci);
                    hitters[ci].insert(gi);
                }
            }
        }
        HittingInstance { guards, crosses, filter, hit_sets, hitters }
    }

    /// Guards admitted by `filter`, renumbered densely in Γ order.
    pub fn from_decomposition(d: &Decomposition, filter: Orientation) -> Self {
        let guards = d
            .guards
            .iter()
            .filter(|g| filter.admits(g.axis()))
            .enumerate()
            .map(|(id, g)| GuardSegment { id, ..g.clone() })
            .collect();
        Self::new(guards, d.crosses.clone(), filter)
    }

    /// Same crosses, restricted to the guards for which `keep` holds.
    pub fn restricted(&self, keep: impl Fn(&GuardSegment) -> bool) -> Self {
        let guards = self
            .guards
            .iter()
            .filter(|g| keep(g))
            .enumerate()
            .map(|(id, g)| GuardSegment { id, ..g.clone() })
            .collect();
        Self::new(guards, self.crosses.clone(), self.filter)
    }

    pub fn hit_set(&self, guard: usize) -> &FixedBitSet {
        &self.hit_sets[guard]
    }

    pub fn uncoverable(&self) -> Vec<usize> {
        (0..self.crosses.len()).filter(|&c| self.hitters[c].is_clear()).collect()
    }

    fn check_feasible(&self) -> Result<(), HittingError> {
        let bad = self.uncoverable();
        if bad.is_empty() {
            Ok(())
        } else {
            Err(HittingError::Infeasible(bad))
        }
    }

    fn all_crosses(&self) -> FixedBitSet {
        let mut all = FixedBitSet::with_capacity(self.crosses.len());
        all.insert_range(..);
        all
    }

    /// Classic greedy set cover; ties go to the smaller guard id.
    pub fn solve_greedy(&self) -> Result<HittingSolution, HittingError> {
        self.check_feasible()?;
        let mut uncovered = self.all_crosses();
        let mut chosen = Vec::new();
        while !uncovered.is_clear() {
            let (best, _) = self
                .hit_sets
                .iter()
                .enumerate()
                .map(|(g, s)| (g, s.intersection(&uncovered).count()))
                .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
                .expect("feasible instance has guards");
            uncovered.difference_with(&self.hit_sets[best]);
            chosen.push(best);
        }
        Ok(HittingSolution::new(chosen, Method::Greedy))
    }

    /// Guards not dominated by another guard: g is dropped if some g' hits a
    /// strict superset, or the same set with a smaller id.
    pub fn undominated(&self) -> FixedBitSet {
        let n = self.guards.len();
        let mut keep = FixedBitSet::with_capacity(n);
        'outer: for g in 0..n {
            if self.hit_sets[g].is_clear() {
                continue;
            }
            for h in 0..n {
                if h == g {
                    continue;
                }
                if self.hit_sets[g].is_subset(&self.hit_sets[h])
                    && (h < g || self.hit_sets[g] != self.hit_sets[h])
                {
                    continue 'outer;
                }
            }
            keep.insert(g);
        }
        keep
    }

    /// Minimum-cardinality selection with at most `cap` guards.
    ///
    /// Search runs over undominated guards by iterative deepening; among the
    /// optimal selections of that reduced set the lexicographically least one
    /// is returned.
    pub fn solve_exact(&self, cap: usize) -> Result<HittingSolution, HittingError> {
        self.check_feasible()?;
        let allowed = self.undominated();
        let all = self.all_crosses();
        let mut search = Search { inst: self, nodes: 0 };
        let size = (0..=cap)
            .find(|&s| search.feasible(&all, s, &allowed))
            .ok_or(HittingError::CapExceeded(cap))?;
        // Lexicographically least: fix elements one at a time in ascending id order.
        let mut chosen = Vec::with_capacity(size);
        let mut uncovered = all;
        let mut rest = allowed.clone();
        while chosen.len() < size {
            let left = size - chosen.len() - 1;
            let pick = rest
                .ones()
                .find(|&g| {
                    let mut u = uncovered.clone();
                    u.difference_with(&self.hit_sets[g]);
                    let mut later = rest.clone();
                    later.set_range(..g + 1, false);
                    search.feasible(&u, left, &later)
                })
                .expect("size was shown feasible");
            uncovered.difference_with(&self.hit_sets[pick]);
            rest.set_range(..pick + 1, false);
            chosen.push(pick);
            if uncovered.is_clear() {
                break;
            }
        }
        Ok(HittingSolution::new(chosen, Method::Exact))
    }

    /// Every selection of exactly `size` guards that hits all crosses, up to
    /// `limit` results; `size` should be the optimum so that every result is
    /// minimal. Each set is produced once, in no particular order.
    pub fn enumerate_covers(&self, size: usize, limit: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut allowed = FixedBitSet::with_capacity(self.guards.len());
        allowed.insert_range(..);
        let mut chosen = Vec::new();
        self.enumerate_rec(&self.all_crosses(), size, &mut allowed, &mut chosen, &mut out, limit);
        for s in out.iter_mut() {
            s.sort_unstable();
        }
        out.sort();
        out
    }

    fn enumerate_rec(
        &self,
        uncovered: &FixedBitSet,
        budget: usize,
        allowed: &mut FixedBitSet,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        if uncovered.is_clear() {
            if budget == 0 {
                out.push(chosen.clone());
            }
            return;
        }
        if budget == 0 {
            return;
        }
        let Some(c) = uncovered
            .ones()
            .min_by_key(|&c| self.hitters[c].intersection(allowed).count())
        else {
            return;
        };
        let cands: Vec<usize> = self.hitters[c].intersection(allowed).collect();
        let saved = allowed.clone();
        for g in cands {
            let mut u = uncovered.clone();
            u.difference_with(&self.hit_sets[g]);
            allowed.set(g, false);
            chosen.push(g);
            self.enumerate_rec(&u, budget - 1, allowed, chosen, out, limit);
            chosen.pop();
            // g stays banned for the following siblings.
        }
        *allowed = saved;
    }
}

struct Search<'a> {
    inst: &'a HittingInstance,
    nodes: u64,
}

impl Search<'_> {
    /// Can `uncovered` be hit by at most `budget` guards from `allowed`?
    fn feasible(&mut self, uncovered: &FixedBitSet, budget: usize, allowed: &FixedBitSet) -> bool {
        self.nodes += 1;
        if uncovered.is_clear() {
            return true;
        }
        if budget == 0 {
            return false;
        }
        // Pairwise guard-disjoint crosses each need their own guard.
        let mut packing = 0;
        let mut used = FixedBitSet::with_capacity(self.inst.guards.len());
        let mut best: Option<(usize, usize)> = None;
        for c in uncovered.ones() {
            let cand = self.inst.hitters[c].intersection(allowed).count();
            if cand == 0 {
                return false;
            }
            if best.is_none_or(|(_, n)| cand < n) {
                best = Some((c, cand));
            }
            let mut cs = self.inst.hitters[c].clone();
            cs.intersect_with(allowed);
            if cs.is_disjoint(&used) {
                used.union_with(&cs);
                packing += 1;
                if packing > budget {
                    return false;
                }
            }
        }
        let (c, _) = best.expect("uncovered is nonempty");
        let mut cands: Vec<(usize, usize)> = self.inst.hitters[c]
            .intersection(allowed)
            .map(|g| (g, self.inst.hit_sets[g].intersection(uncovered).count()))
            .collect();
        cands.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        cands.into_iter().any(|(g, _)| {
            let mut u = uncovered.clone();
            u.difference_with(&self.inst.hit_sets[g]);
            self.feasible(&u, budget - 1, allowed)
        })
    }
}

/// Recomputes the hit relation geometrically; independent of the solver bitsets.
pub fn verify_hitting(instance: &HittingInstance, solution: &HittingSolution) -> bool {
    let Some(guards) = solution.selected.iter().map(|&g| instance.guards.get(g)).collect::<Option<Vec<_>>>() else {
        return false;
    };
    instance.crosses.iter().all(|c| guards.iter().any(|g| hits(g, c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::build_instance;
    use crate::geometry::{validate_scene, Axis, Interval, OrthoSegment, Point, Rect, Scene};

    fn u() -> Scene {
        validate_scene(&[(vec![(0, 0), (12, 0), (12, 8), (8, 8), (8, 3), (4, 3), (4, 8), (0, 8)], vec![])]).unwrap()
    }

    fn rect() -> Scene {
        validate_scene(&[(vec![(0, 0), (10, 0), (10, 6), (0, 6)], vec![])]).unwrap()
    }

    fn guard_at(inst: &HittingInstance, seg: OrthoSegment) -> usize {
        inst.guards.iter().find(|g| g.segment == seg).unwrap().id
    }

    #[test]
    fn u_instance_shape() {
        let inst = build_instance(&u(), 2, Orientation::Both).unwrap();
        assert_eq!((inst.guards.len(), inst.crosses.len()), (8, 5));
        let floor = guard_at(&inst, OrthoSegment::horizontal(6, 0, 24));
        assert_eq!(inst.hit_set(floor).count_ones(..), 5);
        let h = build_instance(&u(), 2, Orientation::Horizontal).unwrap();
        assert_eq!(h.guards.len(), 4);
        assert!(h.uncoverable().is_empty());
    }

    #[test]
    fn hit_examples() {
        let inst = build_instance(&u(), 2, Orientation::Both).unwrap();
        let right_wall = &inst.guards[guard_at(&inst, OrthoSegment::vertical(16, 0, 16))];
        let left_tower = inst.crosses.iter().find(|c| c.point.y == 11 && c.point.x < 8).unwrap();
        assert!(hits(right_wall, left_tower));
        let top_left = &inst.guards[guard_at(&inst, OrthoSegment::horizontal(16, 0, 8))];
        let slab_right = inst.crosses.iter().find(|c| c.point.y == 3 && c.point.x > 16).unwrap();
        assert!(!hits(top_left, slab_right));
        let r = build_instance(&rect(), 2, Orientation::Both).unwrap();
        assert!(r.guards.iter().all(|g| hits(g, &r.crosses[0])));
    }

    #[test]
    fn solver_examples() {
        let inst = build_instance(&u(), 2, Orientation::Both).unwrap();
        assert_eq!(inst.solve_greedy().unwrap().size, 1);
        let exact = inst.solve_exact(4).unwrap();
        assert_eq!(exact.size, 1);
        assert!(verify_hitting(&inst, &exact));
        let r = build_instance(&rect(), 2, Orientation::Both).unwrap();
        assert_eq!(r.solve_greedy().unwrap().size, 1);
        assert_eq!(r.solve_exact(2).unwrap().size, 1);
        let empty = HittingSolution::new(vec![], Method::Exact);
        assert!(!verify_hitting(&r, &empty));
        let only = HittingSolution::new(vec![guard_at(&inst, OrthoSegment::horizontal(16, 0, 8))], Method::Exact);
        assert!(!verify_hitting(&inst, &only));
    }

    fn synthetic_cross(id: usize, x: i64, y: i64) -> Cross {
        Cross {
            id,
            point: Point::new(x, y),
            h_slice: id,
            h_support: OrthoSegment::horizontal(y, x - 1, x + 1),
            v_slice: id,
            v_support: OrthoSegment::vertical(x, y - 1, y + 1),
            pixel: Rect::new(x - 1, y - 1, x + 1, y + 1),
        }
    }

    fn guard(id: usize, seg: OrthoSegment) -> GuardSegment {
        GuardSegment { id, segment: seg, origin_edges: vec![id] }
    }

    #[test]
    fn disjoint_crosses_need_two() {
        let crosses = vec![synthetic_cross(0, 1, 1), synthetic_cross(1, 11, 11)];
        let guards = vec![
            guard(0, OrthoSegment::horizontal(0, 0, 2)),
            guard(1, OrthoSegment::horizontal(10, 10, 12)),
            guard(2, OrthoSegment::vertical(12, 10, 12)),
        ];
        let inst = HittingInstance::new(guards, crosses, Orientation::Both);
        assert_eq!(inst.solve_greedy().unwrap().size, 2);
        let exact = inst.solve_exact(3).unwrap();
        assert_eq!(exact.selected, vec![0, 1]);
        assert_eq!(inst.enumerate_covers(2, 10), vec![vec![0, 1], vec![0, 2]]);
        assert_eq!(inst.solve_exact(1).unwrap_err(), HittingError::CapExceeded(1));
    }

    #[test]
    fn infeasible_reported() {
        let crosses = vec![synthetic_cross(0, 1, 1), synthetic_cross(1, 31, 31)];
        let guards = vec![guard(0, OrthoSegment::horizontal(0, 0, 2))];
        let inst = HittingInstance::new(guards, crosses, Orientation::Horizontal);
        assert_eq!(inst.solve_greedy().unwrap_err(), HittingError::Infeasible(vec![1]));
        assert_eq!(inst.solve_exact(5).unwrap_err(), HittingError::Infeasible(vec![1]));
    }

    #[test]
    fn greedy_can_lose_to_exact() {
        // Textbook bad case: one big guard hits the middle of both rows, two
        // row guards cover everything.
        let mut crosses = Vec::new();
        for (i, x) in [1, 3, 5, 7].into_iter().enumerate() {
            crosses.push(synthetic_cross(2 * i, x, 1));
            crosses.push(synthetic_cross(2 * i + 1, x, 21));
        }
        let guards = vec![
            guard(0, OrthoSegment::horizontal(0, 0, 8)),
            guard(1, OrthoSegment::horizontal(20, 0, 8)),
            guard(2, OrthoSegment::new(Axis::Horizontal, 2, Interval::new(3, 7))),
        ];
        let inst = HittingInstance::new(guards, crosses, Orientation::Both);
        assert_eq!(inst.solve_exact(3).unwrap().selected, vec![0, 1]);
    }
}

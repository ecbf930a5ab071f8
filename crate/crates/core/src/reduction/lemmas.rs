//! Empirical checks of the structural claims behind the reduction on one
//! concrete instance, using exact hitting-set optima.

use serde::{Deserialize, Serialize};

use super::gadgets::ReductionPlan;
use super::ReductionError;
use crate::decomposition::{build_instance, Orientation};
use crate::geometry::{Axis, OrthoSegment, Rect, Scene};

/// Upper bound on transmitters tried by the exact solver.
const SOLVER_CAP: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub optimum_horizontal: usize,
    pub optimum_unrestricted: usize,
    pub optimum_outside_edge_gadgets: usize,
    pub optimal_covers_checked: usize,
    /// The enumeration of optimal covers hit its limit.
    pub truncated: bool,
    /// Vertex gadgets (summed over covers) met by exactly one transmitter.
    pub single_transmitter_gadgets: usize,
}

fn touches(s: &OrthoSegment, r: &Rect) -> bool {
    let (along, across) = match s.axis {
        Axis::Horizontal => (r.x, r.y),
        Axis::Vertical => (r.y, r.x),
    };
    across.contains(s.fixed) && along.meets(&s.span)
}

/// Checks on `scene` (built from `plan`):
/// (a) horizontal transmitters are as good as arbitrary ones;
/// (b) some optimum avoids every edge gadget;
/// (c) in every optimal horizontal cover that avoids edge gadgets, a vertex
///     gadget met by exactly one transmitter has it in its middle box.
///
/// At most `cover_limit` optimal covers are enumerated for (c).
pub fn check_structural_lemmas(
    scene: &Scene,
    plan: &ReductionPlan,
    cover_limit: usize,
) -> Result<LemmaReport, ReductionError> {
    let k = plan.k;
    let horizontal = build_instance(scene, k, Orientation::Horizontal)?;
    let unrestricted = build_instance(scene, k, Orientation::Both)?;
    let opt_h = horizontal.solve_exact(SOLVER_CAP)?.size;
    let opt_all = unrestricted.solve_exact(SOLVER_CAP)?.size;
    if opt_all != opt_h {
        return Err(ReductionError::LemmaViolated {
            lemma: "horizontal transmitters suffice".into(),
            witness: format!("optimum {opt_h} with horizontal transmitters, {opt_all} without restriction"),
        });
    }

    let edge_boxes = plan.edge_boxes();
    let outside = horizontal.restricted(|g| !edge_boxes.iter().any(|r| touches(&g.segment, r)));
    let opt_out = match outside.solve_exact(SOLVER_CAP) {
        Ok(s) => s.size,
        Err(e) => {
            return Err(ReductionError::LemmaViolated {
                lemma: "no transmitter in an edge gadget".into(),
                witness: format!("without edge-gadget transmitters: {e}"),
            })
        }
    };
    if opt_out != opt_h {
        return Err(ReductionError::LemmaViolated {
            lemma: "no transmitter in an edge gadget".into(),
            witness: format!("optimum {opt_h}, but {opt_out} when edge gadgets are avoided"),
        });
    }

    let covers = outside.enumerate_covers(opt_h, cover_limit);
    let gadgets: Vec<_> = plan.vertex_gadgets().collect();
    let mut singles = 0;
    for cover in &covers {
        for (g, rects) in &gadgets {
            let mut inside = cover.iter().filter(|&&i| rects.iter().any(|r| touches(&outside.guards[i].segment, r)));
            let (Some(&only), None) = (inside.next(), inside.next()) else { continue };
            singles += 1;
            let middle = g.boxes[g.middle_box.expect("vertex gadget")].scaled(2);
            let seg = &outside.guards[only].segment;
            if !middle.y.contains(seg.fixed) {
                return Err(ReductionError::LemmaViolated {
                    lemma: "a lone transmitter sits in the middle box".into(),
                    witness: format!("{:?} is guarded only by the transmitter at y = {} in cover {cover:?}", g.kind, seg.fixed),
                });
            }
        }
    }
    Ok(LemmaReport {
        optimum_horizontal: opt_h,
        optimum_unrestricted: opt_all,
        optimum_outside_edge_gadgets: opt_out,
        optimal_covers_checked: covers.len(),
        truncated: covers.len() >= cover_limit,
        single_transmitter_gadgets: singles,
    })
}

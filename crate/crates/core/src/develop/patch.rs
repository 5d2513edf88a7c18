use crate::coords::{validate_generic, CoordinateTuple};
use crate::mobius::ProjectivePoint;
use crate::surface::{HalfEdge, TriangleId, Triangulation};

use super::{continuation, DevelopError, DualPath};

pub const DEFAULT_PATCH_BUDGET: usize = 100_000;

/// One triangle of the universal cover near the base triangle.
#[derive(Debug, Clone)]
pub struct PatchTriangle {
    pub triangle: TriangleId,
    pub flags: [ProjectivePoint; 3],
    /// Dual path from the base triangle (triangle 0).
    pub word: DualPath,
}

/// All universal-cover triangles within dual distance `depth` of the base
/// triangle, developed from `(0, 1, ∞)`, in breadth-first order.
pub fn develop_patch(
    tri: &Triangulation,
    coords: &CoordinateTuple,
    depth: usize,
    budget: usize,
) -> Result<Vec<PatchTriangle>, DevelopError> {
    validate_generic(coords, tri).map_err(DevelopError::NotGeneric)?;
    let base = [
        ProjectivePoint::zero(),
        ProjectivePoint::one(),
        ProjectivePoint::INFINITY,
    ];
    let mut out = vec![PatchTriangle {
        triangle: 0,
        flags: base,
        word: DualPath::empty(0),
    }];
    // (index into `out`, half-edge entered through)
    let mut frontier: Vec<(usize, Option<HalfEdge>)> = vec![(0, None)];
    for _ in 0..depth {
        let mut next = Vec::new();
        for (idx, entered) in frontier {
            let parent = out[idx].clone();
            for h in tri.triangle(parent.triangle) {
                if Some(h) == entered {
                    continue;
                }
                let Some(g) = tri.twin(h) else { continue };
                let x = coords.get(tri.arc_of(h).unwrap()).unwrap();
                let flags = continuation(tri, &parent.flags, h, x)?;
                let mut word = parent.word.clone();
                word.crossings.push(h);
                if out.len() >= budget {
                    return Err(DevelopError::PatchTooLarge(budget));
                }
                next.push((out.len(), Some(g)));
                out.push(PatchTriangle {
                    triangle: tri.locate(g).0,
                    flags,
                    word,
                });
            }
        }
        frontier = next;
    }
    Ok(out)
}

use crate::coords::CoordinateTuple;
use crate::mobius::{moebius_between, MobiusError, MoebiusMap, ProjectivePoint};
use crate::surface::{quad_labels, ArcId, DualGraph, HalfEdge, TriangleId, Triangulation};

use super::{continuation, DevelopError, DevelopedComplex};

/// A path in the dual graph: a start triangle and the half-edges crossed,
/// each taken from the side of the triangle being left.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DualPath {
    pub start: TriangleId,
    pub crossings: Vec<HalfEdge>,
}

impl DualPath {
    pub fn empty(start: TriangleId) -> Self {
        Self {
            start,
            crossings: Vec::new(),
        }
    }

    pub fn end(&self, tri: &Triangulation) -> TriangleId {
        match self.crossings.last() {
            Some(&h) => tri.neighbor(h).expect("crossings are interior"),
            None => self.start,
        }
    }

    pub fn is_closed(&self, tri: &Triangulation) -> bool {
        self.end(tri) == self.start
    }

    /// Checks that consecutive crossings chain through shared triangles.
    pub fn is_valid(&self, tri: &Triangulation) -> bool {
        let mut at = self.start;
        for &h in &self.crossings {
            if h >= tri.half_edge_count() || tri.locate(h).0 != at {
                return false;
            }
            match tri.neighbor(h) {
                Some(u) => at = u,
                None => return false,
            }
        }
        true
    }

    pub fn reversed(&self, tri: &Triangulation) -> Self {
        Self {
            start: self.end(tri),
            crossings: self
                .crossings
                .iter()
                .rev()
                .map(|&h| tri.twin(h).expect("interior"))
                .collect(),
        }
    }

    /// Concatenation; `other` must start where `self` ends.
    pub fn then(&self, other: &DualPath) -> Self {
        let mut crossings = self.crossings.clone();
        crossings.extend_from_slice(&other.crossings);
        Self {
            start: self.start,
            crossings,
        }
    }

    /// Path along the spanning tree from the root to `t`.
    pub fn from_root(dual: &DualGraph, tri: &Triangulation, t: TriangleId) -> Self {
        let mut crossings = Vec::new();
        let mut at = t;
        while let Some(h) = dual.parent[at] {
            crossings.push(h);
            at = tri.locate(h).0;
        }
        crossings.reverse();
        Self {
            start: at,
            crossings,
        }
    }

    /// Path through the spanning tree (via its root) from `from` to `to`.
    pub fn in_tree(dual: &DualGraph, tri: &Triangulation, from: TriangleId, to: TriangleId) -> Self {
        Self::from_root(dual, tri, from)
            .reversed(tri)
            .then(&Self::from_root(dual, tri, to))
    }

    /// Loop based at `base` that crosses cotree arc `a` once, from the
    /// triangle of its smaller half-edge, and otherwise stays in the tree.
    pub fn generator_loop(dual: &DualGraph, tri: &Triangulation, base: TriangleId, a: ArcId) -> Self {
        let [h, g] = tri.arc(a).expect("interior arc");
        let near = tri.locate(h).0;
        let far = tri.locate(g).0;
        Self::in_tree(dual, tri, base, near)
            .then(&DualPath {
                start: near,
                crossings: vec![h],
            })
            .then(&Self::in_tree(dual, tri, far, base))
    }

    /// Monodromy of the path: the product of deck maps of the cotree arcs
    /// crossed, in crossing order.
    pub fn holonomy(&self, dev: &DevelopedComplex) -> MoebiusMap {
        self.crossings
            .iter()
            .filter_map(|&h| dev.crossing_map(h))
            .fold(MoebiusMap::identity(), |acc, m| acc.compose(&m))
    }

    /// Flags of the end triangle reached by developing directly along the
    /// path from `start_flags`, without deck maps.
    pub fn develop_along(
        &self,
        tri: &Triangulation,
        coords: &CoordinateTuple,
        start_flags: &[ProjectivePoint; 3],
    ) -> Result<[ProjectivePoint; 3], MobiusError> {
        let mut flags = *start_flags;
        for &h in &self.crossings {
            let x = coords.get(tri.arc_of(h).expect("interior")).expect("complete tuple");
            flags = continuation(tri, &flags, h, x)?;
        }
        Ok(flags)
    }

    /// Monodromy of a closed path computed by direct development: the map
    /// from the start triangle's stored flags to the flags reached at the end.
    pub fn holonomy_by_development(&self, dev: &DevelopedComplex) -> Result<MoebiusMap, MobiusError> {
        let start = dev.flags()[self.start];
        let end = self.develop_along(dev.triangulation(), dev.coords(), &start)?;
        moebius_between(&start, &end)
    }

    /// The same homotopy class of path after flipping arc `a` of `before`
    /// into `after`.
    ///
    /// Closed paths are transported as free loops. Open paths must start
    /// outside the flipped quadrilateral.
    pub fn transport_across_flip(
        &self,
        before: &Triangulation,
        a: ArcId,
        after: &Triangulation,
    ) -> Result<Self, DevelopError> {
        let [h, g] = before.arc(a).ok_or(DevelopError::Transport(format!("arc {a} is not interior")))?;
        let quad = [before.locate(h).0, before.locate(g).0];
        let closed = self.is_closed(before);
        if !closed && quad.contains(&self.start) {
            return Err(DevelopError::Transport(
                "open path starts inside the flipped quadrilateral".into(),
            ));
        }
        let sides: Vec<HalfEdge> = self
            .crossings
            .iter()
            .copied()
            .filter(|&c| before.arc_of(c) != Some(a))
            .collect();
        if sides.is_empty() {
            let start = if quad.contains(&self.start) {
                after.locate(h).0
            } else {
                self.start
            };
            return Ok(Self::empty(start));
        }
        let tri_of = |x: HalfEdge| after.locate(x).0;
        let diagonal_in = |t: TriangleId| if after.locate(h).0 == t { h } else { g };
        let mut crossings = Vec::with_capacity(sides.len() + 2);
        let n = sides.len();
        for (k, &s) in sides.iter().enumerate() {
            crossings.push(s);
            let arrival = tri_of(after.twin(s).expect("interior"));
            let departure = if k + 1 < n {
                Some(tri_of(sides[k + 1]))
            } else if closed {
                Some(tri_of(sides[0]))
            } else {
                None
            };
            if let Some(d) = departure {
                if d != arrival {
                    crossings.push(diagonal_in(arrival));
                }
            }
        }
        let start = if closed { tri_of(sides[0]) } else { self.start };
        Ok(Self { start, crossings })
    }
}

/// A lift of a marked point to the universal cover: the corner of the
/// triangle reached by a dual path from the fundamental domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedVertex {
    pub path: DualPath,
    pub corner: usize,
}

impl LiftedVertex {
    /// Flag assigned to this lift by the framed representation.
    pub fn flag(&self, dev: &DevelopedComplex) -> ProjectivePoint {
        let end = self.path.end(dev.triangulation());
        self.path.holonomy(dev).apply(&dev.flags()[end][self.corner])
    }

    /// Flag obtained by developing directly along the path.
    pub fn flag_by_development(&self, dev: &DevelopedComplex) -> Result<ProjectivePoint, MobiusError> {
        let start = dev.flags()[self.path.start];
        let f = self.path.develop_along(dev.triangulation(), dev.coords(), &start)?;
        Ok(f[self.corner])
    }

    /// The same lift after flipping arc `a` of `before` into `after`. The
    /// path must start outside the flipped quadrilateral.
    pub fn transport_across_flip(
        &self,
        before: &Triangulation,
        a: ArcId,
        after: &Triangulation,
    ) -> Result<Self, DevelopError> {
        let q = quad_labels(before, a)?;
        let end = self.path.end(before);
        let mut path = self.path.transport_across_flip(before, a, after)?;
        if end != q.near && end != q.far {
            return Ok(Self {
                path,
                corner: self.corner,
            });
        }
        let slot = q
            .corners
            .iter()
            .position(|&(t, c)| t == end && c == self.corner)
            .or_else(|| {
                // v3 lives in `far`; its other corners are v0 and v2.
                let (_, j) = before.locate(before.arc(a).unwrap()[1]);
                if end != q.far {
                    return None;
                }
                Some(match (self.corner + 3 - j) % 3 {
                    0 => 0,
                    1 => 2,
                    _ => 3,
                })
            })
            .expect("corner lies in the quadrilateral");
        let [h, g] = after.arc(a).unwrap();
        let (new_near, i) = after.locate(h);
        let (new_far, j) = after.locate(g);
        // After the flip, `new_near` holds (v3, v1, v2) at corners i, i+1,
        // i+2 and `new_far` holds (v1, v3, v0) at corners j, j+1, j+2.
        let in_near = |slot: usize| match slot {
            3 => Some(i),
            1 => Some((i + 1) % 3),
            2 => Some((i + 2) % 3),
            _ => None,
        };
        let in_far = |slot: usize| match slot {
            1 => Some(j),
            3 => Some((j + 1) % 3),
            0 => Some((j + 2) % 3),
            _ => None,
        };
        let here = path.end(after);
        let corner = if here == new_near {
            match in_near(slot) {
                Some(c) => c,
                None => {
                    path.crossings.push(h);
                    in_far(slot).unwrap()
                }
            }
        } else if here == new_far {
            match in_far(slot) {
                Some(c) => c,
                None => {
                    path.crossings.push(g);
                    in_near(slot).unwrap()
                }
            }
        } else {
            return Err(DevelopError::Transport(
                "path does not end in the flipped quadrilateral".into(),
            ));
        };
        Ok(Self { path, corner })
    }
}

/// Closed path based at `base` realizing a word in the cotree generators
/// of `dual` (`(index into dual.cotree, inverted)`).
pub fn generator_word(
    dual: &DualGraph,
    tri: &Triangulation,
    base: TriangleId,
    word: &[(usize, bool)],
) -> DualPath {
    word.iter().fold(DualPath::empty(base), |acc, &(i, inv)| {
        let l = DualPath::generator_loop(dual, tri, base, dual.cotree[i]);
        acc.then(&if inv { l.reversed(tri) } else { l })
    })
}

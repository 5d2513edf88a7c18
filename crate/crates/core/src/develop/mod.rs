//! Development of a coordinate tuple into a pleated plane.
//!
//! Each triangle of the fundamental domain receives three ideal vertices on
//! CP¹, starting from the base triangle at `(0, 1, ∞)` and crossing tree
//! arcs one at a time: the apex across arc `a` is the unique point making
//! the quadrilateral's cross-ratio equal to `x_a`. Crossing a cotree arc
//! lands on a translate of the fundamental domain; the Möbius map realizing
//! that translate is the monodromy of the corresponding loop.

mod nondegen;
mod patch;
mod path;

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coords::{validate_generic, CoordinateTuple, GenericityViolation};
use crate::mobius::{
    cross_ratio, moebius_between, solve_fourth, MobiusError, MoebiusMap, ProjectivePoint,
    PROJECTIVE_TOL,
};
use crate::surface::{
    dual_graph_rooted, quad_labels, ArcId, DualGraph, HalfEdge, SurfaceError, TriangleId,
    Triangulation, VertexId,
};

pub use nondegen::{check_nondegeneracy, nondegeneracy_certificate, Certificate, Degeneracy};
pub use patch::{develop_patch, PatchTriangle, DEFAULT_PATCH_BUDGET};
pub use path::{generator_word, DualPath, LiftedVertex};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DevelopError {
    #[error("coordinates are not generic: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    NotGeneric(Vec<GenericityViolation>),
    #[error("internal failure while developing: {0}")]
    Mobius(#[from] MobiusError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("developed triangle {0} has coinciding vertices")]
    DegenerateTriangle(TriangleId),
    #[error("patch exceeds the budget of {0} triangles")]
    PatchTooLarge(usize),
    #[error("path cannot be transported: {0}")]
    Transport(String),
}

/// Where to pin the base triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DevelopOptions {
    pub base: TriangleId,
    /// Corner of the base triangle sent to `0`; the next two go to `1, ∞`.
    pub rotation: usize,
}

/// Fundamental-domain development plus deck maps.
#[derive(Debug, Clone)]
pub struct DevelopedComplex {
    tri: Triangulation,
    coords: CoordinateTuple,
    dual: DualGraph,
    flags: Vec<[ProjectivePoint; 3]>,
    deck: BTreeMap<ArcId, MoebiusMap>,
}

/// Flags of the triangle across `h`, given the flags of the triangle
/// containing `h`.
pub(crate) fn continuation(
    tri: &Triangulation,
    flags: &[ProjectivePoint; 3],
    h: HalfEdge,
    x: Complex64,
) -> Result<[ProjectivePoint; 3], MobiusError> {
    let (_, i) = tri.locate(h);
    let g = tri.twin(h).expect("interior half-edge");
    let (_, j) = tri.locate(g);
    let v0 = flags[(i + 1) % 3];
    let v1 = flags[(i + 2) % 3];
    let v2 = flags[i];
    let v3 = solve_fourth(&v0, &v1, &v2, x)?;
    let mut out = [v0; 3];
    out[j] = v0;
    out[(j + 1) % 3] = v2;
    out[(j + 2) % 3] = v3;
    Ok(out)
}

fn base_triple(rotation: usize) -> [ProjectivePoint; 3] {
    let std = [
        ProjectivePoint::zero(),
        ProjectivePoint::one(),
        ProjectivePoint::INFINITY,
    ];
    let mut out = std;
    for (k, p) in std.into_iter().enumerate() {
        out[(rotation + k) % 3] = p;
    }
    out
}

pub fn develop(tri: &Triangulation, coords: &CoordinateTuple) -> Result<DevelopedComplex, DevelopError> {
    develop_with(tri, coords, DevelopOptions::default())
}

pub fn develop_with(
    tri: &Triangulation,
    coords: &CoordinateTuple,
    options: DevelopOptions,
) -> Result<DevelopedComplex, DevelopError> {
    validate_generic(coords, tri).map_err(DevelopError::NotGeneric)?;
    let dual = dual_graph_rooted(tri, options.base);
    let mut flags = vec![[ProjectivePoint::INFINITY; 3]; tri.triangle_count()];
    flags[options.base] = base_triple(options.rotation);
    for &t in dual.order.iter().skip(1) {
        let h = dual.parent[t].expect("non-root triangles have a parent");
        let (p, _) = tri.locate(h);
        let x = coords.get(tri.arc_of(h).expect("tree arcs are interior")).unwrap();
        flags[t] = continuation(tri, &flags[p], h, x)?;
    }
    for (t, f) in flags.iter().enumerate() {
        let distinct = !f[0].approx_eq(&f[1], PROJECTIVE_TOL)
            && !f[1].approx_eq(&f[2], PROJECTIVE_TOL)
            && !f[0].approx_eq(&f[2], PROJECTIVE_TOL);
        if !distinct {
            return Err(DevelopError::DegenerateTriangle(t));
        }
    }
    let mut deck = BTreeMap::new();
    for &a in &dual.cotree {
        let [h, g] = tri.arc(a).expect("interior arc");
        let (near, _) = tri.locate(h);
        let (far, _) = tri.locate(g);
        let cont = continuation(tri, &flags[near], h, coords.get(a).unwrap())?;
        deck.insert(a, moebius_between(&flags[far], &cont)?);
    }
    Ok(DevelopedComplex {
        tri: tri.clone(),
        coords: coords.clone(),
        dual,
        flags,
        deck,
    })
}

impl DevelopedComplex {
    pub fn triangulation(&self) -> &Triangulation {
        &self.tri
    }

    pub fn coords(&self) -> &CoordinateTuple {
        &self.coords
    }

    pub fn dual(&self) -> &DualGraph {
        &self.dual
    }

    /// Ideal vertices of each fundamental-domain triangle, by corner.
    pub fn flags(&self) -> &[[ProjectivePoint; 3]] {
        &self.flags
    }

    /// Deck map of each cotree arc: sends the stored far triangle onto its
    /// continuation across the arc from the near triangle.
    pub fn deck(&self) -> &BTreeMap<ArcId, MoebiusMap> {
        &self.deck
    }

    /// Copy with one stored flag replaced; deck maps are kept as they are.
    pub fn with_flag(&self, t: TriangleId, corner: usize, p: ProjectivePoint) -> Self {
        let mut out = self.clone();
        out.flags[t][corner % 3] = p;
        out
    }

    /// Monodromy contribution of crossing half-edge `h`.
    pub(crate) fn crossing_map(&self, h: HalfEdge) -> Option<MoebiusMap> {
        let a = self.tri.arc_of(h)?;
        let g = self.deck.get(&a)?;
        let [lower, _] = self.tri.arc(a)?;
        Some(if h == lower { *g } else { g.inverse() })
    }
}

/// The framed representation `(ρ, β_ρ)` on a free basis of π₁.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FramedRepresentation {
    /// One generator per cotree arc.
    pub generators: Vec<Generator>,
    /// Flag of each marked point at its canonical occurrence.
    pub framing: BTreeMap<VertexId, ProjectivePoint>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Generator {
    pub arc: ArcId,
    pub matrix: MoebiusMap,
    /// Matrices are determined only up to sign.
    pub sign_ambiguous: bool,
}

impl FramedRepresentation {
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Evaluates a word `[(generator index, inverted)]` left to right.
    pub fn evaluate(&self, word: &[(usize, bool)]) -> MoebiusMap {
        word.iter().fold(MoebiusMap::identity(), |acc, &(i, inv)| {
            let g = self.generators[i].matrix;
            acc.compose(&if inv { g.inverse() } else { g })
        })
    }
}

pub fn monodromy(dev: &DevelopedComplex) -> FramedRepresentation {
    FramedRepresentation {
        generators: dev
            .deck
            .iter()
            .map(|(&arc, &matrix)| Generator {
                arc,
                matrix,
                sign_ambiguous: true,
            })
            .collect(),
        framing: framing(dev),
    }
}

/// Canonical occurrence `(triangle, corner)` of every marked point: the
/// lexicographically least one.
pub fn canonical_occurrences(tri: &Triangulation) -> BTreeMap<VertexId, (TriangleId, usize)> {
    let mut out = BTreeMap::new();
    for t in 0..tri.triangle_count() {
        for c in 0..3 {
            out.entry(tri.corner_vertex(t, c)).or_insert((t, c));
        }
    }
    out
}

pub fn framing(dev: &DevelopedComplex) -> BTreeMap<VertexId, ProjectivePoint> {
    canonical_occurrences(&dev.tri)
        .into_iter()
        .map(|(v, (t, c))| (v, dev.flags[t][c]))
        .collect()
}

/// Largest projective mismatch between stored flags and their continuation
/// across every interior arc, transported by the stored deck map on cotree
/// arcs.
pub fn verify_equivariance(dev: &DevelopedComplex) -> f64 {
    let mut worst: f64 = 0.0;
    for a in dev.tri.arcs() {
        let [h, g] = dev.tri.arc(a).unwrap();
        let (near, _) = dev.tri.locate(h);
        let (far, _) = dev.tri.locate(g);
        let cont = match continuation(&dev.tri, &dev.flags[near], h, dev.coords.get(a).unwrap()) {
            Ok(c) => c,
            Err(_) => return f64::INFINITY,
        };
        let stored = match dev.deck.get(&a) {
            Some(m) => dev.flags[far].map(|p| m.apply(&p)),
            None => dev.flags[far],
        };
        for k in 0..3 {
            worst = worst.max(cont[k].distance(&stored[k]));
        }
    }
    worst
}

/// Reads the cross-ratio of every quadrilateral back off the development.
pub fn extract_coordinates(dev: &DevelopedComplex) -> Result<CoordinateTuple, DevelopError> {
    let mut values = BTreeMap::new();
    for a in dev.tri.arcs() {
        let q = quad_labels(&dev.tri, a)?;
        let [c0, c1, c2, c3] = q.corners;
        let near = &dev.flags[q.near];
        let mut v3 = dev.flags[c3.0][c3.1];
        if let Some(m) = dev.deck.get(&a) {
            v3 = m.apply(&v3);
        }
        let x = cross_ratio(&near[c0.1], &near[c1.1], &near[c2.1], &v3)?
            .finite()
            .ok_or(MobiusError::DegenerateQuadruple)?;
        values.insert(a, x);
    }
    Ok(CoordinateTuple::new(&dev.tri, values))
}

/// Shear and bend of one arc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pleat {
    /// `ln|x_a|`.
    pub shear: f64,
    /// `arg x_a` in `[0, 2π)`.
    pub bend: f64,
}

impl Pleat {
    pub fn of(x: Complex64) -> Self {
        let mut bend = x.arg();
        if bend < 0.0 {
            bend += std::f64::consts::TAU;
        }
        if bend >= std::f64::consts::TAU {
            bend = 0.0;
        }
        Self {
            shear: x.norm().ln(),
            bend,
        }
    }

    pub fn reconstruct(&self) -> Complex64 {
        Complex64::from_polar(self.shear.exp(), self.bend)
    }
}

pub type PleatData = BTreeMap<ArcId, Pleat>;

pub fn pleat_data(coords: &CoordinateTuple) -> PleatData {
    coords.iter().map(|(a, x)| (a, Pleat::of(x))).collect()
}

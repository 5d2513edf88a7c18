use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{ArcId, HalfEdge, Signature, SurfaceError, TriangleId, VertexId};

/// One boundary circle as listed in a triangulation file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryCycle {
    pub component: usize,
    /// Unpaired half-edges in cyclic (boundary-orientation) order.
    pub half_edges: Vec<HalfEdge>,
}

/// Raw triangulation as read from or written to JSON.
///
/// Triangle `t` lists three half-edges in counterclockwise order; the
/// half-edge at slot `s` runs from corner `s` to corner `s + 1`. Paired
/// half-edges are glued with opposite orientations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangulationData {
    pub triangles: Vec<[HalfEdge; 3]>,
    pub pairing: Vec<[HalfEdge; 2]>,
    pub boundary: Vec<BoundaryCycle>,
}

/// A structural problem found by [`validate`] or [`Triangulation::new`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    InvalidSignature(String),
    Empty,
    HalfEdgeIds(String),
    Pairing(String),
    SelfGluedTriangle(TriangleId),
    Disconnected,
    InteriorVertex(VertexId),
    NonManifoldVertex(HalfEdge),
    BoundaryListing(String),
    OddGenus(i64),
    GenusMismatch { expected: usize, found: usize },
    ComponentCount { expected: usize, found: usize },
    BoundaryCount { component: usize, expected: usize, found: usize },
    ArcCount { expected: usize, found: usize },
    TriangleCount { expected: usize, found: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            InvalidSignature(s) => write!(f, "invalid signature: {s}"),
            Empty => f.write_str("no triangles"),
            HalfEdgeIds(s) => write!(f, "half-edge ids: {s}"),
            Pairing(s) => write!(f, "pairing: {s}"),
            SelfGluedTriangle(t) => write!(f, "triangle {t} is glued to itself"),
            Disconnected => f.write_str("surface is not connected"),
            InteriorVertex(h) => write!(f, "vertex at half-edge {h} does not lie on the boundary"),
            NonManifoldVertex(h) => write!(f, "vertex at half-edge {h} is not a manifold point"),
            BoundaryListing(s) => write!(f, "boundary listing: {s}"),
            OddGenus(chi) => write!(f, "Euler characteristic {chi} gives no integral genus"),
            GenusMismatch { expected, found } => {
                write!(f, "genus {found}, expected {expected}")
            }
            ComponentCount { expected, found } => {
                write!(f, "{found} boundary components, expected {expected}")
            }
            BoundaryCount {
                component,
                expected,
                found,
            } => write!(
                f,
                "boundary {component} carries {found} marked points, expected {expected}"
            ),
            ArcCount { expected, found } => {
                write!(f, "{found} interior arcs, expected {expected}")
            }
            TriangleCount { expected, found } => {
                write!(f, "{found} triangles, expected {expected}")
            }
        }
    }
}

/// Outcome of [`validate`]; `violations` is empty exactly when valid.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub triangles: usize,
    pub interior_arcs: usize,
    pub boundary_arcs: usize,
    pub vertices: usize,
    pub free_rank: usize,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A boundary arc of the surface: an unpaired half-edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryArc {
    pub id: usize,
    pub component: usize,
    pub half_edge: HalfEdge,
}

/// A structurally valid ideal triangulation with derived incidence tables.
///
/// Ids are dense: interior arcs are numbered by their smaller half-edge,
/// boundary arcs by component and then cyclic order, and the marked point
/// with id `v` is the origin of boundary arc `v`.
#[derive(Debug, Clone)]
pub struct Triangulation {
    data: TriangulationData,
    loc: Vec<(TriangleId, usize)>,
    twin: Vec<Option<HalfEdge>>,
    arc_of: Vec<Option<ArcId>>,
    arcs: Vec<[HalfEdge; 2]>,
    boundary_arcs: Vec<BoundaryArc>,
    vertex_of: Vec<VertexId>,
    genus: usize,
    poles: Vec<usize>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl Triangulation {
    /// Checks every signature-independent invariant and builds the
    /// incidence tables.
    pub fn new(data: TriangulationData) -> Result<Self, SurfaceError> {
        build(data).map_err(SurfaceError::Invalid)
    }

    pub fn data(&self) -> &TriangulationData {
        &self.data
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// Pole orders `n_i = (marked points on boundary i) + 2`.
    pub fn poles(&self) -> &[usize] {
        &self.poles
    }

    /// The signature realized by this triangulation, if it passes the
    /// signature gate.
    pub fn signature(&self) -> Option<Signature> {
        Signature::new(self.genus, self.poles.clone()).ok()
    }

    /// Rank of the free fundamental group, `|arcs| - |triangles| + 1`.
    pub fn free_rank(&self) -> usize {
        self.arcs.len() + 1 - self.data.triangles.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.data.triangles.len()
    }

    pub fn triangle(&self, t: TriangleId) -> [HalfEdge; 3] {
        self.data.triangles[t]
    }

    pub fn half_edge_count(&self) -> usize {
        self.loc.len()
    }

    /// `(triangle, slot)` of a half-edge.
    pub fn locate(&self, h: HalfEdge) -> (TriangleId, usize) {
        self.loc[h]
    }

    pub fn twin(&self, h: HalfEdge) -> Option<HalfEdge> {
        self.twin[h]
    }

    pub fn next(&self, h: HalfEdge) -> HalfEdge {
        let (t, s) = self.loc[h];
        self.data.triangles[t][(s + 1) % 3]
    }

    pub fn prev(&self, h: HalfEdge) -> HalfEdge {
        let (t, s) = self.loc[h];
        self.data.triangles[t][(s + 2) % 3]
    }

    /// Marked point at the start of `h`.
    pub fn origin(&self, h: HalfEdge) -> VertexId {
        self.vertex_of[h]
    }

    /// Marked point at the end of `h`.
    pub fn target(&self, h: HalfEdge) -> VertexId {
        self.vertex_of[self.next(h)]
    }

    /// Marked point at corner `c` of triangle `t`.
    pub fn corner_vertex(&self, t: TriangleId, c: usize) -> VertexId {
        self.vertex_of[self.data.triangles[t][c % 3]]
    }

    pub fn arc_of(&self, h: HalfEdge) -> Option<ArcId> {
        self.arc_of[h]
    }

    pub fn interior_arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// The two half-edges of an interior arc, smaller id first.
    pub fn arc(&self, a: ArcId) -> Option<[HalfEdge; 2]> {
        self.arcs.get(a).copied()
    }

    pub fn arcs(&self) -> impl Iterator<Item = ArcId> + '_ {
        0..self.arcs.len()
    }

    pub fn boundary_arcs(&self) -> &[BoundaryArc] {
        &self.boundary_arcs
    }

    pub fn vertex_count(&self) -> usize {
        self.boundary_arcs.len()
    }

    /// Boundary component carrying a marked point.
    pub fn vertex_component(&self, v: VertexId) -> usize {
        self.boundary_arcs[v].component
    }

    /// Triangle on the other side of `h`, if `h` is interior.
    pub fn neighbor(&self, h: HalfEdge) -> Option<TriangleId> {
        self.twin[h].map(|g| self.loc[g].0)
    }

    /// Stable content hash used to bind coordinate files to a triangulation.
    pub fn id(&self) -> String {
        let bytes = serde_json::to_vec(&self.data).expect("triangulation serializes");
        let digest = Sha256::digest(&bytes);
        hex::encode(&digest[..8])
    }
}

fn build(data: TriangulationData) -> Result<Triangulation, Vec<Violation>> {
    let f = data.triangles.len();
    if f == 0 {
        return Err(vec![Violation::Empty]);
    }
    let n = 3 * f;
    let mut loc = vec![None; n];
    for (t, tri) in data.triangles.iter().enumerate() {
        for (s, &h) in tri.iter().enumerate() {
            if h >= n {
                return Err(vec![Violation::HalfEdgeIds(format!(
                    "id {h} outside 0..{n}"
                ))]);
            }
            if loc[h].is_some() {
                return Err(vec![Violation::HalfEdgeIds(format!("id {h} repeated"))]);
            }
            loc[h] = Some((t, s));
        }
    }
    let loc: Vec<(usize, usize)> = loc.into_iter().map(|x| x.unwrap()).collect();

    let mut twin = vec![None; n];
    for &[a, b] in &data.pairing {
        if a >= n || b >= n {
            return Err(vec![Violation::Pairing(format!("pair ({a}, {b}) out of range"))]);
        }
        if a == b {
            return Err(vec![Violation::Pairing(format!("half-edge {a} paired with itself"))]);
        }
        if twin[a].is_some() || twin[b].is_some() {
            return Err(vec![Violation::Pairing(format!(
                "pair ({a}, {b}) reuses a half-edge"
            ))]);
        }
        twin[a] = Some(b);
        twin[b] = Some(a);
    }

    let mut violations = Vec::new();
    for &[a, b] in &data.pairing {
        if loc[a].0 == loc[b].0 {
            violations.push(Violation::SelfGluedTriangle(loc[a].0));
        }
    }
    if !violations.is_empty() {
        return Err(violations);
    }

    let mut comp = UnionFind::new(f);
    for &[a, b] in &data.pairing {
        comp.union(loc[a].0, loc[b].0);
    }
    if (0..f).any(|t| comp.find(t) != 0) {
        return Err(vec![Violation::Disconnected]);
    }

    let next = |h: usize| {
        let (t, s) = loc[h];
        data.triangles[t][(s + 1) % 3]
    };
    let prev = |h: usize| {
        let (t, s) = loc[h];
        data.triangles[t][(s + 2) % 3]
    };

    // Corners, indexed by the half-edge leaving them, glued into vertices.
    let mut corners = UnionFind::new(n);
    for &[a, b] in &data.pairing {
        corners.union(a, next(b));
        corners.union(next(a), b);
    }

    let boundary: Vec<usize> = (0..n).filter(|&h| twin[h].is_none()).collect();
    let mut out_count = vec![0usize; n];
    let mut in_count = vec![0usize; n];
    for &b in &boundary {
        let o = corners.find(b);
        out_count[o] += 1;
        let t = corners.find(next(b));
        in_count[t] += 1;
    }
    let mut class_size = vec![0usize; n];
    for h in 0..n {
        let r = corners.find(h);
        class_size[r] += 1;
    }
    for h in 0..n {
        let r = corners.find(h);
        if r != h {
            continue;
        }
        if out_count[r] == 0 {
            violations.push(Violation::InteriorVertex(h));
        } else if out_count[r] != 1 || in_count[r] != 1 {
            violations.push(Violation::NonManifoldVertex(h));
        }
    }
    if !violations.is_empty() {
        return Err(violations);
    }
    // The corner fan from the outgoing boundary half-edge must exhaust the
    // vertex; otherwise a closed fan of corners is pinched onto it.
    for &b in &boundary {
        let mut h = b;
        let mut steps = 1;
        while let Some(g) = twin[prev(h)] {
            h = g;
            steps += 1;
            if steps > n {
                break;
            }
        }
        if steps != class_size[corners.find(b)] {
            violations.push(Violation::NonManifoldVertex(b));
        }
    }
    if !violations.is_empty() {
        return Err(violations);
    }

    // Boundary successor: the boundary half-edge leaving the end of `b`.
    let mut leaving = vec![usize::MAX; n];
    for &b in &boundary {
        leaving[corners.find(b)] = b;
    }
    let succ = |b: usize, corners: &mut UnionFind| leaving[corners.find(next(b))];

    let k = data.boundary.len();
    let mut seen_component = vec![false; k];
    let mut listed = vec![false; n];
    for cycle in &data.boundary {
        if cycle.component >= k || seen_component[cycle.component] {
            violations.push(Violation::BoundaryListing(format!(
                "component label {} invalid or repeated",
                cycle.component
            )));
            continue;
        }
        seen_component[cycle.component] = true;
        if cycle.half_edges.is_empty() {
            violations.push(Violation::BoundaryListing(format!(
                "component {} is empty",
                cycle.component
            )));
            continue;
        }
        for (i, &h) in cycle.half_edges.iter().enumerate() {
            if h >= n || twin[h].is_some() {
                violations.push(Violation::BoundaryListing(format!(
                    "half-edge {h} is not a boundary half-edge"
                )));
                break;
            }
            if listed[h] {
                violations.push(Violation::BoundaryListing(format!(
                    "half-edge {h} listed twice"
                )));
                break;
            }
            listed[h] = true;
            let following = cycle.half_edges[(i + 1) % cycle.half_edges.len()];
            if succ(h, &mut corners) != following {
                violations.push(Violation::BoundaryListing(format!(
                    "component {}: {following} does not follow {h} along the boundary",
                    cycle.component
                )));
                break;
            }
        }
    }
    if let Some(&h) = boundary.iter().find(|&&h| !listed[h]) {
        violations.push(Violation::BoundaryListing(format!(
            "boundary half-edge {h} is not listed"
        )));
    }
    if !violations.is_empty() {
        return Err(violations);
    }

    let interior = data.pairing.len();
    let chi = f as i64 - interior as i64;
    let two_g = 2 - k as i64 - chi;
    if two_g < 0 || two_g % 2 != 0 {
        return Err(vec![Violation::OddGenus(chi)]);
    }
    let mut cycles: Vec<&BoundaryCycle> = data.boundary.iter().collect();
    cycles.sort_by_key(|c| c.component);
    let poles: Vec<usize> = cycles.iter().map(|c| c.half_edges.len() + 2).collect();

    let mut boundary_arcs = Vec::with_capacity(boundary.len());
    for c in &cycles {
        for &h in &c.half_edges {
            boundary_arcs.push(BoundaryArc {
                id: boundary_arcs.len(),
                component: c.component,
                half_edge: h,
            });
        }
    }
    let mut vertex_id = vec![usize::MAX; n];
    for ba in &boundary_arcs {
        let r = corners.find(ba.half_edge);
        vertex_id[r] = ba.id;
    }
    let vertex_of: Vec<usize> = (0..n).map(|h| vertex_id[corners.find(h)]).collect();

    let mut arcs = Vec::with_capacity(interior);
    let mut arc_of = vec![None; n];
    for h in 0..n {
        if let Some(g) = twin[h] {
            if h < g {
                arc_of[h] = Some(arcs.len());
                arc_of[g] = Some(arcs.len());
                arcs.push([h, g]);
            }
        }
    }

    Ok(Triangulation {
        data,
        loc,
        twin,
        arc_of,
        arcs,
        boundary_arcs,
        vertex_of,
        genus: (two_g / 2) as usize,
        poles,
    })
}

/// Checks a triangulation against a signature, reporting every violation.
pub fn validate(data: &TriangulationData, sig: &Signature) -> ValidationReport {
    validate_raw(data, sig.genus(), sig.poles())
}

/// As [`validate`], for a signature that may itself be invalid.
pub fn validate_raw(data: &TriangulationData, genus: usize, poles: &[usize]) -> ValidationReport {
    let mut report = ValidationReport::default();
    let sig = match Signature::new(genus, poles.to_vec()) {
        Ok(s) => s,
        Err(e) => {
            let msg = match e {
                SurfaceError::InvalidSignature(m) => m,
                other => other.to_string(),
            };
            report.violations.push(Violation::InvalidSignature(msg));
            return report;
        }
    };
    let tri = match build(data.clone()) {
        Ok(t) => t,
        Err(v) => {
            report.violations = v;
            return report;
        }
    };
    report.triangles = tri.triangle_count();
    report.interior_arcs = tri.interior_arc_count();
    report.boundary_arcs = tri.boundary_arcs().len();
    report.vertices = tri.vertex_count();
    report.free_rank = report.interior_arcs + 1 - report.triangles;

    if tri.genus() != sig.genus() {
        report.violations.push(Violation::GenusMismatch {
            expected: sig.genus(),
            found: tri.genus(),
        });
    }
    if tri.poles().len() != sig.boundary_count() {
        report.violations.push(Violation::ComponentCount {
            expected: sig.boundary_count(),
            found: tri.poles().len(),
        });
    } else {
        for (i, (&e, &f)) in sig.poles().iter().zip(tri.poles()).enumerate() {
            if e != f {
                report.violations.push(Violation::BoundaryCount {
                    component: i,
                    expected: e - 2,
                    found: f - 2,
                });
            }
        }
    }
    if report.interior_arcs != sig.interior_arc_count() {
        report.violations.push(Violation::ArcCount {
            expected: sig.interior_arc_count(),
            found: report.interior_arcs,
        });
    }
    if report.triangles != sig.triangle_count() {
        report.violations.push(Violation::TriangleCount {
            expected: sig.triangle_count(),
            found: report.triangles,
        });
    }
    report
}

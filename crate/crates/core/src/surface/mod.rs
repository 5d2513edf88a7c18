//! Ideal triangulations of marked bordered surfaces.
//!
//! A surface is described by its [`Signature`] `(g, (n_1, …, n_k))`: genus
//! `g`, `k` boundary circles, the `i`-th carrying `n_i - 2` marked points.
//! Triangulations are stored as half-edge structures; see
//! [`Triangulation`].

mod canonical;
mod dual;
mod flip;
mod triangulation;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use canonical::canonical_triangulation;
pub use dual::{dual_graph, dual_graph_rooted, DualGraph};
pub use flip::{flip, quad_labels, Quad};
pub use triangulation::{
    validate, validate_raw, BoundaryArc, BoundaryCycle, Triangulation, TriangulationData, ValidationReport,
    Violation,
};

pub type HalfEdge = usize;
pub type ArcId = usize;
pub type TriangleId = usize;
pub type VertexId = usize;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SurfaceError {
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("invalid triangulation: {}", join(.0))]
    Invalid(Vec<Violation>),
    #[error("arc {0} is not an interior arc")]
    NotInterior(ArcId),
    #[error("arc {0} is not flippable: both sides lie in triangle {1}")]
    NotFlippable(ArcId, TriangleId),
}

fn join(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// The pair `(g, 𝔫)` of a marked bordered surface.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSignature", into = "RawSignature")]
pub struct Signature {
    genus: usize,
    poles: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawSignature {
    genus: usize,
    poles: Vec<usize>,
}

impl TryFrom<RawSignature> for Signature {
    type Error = SurfaceError;
    fn try_from(r: RawSignature) -> Result<Self, Self::Error> {
        Signature::new(r.genus, r.poles)
    }
}

impl From<Signature> for RawSignature {
    fn from(s: Signature) -> Self {
        RawSignature {
            genus: s.genus,
            poles: s.poles,
        }
    }
}

impl Signature {
    pub fn new(genus: usize, poles: Vec<usize>) -> Result<Self, SurfaceError> {
        if poles.is_empty() {
            return Err(SurfaceError::InvalidSignature(
                "at least one pole is required".into(),
            ));
        }
        if let Some(n) = poles.iter().find(|&&n| n < 3) {
            return Err(SurfaceError::InvalidSignature(format!(
                "pole order {n} is below 3"
            )));
        }
        let chi = 2 - 2 * genus as i64 - poles.len() as i64;
        if chi >= 0 {
            return Err(SurfaceError::InvalidSignature(format!(
                "Euler characteristic {chi} of the punctured surface is non-negative"
            )));
        }
        Ok(Self { genus, poles })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn poles(&self) -> &[usize] {
        &self.poles
    }

    /// Number of boundary components `k`.
    pub fn boundary_count(&self) -> usize {
        self.poles.len()
    }

    /// `2 - 2g - k`.
    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.poles.len() as i64
    }

    /// `m = Σ (n_i - 2)`.
    pub fn marked_points(&self) -> usize {
        self.poles.iter().map(|n| n - 2).sum()
    }

    /// `m + 6g + 3k - 6`.
    pub fn interior_arc_count(&self) -> usize {
        self.marked_points() + 6 * self.genus + 3 * self.poles.len() - 6
    }

    /// `m + 4g + 2k - 4`.
    pub fn triangle_count(&self) -> usize {
        self.marked_points() + 4 * self.genus + 2 * self.poles.len() - 4
    }

    /// Rank `2g + k - 1` of the free fundamental group.
    pub fn free_rank(&self) -> usize {
        2 * self.genus + self.poles.len() - 1
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let poles: Vec<String> = self.poles.iter().map(|n| n.to_string()).collect();
        write!(f, "({}, ({}))", self.genus, poles.join(","))
    }
}

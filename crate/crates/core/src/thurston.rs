//! Grafting data: the crowned surface carried by the shears and the measured
//! lamination carried by the bends, bundled with the framed representation
//! they produce.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::coords::CoordinateTuple;
use crate::develop::{
    develop, extract_coordinates, monodromy, pleat_data, verify_equivariance, DevelopError,
    FramedRepresentation,
};
use crate::surface::{ArcId, Signature, Triangulation};

pub const WITNESS_SCHEMA: &str = "holonomy.witness/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrownedSurfaceShears {
    /// `|x_a|` per interior arc.
    pub shear: BTreeMap<ArcId, f64>,
    pub genus: usize,
    pub poles: Vec<usize>,
}

impl CrownedSurfaceShears {
    pub fn signature(&self) -> Option<Signature> {
        Signature::new(self.genus, self.poles.clone()).ok()
    }
}

/// Weight attached to an infinite leaf. Serialized as the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Weight {
    #[serde(rename = "inf")]
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfiniteLeaf {
    pub boundary_arc: usize,
    pub component: usize,
    pub weight: Weight,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasuredLamination {
    /// Bending angle in `(0, 2π)`; flat arcs are omitted.
    pub finite_leaves: BTreeMap<ArcId, f64>,
    /// Crown sides, one per boundary arc.
    pub infinite_leaves: Vec<InfiniteLeaf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    pub equivariance: f64,
    pub round_trip: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraftingWitness {
    pub schema: String,
    pub triangulation: String,
    pub surface: CrownedSurfaceShears,
    pub lamination: MeasuredLamination,
    pub representation: FramedRepresentation,
    pub residuals: Residuals,
}

impl GraftingWitness {
    pub fn within(&self, tol: f64) -> bool {
        self.residuals.equivariance < tol && self.residuals.round_trip < tol
    }
}

pub fn grafting_data(tri: &Triangulation, coords: &CoordinateTuple) -> Result<GraftingWitness, DevelopError> {
    let dev = develop(tri, coords)?;
    let pleats = pleat_data(coords);
    let surface = CrownedSurfaceShears {
        shear: pleats.iter().map(|(&a, p)| (a, p.shear.exp())).collect(),
        genus: tri.genus(),
        poles: tri.poles().to_vec(),
    };
    let lamination = MeasuredLamination {
        finite_leaves: pleats
            .iter()
            .filter(|(_, p)| p.bend != 0.0)
            .map(|(&a, p)| (a, p.bend))
            .collect(),
        infinite_leaves: tri
            .boundary_arcs()
            .iter()
            .map(|b| InfiniteLeaf {
                boundary_arc: b.id,
                component: b.component,
                weight: Weight::Infinite,
            })
            .collect(),
    };
    let residuals = Residuals {
        equivariance: verify_equivariance(&dev),
        round_trip: extract_coordinates(&dev)?.max_relative_error(coords),
    };
    Ok(GraftingWitness {
        schema: WITNESS_SCHEMA.to_string(),
        triangulation: tri.id(),
        surface,
        lamination,
        representation: monodromy(&dev),
        residuals,
    })
}

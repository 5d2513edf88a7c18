//! Framed monodromy of pleated planes built from cross-ratio coordinates on
//! ideal triangulations of marked bordered surfaces.

pub mod cli;
pub mod coords;
pub mod develop;
pub mod mobius;
pub mod render;
pub mod surface;
pub mod thurston;

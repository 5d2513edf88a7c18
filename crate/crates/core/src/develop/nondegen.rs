use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mobius::{MoebiusMap, ProjectivePoint, PROJECTIVE_TOL};
use crate::surface::Triangulation;

use super::DevelopedComplex;

/// Evidence that a framed representation is non-degenerate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Certificate {
    /// Boundary arcs whose endpoint flags were checked distinct.
    pub boundary_arcs_checked: usize,
    /// Smallest endpoint separation among them.
    pub min_boundary_separation: f64,
    /// Three pairwise distinct flags of the fundamental domain, if present.
    pub distinct_triple: Option<[ProjectivePoint; 3]>,
    /// When only two flags occur: a generator moving that pair.
    pub pair_breaking_generator: Option<usize>,
}

#[derive(Debug, Clone, Error, Serialize, Deserialize)]
pub enum Degeneracy {
    #[error("boundary arc {boundary_arc} has coinciding endpoint flags")]
    D1 { boundary_arc: usize },
    #[error("all flags lie in a pair preserved by all {generators} generators")]
    D2 {
        pair: Vec<ProjectivePoint>,
        generators: usize,
    },
}

fn preserves_pair(m: &MoebiusMap, p: &ProjectivePoint, q: &ProjectivePoint, tol: f64) -> bool {
    let (mp, mq) = (m.apply(p), m.apply(q));
    (mp.approx_eq(p, tol) && mq.approx_eq(q, tol)) || (mp.approx_eq(q, tol) && mq.approx_eq(p, tol))
}

/// Checks the two degeneracy conditions on an arbitrary flag assignment
/// over a fundamental domain together with generator images.
///
/// Boundary arcs are checked first; flags at boundary arc endpoints must be
/// distinct. Then either three distinct flags occur, or exactly two do and
/// some generator fails to preserve them.
pub fn check_nondegeneracy(
    tri: &Triangulation,
    flags: &[[ProjectivePoint; 3]],
    generators: &[MoebiusMap],
    tol: f64,
) -> Result<Certificate, Degeneracy> {
    let mut min_sep = f64::INFINITY;
    for b in tri.boundary_arcs() {
        let (t, s) = tri.locate(b.half_edge);
        let sep = flags[t][s].distance(&flags[t][(s + 1) % 3]);
        if sep < tol {
            return Err(Degeneracy::D1 { boundary_arc: b.id });
        }
        min_sep = min_sep.min(sep);
    }
    let mut distinct: Vec<ProjectivePoint> = Vec::new();
    for p in flags.iter().flatten() {
        if !distinct.iter().any(|q| q.approx_eq(p, tol)) {
            distinct.push(*p);
            if distinct.len() == 3 {
                break;
            }
        }
    }
    let mut cert = Certificate {
        boundary_arcs_checked: tri.boundary_arcs().len(),
        min_boundary_separation: min_sep,
        distinct_triple: None,
        pair_breaking_generator: None,
    };
    match distinct.len() {
        3 => {
            cert.distinct_triple = Some([distinct[0], distinct[1], distinct[2]]);
            Ok(cert)
        }
        2 => {
            let (p, q) = (distinct[0], distinct[1]);
            match generators.iter().position(|m| !preserves_pair(m, &p, &q, tol)) {
                Some(i) => {
                    cert.pair_breaking_generator = Some(i);
                    Ok(cert)
                }
                None => Err(Degeneracy::D2 {
                    pair: vec![p, q],
                    generators: generators.len(),
                }),
            }
        }
        // A single flag forces coinciding boundary endpoints, caught above.
        _ => Err(Degeneracy::D1 { boundary_arc: 0 }),
    }
}

pub fn nondegeneracy_certificate(dev: &DevelopedComplex) -> Result<Certificate, Degeneracy> {
    let generators: Vec<MoebiusMap> = dev.deck().values().copied().collect();
    check_nondegeneracy(dev.triangulation(), dev.flags(), &generators, PROJECTIVE_TOL)
}

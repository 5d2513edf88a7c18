//! Cross-ratio coordinate tuples on a fixed triangulation.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::surface::{flip, quad_labels, ArcId, SurfaceError, Triangulation};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoordsError {
    #[error("coordinates are not generic: {}", join(.0))]
    NotGeneric(Vec<GenericityViolation>),
    #[error("mutation at arc {0} is degenerate: coordinate is -1")]
    MutationDegenerate(ArcId),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

fn join(v: &[GenericityViolation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Clone, PartialEq)]
pub enum GenericityViolation {
    TriangulationMismatch { expected: String, found: String },
    Incomplete(Vec<ArcId>),
    UnknownArc(ArcId),
    Zero(ArcId),
    NonFinite(ArcId),
}

impl fmt::Display for GenericityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::TriangulationMismatch { expected, found } => write!(
                f,
                "tuple is bound to triangulation {found}, expected {expected}"
            ),
            Self::Incomplete(arcs) => write!(f, "incomplete tuple: missing arcs {arcs:?}"),
            Self::UnknownArc(a) => write!(f, "arc {a} is not an interior arc"),
            Self::Zero(a) => write!(f, "zero coordinate at arc {a}"),
            Self::NonFinite(a) => write!(f, "non-finite coordinate at arc {a}"),
        }
    }
}

/// A point of `(C*)^{|T|}`: one cross-ratio per interior arc of the bound
/// triangulation.
#[derive(Debug, Clone, PartialEq)]
pub struct CoordinateTuple {
    triangulation: String,
    values: BTreeMap<ArcId, Complex64>,
}

impl CoordinateTuple {
    pub fn new(tri: &Triangulation, values: BTreeMap<ArcId, Complex64>) -> Self {
        Self {
            triangulation: tri.id(),
            values,
        }
    }

    /// Builds a tuple from values listed in arc-id order.
    pub fn from_values(tri: &Triangulation, values: impl IntoIterator<Item = Complex64>) -> Self {
        Self::new(tri, values.into_iter().enumerate().collect())
    }

    pub fn constant(tri: &Triangulation, value: Complex64) -> Self {
        Self::new(tri, tri.arcs().map(|a| (a, value)).collect())
    }

    pub fn triangulation_id(&self) -> &str {
        &self.triangulation
    }

    pub fn get(&self, a: ArcId) -> Option<Complex64> {
        self.values.get(&a).copied()
    }

    pub fn values(&self) -> &BTreeMap<ArcId, Complex64> {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (ArcId, Complex64)> + '_ {
        self.values.iter().map(|(&a, &x)| (a, x))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest relative deviation `|x_a - y_a| / |y_a|` over shared arcs.
    pub fn max_relative_error(&self, reference: &CoordinateTuple) -> f64 {
        self.values
            .iter()
            .map(|(a, x)| match reference.get(*a) {
                Some(y) => (x - y).norm() / y.norm(),
                None => f64::INFINITY,
            })
            .fold(0.0, f64::max)
    }
}

/// Checks that the tuple is bound to `tri`, covers exactly its interior
/// arcs, and takes values in `C*`.
pub fn validate_generic(
    c: &CoordinateTuple,
    tri: &Triangulation,
) -> Result<(), Vec<GenericityViolation>> {
    let mut v = Vec::new();
    let id = tri.id();
    if c.triangulation != id {
        v.push(GenericityViolation::TriangulationMismatch {
            expected: id,
            found: c.triangulation.clone(),
        });
    }
    let missing: Vec<ArcId> = tri.arcs().filter(|a| !c.values.contains_key(a)).collect();
    if !missing.is_empty() {
        v.push(GenericityViolation::Incomplete(missing));
    }
    for (&a, x) in &c.values {
        if a >= tri.interior_arc_count() {
            v.push(GenericityViolation::UnknownArc(a));
        } else if !(x.re.is_finite() && x.im.is_finite()) {
            v.push(GenericityViolation::NonFinite(a));
        } else if x.norm() == 0.0 {
            v.push(GenericityViolation::Zero(a));
        }
    }
    if v.is_empty() {
        Ok(())
    } else {
        Err(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sampling {
    /// Argument uniform on `[0, 2π)`.
    #[default]
    Complex,
    /// Argument zero: the Fuchsian locus.
    PositiveReal,
}

/// Seeded random generic tuple with `|ln|x_a|| <= log_mod_bound`.
pub fn random_generic(
    tri: &Triangulation,
    seed: u64,
    log_mod_bound: f64,
    sampling: Sampling,
) -> CoordinateTuple {
    assert!(log_mod_bound > 0.0, "log-modulus bound must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = tri.arcs().map(|a| {
        let r = rng.gen_range(-log_mod_bound..=log_mod_bound).exp();
        let x = match sampling {
            Sampling::Complex => Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU)),
            Sampling::PositiveReal => Complex64::new(r, 0.0),
        };
        (a, x)
    });
    CoordinateTuple::new(tri, values.collect())
}

/// Cluster mutation at arc `a`, producing coordinates on `flip(tri, a)`.
///
/// With quad sides `(e01, e12, e23, e30)`: the new diagonal gets `1/x_a`,
/// `e12` and `e30` are multiplied by `1 + x_a`, and `e01`, `e23` by
/// `(1 + 1/x_a)^{-1}`. A side arc occurring twice receives both factors;
/// boundary sides are skipped.
pub fn mutate(
    c: &CoordinateTuple,
    tri: &Triangulation,
    a: ArcId,
) -> Result<(Triangulation, CoordinateTuple), CoordsError> {
    validate_generic(c, tri).map_err(CoordsError::NotGeneric)?;
    let q = quad_labels(tri, a)?;
    let x = c.values[&a];
    let one = Complex64::new(1.0, 0.0);
    if (x + one).norm() == 0.0 {
        return Err(CoordsError::MutationDegenerate(a));
    }
    let grow = one + x;
    let shrink = (one + x.inv()).inv();
    let mut values = c.values.clone();
    values.insert(a, x.inv());
    for (side, factor) in q.side_arcs.iter().zip([shrink, grow, shrink, grow]) {
        if let Some(b) = side {
            *values.get_mut(b).expect("complete tuple") *= factor;
        }
    }
    let flipped = flip(tri, a)?;
    let out = CoordinateTuple::new(&flipped, values);
    Ok((flipped, out))
}

#[derive(Serialize, Deserialize)]
struct CoordinateFile {
    triangulation: String,
    coords: BTreeMap<String, [f64; 2]>,
}

impl Serialize for CoordinateTuple {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CoordinateFile {
            triangulation: self.triangulation.clone(),
            coords: self
                .values
                .iter()
                .map(|(a, x)| (a.to_string(), [x.re, x.im]))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoordinateTuple {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let file = CoordinateFile::deserialize(d)?;
        let mut values = BTreeMap::new();
        for (k, [re, im]) in file.coords {
            let a: ArcId = k
                .parse()
                .map_err(|_| D::Error::custom(format!("arc key {k:?} is not an integer")))?;
            values.insert(a, Complex64::new(re, im));
        }
        Ok(Self {
            triangulation: file.triangulation,
            values,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{canonical_triangulation, Signature};

    fn torus() -> Triangulation {
        canonical_triangulation(&Signature::new(1, vec![3]).unwrap()).unwrap()
    }

    #[test]
    fn genericity() {
        let tri = torus();
        let ones = CoordinateTuple::constant(&tri, Complex64::new(1.0, 0.0));
        assert!(validate_generic(&ones, &tri).is_ok());

        let mut zero = ones.clone();
        zero.values.insert(2, Complex64::new(0.0, 0.0));
        let err = validate_generic(&zero, &tri).unwrap_err();
        assert_eq!(err, vec![GenericityViolation::Zero(2)]);
        assert_eq!(err[0].to_string(), "zero coordinate at arc 2");

        let mut missing = ones.clone();
        missing.values.remove(&1);
        let err = validate_generic(&missing, &tri).unwrap_err();
        assert!(err[0].to_string().starts_with("incomplete tuple"));

        let mut nan = ones.clone();
        nan.values.insert(0, Complex64::new(f64::NAN, 0.0));
        assert_eq!(
            validate_generic(&nan, &tri).unwrap_err(),
            vec![GenericityViolation::NonFinite(0)]
        );

        let other = canonical_triangulation(&Signature::new(0, vec![3, 3, 3]).unwrap()).unwrap();
        assert!(validate_generic(&ones, &other).is_err());
    }

    #[test]
    fn random_is_deterministic_and_bounded() {
        let tri = torus();
        let a = random_generic(&tri, 42, 1.6, Sampling::Complex);
        let b = random_generic(&tri, 42, 1.6, Sampling::Complex);
        assert_eq!(a, b);
        assert_ne!(a, random_generic(&tri, 43, 1.6, Sampling::Complex));
        for (_, x) in a.iter() {
            assert!(x.norm().ln().abs() <= 1.6 + 1e-12);
        }
        let p = random_generic(&tri, 1, 1.6, Sampling::PositiveReal);
        assert!(p.iter().all(|(_, x)| x.im == 0.0 && x.re > 0.0));
        assert!(validate_generic(&p, &tri).is_ok());
    }

    #[test]
    fn mutation_hand_values() {
        // Square with every side an interior arc: pair of pants has quads
        // whose four sides are distinct interior arcs.
        let tri = canonical_triangulation(&Signature::new(0, vec![3, 3, 3]).unwrap()).unwrap();
        let ones = CoordinateTuple::constant(&tri, Complex64::new(1.0, 0.0));
        let mut checked = 0;
        for a in tri.arcs() {
            let q = quad_labels(&tri, a).unwrap();
            let sides: Vec<_> = q.side_arcs.iter().flatten().collect();
            let distinct: std::collections::BTreeSet<_> = sides.iter().collect();
            if distinct.len() != sides.len() {
                continue;
            }
            let (_, m) = mutate(&ones, &tri, a).unwrap();
            assert_eq!(m.get(a).unwrap(), Complex64::new(1.0, 0.0));
            for (k, s) in q.side_arcs.iter().enumerate() {
                if let Some(b) = s {
                    let want = if k % 2 == 0 { 0.5 } else { 2.0 };
                    assert_eq!(m.get(*b).unwrap(), Complex64::new(want, 0.0));
                }
            }
            checked += 1;
        }
        assert!(checked > 0);
    }

    #[test]
    fn mutation_is_an_involution() {
        for (g, poles) in [(1, vec![3]), (0, vec![3, 3, 3]), (1, vec![4, 3])] {
            let tri = canonical_triangulation(&Signature::new(g, poles).unwrap()).unwrap();
            for seed in 0..20 {
                let c = random_generic(&tri, seed, 1.6, Sampling::Complex);
                for a in tri.arcs() {
                    let (t1, c1) = mutate(&c, &tri, a).unwrap();
                    let (t2, c2) = mutate(&c1, &t1, a).unwrap();
                    assert_eq!(t2.canonical_form(), tri.canonical_form());
                    assert!(c2.max_relative_error(&c) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn mutation_rejects_minus_one() {
        let tri = torus();
        let c = CoordinateTuple::constant(&tri, Complex64::new(-1.0, 0.0));
        assert_eq!(
            mutate(&c, &tri, 0).unwrap_err(),
            CoordsError::MutationDegenerate(0)
        );
    }

    #[test]
    fn vertex_products_survive_distant_flips() {
        let tri = canonical_triangulation(&Signature::new(0, vec![6, 6, 6]).unwrap()).unwrap();
        let c = random_generic(&tri, 5, 1.0, Sampling::Complex);
        let product = |t: &Triangulation, c: &CoordinateTuple, v: usize| {
            (0..t.half_edge_count())
                .filter(|&h| t.origin(h) == v)
                .filter_map(|h| t.arc_of(h))
                .map(|a| c.get(a).unwrap())
                .product::<Complex64>()
        };
        let mut checked = 0;
        for a in tri.arcs() {
            let q = quad_labels(&tri, a).unwrap();
            let (t1, c1) = mutate(&c, &tri, a).unwrap();
            for v in 0..tri.vertex_count() {
                if q.vertices.contains(&v) {
                    continue;
                }
                assert_eq!(product(&tri, &c, v), product(&t1, &c1, v));
                checked += 1;
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn file_format() {
        let tri = torus();
        let c = random_generic(&tri, 3, 1.0, Sampling::Complex);
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.contains("\"triangulation\"") && s.contains("\"coords\""));
        let back: CoordinateTuple = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        assert!(serde_json::from_str::<CoordinateTuple>(
            r#"{"triangulation":"x","coords":{"a":[1,0]}}"#
        )
        .is_err());
    }
}

//! Homogeneous arithmetic on the Riemann sphere and PSL(2, C).
//!
//! Points of CP¹ are stored as unit-norm pairs `(z, w)` and Möbius maps as
//! determinant-one 2×2 matrices whose overall sign is not meaningful. No
//! routine here special-cases the point at infinity; `∞ = [1 : 0]` is an
//! ordinary homogeneous point.
//!
//! The cross-ratio convention used throughout the crate is
//!
//! ```text
//! cr(a, b, c, d) = ((a - d)(b - c)) / ((a - b)(c - d))
//! ```
//!
//! written with determinants `a∧b = z_a w_b - z_b w_a`, so that
//! `cr(0, 1, ∞, z) = -z`.

use std::fmt;

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Default tolerance for projective equality.
pub const PROJECTIVE_TOL: f64 = 1e-9;
/// Default tolerance for internal arithmetic checks.
pub const ARITHMETIC_TOL: f64 = 1e-12;

/// Errors raised by the Möbius kernel.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MobiusError {
    #[error("degenerate quadruple: cross-ratio numerator and denominator both vanish")]
    DegenerateQuadruple,
    #[error("degenerate triple: points are not pairwise distinct")]
    DegenerateTriple,
    #[error("invalid coordinate {0}: must be finite and nonzero")]
    InvalidCoordinate(Complex64),
    #[error("zero homogeneous vector")]
    ZeroVector,
    #[error("singular matrix")]
    Singular,
}

/// A point of CP¹ in normalized homogeneous coordinates.
#[derive(Clone, Copy, Debug)]
pub struct ProjectivePoint {
    z: Complex64,
    w: Complex64,
}

impl ProjectivePoint {
    pub const INFINITY: ProjectivePoint = ProjectivePoint {
        z: Complex64::new(1.0, 0.0),
        w: Complex64::new(0.0, 0.0),
    };

    /// Builds a point from homogeneous coordinates, normalizing to unit norm.
    pub fn new(z: Complex64, w: Complex64) -> Result<Self, MobiusError> {
        let norm = (z.norm_sqr() + w.norm_sqr()).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(MobiusError::ZeroVector);
        }
        Ok(Self {
            z: z / norm,
            w: w / norm,
        })
    }

    /// The affine point `z = [z : 1]`.
    pub fn finite(z: Complex64) -> Self {
        Self::new(z, Complex64::new(1.0, 0.0)).expect("finite affine point")
    }

    pub fn real(x: f64) -> Self {
        Self::finite(Complex64::new(x, 0.0))
    }

    pub fn zero() -> Self {
        Self::real(0.0)
    }

    pub fn one() -> Self {
        Self::real(1.0)
    }

    pub fn hom(&self) -> (Complex64, Complex64) {
        (self.z, self.w)
    }

    /// The value in the affine chart, or `None` when `|w|` is below `eps`.
    pub fn affine(&self, eps: f64) -> Option<Complex64> {
        if self.w.norm() <= eps {
            None
        } else {
            Some(self.z / self.w)
        }
    }

    /// Chordal separation `|a∧b|`, zero exactly when the points coincide.
    pub fn distance(&self, other: &Self) -> f64 {
        wedge(self, other).norm()
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.distance(other) < tol
    }
}

/// The determinant `a∧b = z_a w_b - z_b w_a`.
pub fn wedge(a: &ProjectivePoint, b: &ProjectivePoint) -> Complex64 {
    a.z * b.w - b.z * a.w
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PointRepr {
    Hom { hom: [[f64; 2]; 2] },
    Affine([f64; 2]),
    Symbol(String),
}

impl Serialize for ProjectivePoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PointRepr::Hom {
            hom: [[self.z.re, self.z.im], [self.w.re, self.w.im]],
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProjectivePoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match PointRepr::deserialize(d)? {
            PointRepr::Hom { hom } => ProjectivePoint::new(
                Complex64::new(hom[0][0], hom[0][1]),
                Complex64::new(hom[1][0], hom[1][1]),
            )
            .map_err(D::Error::custom),
            PointRepr::Affine([re, im]) => {
                if re.is_finite() && im.is_finite() {
                    Ok(ProjectivePoint::finite(Complex64::new(re, im)))
                } else {
                    Err(D::Error::custom("non-finite affine point"))
                }
            }
            PointRepr::Symbol(s) if s == "inf" => Ok(ProjectivePoint::INFINITY),
            PointRepr::Symbol(s) => Err(D::Error::custom(format!("unknown point symbol {s:?}"))),
        }
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.affine(1e-300) {
            Some(z) => write!(f, "{z}"),
            None => f.write_str("inf"),
        }
    }
}

/// A value on the extended complex line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Extended {
    Finite(Complex64),
    Infinity,
}

impl Extended {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            Extended::Finite(c) => Some(c),
            Extended::Infinity => None,
        }
    }
}

/// Cross-ratio `((p0∧p3)(p1∧p2)) / ((p0∧p1)(p2∧p3))`.
pub fn cross_ratio(
    p0: &ProjectivePoint,
    p1: &ProjectivePoint,
    p2: &ProjectivePoint,
    p3: &ProjectivePoint,
) -> Result<Extended, MobiusError> {
    let num = wedge(p0, p3) * wedge(p1, p2);
    let den = wedge(p0, p1) * wedge(p2, p3);
    let zero = 1e-300;
    match (num.norm() <= zero, den.norm() <= zero) {
        (true, true) => Err(MobiusError::DegenerateQuadruple),
        (_, true) => Ok(Extended::Infinity),
        _ => Ok(Extended::Finite(num / den)),
    }
}

fn check_coordinate(c: Complex64) -> Result<(), MobiusError> {
    if c.re.is_finite() && c.im.is_finite() && c.norm() > 0.0 {
        Ok(())
    } else {
        Err(MobiusError::InvalidCoordinate(c))
    }
}

fn check_triple(p: &[ProjectivePoint; 3], tol: f64) -> Result<(), MobiusError> {
    if p[0].approx_eq(&p[1], tol) || p[1].approx_eq(&p[2], tol) || p[0].approx_eq(&p[2], tol) {
        Err(MobiusError::DegenerateTriple)
    } else {
        Ok(())
    }
}

/// The unique `p3` with `cross_ratio(p0, p1, p2, p3) = c`.
///
/// `p3` never coincides with `p0` or `p2`; it equals `p1` exactly when `c = -1`.
pub fn solve_fourth(
    p0: &ProjectivePoint,
    p1: &ProjectivePoint,
    p2: &ProjectivePoint,
    c: Complex64,
) -> Result<ProjectivePoint, MobiusError> {
    check_coordinate(c)?;
    check_triple(&[*p0, *p1, *p2], ARITHMETIC_TOL)?;
    // (p0∧p3)·(p1∧p2) − c·(p0∧p1)·(p2∧p3) is a linear form in p3 = (z, w);
    // a∧p3 = (−w_a)·z + z_a·w. The solution spans its kernel.
    let a = wedge(p1, p2);
    let b = c * wedge(p0, p1);
    let l1 = -a * p0.w + b * p2.w;
    let l2 = a * p0.z - b * p2.z;
    ProjectivePoint::new(l2, -l1)
}

/// An element of PSL(2, C), stored with determinant one.
#[derive(Clone, Copy, Debug)]
pub struct MoebiusMap {
    m: [[Complex64; 2]; 2],
}

impl MoebiusMap {
    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self {
            m: [[one, zero], [zero, one]],
        }
    }

    /// Normalizes an invertible matrix to determinant one.
    pub fn from_matrix(m: [[Complex64; 2]; 2]) -> Result<Self, MobiusError> {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if !(det.norm() > 0.0 && det.norm().is_finite()) {
            return Err(MobiusError::Singular);
        }
        let s = det.sqrt().inv();
        Ok(Self {
            m: [[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]],
        })
    }

    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        self.m
    }

    pub fn det(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn apply(&self, p: &ProjectivePoint) -> ProjectivePoint {
        let (z, w) = p.hom();
        ProjectivePoint::new(
            self.m[0][0] * z + self.m[0][1] * w,
            self.m[1][0] * z + self.m[1][1] * w,
        )
        .expect("invertible map sends nonzero vectors to nonzero vectors")
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let a = &self.m;
        let b = &other.m;
        let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Self { m }
    }

    pub fn inverse(&self) -> Self {
        let [[a, b], [c, d]] = self.m;
        Self {
            m: [[d, -b], [-c, a]],
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0][0] + self.m[1][1]
    }

    /// Distance in PSL(2, C): Frobenius norm of the difference, minimized
    /// over the sign ambiguity.
    pub fn distance(&self, other: &Self) -> f64 {
        let mut minus = 0.0;
        let mut plus = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                minus += (self.m[i][j] - other.m[i][j]).norm_sqr();
                plus += (self.m[i][j] + other.m[i][j]).norm_sqr();
            }
        }
        minus.min(plus).sqrt()
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.distance(other) < tol
    }
}

impl Serialize for MoebiusMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = self
            .m
            .iter()
            .map(|r| r.iter().map(|c| [c.re, c.im]).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MoebiusMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = <[[[f64; 2]; 2]; 2]>::deserialize(d)?;
        let c = |v: [f64; 2]| Complex64::new(v[0], v[1]);
        MoebiusMap::from_matrix([
            [c(rows[0][0]), c(rows[0][1])],
            [c(rows[1][0]), c(rows[1][1])],
        ])
        .map_err(D::Error::custom)
    }
}

/// The unique map with `M(0) = p0`, `M(1) = p1`, `M(∞) = p2`.
pub fn map_from_triple(
    p0: &ProjectivePoint,
    p1: &ProjectivePoint,
    p2: &ProjectivePoint,
) -> Result<MoebiusMap, MobiusError> {
    check_triple(&[*p0, *p1, *p2], ARITHMETIC_TOL)?;
    // Columns are multiples of p2 (image of ∞) and p0 (image of 0); the
    // multipliers make their sum proportional to p1.
    let d = wedge(p2, p0);
    let s = wedge(p1, p0) / d;
    let t = wedge(p2, p1) / d;
    let (z0, w0) = p0.hom();
    let (z2, w2) = p2.hom();
    MoebiusMap::from_matrix([[s * z2, t * z0], [s * w2, t * w0]])
}

/// The map sending `src[i]` to `dst[i]` for `i = 0, 1, 2`.
pub fn moebius_between(
    src: &[ProjectivePoint; 3],
    dst: &[ProjectivePoint; 3],
) -> Result<MoebiusMap, MobiusError> {
    let from = map_from_triple(&src[0], &src[1], &src[2])?;
    let to = map_from_triple(&dst[0], &dst[1], &dst[2])?;
    Ok(to.compose(&from.inverse()))
}

/// `(tr M)²` for the determinant-one representative; a class function on
/// PSL(2, C).
pub fn trace_squared(m: &MoebiusMap) -> Complex64 {
    let t = m.trace();
    t * t
}

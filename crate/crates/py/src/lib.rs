use std::collections::BTreeMap;

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use holonomy::coords as core_coords;
use holonomy::develop as core_develop;
use holonomy::mobius::{self, ProjectivePoint};
use holonomy::render::{render_patch, RenderOptions};
use holonomy::surface::{self, Signature, TriangulationData};
use holonomy::thurston::grafting_data;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_point(z: Option<Complex64>) -> ProjectivePoint {
    z.map_or(ProjectivePoint::INFINITY, ProjectivePoint::finite)
}

fn from_point(p: &ProjectivePoint) -> Option<Complex64> {
    p.affine(1e-300)
}

/// Ideal triangulation of a marked bordered surface.
#[pyclass(module = "pyholonomy", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct Triangulation {
    inner: surface::Triangulation,
}

#[pymethods]
impl Triangulation {
    /// Canonical triangulation of the surface with the given genus and pole orders.
    #[staticmethod]
    fn canonical(genus: usize, poles: Vec<usize>) -> PyResult<Self> {
        let sig = Signature::new(genus, poles).map_err(value_error)?;
        let inner = surface::canonical_triangulation(&sig).map_err(value_error)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let data: TriangulationData = serde_json::from_str(text).map_err(value_error)?;
        let inner = surface::Triangulation::new(data).map_err(value_error)?;
        Ok(Self { inner })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(self.inner.data()).expect("triangulation serializes")
    }

    /// Violations against a signature; empty when valid.
    fn validate(&self, genus: usize, poles: Vec<usize>) -> Vec<String> {
        surface::validate_raw(self.inner.data(), genus, &poles)
            .violations
            .iter()
            .map(|v| v.to_string())
            .collect()
    }

    fn flip(&self, arc: usize) -> PyResult<Self> {
        let inner = surface::flip(&self.inner, arc).map_err(value_error)?;
        Ok(Self { inner })
    }

    #[getter]
    fn id(&self) -> String {
        self.inner.id()
    }

    #[getter]
    fn genus(&self) -> usize {
        self.inner.genus()
    }

    #[getter]
    fn poles(&self) -> Vec<usize> {
        self.inner.poles().to_vec()
    }

    #[getter]
    fn triangle_count(&self) -> usize {
        self.inner.triangle_count()
    }

    #[getter]
    fn interior_arc_count(&self) -> usize {
        self.inner.interior_arc_count()
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn free_rank(&self) -> usize {
        self.inner.free_rank()
    }

    fn __repr__(&self) -> String {
        format!(
            "Triangulation(genus={}, poles={:?}, triangles={})",
            self.inner.genus(),
            self.inner.poles(),
            self.inner.triangle_count()
        )
    }
}

/// Cross-ratio coordinates bound to one triangulation.
#[pyclass(module = "pyholonomy", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct Coordinates {
    inner: core_coords::CoordinateTuple,
}

#[pymethods]
impl Coordinates {
    #[staticmethod]
    #[pyo3(signature = (tri, seed, bound = 1.6, positive = false))]
    fn random(tri: &Triangulation, seed: u64, bound: f64, positive: bool) -> PyResult<Self> {
        if !(bound > 0.0 && bound.is_finite()) {
            return Err(value_error("bound must be positive"));
        }
        let sampling = if positive {
            core_coords::Sampling::PositiveReal
        } else {
            core_coords::Sampling::Complex
        };
        Ok(Self {
            inner: core_coords::random_generic(&tri.inner, seed, bound, sampling),
        })
    }

    #[staticmethod]
    fn from_dict(tri: &Triangulation, values: BTreeMap<usize, Complex64>) -> PyResult<Self> {
        let inner = core_coords::CoordinateTuple::new(&tri.inner, values);
        core_coords::validate_generic(&inner, &tri.inner)
            .map_err(|v| value_error(v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")))?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: serde_json::from_str(text).map_err(value_error)?,
        })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("coordinates serialize")
    }

    fn to_dict(&self) -> BTreeMap<usize, Complex64> {
        self.inner.values().clone()
    }

    /// Flip `arc` and mutate; returns the new triangulation and coordinates.
    fn mutate(&self, tri: &Triangulation, arc: usize) -> PyResult<(Triangulation, Coordinates)> {
        let (t, c) = core_coords::mutate(&self.inner, &tri.inner, arc).map_err(value_error)?;
        Ok((Triangulation { inner: t }, Coordinates { inner: c }))
    }

    /// `{arc: (shear, bend)}`.
    fn pleats(&self) -> BTreeMap<usize, (f64, f64)> {
        core_develop::pleat_data(&self.inner)
            .into_iter()
            .map(|(a, p)| (a, (p.shear, p.bend)))
            .collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

/// A developed pleated plane with its deck maps.
#[pyclass(module = "pyholonomy", frozen)]
pub struct Development {
    inner: core_develop::DevelopedComplex,
}

#[pymethods]
impl Development {
    #[new]
    fn new(tri: &Triangulation, coords: &Coordinates) -> PyResult<Self> {
        let inner = core_develop::develop(&tri.inner, &coords.inner).map_err(value_error)?;
        Ok(Self { inner })
    }

    /// Affine values of each triangle's vertices; `None` stands for infinity.
    fn flags(&self) -> Vec<[Option<Complex64>; 3]> {
        self.inner
            .flags()
            .iter()
            .map(|f| f.map(|p| from_point(&p)))
            .collect()
    }

    /// `{cotree arc: 2x2 matrix}` with determinant one, up to sign.
    fn generators(&self) -> BTreeMap<usize, [[Complex64; 2]; 2]> {
        self.inner
            .deck()
            .iter()
            .map(|(&a, m)| (a, m.matrix()))
            .collect()
    }

    fn trace_squared(&self) -> BTreeMap<usize, Complex64> {
        self.inner
            .deck()
            .iter()
            .map(|(&a, m)| (a, mobius::trace_squared(m)))
            .collect()
    }

    /// `{marked point: flag}`.
    fn framing(&self) -> BTreeMap<usize, Option<Complex64>> {
        core_develop::framing(&self.inner)
            .iter()
            .map(|(&v, p)| (v, from_point(p)))
            .collect()
    }

    fn equivariance_residual(&self) -> f64 {
        core_develop::verify_equivariance(&self.inner)
    }

    fn extract(&self) -> PyResult<Coordinates> {
        Ok(Coordinates {
            inner: core_develop::extract_coordinates(&self.inner).map_err(value_error)?,
        })
    }

    fn is_nondegenerate(&self) -> bool {
        core_develop::nondegeneracy_certificate(&self.inner).is_ok()
    }

    fn representation_json(&self) -> String {
        serde_json::to_string(&core_develop::monodromy(&self.inner)).expect("representation serializes")
    }
}

#[pyfunction]
fn cross_ratio(
    a: Option<Complex64>,
    b: Option<Complex64>,
    c: Option<Complex64>,
    d: Option<Complex64>,
) -> PyResult<Option<Complex64>> {
    let x = mobius::cross_ratio(&to_point(a), &to_point(b), &to_point(c), &to_point(d)).map_err(value_error)?;
    Ok(x.finite())
}

#[pyfunction]
fn solve_fourth(
    a: Option<Complex64>,
    b: Option<Complex64>,
    c: Option<Complex64>,
    x: Complex64,
) -> PyResult<Option<Complex64>> {
    let p = mobius::solve_fourth(&to_point(a), &to_point(b), &to_point(c), x).map_err(value_error)?;
    Ok(from_point(&p))
}

/// Grafting witness as a JSON document.
#[pyfunction]
fn grafting_witness(tri: &Triangulation, coords: &Coordinates) -> PyResult<String> {
    let w = grafting_data(&tri.inner, &coords.inner).map_err(value_error)?;
    Ok(serde_json::to_string(&w).expect("witness serializes"))
}

#[pyfunction]
#[pyo3(signature = (tri, coords, depth = 4, size = 800, radius = 4.0))]
fn render(tri: &Triangulation, coords: &Coordinates, depth: usize, size: u32, radius: f64) -> PyResult<String> {
    let patch = core_develop::develop_patch(&tri.inner, &coords.inner, depth, core_develop::DEFAULT_PATCH_BUDGET)
        .map_err(value_error)?;
    Ok(render_patch(&tri.inner, &coords.inner, &patch, &RenderOptions { size, radius }))
}

#[pymodule]
pub fn pyholonomy(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Triangulation>()?;
    m.add_class::<Coordinates>()?;
    m.add_class::<Development>()?;
    m.add_function(wrap_pyfunction!(cross_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(solve_fourth, m)?)?;
    m.add_function(wrap_pyfunction!(grafting_witness, m)?)?;
    m.add_function(wrap_pyfunction!(render, m)?)?;
    Ok(())
}

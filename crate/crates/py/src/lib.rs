//! Python bindings: configurations, flips and the verification reports.

use brauer_core::algebra::{cartan_matrix, quiver, total_dimension};
use brauer_core::config::{are_isomorphic, parse_configuration, random_configuration, RandomSpec};
use brauer_core::flip::{angle_decomposition, flip, satisfies_condition_e, Direction};
use brauer_core::mutation::{endomorphism_grid, mutation_complex, verify_dim_equalities};
use brauer_core::oracle::{hom_chain_dim, select_prime, verify_homotopy, verify_phi};
use brauer_core::{AngleId, BrauerConfiguration, PolygonId, VerificationReport};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

fn err(e: brauer_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn direction(s: &str) -> PyResult<Direction> {
    s.parse().map_err(|e: String| PyValueError::new_err(e))
}

fn report<'py>(py: Python<'py>, r: &VerificationReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("title", &r.title)?;
    let checks = PyList::empty(py);
    for c in &r.checks {
        let row = PyDict::new(py);
        row.set_item("identity", &c.identity)?;
        row.set_item("lhs", &c.lhs)?;
        row.set_item("rhs", &c.rhs)?;
        row.set_item("pass", c.pass)?;
        row.set_item("note", c.note.as_deref())?;
        checks.append(row)?;
    }
    d.set_item("checks", checks)?;
    d.set_item("passed", r.passed())?;
    d.set_item("verdict", r.verdict.as_deref())?;
    d.set_item("table", r.to_table())?;
    Ok(d)
}

/// A validated Brauer configuration.
#[pyclass(name = "Configuration", module = "brauer", frozen)]
struct Configuration {
    inner: BrauerConfiguration,
}

impl Configuration {
    fn polygon(&self, name: &str) -> PyResult<PolygonId> {
        self.inner.polygon(name).map_err(err)
    }

    fn names(&self, angles: &[AngleId]) -> Vec<String> {
        angles.iter().map(|&a| self.inner.angle_name(a).to_string()).collect()
    }
}

#[pymethods]
impl Configuration {
    /// Parses `.bcf` text.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: parse_configuration(text).map_err(err)?,
        })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| PyValueError::new_err(format!("{path}: {e}")))?;
        Self::new(&text)
    }

    #[staticmethod]
    #[pyo3(signature = (n_angles, seed=0, min_polygon=2, max_polygon=4, max_multiplicity=2))]
    fn random(n_angles: usize, seed: u64, min_polygon: usize, max_polygon: usize, max_multiplicity: usize) -> PyResult<Self> {
        let spec = RandomSpec {
            n_angles,
            min_polygon,
            max_polygon,
            max_multiplicity,
            seed,
        };
        Ok(Self {
            inner: random_configuration(&spec).map_err(err)?,
        })
    }

    fn to_bcf(&self) -> String {
        self.inner.to_bcf()
    }

    fn __repr__(&self) -> String {
        format!(
            "Configuration({} angles, {} vertices, {} polygons)",
            self.inner.num_angles(),
            self.inner.num_vertices(),
            self.inner.num_polygons()
        )
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    #[getter]
    fn angles(&self) -> Vec<String> {
        self.inner.angles().map(|a| self.inner.angle_name(a).to_string()).collect()
    }

    #[getter]
    fn vertices(&self) -> Vec<String> {
        self.inner.vertices().map(|v| self.inner.vertex_name(v).to_string()).collect()
    }

    #[getter]
    fn polygons(&self) -> Vec<String> {
        self.inner.polygons().map(|p| self.inner.polygon_name(p).to_string()).collect()
    }

    /// Angles of each vertex cycle, with its multiplicity.
    fn cycles(&self) -> Vec<(String, usize, Vec<String>)> {
        self.inner
            .vertices()
            .map(|v| {
                (
                    self.inner.vertex_name(v).to_string(),
                    self.inner.multiplicity(v),
                    self.names(self.inner.cycle(v)),
                )
            })
            .collect()
    }

    fn cartan_matrix(&self) -> Vec<Vec<usize>> {
        cartan_matrix(&self.inner)
    }

    fn total_dimension(&self) -> usize {
        total_dimension(&self.inner)
    }

    fn is_brauer_graph(&self) -> bool {
        self.inner.is_brauer_graph()
    }

    fn quiver_dot(&self) -> String {
        quiver(&self.inner).to_dot(&self.inner)
    }

    fn relations(&self) -> String {
        quiver(&self.inner).relations_text(&self.inner)
    }

    #[pyo3(signature = (polygon, direction="left"))]
    fn condition_e(&self, polygon: &str, direction: &str) -> PyResult<bool> {
        Ok(satisfies_condition_e(&self.inner, self.polygon(polygon)?, self::direction(direction)?))
    }

    /// `H1..H5` and the maps `p`, `n`, `x` at a polygon with condition (E).
    fn decomposition<'py>(&self, py: Python<'py>, polygon: &str) -> PyResult<Bound<'py, PyDict>> {
        let c = &self.inner;
        let d = angle_decomposition(c, self.polygon(polygon)?).map_err(err)?;
        let out = PyDict::new(py);
        for (k, s) in [("H1", &d.h1), ("H2", &d.h2), ("H3", &d.h3), ("H4", &d.h4), ("H5", &d.h5)] {
            out.set_item(k, self.names(s))?;
        }
        for (k, m) in [("p", &d.p), ("n", &d.n), ("x", &d.x)] {
            let map = PyDict::new(py);
            for a in c.angles() {
                if let Some(b) = m[a.0] {
                    map.set_item(c.angle_name(a), c.angle_name(b))?;
                }
            }
            out.set_item(k, map)?;
        }
        Ok(out)
    }

    #[pyo3(signature = (polygon, direction="left"))]
    fn flip(&self, polygon: &str, direction: &str) -> PyResult<Self> {
        let r = flip(&self.inner, self.polygon(polygon)?, self::direction(direction)?).map_err(err)?;
        Ok(Self { inner: r.config })
    }

    /// Angle bijection onto `other` as a name map, or `None`.
    fn isomorphism(&self, other: &Self) -> Option<Vec<(String, String)>> {
        are_isomorphic(&self.inner, &other.inner).map(|b| b.named_pairs(&self.inner, &other.inner))
    }

    /// Euler-form dimensions of `Hom(T_U, T_W)` for the mutation at `polygon`.
    fn endomorphism_grid(&self, polygon: &str) -> PyResult<Vec<Vec<i64>>> {
        let m = mutation_complex(&self.inner, self.polygon(polygon)?).map_err(err)?;
        Ok(endomorphism_grid(&self.inner, &m))
    }

    /// `dim Hom(T_V, T_V[shift])` in the homotopy category, by rank.
    #[pyo3(signature = (polygon, shift=0))]
    fn homotopy_dim(&self, polygon: &str, shift: i32) -> PyResult<usize> {
        let t = mutation_complex(&self.inner, self.polygon(polygon)?).map_err(err)?.complex;
        hom_chain_dim(&self.inner, &t, &t, shift).map_err(err)
    }

    fn select_prime(&self) -> u64 {
        select_prime(&self.inner).p
    }

    fn verify_dims<'py>(&self, py: Python<'py>, polygon: &str) -> PyResult<Bound<'py, PyDict>> {
        report(py, &verify_dim_equalities(&self.inner, self.polygon(polygon)?).map_err(err)?)
    }

    fn verify_homotopy<'py>(&self, py: Python<'py>, polygon: &str) -> PyResult<Bound<'py, PyDict>> {
        report(py, &verify_homotopy(&self.inner, self.polygon(polygon)?).map_err(err)?)
    }

    #[pyo3(signature = (polygon, prime=None))]
    fn verify_phi<'py>(&self, py: Python<'py>, polygon: &str, prime: Option<u64>) -> PyResult<Bound<'py, PyDict>> {
        let v = self.polygon(polygon)?;
        let r = py.detach(|| verify_phi(&self.inner, v, prime)).map_err(err)?;
        report(py, &r)
    }
}

#[pymodule]
fn brauer(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Configuration>()?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}

//! Python bindings: modular data, Picard groups, Schellekens algebras and the
//! quantities derived from them.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use wzw_core::bimodule::{bimodule_picard, build_bimodule_ring, build_pointed_bimodule_ring, kramers_wannier_candidates};
use wzw_core::boundary::count_boundary_conditions;
use wzw_core::picard::find_simple_currents;
use wzw_core::schellekens::{classify_algebras, ClassifiedAlgebra};
use wzw_core::twining::{twining_s, verify_conjecture};
use wzw_core::{battery, Config, Error};

fn py_err(e: Error) -> PyErr {
    if e.is_user_error() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

fn to_json<T: serde::Serialize>(x: &T) -> String {
    serde_json::to_string(x).expect("serializable")
}

fn config(tolerance: Option<f64>) -> Config {
    Config { tolerance: tolerance.unwrap_or(1e-8), ..Config::default() }
}

#[pyclass(frozen, module = "wzw")]
struct ModularData {
    inner: wzw_core::ModularData,
}

#[pymethods]
impl ModularData {
    #[new]
    #[pyo3(signature = (lie_type, level, tolerance = None))]
    fn new(lie_type: &str, level: u32, tolerance: Option<f64>) -> PyResult<Self> {
        let t = lie_type.parse().map_err(py_err)?;
        let inner = wzw_core::ModularData::build(t, level, &config(tolerance)).map_err(py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn lie_type(&self) -> String {
        self.inner.lie_type().to_string()
    }

    #[getter]
    fn level(&self) -> u32 {
        self.inner.level()
    }

    #[getter]
    fn weights(&self) -> Vec<Vec<u32>> {
        self.inner.level_data.weights.iter().map(|w| w.0.clone()).collect()
    }

    /// Conformal weights as `"p/q"` strings.
    #[getter]
    fn conformal_weights(&self) -> Vec<String> {
        self.inner.conformal_weights.iter().map(wzw_core::residue::format_rational).collect()
    }

    #[getter]
    fn central_charge(&self) -> String {
        wzw_core::residue::format_rational(&self.inner.central_charge)
    }

    #[getter]
    fn s_matrix(&self) -> Vec<Vec<Complex64>> {
        self.inner.s_matrix.clone()
    }

    #[getter]
    fn quantum_dims(&self) -> Vec<f64> {
        self.inner.quantum_dims.clone()
    }

    #[getter]
    fn conjugation(&self) -> Vec<usize> {
        self.inner.conjugation.clone()
    }

    fn fusion(&self, i: usize, j: usize, k: usize) -> PyResult<u32> {
        let n = self.inner.len();
        if i >= n || j >= n || k >= n {
            return Err(PyValueError::new_err("weight index out of range"));
        }
        Ok(self.inner.fusion.get(i, j, k))
    }

    fn to_json(&self) -> String {
        to_json(&self.inner.to_document())
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("ModularData({}, level={}, {} weights)", self.inner.lie_type(), self.inner.level(), self.inner.len())
    }
}

#[pyclass(frozen, module = "wzw")]
struct PicardGroup {
    inner: wzw_core::PicardGroup,
}

#[pymethods]
impl PicardGroup {
    #[new]
    fn new(md: &ModularData) -> PyResult<Self> {
        Ok(Self { inner: find_simple_currents(&md.inner, 1e-8).map_err(py_err)? })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.iso_class_name()
    }

    #[getter]
    fn objects(&self) -> Vec<usize> {
        (0..self.inner.order()).map(|g| self.inner.object(g)).collect()
    }

    #[getter]
    fn twists(&self) -> Vec<String> {
        self.inner.twists.iter().map(|t| t.to_string()).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.order()
    }

    fn __repr__(&self) -> String {
        format!("PicardGroup({})", self.inner.iso_class_name())
    }
}

#[pyclass(frozen, module = "wzw")]
struct Algebra {
    inner: ClassifiedAlgebra,
}

#[pymethods]
impl Algebra {
    #[getter]
    fn support(&self) -> Vec<usize> {
        self.inner.algebra.support().elements.clone()
    }

    /// KSB values as `"p/q"` strings, indexed by support position.
    #[getter]
    fn ksb(&self) -> Vec<Vec<String>> {
        self.inner.algebra.ksb.values.iter().map(|row| row.iter().map(|v| v.to_string()).collect()).collect()
    }

    #[getter]
    fn partition(&self) -> Vec<Vec<u32>> {
        self.inner.partition.entries.clone()
    }

    fn latex(&self, md: &ModularData) -> String {
        let labels: Vec<String> = md
            .inner
            .level_data
            .weights
            .iter()
            .map(|w| w.0.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        self.inner.partition.to_latex(&labels)
    }

    fn __repr__(&self) -> String {
        format!("Algebra(support={:?})", self.inner.algebra.support().elements)
    }
}

#[pyfunction]
fn algebras(md: &ModularData, pg: &PicardGroup) -> PyResult<Vec<Algebra>> {
    let all = classify_algebras(&md.inner, &pg.inner).map_err(py_err)?;
    Ok(all.into_iter().map(|inner| Algebra { inner }).collect())
}

/// Number of boundary conditions, optionally taking phi from the twining
/// matrices when a stabilizer is not cyclic.
#[pyfunction]
#[pyo3(signature = (md, pg, algebra, use_phi = false))]
fn boundary_count(md: &ModularData, pg: &PicardGroup, algebra: &Algebra, use_phi: bool) -> PyResult<usize> {
    let a = &algebra.inner.algebra;
    let phi = if use_phi {
        Some(verify_conjecture(&md.inner, &pg.inner, a, &Config::default()).map_err(py_err)?.phi)
    } else {
        None
    };
    Ok(count_boundary_conditions(&md.inner, &pg.inner, a, phi.as_ref()).map_err(py_err)?.total)
}

#[pyclass(frozen, module = "wzw")]
struct BimoduleRing {
    inner: wzw_core::bimodule::BimoduleRing,
}

#[pymethods]
impl BimoduleRing {
    #[new]
    #[pyo3(signature = (md, pg, algebra, pointed = false))]
    fn new(md: &ModularData, pg: &PicardGroup, algebra: &Algebra, pointed: bool) -> PyResult<Self> {
        let a = &algebra.inner.algebra;
        let inner = if pointed {
            build_pointed_bimodule_ring(&md.inner, &pg.inner, a)
        } else {
            build_bimodule_ring(&md.inner, &pg.inner, a)
        }
        .map_err(py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    /// `(object, character values)` per basis element.
    #[getter]
    fn basis(&self) -> Vec<(usize, Vec<String>)> {
        self.inner.basis.iter().map(|b| (b.object_index, b.character.iter().map(|c| c.to_string()).collect())).collect()
    }

    fn structure_constants(&self) -> Vec<(usize, usize, usize, u32)> {
        self.inner.sparse_structure_constants()
    }

    fn is_associative(&self) -> bool {
        self.inner.is_associative()
    }

    /// Order and isomorphism class of the group of invertible classes.
    fn picard(&self) -> (usize, String) {
        let p = bimodule_picard(&self.inner);
        (p.order(), p.iso_class_name)
    }

    fn duality_candidates(&self) -> PyResult<Vec<usize>> {
        let kw = kramers_wannier_candidates(&self.inner).map_err(py_err)?;
        Ok(kw.iter().filter_map(|b| self.inner.index_of(b)).collect())
    }
}

/// Fixed points and twining S-matrix of the current `g`.
#[pyfunction]
fn twining_matrix(md: &ModularData, pg: &PicardGroup, g: usize) -> PyResult<(Vec<usize>, Vec<Vec<Complex64>>)> {
    if g >= pg.inner.order() {
        return Err(PyValueError::new_err("Picard element out of range"));
    }
    let sw = twining_s(&md.inner, &pg.inner, g, &Config::default()).map_err(py_err)?;
    Ok((sw.fixed_points, sw.matrix))
}

/// Conjecture report for the algebra's support, as JSON.
#[pyfunction]
fn conjecture_report(md: &ModularData, pg: &PicardGroup, algebra: &Algebra) -> PyResult<String> {
    let r = verify_conjecture(&md.inner, &pg.inner, &algebra.inner.algebra, &Config::default()).map_err(py_err)?;
    Ok(to_json(&r))
}

/// `(id, name, pass, detail)` for the battery criteria.
#[pyfunction]
fn selftest() -> Vec<(u32, String, bool, String)> {
    battery::run_battery(&Config::default()).into_iter().map(|o| (o.id, o.name, o.pass, o.detail)).collect()
}

#[pymodule]
fn wzw(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<ModularData>()?;
    m.add_class::<PicardGroup>()?;
    m.add_class::<Algebra>()?;
    m.add_class::<BimoduleRing>()?;
    m.add_function(wrap_pyfunction!(algebras, m)?)?;
    m.add_function(wrap_pyfunction!(boundary_count, m)?)?;
    m.add_function(wrap_pyfunction!(twining_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(conjecture_report, m)?)?;
    m.add_function(wrap_pyfunction!(selftest, m)?)?;
    Ok(())
}

//! Python bindings. Inputs are the same JSON literals the CLI reads, passed
//! either as a string or as a dict; results come back as plain Python objects.

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyString;
use serde::de::DeserializeOwned;
use serde::Serialize;

use cpalg_core::cohom::{cohomology_fp, transfer_exact_sequence as les, GroupTable};
use cpalg_core::covering::{tower_bounds as tower, validate_model as validate, CoveringModel};
use cpalg_core::cpmod::{classify_cohomological, tate_cohomology as tate, CpModule};
use cpalg_core::linkform::{diagonalize_odd, normalize_two, LinkForm};
use cpalg_core::ring::{classify_trilinear as trilinear, covering_case_analysis_z2z4, quaternion_ring_facts};
use cpalg_core::Error;

create_exception!(cpalg, ResourceError, PyRuntimeError, "Input exceeds the documented size envelope.");
create_exception!(cpalg, InvariantError, PyRuntimeError, "An internal consistency check failed.");

fn lib_err(e: Error) -> PyErr {
    match e {
        Error::Invalid(m) => PyValueError::new_err(m),
        Error::Resource(m) => ResourceError::new_err(m),
        Error::Invariant(m) => InvariantError::new_err(m),
    }
}

fn parse<T: DeserializeOwned>(py: Python<'_>, literal: &Bound<'_, PyAny>) -> PyResult<T> {
    let text: String = if literal.is_instance_of::<PyString>() {
        literal.extract()?
    } else {
        py.import("json")?.call_method1("dumps", (literal,))?.extract()?
    };
    serde_json::from_str(&text).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| InvariantError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

/// Tate cohomology and cohomological class of a module literal
/// `{"p", "exponents", "zeta"}`.
#[pyfunction]
fn tate_cohomology(py: Python<'_>, module: &Bound<'_, PyAny>) -> PyResult<Py<PyAny>> {
    let m: CpModule = parse(py, module)?;
    let t = tate(&m).map_err(lib_err)?;
    let class = classify_cohomological(&m).map_err(lib_err)?;
    to_py(py, &serde_json::json!({"tate": t, "class": class}))
}

/// Orthogonal splitting for odd p, 2-adic normal form for p = 2.
#[pyfunction]
fn diagonalize(py: Python<'_>, form: &Bound<'_, PyAny>) -> PyResult<Py<PyAny>> {
    let f: LinkForm = parse(py, form)?;
    if f.p() == 2 {
        to_py(py, &normalize_two(&f).map_err(lib_err)?)
    } else {
        to_py(py, &diagonalize_odd(&f).map_err(lib_err)?)
    }
}

/// `dim H^i(G; F_p)` for a group literal such as `{"family": "Q", "order": 8}`.
#[pyfunction]
#[pyo3(signature = (group, p, max_degree = 3))]
fn betti(py: Python<'_>, group: &Bound<'_, PyAny>, p: u64, max_degree: usize) -> PyResult<Py<PyAny>> {
    let g: GroupTable = parse(py, group)?;
    to_py(py, &cohomology_fp(&g, p, max_degree).map_err(lib_err)?)
}

#[pyfunction]
#[pyo3(signature = (group, subgroup, max_degree = 3))]
fn transfer_exact_sequence(
    py: Python<'_>,
    group: &Bound<'_, PyAny>,
    subgroup: Vec<usize>,
    max_degree: usize,
) -> PyResult<Py<PyAny>> {
    let g: GroupTable = parse(py, group)?;
    to_py(py, &les(&g, &subgroup, max_degree).map_err(lib_err)?)
}

/// Covering identities of a model literal.
#[pyfunction]
fn validate_model(py: Python<'_>, model: &Bound<'_, PyAny>) -> PyResult<Py<PyAny>> {
    let m: CoveringModel = parse(py, model)?;
    to_py(py, &validate(&m).map_err(lib_err)?)
}

#[pyfunction]
fn tower_bounds(py: Python<'_>, r1: u64, p: u64, depth: usize) -> PyResult<Py<PyAny>> {
    to_py(py, &tower(r1, p, depth).map_err(lib_err)?)
}

/// Trilinear classification; defaults to the orthonormal form on (Z/2)^3.
#[pyfunction]
#[pyo3(signature = (form = None))]
fn classify_trilinear(py: Python<'_>, form: Option<&Bound<'_, PyAny>>) -> PyResult<Py<PyAny>> {
    let f: LinkForm = match form {
        Some(f) => parse(py, f)?,
        None => LinkForm::diagonal(2, &[(1, 1), (1, 1), (1, 1)]).map_err(lib_err)?,
    };
    to_py(py, &trilinear(&f).map_err(lib_err)?)
}

#[pyfunction]
fn quaternion_rings(py: Python<'_>) -> PyResult<Py<PyAny>> {
    to_py(py, &quaternion_ring_facts().map_err(lib_err)?)
}

/// Homology of double covers when first homology is Z/2 + Z/4.
#[pyfunction]
#[pyo3(signature = (n_max = 6))]
fn double_cover_homology(py: Python<'_>, n_max: u32) -> PyResult<Py<PyAny>> {
    to_py(py, &covering_case_analysis_z2z4(n_max).map_err(lib_err)?)
}

#[pymodule(name = "cpalg")]
fn cpalg_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ResourceError", m.py().get_type::<ResourceError>())?;
    m.add("InvariantError", m.py().get_type::<InvariantError>())?;
    m.add_function(wrap_pyfunction!(tate_cohomology, m)?)?;
    m.add_function(wrap_pyfunction!(diagonalize, m)?)?;
    m.add_function(wrap_pyfunction!(betti, m)?)?;
    m.add_function(wrap_pyfunction!(transfer_exact_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(validate_model, m)?)?;
    m.add_function(wrap_pyfunction!(tower_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(classify_trilinear, m)?)?;
    m.add_function(wrap_pyfunction!(quaternion_rings, m)?)?;
    m.add_function(wrap_pyfunction!(double_cover_homology, m)?)?;
    Ok(())
}

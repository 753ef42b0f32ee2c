//! Python bindings: groups, subgroups, windows, Gabor systems and the Zak
//! and fiber analyses, exposed as module `gabor_zak`.

use gabor_zak::fiber_analysis::{gabor_fiber_bounds, Reading};
use gabor_zak::gabor::{classify, frame_bounds, frame_spectrum, Convention, FrameReport, GaborSystem};
use gabor_zak::group::{all_subgroups, annihilator, FiniteAbelianGroup, Subgroup};
use gabor_zak::io::{parse_group, parse_subgroup, subgroup_spec};
use gabor_zak::transforms::{fourier, zak, Window};
use gabor_zak::zak_analysis::{self, admissible_h, AdmissibleH};
use gabor_zak::GaborError;
use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: GaborError) -> PyErr {
    match e {
        GaborError::Io(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

#[pyclass(name = "Group", frozen)]
#[derive(Clone)]
struct PyGroup(FiniteAbelianGroup);

#[pymethods]
impl PyGroup {
    /// `Group("Z4xZ2")`.
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        parse_group(spec).map(Self).map_err(err)
    }

    #[getter]
    fn order(&self) -> usize {
        self.0.order()
    }

    #[getter]
    fn factors(&self) -> Vec<usize> {
        self.0.factors().to_vec()
    }

    fn element(&self, index: usize) -> PyResult<Vec<usize>> {
        if index >= self.0.order() {
            return Err(PyValueError::new_err(format!("index {index} out of range for {}", self.0)));
        }
        Ok(self.0.element(index).0)
    }

    /// Parse `full`, `trivial`, `gen:...` or `elems:...`.
    fn subgroup(&self, spec: &str) -> PyResult<PySubgroup> {
        parse_subgroup(&self.0, spec).map(PySubgroup).map_err(err)
    }

    fn subgroups(&self) -> PyResult<Vec<PySubgroup>> {
        Ok(all_subgroups(&self.0).map_err(err)?.into_iter().map(PySubgroup).collect())
    }

    fn annihilator(&self, s: &PySubgroup) -> PyResult<PySubgroup> {
        annihilator(&self.0, &s.0).map(PySubgroup).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Group('{}')", self.0)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

#[pyclass(name = "Subgroup", frozen)]
#[derive(Clone)]
struct PySubgroup(Subgroup);

#[pymethods]
impl PySubgroup {
    #[getter]
    fn order(&self) -> usize {
        self.0.order()
    }

    #[getter]
    fn elements(&self) -> Vec<usize> {
        self.0.elements().to_vec()
    }

    #[getter]
    fn spec(&self) -> String {
        subgroup_spec(&self.0)
    }

    fn contains(&self, x: usize) -> bool {
        x < self.0.parent().order() && self.0.contains(x)
    }

    fn __repr__(&self) -> String {
        format!("Subgroup('{}' in {})", subgroup_spec(&self.0), self.0.parent())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

#[pyclass(name = "Window", frozen)]
#[derive(Clone)]
struct PyWindow(Window);

#[pymethods]
impl PyWindow {
    #[new]
    fn new(group: &PyGroup, values: Vec<Complex64>) -> PyResult<Self> {
        Window::new(&group.0, values).map(Self).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (group, at=0))]
    fn delta(group: &PyGroup, at: usize) -> PyResult<Self> {
        if at >= group.0.order() {
            return Err(PyValueError::new_err(format!("index {at} out of range for {}", group.0)));
        }
        Ok(Self(Window::delta(&group.0, at)))
    }

    #[staticmethod]
    fn random(group: &PyGroup, seed: u64) -> Self {
        Self(gabor_zak::rng::random_window(&group.0, seed))
    }

    #[getter]
    fn values(&self) -> Vec<Complex64> {
        self.0.values().to_vec()
    }

    #[getter]
    fn group(&self) -> PyGroup {
        PyGroup(self.0.group().clone())
    }

    fn norm(&self) -> f64 {
        self.0.norm()
    }

    fn fourier(&self) -> Vec<Complex64> {
        fourier(&self.0).into_values()
    }

    /// Zak transform over `h` as rows (section of G/H) of columns (section of Ĝ/H^⊥).
    fn zak(&self, h: &PySubgroup) -> PyResult<Vec<Vec<Complex64>>> {
        let z = zak(&self.0, &h.0).map_err(err)?;
        Ok((0..z.n_rows()).map(|i| (0..z.n_cols()).map(|j| z.get(i, j)).collect()).collect())
    }

    /// Completeness and minimality of the system generated over `h`, with the
    /// dual window when it exists.
    #[pyo3(signature = (h, zero_tol=zak_analysis::ZAK_ZERO_TOL))]
    fn zak_completeness<'py>(&self, py: Python<'py>, h: &PySubgroup, zero_tol: f64) -> PyResult<Bound<'py, PyDict>> {
        let r = zak_analysis::zak_complete_minimal(&self.0, &h.0, zero_tol).map_err(err)?;
        let d = PyDict::new_bound(py);
        d.set_item("complete", r.complete)?;
        d.set_item("minimal", r.minimal)?;
        d.set_item("min_abs_zak", r.min_abs_zak)?;
        d.set_item("max_abs_zak", r.max_abs_zak)?;
        d.set_item("pairing_norm", r.pairing_norm)?;
        d.set_item("dual_window", r.dual_window.map(|w| Py::new(py, PyWindow(w))).transpose()?)?;
        Ok(d)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }
}

fn report_dict<'py>(py: Python<'py>, r: &FrameReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new_bound(py);
    d.set_item("lower_bound", r.lower_bound)?;
    d.set_item("upper_bound", r.upper_bound)?;
    d.set_item("is_frame", r.is_frame)?;
    d.set_item("is_tight", r.is_tight)?;
    d.set_item("is_parseval", r.is_parseval)?;
    d.set_item("is_complete", r.is_complete)?;
    d.set_item("is_minimal", r.is_minimal)?;
    d.set_item("is_onb", r.is_onb)?;
    d.set_item("condition_number", r.condition_number)?;
    Ok(d)
}

#[pyclass(name = "GaborSystem", frozen)]
struct PyGaborSystem(GaborSystem);

impl PyGaborSystem {
    fn admissible(&self, h: &PySubgroup) -> PyResult<AdmissibleH> {
        let s = &self.0;
        admissible_h(s.group(), s.lambda(), s.gamma())
            .map_err(err)?
            .into_iter()
            .find(|a| a.h == h.0)
            .ok_or_else(|| PyValueError::new_err(format!("{} is not admissible", subgroup_spec(&h.0))))
    }
}

#[pymethods]
impl PyGaborSystem {
    /// `convention` is `"plancherel"` or `"zak-chain"`; the latter needs `h`.
    #[new]
    #[pyo3(signature = (window, lam, gamma, convention="plancherel", h=None))]
    fn new(
        window: &PyWindow,
        lam: &PySubgroup,
        gamma: &PySubgroup,
        convention: &str,
        h: Option<&PySubgroup>,
    ) -> PyResult<Self> {
        let conv = match (convention, h) {
            ("plancherel", None) => Convention::Plancherel,
            ("zak-chain", Some(h)) => Convention::ZakChain(h.0.clone()),
            ("zak-chain", None) => return Err(PyValueError::new_err("zak-chain convention needs h")),
            ("plancherel", Some(_)) => return Err(PyValueError::new_err("plancherel convention takes no h")),
            (other, _) => return Err(PyValueError::new_err(format!("unknown convention {other:?}"))),
        };
        GaborSystem::new(window.0.clone(), lam.0.clone(), gamma.0.clone(), conv)
            .map(Self)
            .map_err(err)
    }

    #[getter]
    fn weights(&self) -> (f64, f64) {
        (self.0.w_lambda(), self.0.w_gamma())
    }

    /// Optimal frame bounds `(A, B)` from the frame operator.
    fn frame_bounds(&self) -> PyResult<(f64, f64)> {
        frame_bounds(&self.0).map(|b| (b.lower, b.upper)).map_err(err)
    }

    fn spectrum(&self) -> PyResult<Vec<f64>> {
        frame_spectrum(&self.0).map_err(err)
    }

    #[pyo3(signature = (tol=1e-10))]
    fn classify<'py>(&self, py: Python<'py>, tol: f64) -> PyResult<Bound<'py, PyDict>> {
        report_dict(py, &classify(&self.0, tol).map_err(err)?)
    }

    fn admissible_h(&self) -> PyResult<Vec<PySubgroup>> {
        let s = &self.0;
        Ok(admissible_h(s.group(), s.lambda(), s.gamma())
            .map_err(err)?
            .into_iter()
            .map(|a| PySubgroup(a.h))
            .collect())
    }

    /// Values of the eigenvalue function over `G/H × Ĝ/H^⊥`, row-major;
    /// the system must use the zak-chain convention for the same `h`.
    fn eigenvalue_function(&self, h: &PySubgroup) -> PyResult<Vec<Vec<f64>>> {
        let e = zak_analysis::eigenvalue_function(&self.0, &self.admissible(h)?).map_err(err)?;
        Ok(e.values.chunks(e.n_cols).map(<[f64]>::to_vec).collect())
    }

    #[pyo3(signature = (h, tol=1e-10))]
    fn zak_frame_bounds<'py>(&self, py: Python<'py>, h: &PySubgroup, tol: f64) -> PyResult<Bound<'py, PyDict>> {
        report_dict(py, &zak_analysis::zak_frame_bounds(&self.0, &self.admissible(h)?, tol).map_err(err)?)
    }

    /// Global fiber bounds `(A, B)`; `reading` is `"modulated"` or `"printed"`.
    #[pyo3(signature = (h, reading="modulated"))]
    fn fiber_bounds(&self, h: &PySubgroup, reading: &str) -> PyResult<(f64, f64)> {
        let reading = match reading {
            "modulated" => Reading::Modulated,
            "printed" => Reading::Printed,
            other => return Err(PyValueError::new_err(format!("unknown reading {other:?}"))),
        };
        let r = gabor_fiber_bounds(&self.0, &self.admissible(h)?, reading).map_err(err)?;
        Ok((r.global.lower, r.global.upper))
    }
}

#[pyfunction]
fn divisor_condition(l: u64, n: u64, m: u64, r: u64) -> PyResult<bool> {
    zak_analysis::divisor_condition(l, n, m, r).map_err(err)
}

#[pymodule]
#[pyo3(name = "gabor_zak")]
fn init(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGroup>()?;
    m.add_class::<PySubgroup>()?;
    m.add_class::<PyWindow>()?;
    m.add_class::<PyGaborSystem>()?;
    m.add_function(wrap_pyfunction!(divisor_condition, m)?)?;
    Ok(())
}

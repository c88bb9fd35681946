//! Python bindings: `import cartan`.
//!
//! Scalars cross the boundary as text (`"3"`, `"-1/2"`), so Python ints and
//! `fractions.Fraction` both work as matrix entries. Reports come back as
//! plain dicts with the same layout as the CLI's JSON.

use cartan_core::cli::{format_matrix_file, parse_matrix_file, profile_json, report_json, report_text};
use cartan_core::oracle::{random_instances, verify_batch};
use cartan_core::{
    assemble_report_with, cartan_profile as profile, oracle, AnalysisReport, AnalyzeOptions, Error, FieldSpec,
    Matrix, PartitionData, Poly,
};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Internal(_) | Error::VerificationFailure(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn field(spec: &str) -> PyResult<FieldSpec> {
    spec.parse().map_err(py_err)
}

fn json_loads<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

fn py_int<'py>(py: Python<'py>, digits: String) -> PyResult<Bound<'py, PyAny>> {
    py.import("builtins")?.getattr("int")?.call1((digits,))
}

#[pyclass(name = "Poly", module = "cartan", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPoly {
    inner: Poly,
}

#[pymethods]
impl PyPoly {
    #[new]
    #[pyo3(signature = (text, field = "q"))]
    fn new(text: &str, field: &str) -> PyResult<Self> {
        let f = self::field(field)?;
        Ok(PyPoly { inner: Poly::parse(f, text).map_err(py_err)? })
    }

    #[getter]
    fn field(&self) -> String {
        self.inner.field().to_string()
    }

    /// `None` for the zero polynomial.
    #[getter]
    fn degree(&self) -> Option<usize> {
        self.inner.degree()
    }

    /// Coefficients in ascending degree, as text.
    fn coeffs(&self) -> Vec<String> {
        self.inner.coeffs().iter().map(ToString::to_string).collect()
    }

    /// Monic irreducible factors with multiplicities, in canonical order.
    #[pyo3(signature = (seed = 0))]
    fn factor(&self, seed: u64) -> PyResult<Vec<(PyPoly, usize)>> {
        let fs = cartan_core::factor_with_seed(&self.inner, seed).map_err(py_err)?;
        Ok(fs.into_iter().map(|f| (PyPoly { inner: f.poly }, f.multiplicity)).collect())
    }

    fn is_irreducible(&self) -> PyResult<bool> {
        cartan_core::is_irreducible(&self.inner).map_err(py_err)
    }

    fn __eq__(&self, other: PyRef<'_, PyPoly>) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Poly('{}', field='{}')", self.inner, self.inner.field())
    }
}

#[pyclass(name = "Matrix", module = "cartan", frozen, skip_from_py_object)]
struct PyMatrix {
    inner: Matrix,
}

#[pymethods]
impl PyMatrix {
    /// `rows` is a list of equal-length lists of ints, Fractions or strings.
    #[new]
    #[pyo3(signature = (rows, field = "q"))]
    fn new(rows: Vec<Vec<Bound<'_, PyAny>>>, field: &str) -> PyResult<Self> {
        let f = self::field(field)?;
        let mut parsed = Vec::with_capacity(rows.len());
        for row in rows {
            let mut r = Vec::with_capacity(row.len());
            for x in row {
                r.push(f.parse_scalar(&x.str()?.to_string()).map_err(py_err)?);
            }
            parsed.push(r);
        }
        Ok(PyMatrix { inner: Matrix::from_rows(f, parsed).map_err(py_err)? })
    }

    /// Parses the `field: …` / `n: …` / rows text format used by the CLI.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyMatrix { inner: parse_matrix_file(text).map_err(py_err)? })
    }

    #[getter]
    fn field(&self) -> String {
        self.inner.field().to_string()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.rows()
    }

    fn rows(&self) -> Vec<Vec<String>> {
        (0..self.inner.rows())
            .map(|i| self.inner.row(i).iter().map(ToString::to_string).collect())
            .collect()
    }

    fn rank(&self) -> usize {
        self.inner.rank()
    }

    fn charpoly(&self) -> PyResult<PyPoly> {
        Ok(PyPoly { inner: self.inner.charpoly().map_err(py_err)? })
    }

    /// Dimension of the centralizer, by solving `TB = BT` directly.
    fn centralizer_dim(&self) -> PyResult<usize> {
        Ok(oracle::centralizer_basis(&self.inner).map_err(py_err)?.dim())
    }

    #[pyo3(signature = (seed = 0))]
    fn analyze(&self, py: Python<'_>, seed: u64) -> PyResult<PyReport> {
        let inner = py
            .detach(|| assemble_report_with(&self.inner, AnalyzeOptions { seed, self_check: true }))
            .map_err(py_err)?;
        Ok(PyReport { inner })
    }

    fn __str__(&self) -> String {
        format_matrix_file(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("<Matrix {}x{} over {}>", self.inner.rows(), self.inner.cols(), self.inner.field())
    }
}

#[pyclass(name = "AnalysisReport", module = "cartan", frozen, skip_from_py_object)]
struct PyReport {
    inner: AnalysisReport,
}

#[pymethods]
impl PyReport {
    /// Number of simple modules.
    #[getter]
    fn l(&self) -> usize {
        self.inner.total_num_simples
    }

    #[getter]
    fn total_cartan_det<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        py_int(py, self.inner.total_cartan_det.to_string())
    }

    #[getter]
    fn global_dimension(&self) -> String {
        self.inner.overall_global_dimension.to_string()
    }

    #[getter]
    fn checksum(&self) -> String {
        self.inner.input_checksum.clone()
    }

    fn full_cartan(&self) -> Vec<Vec<u64>> {
        self.inner.full_cartan()
    }

    #[pyo3(signature = (full_cartan = false))]
    fn to_json(&self, full_cartan: bool) -> String {
        report_json(&self.inner, full_cartan)
    }

    #[pyo3(signature = (full_cartan = false))]
    fn to_dict<'py>(&self, py: Python<'py>, full_cartan: bool) -> PyResult<Bound<'py, PyAny>> {
        json_loads(py, &report_json(&self.inner, full_cartan))
    }

    fn __str__(&self) -> String {
        report_text(&self.inner, false)
    }
}

/// Cartan data of `M_λ(E)` with `[E:K] = ext_degree`, from partition text
/// such as `"1^2,3"`.
#[pyfunction]
#[pyo3(signature = (partition, ext_degree = 1))]
fn cartan_profile<'py>(py: Python<'py>, partition: &str, ext_degree: usize) -> PyResult<Bound<'py, PyAny>> {
    let lam: PartitionData = partition.parse().map_err(py_err)?;
    let p = profile(&lam, ext_degree).map_err(py_err)?;
    json_loads(py, &profile_json(&p))
}

/// Factors a monic polynomial; returns `[(factor_text, multiplicity), …]`.
#[pyfunction]
#[pyo3(signature = (poly, field = "q", seed = 0))]
fn factor(poly: &str, field: &str, seed: u64) -> PyResult<Vec<(String, usize)>> {
    let f = Poly::parse(self::field(field)?, poly).map_err(py_err)?;
    let fs = cartan_core::factor_with_seed(&f, seed).map_err(py_err)?;
    Ok(fs.into_iter().map(|x| (x.poly.to_string(), x.multiplicity)).collect())
}

fn report_dict<'py>(py: Python<'py>, rep: &oracle::VerificationReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("factor", rep.factor.to_string())?;
    d.set_item("partition", rep.partition.to_string())?;
    d.set_item("passed", rep.passed())?;
    let checks = PyList::empty(py);
    for c in &rep.checks {
        checks.append((c.name, c.passed, c.detail.as_str()))?;
    }
    d.set_item("checks", checks)?;
    d.set_item("centralizer_dim", rep.centralizer_dim)?;
    d.set_item("radical_dim", rep.radical.as_ref().map(|r| r.dim_radical))?;
    d.set_item("nilpotency_index", rep.radical.as_ref().map(|r| r.nilpotency_index))?;
    Ok(d)
}

/// Runs every brute-force check on the model of `(p, λ)`.
#[pyfunction]
#[pyo3(signature = (poly, partition, field = "q"))]
fn verify_instance<'py>(py: Python<'py>, poly: &str, partition: &str, field: &str) -> PyResult<Bound<'py, PyDict>> {
    let p = Poly::parse(self::field(field)?, poly).map_err(py_err)?;
    let lam: PartitionData = partition.parse().map_err(py_err)?;
    let rep = py.detach(|| oracle::verify_instance(&p, &lam)).map_err(py_err)?;
    report_dict(py, &rep)
}

/// Verifies `trials` random instances; returns one dict per instance.
#[pyfunction]
#[pyo3(signature = (trials, seed = 0, max_dim = 8, field = "q"))]
fn verify<'py>(py: Python<'py>, trials: usize, seed: u64, max_dim: usize, field: &str) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let f = self::field(field)?;
    let instances = random_instances(seed, f, max_dim, trials).map_err(py_err)?;
    let results = py.detach(|| verify_batch(&instances));
    results
        .into_iter()
        .map(|r| report_dict(py, &r.map_err(py_err)?))
        .collect()
}

#[pymodule]
fn cartan(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPoly>()?;
    m.add_class::<PyMatrix>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(cartan_profile, m)?)?;
    m.add_function(wrap_pyfunction!(factor, m)?)?;
    m.add_function(wrap_pyfunction!(verify_instance, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}

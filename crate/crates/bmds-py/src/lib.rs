//! Python bindings: parameter validation, encode/decode, single-column
//! repair and MDS certification.
//!
//! Columns cross the boundary as `bytes` of `ceil(L/8)` length, bits
//! packed least-significant-first - the same layout the CLI writes to
//! disk. Column indices are 0-based.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyBytes;

use bmds::code::{CodeParams, Family};
use bmds::codec::{self, ColumnSet};
use bmds::mdscheck;
use bmds::repair as repair_mod;
use bmds::Bits;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_family(family: &str) -> PyResult<Family> {
    family.parse().map_err(value_err)
}

/// Validated code parameters.
#[pyclass(frozen)]
struct Params {
    inner: CodeParams,
}

#[pymethods]
impl Params {
    /// Params(family, k, r, p, relaxed=False)
    ///
    /// `relaxed` lowers the k floor to 2 for MDS-table experiments;
    /// repair still demands k >= 4.
    #[new]
    #[pyo3(signature = (family, k, r, p, relaxed = false))]
    fn new(family: &str, k: usize, r: usize, p: usize, relaxed: bool) -> PyResult<Self> {
        let family = parse_family(family)?;
        let inner = if relaxed {
            CodeParams::validate_relaxed(family, k, r, p)
        } else {
            CodeParams::validate(family, k, r, p)
        }
        .map_err(value_err)?;
        Ok(Params { inner })
    }

    #[getter]
    fn family(&self) -> String {
        self.inner.family.to_string()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k
    }

    #[getter]
    fn r(&self) -> usize {
        self.inner.r
    }

    #[getter]
    fn p(&self) -> usize {
        self.inner.p
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.d
    }

    #[getter]
    fn eta(&self) -> usize {
        self.inner.eta
    }

    #[getter]
    fn tau(&self) -> usize {
        self.inner.tau
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    /// Stored bits per column: L = (p-1)*tau.
    #[getter]
    fn stored_bits(&self) -> usize {
        self.inner.stored_bits
    }

    /// Bytes per column on the wire: ceil(L/8).
    #[getter]
    fn column_bytes(&self) -> usize {
        self.inner.stored_bits.div_ceil(8)
    }

    /// Column positions holding the data payload.
    fn data_positions(&self) -> Vec<usize> {
        codec::data_positions(&self.inner).collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Params(family='{}', k={}, r={}, p={}, d={}, eta={}, tau={}, L={})",
            self.inner.family,
            self.inner.k,
            self.inner.r,
            self.inner.p,
            self.inner.d,
            self.inner.eta,
            self.inner.tau,
            self.inner.stored_bits
        )
    }
}

fn column_from_bytes(params: &CodeParams, bytes: &[u8]) -> PyResult<Bits> {
    Bits::from_le_bytes(bytes, params.stored_bits).map_err(value_err)
}

fn column_set(params: &CodeParams, columns: Vec<Option<Vec<u8>>>) -> PyResult<ColumnSet> {
    if columns.len() != params.n {
        return Err(value_err(format!(
            "expected {} columns, got {}",
            params.n,
            columns.len()
        )));
    }
    let mut cs = ColumnSet::new_erased(params);
    for (i, col) in columns.into_iter().enumerate() {
        if let Some(bytes) = col {
            cs.set_column(i, column_from_bytes(params, &bytes)?)
                .map_err(value_err)?;
        }
    }
    Ok(cs)
}

fn columns_out<'py>(py: Python<'py>, cs: &ColumnSet) -> Vec<Bound<'py, PyBytes>> {
    (0..cs.params().n)
        .map(|i| PyBytes::new(py, &cs.column(i).expect("complete").to_le_bytes()))
        .collect()
}

/// Encodes k data columns (list of bytes) into all k+r columns.
#[pyfunction]
fn encode<'py>(
    py: Python<'py>,
    params: &Params,
    data: Vec<Vec<u8>>,
) -> PyResult<Vec<Bound<'py, PyBytes>>> {
    let cols: Vec<Bits> = data
        .iter()
        .map(|d| column_from_bytes(&params.inner, d))
        .collect::<PyResult<_>>()?;
    let cs = codec::encode(&cols, &params.inner).map_err(value_err)?;
    Ok(columns_out(py, &cs))
}

/// Restores every missing column (None entries) from the k+ present ones.
#[pyfunction]
fn decode<'py>(
    py: Python<'py>,
    params: &Params,
    columns: Vec<Option<Vec<u8>>>,
) -> PyResult<Vec<Bound<'py, PyBytes>>> {
    let cs = column_set(&params.inner, columns)?;
    let full = codec::decode(&cs).map_err(value_err)?;
    Ok(columns_out(py, &full))
}

/// Rebuilds column `failed` (0-based) from its helper columns; returns
/// `(column_bytes, downloaded_bits)`.
#[pyfunction]
fn repair<'py>(
    py: Python<'py>,
    params: &Params,
    failed: usize,
    columns: Vec<Option<Vec<u8>>>,
) -> PyResult<(Bound<'py, PyBytes>, usize)> {
    let cs = column_set(&params.inner, columns)?;
    let (bits, bandwidth) = repair_mod::repair_column(&cs, failed).map_err(value_err)?;
    Ok((PyBytes::new(py, &bits.to_le_bytes()), bandwidth))
}

/// Planned download in bits for repairing column `failed` (0-based).
#[pyfunction]
fn repair_bandwidth(params: &Params, failed: usize) -> PyResult<usize> {
    repair_mod::plan_repair(&params.inner, failed)
        .map(|plan| plan.bandwidth)
        .map_err(value_err)
}

/// Minimum-storage repair bound d*L/(d-k+1).
#[pyfunction]
fn msr_lower_bound(params: &Params) -> usize {
    repair_mod::msr_lower_bound(&params.inner)
}

/// MDS verdict for the parameters: "MDS", "NotMDS" or "Unknown".
#[pyfunction]
fn check_mds(params: &Params) -> String {
    mdscheck::check_mds(&params.inner).verdict.to_string()
}

#[pymodule]
fn bmds_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Params>()?;
    m.add_function(wrap_pyfunction!(encode, m)?)?;
    m.add_function(wrap_pyfunction!(decode, m)?)?;
    m.add_function(wrap_pyfunction!(repair, m)?)?;
    m.add_function(wrap_pyfunction!(repair_bandwidth, m)?)?;
    m.add_function(wrap_pyfunction!(msr_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(check_mds, m)?)?;
    Ok(())
}

//! Python bindings for the sl2cohom library: cohomology tables, the derived
//! constants, Borel orbit decompositions and the verification suite.
//!
//! Groups are wrapped as `FinAbGroup` objects; matrices cross the boundary
//! as flat `(a, b, c, d)` tuples and everything else as plain ints, strings
//! and lists. Library errors surface as `ValueError`.

// the #[pyfunction] expansion converts PyErr into PyErr
#![allow(clippy::useless_conversion)]

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use sl2cohom::cosets::{build_coset_space, decompose_under_B, CosetAnalysis};
use sl2cohom::fp::make_prime;
use sl2cohom::tables;
use sl2cohom::{Error, Prime, DEFAULT_ENUM_BOUND};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn prime(p: u64) -> PyResult<Prime> {
    make_prime(p).map_err(err)
}

/// A finitely generated abelian group in invariant-factor form.
#[pyclass(frozen, eq, name = "FinAbGroup", module = "sl2cohom_py")]
#[derive(Clone, PartialEq)]
struct PyFinAbGroup(sl2cohom::FinAbGroup);

#[pymethods]
impl PyFinAbGroup {
    /// Builds `Z^free_rank + Z/d1 + Z/d2 + ...`; the orders must form a
    /// divisibility chain `d1 | d2 | ...` with every `d >= 2`.
    #[new]
    #[pyo3(signature = (free_rank = 0, invariant_factors = Vec::new()))]
    fn new(free_rank: usize, invariant_factors: Vec<u64>) -> PyResult<Self> {
        sl2cohom::FinAbGroup::from_chain(free_rank, invariant_factors)
            .map(PyFinAbGroup)
            .map_err(err)
    }

    #[getter]
    fn free_rank(&self) -> usize {
        self.0.free_rank()
    }

    #[getter]
    fn invariant_factors(&self) -> Vec<u64> {
        self.0.invariant_factors().to_vec()
    }

    /// `None` when the group is infinite.
    fn order(&self) -> Option<u128> {
        if self.0.free_rank() > 0 {
            None
        } else {
            Some(self.0.finite_order())
        }
    }

    fn torsion(&self) -> PyFinAbGroup {
        PyFinAbGroup(self.0.torsion())
    }

    fn two_rank(&self) -> usize {
        self.0.two_rank()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "FinAbGroup(free_rank={}, invariant_factors={:?})",
            self.0.free_rank(),
            self.0.invariant_factors()
        )
    }
}

/// Free rank of `H^1(Gamma_0(p), Z)`, by the closed form in `p mod 12`.
#[pyfunction]
fn n_of_p(p: u64) -> PyResult<u64> {
    tables::n_of_p(prime(p)?).map_err(err)
}

/// `N(p)` recomputed from Borel orbit counts over `SL_2(F_p)`.
#[pyfunction]
#[pyo3(signature = (p, bound = DEFAULT_ENUM_BOUND))]
fn n_of_p_oracle(p: u64, bound: u64) -> PyResult<u64> {
    tables::n_of_p_oracle(prime(p)?, bound).map_err(err)
}

/// `(N(p), Q(p), A(p))`.
#[pyfunction]
fn q_and_a(p: u64) -> PyResult<(u64, u64, u64)> {
    let c = tables::q_and_a(prime(p)?).map_err(err)?;
    Ok((c.n, c.q, c.a))
}

/// `H_1(SL_2(Z[1/p]), Z)`.
#[pyfunction]
fn h1_sl2zp(p: u64) -> PyResult<PyFinAbGroup> {
    Ok(PyFinAbGroup(tables::h1_sl2zp(prime(p)?)))
}

/// `H^0 .. H^max_degree` of `SL_2(Z)`.
#[pyfunction]
#[pyo3(signature = (max_degree = 5))]
fn sl2z_table(max_degree: usize) -> Vec<PyFinAbGroup> {
    tables::sl2z_table(max_degree).entries().iter().cloned().map(PyFinAbGroup).collect()
}

/// `H^0 .. H^max_degree` of `Gamma_0(p)`.
#[pyfunction]
#[pyo3(signature = (p, max_degree = 5))]
fn gamma0_table(p: u64, max_degree: usize) -> PyResult<Vec<PyFinAbGroup>> {
    let t = tables::gamma0_table(prime(p)?, max_degree);
    Ok(t.entries().iter().cloned().map(PyFinAbGroup).collect())
}

/// `H^0 .. H^max_degree` of `PGamma_0(p)`; requires `p > 3`.
#[pyfunction]
#[pyo3(signature = (p, max_degree = 5))]
fn pgamma0_table(p: u64, max_degree: usize) -> PyResult<Vec<PyFinAbGroup>> {
    let t = tables::pgamma0_table(prime(p)?, max_degree).map_err(err)?;
    Ok(t.entries().iter().cloned().map(PyFinAbGroup).collect())
}

/// `H^0 .. H^max_degree` of `SL_2(Z[1/p])`.
#[pyfunction]
#[pyo3(signature = (p, max_degree = 5))]
fn sl2zp_table(p: u64, max_degree: usize) -> PyResult<Vec<PyFinAbGroup>> {
    let t = tables::sl2zp_table(prime(p)?, max_degree);
    Ok(t.entries().iter().cloned().map(PyFinAbGroup).collect())
}

/// One Borel orbit on `G/C_k`.
#[pyclass(frozen, name = "Orbit", module = "sl2cohom_py")]
struct PyOrbit {
    /// Lexicographically least coset representative, as `(a, b, c, d)`.
    #[pyo3(get)]
    representative: (u64, u64, u64, u64),
    #[pyo3(get)]
    size: u64,
    #[pyo3(get)]
    stabilizer_order: u64,
    #[pyo3(get)]
    fixed_root: Option<u64>,
    #[pyo3(get)]
    singular: bool,
}

#[pymethods]
impl PyOrbit {
    fn __repr__(&self) -> String {
        let (a, b, c, d) = self.representative;
        format!(
            "Orbit([[{a},{b}],[{c},{d}]], size={}, stab={}, root={:?}, singular={})",
            self.size, self.stabilizer_order, self.fixed_root, self.singular
        )
    }
}

/// Borel orbits on `G/C_k` for `k` in `{2, 4, 6}`, sorted by stabilizer
/// order (descending) and then representative.
#[pyfunction]
#[pyo3(signature = (p, k, bound = DEFAULT_ENUM_BOUND))]
fn decompose(p: u64, k: u64, bound: u64) -> PyResult<Vec<PyOrbit>> {
    let space = build_coset_space(prime(p)?, k, bound).map_err(err)?;
    let dec = decompose_under_B(&space).map_err(err)?;
    Ok(dec
        .orbits()
        .iter()
        .map(|o| {
            let [a, b, c, d] = o.representative.entries();
            PyOrbit {
                representative: (a, b, c, d),
                size: o.size,
                stabilizer_order: o.stabilizer_order,
                fixed_root: o.fixed_root,
                singular: o.singular,
            }
        })
        .collect())
}

/// Number of Borel orbits on `G/C_2`, `G/C_4`, `G/C_6`.
#[pyfunction]
#[pyo3(signature = (p, bound = DEFAULT_ENUM_BOUND))]
fn orbit_counts(p: u64, bound: u64) -> PyResult<(usize, usize, usize)> {
    let analysis = CosetAnalysis::new(prime(p)?, bound).map_err(err)?;
    Ok(analysis.orbit_counts())
}

/// Runs the consistency suite for one prime; returns
/// `(name, status, detail)` triples with status `PASS`, `FAIL` or `SKIPPED`.
#[pyfunction]
#[pyo3(signature = (p, bound = DEFAULT_ENUM_BOUND))]
fn verify(p: u64, bound: u64) -> PyResult<Vec<(String, String, String)>> {
    let report = tables::consistency_suite(prime(p)?, bound);
    Ok(report
        .results
        .iter()
        .map(|r| (r.kind.name().to_string(), r.status.to_string(), r.detail.clone()))
        .collect())
}

#[pymodule]
fn sl2cohom_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFinAbGroup>()?;
    m.add_class::<PyOrbit>()?;
    m.add_function(wrap_pyfunction!(n_of_p, m)?)?;
    m.add_function(wrap_pyfunction!(n_of_p_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(q_and_a, m)?)?;
    m.add_function(wrap_pyfunction!(h1_sl2zp, m)?)?;
    m.add_function(wrap_pyfunction!(sl2z_table, m)?)?;
    m.add_function(wrap_pyfunction!(gamma0_table, m)?)?;
    m.add_function(wrap_pyfunction!(pgamma0_table, m)?)?;
    m.add_function(wrap_pyfunction!(sl2zp_table, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(orbit_counts, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}

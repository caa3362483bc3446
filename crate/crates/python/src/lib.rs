//! Python bindings for `psu_torsion`.
//!
//! Tables come back as plain lists, big integers as Python `int`, and every
//! domain error is raised as `ValueError`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use pyo3::exceptions::{PyTypeError, PyValueError};
use pyo3::prelude::*;

use psu_torsion::covering_map::{self, CstarMap, ExteriorMonomial, GroupVariant};
use psu_torsion::gcd_spectrum::{self, BnkTable};
use psu_torsion::torsion_ring::{self, ElementOrder, JRingPresentation};
use psu_torsion::{valuation, verify};

fn value_error(e: psu_torsion::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

trait OrRaise<T> {
    fn or_raise(self) -> PyResult<T>;
}

impl<T> OrRaise<T> for psu_torsion::Result<T> {
    fn or_raise(self) -> PyResult<T> {
        self.map_err(value_error)
    }
}

fn table_for(n: u64, oracle: &str) -> PyResult<BnkTable> {
    match oracle {
        "brute" => gcd_spectrum::bnk_bruteforce(n),
        "closed" => gcd_spectrum::bnk_closed_form(n),
        "schubert" => torsion_ring::schubert_quotient_oracle(n),
        "spectral" => torsion_ring::baum_browder_orders(n),
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown oracle {other:?} (expected brute, closed, schubert or spectral)"
            )))
        }
    }
    .or_raise()
}

/// Prime factorisation of `n` as `[(p, e), ...]` in increasing `p`.
#[pyfunction]
fn factorize(n: u64) -> PyResult<Vec<(u64, u32)>> {
    let f = valuation::factorize(n).or_raise()?;
    Ok(f.entries().iter().map(|pp| (pp.prime, pp.exponent)).collect())
}

#[pyfunction]
fn ord(m: BigUint, p: u64) -> PyResult<u64> {
    valuation::ord(&m, p).or_raise()
}

/// `ord_p(n!)`.
#[pyfunction]
fn legendre(n: u64, p: u64) -> PyResult<u64> {
    valuation::legendre_factorial_order(n, p).or_raise()
}

#[pyfunction]
fn binomial(n: u64, k: u64) -> PyResult<BigUint> {
    valuation::binomial(n, k).or_raise()
}

#[pyfunction]
fn ord_binomial(n: u64, k: u64, p: u64) -> PyResult<u64> {
    valuation::ord_binomial(n, k, p).or_raise()
}

/// `[b_{n,1}, ..., b_{n,n}]` from the chosen oracle.
#[pyfunction]
#[pyo3(signature = (n, oracle = "closed"))]
fn bnk(n: u64, oracle: &str) -> PyResult<Vec<u64>> {
    Ok(table_for(n, oracle)?.values().to_vec())
}

/// `[a_{n,2}, ..., a_{n,n}]`.
#[pyfunction]
#[pyo3(signature = (n, oracle = "closed"))]
fn ank(n: u64, oracle: &str) -> PyResult<Vec<u64>> {
    let t = table_for(n, oracle)?;
    Ok(gcd_spectrum::ank_from_bnk(&t).or_raise()?.values().to_vec())
}

/// `(q0, {p: members})` for the split of `{2..n}` into prime-power blocks.
#[pyfunction]
fn partition(n: u64) -> PyResult<(Vec<u64>, BTreeMap<u64, Vec<u64>>)> {
    let part = gcd_spectrum::partition(n).or_raise()?;
    let blocks = part
        .blocks
        .iter()
        .map(|b| (b.prime, b.members.iter().copied().collect()))
        .collect();
    Ok((part.q0.into_iter().collect(), blocks))
}

#[pyfunction]
fn strict_inequality_check(n: u64, p: u64, s: u32, k: u64) -> PyResult<bool> {
    gcd_spectrum::strict_inequality_check(n, p, s, k).or_raise()
}

/// Orders of `θ(k) = C(n,k) ω^{k-1}` for `k = 2..n`.
#[pyfunction]
fn theta_orders(n: u64) -> PyResult<Vec<u64>> {
    Ok(torsion_ring::theta_orders(&torsion_ring::presentation(n).or_raise()?))
}

#[pyfunction]
fn theta_image(n: u64, k: u64) -> PyResult<JRingElement> {
    torsion_ring::theta_image(n, k).map(JRingElement).or_raise()
}

/// Primary summands as `[(p, r, [(coefficient, power), ...]), ...]`.
#[pyfunction]
fn chow_decomposition(n: u64) -> PyResult<Vec<(u64, u32, Vec<(u64, u64)>)>> {
    let d = torsion_ring::chow_primary_decomposition(n).or_raise()?;
    Ok(d.summands
        .iter()
        .map(|s| {
            let rels = s.relations.iter().map(|r| (r.coefficient, r.power)).collect();
            (s.prime, s.exponent, rels)
        })
        .collect())
}

#[pyfunction]
fn schubert_coefficients(n: u64) -> PyResult<Vec<BigInt>> {
    torsion_ring::schubert_coefficients(n).or_raise()
}

/// `c*` on the exterior monomial with the given indices; returns
/// `(multiplier, sorted indices)`.
#[pyfunction]
fn cstar_monomial(n: u64, indices: Vec<u64>) -> PyResult<(u64, Vec<u64>)> {
    let map = CstarMap::for_n(n).or_raise()?;
    let m = ExteriorMonomial::new(n, indices).or_raise()?;
    let (mult, image) = map.cstar_monomial(&m).or_raise()?;
    Ok((mult, image.indices().to_vec()))
}

#[pyfunction]
fn top_degree_multiplier(n: u64) -> PyResult<u64> {
    covering_map::top_degree_multiplier(n).or_raise()
}

#[pyfunction]
fn free_rank(n: u64) -> PyResult<BigUint> {
    covering_map::free_rank(n).or_raise()
}

/// Betti numbers by degree; `variant` is `"SU"` or `"U"`.
#[pyfunction]
#[pyo3(signature = (n, variant = "SU"))]
fn poincare_polynomial(n: u64, variant: &str) -> PyResult<Vec<BigUint>> {
    let v = match variant {
        "SU" => GroupVariant::SU,
        "U" => GroupVariant::U,
        other => return Err(PyValueError::new_err(format!("unknown group variant {other:?}"))),
    };
    covering_map::poincare_polynomial(n, v).or_raise()
}

/// Runs every consistency check over `from..=to`. Returns
/// `(verified, failures, first_failure)` where `first_failure` is
/// `None` or `(check_name, witness_dict)`.
#[pyfunction]
#[pyo3(signature = (from, to, workers = 1, ineq_bound = verify::DEFAULT_INEQ_BOUND))]
#[allow(clippy::type_complexity)]
fn run_verify(
    py: Python<'_>,
    from: u64,
    to: u64,
    workers: usize,
    ineq_bound: u64,
) -> PyResult<(u64, u64, Option<(String, BTreeMap<String, i64>)>)> {
    let cfg = verify::VerifyConfig { workers, ineq_bound, ..verify::VerifyConfig::new(from, to) };
    let summary = py.detach(|| verify::verify_range(&cfg)).or_raise()?;
    let first = summary
        .first_failure()
        .map(|c| (c.name.clone(), c.witness.clone().unwrap_or_default()));
    Ok((summary.verified(), summary.failures(), first))
}

/// The truncated ring `Z[ω] / (b_{n,k} ω^k, ω^n)`.
#[pyclass(name = "JRing", frozen, module = "psu_torsion_py")]
struct JRing(Arc<JRingPresentation>);

#[pymethods]
impl JRing {
    #[new]
    fn new(n: u64) -> PyResult<Self> {
        Ok(Self(Arc::new(torsion_ring::presentation(n).or_raise()?)))
    }

    #[getter]
    fn n(&self) -> u64 {
        self.0.n()
    }

    /// Additive orders of `ω^1, ..., ω^{n-1}`.
    #[getter]
    fn orders(&self) -> Vec<u64> {
        self.0.orders().to_vec()
    }

    fn zero(&self) -> JRingElement {
        JRingElement(torsion_ring::JRingElement::zero(&self.0))
    }

    fn one(&self) -> JRingElement {
        JRingElement(torsion_ring::JRingElement::one(&self.0))
    }

    #[pyo3(signature = (k, coefficient = BigInt::from(1)))]
    fn omega(&self, k: u64, coefficient: BigInt) -> JRingElement {
        JRingElement(torsion_ring::JRingElement::monomial(&self.0, k, &coefficient))
    }

    /// `c0 + coeffs[0] ω + coeffs[1] ω^2 + ...`, reduced.
    #[pyo3(signature = (c0, coeffs = Vec::new()))]
    fn element(&self, c0: BigInt, coeffs: Vec<BigInt>) -> JRingElement {
        JRingElement(torsion_ring::JRingElement::from_coefficients(&self.0, c0, &coeffs))
    }

    fn __repr__(&self) -> String {
        format!("JRing(n={})", self.0.n())
    }
}

#[pyclass(name = "JRingElement", frozen, eq, skip_from_py_object, module = "psu_torsion_py")]
#[derive(Clone, PartialEq)]
struct JRingElement(torsion_ring::JRingElement);

enum Operand {
    Element(torsion_ring::JRingElement),
    Integer(BigInt),
}

impl<'a, 'py> FromPyObject<'a, 'py> for Operand {
    type Error = PyErr;

    fn extract(ob: Borrowed<'a, 'py, PyAny>) -> PyResult<Self> {
        if let Ok(e) = ob.cast::<JRingElement>() {
            return Ok(Operand::Element(e.get().0.clone()));
        }
        ob.extract::<BigInt>()
            .map(Operand::Integer)
            .map_err(|_| PyTypeError::new_err("expected a JRingElement or an int"))
    }
}

impl JRingElement {
    fn lift(&self, other: Operand) -> torsion_ring::JRingElement {
        match other {
            Operand::Element(e) => e,
            Operand::Integer(c) => {
                torsion_ring::JRingElement::from_coefficients(self.0.ring(), c, &[])
            }
        }
    }
}

#[pymethods]
impl JRingElement {
    #[getter]
    fn n(&self) -> u64 {
        self.0.n()
    }

    #[getter]
    fn constant(&self) -> BigInt {
        self.0.constant().clone()
    }

    /// Reduced coefficients of `ω^1, ..., ω^{n-1}`.
    #[getter]
    fn coefficients(&self) -> Vec<u64> {
        self.0.coefficients().to_vec()
    }

    /// Additive order, or `None` when the constant term is nonzero.
    fn order(&self) -> Option<u64> {
        match self.0.element_order() {
            ElementOrder::Finite(m) => Some(m),
            ElementOrder::Infinite => None,
        }
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn __add__(&self, other: Operand) -> PyResult<Self> {
        self.0.add(&self.lift(other)).map(Self).or_raise()
    }

    fn __radd__(&self, other: Operand) -> PyResult<Self> {
        self.__add__(other)
    }

    fn __sub__(&self, other: Operand) -> PyResult<Self> {
        self.0.sub(&self.lift(other)).map(Self).or_raise()
    }

    fn __rsub__(&self, other: Operand) -> PyResult<Self> {
        self.lift(other).sub(&self.0).map(Self).or_raise()
    }

    fn __mul__(&self, other: Operand) -> PyResult<Self> {
        match other {
            Operand::Integer(c) => Ok(Self(self.0.scale(&c))),
            Operand::Element(e) => self.0.multiply(&e).map(Self).or_raise(),
        }
    }

    fn __rmul__(&self, other: Operand) -> PyResult<Self> {
        self.__mul__(other)
    }

    fn __neg__(&self) -> Self {
        Self(self.0.negate())
    }

    fn __repr__(&self) -> String {
        format!("JRingElement(n={}, {})", self.0.n(), self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

#[pymodule]
fn psu_torsion_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("CHECK_NAMES", verify::CHECK_NAMES.to_vec())?;
    m.add_class::<JRing>()?;
    m.add_class::<JRingElement>()?;
    m.add_function(wrap_pyfunction!(factorize, m)?)?;
    m.add_function(wrap_pyfunction!(ord, m)?)?;
    m.add_function(wrap_pyfunction!(legendre, m)?)?;
    m.add_function(wrap_pyfunction!(binomial, m)?)?;
    m.add_function(wrap_pyfunction!(ord_binomial, m)?)?;
    m.add_function(wrap_pyfunction!(bnk, m)?)?;
    m.add_function(wrap_pyfunction!(ank, m)?)?;
    m.add_function(wrap_pyfunction!(partition, m)?)?;
    m.add_function(wrap_pyfunction!(strict_inequality_check, m)?)?;
    m.add_function(wrap_pyfunction!(theta_orders, m)?)?;
    m.add_function(wrap_pyfunction!(theta_image, m)?)?;
    m.add_function(wrap_pyfunction!(chow_decomposition, m)?)?;
    m.add_function(wrap_pyfunction!(schubert_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(cstar_monomial, m)?)?;
    m.add_function(wrap_pyfunction!(top_degree_multiplier, m)?)?;
    m.add_function(wrap_pyfunction!(free_rank, m)?)?;
    m.add_function(wrap_pyfunction!(poincare_polynomial, m)?)?;
    m.add_function(wrap_pyfunction!(run_verify, m)?)?;
    Ok(())
}

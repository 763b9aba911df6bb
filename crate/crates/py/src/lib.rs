//! Python module `symvec`.
//!
//! Rationals cross the boundary as `fractions.Fraction`; rational arguments
//! accept anything whose `str()` parses (`Fraction`, `int`, `"1/3"`, `"0.25"`).

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyIOError, PyValueError};
use pyo3::prelude::*;

use symvec as sv;
use symvec::covering::{self, CoveringPoset, SpaceKind};
use symvec::lab::{self, PermutationGroupSpec, SetFamily};
use symvec::measure;
use symvec::poset::{domination_strength, format_mask};
use symvec::rational::{format_rational, parse_rational, Rational};
use symvec::{Error, ProductFamily};

create_exception!(
    symvec,
    BudgetExceeded,
    PyException,
    "Enumeration would exceed the budget."
);
create_exception!(
    symvec,
    DegenerateError,
    PyException,
    "The construction is degenerate."
);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Budget { .. } => BudgetExceeded::new_err(e.to_string()),
        Error::DegeneratePoset(_) | Error::DegenerateConstruction(_) => {
            DegenerateError::new_err(e.to_string())
        }
        Error::Io(_) => PyIOError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((format_rational(r),))
}

fn rational(value: &Bound<'_, PyAny>) -> PyResult<Rational> {
    parse_rational(&value.str()?.to_cow()?).map_err(to_py)
}

fn json<'py>(py: Python<'py>, value: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?
        .call_method1("loads", (value.to_string(),))
}

fn group(n: usize, generators: Option<Vec<Vec<usize>>>) -> PyResult<PermutationGroupSpec> {
    match generators {
        Some(g) => PermutationGroupSpec::new(n, g).map_err(to_py),
        None => Ok(PermutationGroupSpec::cyclic(n)),
    }
}

/// The covering poset `W_k` of singletons and co-singletons of `[k]`.
#[pyclass(name = "CoveringPoset", frozen)]
struct PyCoveringPoset {
    inner: CoveringPoset,
}

#[pymethods]
impl PyCoveringPoset {
    #[new]
    fn new(k: usize) -> PyResult<Self> {
        Ok(PyCoveringPoset {
            inner: covering::build_covering(k).map_err(to_py)?,
        })
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    fn __len__(&self) -> usize {
        self.inner.poset().len()
    }

    /// Element masks as bit strings, element 1 first.
    fn elements(&self) -> Vec<String> {
        (0..self.inner.poset().len())
            .map(|i| format_mask(self.inner.mask(i)))
            .collect()
    }

    fn leq(&self, a: usize, b: usize) -> bool {
        self.inner.poset().leq(a, b)
    }

    fn mu0<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        self.inner
            .mu0()
            .masses()
            .iter()
            .map(|m| fraction(py, m))
            .collect()
    }

    fn mu1<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        self.inner
            .mu1()
            .masses()
            .iter()
            .map(|m| fraction(py, m))
            .collect()
    }

    /// Masses of `mu_t = (1 - t) mu0 + t mu1`.
    fn interpolate<'py>(
        &self,
        py: Python<'py>,
        t: &Bound<'py, PyAny>,
    ) -> PyResult<Vec<Bound<'py, PyAny>>> {
        let mu = measure::interpolate(&self.inner.interpolation(), &rational(t)?).map_err(to_py)?;
        mu.masses().iter().map(|m| fraction(py, m)).collect()
    }

    /// Element indices of the up-set generated by the singleton `{symbol}`.
    fn star(&self, symbol: usize) -> Vec<usize> {
        self.inner.star(symbol).indices().collect()
    }

    /// `(kappa, witness)`: the minimum of `(mu1 - mu0)(A)` over proper nontrivial up-sets.
    #[pyo3(signature = (budget = sv::DEFAULT_BUDGET))]
    fn domination<'py>(
        &self,
        py: Python<'py>,
        budget: u64,
    ) -> PyResult<(Bound<'py, PyAny>, Vec<usize>)> {
        let rep = domination_strength(
            self.inner.poset(),
            self.inner.mu0(),
            self.inner.mu1(),
            budget,
        )
        .map_err(to_py)?;
        Ok((
            fraction(py, &rep.strength)?,
            rep.witness.indices().collect(),
        ))
    }

    fn __repr__(&self) -> String {
        format!("CoveringPoset(k={})", self.inner.k())
    }
}

/// A family of vectors, either in `[k]^n` (`space == "base"`) or in `W_k^n` (`"cover"`).
#[pyclass(name = "Family", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyFamily {
    k: usize,
    space: SpaceKind,
    inner: ProductFamily,
}

impl PyFamily {
    fn base(k: usize, inner: ProductFamily) -> Self {
        PyFamily {
            k,
            space: SpaceKind::Base,
            inner,
        }
    }

    /// The family as a subset of `W_k^n`, embedding base families.
    fn in_cover(&self) -> PyResult<(CoveringPoset, ProductFamily)> {
        let cover = covering::build_covering(self.k).map_err(to_py)?;
        let fam = match self.space {
            SpaceKind::Cover => self.inner.clone(),
            SpaceKind::Base => covering::embed_family(&cover, &self.inner).map_err(to_py)?,
        };
        Ok((cover, fam))
    }
}

#[pymethods]
impl PyFamily {
    /// Base family over `[k]^n` from 1-based vectors.
    #[staticmethod]
    fn from_vectors(k: usize, n: usize, vectors: Vec<Vec<usize>>) -> PyResult<Self> {
        let host = covering::base_poset(k).map_err(to_py)?;
        let points = vectors
            .into_iter()
            .map(|v| {
                v.into_iter()
                    .map(|x| match x {
                        1..=255 if x <= k => Ok((x - 1) as u8),
                        _ => Err(PyValueError::new_err(format!("symbol {x} outside 1..={k}"))),
                    })
                    .collect::<PyResult<Vec<u8>>>()
            })
            .collect::<PyResult<Vec<_>>>()?;
        Ok(PyFamily::base(
            k,
            ProductFamily::new(host, n, points).map_err(to_py)?,
        ))
    }

    #[getter]
    fn k(&self) -> usize {
        self.k
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn space(&self) -> &'static str {
        self.space.as_str()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// Members as 1-based symbol vectors (base) or element-index vectors (cover).
    fn vectors(&self) -> Vec<Vec<usize>> {
        let shift = usize::from(self.space == SpaceKind::Base);
        self.inner
            .points()
            .iter()
            .map(|p| p.iter().map(|&x| x as usize + shift).collect())
            .collect()
    }

    fn density<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &lab::family_size_and_density(&self.inner).1)
    }

    #[pyo3(signature = (budget = sv::DEFAULT_BUDGET))]
    fn is_intersecting(&self, budget: u64) -> PyResult<bool> {
        covering::is_intersecting_family(&self.inner, budget).map_err(to_py)
    }

    /// `(invariant, transitive)` for the group generated by `generators` (1-based images).
    fn is_symmetric(&self, generators: Vec<Vec<usize>>) -> PyResult<(bool, bool)> {
        let spec = PermutationGroupSpec::new(self.inner.n(), generators).map_err(to_py)?;
        let s = lab::is_symmetric(&self.inner, &spec).map_err(to_py)?;
        Ok((s.invariant, s.transitive))
    }

    fn is_up_set(&self) -> bool {
        self.inner.is_up_set()
    }

    /// Up-closure in `W_k^n`.
    #[pyo3(signature = (budget = sv::DEFAULT_BUDGET))]
    fn closure(&self, budget: u64) -> PyResult<PyFamily> {
        let (_, fam) = self.in_cover()?;
        Ok(PyFamily {
            k: self.k,
            space: SpaceKind::Cover,
            inner: fam.up_closure(budget).map_err(to_py)?,
        })
    }

    /// `mu_t^n` of the family in `W_k^n`.
    fn measure<'py>(&self, py: Python<'py>, t: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
        let (cover, fam) = self.in_cover()?;
        let mu = measure::interpolate(&cover.interpolation(), &rational(t)?).map_err(to_py)?;
        fraction(py, &measure::product_measure(&mu, &fam).map_err(to_py)?)
    }

    /// Per-coordinate influences at `mu_t`.
    #[pyo3(signature = (t, budget = sv::DEFAULT_BUDGET))]
    fn influences<'py>(
        &self,
        py: Python<'py>,
        t: &Bound<'py, PyAny>,
        budget: u64,
    ) -> PyResult<Vec<Bound<'py, PyAny>>> {
        let (cover, fam) = self.in_cover()?;
        let rep = measure::influence_report(&fam, &cover.interpolation(), &rational(t)?, budget)
            .map_err(to_py)?;
        rep.per_coordinate.iter().map(|r| fraction(py, r)).collect()
    }

    /// Exact `d/dt mu_t^n` (the family must be an up-set unless `strict` is false).
    #[pyo3(signature = (t, strict = true, budget = sv::DEFAULT_BUDGET))]
    fn russo_derivative<'py>(
        &self,
        py: Python<'py>,
        t: &Bound<'py, PyAny>,
        strict: bool,
        budget: u64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let (cover, fam) = self.in_cover()?;
        let d =
            measure::russo_derivative(&fam, &cover.interpolation(), &rational(t)?, strict, budget)
                .map_err(to_py)?;
        fraction(py, &d)
    }

    fn __repr__(&self) -> String {
        format!(
            "Family(k={}, n={}, space={}, size={})",
            self.k,
            self.inner.n(),
            self.space.as_str(),
            self.inner.len()
        )
    }
}

/// All vectors of `[k]^n` with `symbol` at `coordinate`.
#[pyfunction]
#[pyo3(signature = (k, n, coordinate = 1, symbol = 1, budget = sv::DEFAULT_BUDGET))]
fn dictator(
    k: usize,
    n: usize,
    coordinate: usize,
    symbol: usize,
    budget: u64,
) -> PyResult<PyFamily> {
    Ok(PyFamily::base(
        k,
        lab::dictator_family(k, n, coordinate, symbol, budget).map_err(to_py)?,
    ))
}

/// Binary vectors of odd length `n` with more ones than zeros.
#[pyfunction]
#[pyo3(signature = (n, budget = sv::DEFAULT_BUDGET))]
fn majority(n: usize, budget: u64) -> PyResult<PyFamily> {
    Ok(PyFamily::base(
        2,
        lab::majority_family(n, budget).map_err(to_py)?,
    ))
}

/// Vectors whose `symbol`-positions contain a block of `blocks` (an intersecting set system on `[n]`).
#[pyfunction]
#[pyo3(signature = (blocks, n, k = 3, symbol = 1, budget = sv::DEFAULT_BUDGET))]
fn set_intersecting(
    blocks: Vec<Vec<usize>>,
    n: usize,
    k: usize,
    symbol: usize,
    budget: u64,
) -> PyResult<PyFamily> {
    let blocks = SetFamily::new(n, blocks).map_err(to_py)?;
    let fam = lab::set_intersecting_family(&blocks, symbol, k, true, budget).map_err(to_py)?;
    Ok(PyFamily::base(k, fam))
}

/// The set-intersecting family built from the lines of the projective plane of order `q`.
#[pyfunction]
#[pyo3(signature = (q, k = 3, symbol = 1, budget = sv::DEFAULT_BUDGET))]
fn singer(q: usize, k: usize, symbol: usize, budget: u64) -> PyResult<PyFamily> {
    let lines = lab::singer_difference_set(q).map_err(to_py)?;
    let fam = lab::set_intersecting_family(&lines, symbol, k, true, budget).map_err(to_py)?;
    Ok(PyFamily::base(k, fam))
}

/// `singer(2, k)`: built from the seven lines of the Fano plane.
#[pyfunction]
#[pyo3(signature = (k = 3, symbol = 1, budget = sv::DEFAULT_BUDGET))]
fn fano(k: usize, symbol: usize, budget: u64) -> PyResult<PyFamily> {
    singer(2, k, symbol, budget)
}

/// Lines of the projective plane of order `q` as 1-based blocks.
#[pyfunction]
fn projective_lines(q: usize) -> PyResult<Vec<Vec<usize>>> {
    Ok(lab::singer_difference_set(q)
        .map_err(to_py)?
        .blocks()
        .to_vec())
}

/// Domination strength of `W_k`.
#[pyfunction]
#[pyo3(signature = (k, budget = sv::DEFAULT_BUDGET))]
fn domination<'py>(py: Python<'py>, k: usize, budget: u64) -> PyResult<Bound<'py, PyAny>> {
    let cover = covering::build_covering(k).map_err(to_py)?;
    let rep =
        domination_strength(cover.poset(), cover.mu0(), cover.mu1(), budget).map_err(to_py)?;
    fraction(py, &rep.strength)
}

/// Exact maximum intersecting family of `[k]^n` invariant under the generated group
/// (the full n-cycle by default). Returns `(max_size, witness, report)`.
#[pyfunction]
#[pyo3(signature = (k, n, generators = None, brute_force = false, budget = sv::DEFAULT_BUDGET))]
fn search<'py>(
    py: Python<'py>,
    k: usize,
    n: usize,
    generators: Option<Vec<Vec<usize>>>,
    brute_force: bool,
    budget: u64,
) -> PyResult<(usize, PyFamily, Bound<'py, PyAny>)> {
    let g = group(n, generators)?;
    let result = if brute_force {
        sv::search::brute_force_max(k, n, &g, budget)
    } else {
        sv::search::max_symmetric_intersecting(k, n, &g, budget)
    }
    .map_err(to_py)?;
    let report = json(py, &result.to_json())?;
    Ok((result.max_size, PyFamily::base(k, result.witness), report))
}

/// Smallest `C` with `q - p <= C ln(1/(2 eps)) / (kappa ln n)`.
#[pyfunction]
fn empirical_c(
    p: &Bound<'_, PyAny>,
    q: &Bound<'_, PyAny>,
    eps: &Bound<'_, PyAny>,
    kappa: &Bound<'_, PyAny>,
    n: usize,
) -> PyResult<f64> {
    let r = measure::empirical_c(
        &rational(p)?,
        &rational(q)?,
        &rational(eps)?,
        &rational(kappa)?,
        n,
    )
    .map_err(to_py)?;
    Ok(r.empirical_c)
}

/// Closure, half-measure and bound stages on a symmetric intersecting base family, as a dict.
#[pyfunction]
#[pyo3(signature = (family, generators = None, budget = sv::DEFAULT_BUDGET))]
fn bound_chain<'py>(
    py: Python<'py>,
    family: &PyFamily,
    generators: Option<Vec<Vec<usize>>>,
    budget: u64,
) -> PyResult<Bound<'py, PyAny>> {
    if family.space != SpaceKind::Base {
        return Err(PyValueError::new_err("bound_chain expects a base family"));
    }
    let g = group(family.inner.n(), generators)?;
    let chain = sv::chain::bound_chain(&family.inner, &g, budget).map_err(to_py)?;
    json(py, &chain.to_json())
}

#[pymodule]
#[pyo3(name = "symvec")]
fn symvec_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("DEFAULT_BUDGET", sv::DEFAULT_BUDGET)?;
    m.add("BudgetExceeded", m.py().get_type::<BudgetExceeded>())?;
    m.add("DegenerateError", m.py().get_type::<DegenerateError>())?;
    m.add_class::<PyCoveringPoset>()?;
    m.add_class::<PyFamily>()?;
    m.add_function(wrap_pyfunction!(dictator, m)?)?;
    m.add_function(wrap_pyfunction!(majority, m)?)?;
    m.add_function(wrap_pyfunction!(set_intersecting, m)?)?;
    m.add_function(wrap_pyfunction!(singer, m)?)?;
    m.add_function(wrap_pyfunction!(fano, m)?)?;
    m.add_function(wrap_pyfunction!(projective_lines, m)?)?;
    m.add_function(wrap_pyfunction!(domination, m)?)?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    m.add_function(wrap_pyfunction!(empirical_c, m)?)?;
    m.add_function(wrap_pyfunction!(bound_chain, m)?)?;
    Ok(())
}

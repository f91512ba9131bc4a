//! Python bindings for the germlab library: the main finite structures
//! (semilattices, inverse semigroups, semigroupoids, k-graph
//! presentations) and the pipeline operations over them.
//!
//! Structures ingest the same JSON documents as the CLI; results come
//! back as plain Python lists, dicts, and strings.

use germlab::germs::build_groupoid;
use germlab::io::{self, Structure};
use germlab::paths::{self, TightVerdict};
use germlab::rep::{canonical_tight_rep, extend_to_slambda, is_tight_sgpd_rep, restrict_to_sgpd};
use germlab::semilattice::{Character, Filter, TightMode};
use germlab::slambda::SLambda as CoreSLambda;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use std::collections::BTreeMap;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A finite meet-semilattice with zero.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct Semilattice {
    inner: germlab::Semilattice,
}

#[pymethods]
impl Semilattice {
    /// Parse from a JSON envelope of kind "semilattice".
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        match io::parse_structure(text).map_err(err)? {
            Structure::Semilattice(inner) => Ok(Semilattice { inner }),
            other => Err(PyValueError::new_err(format!("expected a semilattice, got {}", other.kind()))),
        }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn elements(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    fn meet(&self, x: &str, y: &str) -> PyResult<String> {
        let (i, j) = (self.index(x)?, self.index(y)?);
        Ok(self.inner.label(self.inner.meet(i, j)).to_string())
    }

    fn leq(&self, x: &str, y: &str) -> PyResult<bool> {
        Ok(self.inner.leq(self.index(x)?, self.index(y)?))
    }

    fn intersects(&self, x: &str, y: &str) -> PyResult<bool> {
        Ok(self.inner.intersects(self.index(x)?, self.index(y)?))
    }

    /// The relative set of elements below everything in `xs` and
    /// disjoint from everything in `ys` (zero included).
    fn relative_set(&self, xs: Vec<String>, ys: Vec<String>) -> PyResult<Vec<String>> {
        let xs: Vec<usize> = xs.iter().map(|l| self.index(l)).collect::<PyResult<_>>()?;
        let ys: Vec<usize> = ys.iter().map(|l| self.index(l)).collect::<PyResult<_>>()?;
        Ok(self
            .inner
            .relative_set(&xs, &ys)
            .into_iter()
            .map(|i| self.inner.label(i).to_string())
            .collect())
    }

    fn is_cover(&self, z: Vec<String>, family: Vec<String>) -> PyResult<bool> {
        let z: Vec<usize> = z.iter().map(|l| self.index(l)).collect::<PyResult<_>>()?;
        let family: Vec<usize> =
            family.iter().map(|l| self.index(l)).collect::<PyResult<_>>()?;
        self.inner.is_cover(&z, &family).map_err(err)
    }

    /// Filters by principal generator label.
    fn filters(&self) -> Vec<String> {
        self.inner
            .enumerate_filters()
            .iter()
            .map(|f| self.inner.label(f.min).to_string())
            .collect()
    }

    fn is_ultrafilter(&self, generator: &str) -> PyResult<bool> {
        Ok(self.inner.is_ultrafilter(Filter { min: self.index(generator)? }))
    }

    #[pyo3(signature = (generator, reduced = false))]
    fn is_tight_character(&self, generator: &str, reduced: bool) -> PyResult<bool> {
        let mode = if reduced { TightMode::Reduced } else { TightMode::Full };
        Ok(self.inner.is_tight_character(Character { min: self.index(generator)? }, mode))
    }

    /// Tight characters by principal generator label.
    fn tight_spectrum(&self) -> PyResult<Vec<String>> {
        Ok(self
            .inner
            .tight_spectrum()
            .map_err(err)?
            .iter()
            .map(|c| self.inner.label(c.min).to_string())
            .collect())
    }

    fn is_dense(&self, y: &str, x: &str) -> PyResult<bool> {
        self.inner.is_dense(self.index(y)?, self.index(x)?).map_err(err)
    }
}

impl Semilattice {
    fn index(&self, l: &str) -> PyResult<usize> {
        self.inner
            .index_of(l)
            .ok_or_else(|| PyValueError::new_err(format!("unknown element {l}")))
    }
}

/// A finite inverse semigroup by multiplication table.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct InverseSemigroup {
    inner: germlab::InverseSemigroup,
}

#[pymethods]
impl InverseSemigroup {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        match io::parse_structure(text).map_err(err)? {
            Structure::Isg(inner) => Ok(InverseSemigroup { inner }),
            other => Err(PyValueError::new_err(format!(
                "expected an inverse semigroup, got {}",
                other.kind()
            ))),
        }
    }

    /// The symmetric inverse monoid on n points.
    #[staticmethod]
    fn symmetric(n: usize) -> Self {
        InverseSemigroup { inner: germlab::corpus::symmetric_inverse_monoid(n) }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn elements(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    fn mul(&self, s: &str, t: &str) -> PyResult<String> {
        let (i, j) = (self.index(s)?, self.index(t)?);
        Ok(self.inner.label(self.inner.mul(i, j)).to_string())
    }

    fn star(&self, s: &str) -> PyResult<String> {
        Ok(self.inner.label(self.inner.star(self.index(s)?)).to_string())
    }

    fn natural_leq(&self, s: &str, t: &str) -> PyResult<bool> {
        Ok(self.inner.natural_leq(self.index(s)?, self.index(t)?))
    }

    fn is_e_star_unitary(&self) -> bool {
        self.inner.is_e_star_unitary()
    }

    /// The idempotent semilattice E(S), zero adjoined when absent.
    fn idempotent_semilattice(&self) -> Semilattice {
        Semilattice { inner: self.inner.idempotent_semilattice().0 }
    }

    /// Tight characters of E(S), by principal generator label.
    fn tight_spectrum(&self) -> PyResult<Vec<String>> {
        let (lat, _) = self.inner.idempotent_semilattice();
        Ok(lat
            .tight_spectrum()
            .map_err(err)?
            .iter()
            .map(|c| lat.label(c.min).to_string())
            .collect())
    }

    /// The groupoid of germs of the action on the tight spectrum, as
    /// (units, germ triples (element, source, range)).
    fn germ_groupoid(&self) -> PyResult<(Vec<String>, Vec<(String, String, String)>)> {
        let action = self.inner.spectrum_action(None).map_err(err)?;
        let gpd = build_groupoid(&action).map_err(err)?;
        let json = gpd.to_json();
        Ok((
            json.units,
            json.germs.into_iter().map(|g| (g.s, g.x, g.r)).collect(),
        ))
    }

    fn germ_groupoid_dot(&self) -> PyResult<String> {
        let action = self.inner.spectrum_action(None).map_err(err)?;
        let gpd = build_groupoid(&action).map_err(err)?;
        Ok(gpd.to_dot())
    }
}

impl InverseSemigroup {
    fn index(&self, l: &str) -> PyResult<usize> {
        self.inner
            .index_of(l)
            .ok_or_else(|| PyValueError::new_err(format!("unknown element {l}")))
    }
}

/// A finite semigroupoid.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct Semigroupoid {
    inner: germlab::Semigroupoid,
}

#[pymethods]
impl Semigroupoid {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        match io::parse_structure(text).map_err(err)? {
            Structure::Sgpd(inner) => Ok(Semigroupoid { inner }),
            other => Err(PyValueError::new_err(format!(
                "expected a semigroupoid, got {}",
                other.kind()
            ))),
        }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn elements(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    fn compose(&self, f: &str, g: &str) -> PyResult<Option<String>> {
        let (i, j) = (self.index(f)?, self.index(g)?);
        Ok(self.inner.compose(i, j).map(|h| self.inner.label(h).to_string()))
    }

    fn divides(&self, f: &str, g: &str) -> PyResult<bool> {
        Ok(self.inner.divides(self.index(f)?, self.index(g)?))
    }

    fn is_monic(&self, f: &str) -> PyResult<bool> {
        Ok(self.inner.is_monic(self.index(f)?))
    }

    fn is_epic(&self, f: &str) -> PyResult<bool> {
        Ok(self.inner.is_epic(self.index(f)?))
    }

    fn springs(&self) -> Vec<String> {
        self.inner.springs().iter().map(|&f| self.inner.label(f).to_string()).collect()
    }

    /// None when the pair is disjoint.
    fn lcm(&self, f: &str, g: &str) -> PyResult<Option<String>> {
        let m = self.inner.lcm(self.index(f)?, self.index(g)?).map_err(err)?;
        Ok(m.map(|m| self.inner.label(m).to_string()))
    }

    /// (monic failures, lcm failures, springs, holds).
    fn standing_hypothesis(&self) -> (Vec<String>, Vec<(String, String)>, Vec<String>, bool) {
        let r = self.inner.check_standing_hypothesis();
        (
            r.monic_failures.iter().map(|&f| self.inner.label(f).to_string()).collect(),
            r.lcm_failures
                .iter()
                .map(|&(f, g)| {
                    (self.inner.label(f).to_string(), self.inner.label(g).to_string())
                })
                .collect(),
            r.springs.iter().map(|&f| self.inner.label(f).to_string()).collect(),
            r.holds,
        )
    }

    fn is_categorical(&self) -> bool {
        paths::is_categorical(&self.inner).is_ok()
    }

    /// Build the inverse semigroup S(Λ).
    fn slambda(&self) -> PyResult<SLambda> {
        Ok(SLambda { inner: CoreSLambda::build(&self.inner).map_err(err)? })
    }
}

impl Semigroupoid {
    fn index(&self, l: &str) -> PyResult<usize> {
        self.inner
            .index_of(l)
            .ok_or_else(|| PyValueError::new_err(format!("unknown element {l}")))
    }
}

/// The inverse semigroup S(Λ) of a semigroupoid, with the pipeline
/// operations over it.
#[pyclass(skip_from_py_object)]
struct SLambda {
    inner: CoreSLambda,
}

#[pymethods]
impl SLambda {
    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn elements(&self) -> Vec<String> {
        self.inner.isg().labels().to_vec()
    }

    fn as_inverse_semigroup(&self) -> InverseSemigroup {
        InverseSemigroup { inner: self.inner.isg().clone() }
    }

    /// Element label of the canonical generator at f ("0" for springs).
    fn generator(&self, f: &str) -> PyResult<String> {
        let i = self
            .inner
            .sgpd()
            .index_of(f)
            .ok_or_else(|| PyValueError::new_err(format!("unknown element {f}")))?;
        Ok(self.inner.isg().label(self.inner.generator_index(i)).to_string())
    }

    fn tight_spectrum(&self) -> PyResult<Vec<String>> {
        let (lat, _) = self.inner.isg().idempotent_semilattice();
        Ok(lat
            .tight_spectrum()
            .map_err(err)?
            .iter()
            .map(|c| lat.label(c.min).to_string())
            .collect())
    }

    /// (units, germs) of the groupoid of germs on the tight spectrum.
    fn germ_groupoid(&self) -> PyResult<(Vec<String>, Vec<(String, String, String)>)> {
        InverseSemigroup { inner: self.inner.isg().clone() }.germ_groupoid()
    }

    /// The canonical tight representation, as {element: {point: point}}.
    fn canonical_representation(&self) -> PyResult<BTreeMap<String, BTreeMap<String, String>>> {
        let (rep, action) = canonical_tight_rep(&self.inner).map_err(err)?;
        let labels: Vec<String> =
            (0..action.carrier().len()).map(|i| action.point_label(i)).collect();
        Ok(io::export_rep(self.inner.isg(), &labels, &rep).maps)
    }

    /// Restrict the canonical representation to the semigroupoid,
    /// extend it back, and report (roundtrip_exact, sgpd_rep_tight).
    fn roundtrip(&self) -> PyResult<(bool, bool)> {
        let (sigma, _) = canonical_tight_rep(&self.inner).map_err(err)?;
        let pi = restrict_to_sgpd(&self.inner, &sigma);
        let back = extend_to_slambda(&self.inner, &pi)
            .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
        let verdict = is_tight_sgpd_rep(self.inner.sgpd(), &pi);
        Ok((back == sigma, verdict.tight))
    }
}

/// A higher-rank graph presentation truncated at a declared depth.
#[pyclass(skip_from_py_object)]
struct KGraph {
    inner: germlab::KGraphPresentation,
}

#[pymethods]
impl KGraph {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        match io::parse_structure(text).map_err(err)? {
            Structure::KGraph(inner) => Ok(KGraph { inner }),
            other => Err(PyValueError::new_err(format!("expected a kgraph, got {}", other.kind()))),
        }
    }

    fn morphisms(&self) -> Vec<String> {
        self.inner.morphisms.iter().map(|m| m.label.clone()).collect()
    }

    fn little_pullback(&self) -> (bool, Vec<(String, String)>) {
        let (ok, witnesses) = self.inner.little_pullback_check();
        (
            ok,
            witnesses
                .iter()
                .map(|&(a, b)| {
                    (self.inner.morphisms[a].label.clone(), self.inner.morphisms[b].label.clone())
                })
                .collect(),
        )
    }

    fn is_singly_aligned(&self) -> bool {
        self.inner.is_singly_aligned()
    }

    fn lambda_min(&self, f: &str, g: &str) -> PyResult<Vec<(String, String)>> {
        let fi = self.index(f)?;
        let gi = self.index(g)?;
        Ok(self
            .inner
            .lambda_min(fi, gi)
            .map_err(err)?
            .into_iter()
            .map(|(p, q)| {
                (self.inner.morphisms[p].label.clone(), self.inner.morphisms[q].label.clone())
            })
            .collect())
    }

    /// Strip identities and return the truncated semigroupoid.
    fn to_semigroupoid(&self) -> PyResult<Semigroupoid> {
        let (sg, _, _) = self.inner.to_semigroupoid().map_err(err)?;
        Ok(Semigroupoid { inner: sg })
    }

    /// Validate boundary data {degree tuple: morphism label} and return
    /// (stem labels, verdict string) where the verdict is "tight",
    /// "not tight (cover ...)", or "tight to depth".
    fn boundary_path(
        &self,
        assignment: BTreeMap<Vec<u32>, String>,
    ) -> PyResult<(Vec<String>, String)> {
        let (stem, verdict) = self.inner.boundary_path_check(&assignment).map_err(err)?;
        let (sg, _, _) = self.inner.to_semigroupoid().map_err(err)?;
        let stem_labels: Vec<String> =
            stem.iter().map(|&i| sg.label(i).to_string()).collect();
        let verdict = match verdict {
            TightVerdict::Tight => "tight".to_string(),
            TightVerdict::Unknown => "tight to depth".to_string(),
            TightVerdict::NotTight { refutation } => format!(
                "not tight (cover {:?})",
                refutation.cover.iter().map(|&i| sg.label(i).to_string()).collect::<Vec<_>>()
            ),
        };
        Ok((stem_labels, verdict))
    }
}

impl KGraph {
    fn index(&self, l: &str) -> PyResult<usize> {
        self.inner
            .index_of(l)
            .ok_or_else(|| PyValueError::new_err(format!("unknown morphism {l}")))
    }
}

/// The single-vertex 2-graph grid presentation at the given depth.
#[pyfunction]
fn grid_kgraph(d1: u32, d2: u32) -> KGraph {
    KGraph { inner: germlab::kgraph::single_vertex_grid(d1, d2) }
}

/// The single-vertex rank-one presentation with two edges at the given
/// depth.
#[pyfunction]
fn cuntz_kgraph(depth: u32) -> KGraph {
    KGraph { inner: germlab::kgraph::cuntz_graph(depth) }
}

#[pymodule]
fn germlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Semilattice>()?;
    m.add_class::<InverseSemigroup>()?;
    m.add_class::<Semigroupoid>()?;
    m.add_class::<SLambda>()?;
    m.add_class::<KGraph>()?;
    m.add_function(wrap_pyfunction!(grid_kgraph, m)?)?;
    m.add_function(wrap_pyfunction!(cuntz_kgraph, m)?)?;
    Ok(())
}

//! Python bindings. Statements cross the boundary as `(x, y, z)` tuples of
//! name lists; sets of variables as lists of names.

use std::sync::Arc;

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use stabind::cli::WitnessReport;
use stabind::pmap::{self, Outcome};
use stabind::{closure, graph, io, Triplet, Universe, VarSet};

create_exception!(stabind, StabindError, PyValueError);

type Statement = (Vec<String>, Vec<String>, Vec<String>);

fn err(e: stabind::Error) -> PyErr {
    StabindError::new_err(e.to_string())
}

fn statement(u: &Universe, t: &Triplet) -> Statement {
    (u.set_names(t.x()), u.set_names(t.y()), u.set_names(t.z()))
}

fn set(u: &Universe, names: &[String]) -> PyResult<VarSet> {
    u.set_of(names).map_err(err)
}

fn triplet(u: &Universe, (x, y, z): &Statement) -> PyResult<Triplet> {
    Triplet::from_names(u, x, y, z).map_err(err)
}

/// An independence relation with optional stability marks.
#[pyclass(frozen, module = "stabind")]
struct Relation {
    inner: stabind::Relation,
}

#[pymethods]
impl Relation {
    #[new]
    #[pyo3(signature = (variables, statements=Vec::new(), stable=Vec::new()))]
    fn new(
        variables: Vec<String>,
        statements: Vec<Statement>,
        stable: Vec<Statement>,
    ) -> PyResult<Self> {
        let u = Arc::new(Universe::new(variables).map_err(err)?);
        let mut inner = stabind::Relation::new(u.clone());
        for s in &statements {
            inner.insert(triplet(&u, s)?).map_err(err)?;
        }
        for s in &stable {
            inner.insert_stable(triplet(&u, s)?).map_err(err)?;
        }
        Ok(Relation { inner })
    }

    /// Parses the `.ind` text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        io::parse_relation(text)
            .map(|inner| Relation { inner })
            .map_err(err)
    }

    fn to_text(&self) -> String {
        io::serialize_relation(&self.inner)
    }

    #[getter]
    fn variables(&self) -> Vec<String> {
        self.inner.universe().names().to_vec()
    }

    /// All statements in canonical order, each with its stability mark.
    fn statements(&self) -> Vec<(Statement, bool)> {
        let u = self.inner.universe();
        self.inner
            .triplets()
            .iter()
            .map(|t| (statement(u, t), self.inner.is_stable(t) == Some(true)))
            .collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __contains__(&self, s: Statement) -> PyResult<bool> {
        Ok(self.inner.contains(&triplet(self.inner.universe(), &s)?))
    }

    fn __repr__(&self) -> String {
        format!(
            "Relation({} statements over {})",
            self.inner.len(),
            self.variables().join(" ")
        )
    }

    /// Semi-graphoid closure of the unstable statements together with the
    /// stable closure of the stable ones; stable statements stay marked.
    fn closure(&self) -> Self {
        Relation {
            inner: closure::combined_representation(&self.inner).expand(),
        }
    }

    /// `(d_u, d_s)`: the o-dominant and s-dominant generators.
    fn dominants(&self) -> (Vec<Statement>, Vec<Statement>) {
        let rep = closure::combined_representation(&self.inner);
        let u = self.inner.universe();
        (
            rep.d_u().iter().map(|t| statement(u, t)).collect(),
            rep.d_s().iter().map(|t| statement(u, t)).collect(),
        )
    }

    /// The closure with every statement marked stable or not.
    fn stability(&self) -> Self {
        let closed = closure::combined_representation(&self.inner).expand();
        Relation {
            inner: closure::classify_stability_unverified(&closed).into_relation(),
        }
    }

    /// Every necessary condition on the closure, as `(id, status, witness)`.
    fn conditions(&self) -> PyResult<Vec<(String, String, Option<String>)>> {
        let closed = closure::combined_representation(&self.inner).expand();
        let report = pmap::assess(&closed).map_err(err)?;
        let u = self.inner.universe();
        Ok(report
            .entries()
            .iter()
            .map(|e| {
                let witness = e.witness.as_ref().map(|w| WitnessReport::new(u, w).text());
                (
                    e.id.as_str().to_string(),
                    e.status.as_str().to_string(),
                    witness,
                )
            })
            .collect())
    }

    /// Exhaustive perfect-map search: `(outcome, dag or None, DAGs examined)`.
    fn find_pmap(&self) -> PyResult<(String, Option<Dag>, usize)> {
        let closed = closure::combined_representation(&self.inner).expand();
        let verdict = pmap::find_pmap(&closed).map_err(err)?;
        Ok(match verdict.outcome {
            Outcome::NotIsomorphic => ("not-isomorphic".into(), None, verdict.examined),
            Outcome::Inconclusive => ("inconclusive".into(), None, verdict.examined),
            Outcome::IsomorphicWithWitness(g) => (
                "isomorphic".into(),
                Some(Dag { inner: g }),
                verdict.examined,
            ),
        })
    }
}

#[pyclass(frozen, module = "stabind")]
struct Dag {
    inner: stabind::Dag,
}

#[pymethods]
impl Dag {
    #[new]
    fn new(variables: Vec<String>, arcs: Vec<(String, String)>) -> PyResult<Self> {
        let u = Arc::new(Universe::new(variables).map_err(err)?);
        stabind::Dag::from_names(u, &arcs)
            .map(|inner| Dag { inner })
            .map_err(err)
    }

    /// Parses the `.dag` text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        io::parse_dag(text).map(|inner| Dag { inner }).map_err(err)
    }

    fn to_text(&self) -> String {
        io::serialize_dag(&self.inner)
    }

    #[getter]
    fn variables(&self) -> Vec<String> {
        self.inner.universe().names().to_vec()
    }

    #[getter]
    fn arcs(&self) -> Vec<(String, String)> {
        let u = self.inner.universe();
        self.inner
            .arcs()
            .iter()
            .map(|&(a, b)| (u.name(a).to_string(), u.name(b).to_string()))
            .collect()
    }

    fn __repr__(&self) -> String {
        let arcs: Vec<String> = self
            .arcs()
            .iter()
            .map(|(a, b)| format!("{a}->{b}"))
            .collect();
        format!("Dag({})", arcs.join(", "))
    }

    /// `"strong"`, `"weak"` or `"connected"`.
    #[pyo3(signature = (x, y, z=Vec::new()))]
    fn separation(&self, x: Vec<String>, y: Vec<String>, z: Vec<String>) -> PyResult<&'static str> {
        let u = self.inner.universe();
        let verdict = self
            .inner
            .separation(set(u, &x)?, set(u, &y)?, set(u, &z)?)
            .map_err(err)?;
        Ok(verdict.as_str())
    }

    /// The separation statements of the graph; only the strong ones if `strong`.
    #[pyo3(signature = (strong=false))]
    fn model(&self, strong: bool) -> PyResult<Relation> {
        let (model, strong_model) = graph::extract_models(&self.inner).map_err(err)?;
        Ok(Relation {
            inner: if strong { strong_model } else { model },
        })
    }

    fn terminal_saturated(&self) -> Option<Statement> {
        graph::terminal_saturated(&self.inner).map(|t| statement(self.inner.universe(), &t))
    }

    /// For a strong separation, the sides (`"x"`, `"y"`, `"both"`) each
    /// remaining variable can join. Sides follow the canonical orientation.
    #[pyo3(signature = (x, y, z=Vec::new()))]
    fn classify_external(
        &self,
        x: Vec<String>,
        y: Vec<String>,
        z: Vec<String>,
    ) -> PyResult<Vec<(String, &'static str)>> {
        let u = self.inner.universe();
        let t = triplet(u, &(x, y, z))?;
        let sides = graph::classify_external(&self.inner, &t).map_err(err)?;
        Ok(sides
            .into_iter()
            .map(|(v, s)| (u.name(v).to_string(), s.as_str()))
            .collect())
    }

    fn is_pmap(&self, relation: &Relation) -> PyResult<bool> {
        let closed = closure::combined_representation(&relation.inner).expand();
        pmap::is_pmap(&self.inner, &closed).map_err(err)
    }
}

#[pymodule]
#[pyo3(name = "stabind")]
fn stabind_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Relation>()?;
    m.add_class::<Dag>()?;
    m.add("StabindError", m.py().get_type::<StabindError>())?;
    Ok(())
}

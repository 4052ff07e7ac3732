//! Python bindings: automata, graphs, MSO formulas and programs.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use dga::automaton::builtin::builtin;
use dga::automaton::format::{parse_adga, write_adga};
use dga::automaton::Adga;
use dga::constructions::{complement, intersect_adga, product, project, union, Combine};
use dga::decision::{self, Bound as SizeBound, Inclusion, SearchOutcome};
use dga::dpl::{parse_dpl, run_program, Program as DplProgram};
use dga::graph::{parse_graph, write_graph, Alphabet, Alphabets, EnumMode, GraphText, LabeledGraph, Projection};
use dga::hoare::{check, CheckOptions};
use dga::mso::{compile_mso, eval_mso, mso_of_adga, parse_mso, write_mso, Assignment, MsoFormula};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn mode(name: &str) -> PyResult<EnumMode> {
    match name {
        "all" => Ok(EnumMode::AllDirected),
        "connected" => Ok(EnumMode::ConnectedUndirected),
        _ => Err(err(format!("unknown mode `{name}`; use `all` or `connected`"))),
    }
}

/// A graph in text form; symbols are resolved when it meets an automaton.
#[pyclass(frozen, from_py_object)]
#[derive(Clone)]
struct Graph {
    text: GraphText,
}

impl Graph {
    fn from_labeled(g: &LabeledGraph, alphabets: &Alphabets) -> Graph {
        let text = parse_graph(&write_graph(g, alphabets)).expect("written graphs parse");
        Graph { text }
    }

    fn resolve(&self, alphabets: &Alphabets) -> PyResult<LabeledGraph> {
        self.text.resolve(alphabets).map_err(err)
    }
}

#[pymethods]
impl Graph {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Graph> {
        Ok(Graph { text: parse_graph(text).map_err(err)? })
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.text.node_count
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.text.labels.clone()
    }

    /// `(symbol, source, target)` triples as written.
    #[getter]
    fn edges(&self) -> Vec<(String, usize, usize)> {
        self.text.edges.clone()
    }

    fn to_text(&self) -> String {
        let alphabets = self.text.inferred_alphabets();
        write_graph(&self.text.resolve(&alphabets).expect("own alphabets"), &alphabets)
    }

    fn __repr__(&self) -> String {
        format!("Graph(nodes={}, edges={})", self.text.node_count, self.text.edges.len())
    }
}

#[pyclass(frozen, from_py_object)]
#[derive(Clone)]
struct Automaton {
    inner: Adga,
}

#[pymethods]
impl Automaton {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Automaton> {
        Ok(Automaton { inner: parse_adga(text).map_err(err)? })
    }

    /// A built-in example such as `color3` or `order_le(2)`.
    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Automaton> {
        Ok(Automaton { inner: builtin(name).map_err(err)? })
    }

    fn accepts(&self, graph: &Graph) -> PyResult<bool> {
        Ok(self.inner.accepts(&graph.resolve(self.inner.alphabets())?))
    }

    /// `"ADGA"`, `"NDGA"` or `"DDGA"`.
    #[getter]
    fn class_name(&self) -> String {
        self.inner.class().to_string()
    }

    #[getter]
    fn length(&self) -> usize {
        self.inner.length()
    }

    #[getter]
    fn state_count(&self) -> usize {
        self.inner.state_count()
    }

    fn complement(&self) -> Automaton {
        Automaton { inner: complement(&self.inner) }
    }

    fn union(&self, other: &Automaton) -> PyResult<Automaton> {
        Ok(Automaton { inner: union(&self.inner, &other.inner).map_err(err)? })
    }

    fn intersect(&self, other: &Automaton) -> PyResult<Automaton> {
        Ok(Automaton { inner: intersect_adga(&self.inner, &other.inner).map_err(err)? })
    }

    /// Level-wise product; `combine` is `"and"` or `"or"`.
    #[pyo3(signature = (other, combine = "and"))]
    fn product(&self, other: &Automaton, combine: &str) -> PyResult<Automaton> {
        let c = match combine {
            "and" => Combine::And,
            "or" => Combine::Or,
            _ => return Err(err(format!("unknown combination `{combine}`"))),
        };
        Ok(Automaton { inner: product(&self.inner, &other.inner, c).map_err(err)? })
    }

    /// Relabels nodes through `mapping` (source symbol to target symbol).
    fn project(&self, mapping: BTreeMap<String, String>) -> PyResult<Automaton> {
        let mut targets: Vec<&str> = Vec::new();
        for t in mapping.values() {
            if !targets.contains(&t.as_str()) {
                targets.push(t);
            }
        }
        let target = Alphabet::new(targets).map_err(err)?;
        let source = self.inner.alphabets().nodes.clone();
        let h = Projection::from_pairs(source, target, mapping.iter().map(|(a, b)| (a.as_str(), b.as_str())))
            .map_err(err)?;
        Ok(Automaton { inner: project(&self.inner, &h).map_err(err)? })
    }

    fn to_mso(&self) -> Formula {
        Formula { inner: mso_of_adga(&self.inner) }
    }

    fn to_text(&self) -> String {
        write_adga(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "Automaton(class={}, states={}, length={})",
            self.inner.class(),
            self.inner.state_count(),
            self.inner.length()
        )
    }
}

#[pyclass(frozen, from_py_object)]
#[derive(Clone)]
struct Formula {
    inner: MsoFormula,
}

#[pymethods]
impl Formula {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Formula> {
        Ok(Formula { inner: parse_mso(text).map_err(err)? })
    }

    fn compile(&self) -> PyResult<Automaton> {
        Ok(Automaton { inner: compile_mso(&self.inner).map_err(err)? })
    }

    /// Evaluates on a graph; free variables take values from `nodes`
    /// (node variables) and `sets` (set variables).
    #[pyo3(signature = (graph, nodes = BTreeMap::new(), sets = BTreeMap::new()))]
    fn evaluate(
        &self,
        graph: &Graph,
        nodes: BTreeMap<String, usize>,
        sets: BTreeMap<String, Vec<usize>>,
    ) -> PyResult<bool> {
        let g = graph.resolve(&self.inner.alphabets)?;
        let alpha = Assignment {
            nodes,
            sets: sets.into_iter().map(|(k, v)| (k, v.into_iter().collect())).collect(),
        };
        eval_mso(&self.inner, &g, &alpha).map_err(err)
    }

    #[getter]
    fn free_vars(&self) -> Vec<String> {
        self.inner.free_vars().into_iter().collect()
    }

    fn to_text(&self) -> String {
        write_mso(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Formula({:?})", write_mso(&self.inner).trim())
    }
}

/// Size bound for emptiness search; `None` when it overflows.
#[pyfunction]
#[pyo3(signature = (automaton, mode = "all"))]
fn emptiness_bound(automaton: &Automaton, mode: &str) -> PyResult<Option<BigUint>> {
    Ok(match decision::emptiness_bound(&automaton.inner, self::mode(mode)?).map_err(err)? {
        SizeBound::Value(v) => Some(v),
        SizeBound::Overflow => None,
    })
}

/// `(member or None, nodes checked, exact)`.
#[pyfunction]
#[pyo3(signature = (automaton, mode = "all", cap = decision::DEFAULT_CAP))]
fn find_member(automaton: &Automaton, mode: &str, cap: usize) -> PyResult<(Option<Graph>, usize, bool)> {
    let a = &automaton.inner;
    Ok(match decision::find_member(a, self::mode(mode)?, cap).map_err(err)? {
        SearchOutcome::Counterexample(g) => {
            let n = g.node_count();
            (Some(Graph::from_labeled(&g, a.alphabets())), n, false)
        }
        SearchOutcome::EmptyUpTo { n_checked, exact } => (None, n_checked, exact),
    })
}

/// `(holds, counterexample or None, exact)` for deterministic automata.
#[pyfunction]
#[pyo3(signature = (first, second, mode = "all", cap = decision::DEFAULT_CAP))]
fn inclusion(first: &Automaton, second: &Automaton, mode: &str, cap: usize) -> PyResult<(bool, Option<Graph>, bool)> {
    Ok(match decision::inclusion_ddga(&first.inner, &second.inner, self::mode(mode)?, cap).map_err(err)? {
        Inclusion::Holds { exact, .. } => (true, None, exact),
        Inclusion::Violation(g) => (false, Some(Graph::from_labeled(&g, first.inner.alphabets())), false),
    })
}

#[pyclass(frozen, from_py_object)]
#[derive(Clone)]
struct Program {
    inner: DplProgram,
}

#[pymethods]
impl Program {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Program> {
        Ok(Program { inner: parse_dpl(text).map_err(err)? })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn variables(&self) -> Vec<String> {
        self.inner.space.vars.clone()
    }

    /// Runs on a graph whose labels are valuations like `m=1,m_old=0`.
    #[pyo3(signature = (graph, fuel = 100))]
    fn simulate(&self, graph: &Graph, fuel: usize) -> PyResult<Graph> {
        let space = &self.inner.space;
        let labels = graph
            .text
            .labels
            .iter()
            .map(|l| space.parse_label(l).map(|i| space.symbol(i)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        let edges = graph.text.inferred_alphabets().edges;
        let alphabets = Alphabets::new(space.alphabet(), edges);
        let g = GraphText { labels, ..graph.text.clone() }.resolve(&alphabets).map_err(err)?;
        let out = run_program(&self.inner, &g, fuel).map_err(err)?;
        Ok(Graph::from_labeled(&out, &alphabets))
    }

    /// `(kind, line, holds, exact, counterexample or None)` per condition.
    #[pyo3(signature = (cap = 4, jobs = 1))]
    fn verify(&self, py: Python<'_>, cap: usize, jobs: usize) -> PyResult<Vec<(String, usize, bool, bool, Option<Graph>)>> {
        let opts = CheckOptions { jobs: jobs.max(1), ..CheckOptions::new(cap) };
        let report = py.detach(|| check(&self.inner, opts)).map_err(err)?;
        let alphabets = self.inner.space.alphabets();
        Ok(report
            .results
            .iter()
            .map(|r| {
                let (holds, exact, g) = match &r.verdict {
                    Inclusion::Holds { exact, .. } => (true, *exact, None),
                    Inclusion::Violation(g) => (false, false, Some(Graph::from_labeled(g, &alphabets))),
                };
                (r.vc.kind.to_string(), r.vc.line, holds, exact, g)
            })
            .collect())
    }
}

#[pymodule]
#[pyo3(name = "dga")]
fn dga_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Graph>()?;
    m.add_class::<Automaton>()?;
    m.add_class::<Formula>()?;
    m.add_class::<Program>()?;
    m.add_function(wrap_pyfunction!(emptiness_bound, m)?)?;
    m.add_function(wrap_pyfunction!(find_member, m)?)?;
    m.add_function(wrap_pyfunction!(inclusion, m)?)?;
    Ok(())
}

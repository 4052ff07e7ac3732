use std::collections::HashMap;

use super::{Adga, Kind, StateId};
use crate::graph::{Graph, GraphError, LabeledGraph};

/// Game evaluation of one automaton on one graph, memoized over configurations.
pub struct Evaluator<'a> {
    adga: &'a Adga,
    incoming: Vec<Vec<Vec<usize>>>,
    memo: HashMap<Vec<StateId>, bool>,
}

impl<'a> Evaluator<'a> {
    pub fn new(adga: &'a Adga, graph: &Graph) -> Self {
        assert_eq!(
            graph.edge_symbol_count(),
            adga.alphabets().edges.len(),
            "graph and automaton disagree on the edge alphabet"
        );
        Evaluator {
            adga,
            incoming: graph.incoming(),
            memo: HashMap::new(),
        }
    }

    pub fn initial(&self, labels: &[usize]) -> Vec<StateId> {
        labels.iter().map(|&a| self.adga.init(a)).collect()
    }

    /// δ at node `v` of configuration `c`.
    pub fn local(&self, c: &[StateId], v: usize) -> Vec<StateId> {
        let inc = &self.incoming;
        self.adga
            .local_successors_with(c[v], &|g, s| inc[g][v].iter().any(|&u| c[u] == s))
    }

    /// Kind of the configuration: that of its nonpermanent states, if any.
    pub fn kind(&self, c: &[StateId]) -> Kind {
        c.iter()
            .map(|&q| self.adga.kind(q))
            .find(|&k| k != Kind::Permanent)
            .unwrap_or(Kind::Permanent)
    }

    pub fn final_accepts(&self, c: &[StateId]) -> bool {
        let mut occ = c.to_vec();
        occ.sort_unstable();
        occ.dedup();
        self.adga.accepting().eval(&|p| occ.binary_search(p).is_ok())
    }

    /// Per-node successor lists; the global successors are their product.
    pub fn successor_factors(&self, c: &[StateId]) -> Vec<Vec<StateId>> {
        (0..c.len()).map(|v| self.local(c, v)).collect()
    }

    /// Whether the configuration is winning for the existential player.
    pub fn wins(&mut self, c: &[StateId]) -> bool {
        let kind = self.kind(c);
        if kind == Kind::Permanent {
            return self.final_accepts(c);
        }
        if let Some(&r) = self.memo.get(c) {
            return r;
        }
        let factors = self.successor_factors(c);
        let result = if factors.iter().any(|f| f.is_empty()) {
            // Stuck: the player to move loses.
            kind == Kind::Universal
        } else {
            let want = kind == Kind::Existential;
            let mut found = !want;
            for_each_product(&factors, |next| {
                if self.wins(next) == want {
                    found = want;
                    false
                } else {
                    true
                }
            });
            found
        };
        self.memo.insert(c.to_vec(), result);
        result
    }
}

/// Calls `f` on every element of the product; stops when `f` returns false.
pub(crate) fn for_each_product(factors: &[Vec<StateId>], mut f: impl FnMut(&[StateId]) -> bool) {
    if factors.iter().any(|x| x.is_empty()) {
        return;
    }
    let mut idx = vec![0usize; factors.len()];
    let mut cur: Vec<StateId> = factors.iter().map(|x| x[0]).collect();
    loop {
        if !f(&cur) {
            return;
        }
        let mut i = 0;
        loop {
            if i == factors.len() {
                return;
            }
            idx[i] += 1;
            if idx[i] < factors[i].len() {
                cur[i] = factors[i][idx[i]];
                break;
            }
            idx[i] = 0;
            cur[i] = factors[i][0];
            i += 1;
        }
    }
}

fn check_alphabets(adga: &Adga, g: &LabeledGraph) -> Result<(), GraphError> {
    g.check(adga.alphabets())
}

/// Membership of `g` in the automaton's language.
pub fn accepts(adga: &Adga, g: &LabeledGraph) -> Result<bool, GraphError> {
    check_alphabets(adga, g)?;
    let mut ev = Evaluator::new(adga, &g.graph);
    let init = ev.initial(&g.labels);
    Ok(ev.wins(&init))
}

impl Adga {
    /// Membership test; panics if `g` does not match the automaton's alphabets.
    pub fn accepts(&self, g: &LabeledGraph) -> bool {
        accepts(self, g).expect("graph over the automaton's alphabets")
    }
}

/// All successor configurations of `config` on `graph`.
pub fn global_successors(adga: &Adga, graph: &Graph, config: &[StateId]) -> Vec<Vec<StateId>> {
    let ev = Evaluator::new(adga, graph);
    let factors = ev.successor_factors(config);
    let mut out = Vec::new();
    for_each_product(&factors, |c| {
        out.push(c.to_vec());
        true
    });
    out
}

/// Whether every reachable nonpermanent configuration on `g` has exactly one successor.
pub fn is_deterministic_on(adga: &Adga, g: &LabeledGraph) -> bool {
    let ev = Evaluator::new(adga, &g.graph);
    let mut c = ev.initial(&g.labels);
    while ev.kind(&c) != Kind::Permanent {
        let factors = ev.successor_factors(&c);
        if factors.iter().any(|f| f.len() != 1) {
            return false;
        }
        c = factors.into_iter().map(|f| f[0]).collect();
    }
    true
}

/// An accepting run: configurations linked to their chosen successors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunDag {
    pub configs: Vec<Vec<StateId>>,
    pub kinds: Vec<Kind>,
    pub edges: Vec<Vec<usize>>,
}

impl RunDag {
    pub fn root(&self) -> usize {
        0
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.configs.len()).filter(|&i| self.edges[i].is_empty()).collect()
    }

    /// Round in which configuration `i` occurs.
    pub fn depth_of(&self, i: usize) -> usize {
        // Every path from the root to i has the same length since levels are synchronous.
        let mut depth = vec![usize::MAX; self.configs.len()];
        depth[0] = 0;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for &y in &self.edges[x] {
                if depth[y] == usize::MAX {
                    depth[y] = depth[x] + 1;
                    stack.push(y);
                }
            }
        }
        depth[i]
    }
}

/// An accepting run of `adga` on `g`, or `None` when `g` is rejected.
pub fn witness_run(adga: &Adga, g: &LabeledGraph) -> Result<Option<RunDag>, GraphError> {
    check_alphabets(adga, g)?;
    let mut ev = Evaluator::new(adga, &g.graph);
    let init = ev.initial(&g.labels);
    if !ev.wins(&init) {
        return Ok(None);
    }
    let mut dag = RunDag {
        configs: Vec::new(),
        kinds: Vec::new(),
        edges: Vec::new(),
    };
    let mut index: HashMap<Vec<StateId>, usize> = HashMap::new();
    extract(&mut ev, init, &mut dag, &mut index);
    Ok(Some(dag))
}

fn extract(
    ev: &mut Evaluator<'_>,
    c: Vec<StateId>,
    dag: &mut RunDag,
    index: &mut HashMap<Vec<StateId>, usize>,
) -> usize {
    if let Some(&i) = index.get(&c) {
        return i;
    }
    let i = dag.configs.len();
    let kind = ev.kind(&c);
    dag.configs.push(c.clone());
    dag.kinds.push(kind);
    dag.edges.push(Vec::new());
    index.insert(c.clone(), i);
    if kind == Kind::Permanent {
        return i;
    }
    let factors = ev.successor_factors(&c);
    let mut chosen = Vec::new();
    for_each_product(&factors, |next| {
        chosen.push(next.to_vec());
        true
    });
    if kind == Kind::Existential {
        let first = chosen.into_iter().find(|n| ev.wins(n)).expect("winning configuration");
        chosen = vec![first];
    }
    for next in chosen {
        let j = extract(ev, next, dag, index);
        dag.edges[i].push(j);
    }
    i
}

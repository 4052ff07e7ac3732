//! Example automata and parametrized families.

use thiserror::Error;

use super::{contains, Adga, AdgaBuilder, BoolExpr, Guard, Kind, StateId};
use crate::graph::{Alphabet, Alphabets, Graph, LabeledGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuiltinError {
    #[error("unknown example automaton `{0}`")]
    Unknown(String),
    #[error("bad parameter for `{name}`: {msg}")]
    BadParameter { name: String, msg: String },
}

fn alphabets_over(labels: &[&str]) -> Alphabets {
    Alphabets::with_labels(labels.iter().copied()).expect("nonempty, distinct labels")
}

fn color3_shape(guess: Kind, check: Kind, accepting: &[&[&str]]) -> Adga {
    let mut b = AdgaBuilder::new(Alphabets::blank());
    let ini = b.declare("ini", guess);
    let colors: Vec<StateId> = ["spade", "heart", "club"].iter().map(|c| b.declare(*c, check)).collect();
    let yes = b.declare("yes", Kind::Permanent);
    let no = b.declare("no", Kind::Permanent);
    b.init(0, ini);
    b.rule(ini, BoolExpr::t(), colors.iter().copied());
    for &c in &colors {
        b.rule(c, contains(0, c), [no]);
        b.rule(c, BoolExpr::not(contains(0, c)), [yes]);
    }
    for set in accepting {
        let ids: Vec<StateId> = set.iter().map(|n| if *n == "yes" { yes } else { no }).collect();
        b.accept_set(&ids);
    }
    b.build().expect("valid example")
}

/// Nondeterministic 3-colorability check: guess a color, then compare with
/// the colors received from incoming neighbours.
pub fn color3() -> Adga {
    color3_shape(Kind::Existential, Kind::Existential, &[&["yes"]])
}

/// Same diagram with universal choices: accepts the graphs that are not 3-colorable.
pub fn not_color3() -> Adga {
    color3_shape(Kind::Universal, Kind::Universal, &[&["no"], &["yes", "no"]])
}

/// Alternating automaton over `{a, b, c}`. It accepts iff there is exactly
/// one `a`-node, that node receives from two `b`-nodes that can guess
/// different colors and from no `a`- or `c`-node, no `b`-node receives from a
/// `b`-node, and no `c`-node receives from an `a`- or `c`-node.
pub fn centric() -> Adga {
    let mut b = AdgaBuilder::new(alphabets_over(&["a", "b", "c"]));
    let qa = b.declare("a", Kind::Existential);
    let qb = b.declare("b", Kind::Existential);
    let qc = b.declare("c", Kind::Existential);
    let qa1 = b.declare("a'", Kind::Universal);
    let club = b.declare("b_club", Kind::Universal);
    let diamond = b.declare("b_diamond", Kind::Universal);
    let spade = b.declare("a_spade", Kind::Permanent);
    let heart = b.declare("a_heart", Kind::Permanent);
    let yes = b.declare("yes", Kind::Permanent);
    let no = b.declare("no", Kind::Permanent);
    b.init(0, qa);
    b.init(1, qb);
    b.init(2, qc);
    let not = |q| BoolExpr::not(contains(0, q));
    b.rule(qa, BoolExpr::t(), [qa1]);
    b.rule(qb, not(qb), [club, diamond]);
    b.rule(qb, contains(0, qb), [no]);
    let c_ok = BoolExpr::and([not(qc), not(qa)]);
    b.rule(qc, c_ok.clone(), [yes]);
    b.rule(qc, BoolExpr::not(c_ok), [no]);
    let a_ok = BoolExpr::and([contains(0, club), contains(0, diamond), not(qa1), not(yes), not(no)]);
    b.rule(qa1, a_ok.clone(), [spade, heart]);
    b.rule(qa1, BoolExpr::not(a_ok), [no]);
    b.rule(club, BoolExpr::t(), [yes]);
    b.rule(diamond, BoolExpr::t(), [yes]);
    b.accept_set(&[spade, yes]);
    b.accept_set(&[heart, yes]);
    b.build().expect("valid example")
}

/// A five-node `{a, b, c}`-labeled graph accepted by [`centric`].
pub fn centric_graph() -> LabeledGraph {
    let g = Graph::with_edges(5, 1, [(0, 1, 0), (0, 2, 0), (0, 0, 3), (0, 1, 4), (0, 4, 2), (0, 3, 4)])
        .expect("valid edges");
    LabeledGraph::new(g, vec![0, 1, 1, 1, 2]).expect("valid labels")
}

/// Universal choice among `k + 1` markers: rejects iff some branch shows all of them.
pub fn order_le(k: usize) -> Adga {
    let mut b = AdgaBuilder::new(Alphabets::blank());
    let ini = b.declare("ini", Kind::Universal);
    let ps: Vec<StateId> = (1..=k + 1).map(|i| b.declare(format!("p{i}"), Kind::Permanent)).collect();
    b.init(0, ini);
    b.rule(ini, BoolExpr::t(), ps.iter().copied());
    b.accept(BoolExpr::not(BoolExpr::and(ps.iter().map(|&p| BoolExpr::atom(p)))));
    b.build().expect("valid example")
}

/// Existential choice among `k` markers: accepts iff some choice shows all of them.
pub fn order_ge(k: usize) -> Adga {
    assert!(k >= 1, "order_ge needs k >= 1");
    let mut b = AdgaBuilder::new(Alphabets::blank());
    let ini = b.declare("ini", Kind::Existential);
    let ps: Vec<StateId> = (1..=k).map(|i| b.declare(format!("p{i}"), Kind::Permanent)).collect();
    b.init(0, ini);
    b.rule(ini, BoolExpr::t(), ps.iter().copied());
    b.accept(BoolExpr::and(ps.iter().map(|&p| BoolExpr::atom(p))));
    b.build().expect("valid example")
}

/// Deterministic check that adjacent nodes carry different labels.
pub fn colored(labels: &[&str]) -> Adga {
    let mut b = AdgaBuilder::new(alphabets_over(labels));
    let qs: Vec<StateId> = labels.iter().map(|l| b.declare(format!("s_{l}"), Kind::Existential)).collect();
    let yes = b.declare("yes", Kind::Permanent);
    let no = b.declare("no", Kind::Permanent);
    for (a, &q) in qs.iter().enumerate() {
        b.init(a, q);
        b.rule(q, contains(0, q), [no]);
        b.rule(q, BoolExpr::not(contains(0, q)), [yes]);
    }
    b.accept_set(&[yes]);
    b.build().expect("valid example")
}

/// Length 0: accepts iff every label occurs.
pub fn occur(labels: &[&str]) -> Adga {
    let mut b = AdgaBuilder::new(alphabets_over(labels));
    let ps: Vec<StateId> = labels.iter().map(|l| b.declare(format!("p_{l}"), Kind::Permanent)).collect();
    for (a, &p) in ps.iter().enumerate() {
        b.init(a, p);
    }
    b.accept(BoolExpr::and(ps.iter().map(|&p| BoolExpr::atom(p))));
    b.build().expect("valid example")
}

/// A single permanent state; accepts every graph or none.
pub fn trivial(accept: bool) -> Adga {
    let mut b = AdgaBuilder::new(Alphabets::blank());
    let p = b.declare("p", Kind::Permanent);
    b.init(0, p);
    if accept {
        b.accept_set(&[p]);
    }
    b.build().expect("valid example")
}

/// A complete deterministic word automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordDfa {
    pub alphabet: Vec<String>,
    pub state_names: Vec<String>,
    pub start: usize,
    /// `delta[q][a]`
    pub delta: Vec<Vec<usize>>,
    pub accepting: Vec<bool>,
}

impl WordDfa {
    pub fn run(&self, word: &[usize]) -> bool {
        let q = word.iter().fold(self.start, |q, &a| self.delta[q][a]);
        self.accepting[q]
    }
}

/// Words over `{a, b}` with an even number of `a`s.
pub fn even_a_dfa() -> WordDfa {
    WordDfa {
        alphabet: vec!["a".into(), "b".into()],
        state_names: vec!["even".into(), "odd".into()],
        start: 0,
        delta: vec![vec![1, 0], vec![0, 1]],
        accepting: vec![true, false],
    }
}

/// Directed path `0 → 1 → … → n−1` labeled by the letters of a nonempty word.
pub fn path_graph(word: &[usize]) -> LabeledGraph {
    assert!(!word.is_empty(), "graphs are nonempty");
    let n = word.len();
    let edges: Vec<(usize, usize, usize)> = (1..n).map(|i| (0, i - 1, i)).collect();
    let g = Graph::with_edges(n, 1, edges).expect("valid path");
    LabeledGraph::new(g, word.to_vec()).expect("valid labels")
}

/// Guess-and-check automaton of length 2 for a word automaton: each node
/// guesses the run's state after its own letter and whether it is the last
/// position; in the second round it checks the guess against its predecessor.
/// On directed paths it accepts exactly the words accepted by `d`.
pub fn word_dfa(d: &WordDfa) -> Adga {
    let labels: Vec<&str> = d.alphabet.iter().map(String::as_str).collect();
    let mut b = AdgaBuilder::new(alphabets_over(&labels));
    let read: Vec<StateId> = labels.iter().map(|l| b.declare(format!("read_{l}"), Kind::Existential)).collect();
    // guess[(a, q, last)]
    let mut guesses: Vec<(usize, usize, bool, StateId)> = Vec::new();
    for (a, l) in labels.iter().enumerate() {
        for (q, qn) in d.state_names.iter().enumerate() {
            for last in [false, true] {
                let name = format!("{l}:{qn}{}", if last { ":last" } else { "" });
                guesses.push((a, q, last, b.declare(name, Kind::Existential)));
            }
        }
    }
    let ok = b.declare("ok", Kind::Permanent);
    let ok_last = b.declare("ok_last", Kind::Permanent);
    let bad = b.declare("bad", Kind::Permanent);
    for (a, &r) in read.iter().enumerate() {
        b.init(a, r);
        b.rule(r, BoolExpr::t(), guesses.iter().filter(|g| g.0 == a).map(|g| g.3));
    }
    let no_pred: Guard = BoolExpr::and(guesses.iter().map(|g| BoolExpr::not(contains(0, g.3))));
    for &(a, q, last, s) in &guesses {
        let mut ways = Vec::new();
        if d.delta[d.start][a] == q {
            ways.push(no_pred.clone());
        }
        for &(_, q2, last2, s2) in &guesses {
            if !last2 && d.delta[q2][a] == q {
                ways.push(contains(0, s2));
            }
        }
        let consistent = BoolExpr::or(ways);
        let target = match (last, d.accepting[q]) {
            (false, _) => ok,
            (true, true) => ok_last,
            (true, false) => bad,
        };
        b.rule(s, consistent.clone(), [target]);
        b.rule(s, BoolExpr::not(consistent), [bad]);
    }
    b.accept(BoolExpr::and([BoolExpr::atom(ok_last), BoolExpr::not(BoolExpr::atom(bad))]));
    b.build().expect("valid construction")
}

fn parse_call(spec: &str) -> Result<(&str, Vec<&str>), BuiltinError> {
    let spec = spec.trim();
    match spec.find('(') {
        None => Ok((spec, Vec::new())),
        Some(i) => {
            let name = spec[..i].trim();
            let rest = spec[i + 1..].trim_end();
            let inner = rest.strip_suffix(')').ok_or_else(|| BuiltinError::BadParameter {
                name: name.into(),
                msg: "missing `)`".into(),
            })?;
            let args = inner.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            Ok((name, args))
        }
    }
}

fn number(name: &str, args: &[&str]) -> Result<usize, BuiltinError> {
    let bad = |msg: &str| BuiltinError::BadParameter {
        name: name.into(),
        msg: msg.into(),
    };
    match args {
        [k] => k.parse().map_err(|_| bad("expected a natural number")),
        _ => Err(bad("expected one parameter")),
    }
}

/// Looks up an example automaton by name, e.g. `color3`, `order_le(2)`,
/// `colored(x,y)`, `word_dfa(even_a)`.
pub fn builtin(spec: &str) -> Result<Adga, BuiltinError> {
    let (name, args) = parse_call(spec)?;
    let bad = |msg: &str| BuiltinError::BadParameter {
        name: name.into(),
        msg: msg.into(),
    };
    let labels = |args: &[&str]| -> Result<(), BuiltinError> {
        if args.is_empty() {
            return Err(bad("expected a nonempty label list"));
        }
        Alphabet::new(args.iter().copied()).map(|_| ()).map_err(|e| bad(&e.to_string()))
    };
    match name {
        "color3" | "not_color3" | "centric" | "trivial" | "empty" if !args.is_empty() => {
            Err(bad("takes no parameters"))
        }
        "color3" => Ok(color3()),
        "not_color3" => Ok(not_color3()),
        "centric" => Ok(centric()),
        "trivial" => Ok(trivial(true)),
        "empty" => Ok(trivial(false)),
        "order_le" => Ok(order_le(number(name, &args)?)),
        "order_ge" => match number(name, &args)? {
            0 => Err(bad("k must be at least 1")),
            k => Ok(order_ge(k)),
        },
        "colored" => {
            labels(&args)?;
            Ok(colored(&args))
        }
        "occur" => {
            labels(&args)?;
            Ok(occur(&args))
        }
        "word_dfa" => match args.as_slice() {
            ["even_a"] => Ok(word_dfa(&even_a_dfa())),
            _ => Err(bad("known word automata: even_a")),
        },
        _ => Err(BuiltinError::Unknown(name.into())),
    }
}

/// Names of a representative set of examples.
pub const REGISTRY: &[&str] = &[
    "color3",
    "not_color3",
    "centric",
    "order_le(1)",
    "order_le(2)",
    "order_ge(2)",
    "order_ge(3)",
    "colored(x,y)",
    "occur(x,y)",
    "word_dfa(even_a)",
    "trivial",
    "empty",
];

pub fn registry() -> Vec<(&'static str, Adga)> {
    REGISTRY
        .iter()
        .map(|&n| (n, builtin(n).expect("registry names resolve")))
        .collect()
}

//! The `dga` command line.
//!
//! Exit status: 0 affirmative, 1 negative or violation, 2 inconclusive
//! (search capped below the exactness bound, fuel exhausted), 3 usage or
//! input error.

use std::ffi::OsString;
use std::io::{Read, Write};

use clap::{Parser, Subcommand, ValueEnum};

use crate::automaton::builtin::{builtin, REGISTRY};
use crate::automaton::format::{parse_adga, write_adga};
use crate::automaton::{synchronize, Adga};
use crate::constructions::{complement, intersect_adga, product, project, union, Combine};
use crate::decision::{bounded_probe, emptiness_bound, find_member, inclusion_ddga, Inclusion, SearchOutcome, DEFAULT_CAP};
use crate::dpl::{parse_dpl, run_program, DplError, Program};
use crate::graph::{
    enumerate_graphs, parse_graph, write_graph, Alphabet, Alphabets, EnumMode, EnumOptions, LabeledGraph, Projection,
};
use crate::hoare::{check, CheckOptions};
use crate::mso::{compile_mso, eval_mso, is_set_var, mso_of_adga, parse_mso, write_mso, Assignment, MsoFormula};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_INEXACT: i32 = 2;
pub const EXIT_ERROR: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "dga", version, about = "Distributed graph automata toolkit")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// All directed graphs.
    All,
    /// Connected undirected graphs.
    Connected,
}

#[derive(clap::Args, Debug)]
struct SearchArgs {
    #[arg(long, value_enum, default_value = "all")]
    mode: Mode,
    /// Largest graph size to search.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Leave out graphs with self-loops (connected mode only).
    #[arg(long)]
    no_self_loops: bool,
}

impl SearchArgs {
    fn options(&self) -> EnumOptions {
        let mode = match self.mode {
            Mode::All => EnumMode::AllDirected,
            Mode::Connected => EnumMode::ConnectedUndirected,
        };
        EnumOptions::new(mode).self_loops(!self.no_self_loops)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Op {
    Complement,
    Union,
    Intersect,
    ProductAnd,
    ProductOr,
    Project,
    Synchronize,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Run an automaton on a graph.
    Accepts { adga: String, graph: String },
    /// Build a new automaton from one or two others.
    Construct {
        #[arg(value_enum)]
        op: Op,
        adga: String,
        /// Second automaton, or for `project` a file of `source target` lines.
        other: Option<String>,
        /// Target length for `synchronize`.
        #[arg(long)]
        length: Option<usize>,
    },
    /// Translate an MSO sentence or formula into an automaton.
    CompileMso { mso: String },
    /// Translate an automaton into an MSO sentence.
    EncodeMso { adga: String },
    /// Evaluate an MSO formula on a graph.
    EvalMso {
        mso: String,
        graph: String,
        /// Free variable values: `x=2` or `X=0,1` (repeatable).
        #[arg(long = "assign")]
        assign: Vec<String>,
    },
    /// Search for a member of an automaton's language.
    Emptiness {
        adga: String,
        #[command(flatten)]
        search: SearchArgs,
        /// Allow alternating automata; a negative answer is then never exact.
        #[arg(long)]
        probe: bool,
    },
    /// Check language inclusion between deterministic automata.
    Inclusion {
        first: String,
        second: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Execute a program on a graph whose labels are valuations.
    Simulate {
        program: String,
        graph: String,
        #[arg(long, default_value_t = 100)]
        fuel: usize,
    },
    /// Generate and discharge the verification conditions of a program.
    Verify {
        program: String,
        #[arg(long, default_value_t = 4)]
        cap: usize,
        #[arg(long)]
        no_self_loops: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Print a built-in automaton, e.g. `color3` or `order_le(2)`.
    Examples {
        name: Option<String>,
        #[arg(long)]
        list: bool,
    },
    /// Quick consistency checks on the built-in automata.
    Selftest,
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdin_used: bool,
}

#[derive(Debug)]
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<(i32, String), Failure>;

impl Io<'_> {
    fn read(&mut self, path: &str) -> Result<String, Failure> {
        if path == "-" {
            if self.stdin_used {
                return Err(Failure("standard input can only be read once".into()));
            }
            self.stdin_used = true;
            let mut s = String::new();
            self.stdin.read_to_string(&mut s).map_err(|e| Failure(format!("<stdin>: {e}")))?;
            Ok(s)
        } else {
            std::fs::read_to_string(path).map_err(|e| Failure(format!("{path}: {e}")))
        }
    }

    fn adga(&mut self, path: &str) -> Result<Adga, Failure> {
        let text = self.read(path)?;
        parse_adga(&text).map_err(|e| Failure(format!("{path}: {e}")))
    }

    fn mso(&mut self, path: &str) -> Result<MsoFormula, Failure> {
        let text = self.read(path)?;
        parse_mso(&text).map_err(|e| Failure(format!("{path}: {e}")))
    }

    fn program(&mut self, path: &str) -> Result<Program, Failure> {
        let text = self.read(path)?;
        parse_dpl(&text).map_err(|e| Failure(format!("{path}: {e}")))
    }

    fn graph(&mut self, path: &str, alphabets: &Alphabets) -> Result<LabeledGraph, Failure> {
        let text = self.read(path)?;
        let parsed = parse_graph(&text).map_err(|e| Failure(format!("{path}: {e}")))?;
        parsed.resolve(alphabets).map_err(|e| Failure(format!("{path}: {e}")))
    }
}

fn verdict(yes: bool) -> (i32, String) {
    if yes {
        (EXIT_YES, "accept\n".into())
    } else {
        (EXIT_NO, "reject\n".into())
    }
}

fn projection(text: &str, source: &Alphabet) -> Result<Projection, Failure> {
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        match line.split_whitespace().collect::<Vec<_>>().as_slice() {
            [a, b] => pairs.push((a.to_string(), b.to_string())),
            _ => return Err(Failure(format!("line {}: expected `<source> <target>`", i + 1))),
        }
    }
    let mut targets: Vec<&str> = Vec::new();
    for (_, b) in &pairs {
        if !targets.contains(&b.as_str()) {
            targets.push(b);
        }
    }
    let target = Alphabet::new(targets.iter().copied())?;
    Ok(Projection::from_pairs(source.clone(), target, pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())))?)
}

fn assignment(items: &[String]) -> Result<Assignment, Failure> {
    let mut out = Assignment::new();
    for item in items {
        let (var, value) = item
            .split_once('=')
            .ok_or_else(|| Failure(format!("`{item}`: expected `var=value`")))?;
        let nodes: Result<Vec<usize>, _> =
            value.split(',').filter(|s| !s.is_empty()).map(|s| s.trim().parse::<usize>()).collect();
        let nodes = nodes.map_err(|_| Failure(format!("`{item}`: values must be node numbers")))?;
        if is_set_var(var) {
            out = out.set(var, nodes);
        } else {
            match nodes.as_slice() {
                [v] => out = out.node(var, *v),
                _ => return Err(Failure(format!("`{item}`: a node variable takes one node"))),
            }
        }
    }
    Ok(out)
}

fn search_report(outcome: SearchOutcome, alphabets: &Alphabets) -> (i32, String) {
    match outcome {
        SearchOutcome::Counterexample(g) => (EXIT_NO, format!("NONEMPTY\n{}", write_graph(&g, alphabets))),
        SearchOutcome::EmptyUpTo { n_checked, exact } => {
            let code = if exact { EXIT_YES } else { EXIT_INEXACT };
            (code, format!("EMPTY n_checked={n_checked} exact={exact}\n"))
        }
    }
}

fn selftest() -> (i32, String) {
    let mut out = String::new();
    let mut ok = true;
    for (name, a) in crate::automaton::builtin::registry() {
        let twice = complement(&complement(&a));
        let al = a.alphabets();
        let agree = enumerate_graphs(al.nodes.len(), al.edges.len(), 2, EnumOptions::new(EnumMode::AllDirected))
            .all(|g| a.accepts(&g) == twice.accepts(&g));
        ok &= agree;
        out.push_str(&format!("{} complement twice {name}\n", if agree { "ok  " } else { "FAIL" }));
    }
    (if ok { EXIT_YES } else { EXIT_NO }, out)
}

fn simulate(io: &mut Io, program: &str, graph: &str, fuel: usize) -> Outcome {
    let p = io.program(program)?;
    let text = io.read(graph)?;
    let parsed = parse_graph(&text).map_err(|e| Failure(format!("{graph}: {e}")))?;
    let edges = parsed.inferred_alphabets().edges;
    let labels: Vec<String> = parsed
        .labels
        .iter()
        .map(|l| p.space.parse_label(l).map(|i| p.space.symbol(i)))
        .collect::<Result<_, _>>()
        .map_err(|e| Failure(format!("{graph}: {e}")))?;
    let alphabets = Alphabets::new(p.space.alphabet(), edges);
    let g = crate::graph::GraphText { labels, ..parsed }.resolve(&alphabets)?;
    match run_program(&p, &g, fuel) {
        Ok(out) => Ok((EXIT_YES, write_graph(&out, &alphabets))),
        Err(e @ DplError::FuelExhausted(_)) => Ok((EXIT_INEXACT, format!("{e}\n"))),
        Err(e) => Err(e.into()),
    }
}

fn dispatch(verb: Verb, io: &mut Io) -> Outcome {
    match verb {
        Verb::Accepts { adga, graph } => {
            let a = io.adga(&adga)?;
            let g = io.graph(&graph, a.alphabets())?;
            Ok(verdict(a.accepts(&g)))
        }
        Verb::Construct { op, adga, other, length } => {
            let a = io.adga(&adga)?;
            let second = |io: &mut Io| -> Result<Adga, Failure> {
                let path = other.as_deref().ok_or_else(|| Failure("this construction needs a second automaton".into()))?;
                io.adga(path)
            };
            let built = match op {
                Op::Complement => complement(&a),
                Op::Union => union(&a, &second(io)?)?,
                Op::Intersect => intersect_adga(&a, &second(io)?)?,
                Op::ProductAnd => product(&a, &second(io)?, Combine::And)?,
                Op::ProductOr => product(&a, &second(io)?, Combine::Or)?,
                Op::Project => {
                    let path = other.as_deref().ok_or_else(|| Failure("`project` needs a map file".into()))?;
                    let text = io.read(path)?;
                    let h = projection(&text, &a.alphabets().nodes).map_err(|e| Failure(format!("{path}: {}", e.0)))?;
                    project(&a, &h)?
                }
                Op::Synchronize => synchronize(&a, length.unwrap_or(a.length()))?,
            };
            Ok((EXIT_YES, write_adga(&built)))
        }
        Verb::CompileMso { mso } => Ok((EXIT_YES, write_adga(&compile_mso(&io.mso(&mso)?)?))),
        Verb::EncodeMso { adga } => Ok((EXIT_YES, write_mso(&mso_of_adga(&io.adga(&adga)?)))),
        Verb::EvalMso { mso, graph, assign } => {
            let phi = io.mso(&mso)?;
            let g = io.graph(&graph, &phi.alphabets)?;
            Ok(verdict(eval_mso(&phi, &g, &assignment(&assign)?)?))
        }
        Verb::Emptiness { adga, search, probe } => {
            let a = io.adga(&adga)?;
            let opts = search.options();
            let outcome = if probe {
                bounded_probe(&a, opts, search.cap)?
            } else {
                find_member(&a, opts, search.cap)?
            };
            let (code, mut text) = search_report(outcome, a.alphabets());
            if !probe {
                text.push_str(&format!("# bound {}\n", emptiness_bound(&a, opts.mode)?));
            }
            Ok((code, text))
        }
        Verb::Inclusion { first, second, search } => {
            let a1 = io.adga(&first)?;
            let a2 = io.adga(&second)?;
            Ok(match inclusion_ddga(&a1, &a2, search.options(), search.cap)? {
                Inclusion::Holds { n_checked, exact } => (
                    if exact { EXIT_YES } else { EXIT_INEXACT },
                    format!("HOLDS n_checked={n_checked} exact={exact}\n"),
                ),
                Inclusion::Violation(g) => (EXIT_NO, format!("VIOLATION\n{}", write_graph(&g, a1.alphabets()))),
            })
        }
        Verb::Simulate { program, graph, fuel } => simulate(io, &program, &graph, fuel),
        Verb::Verify { program, cap, no_self_loops, jobs } => {
            let p = io.program(&program)?;
            if cap == 0 {
                return Err(Failure("the node cap must be at least 1".into()));
            }
            let report = check(&p, CheckOptions { n_cap: cap, self_loops: !no_self_loops, jobs: jobs.max(1) })?;
            let code = if !report.verified() {
                EXIT_NO
            } else if report.exact() {
                EXIT_YES
            } else {
                EXIT_INEXACT
            };
            Ok((code, report.to_string()))
        }
        Verb::Examples { name, list } => match (name, list) {
            (_, true) | (None, false) => Ok((EXIT_YES, REGISTRY.iter().map(|n| format!("{n}\n")).collect())),
            (Some(name), false) => Ok((EXIT_YES, write_adga(&builtin(&name)?))),
        },
        Verb::Selftest => Ok(selftest()),
    }
}

/// Runs the command line with explicit streams and returns the exit status.
pub fn run_with<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_YES };
            let _ = if e.use_stderr() { write!(stderr, "{e}") } else { write!(stdout, "{e}") };
            return code;
        }
    };
    let mut io = Io { stdin, stdin_used: false };
    match dispatch(cli.verb, &mut io) {
        Ok((code, text)) => {
            let _ = stdout.write_all(text.as_bytes());
            code
        }
        Err(Failure(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_ERROR
        }
    }
}

/// Runs with the process arguments and standard streams.
pub fn run() -> i32 {
    run_with(std::env::args_os(), &mut std::io::stdin().lock(), &mut std::io::stdout().lock(), &mut std::io::stderr())
}

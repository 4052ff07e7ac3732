//! Line-oriented automaton text format.
//!
//! ```text
//! adga
//! node_alphabet blank
//! edge_alphabet blank
//! state ini E
//! state yes P
//! init blank -> ini
//! rule ini !contains(blank,ini) -> { yes }
//! accept { yes }
//! ```
//!
//! Each `accept { .. }` line adds one accepting occurrence set. Instead of
//! listing sets, a single `accept_if <condition>` line may give the condition
//! as a formula over `occurs(p)` atoms. `#` starts a comment.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use super::{Adga, AdgaBuilder, BoolExpr, InvalidAutomaton, Kind, StateId};
use crate::graph::{Alphabet, Alphabets};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdgaParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Invalid(#[from] InvalidAutomaton),
}

fn syntax(line: usize, msg: impl Into<String>) -> AdgaParseError {
    AdgaParseError::Syntax { line, msg: msg.into() }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Not,
    And,
    Or,
    Open,
    Close,
    True,
    False,
    /// `name(args)`
    Atom(String, String),
}

fn lex(text: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let special = |c: char| "!&|()".contains(c) || c.is_whitespace();
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '!' => Some(Tok::Not),
            '&' => Some(Tok::And),
            '|' => Some(Tok::Or),
            '(' => Some(Tok::Open),
            ')' => Some(Tok::Close),
            _ => None,
        };
        if let Some(t) = tok {
            out.push(t);
            i += 1;
            continue;
        }
        let start = i;
        while i < chars.len() && !special(chars[i]) {
            i += 1;
        }
        let word: String = chars[start..i].iter().collect();
        match word.as_str() {
            "true" => out.push(Tok::True),
            "false" => out.push(Tok::False),
            _ => {
                if i >= chars.len() || chars[i] != '(' {
                    return Err(format!("expected `(` after `{word}`"));
                }
                let close = chars[i..]
                    .iter()
                    .position(|&c| c == ')')
                    .ok_or_else(|| format!("unclosed `{word}(`"))?;
                let args: String = chars[i + 1..i + close].iter().collect();
                out.push(Tok::Atom(word, args));
                i += close + 1;
            }
        }
    }
    Ok(out)
}

struct ExprParser<'a, A, F: FnMut(&str, &str) -> Result<A, String>> {
    toks: &'a [Tok],
    pos: usize,
    atom: F,
}

impl<A: Clone, F: FnMut(&str, &str) -> Result<A, String>> ExprParser<'_, A, F> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn or(&mut self) -> Result<BoolExpr<A>, String> {
        let mut items = vec![self.and()?];
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            items.push(self.and()?);
        }
        Ok(BoolExpr::or(items))
    }

    fn and(&mut self) -> Result<BoolExpr<A>, String> {
        let mut items = vec![self.unary()?];
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            items.push(self.unary()?);
        }
        Ok(BoolExpr::and(items))
    }

    fn unary(&mut self) -> Result<BoolExpr<A>, String> {
        let tok = self.peek().cloned().ok_or("unexpected end of formula")?;
        self.pos += 1;
        match tok {
            Tok::Not => Ok(BoolExpr::not(self.unary()?)),
            Tok::True => Ok(BoolExpr::t()),
            Tok::False => Ok(BoolExpr::f()),
            Tok::Atom(name, args) => Ok(BoolExpr::Atom((self.atom)(&name, &args)?)),
            Tok::Open => {
                let e = self.or()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err("expected `)`".into());
                }
                self.pos += 1;
                Ok(e)
            }
            Tok::And | Tok::Or | Tok::Close => Err("unexpected operator".into()),
        }
    }
}

fn parse_expr<A: Clone>(
    text: &str,
    atom: impl FnMut(&str, &str) -> Result<A, String>,
) -> Result<BoolExpr<A>, String> {
    let toks = lex(text)?;
    let mut p = ExprParser { toks: &toks, pos: 0, atom };
    let e = p.or()?;
    if p.pos != toks.len() {
        return Err("trailing input in formula".into());
    }
    Ok(e)
}

fn braced(text: &str) -> Option<Vec<&str>> {
    let inner = text.trim().strip_prefix('{')?.strip_suffix('}')?;
    Some(inner.split_whitespace().collect())
}

pub fn parse_adga(text: &str) -> Result<Adga, AdgaParseError> {
    let mut header = false;
    let mut nodes: Option<Alphabet> = None;
    let mut edges: Option<Alphabet> = None;
    let mut b: Option<AdgaBuilder> = None;
    let mut names: HashMap<String, StateId> = HashMap::new();
    let mut explicit: Vec<(usize, String)> = Vec::new();
    let mut accept_if = None;
    let mut pending_init = Vec::new();
    let mut pending_rules = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (kw, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
        let rest = rest.trim();
        if !header {
            if content != "adga" {
                return Err(syntax(line, "expected `adga` header"));
            }
            header = true;
            continue;
        }
        let alpha = |rest: &str| {
            Alphabet::new(rest.split_whitespace()).map_err(|e| syntax(line, e.to_string()))
        };
        match kw {
            "node_alphabet" => nodes = Some(alpha(rest)?),
            "edge_alphabet" => edges = Some(alpha(rest)?),
            "state" => {
                if b.is_none() {
                    let al = Alphabets::new(
                        nodes.clone().ok_or_else(|| syntax(line, "node_alphabet must precede states"))?,
                        edges.clone().unwrap_or_else(Alphabet::blank),
                    );
                    b = Some(AdgaBuilder::new(al));
                }
                let builder = b.as_mut().expect("created above");
                let toks: Vec<&str> = rest.split_whitespace().collect();
                let [name, kind] = toks.as_slice() else {
                    return Err(syntax(line, "expected `state <name> <E|A|P>`"));
                };
                let kind = match *kind {
                    "E" => Kind::Existential,
                    "A" => Kind::Universal,
                    "P" => Kind::Permanent,
                    k => return Err(syntax(line, format!("unknown kind `{k}`"))),
                };
                if name.contains(|c: char| "(){}!&|".contains(c)) {
                    return Err(syntax(line, format!("state name `{name}` contains a reserved character")));
                }
                let id = builder.declare(*name, kind);
                names.insert(name.to_string(), id);
            }
            "init" => pending_init.push((line, rest.to_string())),
            "rule" => pending_rules.push((line, rest.to_string())),
            "accept" => explicit.push((line, rest.to_string())),
            "accept_if" => {
                if accept_if.is_some() {
                    return Err(syntax(line, "more than one `accept_if` line"));
                }
                accept_if = Some((line, rest.to_string()));
            }
            other => return Err(syntax(line, format!("unknown directive `{other}`"))),
        }
    }
    if !header {
        return Err(syntax(1, "missing `adga` header"));
    }
    let mut b = b.ok_or_else(|| syntax(0, "no states declared"))?;
    let lookup = |line: usize, n: &str| names.get(n).copied().ok_or_else(|| syntax(line, format!("unknown state `{n}`")));

    for (line, rest) in pending_init {
        let (label, state) = rest.split_once("->").ok_or_else(|| syntax(line, "expected `init <label> -> <state>`"))?;
        let a = b
            .alphabets()
            .nodes
            .lookup(label.trim())
            .map_err(|e| syntax(line, e.to_string()))?;
        b.init(a, lookup(line, state.trim())?);
    }
    for (line, rest) in pending_rules {
        let (lhs, targets) = rest.rsplit_once("->").ok_or_else(|| syntax(line, "expected `->` in rule"))?;
        let lhs = lhs.trim();
        let (src, guard_text) = lhs.split_once(char::is_whitespace).unwrap_or((lhs, ""));
        let src = lookup(line, src)?;
        let guard = if guard_text.trim().is_empty() {
            BoolExpr::t()
        } else {
            let edges = b.alphabets().edges.clone();
            parse_expr(guard_text, |name, args| {
                if name != "contains" {
                    return Err(format!("unknown guard atom `{name}`"));
                }
                let (g, q) = args.split_once(',').ok_or("expected `contains(γ,q)`")?;
                let g = edges.lookup(g.trim()).map_err(|e| e.to_string())?;
                let q = names.get(q.trim()).copied().ok_or_else(|| format!("unknown state `{}`", q.trim()))?;
                Ok((g, q))
            })
            .map_err(|m| syntax(line, m))?
        };
        let targets = braced(targets).ok_or_else(|| syntax(line, "expected `{ <states> }`"))?;
        let targets = targets.iter().map(|t| lookup(line, t)).collect::<Result<Vec<_>, _>>()?;
        b.rule(src, guard, targets);
    }
    for (line, rest) in explicit {
        let set = braced(&rest).ok_or_else(|| syntax(line, "expected `accept { <states> }`"))?;
        let set = set.iter().map(|t| lookup(line, t)).collect::<Result<Vec<_>, _>>()?;
        b.accept_set(&set);
    }
    if let Some((line, text)) = accept_if {
        let cond = parse_expr(&text, |name, args| {
            if name != "occurs" {
                return Err(format!("unknown condition atom `{name}`"));
            }
            names.get(args.trim()).copied().ok_or_else(|| format!("unknown state `{}`", args.trim()))
        })
        .map_err(|m| syntax(line, m))?;
        let cur = b.accepting_condition().clone();
        b.accept(BoolExpr::or([cur, cond]));
    }
    Ok(b.build()?)
}

fn write_expr<A>(e: &BoolExpr<A>, atom: &impl Fn(&A) -> String, out: &mut String, parent_and: bool) {
    match e {
        BoolExpr::Const(b) => out.push_str(if *b { "true" } else { "false" }),
        BoolExpr::Atom(a) => out.push_str(&atom(a)),
        BoolExpr::Not(inner) => {
            out.push('!');
            let wrap = matches!(**inner, BoolExpr::And(_) | BoolExpr::Or(_));
            if wrap {
                out.push('(');
            }
            write_expr(inner, atom, out, false);
            if wrap {
                out.push(')');
            }
        }
        BoolExpr::And(es) => {
            for (i, x) in es.iter().enumerate() {
                if i > 0 {
                    out.push_str(" & ");
                }
                write_expr(x, atom, out, true);
            }
        }
        BoolExpr::Or(es) => {
            if parent_and {
                out.push('(');
            }
            for (i, x) in es.iter().enumerate() {
                if i > 0 {
                    out.push_str(" | ");
                }
                write_expr(x, atom, out, false);
            }
            if parent_and {
                out.push(')');
            }
        }
    }
}

pub fn guard_to_string(a: &Adga, g: &super::Guard) -> String {
    let mut out = String::new();
    let edges = &a.alphabets().edges;
    write_expr(
        g,
        &|&(gamma, q): &(usize, StateId)| format!("contains({},{})", edges.symbol(gamma), a.name(q)),
        &mut out,
        false,
    );
    out
}

/// Accepting sets are listed explicitly up to this many permanent states.
const EXPLICIT_LIMIT: usize = 10;

pub fn write_adga(a: &Adga) -> String {
    let mut out = String::from("adga\n");
    let al = a.alphabets();
    let _ = writeln!(out, "node_alphabet {}", al.nodes.symbols().join(" "));
    let _ = writeln!(out, "edge_alphabet {}", al.edges.symbols().join(" "));
    for s in a.states() {
        let _ = writeln!(out, "state {} {}", s.name, s.kind.letter());
    }
    for (label, &q) in a.inits().iter().enumerate() {
        let _ = writeln!(out, "init {} -> {}", al.nodes.symbol(label), a.name(q));
    }
    for r in a.rules() {
        let targets: Vec<&str> = r.targets.iter().map(|&t| a.name(t)).collect();
        if r.guard.is_const(true) {
            let _ = writeln!(out, "rule {} -> {{ {} }}", a.name(r.source), targets.join(" "));
        } else {
            let _ = writeln!(
                out,
                "rule {} {} -> {{ {} }}",
                a.name(r.source),
                guard_to_string(a, &r.guard),
                targets.join(" ")
            );
        }
    }
    if a.permanent_states().len() <= EXPLICIT_LIMIT {
        for set in a.accepting_sets() {
            let names: Vec<&str> = set.iter().map(|&p| a.name(p)).collect();
            if names.is_empty() {
                out.push_str("accept { }\n");
            } else {
                let _ = writeln!(out, "accept {{ {} }}", names.join(" "));
            }
        }
    } else {
        let mut cond = String::new();
        write_expr(a.accepting(), &|&p: &StateId| format!("occurs({})", a.name(p)), &mut cond, false);
        let _ = writeln!(out, "accept_if {cond}");
    }
    out
}

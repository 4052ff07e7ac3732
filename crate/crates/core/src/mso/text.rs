//! Concrete syntax.
//!
//! ```text
//! node_alphabet a b
//! edge_alphabet blank
//! EX X . ALL u . (u in X -> lab[a](u)) & EX x, y . edge[blank](x,y)
//! ```
//!
//! The alphabet lines are optional and default to `blank`. Binding
//! strength, loosest first: quantifier bodies, `<->`, `->` (right
//! associative), `|`, `&`, `!`.

use std::fmt::Write as _;

use thiserror::Error;

use super::{is_set_var, Formula, MsoFormula};
use crate::graph::{Alphabet, Alphabets};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MsoParseError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unknown {kind} symbol `{symbol}`")]
    UnknownSymbol { kind: &'static str, symbol: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Bracket(String),
    Open,
    Close,
    Comma,
    Dot,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Equals,
}

struct Lexed {
    toks: Vec<(Tok, usize)>,
    end: usize,
}

fn lex(src: &str) -> Result<Lexed, (usize, String)> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let rest = &src[pos..];
        let (tok, len) = if rest.starts_with("<->") {
            (Tok::Iff, 3)
        } else if rest.starts_with("->") {
            (Tok::Implies, 2)
        } else {
            match c {
                '(' => (Tok::Open, 1),
                ')' => (Tok::Close, 1),
                ',' => (Tok::Comma, 1),
                '.' => (Tok::Dot, 1),
                '!' => (Tok::Not, 1),
                '&' => (Tok::And, 1),
                '|' => (Tok::Or, 1),
                '=' => (Tok::Equals, 1),
                '[' => {
                    let close = rest.find(']').ok_or((pos, "unclosed `[`".to_string()))?;
                    let sym = rest[1..close].trim().to_string();
                    toks.push((Tok::Bracket(sym), pos));
                    let end = pos + close + 1;
                    while i < chars.len() && chars[i].0 < end {
                        i += 1;
                    }
                    continue;
                }
                c if c.is_alphanumeric() || c == '_' => {
                    let len = rest
                        .char_indices()
                        .find(|&(_, d)| !(d.is_alphanumeric() || d == '_'))
                        .map_or(rest.len(), |(k, _)| k);
                    let word = &rest[..len];
                    toks.push((Tok::Ident(word.to_string()), pos));
                    i += word.chars().count();
                    continue;
                }
                c => return Err((pos, format!("unexpected character `{c}`"))),
            }
        };
        toks.push((tok, pos));
        i += len;
    }
    Ok(Lexed { toks, end: src.len() })
}

const KEYWORDS: [&str; 7] = ["EX", "ALL", "in", "lab", "edge", "true", "false"];

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    end: usize,
    pos: usize,
    alphabets: &'a Alphabets,
}

type PResult<T> = Result<T, ParseFail>;

enum ParseFail {
    At(usize, String),
    Symbol(&'static str, String),
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.1)
    }

    fn fail<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(ParseFail::At(self.offset(), msg.into()))
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> PResult<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.fail(format!("expected {what}"))
        }
    }

    fn var(&mut self) -> PResult<String> {
        match self.peek() {
            Some(Tok::Ident(w)) if !KEYWORDS.contains(&w.as_str()) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => self.fail("expected a variable"),
        }
    }

    fn node_var(&mut self) -> PResult<String> {
        let at = self.offset();
        let v = self.var()?;
        if is_set_var(&v) {
            return Err(ParseFail::At(at, format!("`{v}` is a set variable, expected a node variable")));
        }
        Ok(v)
    }

    fn symbol(&mut self, alphabet: &Alphabet, kind: &'static str) -> PResult<usize> {
        match self.peek() {
            Some(Tok::Bracket(s)) => {
                let s = s.clone();
                self.pos += 1;
                alphabet.index_of(&s).ok_or(ParseFail::Symbol(kind, s))
            }
            _ if kind == "edge" && alphabet.len() == 1 => Ok(0),
            _ => self.fail(format!("expected `[{kind} symbol]`")),
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        let mut left = self.implication()?;
        while self.eat(&Tok::Iff) {
            let right = self.implication()?;
            left = Formula::Iff(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn implication(&mut self) -> PResult<Formula> {
        let left = self.disjunction()?;
        if self.eat(&Tok::Implies) {
            let right = self.implication()?;
            return Ok(Formula::Implies(Box::new(left), Box::new(right)));
        }
        Ok(left)
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut items = vec![self.conjunction()?];
        while self.eat(&Tok::Or) {
            items.push(self.conjunction()?);
        }
        Ok(if items.len() == 1 { items.pop().expect("one") } else { Formula::Or(items) })
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut items = vec![self.unary()?];
        while self.eat(&Tok::And) {
            items.push(self.unary()?);
        }
        Ok(if items.len() == 1 { items.pop().expect("one") } else { Formula::And(items) })
    }

    fn unary(&mut self) -> PResult<Formula> {
        if self.eat(&Tok::Not) {
            return Ok(Formula::Not(Box::new(self.unary()?)));
        }
        if self.eat(&Tok::Open) {
            let f = self.formula()?;
            self.expect(Tok::Close, "`)`")?;
            return Ok(f);
        }
        let word = match self.peek() {
            Some(Tok::Ident(w)) => w.clone(),
            _ => return self.fail("expected a formula"),
        };
        match word.as_str() {
            "true" | "false" => {
                self.pos += 1;
                Ok(if word == "true" { Formula::True } else { Formula::False })
            }
            "EX" | "ALL" => {
                self.pos += 1;
                let mut vars = vec![self.var()?];
                while self.eat(&Tok::Comma) {
                    vars.push(self.var()?);
                }
                self.expect(Tok::Dot, "`.`")?;
                let body = self.formula()?;
                Ok(if word == "EX" { Formula::exists(vars, body) } else { Formula::forall(vars, body) })
            }
            "lab" => {
                self.pos += 1;
                let label = self.symbol(&self.alphabets.nodes, "node")?;
                self.expect(Tok::Open, "`(`")?;
                let x = self.node_var()?;
                self.expect(Tok::Close, "`)`")?;
                Ok(Formula::Lab { label, x })
            }
            "edge" => {
                self.pos += 1;
                let symbol = self.symbol(&self.alphabets.edges, "edge")?;
                self.expect(Tok::Open, "`(`")?;
                let x = self.node_var()?;
                self.expect(Tok::Comma, "`,`")?;
                let y = self.node_var()?;
                self.expect(Tok::Close, "`)`")?;
                Ok(Formula::Edge { symbol, x, y })
            }
            _ => {
                let x = self.node_var()?;
                if self.eat(&Tok::Equals) {
                    let y = self.node_var()?;
                    return Ok(Formula::Eq(x, y));
                }
                if self.eat(&Tok::Ident("in".into())) {
                    let at = self.offset();
                    let s = self.var()?;
                    if !is_set_var(&s) {
                        return Err(ParseFail::At(at, format!("`{s}` is a node variable, expected a set variable")));
                    }
                    return Ok(Formula::In(x, s));
                }
                self.fail("expected `=` or `in`")
            }
        }
    }
}

fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

/// Parses a formula, optionally preceded by alphabet lines.
pub fn parse_mso(text: &str) -> Result<MsoFormula, MsoParseError> {
    let mut nodes = Alphabet::blank();
    let mut edges = Alphabet::blank();
    // Header lines are blanked out so offsets stay valid.
    let mut body = String::with_capacity(text.len());
    let mut in_header = true;
    for (k, line) in text.split_inclusive('\n').enumerate() {
        let content = line.split('#').next().unwrap_or("");
        let mut words = content.split_whitespace();
        let first = words.next();
        let header = match first {
            Some(w @ ("node_alphabet" | "edge_alphabet")) if in_header => {
                let syms: Vec<&str> = words.collect();
                let al = Alphabet::new(syms).map_err(|e| MsoParseError::Syntax {
                    line: k + 1,
                    col: 1,
                    msg: e.to_string(),
                })?;
                if w == "node_alphabet" {
                    nodes = al;
                } else {
                    edges = al;
                }
                true
            }
            Some(_) => {
                in_header = false;
                false
            }
            None => false,
        };
        if header {
            body.extend(line.chars().map(|c| if c == '\n' { '\n' } else { ' ' }));
        } else {
            body.push_str(content);
            body.extend(line[content.len()..].chars().map(|c| if c == '\n' { '\n' } else { ' ' }));
        }
    }
    let alphabets = Alphabets::new(nodes, edges);
    let syntax = |offset: usize, msg: String| {
        let (line, col) = line_col(&body, offset);
        MsoParseError::Syntax { line, col, msg }
    };
    let lexed = lex(&body).map_err(|(o, m)| syntax(o, m))?;
    let mut p = Parser { toks: &lexed.toks, end: lexed.end, pos: 0, alphabets: &alphabets };
    let result = p.formula().and_then(|f| {
        if p.pos < p.toks.len() {
            p.fail("unexpected input after the formula")
        } else {
            Ok(f)
        }
    });
    match result {
        Ok(formula) => Ok(MsoFormula::new(alphabets, formula)),
        Err(ParseFail::At(o, m)) => Err(syntax(o, m)),
        Err(ParseFail::Symbol(kind, symbol)) => Err(MsoParseError::UnknownSymbol { kind, symbol }),
    }
}

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Exists(..) | Formula::Forall(..) => 0,
        Formula::Iff(..) => 1,
        Formula::Implies(..) => 2,
        Formula::Or(_) => 3,
        Formula::And(_) => 4,
        _ => 5,
    }
}

fn write_formula(out: &mut String, al: &Alphabets, f: &Formula, min: u8) {
    let paren = prec(f) < min;
    if paren {
        out.push('(');
    }
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Lab { label, x } => {
            let _ = write!(out, "lab[{}]({x})", al.nodes.symbol(*label));
        }
        Formula::Edge { symbol, x, y } => {
            let _ = write!(out, "edge[{}]({x},{y})", al.edges.symbol(*symbol));
        }
        Formula::Eq(x, y) => {
            let _ = write!(out, "{x} = {y}");
        }
        Formula::In(x, s) => {
            let _ = write!(out, "{x} in {s}");
        }
        Formula::Not(g) => {
            out.push('!');
            write_formula(out, al, g, 5);
        }
        Formula::And(items) | Formula::Or(items) => {
            let (sep, p) = if matches!(f, Formula::And(_)) { (" & ", 5) } else { (" | ", 4) };
            for (k, g) in items.iter().enumerate() {
                if k > 0 {
                    out.push_str(sep);
                }
                write_formula(out, al, g, p);
            }
        }
        Formula::Implies(a, b) => {
            write_formula(out, al, a, 3);
            out.push_str(" -> ");
            write_formula(out, al, b, 2);
        }
        Formula::Iff(a, b) => {
            write_formula(out, al, a, 1);
            out.push_str(" <-> ");
            write_formula(out, al, b, 2);
        }
        Formula::Exists(..) | Formula::Forall(..) => {
            let exists = matches!(f, Formula::Exists(..));
            out.push_str(if exists { "EX " } else { "ALL " });
            let mut cur = f;
            let mut first = true;
            loop {
                match (cur, exists) {
                    (Formula::Exists(v, body), true) | (Formula::Forall(v, body), false) => {
                        if !first {
                            out.push_str(", ");
                        }
                        out.push_str(v);
                        first = false;
                        cur = body;
                    }
                    _ => break,
                }
            }
            out.push_str(" . ");
            write_formula(out, al, cur, 0);
        }
    }
    if paren {
        out.push(')');
    }
}

/// Renders a formula with alphabet lines, in a form [`parse_mso`] reads back.
pub fn write_mso(phi: &MsoFormula) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "node_alphabet {}", phi.alphabets.nodes.symbols().join(" "));
    let _ = writeln!(out, "edge_alphabet {}", phi.alphabets.edges.symbols().join(" "));
    write_formula(&mut out, &phi.alphabets, &phi.formula, 0);
    out.push('\n');
    out
}

impl std::fmt::Display for MsoFormula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut out = String::new();
        write_formula(&mut out, &self.alphabets, &self.formula, 0);
        f.write_str(&out)
    }
}

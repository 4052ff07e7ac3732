//! Program text.
//!
//! ```text
//! program floodmax
//! domain 0 1 2
//! vars m m_old m_ini
//! require { all v: v.m = v.m_ini }
//! each v { v.m_old := 0; }
//! while some v: v.m != v.m_old invariant { ... } {
//!   each v { send v.m receive M; v.m_old := v.m; v.m := max(M + {v.m}); }
//! }
//! ensure { alledges u v: u.m <= v.m }
//! ```
//!
//! Predicates inside assertions and conditions use `&&`, `||` and `!`;
//! assertions themselves are combined with `and`, `or` and `not`.

use std::fmt::Write as _;

use thiserror::Error;

use super::{AggOp, BExpr, Cmd, CmpOp, Domain, Expr, GlobalCmd, LocalBlock, Program, Side, StateSpace, Val};
use crate::hoare::Assertion;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {msg}")]
pub struct DplParseError {
    pub line: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u64),
    Sym(&'static str),
}

const SYMBOLS: [&str; 21] = [
    ":=", "==", "!=", "<=", ">=", "&&", "||", "{", "}", "(", ")", ";", ":", ",", ".", "=", "<", ">", "+", "-", "!",
];

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, DplParseError> {
    let mut out = Vec::new();
    for (k, raw) in src.lines().enumerate() {
        let line = k + 1;
        let text = raw.split('#').next().unwrap_or("");
        let mut rest = text;
        while let Some(c) = rest.chars().next() {
            if c.is_whitespace() {
                rest = &rest[c.len_utf8()..];
                continue;
            }
            if c.is_ascii_digit() {
                let end = rest.find(|d: char| !d.is_ascii_digit()).unwrap_or(rest.len());
                let n = rest[..end]
                    .parse()
                    .map_err(|_| DplParseError { line, msg: "number too large".into() })?;
                out.push((Tok::Num(n), line));
                rest = &rest[end..];
                continue;
            }
            if c.is_alphabetic() || c == '_' {
                let end = rest.find(|d: char| !(d.is_alphanumeric() || d == '_')).unwrap_or(rest.len());
                out.push((Tok::Ident(rest[..end].to_string()), line));
                rest = &rest[end..];
                continue;
            }
            let sym = SYMBOLS
                .iter()
                .find(|s| rest.starts_with(*s))
                .ok_or_else(|| DplParseError { line, msg: format!("unexpected character `{c}`") })?;
            out.push((Tok::Sym(sym), line));
            rest = &rest[sym.len()..];
        }
    }
    Ok(out)
}

const SECTION_WORDS: [&str; 7] = ["require", "each", "assert", "while", "ensure", "vars", "domain"];

/// Names of the nodes a predicate may mention.
#[derive(Clone, Copy)]
struct Binders<'a> {
    own: &'a str,
    other: Option<&'a str>,
    messages: bool,
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    space: Option<StateSpace>,
}

type PResult<T> = Result<T, DplParseError>;

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.0)
    }

    fn line(&self) -> usize {
        self.toks
            .get(self.pos)
            .or(self.toks.last())
            .map_or(1, |t| t.1)
    }

    fn fail<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(DplParseError { line: self.line(), msg: msg.into() })
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(x)) if x == w)
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(x)) if *x == s)
    }

    fn eat_word(&mut self, w: &str) -> bool {
        let hit = self.is_word(w);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        let hit = self.is_sym(s);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn word(&mut self, w: &str) -> PResult<()> {
        if self.eat_word(w) {
            Ok(())
        } else {
            self.fail(format!("expected `{w}`"))
        }
    }

    fn sym(&mut self, s: &str) -> PResult<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.fail(format!("expected `{s}`"))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek() {
            Some(Tok::Ident(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => self.fail("expected a name"),
        }
    }

    fn space(&self) -> &StateSpace {
        self.space.as_ref().expect("declared before use")
    }

    fn constant(&mut self) -> PResult<Val> {
        let Some(Tok::Num(n)) = self.peek().cloned() else {
            return self.fail("expected a number");
        };
        let v = Val::try_from(n).ok().filter(|&v| self.space.as_ref().is_none_or(|s| s.domain.contains(v)));
        match v {
            Some(v) => {
                self.pos += 1;
                Ok(v)
            }
            None => self.fail(format!("constant {n} is outside the domain")),
        }
    }

    /// `node.x`
    fn var_ref(&mut self, b: Binders) -> PResult<Expr> {
        let node = self.ident()?;
        let side = if node == b.own {
            Side::Own
        } else if Some(node.as_str()) == b.other {
            Side::Other
        } else {
            return self.fail(format!("unknown node `{node}`"));
        };
        self.sym(".")?;
        let x = self.ident()?;
        match self.space().var(&x) {
            Some(i) => Ok(Expr::Var(side, i)),
            None => self.fail(format!("undeclared variable `{x}`")),
        }
    }

    fn expr(&mut self, b: Binders) -> PResult<Expr> {
        let mut e = self.term(b)?;
        loop {
            if self.eat_sym("+") {
                e = Expr::Add(Box::new(e), Box::new(self.term(b)?));
            } else if self.eat_sym("-") {
                e = Expr::Sub(Box::new(e), Box::new(self.term(b)?));
            } else {
                return Ok(e);
            }
        }
    }

    fn term(&mut self, b: Binders) -> PResult<Expr> {
        match self.peek().cloned() {
            Some(Tok::Num(_)) => Ok(Expr::Const(self.constant()?)),
            Some(Tok::Sym("(")) => {
                self.pos += 1;
                let e = self.expr(b)?;
                self.sym(")")?;
                Ok(e)
            }
            Some(Tok::Ident(w)) if (w == "max" || w == "min") && self.peek_at(1) == Some(&Tok::Sym("(")) => {
                self.pos += 2;
                let op = if w == "max" { AggOp::Max } else { AggOp::Min };
                let mut messages = false;
                let mut args = Vec::new();
                loop {
                    if self.eat_word("M") {
                        if !b.messages {
                            return self.fail("`M` is only available after `send .. receive M;`");
                        }
                        messages = true;
                        if self.eat_sym("+") {
                            self.set_literal(b, &mut args)?;
                        }
                    } else if self.is_sym("{") {
                        self.set_literal(b, &mut args)?;
                    } else {
                        args.push(self.expr(b)?);
                    }
                    if !self.eat_sym(",") {
                        break;
                    }
                }
                self.sym(")")?;
                Ok(Expr::Agg { op, messages, args })
            }
            Some(Tok::Ident(w)) if w == "M" => self.fail("`M` may only appear inside `max(..)` or `min(..)`"),
            Some(Tok::Ident(_)) => self.var_ref(b),
            _ => self.fail("expected an expression"),
        }
    }

    fn set_literal(&mut self, b: Binders, args: &mut Vec<Expr>) -> PResult<()> {
        self.sym("{")?;
        loop {
            args.push(self.expr(b)?);
            if !self.eat_sym(",") {
                break;
            }
        }
        self.sym("}")
    }

    fn bexpr(&mut self, b: Binders) -> PResult<BExpr> {
        let mut items = vec![self.band(b)?];
        while self.eat_sym("||") {
            items.push(self.band(b)?);
        }
        Ok(if items.len() == 1 { items.pop().expect("one") } else { BExpr::Or(items) })
    }

    fn band(&mut self, b: Binders) -> PResult<BExpr> {
        let mut items = vec![self.bnot(b)?];
        while self.eat_sym("&&") {
            items.push(self.bnot(b)?);
        }
        Ok(if items.len() == 1 { items.pop().expect("one") } else { BExpr::And(items) })
    }

    fn bnot(&mut self, b: Binders) -> PResult<BExpr> {
        if self.eat_sym("!") {
            return Ok(BExpr::Not(Box::new(self.bnot(b)?)));
        }
        if self.eat_word("true") {
            return Ok(BExpr::Const(true));
        }
        if self.eat_word("false") {
            return Ok(BExpr::Const(false));
        }
        if self.is_sym("(") {
            // Either a parenthesized condition or the left side of a comparison.
            let save = self.pos;
            self.pos += 1;
            if let Ok(c) = self.bexpr(b) {
                if self.eat_sym(")") && self.cmp_op().is_none() && !self.is_sym("+") && !self.is_sym("-") {
                    return Ok(c);
                }
            }
            self.pos = save;
        }
        let l = self.expr(b)?;
        let Some(op) = self.cmp_op() else {
            return self.fail("expected a comparison");
        };
        self.pos += 1;
        let r = self.expr(b)?;
        Ok(BExpr::Cmp(op, l, r))
    }

    fn cmp_op(&self) -> Option<CmpOp> {
        match self.peek() {
            Some(Tok::Sym("=" | "==")) => Some(CmpOp::Eq),
            Some(Tok::Sym("!=")) => Some(CmpOp::Ne),
            Some(Tok::Sym("<")) => Some(CmpOp::Lt),
            Some(Tok::Sym("<=")) => Some(CmpOp::Le),
            Some(Tok::Sym(">")) => Some(CmpOp::Gt),
            Some(Tok::Sym(">=")) => Some(CmpOp::Ge),
            _ => None,
        }
    }

    fn assertion(&mut self) -> PResult<Assertion> {
        let mut items = vec![self.a_and()?];
        while self.eat_word("or") {
            items.push(self.a_and()?);
        }
        Ok(if items.len() == 1 { items.pop().expect("one") } else { Assertion::Or(items) })
    }

    fn a_and(&mut self) -> PResult<Assertion> {
        let mut items = vec![self.a_not()?];
        while self.eat_word("and") {
            items.push(self.a_not()?);
        }
        Ok(if items.len() == 1 { items.pop().expect("one") } else { Assertion::And(items) })
    }

    fn a_not(&mut self) -> PResult<Assertion> {
        if self.eat_word("not") {
            return Ok(Assertion::Not(Box::new(self.a_not()?)));
        }
        if self.eat_sym("(") {
            let a = self.assertion()?;
            self.sym(")")?;
            return Ok(a);
        }
        if self.eat_word("true") {
            return Ok(Assertion::Const(true));
        }
        if self.eat_word("false") {
            return Ok(Assertion::Const(false));
        }
        let kind = self.ident()?;
        match kind.as_str() {
            "all" | "some" => {
                let v = self.ident()?;
                self.sym(":")?;
                let p = self.bexpr(Binders { own: &v, other: None, messages: false })?;
                Ok(if kind == "all" { Assertion::All(p) } else { Assertion::Some(p) })
            }
            "alledges" => {
                let u = self.ident()?;
                let v = self.ident()?;
                if u == v {
                    return self.fail("the two nodes of `alledges` need different names");
                }
                self.sym(":")?;
                let p = self.bexpr(Binders { own: &v, other: Some(&u), messages: false })?;
                Ok(Assertion::AllEdges(p))
            }
            _ => {
                self.pos -= 1;
                self.fail("expected `all`, `some`, `alledges`, `not` or `(`")
            }
        }
    }

    fn braced_assertion(&mut self) -> PResult<Assertion> {
        self.sym("{")?;
        let a = self.assertion()?;
        self.sym("}")?;
        Ok(a)
    }

    fn cmds(&mut self, b: Binders) -> PResult<Vec<Cmd>> {
        let mut out = Vec::new();
        while !self.is_sym("}") {
            out.push(self.cmd(b)?);
        }
        Ok(out)
    }

    fn block_body(&mut self, b: Binders) -> PResult<Vec<Cmd>> {
        self.sym("{")?;
        let c = self.cmds(b)?;
        self.sym("}")?;
        Ok(c)
    }

    fn cmd(&mut self, b: Binders) -> PResult<Cmd> {
        if self.eat_word("skip") {
            self.sym(";")?;
            return Ok(Cmd::Skip);
        }
        if self.eat_word("if") {
            let c = self.bexpr(b)?;
            self.word("then")?;
            let then = self.block_body(b)?;
            let els = if self.eat_word("else") { self.block_body(b)? } else { Vec::new() };
            return Ok(Cmd::If(c, then, els));
        }
        if self.is_word("send") {
            return self.fail("`send .. receive M;` must come first in a block");
        }
        let target = self.var_ref(b)?;
        let Expr::Var(Side::Own, x) = target else {
            return self.fail("only the node's own variables can be assigned");
        };
        self.sym(":=")?;
        let e = self.expr(b)?;
        self.sym(";")?;
        Ok(Cmd::Assign(x, e))
    }

    fn each(&mut self) -> PResult<GlobalCmd> {
        let line = self.line();
        self.word("each")?;
        let v = self.ident()?;
        self.sym("{")?;
        let mut send = None;
        if self.eat_word("send") {
            let Expr::Var(_, x) = self.var_ref(Binders { own: &v, other: None, messages: false })? else {
                unreachable!("var_ref returns variables")
            };
            send = Some(x);
            self.word("receive")?;
            self.word("M")?;
            self.sym(";")?;
        }
        let cmds = self.cmds(Binders { own: &v, other: None, messages: send.is_some() })?;
        self.sym("}")?;
        Ok(GlobalCmd::Each { block: LocalBlock { send, cmds }, line })
    }

    fn global_cmds(&mut self, top: bool) -> PResult<Vec<GlobalCmd>> {
        let mut out = Vec::new();
        loop {
            let line = self.line();
            if self.is_word("each") {
                out.push(self.each()?);
            } else if self.eat_word("assert") {
                out.push(GlobalCmd::Assert { assertion: self.braced_assertion()?, line });
            } else if self.eat_word("while") {
                let cond = self.assertion()?;
                let invariant = if self.eat_word("invariant") { Some(self.braced_assertion()?) } else { None };
                self.sym("{")?;
                let body = self.global_cmds(false)?;
                self.sym("}")?;
                out.push(GlobalCmd::While { cond, invariant, body, line });
            } else if top || self.is_sym("}") {
                return Ok(out);
            } else {
                return self.fail("expected `each`, `assert`, `while` or `}`");
            }
        }
    }

    fn program(&mut self) -> PResult<Program> {
        self.word("program")?;
        let name = self.ident()?;
        self.word("domain")?;
        let mut values = Vec::new();
        while let Some(Tok::Num(_)) = self.peek() {
            values.push(self.constant()?);
        }
        let domain = Domain::new(values).or_else(|e| self.fail(e.to_string()))?;
        self.word("vars")?;
        let mut vars = Vec::new();
        while let Some(Tok::Ident(w)) = self.peek() {
            if SECTION_WORDS.contains(&w.as_str()) || w == "ensure" {
                break;
            }
            vars.push(self.ident()?);
        }
        self.space = Some(StateSpace::new(domain, vars).or_else(|e| self.fail(e.to_string()))?);
        let require = if self.is_word("require") {
            let line = self.line();
            self.pos += 1;
            Some((self.braced_assertion()?, line))
        } else {
            None
        };
        let body = self.global_cmds(true)?;
        let ensure = if self.is_word("ensure") {
            let line = self.line();
            self.pos += 1;
            Some((self.braced_assertion()?, line))
        } else {
            None
        };
        if self.pos < self.toks.len() {
            return self.fail("unexpected input after the program");
        }
        Ok(Program { name, space: self.space.take().expect("declared"), require, body, ensure })
    }
}

pub fn parse_dpl(text: &str) -> Result<Program, DplParseError> {
    let toks = lex(text)?;
    Parser { toks: &toks, pos: 0, space: None }.program()
}

/// Parses an assertion over the variables of `space`.
pub fn parse_assertion(text: &str, space: &StateSpace) -> Result<Assertion, DplParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks: &toks, pos: 0, space: Some(space.clone()) };
    let a = p.assertion()?;
    if p.pos < toks.len() {
        return p.fail("unexpected input after the assertion");
    }
    Ok(a)
}

pub(crate) fn write_expr(out: &mut String, space: &StateSpace, e: &Expr) {
    match e {
        Expr::Const(c) => {
            let _ = write!(out, "{c}");
        }
        Expr::Var(side, x) => {
            let node = if *side == Side::Own { "v" } else { "u" };
            let _ = write!(out, "{node}.{}", space.vars[*x]);
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            out.push('(');
            write_expr(out, space, a);
            out.push_str(if matches!(e, Expr::Add(..)) { " + " } else { " - " });
            write_expr(out, space, b);
            out.push(')');
        }
        Expr::Agg { op, messages, args } => {
            out.push_str(if *op == AggOp::Max { "max(" } else { "min(" });
            if *messages {
                out.push('M');
                if !args.is_empty() {
                    out.push_str(" + {");
                }
            }
            for (k, a) in args.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                write_expr(out, space, a);
            }
            if *messages && !args.is_empty() {
                out.push('}');
            }
            out.push(')');
        }
    }
}

pub(crate) fn write_bexpr(out: &mut String, space: &StateSpace, b: &BExpr) {
    match b {
        BExpr::Const(c) => out.push_str(if *c { "true" } else { "false" }),
        BExpr::Cmp(op, l, r) => {
            write_expr(out, space, l);
            out.push_str(match op {
                CmpOp::Eq => " == ",
                CmpOp::Ne => " != ",
                CmpOp::Lt => " < ",
                CmpOp::Le => " <= ",
                CmpOp::Gt => " > ",
                CmpOp::Ge => " >= ",
            });
            write_expr(out, space, r);
        }
        BExpr::Not(c) => {
            out.push_str("!(");
            write_bexpr(out, space, c);
            out.push(')');
        }
        BExpr::And(cs) | BExpr::Or(cs) => {
            let sep = if matches!(b, BExpr::And(_)) { " && " } else { " || " };
            out.push('(');
            for (k, c) in cs.iter().enumerate() {
                if k > 0 {
                    out.push_str(sep);
                }
                write_bexpr(out, space, c);
            }
            out.push(')');
        }
    }
}

fn write_cmds(out: &mut String, space: &StateSpace, cmds: &[Cmd], indent: usize) {
    for c in cmds {
        out.push_str(&" ".repeat(indent));
        match c {
            Cmd::Skip => out.push_str("skip;\n"),
            Cmd::Assign(x, e) => {
                let _ = write!(out, "v.{} := ", space.vars[*x]);
                write_expr(out, space, e);
                out.push_str(";\n");
            }
            Cmd::If(b, then, els) => {
                out.push_str("if ");
                write_bexpr(out, space, b);
                out.push_str(" then {\n");
                write_cmds(out, space, then, indent + 2);
                let _ = writeln!(out, "{}}} else {{", " ".repeat(indent));
                write_cmds(out, space, els, indent + 2);
                let _ = writeln!(out, "{}}}", " ".repeat(indent));
            }
        }
    }
}

fn write_global(out: &mut String, space: &StateSpace, cmds: &[GlobalCmd], indent: usize) {
    let pad = " ".repeat(indent);
    for c in cmds {
        match c {
            GlobalCmd::Each { block, .. } => {
                let _ = writeln!(out, "{pad}each v {{");
                if let Some(x) = block.send {
                    let _ = writeln!(out, "{pad}  send v.{} receive M;", space.vars[x]);
                }
                write_cmds(out, space, &block.cmds, indent + 2);
                let _ = writeln!(out, "{pad}}}");
            }
            GlobalCmd::Assert { assertion, .. } => {
                let _ = writeln!(out, "{pad}assert {{ {} }}", assertion.display(space));
            }
            GlobalCmd::While { cond, invariant, body, .. } => {
                let _ = write!(out, "{pad}while {}", cond.display(space));
                if let Some(inv) = invariant {
                    let _ = write!(out, " invariant {{ {} }}", inv.display(space));
                }
                out.push_str(" {\n");
                write_global(out, space, body, indent + 2);
                let _ = writeln!(out, "{pad}}}");
            }
        }
    }
}

/// Renders a program in a form [`parse_dpl`] reads back.
pub fn write_dpl(p: &Program) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "program {}", p.name);
    let values: Vec<String> = p.space.domain.values().iter().map(Val::to_string).collect();
    let _ = writeln!(out, "domain {}", values.join(" "));
    let _ = writeln!(out, "vars {}", p.space.vars.join(" "));
    if let Some((a, _)) = &p.require {
        let _ = writeln!(out, "require {{ {} }}", a.display(&p.space));
    }
    write_global(&mut out, &p.space, &p.body, 0);
    if let Some((a, _)) = &p.ensure {
        let _ = writeln!(out, "ensure {{ {} }}", a.display(&p.space));
    }
    out
}

//! Tokenizer and recursive-descent parser for the catalog language.

use std::collections::{BTreeSet, HashSet};

use num_traits::Zero;

use super::ast::*;
use crate::error::{Error, Result};
use crate::exactalg::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u64),
    Sym(&'static str),
    Ket(Base),
    End,
}

const SYMS: [&str; 18] = ["==", "..", "+", "-", "*", "/", "^", "(", ")", "[", "]", ",", ";", ":", "=", "@", "<", ">"];

fn tokenize(text: &str, line: usize, col0: usize) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    let err = |k: usize, msg: String| Error::Syntax { line, col: col0 + k + 1, msg };
    while k < chars.len() {
        let c = chars[k];
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        if c == '#' {
            break;
        }
        let start = k;
        if c.is_ascii_alphabetic() || c == '_' {
            while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            out.push((Tok::Ident(chars[start..k].iter().collect()), start));
            continue;
        }
        if c.is_ascii_digit() {
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let s: String = chars[start..k].iter().collect();
            let n = s.parse().map_err(|_| err(start, format!("integer too large: {s}")))?;
            out.push((Tok::Int(n), start));
            continue;
        }
        if c == '|' {
            let rest: String = chars[k..].iter().take(5).collect();
            let (base, len) = if rest.starts_with("|0>") {
                (Base::Vac, 3)
            } else if rest.starts_with("|tw>") {
                (Base::VacTw, 4)
            } else if rest.starts_with("|lam>") {
                (Base::ExpLam, 5)
            } else {
                return Err(err(k, "unknown ket".into()));
            };
            out.push((Tok::Ket(base), start));
            k += len;
            continue;
        }
        let two: String = chars[k..(k + 2).min(chars.len())].iter().collect();
        if let Some(s) = SYMS.iter().find(|s| s.len() == 2 && **s == two) {
            out.push((Tok::Sym(s), start));
            k += 2;
            continue;
        }
        if let Some(s) = SYMS.iter().find(|s| s.len() == 1 && s.starts_with(c)) {
            out.push((Tok::Sym(s), start));
            k += 1;
            continue;
        }
        return Err(err(k, format!("unexpected character '{c}'")));
    }
    out.push((Tok::End, chars.len()));
    Ok(out)
}

const FUNCTIONS: [&str; 11] =
    ["star", "circ", "gpoly", "subst", "binom", "theta", "constraint", "eliminant", "delta", "cmn", "sum"];

/// Names the parser resolves specially.
pub struct Scope<'a> {
    pub indices: &'a [String],
    pub defs: &'a HashSet<String>,
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    col0: usize,
    scope: &'a Scope<'a>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Syntax { line: self.line, col: self.col0 + self.toks[self.pos].1 + 1, msg: msg.into() }
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{s}', found {}", describe(self.peek()))))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.bump() {
            Tok::Ident(s) => Ok(s),
            t => Err(self.err(format!("expected a name, found {}", describe(&t)))),
        }
    }

    fn uint(&mut self) -> Result<u64> {
        match self.bump() {
            Tok::Int(n) => Ok(n),
            t => Err(self.err(format!("expected an integer, found {}", describe(&t)))),
        }
    }

    fn sint(&mut self) -> Result<i64> {
        let neg = self.eat("-");
        let n = self.uint()? as i64;
        Ok(if neg { -n } else { n })
    }

    fn idx(&mut self) -> Result<Idx> {
        match self.bump() {
            Tok::Int(n) => Ok(Idx::Lit(n as usize)),
            Tok::Ident(s) => {
                if self.scope.indices.contains(&s) {
                    Ok(Idx::Var(s))
                } else {
                    Err(self.err(format!("unbound index '{s}'")))
                }
            }
            t => Err(self.err(format!("expected an index, found {}", describe(&t)))),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut e = self.term()?;
        loop {
            if self.eat("+") {
                e = Expr::Add(Box::new(e), Box::new(self.term()?));
            } else if self.eat("-") {
                e = Expr::Sub(Box::new(e), Box::new(self.term()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut e = self.factor()?;
        loop {
            if self.eat("*") {
                e = Expr::Mul(Box::new(e), Box::new(self.factor()?));
            } else if self.eat("/") {
                e = Expr::Div(Box::new(e), Box::new(self.factor()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.eat("-") {
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let mut e = self.chain()?;
        while self.eat("^") {
            e = Expr::Pow(Box::new(e), self.uint()? as u32);
        }
        Ok(e)
    }

    fn starts_primary(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_) | Tok::Int(_) | Tok::Ket(_)) || self.is_sym("(") || self.is_sym("[") || self.is_sym("<")
    }

    /// op* terminal?, with `*` allowed between operator items.
    fn chain(&mut self) -> Result<Expr> {
        let mut items: Vec<OpItem> = Vec::new();
        loop {
            match self.primary()? {
                Prim::Op(op) => {
                    let mut reps = 1;
                    if self.is_sym("^") {
                        self.bump();
                        reps = self.uint()? as usize;
                        if reps == 0 {
                            return Err(self.err("operator power must be positive"));
                        }
                    }
                    for _ in 0..reps {
                        items.push(op.clone());
                    }
                    if self.is_sym("*") && self.op_follows() {
                        self.bump();
                        continue;
                    }
                    if self.starts_primary() {
                        continue;
                    }
                    return Ok(Expr::Chain(items, None));
                }
                Prim::Term(t) => {
                    if self.starts_primary() {
                        return Err(self.err(format!("unexpected {} after a complete term", describe(self.peek()))));
                    }
                    if items.is_empty() {
                        return Ok(t);
                    }
                    return Ok(Expr::Chain(items, Some(Box::new(t))));
                }
            }
        }
    }

    /// After `*`, whether the chain continues (anything but a plain number).
    fn op_follows(&self) -> bool {
        !matches!(self.peek_at(1), Tok::Int(_))
    }

    fn mode_suffix(&mut self, head: Expr) -> Result<Prim> {
        if self.eat("[") {
            let n = self.expr()?;
            self.expect("]")?;
            return Ok(Prim::Op(OpItem::Mode(Box::new(head), Box::new(n))));
        }
        Ok(Prim::Term(head))
    }

    fn primary(&mut self) -> Result<Prim> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Prim::Term(Expr::Num(Rat::from_integer(n.into()))))
            }
            Tok::Ket(b) => {
                self.bump();
                Ok(Prim::Term(Expr::Base(b)))
            }
            Tok::Sym("(") => {
                self.bump();
                let e = self.expr()?;
                self.expect(")")?;
                self.mode_suffix(e)
            }
            Tok::Sym("[") => {
                self.bump();
                let a = self.expr()?;
                self.expect(",")?;
                let b = self.expr()?;
                self.expect("]")?;
                Ok(Prim::Term(Expr::Bracket(Box::new(a), Box::new(b))))
            }
            Tok::Sym("<") => {
                self.bump();
                let mut items = vec![self.expr()?];
                while self.eat(",") {
                    items.push(self.expr()?);
                }
                self.expect(">")?;
                Ok(Prim::Term(Expr::List(items)))
            }
            Tok::Ident(name) => {
                self.bump();
                self.named(&name)
            }
            t => Err(self.err(format!("unexpected {}", describe(&t)))),
        }
    }

    fn named(&mut self, name: &str) -> Result<Prim> {
        let call = self.is_sym("(");
        let elem = |p: &mut Parser, e: ElemAtom| p.mode_suffix(Expr::Elem(e));
        match name {
            "vac" => return Ok(Prim::Term(Expr::Base(Base::Vac))),
            "vactw" => return Ok(Prim::Term(Expr::Base(Base::VacTw))),
            "u" => return Ok(Prim::Term(Expr::Base(Base::Nilpotent))),
            "ugen" => return Ok(Prim::Term(Expr::Base(Base::Generic))),
            "exp" if call => {
                self.expect("(")?;
                let v = self.ident()?;
                if v != "lam" {
                    return Err(self.err("only exp(lam) is supported"));
                }
                self.expect(")")?;
                return Ok(Prim::Term(Expr::Base(Base::ExpLam)));
            }
            "omega" if !call => return elem(self, ElemAtom::OmegaTotal),
            "omega" | "H" | "J" => {
                self.expect("(")?;
                let i = self.idx()?;
                self.expect(")")?;
                let a = match name {
                    "omega" => ElemAtom::Omega(i),
                    "H" => ElemAtom::H(i),
                    _ => ElemAtom::J(i),
                };
                return elem(self, a);
            }
            "S" if call => {
                self.expect("(")?;
                let i = self.idx()?;
                self.expect(",")?;
                let j = self.idx()?;
                self.expect(";")?;
                let r = self.uint()? as u32;
                self.expect(",")?;
                let s = self.uint()? as u32;
                self.expect(")")?;
                return elem(self, ElemAtom::S { i, j, r, s });
            }
            "Eu" | "Et" | "Lambda" if call => {
                self.expect("(")?;
                let i = self.idx()?;
                self.expect(",")?;
                let j = self.idx()?;
                self.expect(")")?;
                let a = match name {
                    "Eu" => ElemAtom::Eu(i, j),
                    "Et" => ElemAtom::Et(i, j),
                    _ => ElemAtom::Lambda(i, j),
                };
                return elem(self, a);
            }
            "h" if self.is_sym("[") => {
                // rendered form h[i](n)
                self.bump();
                let i = self.idx()?;
                self.expect("]")?;
                self.expect("(")?;
                let n = self.expr()?;
                self.expect(")")?;
                return Ok(Prim::Op(OpItem::Heis(i, Box::new(n))));
            }
            "h" if call => {
                self.expect("(")?;
                let i = self.idx()?;
                self.expect(",")?;
                let n = self.expr()?;
                self.expect(")")?;
                return Ok(Prim::Op(OpItem::Heis(i, Box::new(n))));
            }
            "wmode" | "Hmode" if call => {
                self.expect("(")?;
                let i = self.idx()?;
                self.expect(",")?;
                let n = self.expr()?;
                self.expect(")")?;
                self.expect("@")?;
                let a = if name == "wmode" { ElemAtom::Omega(i) } else { ElemAtom::H(i) };
                return Ok(Prim::Op(OpItem::Mode(Box::new(Expr::Elem(a)), Box::new(n))));
            }
            "w0" => {
                self.expect("@")?;
                let zero = Expr::Num(Rat::zero());
                return Ok(Prim::Op(OpItem::Mode(Box::new(Expr::Elem(ElemAtom::OmegaTotal)), Box::new(zero))));
            }
            "mode" if call => {
                self.expect("(")?;
                let e = self.expr()?;
                self.expect(",")?;
                let n = self.expr()?;
                self.expect(")")?;
                self.expect("@")?;
                return Ok(Prim::Op(OpItem::Mode(Box::new(e), Box::new(n))));
            }
            "sum" if call => {
                self.expect("(")?;
                let var = self.ident()?;
                self.expect("=")?;
                let lo = self.expr()?;
                self.expect("..")?;
                let hi = self.expr()?;
                self.expect(",")?;
                let body = self.expr()?;
                self.expect(")")?;
                return Ok(Prim::Term(Expr::Sum { var, lo: Box::new(lo), hi: Box::new(hi), body: Box::new(body) }));
            }
            _ => {}
        }
        if FUNCTIONS.contains(&name) && call {
            self.expect("(")?;
            let mut args = Vec::new();
            if !self.is_sym(")") {
                loop {
                    let named = matches!(self.peek(), Tok::Ident(_)) && matches!(self.peek_at(1), Tok::Sym("="));
                    let name = if named {
                        let n = self.ident()?;
                        self.bump();
                        Some(n)
                    } else {
                        None
                    };
                    args.push(Arg { name, value: self.expr()? });
                    if !self.eat(",") {
                        break;
                    }
                }
            }
            self.expect(")")?;
            return Ok(Prim::Term(Expr::Call(name.to_string(), args)));
        }
        if self.scope.defs.contains(name) {
            return self.mode_suffix(Expr::Ref(name.to_string()));
        }
        if call {
            return Err(self.err(format!("unknown function '{name}'")));
        }
        Ok(Prim::Term(Expr::Var(name.to_string())))
    }

    fn finish(&self) -> Result<()> {
        if *self.peek() != Tok::End {
            return Err(self.err(format!("unexpected {}", describe(self.peek()))));
        }
        Ok(())
    }
}

enum Prim {
    Op(OpItem),
    Term(Expr),
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("'{s}'"),
        Tok::Int(n) => format!("'{n}'"),
        Tok::Sym(s) => format!("'{s}'"),
        Tok::Ket(b) => format!("'{b}'"),
        Tok::End => "end of line".into(),
    }
}

/// Parses a standalone expression.
pub fn parse_expr(text: &str, scope: &Scope) -> Result<Expr> {
    let mut p = Parser { toks: tokenize(text, 1, 0)?, pos: 0, line: 1, col0: 0, scope };
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

fn suite_prefix(suite: &str) -> &str {
    match suite {
        "appendix" => "app",
        "relations" => "rel",
        "eigen" => "eig",
        "commutators" => "com",
        "zhu" => "zhu",
        "twisted" => "tw",
        "boundary" => "bnd",
        "verma" => "verma",
        s => s,
    }
}

/// `A[n] B` with element atoms on both sides.
pub fn simple_product(e: &Expr) -> Option<(&ElemAtom, &Expr, &ElemAtom)> {
    if let Expr::Chain(items, Some(t)) = e {
        if let ([OpItem::Mode(a, n)], Expr::Elem(b)) = (items.as_slice(), &**t) {
            if let Expr::Elem(a) = &**a {
                return Some((a, n, b));
            }
        }
    }
    None
}

fn auto_id(rec: &IdentityRecord, counter: usize) -> String {
    let prefix = suite_prefix(&rec.suite);
    if rec.kind == Kind::Product {
        if let Some((a, Expr::Num(n), b)) = simple_product(&rec.lhs) {
            return format!("{prefix}.{}_{}_{}", a.slug(), n, b.slug());
        }
    }
    format!("{prefix}.{counter:03}")
}

fn parse_options(p: &mut Parser) -> Result<RecordOptions> {
    let mut o = RecordOptions::default();
    p.expect("(")?;
    loop {
        let key = p.ident()?;
        p.expect("=")?;
        match key.as_str() {
            "id" => {
                let mut id = p.ident()?;
                while p.is_sym("-") || p.is_sym("..") || matches!(p.peek(), Tok::Ident(_) | Tok::Int(_)) {
                    match p.bump() {
                        Tok::Sym("-") => id.push('-'),
                        Tok::Sym("..") => id.push('.'),
                        Tok::Ident(s) => id.push_str(&s),
                        Tok::Int(n) => id.push_str(&n.to_string()),
                        _ => unreachable!(),
                    }
                }
                o.id = Some(id);
            }
            "rank" => o.rank = Some(p.uint()? as usize),
            "weight" => o.weight = Some(p.uint()? as i64),
            "on" => {
                o.basis = Some(match p.ident()?.as_str() {
                    "vac" => BasisKind::Vac,
                    "exp" => BasisKind::Exp,
                    "tw" => BasisKind::Tw,
                    other => return Err(p.err(format!("unknown basis '{other}'"))),
                })
            }
            _ => {
                let lo = p.sint()?;
                p.expect("..")?;
                let hi = p.sint()?;
                if lo > hi {
                    return Err(p.err("empty range"));
                }
                o.loops.push((key, lo, hi));
            }
        }
        if !p.eat(",") {
            break;
        }
    }
    p.expect(")")?;
    Ok(o)
}

/// Parsed catalog: items in file order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Catalog {
    pub items: Vec<Item>,
}

pub fn parse_catalog(text: &str) -> Result<Catalog> {
    let mut items = Vec::new();
    let mut suite = String::from("misc");
    let mut indices: Vec<String> = Vec::new();
    let mut anchor = String::new();
    let mut defs: HashSet<String> = HashSet::new();
    let mut counters: std::collections::HashMap<String, usize> = Default::default();
    let mut ids: BTreeSet<String> = BTreeSet::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let trimmed = raw.trim_start();
        let col0 = raw.len() - trimmed.len();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (head, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
        let rest_col = col0 + head.len() + 1;
        let syn = |col: usize, msg: String| Error::Syntax { line, col, msg };
        match head {
            "suite" => {
                suite = rest.trim().to_string();
                if suite.is_empty() {
                    return Err(syn(rest_col, "missing suite name".into()));
                }
                indices.clear();
                anchor.clear();
                items.push(Item::Suite(suite.clone()));
            }
            "indices" => {
                let v: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                let set: BTreeSet<&String> = v.iter().collect();
                if set.len() != v.len() {
                    return Err(syn(rest_col, "repeated index variable".into()));
                }
                indices = v.clone();
                items.push(Item::Indices(v));
            }
            "note" => {
                anchor = rest.trim().to_string();
                items.push(Item::Note(anchor.clone()));
            }
            "def" => {
                let (name, body) =
                    rest.split_once('=').ok_or_else(|| syn(rest_col, "expected 'def NAME = expr'".into()))?;
                let name = name.trim().to_string();
                let scope = Scope { indices: &indices, defs: &defs };
                let body_col = rest_col + rest.find('=').unwrap() + 1;
                let mut p = Parser { toks: tokenize(body, line, body_col)?, pos: 0, line, col0: body_col, scope: &scope };
                let e = p.expr()?;
                p.finish()?;
                defs.insert(name.clone());
                items.push(Item::Def(name, e));
            }
            "check" => {
                let scope = Scope { indices: &indices, defs: &defs };
                let mut p = Parser { toks: tokenize(rest, line, rest_col)?, pos: 0, line, col0: rest_col, scope: &scope };
                let kind_name = p.ident()?;
                let kind = Kind::parse(&kind_name).ok_or_else(|| p.err(format!("unknown kind '{kind_name}'")))?;
                let (mut assoc, mut axiom) = (false, false);
                loop {
                    match p.peek() {
                        Tok::Ident(s) if s == "assoc" => assoc = true,
                        Tok::Ident(s) if s == "axiom" => axiom = true,
                        _ => break,
                    }
                    p.bump();
                }
                let options = if p.is_sym("(") { parse_options(&mut p)? } else { RecordOptions::default() };
                p.expect(":")?;
                let lhs = p.expr()?;
                let rhs = if p.eat("==") { Some(p.expr()?) } else { None };
                p.finish()?;
                if rhs.is_none() && !kind.single_sided() {
                    return Err(p.err(format!("{} records need '== rhs'", kind.name())));
                }
                let counter = counters.entry(suite.clone()).or_insert(0);
                *counter += 1;
                let mut rec = IdentityRecord {
                    id: String::new(),
                    suite: suite.clone(),
                    kind,
                    assoc,
                    axiom,
                    options,
                    lhs,
                    rhs,
                    index_vars: indices.clone(),
                    anchor: anchor.clone(),
                    line,
                };
                rec.id = match &rec.options.id {
                    Some(id) => format!("{}.{id}", suite_prefix(&suite)),
                    None => auto_id(&rec, *counter),
                };
                if !ids.insert(rec.id.clone()) {
                    return Err(syn(col0 + 1, format!("duplicate record id '{}'", rec.id)));
                }
                items.push(Item::Check(rec));
            }
            other => return Err(syn(col0 + 1, format!("unknown directive '{other}'"))),
        }
    }
    Ok(Catalog { items })
}

impl Catalog {
    pub fn records(&self) -> impl Iterator<Item = &IdentityRecord> {
        self.items.iter().filter_map(|i| match i {
            Item::Check(r) => Some(r),
            _ => None,
        })
    }

    pub fn defs(&self) -> std::collections::HashMap<String, Expr> {
        self.items
            .iter()
            .filter_map(|i| match i {
                Item::Def(n, e) => Some((n.clone(), e.clone())),
                _ => None,
            })
            .collect()
    }

    pub fn suites(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for r in self.records() {
            if !out.contains(&r.suite) {
                out.push(r.suite.clone());
            }
        }
        out
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for item in &self.items {
            match item {
                Item::Suite(s) => out.push_str(&format!("\nsuite {s}\n")),
                Item::Indices(v) => out.push_str(&format!("indices {}\n", v.join(" "))),
                Item::Note(n) => out.push_str(&format!("note {n}\n")),
                Item::Def(n, e) => out.push_str(&format!("def {n} = {e}\n")),
                Item::Check(r) => {
                    out.push_str(&r.render());
                    out.push('\n');
                }
            }
        }
        out
    }
}

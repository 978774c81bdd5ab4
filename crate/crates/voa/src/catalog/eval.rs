//! Evaluation of catalog expressions through the engine modules.

use std::collections::HashMap;

use num_traits::{One, ToPrimitive, Zero};

use super::ast::*;
use crate::boundary::{
    derive_constraints, eliminate, standard_delta, BoundaryExpr, DiagGen, DiagKind, Form, GenericVectorSpec, Side,
    EPS,
};
use crate::error::{Error, Result};
use crate::exactalg::{binomial_poly, g_poly, PolyQ, Rat, UniPoly, Var};
use crate::fock::{generator, GenName, Half, ModuleKind, State, VAElement};
use crate::twisted::{c_coeffs, twisted_n_product};
use crate::vertex::{heis_mode, ModeEngine};
use crate::zhu::{circ, star};

/// Result of evaluating an expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Scalar(PolyQ),
    State(State),
    List(Vec<PolyQ>),
}

impl Value {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Value::Scalar(_) => "scalar",
            Value::State(_) => "state",
            Value::List(_) => "list",
        }
    }
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Scalar(p) => write!(f, "{p}"),
            Value::State(s) => write!(f, "{s}"),
            Value::List(v) => {
                let parts: Vec<String> = v.iter().map(|p| p.to_string()).collect();
                write!(f, "<{}>", parts.join(", "))
            }
        }
    }
}

fn type_err(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

/// Variables of the first-order model of M(1, lam) used for `u`.
pub fn nilpotent_vars(rank: usize) -> Vec<Var> {
    (1..=rank).map(|k| Var::new(&format!("t_{k}"))).collect()
}

pub fn nilpotent_module(rank: usize) -> ModuleKind {
    ModuleKind::Exp { lam: nilpotent_vars(rank).into_iter().map(PolyQ::from_var).collect() }
}

/// Evaluation context for one instantiation of a record.
pub struct Env<'a> {
    pub rank: usize,
    /// concrete generator number of each index variable
    pub indices: HashMap<String, usize>,
    pub defs: &'a HashMap<String, Expr>,
    loops: HashMap<String, i64>,
    engines: HashMap<ModuleKind, ModeEngine>,
    def_cache: HashMap<String, Value>,
    nilpotent: ModuleKind,
    nil_vars: Vec<Var>,
}

impl<'a> Env<'a> {
    pub fn new(rank: usize, indices: HashMap<String, usize>, defs: &'a HashMap<String, Expr>) -> Env<'a> {
        Env {
            rank,
            indices,
            defs,
            loops: HashMap::new(),
            engines: HashMap::new(),
            def_cache: HashMap::new(),
            nilpotent: nilpotent_module(rank),
            nil_vars: nilpotent_vars(rank),
        }
    }

    pub fn set_loop(&mut self, var: &str, value: i64) {
        self.loops.insert(var.to_string(), value);
        self.def_cache.clear();
    }

    pub fn idx(&self, i: &Idx) -> Result<usize> {
        let n = match i {
            Idx::Lit(n) => *n,
            Idx::Var(v) => *self.indices.get(v).ok_or_else(|| Error::BadIndex(format!("unbound index '{v}'")))?,
        };
        if n == 0 || n > self.rank {
            return Err(Error::BadIndex(format!("index {n} not in 1..{}", self.rank)));
        }
        Ok(n)
    }

    pub fn gen_name(&self, a: &ElemAtom) -> Result<GenName> {
        Ok(match a {
            ElemAtom::Omega(i) => GenName::Omega(self.idx(i)?),
            ElemAtom::OmegaTotal => GenName::OmegaTotal,
            ElemAtom::H(i) => GenName::H(self.idx(i)?),
            ElemAtom::J(i) => GenName::J(self.idx(i)?),
            ElemAtom::S { i, j, r, s } => GenName::S { i: self.idx(i)?, j: self.idx(j)?, r: *r, s: *s },
            ElemAtom::Eu(i, j) => GenName::Eu(self.idx(i)?, self.idx(j)?),
            ElemAtom::Et(i, j) => GenName::Et(self.idx(i)?, self.idx(j)?),
            ElemAtom::Lambda(i, j) => GenName::Lambda(self.idx(i)?, self.idx(j)?),
        })
    }

    pub fn element(&self, a: &ElemAtom) -> Result<VAElement> {
        generator(&self.gen_name(a)?, self.rank)
    }

    fn base(&self, b: Base) -> Result<State> {
        Ok(match b {
            Base::Vac => State::vac(self.rank),
            Base::VacTw => State::vac_tw(self.rank),
            Base::ExpLam => State::exp_lam(self.rank),
            Base::Nilpotent => State::base(self.nilpotent.clone()),
            Base::Generic => return Err(type_err("ugen only appears as R[eps+c] ugen")),
        })
    }

    /// Mode a_{n2/2} on any state, reusing one engine per module.
    pub fn mode(&mut self, a: &VAElement, n2: i64, s: &State) -> Result<State> {
        if !a.module().is_vacuum() {
            return Err(Error::NotVacuum);
        }
        let out = if s.module().is_twisted() {
            twisted_n_product(a, Half(n2), s)?
        } else {
            if n2 % 2 != 0 {
                return Err(Error::ParityMismatch(Half(n2).to_string()));
            }
            let module = s.module().clone();
            self.engines.entry(module.clone()).or_insert_with(|| ModeEngine::new(module)).apply(a, n2, s)
        };
        Ok(self.settle(out))
    }

    fn settle(&self, s: State) -> State {
        if *s.module() == self.nilpotent {
            s.truncate(&self.nil_vars, 2)
        } else {
            s
        }
    }

    fn scalar(&mut self, e: &Expr, hole: Option<&State>) -> Result<PolyQ> {
        match self.eval(e, hole)? {
            Value::Scalar(p) => Ok(p),
            v => Err(type_err(format!("expected a scalar in '{e}', found a {}", v.kind_name()))),
        }
    }

    fn rational(&mut self, e: &Expr) -> Result<Rat> {
        self.scalar(e, None)?.as_constant().ok_or_else(|| type_err(format!("'{e}' is not a constant")))
    }

    pub fn integer(&mut self, e: &Expr) -> Result<i64> {
        let r = self.rational(e)?;
        if !r.is_integer() {
            return Err(type_err(format!("'{e}' is not an integer")));
        }
        r.to_integer().to_i64().ok_or_else(|| type_err("integer out of range"))
    }

    /// Doubled mode index: integral, or half-integral on the twisted module.
    fn mode_index2(&mut self, e: &Expr) -> Result<i64> {
        let r = self.rational(e)? * Rat::from_integer(2.into());
        if !r.is_integer() {
            return Err(Error::ParityMismatch(format!("{e}")));
        }
        r.to_integer().to_i64().ok_or_else(|| type_err("mode index out of range"))
    }

    fn state(&mut self, e: &Expr, hole: Option<&State>) -> Result<State> {
        match self.eval(e, hole)? {
            Value::State(s) => Ok(s),
            v => Err(type_err(format!("expected a state in '{e}', found a {}", v.kind_name()))),
        }
    }

    fn apply_item(&mut self, item: &OpItem, s: &State) -> Result<State> {
        match item {
            OpItem::Mode(head, n) => {
                let a = self.state(head, None)?;
                let n2 = self.mode_index2(n)?;
                self.mode(&a, n2, s)
            }
            OpItem::Heis(i, n) => {
                let i = self.idx(i)?;
                let n2 = self.mode_index2(n)?;
                Ok(self.settle(heis_mode(i, Half(n2), s)?))
            }
        }
    }

    /// Evaluates with `hole` as the state an operator expression acts on.
    pub fn eval(&mut self, e: &Expr, hole: Option<&State>) -> Result<Value> {
        Ok(match e {
            Expr::Num(r) => Value::Scalar(PolyQ::constant(r.clone())),
            Expr::Var(v) => Value::Scalar(self.var(v)),
            Expr::Add(a, b) => combine(self.eval(a, hole)?, self.eval(b, hole)?, false)?,
            Expr::Sub(a, b) => combine(self.eval(a, hole)?, self.eval(b, hole)?, true)?,
            Expr::Neg(a) => scale(self.eval(a, hole)?, &PolyQ::int(-1)),
            Expr::Mul(a, b) => match (self.eval(a, hole)?, self.eval(b, hole)?) {
                (Value::Scalar(x), v) | (v, Value::Scalar(x)) => scale(v, &x),
                (x, y) => return Err(type_err(format!("cannot multiply a {} by a {}", x.kind_name(), y.kind_name()))),
            },
            Expr::Div(a, b) => {
                let d = self.rational(b)?;
                if d.is_zero() {
                    return Err(type_err("division by zero"));
                }
                scale(self.eval(a, hole)?, &PolyQ::constant(d.recip()))
            }
            Expr::Pow(a, k) => Value::Scalar(self.scalar(a, hole)?.pow(*k)),
            Expr::Chain(items, term) => {
                if let (Some(t), [OpItem::Mode(head, n)]) = (term, items.as_slice()) {
                    if **t == Expr::Base(Base::Generic) {
                        return self.boundary_word(head, n);
                    }
                }
                let mut s = match term {
                    Some(t) => self.state(t, hole)?,
                    None => hole.cloned().ok_or_else(|| type_err(format!("operator '{e}' has no state to act on")))?,
                };
                for item in items.iter().rev() {
                    s = self.apply_item(item, &s)?;
                }
                Value::State(s)
            }
            Expr::Base(b) => Value::State(self.base(*b)?),
            Expr::Elem(a) => Value::State(self.element(a)?),
            Expr::Ref(name) => {
                if hole.is_none() {
                    if let Some(v) = self.def_cache.get(name) {
                        return Ok(v.clone());
                    }
                }
                let body = self.defs.get(name).ok_or_else(|| type_err(format!("unknown definition '{name}'")))?;
                let v = self.eval(body, hole)?;
                if hole.is_none() {
                    self.def_cache.insert(name.clone(), v.clone());
                }
                v
            }
            Expr::Bracket(a, b) => {
                let s = hole.ok_or_else(|| type_err("a bracket needs a state to act on"))?;
                let bs = self.state(b, Some(s))?;
                let abs = self.state(a, Some(&bs))?;
                let as_ = self.state(a, Some(s))?;
                let bas = self.state(b, Some(&as_))?;
                Value::State(abs.sub(&bas))
            }
            Expr::Call(name, args) => self.call(name, args, hole)?,
            Expr::Sum { var, lo, hi, body } => {
                let (lo, hi) = (self.integer(lo)?, self.integer(hi)?);
                let saved = self.loops.get(var).copied();
                let mut acc: Option<Value> = None;
                for t in lo..=hi {
                    self.loops.insert(var.clone(), t);
                    let v = self.eval(body, hole)?;
                    acc = Some(match acc {
                        None => v,
                        Some(a) => combine(a, v, false)?,
                    });
                }
                match saved {
                    Some(x) => self.loops.insert(var.clone(), x),
                    None => self.loops.remove(var),
                };
                acc.unwrap_or(Value::Scalar(PolyQ::zero()))
            }
            Expr::List(items) => {
                Value::List(items.iter().map(|x| self.scalar(x, hole)).collect::<Result<Vec<_>>>()?)
            }
        })
    }

    fn var(&self, v: &str) -> PolyQ {
        if let Some(x) = self.loops.get(v) {
            return PolyQ::int(*x);
        }
        if v == "rank" {
            return PolyQ::int(self.rank as i64);
        }
        if let Some(ix) = v.strip_prefix("lam_") {
            if let Some(n) = self.indices.get(ix) {
                return PolyQ::var(&format!("lam_{n}"));
            }
        }
        PolyQ::var(v)
    }

    fn arg(&self, args: &[Arg], k: usize, name: &str) -> Result<Expr> {
        args.get(k).map(|a| a.value.clone()).ok_or_else(|| type_err(format!("{name}: missing argument {}", k + 1)))
    }

    fn call(&mut self, name: &str, args: &[Arg], hole: Option<&State>) -> Result<Value> {
        let arity = |n: usize| -> Result<()> {
            if args.len() != n {
                return Err(type_err(format!("{name} takes {n} arguments, got {}", args.len())));
            }
            Ok(())
        };
        Ok(match name {
            "star" | "circ" => {
                arity(2)?;
                let a = self.state(&args[0].value, hole)?;
                let b = self.state(&args[1].value, hole)?;
                Value::State(if name == "star" { star(&a, &b)? } else { circ(&a, &b)? })
            }
            "theta" => {
                arity(1)?;
                Value::State(self.state(&args[0].value, hole)?.theta()?)
            }
            "binom" => {
                arity(2)?;
                let n = self.scalar(&args[0].value, hole)?;
                let k = self.integer(&args[1].value)?;
                if k < 0 {
                    return Ok(Value::Scalar(PolyQ::zero()));
                }
                Value::Scalar(binomial_poly(&n, k as u32)?)
            }
            "gpoly" => {
                arity(3)?;
                let a = self.scalar(&args[0].value, hole)?;
                let b = self.scalar(&args[1].value, hole)?;
                let Expr::Var(x) = &args[2].value else {
                    return Err(type_err("gpoly: third argument must be a variable"));
                };
                let x = Var::new(x);
                Value::Scalar(g_poly(&UniPoly::from_poly(&a, x), &UniPoly::from_poly(&b, x))?.to_poly())
            }
            "subst" => {
                let first = self.arg(args, 0, name)?;
                let p = self.eval(&first, hole)?;
                let mut assign = Vec::new();
                for a in &args[1..] {
                    let v = a.name.as_ref().ok_or_else(|| type_err("subst: assignments must be named"))?;
                    assign.push((Var::new(v), self.scalar(&a.value, hole)?));
                }
                match p {
                    Value::Scalar(p) => Value::Scalar(p.subs(&assign)),
                    Value::List(v) => Value::List(v.iter().map(|p| p.subs(&assign)).collect()),
                    Value::State(s) => Value::State(s.map_coeffs(|c| c.subs(&assign))),
                }
            }
            "constraint" => {
                arity(1)?;
                let rel = self.boundary_expr_of(&args[0].value)?;
                let set = derive_constraints(&[(String::new(), rel)], &GenericVectorSpec::symbolic())?;
                Value::List(set.equations[0].coeffs.clone())
            }
            "eliminant" => {
                arity(3)?;
                let rels = args
                    .iter()
                    .map(|a| Ok((a.value.to_string(), self.boundary_expr_of(&a.value)?)))
                    .collect::<Result<Vec<_>>>()?;
                let set = derive_constraints(&rels, &GenericVectorSpec::symbolic())?;
                Value::Scalar(eliminate(&set, [0, 1, 2])?.poly)
            }
            "delta" => {
                arity(1)?;
                let n = self.integer(&args[0].value)?;
                Value::Scalar(standard_delta(&PolyQ::var(EPS), n))
            }
            "cmn" => {
                arity(2)?;
                let m = self.integer(&args[0].value)?;
                let n = self.integer(&args[1].value)?;
                if m < 0 || n < 0 {
                    return Err(type_err("cmn: indices must be nonnegative"));
                }
                Value::Scalar(PolyQ::constant(c_coeffs((m + n) as u32).get(m as u32, n as u32)))
            }
            _ => return Err(type_err(format!("unknown function '{name}'"))),
        })
    }

    /// `R[n] ugen`: the top action of a relation on the generic vector, n = eps - 2 + wt R.
    fn boundary_word(&mut self, head: &Expr, n: &Expr) -> Result<Value> {
        let rel = self.boundary_expr_of(head)?;
        let n = self.scalar(n, None)?;
        let top = &PolyQ::var(EPS) + &PolyQ::int(rel.weight()? - 2);
        if n != top {
            return Err(type_err(format!("boundary words are read at the top index {top}, not {n}")));
        }
        let set = derive_constraints(&[(String::new(), rel)], &GenericVectorSpec::symbolic())?;
        Ok(Value::List(set.equations[0].coeffs.clone()))
    }

    /// Reads an expression in the spanning forms L(-1)^p a_{-q} S(i,j;1,r) for the pair of the record.
    pub fn boundary_expr_of(&mut self, e: &Expr) -> Result<BoundaryExpr> {
        let mut terms = Vec::new();
        self.collect_forms(e, &Rat::one(), &mut terms)?;
        BoundaryExpr::new(terms)
    }

    fn collect_forms(&mut self, e: &Expr, c: &Rat, out: &mut Vec<(Form, Rat)>) -> Result<()> {
        match e {
            Expr::Add(a, b) => {
                self.collect_forms(a, c, out)?;
                self.collect_forms(b, c, out)
            }
            Expr::Sub(a, b) => {
                self.collect_forms(a, c, out)?;
                self.collect_forms(b, &-c, out)
            }
            Expr::Neg(a) => self.collect_forms(a, &-c, out),
            Expr::Mul(a, b) => match (self.try_rational(a), self.try_rational(b)) {
                (Some(x), _) => self.collect_forms(b, &(c * x), out),
                (_, Some(x)) => self.collect_forms(a, &(c * x), out),
                _ => Err(Error::BoundaryShape(format!("{e}"))),
            },
            Expr::Ref(name) => {
                let body = self.defs.get(name).ok_or_else(|| type_err(format!("unknown definition '{name}'")))?.clone();
                self.collect_forms(&body, c, out)
            }
            _ => {
                out.push((self.form_of(e)?, c.clone()));
                Ok(())
            }
        }
    }

    fn try_rational(&mut self, e: &Expr) -> Option<Rat> {
        match e {
            Expr::Num(_) | Expr::Neg(_) | Expr::Div(..) | Expr::Var(_) => self.rational(e).ok(),
            _ => None,
        }
    }

    fn form_of(&mut self, e: &Expr) -> Result<Form> {
        let shape = || Error::BoundaryShape(format!("{e}"));
        let (items, term): (&[OpItem], &Expr) = match e {
            Expr::Chain(items, Some(t)) => (items, t),
            _ => (&[], e),
        };
        let (i, j) = match term {
            Expr::Elem(ElemAtom::S { i, j, r: 1, .. }) => (self.idx(i)?, self.idx(j)?),
            _ => return Err(shape()),
        };
        let r = match term {
            Expr::Elem(ElemAtom::S { s, .. }) => *s,
            _ => unreachable!(),
        };
        let mut lm1 = 0;
        let mut left = None;
        for item in items.iter().rev() {
            let OpItem::Mode(head, n) = item else { return Err(shape()) };
            let n = self.integer(n)?;
            let Expr::Elem(a) = &**head else { return Err(shape()) };
            match (self.gen_name(a)?, n) {
                (GenName::OmegaTotal, 0) => lm1 += 1,
                (g, n) if n < 0 && left.is_none() && lm1 == 0 => {
                    let (kind, k) = match g {
                        GenName::Omega(k) => (DiagKind::Omega, k),
                        GenName::H(k) => (DiagKind::H, k),
                        _ => return Err(shape()),
                    };
                    let side = if k == i {
                        Side::I
                    } else if k == j {
                        Side::J
                    } else {
                        return Err(shape());
                    };
                    left = Some((DiagGen { kind, side }, (-n) as u32));
                }
                _ => return Err(shape()),
            }
        }
        Ok(Form { lm1, left, r })
    }
}

fn scale(v: Value, c: &PolyQ) -> Value {
    match v {
        Value::Scalar(p) => Value::Scalar(&p * c),
        Value::State(s) => Value::State(s.scale(c)),
        Value::List(l) => Value::List(l.iter().map(|p| p * c).collect()),
    }
}

fn combine(a: Value, b: Value, sub: bool) -> Result<Value> {
    let b = if sub { scale(b, &PolyQ::int(-1)) } else { b };
    Ok(match (a, b) {
        (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(&x + &y),
        (Value::State(x), Value::State(y)) => Value::State(x.checked_add(&y)?),
        (Value::State(x), Value::Scalar(y)) | (Value::Scalar(y), Value::State(x)) if y.is_zero() => Value::State(x),
        (Value::List(x), Value::List(y)) if x.len() == y.len() => {
            Value::List(x.iter().zip(&y).map(|(p, q)| p + q).collect())
        }
        (x, y) => return Err(type_err(format!("cannot add a {} and a {}", x.kind_name(), y.kind_name()))),
    })
}

/// Reads a state written in the catalog language, e.g. `h(1,-1) h(2,-2) vac` or `omega(1)[-1] |0>`.
pub fn parse_state(text: &str, rank: usize) -> Result<State> {
    let defs = HashMap::new();
    let scope_defs = Default::default();
    let e = super::parse::parse_expr(text, &super::parse::Scope { indices: &[], defs: &scope_defs })?;
    let mut env = Env::new(rank, HashMap::new(), &defs);
    match env.eval(&e, None)? {
        Value::State(s) => Ok(s),
        v => Err(type_err(format!("expected a state, found a {}", v.kind_name()))),
    }
}

/// Parses and evaluates a closed expression at a rank.
pub fn eval_text(text: &str, rank: usize) -> Result<Value> {
    let defs = HashMap::new();
    let scope_defs = Default::default();
    let e = super::parse::parse_expr(text, &super::parse::Scope { indices: &[], defs: &scope_defs })?;
    Env::new(rank, HashMap::new(), &defs).eval(&e, None)
}

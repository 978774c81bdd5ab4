//! Syntax trees of the identity catalog and their canonical rendering.

use std::fmt;

use crate::exactalg::{fmt_rat, Rat};

/// A generator index: a declared index variable or a literal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Idx {
    Var(String),
    Lit(usize),
}

impl fmt::Display for Idx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Idx::Var(v) => f.write_str(v),
            Idx::Lit(n) => write!(f, "{n}"),
        }
    }
}

/// Named elements of the vacuum module.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ElemAtom {
    Omega(Idx),
    OmegaTotal,
    H(Idx),
    J(Idx),
    S { i: Idx, j: Idx, r: u32, s: u32 },
    Eu(Idx, Idx),
    Et(Idx, Idx),
    Lambda(Idx, Idx),
}

impl ElemAtom {
    /// Short tag used in record ids, e.g. `Sij11`, `wj`, `Hi`.
    pub fn slug(&self) -> String {
        match self {
            ElemAtom::Omega(i) => format!("w{i}"),
            ElemAtom::OmegaTotal => "w".into(),
            ElemAtom::H(i) => format!("H{i}"),
            ElemAtom::J(i) => format!("J{i}"),
            ElemAtom::S { i, j, r, s } => format!("S{i}{j}{r}{s}"),
            ElemAtom::Eu(i, j) => format!("Eu{i}{j}"),
            ElemAtom::Et(i, j) => format!("Et{i}{j}"),
            ElemAtom::Lambda(i, j) => format!("Lambda{i}{j}"),
        }
    }
}

impl fmt::Display for ElemAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElemAtom::Omega(i) => write!(f, "omega({i})"),
            ElemAtom::OmegaTotal => write!(f, "omega"),
            ElemAtom::H(i) => write!(f, "H({i})"),
            ElemAtom::J(i) => write!(f, "J({i})"),
            ElemAtom::S { i, j, r, s } => write!(f, "S({i},{j};{r},{s})"),
            ElemAtom::Eu(i, j) => write!(f, "Eu({i},{j})"),
            ElemAtom::Et(i, j) => write!(f, "Et({i},{j})"),
            ElemAtom::Lambda(i, j) => write!(f, "Lambda({i},{j})"),
        }
    }
}

/// Base vectors of the modules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Base {
    /// vacuum of M(1)
    Vac,
    /// vacuum of the twisted module
    VacTw,
    /// e^lam with symbolic lam
    ExpLam,
    /// e^lam with lam_k = t_k to first order in the t's
    Nilpotent,
    /// the generic vector of the boundary calculus
    Generic,
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Base::Vac => "vac",
            Base::VacTw => "vactw",
            Base::ExpLam => "exp(lam)",
            Base::Nilpotent => "u",
            Base::Generic => "ugen",
        })
    }
}

/// One left action in a chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OpItem {
    /// elem[index]
    Mode(Box<Expr>, Box<Expr>),
    /// h(i, n)
    Heis(Idx, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(Rat),
    /// polynomial indeterminate, loop variable or `rank`
    Var(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    /// Left actions applied right to left; without a terminal the chain is an operator.
    Chain(Vec<OpItem>, Option<Box<Expr>>),
    Base(Base),
    Elem(ElemAtom),
    Ref(String),
    /// [A, B] acting on the state under test
    Bracket(Box<Expr>, Box<Expr>),
    Call(String, Vec<Arg>),
    Sum { var: String, lo: Box<Expr>, hi: Box<Expr>, body: Box<Expr> },
    List(Vec<Expr>),
}

/// A call argument, optionally `name=value`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arg {
    pub name: Option<String>,
    pub value: Expr,
}

impl Expr {
    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Chain(..) => 3,
            _ => 5,
        }
    }

    fn is_terminal_atom(&self) -> bool {
        matches!(self, Expr::Base(_) | Expr::Elem(_) | Expr::Ref(_) | Expr::Call(..) | Expr::Bracket(..) | Expr::List(_))
    }

    fn is_mode_head(&self) -> bool {
        matches!(self, Expr::Elem(_) | Expr::Ref(_))
    }
}

fn paren(e: &Expr, f: &mut fmt::Formatter<'_>, wrap: bool) -> fmt::Result {
    if wrap {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for OpItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpItem::Mode(e, n) => {
                paren(e, f, !e.is_mode_head())?;
                write!(f, "[{n}]")
            }
            OpItem::Heis(i, n) => write!(f, "h({i},{n})"),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(r) => {
                let s = fmt_rat(r);
                if s.starts_with('-') || s.contains('/') {
                    write!(f, "({s})")
                } else {
                    f.write_str(&s)
                }
            }
            Expr::Var(v) => f.write_str(v),
            Expr::Add(a, b) => {
                write!(f, "{a} + ")?;
                paren(b, f, b.prec() <= 1)
            }
            Expr::Sub(a, b) => {
                write!(f, "{a} - ")?;
                paren(b, f, b.prec() <= 1)
            }
            Expr::Neg(a) => {
                f.write_str("-")?;
                paren(a, f, a.prec() < 3 || matches!(**a, Expr::Neg(_)))
            }
            Expr::Mul(a, b) => {
                paren(a, f, a.prec() < 2)?;
                f.write_str("*")?;
                paren(b, f, b.prec() <= 2 && !matches!(**b, Expr::Chain(..)) || matches!(**b, Expr::Neg(_)))
            }
            Expr::Div(a, b) => {
                paren(a, f, a.prec() < 2)?;
                f.write_str("/")?;
                paren(b, f, b.prec() <= 3)
            }
            Expr::Pow(a, e) => {
                paren(a, f, a.prec() < 5)?;
                write!(f, "^{e}")
            }
            Expr::Chain(items, term) => {
                let parts: Vec<String> = items.iter().map(|i| i.to_string()).collect();
                f.write_str(&parts.join(" "))?;
                if let Some(t) = term {
                    f.write_str(" ")?;
                    paren(t, f, !t.is_terminal_atom())?;
                }
                Ok(())
            }
            Expr::Base(b) => write!(f, "{b}"),
            Expr::Elem(e) => write!(f, "{e}"),
            Expr::Ref(r) => f.write_str(r),
            Expr::Bracket(a, b) => write!(f, "[{a}, {b}]"),
            Expr::Call(name, args) => {
                let parts: Vec<String> = args
                    .iter()
                    .map(|a| match &a.name {
                        Some(n) => format!("{n}={}", a.value),
                        None => a.value.to_string(),
                    })
                    .collect();
                write!(f, "{name}({})", parts.join(", "))
            }
            Expr::Sum { var, lo, hi, body } => write!(f, "sum({var}={lo}..{hi}, {body})"),
            Expr::List(items) => {
                let parts: Vec<String> = items.iter().map(|i| i.to_string()).collect();
                write!(f, "<{}>", parts.join(", "))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Product,
    Commutator,
    RelationZero,
    Eigen,
    ZhuMember,
    BoundaryPoly,
    Twisted,
    Verma,
    Poly,
}

impl Kind {
    pub const ALL: [Kind; 9] = [
        Kind::Product,
        Kind::Commutator,
        Kind::RelationZero,
        Kind::Eigen,
        Kind::ZhuMember,
        Kind::BoundaryPoly,
        Kind::Twisted,
        Kind::Verma,
        Kind::Poly,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Kind::Product => "product",
            Kind::Commutator => "commutator",
            Kind::RelationZero => "relationZero",
            Kind::Eigen => "eigen",
            Kind::ZhuMember => "zhuMember",
            Kind::BoundaryPoly => "boundaryPoly",
            Kind::Twisted => "twisted",
            Kind::Verma => "verma",
            Kind::Poly => "poly",
        }
    }

    pub fn parse(s: &str) -> Option<Kind> {
        Kind::ALL.into_iter().find(|k| k.name() == s)
    }

    /// Kinds whose record has a single side compared with zero.
    pub fn single_sided(&self) -> bool {
        matches!(self, Kind::RelationZero | Kind::ZhuMember)
    }
}

/// Module whose monomial basis a commutator record is tested on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisKind {
    Vac,
    Exp,
    Tw,
}

impl BasisKind {
    pub fn name(&self) -> &'static str {
        match self {
            BasisKind::Vac => "vac",
            BasisKind::Exp => "exp",
            BasisKind::Tw => "tw",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RecordOptions {
    /// explicit id
    pub id: Option<String>,
    /// loop variables with inclusive ranges
    pub loops: Vec<(String, i64, i64)>,
    /// weight bound for spans and bases
    pub weight: Option<i64>,
    /// rank override
    pub rank: Option<usize>,
    pub basis: Option<BasisKind>,
}

impl RecordOptions {
    pub fn is_empty(&self) -> bool {
        *self == RecordOptions::default()
    }
}

impl fmt::Display for RecordOptions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(id) = &self.id {
            parts.push(format!("id={id}"));
        }
        if let Some(r) = self.rank {
            parts.push(format!("rank={r}"));
        }
        if let Some(w) = self.weight {
            parts.push(format!("weight={w}"));
        }
        if let Some(b) = self.basis {
            parts.push(format!("on={}", b.name()));
        }
        for (v, lo, hi) in &self.loops {
            parts.push(format!("{v}={lo}..{hi}"));
        }
        write!(f, "({})", parts.join(", "))
    }
}

/// One catalog entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityRecord {
    pub id: String,
    pub suite: String,
    pub kind: Kind,
    /// compare up to a nonzero rational factor
    pub assoc: bool,
    /// an input assumption rather than a derived identity
    pub axiom: bool,
    pub options: RecordOptions,
    pub lhs: Expr,
    pub rhs: Option<Expr>,
    pub index_vars: Vec<String>,
    pub anchor: String,
    pub line: usize,
}

impl IdentityRecord {
    pub fn render(&self) -> String {
        let mut s = format!("check {}", self.kind.name());
        if self.assoc {
            s.push_str(" assoc");
        }
        if self.axiom {
            s.push_str(" axiom");
        }
        if !self.options.is_empty() {
            s.push_str(&format!(" {}", self.options));
        }
        s.push_str(&format!(": {}", self.lhs));
        if let Some(r) = &self.rhs {
            s.push_str(&format!(" == {r}"));
        }
        s
    }
}

/// Top-level items in file order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Suite(String),
    Indices(Vec<String>),
    Note(String),
    Def(String, Expr),
    Check(IdentityRecord),
}

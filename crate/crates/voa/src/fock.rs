//! Fock-space states for M(1), M(1,lam) and M(1)(theta), with the theta involution,
//! weights, parity patterns and the named generators of M(1)^+.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::exactalg::{fmt_rat, rat, rat_int, PolyQ, Rat};

/// A half-integer stored doubled: `Half(3)` is 3/2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Half(pub i64);

impl Half {
    pub fn int(n: i64) -> Half {
        Half(2 * n)
    }

    pub fn is_integer(&self) -> bool {
        self.0 % 2 == 0
    }

    pub fn as_integer(&self) -> Option<i64> {
        self.is_integer().then_some(self.0 / 2)
    }

    pub fn to_rat(&self) -> Rat {
        rat(self.0, 2)
    }

    pub fn parse(s: &str) -> Option<Half> {
        let s = s.trim();
        match s.split_once('/') {
            Some((n, "2")) => n.trim().parse::<i64>().ok().filter(|n| n % 2 != 0).map(Half),
            Some(_) => None,
            None => s.parse::<i64>().ok().map(Half::int),
        }
    }
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// h^[gen](-deg2/2), with generators numbered from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CreationOp {
    pub gen: u16,
    pub deg2: u16,
}

/// Sorted multiset of creation operators.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    ops: Vec<CreationOp>,
}

impl Monomial {
    pub fn new(mut ops: Vec<CreationOp>) -> Monomial {
        ops.sort();
        Monomial { ops }
    }

    pub fn vacuum() -> Monomial {
        Monomial::default()
    }

    pub fn ops(&self) -> &[CreationOp] {
        &self.ops
    }

    pub fn with(&self, op: CreationOp) -> Monomial {
        let pos = self.ops.partition_point(|o| *o <= op);
        let mut ops = Vec::with_capacity(self.ops.len() + 1);
        ops.extend_from_slice(&self.ops[..pos]);
        ops.push(op);
        ops.extend_from_slice(&self.ops[pos..]);
        Monomial { ops }
    }

    /// Removes one copy of `op`, returning its multiplicity before removal.
    pub fn without(&self, op: CreationOp) -> Option<(Monomial, usize)> {
        let count = self.ops.iter().filter(|o| **o == op).count();
        if count == 0 {
            return None;
        }
        let pos = self.ops.iter().position(|o| *o == op).unwrap();
        let mut ops = self.ops.clone();
        ops.remove(pos);
        Some((Monomial { ops }, count))
    }

    pub fn concat(&self, other: &Monomial) -> Monomial {
        let mut ops = self.ops.clone();
        ops.extend_from_slice(&other.ops);
        Monomial::new(ops)
    }

    /// Twice the total creation degree.
    pub fn degree2(&self) -> i64 {
        self.ops.iter().map(|o| o.deg2 as i64).sum()
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn max_gen(&self) -> u16 {
        self.ops.iter().map(|o| o.gen).max().unwrap_or(0)
    }

    fn render(&self) -> String {
        let mut out = Vec::new();
        let mut k = 0;
        while k < self.ops.len() {
            let op = self.ops[k];
            let mut e = 1;
            while k + e < self.ops.len() && self.ops[k + e] == op {
                e += 1;
            }
            let d = Half(-(op.deg2 as i64));
            if e == 1 {
                out.push(format!("h[{}]({})", op.gen, d));
            } else {
                out.push(format!("h[{}]({})^{}", op.gen, d, e));
            }
            k += e;
        }
        out.join("*")
    }
}

/// Set of generator indices occurring an odd number of times.
pub fn parity_pattern(m: &Monomial) -> BTreeSet<u16> {
    let mut set = BTreeSet::new();
    for op in m.ops() {
        if !set.remove(&op.gen) {
            set.insert(op.gen);
        }
    }
    set
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ModuleKind {
    Vacuum { rank: usize },
    Exp { lam: Vec<PolyQ> },
    Twisted { rank: usize },
}

impl ModuleKind {
    /// M(1,lam) with symbolic components lam_1 .. lam_d.
    pub fn exp_symbolic(rank: usize) -> ModuleKind {
        ModuleKind::Exp { lam: (1..=rank).map(|i| PolyQ::var(&format!("lam_{i}"))).collect() }
    }

    pub fn rank(&self) -> usize {
        match self {
            ModuleKind::Vacuum { rank } | ModuleKind::Twisted { rank } => *rank,
            ModuleKind::Exp { lam } => lam.len(),
        }
    }

    pub fn is_twisted(&self) -> bool {
        matches!(self, ModuleKind::Twisted { .. })
    }

    pub fn is_vacuum(&self) -> bool {
        matches!(self, ModuleKind::Vacuum { .. })
    }

    /// Weight of the base vector.
    pub fn base_weight(&self) -> PolyQ {
        match self {
            ModuleKind::Vacuum { .. } => PolyQ::zero(),
            ModuleKind::Exp { lam } => {
                let mut w = PolyQ::zero();
                for l in lam {
                    w += &(l * l);
                }
                w.scale(&rat(1, 2))
            }
            ModuleKind::Twisted { rank } => PolyQ::constant(rat(*rank as i64, 16)),
        }
    }

    fn same_space(&self, other: &ModuleKind) -> bool {
        match (self, other) {
            (ModuleKind::Vacuum { .. }, ModuleKind::Vacuum { .. }) => true,
            (ModuleKind::Twisted { .. }, ModuleKind::Twisted { .. }) => true,
            (a, b) => a == b,
        }
    }

    fn merged(&self, other: &ModuleKind) -> ModuleKind {
        match (self, other) {
            (ModuleKind::Vacuum { rank: a }, ModuleKind::Vacuum { rank: b }) => ModuleKind::Vacuum { rank: *a.max(b) },
            (ModuleKind::Twisted { rank: a }, ModuleKind::Twisted { rank: b }) => {
                ModuleKind::Twisted { rank: *a.max(b) }
            }
            (a, _) => a.clone(),
        }
    }

    fn base_symbol(&self) -> &'static str {
        match self {
            ModuleKind::Vacuum { .. } => "|0>",
            ModuleKind::Exp { .. } => "|lam>",
            ModuleKind::Twisted { .. } => "|tw>",
        }
    }
}

/// Sparse combination of Fock monomials over one base vector.
#[derive(Clone)]
pub struct State {
    module: ModuleKind,
    terms: BTreeMap<Monomial, PolyQ>,
}

impl PartialEq for State {
    fn eq(&self, other: &State) -> bool {
        self.module.same_space(&other.module) && self.terms == other.terms
    }
}

impl Eq for State {}

/// A state of the vacuum module, acting on other modules through its modes.
pub type VAElement = State;

impl State {
    pub fn zero(module: ModuleKind) -> State {
        State { module, terms: BTreeMap::new() }
    }

    pub fn base(module: ModuleKind) -> State {
        State::monomial(module, Monomial::vacuum(), PolyQ::one())
    }

    pub fn vac(rank: usize) -> State {
        State::base(ModuleKind::Vacuum { rank })
    }

    pub fn vac_tw(rank: usize) -> State {
        State::base(ModuleKind::Twisted { rank })
    }

    pub fn exp_lam(rank: usize) -> State {
        State::base(ModuleKind::exp_symbolic(rank))
    }

    pub fn monomial(module: ModuleKind, m: Monomial, c: PolyQ) -> State {
        let mut s = State::zero(module);
        s.add_term(m, c);
        s
    }

    pub fn module(&self) -> &ModuleKind {
        &self.module
    }

    pub fn with_module(mut self, module: ModuleKind) -> State {
        self.module = module;
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &PolyQ)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> PolyQ {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial, c: PolyQ) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &State, c: &PolyQ) {
        if c.is_zero() {
            return;
        }
        assert!(self.module.same_space(&other.module), "states live in different modules");
        self.module = self.module.merged(&other.module);
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn add(&self, other: &State) -> State {
        let mut out = self.clone();
        out.add_scaled(other, &PolyQ::one());
        out
    }

    pub fn sub(&self, other: &State) -> State {
        let mut out = self.clone();
        out.add_scaled(other, &PolyQ::int(-1));
        out
    }

    pub fn scale(&self, c: &PolyQ) -> State {
        let mut out = State::zero(self.module.clone());
        out.add_scaled(self, c);
        out
    }

    pub fn scale_rat(&self, c: &Rat) -> State {
        self.scale(&PolyQ::constant(c.clone()))
    }

    pub fn checked_add(&self, other: &State) -> Result<State> {
        if !self.module.same_space(&other.module) {
            return Err(Error::ModuleMismatch);
        }
        Ok(self.add(other))
    }

    /// Applies a function to every coefficient, dropping zeros.
    pub fn map_coeffs(&self, f: impl Fn(&PolyQ) -> PolyQ) -> State {
        let mut out = State::zero(self.module.clone());
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Distinct doubled creation degrees present.
    pub fn degrees2(&self) -> BTreeSet<i64> {
        self.terms.keys().map(|m| m.degree2()).collect()
    }

    /// Common doubled creation degree of a homogeneous state.
    pub fn degree2(&self) -> Result<i64> {
        let ds = self.degrees2();
        match ds.len() {
            0 => Ok(0),
            1 => Ok(*ds.iter().next().unwrap()),
            _ => Err(Error::Inhomogeneous(ds.iter().map(|d| Half(*d).to_string()).collect())),
        }
    }

    /// L(0)-weight including the base vector weight.
    pub fn weight(&self) -> Result<PolyQ> {
        let d = self.degree2()?;
        Ok(&PolyQ::constant(rat(d, 2)) + &self.module.base_weight())
    }

    /// Integer weight of a homogeneous element of the vacuum module.
    pub fn vacuum_weight(&self) -> Result<i64> {
        if !self.module.is_vacuum() {
            return Err(Error::NotVacuum);
        }
        Ok(self.degree2()? / 2)
    }

    /// Splits into homogeneous components keyed by doubled creation degree.
    pub fn components(&self) -> BTreeMap<i64, State> {
        let mut out: BTreeMap<i64, State> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree2())
                .or_insert_with(|| State::zero(self.module.clone()))
                .add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn theta(&self) -> Result<State> {
        if matches!(self.module, ModuleKind::Exp { .. }) {
            return Err(Error::ThetaOnExp);
        }
        Ok(self.map_signed(|m| m.len() % 2 == 1))
    }

    fn map_signed(&self, negate: impl Fn(&Monomial) -> bool) -> State {
        let mut out = State::zero(self.module.clone());
        for (m, c) in &self.terms {
            out.add_term(m.clone(), if negate(m) { -c } else { c.clone() });
        }
        out
    }

    /// (s + sign theta(s)) / 2.
    pub fn project_plus_minus(&self, plus: bool) -> Result<State> {
        let t = self.theta()?;
        let mut out = if plus { self.add(&t) } else { self.sub(&t) };
        out = out.scale_rat(&rat(1, 2));
        Ok(out)
    }

    /// Union of the parity patterns of all monomials.
    pub fn parity_patterns(&self) -> BTreeSet<BTreeSet<u16>> {
        self.terms.keys().map(parity_pattern).collect()
    }

    /// Largest generator index appearing.
    pub fn max_gen(&self) -> u16 {
        self.terms.keys().map(|m| m.max_gen()).max().unwrap_or(0)
    }

    /// Truncates coefficients with respect to nilpotent indeterminates.
    pub fn truncate(&self, vars: &[crate::exactalg::Var], limit: u32) -> State {
        self.map_coeffs(|c| c.truncate(vars, limit))
    }

    /// True when the two states differ by a nonzero rational factor.
    pub fn associate_eq(&self, other: &State) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        let (m, a) = self.terms.iter().next().unwrap();
        let b = other.coeff(m);
        let (Some((ma, ca)), Some((mb, cb))) = (a.leading(), b.leading()) else {
            return false;
        };
        if ma != mb {
            return false;
        }
        self.scale_rat(&(cb / ca)) == *other
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let base = self.module.base_symbol();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let body = if m.is_empty() { base.to_string() } else { format!("{}{}", m.render(), base) };
            match c.as_constant() {
                Some(r) => {
                    let neg = r.is_negative();
                    let a = r.abs();
                    if k > 0 {
                        f.write_str(if neg { " - " } else { " + " })?;
                    } else if neg {
                        f.write_str("-")?;
                    }
                    if a.is_one() {
                        f.write_str(&body)?;
                    } else {
                        write!(f, "{}*{}", fmt_rat(&a), body)?;
                    }
                }
                None => {
                    if k > 0 {
                        f.write_str(" + ")?;
                    }
                    write!(f, "({})*{}", c, body)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

fn op(gen: usize, deg: i64) -> CreationOp {
    CreationOp { gen: gen as u16, deg2: (2 * deg) as u16 }
}

/// h^[gen1](-d1) h^[gen2](-d2) ... vac with integer degrees.
pub fn vacuum_monomial(rank: usize, ops: &[(usize, i64)], c: Rat) -> State {
    let m = Monomial::new(ops.iter().map(|&(g, d)| op(g, d)).collect());
    State::monomial(ModuleKind::Vacuum { rank }, m, PolyQ::constant(c))
}

/// Names of the distinguished elements of M(1)^+.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GenName {
    Omega(usize),
    OmegaTotal,
    H(usize),
    J(usize),
    S { i: usize, j: usize, r: u32, s: u32 },
    Eu(usize, usize),
    Et(usize, usize),
    Lambda(usize, usize),
}

impl GenName {
    /// Parses `omega_1`, `omega`, `H_2`, `J_1`, `S(1,2;1,3)`, `Eu(1,2)`, `Et(1,2)`, `Lambda(1,2)`.
    pub fn parse(s: &str) -> Result<GenName> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::UnknownGenerator(s.clone());
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        if s == "omega" {
            return Ok(GenName::OmegaTotal);
        }
        if let Some(rest) = s.strip_prefix("omega_") {
            return Ok(GenName::Omega(num(rest)?));
        }
        if let Some(rest) = s.strip_prefix("H_") {
            return Ok(GenName::H(num(rest)?));
        }
        if let Some(rest) = s.strip_prefix("J_") {
            return Ok(GenName::J(num(rest)?));
        }
        let args = |p: &str| -> Option<String> { s.strip_prefix(p)?.strip_suffix(')').map(|x| x.to_string()) };
        if let Some(a) = args("S(") {
            let (ij, rs) = a.split_once(';').ok_or_else(bad)?;
            let (i, j) = ij.split_once(',').ok_or_else(bad)?;
            let (r, t) = rs.split_once(',').ok_or_else(bad)?;
            return Ok(GenName::S { i: num(i)?, j: num(j)?, r: num(r)? as u32, s: num(t)? as u32 });
        }
        for (p, k) in [("Eu(", 0), ("Et(", 1), ("Lambda(", 2)] {
            if let Some(a) = args(p) {
                let (i, j) = a.split_once(',').ok_or_else(bad)?;
                let (i, j) = (num(i)?, num(j)?);
                return Ok(match k {
                    0 => GenName::Eu(i, j),
                    1 => GenName::Et(i, j),
                    _ => GenName::Lambda(i, j),
                });
            }
        }
        Err(bad())
    }
}

impl fmt::Display for GenName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenName::Omega(i) => write!(f, "omega_{i}"),
            GenName::OmegaTotal => write!(f, "omega"),
            GenName::H(i) => write!(f, "H_{i}"),
            GenName::J(i) => write!(f, "J_{i}"),
            GenName::S { i, j, r, s } => write!(f, "S({i},{j};{r},{s})"),
            GenName::Eu(i, j) => write!(f, "Eu({i},{j})"),
            GenName::Et(i, j) => write!(f, "Et({i},{j})"),
            GenName::Lambda(i, j) => write!(f, "Lambda({i},{j})"),
        }
    }
}

fn check_index(i: usize, rank: usize) -> Result<()> {
    if i == 0 || i > rank {
        return Err(Error::BadIndex(format!("index {i} not in 1..{rank}")));
    }
    Ok(())
}

fn check_pair(i: usize, j: usize, rank: usize) -> Result<()> {
    check_index(i, rank)?;
    check_index(j, rank)?;
    if i == j {
        return Err(Error::BadIndex(format!("pair ({i},{j}) must be distinct")));
    }
    Ok(())
}

fn s_combo(i: usize, j: usize, rank: usize, cs: [i64; 4]) -> State {
    let mut out = State::zero(ModuleKind::Vacuum { rank });
    for (k, c) in cs.iter().enumerate() {
        out.add_scaled(&vacuum_monomial(rank, &[(i, 1), (j, k as i64 + 2)], Rat::one()), &PolyQ::int(*c));
    }
    out
}

/// Exact Fock expression of a named element.
pub fn generator(name: &GenName, rank: usize) -> Result<VAElement> {
    Ok(match *name {
        GenName::Omega(i) => {
            check_index(i, rank)?;
            vacuum_monomial(rank, &[(i, 1), (i, 1)], rat(1, 2))
        }
        GenName::OmegaTotal => {
            let mut out = State::zero(ModuleKind::Vacuum { rank });
            for i in 1..=rank {
                out = out.add(&generator(&GenName::Omega(i), rank)?);
            }
            out
        }
        GenName::H(i) => {
            check_index(i, rank)?;
            vacuum_monomial(rank, &[(i, 3), (i, 1)], rat(1, 3)).sub(&vacuum_monomial(rank, &[(i, 2), (i, 2)], rat(1, 3)))
        }
        GenName::J(i) => {
            check_index(i, rank)?;
            let w = generator(&GenName::Omega(i), rank)?;
            let h = generator(&GenName::H(i), rank)?;
            let ww = crate::vertex::n_product(&w, -1, &w)?;
            let w3 = crate::vertex::n_product(&w, -3, &State::vac(rank))?;
            h.scale_rat(&rat_int(-9)).add(&ww.scale_rat(&rat_int(4))).sub(&w3.scale_rat(&rat_int(3)))
        }
        GenName::S { i, j, r, s } => {
            check_pair(i, j, rank)?;
            if r == 0 || s == 0 {
                return Err(Error::BadIndex(format!("S({i},{j};{r},{s}) needs positive degrees")));
            }
            vacuum_monomial(rank, &[(i, r as i64), (j, s as i64)], Rat::one())
        }
        GenName::Eu(i, j) => {
            check_pair(i, j, rank)?;
            s_combo(i, j, rank, [5, 25, 36, 16])
        }
        GenName::Et(i, j) => {
            check_pair(i, j, rank)?;
            s_combo(i, j, rank, [-16, 145, 19, 8])
        }
        GenName::Lambda(i, j) => {
            check_pair(i, j, rank)?;
            s_combo(i, j, rank, [45, 190, 240, 96])
        }
    })
}

/// Convenience lookup by textual name.
pub fn generator_named(name: &str, rank: usize) -> Result<VAElement> {
    generator(&GenName::parse(name)?, rank)
}

/// Twisted basis state h^[gen](-deg2/2) ... vac_tw.
pub fn twisted_monomial(rank: usize, ops: &[(usize, i64)], c: Rat) -> State {
    let m = Monomial::new(ops.iter().map(|&(g, d2)| CreationOp { gen: g as u16, deg2: d2 as u16 }).collect());
    State::monomial(ModuleKind::Twisted { rank }, m, PolyQ::constant(c))
}

/// All monomials in `rank` generators of doubled degree exactly `deg2`, parts from `parts2`.
pub fn monomials_of_degree(rank: usize, deg2: i64, parts2: &[i64]) -> Vec<Monomial> {
    let mut ops: Vec<CreationOp> = Vec::new();
    for g in 1..=rank {
        for &p in parts2 {
            ops.push(CreationOp { gen: g as u16, deg2: p as u16 });
        }
    }
    ops.sort();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(ops: &[CreationOp], start: usize, left: i64, cur: &mut Vec<CreationOp>, out: &mut Vec<Monomial>) {
        if left == 0 {
            out.push(Monomial::new(cur.clone()));
            return;
        }
        for k in start..ops.len() {
            let d = ops[k].deg2 as i64;
            if d <= left {
                cur.push(ops[k]);
                rec(ops, k, left - d, cur, out);
                cur.pop();
            }
        }
    }
    rec(&ops, 0, deg2, &mut cur, &mut out);
    out
}

/// Integer-degree monomial basis of M(1) in weight `w`.
pub fn vacuum_basis(rank: usize, w: i64) -> Vec<Monomial> {
    let parts: Vec<i64> = (1..=w).map(|p| 2 * p).collect();
    monomials_of_degree(rank, 2 * w, &parts)
}

/// Basis of the theta-even part of M(1) in weight `w`.
pub fn plus_basis(rank: usize, w: i64) -> Vec<Monomial> {
    vacuum_basis(rank, w).into_iter().filter(|m| m.len() % 2 == 0).collect()
}


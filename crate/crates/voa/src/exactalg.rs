//! Exact coefficient arithmetic: rationals, sparse multivariate polynomials over Q,
//! symbolic binomials and the pseudo-remainder chain G(A1, A2).

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rat = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgError {
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("gPoly needs at least one nonzero input")]
    BothZero,
    #[error("polynomial parse error at column {col}: {msg}")]
    Parse { col: usize, msg: String },
    #[error("binomial top must have degree at most 1, got {0}")]
    BinomialTop(String),
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `7`, `-3/4` into a rational.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rat::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rat::from_integer),
    }
}

pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn registry() -> &'static RwLock<HashMap<String, &'static str>> {
    static REG: OnceLock<RwLock<HashMap<String, &'static str>>> = OnceLock::new();
    REG.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Interned indeterminate name such as `lam_1`, `zeta_i`, `eps`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(&'static str);

impl Var {
    pub fn new(name: &str) -> Var {
        if let Some(v) = registry().read().unwrap().get(name) {
            return Var(v);
        }
        let mut w = registry().write().unwrap();
        let v = *w
            .entry(name.to_string())
            .or_insert_with(|| Box::leak(name.to_string().into_boxed_str()));
        Var(v)
    }

    pub fn name(&self) -> &'static str {
        self.0
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

/// Power product, sorted by variable with positive exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monom(Vec<(Var, u32)>);

impl Monom {
    pub fn one() -> Monom {
        Monom(Vec::new())
    }

    pub fn var(v: Var, e: u32) -> Monom {
        if e == 0 {
            Monom::one()
        } else {
            Monom(vec![(v, e)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.0.iter().find(|(w, _)| *w == v).map_or(0, |(_, e)| *e)
    }

    pub fn mul(&self, other: &Monom) -> Monom {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monom(out)
    }

    /// Removes `v` and returns the exponent it had.
    pub fn split_off(&self, v: Var) -> (Monom, u32) {
        let e = self.degree_in(v);
        (Monom(self.0.iter().copied().filter(|(w, _)| *w != v).collect()), e)
    }

    fn render(&self) -> String {
        let mut f: Vec<_> = self.0.clone();
        f.sort_by(|a, b| a.0.name().cmp(b.0.name()));
        f.iter()
            .map(|(v, e)| if *e == 1 { v.name().to_string() } else { format!("{}^{}", v, e) })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Sparse multivariate polynomial over Q with no stored zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PolyQ {
    terms: BTreeMap<Monom, Rat>,
}

impl PolyQ {
    pub fn zero() -> PolyQ {
        PolyQ::default()
    }

    pub fn one() -> PolyQ {
        PolyQ::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> PolyQ {
        let mut p = PolyQ::zero();
        if !c.is_zero() {
            p.terms.insert(Monom::one(), c);
        }
        p
    }

    pub fn int(n: i64) -> PolyQ {
        PolyQ::constant(rat_int(n))
    }

    pub fn var(name: &str) -> PolyQ {
        PolyQ::from_var(Var::new(name))
    }

    pub fn from_var(v: Var) -> PolyQ {
        PolyQ::monomial(Monom::var(v, 1), Rat::one())
    }

    pub fn monomial(m: Monom, c: Rat) -> PolyQ {
        let mut p = PolyQ::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The constant value if the polynomial has no indeterminates.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => self.terms.get(&Monom::one()).cloned(),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monom, &Rat)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monom, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> PolyQ {
        if c.is_zero() {
            return PolyQ::zero();
        }
        PolyQ { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> PolyQ {
        let mut out = PolyQ::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.degree_in(v)).max().unwrap_or(0)
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.keys().flat_map(|m| m.0.iter().map(|(v, _)| *v)).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    /// Coefficients of `v^0, v^1, ...` as polynomials in the remaining indeterminates.
    pub fn coefficients_in(&self, v: Var) -> Vec<PolyQ> {
        let mut out = vec![PolyQ::zero(); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            let (rest, e) = m.split_off(v);
            out[e as usize].add_term(rest, c.clone());
        }
        if self.is_zero() {
            out.clear();
        }
        out
    }

    /// Simultaneous substitution of indeterminates by polynomials.
    pub fn subs(&self, assign: &[(Var, PolyQ)]) -> PolyQ {
        let mut cache: HashMap<(Var, u32), PolyQ> = HashMap::new();
        let mut out = PolyQ::zero();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut factor = PolyQ::constant(c.clone());
            for &(v, e) in &m.0 {
                match assign.iter().find(|(w, _)| *w == v) {
                    Some((_, val)) => {
                        let p = cache.entry((v, e)).or_insert_with(|| val.pow(e)).clone();
                        factor = &factor * &p;
                    }
                    None => kept.push((v, e)),
                }
            }
            out += &(&factor * &PolyQ::monomial(Monom(kept), Rat::one()));
        }
        out
    }

    pub fn subs_rat(&self, v: Var, value: &Rat) -> PolyQ {
        self.subs(&[(v, PolyQ::constant(value.clone()))])
    }

    /// Positive rational c with self / c having coprime integer coefficients.
    pub fn content(&self) -> Rat {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            Rat::one()
        } else {
            Rat::new(num, den)
        }
    }

    /// Leading term under (total degree, then monomial order).
    pub fn leading(&self) -> Option<(&Monom, &Rat)> {
        self.terms.iter().max_by(|a, b| a.0.degree().cmp(&b.0.degree()).then(a.0.cmp(b.0)))
    }

    /// Content-free representative with positive leading coefficient.
    pub fn primitive(&self) -> PolyQ {
        if self.is_zero() {
            return PolyQ::zero();
        }
        let mut c = self.content();
        if self.leading().is_some_and(|(_, v)| v.is_negative()) {
            c = -c;
        }
        self.scale(&c.recip())
    }

    /// True when the two polynomials differ by a nonzero rational factor.
    pub fn associate_eq(&self, other: &PolyQ) -> bool {
        self.primitive() == other.primitive()
    }

    /// Truncates every monomial whose total degree in `vars` is at least `limit`.
    pub fn truncate(&self, vars: &[Var], limit: u32) -> PolyQ {
        PolyQ {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| vars.iter().map(|v| m.degree_in(*v)).sum::<u32>() < limit)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn parse(s: &str) -> Result<PolyQ, AlgError> {
        PolyParser { s: s.as_bytes(), pos: 0 }.parse_all()
    }
}

impl fmt::Display for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut ts: Vec<(String, u32, &Rat)> =
            self.terms.iter().map(|(m, c)| (m.render(), m.degree(), c)).collect();
        ts.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        for (k, (m, _, c)) in ts.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_empty() {
                f.write_str(&fmt_rat(&a))?;
            } else if a.is_one() {
                f.write_str(m)?;
            } else {
                write!(f, "{}*{}", fmt_rat(&a), m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl From<Rat> for PolyQ {
    fn from(c: Rat) -> PolyQ {
        PolyQ::constant(c)
    }
}

impl From<i64> for PolyQ {
    fn from(n: i64) -> PolyQ {
        PolyQ::int(n)
    }
}

impl AddAssign<&PolyQ> for PolyQ {
    fn add_assign(&mut self, rhs: &PolyQ) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&PolyQ> for PolyQ {
    fn sub_assign(&mut self, rhs: &PolyQ) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Add for &PolyQ {
    type Output = PolyQ;
    fn add(self, rhs: &PolyQ) -> PolyQ {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &PolyQ {
    type Output = PolyQ;
    fn sub(self, rhs: &PolyQ) -> PolyQ {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &PolyQ {
    type Output = PolyQ;
    fn mul(self, rhs: &PolyQ) -> PolyQ {
        if let Some(c) = rhs.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(&c);
        }
        let mut out = PolyQ::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &PolyQ {
    type Output = PolyQ;
    fn neg(self) -> PolyQ {
        PolyQ { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl $tr for PolyQ {
            type Output = PolyQ;
            fn $f(self, rhs: PolyQ) -> PolyQ {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&PolyQ> for PolyQ {
            type Output = PolyQ;
            fn $f(self, rhs: &PolyQ) -> PolyQ {
                (&self).$f(rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for PolyQ {
    type Output = PolyQ;
    fn neg(self) -> PolyQ {
        -&self
    }
}

struct PolyParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl PolyParser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T, AlgError> {
        Err(AlgError::Parse { col: self.pos + 1, msg: msg.to_string() })
    }

    fn skip(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip();
        self.s.get(self.pos).copied()
    }

    fn parse_all(mut self) -> Result<PolyQ, AlgError> {
        let p = self.expr()?;
        if self.peek().is_some() {
            return self.err("unexpected trailing input");
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<PolyQ, AlgError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            if c == b'+' || c == b'-' {
                self.pos += 1;
                let t = self.term()?;
                acc = if c == b'+' { acc + t } else { acc - t };
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<PolyQ, AlgError> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            if c == b'*' {
                self.pos += 1;
                acc = acc * self.unary()?;
            } else if c == b'/' {
                self.pos += 1;
                let d = self.unary()?;
                match d.as_constant() {
                    Some(c) if !c.is_zero() => acc = acc.scale(&c.recip()),
                    _ => return self.err("division only by nonzero constants"),
                }
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<PolyQ, AlgError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<PolyQ, AlgError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip();
            let start = self.pos;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let e: u32 = match std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse() {
                Ok(e) => e,
                Err(_) => return self.err("expected exponent"),
            };
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<PolyQ, AlgError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let p = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(p)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: BigInt = std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().unwrap();
                Ok(PolyQ::constant(Rat::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.s.len()
                    && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                Ok(PolyQ::var(std::str::from_utf8(&self.s[start..self.pos]).unwrap()))
            }
            _ => self.err("expected number, identifier or '('"),
        }
    }
}

/// Integer binomial with the negative-top convention.
pub fn binomial_int(n: &BigInt, k: u32) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for t in 0..k {
        num *= n - BigInt::from(t);
        den *= BigInt::from(t + 1);
    }
    num / den
}

pub fn binomial_i64(n: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    binomial_int(&BigInt::from(n), k as u32)
}

/// top (top-1) ... (top-k+1) / k! for a top of degree at most one.
pub fn binomial_poly(top: &PolyQ, k: u32) -> Result<PolyQ, AlgError> {
    if top.total_degree() > 1 {
        return Err(AlgError::BinomialTop(top.to_string()));
    }
    if let Some(c) = top.as_constant() {
        if c.is_integer() {
            return Ok(PolyQ::constant(Rat::from_integer(binomial_int(&c.to_integer(), k))));
        }
    }
    let mut out = PolyQ::one();
    let mut fact = BigInt::one();
    for t in 0..k {
        out = &out * &(top - &PolyQ::int(t as i64));
        fact *= BigInt::from(t + 1);
    }
    Ok(out.scale(&Rat::from_integer(fact).recip()))
}

/// Polynomial in one distinguished variable with coefficients in Q[other vars].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UniPoly {
    pub var: Var,
    coeffs: Vec<PolyQ>,
}

impl UniPoly {
    pub fn new(var: Var, mut coeffs: Vec<PolyQ>) -> UniPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { var, coeffs }
    }

    pub fn from_poly(p: &PolyQ, var: Var) -> UniPoly {
        UniPoly::new(var, p.coefficients_in(var))
    }

    pub fn to_poly(&self) -> PolyQ {
        let x = PolyQ::from_var(self.var);
        let mut out = PolyQ::zero();
        for (e, c) in self.coeffs.iter().enumerate() {
            out += &(c * &x.pow(e as u32));
        }
        out
    }

    pub fn coeffs(&self) -> &[PolyQ] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with -1 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn lc(&self) -> PolyQ {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    fn scale_poly(&self, c: &PolyQ) -> UniPoly {
        UniPoly::new(self.var, self.coeffs.iter().map(|a| a * c).collect())
    }

    fn shifted(&self, s: usize) -> UniPoly {
        let mut v = vec![PolyQ::zero(); s];
        v.extend(self.coeffs.iter().cloned());
        UniPoly::new(self.var, v)
    }

    fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = PolyQ::zero();
        UniPoly::new(
            self.var,
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) - other.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = PolyQ::zero();
        UniPoly::new(
            self.var,
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::new(self.var, vec![]);
        }
        let mut v = vec![PolyQ::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                v[i + j] += &(a * b);
            }
        }
        UniPoly::new(self.var, v)
    }

    /// Content-free representative with positive leading coefficient.
    pub fn normalized(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in &self.coeffs {
            for (_, r) in c.terms() {
                num = num.gcd(r.numer());
                den = den.lcm(r.denom());
            }
        }
        let mut k = Rat::new(num, den);
        if self.lc().leading().is_some_and(|(_, v)| v.is_negative()) {
            k = -k;
        }
        let inv = PolyQ::constant(k.recip());
        self.scale_poly(&inv)
    }

    pub fn associate_eq(&self, other: &UniPoly) -> bool {
        self.normalized() == other.normalized()
    }
}

/// Returns (q, r) with lc(b)^(deg a - deg b + 1) a = q b + r and deg r < deg b.
pub fn pseudo_divide(a: &UniPoly, b: &UniPoly) -> Result<(UniPoly, UniPoly), AlgError> {
    if b.is_zero() {
        return Err(AlgError::ZeroDivisor);
    }
    let var = a.var;
    if a.degree() < b.degree() {
        return Ok((UniPoly::new(var, vec![]), a.clone()));
    }
    let lb = b.lc();
    let db = b.degree();
    let mut e = a.degree() - db + 1;
    let mut q = UniPoly::new(var, vec![]);
    let mut r = a.clone();
    while !r.is_zero() && r.degree() >= db {
        let shift = (r.degree() - db) as usize;
        let s = UniPoly::new(var, vec![r.lc()]).shifted(shift);
        q = q.scale_poly(&lb).add(&s);
        r = r.scale_poly(&lb).sub(&s.mul(b));
        e -= 1;
    }
    let f = lb.pow(e as u32);
    Ok((q.scale_poly(&f), r.scale_poly(&f)))
}

/// Last nonzero term of the pseudo-remainder chain, content-normalized.
pub fn g_poly(a1: &UniPoly, a2: &UniPoly) -> Result<UniPoly, AlgError> {
    if a1.is_zero() && a2.is_zero() {
        return Err(AlgError::BothZero);
    }
    let (mut a, mut b) = if a1.degree() >= a2.degree() { (a1.clone(), a2.clone()) } else { (a2.clone(), a1.clone()) };
    if b.is_zero() {
        return Ok(a.normalized());
    }
    a = a.normalized();
    b = b.normalized();
    loop {
        let (_, r) = pseudo_divide(&a, &b)?;
        if r.is_zero() {
            return Ok(b.normalized());
        }
        a = b;
        b = r.normalized();
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PolyQ {
        PolyQ::parse(s).unwrap()
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial_poly(&p("eps"), 2).unwrap(), p("eps*(eps-1)/2"));
        assert_eq!(binomial_poly(&p("-2"), 3).unwrap(), p("-4"));
        assert_eq!(binomial_poly(&p("eps+2"), 1).unwrap(), p("eps+2"));
        assert_eq!(binomial_poly(&p("eps"), 0).unwrap(), PolyQ::one());
    }

    #[test]
    fn parse_and_render_round_trip() {
        let q = p("3/2*eps^2*zeta_i - 4 + xi_j*(eps+1)");
        assert_eq!(PolyQ::parse(&q.to_string()).unwrap(), q);
    }

    #[test]
    fn prem_hand_example() {
        let x = Var::new("x");
        let a = UniPoly::from_poly(&p("132*x^2-65*x-70*H+3"), x);
        let b = UniPoly::from_poly(&p("x-1"), x);
        let (q, r) = pseudo_divide(&a, &b).unwrap();
        assert_eq!(r.to_poly(), p("70-70*H"));
        assert_eq!(q.to_poly(), p("132*x+67"));
    }

    #[test]
    fn prem_exact_division() {
        let x = Var::new("x");
        let (q, r) = pseudo_divide(&UniPoly::from_poly(&p("x^2"), x), &UniPoly::from_poly(&p("x"), x)).unwrap();
        assert_eq!(q.to_poly(), p("x"));
        assert!(r.is_zero());
    }

    #[test]
    fn zero_divisor_rejected() {
        let x = Var::new("x");
        assert_eq!(pseudo_divide(&UniPoly::from_poly(&p("x"), x), &UniPoly::new(x, vec![])), Err(AlgError::ZeroDivisor));
        assert_eq!(g_poly(&UniPoly::new(x, vec![]), &UniPoly::new(x, vec![])), Err(AlgError::BothZero));
    }

    #[test]
    fn gpoly_equal_inputs() {
        let x = Var::new("x");
        let a = UniPoly::from_poly(&p("x"), x);
        assert_eq!(g_poly(&a, &a).unwrap().to_poly(), p("x"));
    }

    #[test]
    fn gpoly_zhu_chain() {
        let x = Var::new("x");
        let a1 = UniPoly::from_poly(&p("(x-1)*(x-1/16)*(x-9/16)"), x);
        let a2 = UniPoly::from_poly(&p("132*x^2-65*x-70*H+3"), x);
        let g = g_poly(&a1, &a2).unwrap();
        let want = UniPoly::from_poly(&p("(H-1)*(H+1/128)*(H-15/128)"), x);
        assert!(g.associate_eq(&want), "{:?}", g.to_poly());
    }
}

//! The theta-twisted module M(1)(theta): c_mn coefficients, the correction operator
//! Delta_x and twisted vertex operators Y(u, x) = Y0(exp(Delta_x) u, x).
//!
//! Mode dictionary: Y(u, x) = sum_n u_n x^{-n-1}, so u_n is the sum over t of the
//! (n - t)-th mode of Y0 applied to the x^{-t} component of exp(Delta_x) u.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{PolyQ, Rat};
use crate::fock::{Half, State, VAElement};
use crate::vertex::{binom_half, ModeEngine};

/// Taylor coefficients c_mn of -log((sqrt(1+x) + sqrt(1+y)) / 2) with m + n <= max_total.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CmnTable {
    pub max_total: u32,
    pub entries: BTreeMap<(u32, u32), Rat>,
}

impl CmnTable {
    pub fn get(&self, m: u32, n: u32) -> Rat {
        self.entries.get(&(m, n)).cloned().unwrap_or_else(Rat::zero)
    }
}

type Series = BTreeMap<(u32, u32), Rat>;

fn series_mul(a: &Series, b: &Series, max_total: u32) -> Series {
    let mut out = Series::new();
    for (&(i, j), x) in a {
        for (&(k, l), y) in b {
            if i + j + k + l <= max_total {
                let e = out.entry((i + k, j + l)).or_insert_with(Rat::zero);
                *e += x * y;
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

pub fn c_coeffs(max_total: u32) -> CmnTable {
    let mut g = Series::new();
    for k in 1..=max_total {
        let b = binom_half(1, k as i64) / Rat::from_integer(2.into());
        g.insert((k, 0), b.clone());
        g.insert((0, k), b);
    }
    let mut acc = Series::new();
    let mut power = g.clone();
    for k in 1..=max_total.max(1) {
        let sign = if k % 2 == 1 { -Rat::one() } else { Rat::one() };
        let f = sign / Rat::from_integer((k as i64).into());
        for (key, v) in &power {
            let e = acc.entry(*key).or_insert_with(Rat::zero);
            *e += v * &f;
        }
        power = series_mul(&power, &g, max_total);
        if power.is_empty() {
            break;
        }
    }
    acc.retain(|_, v| !v.is_zero());
    CmnTable { max_total, entries: acc }
}

/// Components t -> (x^{-t} coefficient of exp(Delta_x) u).
pub type DeltaExpansion = BTreeMap<u32, VAElement>;

fn delta_once(s: &State, table: &CmnTable) -> BTreeMap<u32, State> {
    let mut out: BTreeMap<u32, State> = BTreeMap::new();
    for (mono, c) in s.terms() {
        let ops = mono.ops();
        for (a, oa) in ops.iter().enumerate() {
            if a > 0 && ops[a - 1] == *oa {
                continue;
            }
            let (m1, cnt1) = mono.without(*oa).unwrap();
            let f1 = cnt1 as i64 * (oa.deg2 as i64 / 2);
            let ops1 = m1.ops().to_vec();
            for (b, ob) in ops1.iter().enumerate() {
                if ob.gen != oa.gen || (b > 0 && ops1[b - 1] == *ob) {
                    continue;
                }
                let (m2, cnt2) = m1.without(*ob).unwrap();
                let f2 = cnt2 as i64 * (ob.deg2 as i64 / 2);
                let (m, n) = (oa.deg2 as u32 / 2, ob.deg2 as u32 / 2);
                let cmn = table.get(m, n);
                if cmn.is_zero() {
                    continue;
                }
                let coef = c.scale(&(cmn * Rat::from_integer((f1 * f2).into())));
                out.entry(m + n).or_insert_with(|| State::zero(s.module().clone())).add_term(m2, coef);
            }
        }
    }
    out
}

/// exp(Delta_x) u split by powers of x^{-1}.
pub fn delta_apply(u: &VAElement, table: &CmnTable) -> Result<DeltaExpansion> {
    if !u.module().is_vacuum() {
        return Err(Error::NotVacuum);
    }
    let mut total: DeltaExpansion = BTreeMap::new();
    total.insert(0, u.clone());
    let mut cur: BTreeMap<u32, State> = total.clone();
    let mut k = 1i64;
    while !cur.is_empty() {
        let mut next: BTreeMap<u32, State> = BTreeMap::new();
        for (t, st) in &cur {
            for (dt, piece) in delta_once(st, table) {
                next.entry(t + dt).or_insert_with(|| State::zero(u.module().clone())).add_scaled(&piece, &PolyQ::one());
            }
        }
        let inv = PolyQ::constant(Rat::one() / Rat::from_integer(k.into()));
        next = next.into_iter().map(|(t, s)| (t, s.scale(&inv))).filter(|(_, s)| !s.is_zero()).collect();
        for (t, s) in &next {
            total.entry(*t).or_insert_with(|| State::zero(u.module().clone())).add_scaled(s, &PolyQ::one());
        }
        cur = next;
        k += 1;
    }
    total.retain(|_, s| !s.is_zero());
    Ok(total)
}

fn table_for(u: &VAElement) -> CmnTable {
    let w = u.degrees2().into_iter().max().unwrap_or(0) / 2;
    c_coeffs(w.max(2) as u32)
}

/// u_n s on the twisted module.
pub fn twisted_n_product(u: &VAElement, n: Half, s: &State) -> Result<State> {
    if !s.module().is_twisted() {
        return Err(Error::UntwistedInput);
    }
    if !u.module().is_vacuum() {
        return Err(Error::NotVacuum);
    }
    for (m, _) in u.terms() {
        if (m.len() as i64 - n.0).rem_euclid(2) != 0 {
            return Err(Error::ParityMismatch(n.to_string()));
        }
    }
    let exp = delta_apply(u, &table_for(u))?;
    let mut engine = ModeEngine::new(s.module().clone());
    let mut out = State::zero(s.module().clone());
    for (t, ut) in &exp {
        let r = engine.apply(ut, n.0 - 2 * *t as i64, s);
        out.add_scaled(&r, &PolyQ::one());
    }
    Ok(out)
}

/// Shared twisted-mode evaluator reusing one cache across many calls.
pub struct TwistedEngine {
    engine: ModeEngine,
    table: CmnTable,
}

impl TwistedEngine {
    pub fn new(rank: usize, max_weight: u32) -> TwistedEngine {
        TwistedEngine {
            engine: ModeEngine::new(crate::fock::ModuleKind::Twisted { rank }),
            table: c_coeffs(max_weight.max(2)),
        }
    }

    pub fn apply(&mut self, u: &VAElement, n: Half, s: &State) -> Result<State> {
        let exp = delta_apply(u, &self.table)?;
        let mut out = State::zero(s.module().clone());
        for (t, ut) in &exp {
            let r = self.engine.apply(ut, n.0 - 2 * *t as i64, s);
            out.add_scaled(&r, &PolyQ::one());
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;
    use crate::fock::{generator_named, twisted_monomial};

    #[test]
    fn c11_and_symmetry() {
        let t = c_coeffs(8);
        assert_eq!(t.get(0, 0), Rat::zero());
        assert_eq!(t.get(1, 1), rat(1, 16));
        for (&(m, n), v) in &t.entries {
            assert_eq!(&t.get(n, m), v);
        }
    }

    #[test]
    fn delta_on_omega() {
        let w = generator_named("omega_1", 1).unwrap();
        let e = delta_apply(&w, &c_coeffs(4)).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e[&0], w);
        assert_eq!(e[&2], State::vac(1).scale_rat(&rat(1, 16)));
    }

    #[test]
    fn twisted_table_values() {
        let tw = State::vac_tw(2);
        let w = generator_named("omega_1", 2).unwrap();
        assert_eq!(twisted_n_product(&w, Half::int(1), &tw).unwrap(), tw.scale_rat(&rat(1, 16)));
        let h = generator_named("H_1", 2).unwrap();
        assert_eq!(twisted_n_product(&h, Half::int(3), &tw).unwrap(), tw.scale_rat(&rat(-1, 128)));
        let s13 = generator_named("S(1,2;1,3)", 2).unwrap();
        let v = twisted_monomial(2, &[(2, 1)], Rat::one());
        let want = twisted_monomial(2, &[(1, 1)], rat(15, 16));
        assert_eq!(twisted_n_product(&s13, Half::int(3), &v).unwrap(), want);
    }
}

//! Mode actions: Heisenberg modes, n-th products a_n b through the normally ordered
//! field of a Fock monomial, commutators, epsilon(a, u) and Omega membership.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{binomial_i64, PolyQ, Rat};
use crate::fock::{generator, CreationOp, GenName, Half, ModuleKind, Monomial, State, VAElement};

/// binom(top2/2, k) for a possibly half-integral top.
pub(crate) fn binom_half(top2: i64, k: i64) -> Rat {
    if k < 0 {
        return Rat::zero();
    }
    if top2 % 2 == 0 {
        return Rat::from_integer(binomial_i64(top2 / 2, k));
    }
    let mut num = Rat::one();
    for t in 0..k {
        num *= Rat::new(BigInt::from(top2 - 2 * t), BigInt::from(2));
        num /= Rat::from_integer(BigInt::from(t + 1));
    }
    num
}

/// h^[gen](j2/2) applied to a basis monomial; None when the result is zero.
fn annihilate(module: &ModuleKind, gen: u16, j2: i64, m: &Monomial) -> Option<(Monomial, PolyQ)> {
    if j2 == 0 {
        return match module {
            ModuleKind::Exp { lam } => {
                let l = lam.get(gen as usize - 1)?;
                (!l.is_zero()).then(|| (m.clone(), l.clone()))
            }
            _ => None,
        };
    }
    let op = CreationOp { gen, deg2: j2 as u16 };
    let (rest, count) = m.without(op)?;
    Some((rest, PolyQ::constant(Rat::new(BigInt::from(count as i64 * j2), BigInt::from(2)))))
}

/// Evaluates modes of vacuum-module monomials on basis vectors of one module, with a cache.
pub struct ModeEngine {
    module: ModuleKind,
    cache: HashMap<(Vec<CreationOp>, i64, Monomial), State>,
}

impl ModeEngine {
    pub fn new(module: ModuleKind) -> ModeEngine {
        ModeEngine { module, cache: HashMap::new() }
    }

    pub fn module(&self) -> &ModuleKind {
        &self.module
    }

    fn parity_ok(&self, j2: i64) -> bool {
        (j2 % 2 != 0) == self.module.is_twisted()
    }

    /// (h^{i1}(-m1)...h^{ik}(-mk) vac)_{n2/2} applied to `s`, normally ordered.
    pub fn mode(&mut self, ops: &[CreationOp], n2: i64, s: &Monomial) -> State {
        if ops.is_empty() {
            return if n2 == -2 {
                State::monomial(self.module.clone(), s.clone(), PolyQ::one())
            } else {
                State::zero(self.module.clone())
            };
        }
        let key = (ops.to_vec(), n2, s.clone());
        if let Some(v) = self.cache.get(&key) {
            return v.clone();
        }
        let out = self.mode_uncached(ops, n2, s);
        self.cache.insert(key, out.clone());
        out
    }

    fn mode_uncached(&mut self, ops: &[CreationOp], n2: i64, s: &Monomial) -> State {
        let last = ops[ops.len() - 1];
        let rest = &ops[..ops.len() - 1];
        let gen = last.gen;
        let m2 = last.deg2 as i64;
        let m = m2 / 2;
        let mut out = State::zero(self.module.clone());

        let mut js: Vec<i64> = s.ops().iter().filter(|o| o.gen == gen).map(|o| o.deg2 as i64).collect();
        js.dedup();
        if matches!(self.module, ModuleKind::Exp { .. }) {
            js.push(0);
        }
        for j2 in js {
            let Some((s2, c)) = annihilate(&self.module, gen, j2, s) else { continue };
            let b = binom_half(-j2 - 2, m - 1);
            if b.is_zero() {
                continue;
            }
            let sub = self.mode(rest, n2 - j2 - m2, &s2);
            out.add_scaled(&sub, &c.scale(&b));
        }

        let push = |out: &mut State, sub: &State, j2: i64, b: &Rat| {
            let op = CreationOp { gen, deg2: (-j2) as u16 };
            for (mono, c) in sub.terms() {
                out.add_term(mono.with(op), c.scale(b));
            }
        };
        // integral creators above -m have vanishing binomial; half-integral ones never do
        let jmax = if self.module.is_twisted() { -1 } else { -m2 };
        if rest.is_empty() {
            let j2 = n2 + 2 - m2;
            if j2 <= jmax && self.parity_ok(j2) {
                let b = binom_half(-j2 - 2, m - 1);
                let unit = State::monomial(self.module.clone(), s.clone(), PolyQ::one());
                push(&mut out, &unit, j2, &b);
            }
        } else {
            let wrest2: i64 = rest.iter().map(|o| o.deg2 as i64).sum();
            let mut j2 = n2 - m2 - wrest2 - s.degree2() + 2;
            if !self.parity_ok(j2) {
                j2 += 1;
            }
            while j2 <= jmax {
                let sub = self.mode(rest, n2 - j2 - m2, s);
                if !sub.is_zero() {
                    let b = binom_half(-j2 - 2, m - 1);
                    push(&mut out, &sub, j2, &b);
                }
                j2 += 2;
            }
        }
        out
    }

    /// a_{n2/2} s for an element `a` of the vacuum module and any state of this module.
    pub fn apply(&mut self, a: &VAElement, n2: i64, s: &State) -> State {
        let mut out = State::zero(self.module.clone());
        for (am, ac) in a.terms() {
            for (sm, sc) in s.terms() {
                let r = self.mode(am.ops(), n2, sm);
                if !r.is_zero() {
                    out.add_scaled(&r, &(ac * sc));
                }
            }
        }
        out
    }
}

/// Heisenberg mode h^[i](k) on any state.
pub fn heis_mode(i: usize, k: Half, s: &State) -> Result<State> {
    let twisted = s.module().is_twisted();
    if k.is_integer() == twisted {
        return Err(Error::ParityMismatch(k.to_string()));
    }
    if i == 0 || i > s.module().rank().max(s.max_gen() as usize) {
        return Err(Error::BadIndex(format!("h[{i}]")));
    }
    let mut out = State::zero(s.module().clone());
    for (m, c) in s.terms() {
        if k.0 < 0 {
            out.add_term(m.with(CreationOp { gen: i as u16, deg2: (-k.0) as u16 }), c.clone());
        } else if let Some((m2, f)) = annihilate(s.module(), i as u16, k.0, m) {
            out.add_term(m2, c * &f);
        }
    }
    Ok(out)
}

/// The n-th product a_n b for b in an untwisted module.
pub fn n_product(a: &VAElement, n: i64, b: &State) -> Result<State> {
    if !a.module().is_vacuum() {
        return Err(Error::NotVacuum);
    }
    if b.module().is_twisted() {
        return Err(Error::TwistedInput);
    }
    Ok(ModeEngine::new(b.module().clone()).apply(a, 2 * n, b))
}

/// a_n s on any module; twisted states use the twisted vertex operator.
pub fn apply_mode(a: &VAElement, n: Half, s: &State) -> Result<State> {
    if s.module().is_twisted() {
        crate::twisted::twisted_n_product(a, n, s)
    } else {
        let n = n.as_integer().ok_or_else(|| Error::ParityMismatch(n.to_string()))?;
        n_product(a, n, s)
    }
}

/// All k >= 0 with a_k b nonzero.
pub fn commutator_table(a: &VAElement, b: &VAElement) -> Result<Vec<(i64, VAElement)>> {
    let top = a.vacuum_weight()? + b.vacuum_weight()? - 1;
    let mut engine = ModeEngine::new(b.module().clone());
    let mut out = Vec::new();
    for k in 0..=top.max(-1) {
        let r = engine.apply(a, 2 * k, b);
        if !r.is_zero() {
            out.push((k, r));
        }
    }
    Ok(out)
}

/// [a_i, b_j] s through sum_k binom(i,k) (a_k b)_{i+j-k} s.
pub fn eval_commutator(a: &VAElement, i: i64, b: &VAElement, j: i64, s: &State) -> Result<State> {
    let mut out = State::zero(s.module().clone());
    for (k, ab) in commutator_table(a, b)? {
        let c = binomial_i64(i, k);
        if c.is_zero() {
            continue;
        }
        let t = apply_mode(&ab, Half::int(i + j - k), s)?;
        out.add_scaled(&t, &PolyQ::constant(Rat::from_integer(c)));
    }
    Ok(out)
}

/// Largest k with a_k u nonzero; None stands for minus infinity.
pub fn epsilon_of(a: &VAElement, u: &State) -> Result<Option<i64>> {
    let wa = a.vacuum_weight()?;
    let du2 = u.degree2()?;
    if u.is_zero() || a.is_zero() {
        return Ok(None);
    }
    let top = wa + du2.div_euclid(2) - 1;
    let twisted = u.module().is_twisted();
    for k in (top - 64..=top).rev() {
        let r = if twisted {
            crate::twisted::twisted_n_product(a, Half::int(k), u)?
        } else {
            n_product(a, k, u)?
        };
        if !r.is_zero() {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// The generator test for lowest-weight vectors of M(1)^+.
pub fn is_omega_vector(u: &State, d: usize) -> Result<bool> {
    let below = |e: Option<i64>, b: i64| e.is_none_or(|e| e <= b);
    for i in 1..=d {
        if !below(epsilon_of(&generator(&GenName::Omega(i), d)?, u)?, 1) {
            return Ok(false);
        }
        if !below(epsilon_of(&generator(&GenName::H(i), d)?, u)?, 3) {
            return Ok(false);
        }
    }
    for l in 1..=d {
        for m in 1..l {
            for r in 1..=3u32 {
                let s = generator(&GenName::S { i: l, j: m, r: 1, s: r }, d)?;
                if !below(epsilon_of(&s, u)?, r as i64) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    fn g(name: &str, d: usize) -> VAElement {
        crate::fock::generator_named(name, d).unwrap()
    }

    #[test]
    fn heisenberg_examples() {
        let s = heis_mode(1, Half::int(-1), &State::vac(1)).unwrap();
        assert_eq!(heis_mode(1, Half::int(1), &s).unwrap(), State::vac(1));
        let e = State::exp_lam(2);
        assert_eq!(heis_mode(1, Half::int(0), &e).unwrap(), e.scale(&PolyQ::var("lam_1")));
        let t = heis_mode(1, Half(-1), &State::vac_tw(1)).unwrap();
        assert_eq!(heis_mode(1, Half(1), &t).unwrap(), State::vac_tw(1).scale_rat(&rat(1, 2)));
        assert!(heis_mode(1, Half(1), &State::vac(1)).is_err());
    }

    #[test]
    fn appendix_spot_values() {
        let s11 = g("S(1,2;1,1)", 2);
        assert_eq!(n_product(&s11, 3, &s11).unwrap(), State::vac(2));
        let s12 = g("S(1,2;1,2)", 2);
        assert_eq!(n_product(&s12, 5, &s12).unwrap(), State::vac(2).scale_rat(&rat(-6, 1)));
        let w2 = g("omega_2", 2);
        assert_eq!(n_product(&w2, 0, &s11).unwrap(), s12);
    }

    #[test]
    fn creation_axiom() {
        let h = g("H_1", 1);
        assert_eq!(n_product(&h, -1, &State::vac(1)).unwrap(), h);
        assert!(n_product(&h, 0, &State::vac(1)).unwrap().is_zero());
    }

    #[test]
    fn commutator_table_omega_s11() {
        let t = commutator_table(&g("omega_2", 2), &g("S(1,2;1,1)", 2)).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[0], (0, g("S(1,2;1,2)", 2)));
        assert_eq!(t[1], (1, g("S(1,2;1,1)", 2)));
        assert!(commutator_table(&g("omega_1", 2), &g("omega_2", 2)).unwrap().is_empty());
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon_of(&g("omega_1", 1), &State::exp_lam(1)).unwrap(), Some(1));
        let h1 = heis_mode(1, Half::int(-1), &State::vac(1)).unwrap();
        assert_eq!(epsilon_of(&g("H_1", 1), &h1).unwrap(), Some(3));
        let e = epsilon_of(&g("S(1,2;1,1)", 2), &State::vac_tw(2)).unwrap();
        assert!(e.is_none_or(|e| e < 1));
    }

    #[test]
    fn omega_vector_examples() {
        assert!(is_omega_vector(&State::exp_lam(2), 2).unwrap());
        assert!(is_omega_vector(&State::vac_tw(2), 2).unwrap());
        let h = heis_mode(1, Half::int(-1), &State::exp_lam(1)).unwrap();
        assert!(!is_omega_vector(&h, 1).unwrap());
    }
}

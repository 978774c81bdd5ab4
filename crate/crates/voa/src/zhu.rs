//! Zhu algebra products, the bounded-weight span of O(V) for V = M(1)^+ and
//! membership certificates.
//!
//! Membership is decided modulo a large prime to select independent generators and
//! solve for coefficients, which are then lifted to Q by rational reconstruction and
//! verified exactly. A positive answer is always an exact certificate.

use std::collections::HashMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactalg::{binomial_i64, PolyQ, Rat};
use crate::fock::{parity_pattern, plus_basis, Half, ModuleKind, Monomial, State, VAElement};
use crate::modp::{mulmod, primes, rat_mod, reconstruct, solve, Echelon, FpModes};
use crate::vertex::{apply_mode, ModeEngine};

fn homogeneous_parts(a: &VAElement) -> Vec<(i64, State)> {
    a.components().into_iter().map(|(d2, s)| (d2 / 2, s)).collect()
}

fn zhu_sum(engine: &mut ModeEngine, a: &VAElement, b: &VAElement, shift: i64) -> State {
    let mut out = State::zero(b.module().clone());
    for (w, part) in homogeneous_parts(a) {
        for i in 0..=w {
            let c = binomial_i64(w, i);
            let t = engine.apply(&part, 2 * (i - shift), b);
            out.add_scaled(&t, &PolyQ::constant(Rat::from_integer(c)));
        }
    }
    out
}

/// a * b = sum_i binom(wt a, i) a_{i-1} b, extended linearly in a.
pub fn star(a: &VAElement, b: &VAElement) -> Result<VAElement> {
    if !a.module().is_vacuum() || !b.module().is_vacuum() {
        return Err(Error::NotVacuum);
    }
    Ok(zhu_sum(&mut ModeEngine::new(b.module().clone()), a, b, 1))
}

/// a o b = sum_i binom(wt a, i) a_{i-2} b, extended linearly in a.
pub fn circ(a: &VAElement, b: &VAElement) -> Result<VAElement> {
    if !a.module().is_vacuum() || !b.module().is_vacuum() {
        return Err(Error::NotVacuum);
    }
    Ok(zhu_sum(&mut ModeEngine::new(b.module().clone()), a, b, 2))
}

/// o(a) = a_{wt a - 1} on a lowest-weight vector, extended linearly in a.
pub fn zhu_action_on_top(a: &VAElement, top: &State) -> Result<State> {
    let mut out = State::zero(top.module().clone());
    for (w, part) in homogeneous_parts(a) {
        out.add_scaled(&apply_mode(&part, Half::int(w - 1), top)?, &PolyQ::one());
    }
    Ok(out)
}

/// Default largest weight bound accepted by `o_span`, overridable with VOA_MAX_WEIGHT.
pub fn default_max_weight(rank: usize) -> i64 {
    if let Some(w) = std::env::var("VOA_MAX_WEIGHT").ok().and_then(|s| s.parse().ok()) {
        return w;
    }
    if rank <= 1 {
        12
    } else {
        8
    }
}

/// Which elements of O(V) generate the span.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpanFamily {
    /// Also use Res Y(a,x)(1+x)^{wt a} x^{-2-k} b for k > 0.
    pub shifts: bool,
    /// Largest weight of the left factor a, if limited.
    pub max_left_weight: Option<i64>,
}

impl Default for SpanFamily {
    fn default() -> Self {
        SpanFamily { shifts: false, max_left_weight: None }
    }
}

/// A generator Res Y(a,x)(1+x)^{wt a} x^{-2-k} b of O(V); k = 0 is a o b.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OGenerator {
    pub a: Monomial,
    pub b: Monomial,
    pub k: i64,
}

impl OGenerator {
    /// Exact value in M(1).
    pub fn value(&self, engine: &mut ModeEngine) -> State {
        let rank = engine.module().rank();
        let a = vac_mono(rank, &self.a);
        let b = vac_mono(rank, &self.b);
        zhu_sum(engine, &a, &b, 2 + self.k)
    }

    fn value_modp(&self, modes: &mut FpModes, index: &HashMap<Monomial, usize>) -> Option<Vec<u64>> {
        let p = modes.prime();
        let wa = self.a.degree2() / 2;
        let mut row = vec![0u64; index.len()];
        for i in 0..=wa {
            let c = modes.binom(wa, i);
            for (m, v) in modes.mode(self.a.ops(), i - 2 - self.k, &self.b).iter() {
                let x = &mut row[*index.get(m)?];
                *x = (*x + mulmod(*v, c, p)) % p;
            }
        }
        Some(row)
    }
}

/// Generators of O(V) that are independent up to a weight bound.
#[derive(Clone, Debug)]
pub struct OSpanBasis {
    pub rank: usize,
    pub weight_bound: i64,
    pub family: SpanFamily,
    /// Coordinates: basis monomials of M(1)^+ of weight at most the bound.
    pub coords: Vec<Monomial>,
    /// Total number of generators formed.
    pub generator_count: usize,
    /// Independent generators, in the order they were accepted.
    pub basis: Vec<OGenerator>,
    rows: Vec<Vec<u64>>,
}

/// Exact certificate of v = sum c_k g_k with g_k generators of O(V).
#[derive(Clone, Debug)]
pub struct Membership {
    pub member: bool,
    pub weight_bound: i64,
    pub certificate: Vec<(OGenerator, Rat)>,
}

fn vac_mono(rank: usize, m: &Monomial) -> State {
    State::monomial(ModuleKind::Vacuum { rank }, m.clone(), PolyQ::one())
}

/// Builds the span with the default weight cap and a o b generators.
pub fn o_span(rank: usize, weight_bound: i64, parity: Option<&[u16]>) -> Result<OSpanBasis> {
    o_span_with(rank, weight_bound, parity, default_max_weight(rank), SpanFamily::default())
}

pub fn o_span_with(
    rank: usize,
    weight_bound: i64,
    parity: Option<&[u16]>,
    cap: i64,
    family: SpanFamily,
) -> Result<OSpanBasis> {
    let keep = |m: &Monomial| parity.is_none_or(|p| parity_pattern(m).into_iter().eq(p.iter().copied()));
    let by_weight: Vec<Vec<Monomial>> =
        (0..=weight_bound.max(0)).map(|w| plus_basis(rank, w).into_iter().filter(keep).collect()).collect();
    let max_a = family.max_left_weight.unwrap_or(weight_bound);
    let mut gens = Vec::new();
    for top in 2..=weight_bound {
        for wa in 1..=max_a.min(top - 1) {
            let ks = if family.shifts { top - 1 - wa } else { 0 };
            for k in 0..=ks {
                let wb = top - 1 - wa - k;
                for a in &by_weight[wa as usize] {
                    for b in &by_weight[wb as usize] {
                        gens.push(OGenerator { a: a.clone(), b: b.clone(), k });
                    }
                }
            }
        }
    }
    if weight_bound > cap {
        return Err(Error::SpanTooLarge(gens.len()));
    }
    let coords: Vec<Monomial> = (0..=weight_bound.max(0)).flat_map(|w| plus_basis(rank, w)).collect();
    let index: HashMap<Monomial, usize> = coords.iter().cloned().enumerate().map(|(k, m)| (m, k)).collect();
    let p0 = primes().next().unwrap();
    let mut modes = FpModes::new(p0);
    let mut ech = Echelon::new(p0);
    let mut basis = Vec::new();
    let mut rows = Vec::new();
    for g in &gens {
        if ech.rank() == coords.len() {
            break;
        }
        let Some(row) = g.value_modp(&mut modes, &index) else { continue };
        if ech.insert(row.clone()) {
            basis.push(g.clone());
            rows.push(row);
        }
    }
    Ok(OSpanBasis { rank, weight_bound, family, coords, generator_count: gens.len(), basis, rows })
}

impl OSpanBasis {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Decides v in the span at this weight bound; a positive answer carries an exact certificate.
    pub fn member(&self, v: &VAElement) -> Result<Membership> {
        let top = v.degrees2().into_iter().max().unwrap_or(0) / 2;
        if top > self.weight_bound {
            return Err(Error::WeightBound { weight: top, bound: self.weight_bound });
        }
        let no = Membership { member: false, weight_bound: self.weight_bound, certificate: vec![] };
        if v.is_zero() {
            return Ok(Membership { member: true, ..no });
        }
        let index: HashMap<Monomial, usize> = self.coords.iter().cloned().enumerate().map(|(k, m)| (m, k)).collect();
        if v.terms().any(|(m, c)| !index.contains_key(m) || c.as_constant().is_none()) {
            return Ok(no);
        }
        let target_mod = |p: u64| -> Option<Vec<u64>> {
            let mut t = vec![0u64; index.len()];
            for (m, c) in v.terms() {
                t[index[m]] = rat_mod(&c.as_constant()?, p)?;
            }
            Some(t)
        };
        let mut residues: Vec<(u64, Vec<u64>)> = Vec::new();
        let mut exact: HashMap<usize, State> = HashMap::new();
        let mut engine = ModeEngine::new(ModuleKind::Vacuum { rank: self.rank });
        for (pk, p) in primes().take(MAX_PRIMES).enumerate() {
            let Some(target) = target_mod(p) else { continue };
            let rows = if pk == 0 {
                self.rows.clone()
            } else {
                let mut modes = FpModes::new(p);
                let rows: Option<Vec<Vec<u64>>> = self.basis.iter().map(|g| g.value_modp(&mut modes, &index)).collect();
                match rows {
                    Some(r) => r,
                    None => continue,
                }
            };
            let Some(sol) = solve(&rows, &target, p) else {
                // not in the span modulo p, hence not over Q
                return Ok(no);
            };
            residues.push((p, sol));
            if !residues.len().is_power_of_two() {
                continue;
            }
            let Some(coeffs) = reconstruct(&residues) else { continue };
            let mut acc = State::zero(v.module().clone());
            for (k, c) in coeffs.iter().enumerate() {
                if !c.is_zero() {
                    let g = exact.entry(k).or_insert_with(|| self.basis[k].value(&mut engine));
                    acc.add_scaled(g, &PolyQ::constant(c.clone()));
                }
            }
            if acc == *v {
                let certificate = self.basis.iter().cloned().zip(coeffs).filter(|(_, c)| !c.is_zero()).collect();
                return Ok(Membership { member: true, weight_bound: self.weight_bound, certificate });
            }
        }
        Ok(no)
    }
}

/// Largest number of primes combined before giving up on a certificate.
const MAX_PRIMES: usize = 1024;

/// One-shot membership test building the span on the fly.
pub fn member_o(v: &VAElement, rank: usize, weight_bound: i64) -> Result<Membership> {
    o_span(rank, weight_bound, None)?.member(v)
}

/// Recomputes sum c g from a certificate.
pub fn replay_certificate(cert: &[(OGenerator, Rat)], rank: usize) -> State {
    let mut engine = ModeEngine::new(ModuleKind::Vacuum { rank });
    let mut acc = State::zero(ModuleKind::Vacuum { rank });
    for (g, c) in cert {
        acc.add_scaled(&g.value(&mut engine), &PolyQ::constant(c.clone()));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;
    use crate::fock::generator_named;

    #[test]
    fn star_and_circ_examples() {
        let b = generator_named("H_1", 1).unwrap();
        let vac = State::vac(1);
        assert_eq!(star(&vac, &b).unwrap(), b);
        let w = generator_named("omega", 2).unwrap();
        assert_eq!(star(&w, &State::vac(2)).unwrap(), w);
        assert!(circ(&vac, &b).unwrap().is_zero());
    }

    #[test]
    fn small_span_and_membership() {
        assert_eq!(o_span(1, 0, None).unwrap().dimension(), 0);
        let dims: Vec<usize> = (0..=4).map(|w| plus_basis(1, w).len()).collect();
        assert_eq!(dims, vec![1, 0, 1, 1, 3]);
        let span = o_span(1, 6, None).unwrap();
        let w = generator_named("omega_1", 1).unwrap();
        assert!(!span.member(&w).unwrap().member);
        let g = circ(&w, &State::vac(1)).unwrap();
        let m = span.member(&g).unwrap();
        assert!(m.member);
        assert_eq!(replay_certificate(&m.certificate, 1), g);
        let h = generator_named("H_1", 1).unwrap();
        let comm = star(&w, &h).unwrap().sub(&star(&h, &w).unwrap());
        assert!(span.member(&comm).unwrap().member);
    }

    #[test]
    fn weight_bound_is_an_error() {
        let span = o_span(1, 2, None).unwrap();
        let h = generator_named("H_1", 1).unwrap();
        assert!(matches!(span.member(&h), Err(Error::WeightBound { .. })));
    }

    #[test]
    fn top_action() {
        let s12 = generator_named("S(1,2;1,2)", 2).unwrap();
        let v = crate::vertex::heis_mode(2, Half::int(-1), &State::vac(2)).unwrap();
        let want = crate::vertex::heis_mode(1, Half::int(-1), &State::vac(2)).unwrap().scale_rat(&rat(-2, 1));
        assert_eq!(zhu_action_on_top(&s12, &v).unwrap(), want);
        let w = generator_named("omega_1", 1).unwrap();
        assert_eq!(zhu_action_on_top(&w, &State::vac_tw(1)).unwrap(), State::vac_tw(1).scale_rat(&rat(1, 16)));
    }
}

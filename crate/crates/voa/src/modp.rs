//! Arithmetic modulo word-size primes: vacuum-module modes, row echelon forms,
//! linear solves and rational reconstruction.

use std::collections::HashMap;
use std::rc::Rc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactalg::Rat;
use crate::fock::{CreationOp, Monomial};

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13] {
        if n % q == 0 {
            return n == q;
        }
    }
    let (mut d, mut r) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 7, 61] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes below 2^31, largest first.
pub fn primes() -> impl Iterator<Item = u64> {
    (1u64 << 20..1u64 << 31).rev().filter(|&n| is_prime(n))
}

#[inline]
pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

pub fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

pub fn inv(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

pub fn int_mod(n: i64, p: u64) -> u64 {
    n.rem_euclid(p as i64) as u64
}

pub fn big_mod(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

/// None when p divides the denominator.
pub fn rat_mod(r: &Rat, p: u64) -> Option<u64> {
    let d = big_mod(r.denom(), p);
    if d == 0 {
        return None;
    }
    Some(mulmod(big_mod(r.numer(), p), inv(d, p), p))
}

pub type FpVec = Vec<(Monomial, u64)>;

/// Modes of vacuum-module monomials on M(1), with coefficients reduced mod p.
pub struct FpModes {
    p: u64,
    pascal: Vec<Vec<u64>>,
    cache: HashMap<(Vec<CreationOp>, i64, Monomial), Rc<FpVec>>,
}

impl FpModes {
    pub fn new(p: u64) -> FpModes {
        let size = 160;
        let mut pascal = vec![vec![0u64; size]; size];
        for n in 0..size {
            pascal[n][0] = 1;
            for k in 1..=n {
                pascal[n][k] = (pascal[n - 1][k - 1] + pascal[n - 1][k]) % p;
            }
        }
        FpModes { p, pascal, cache: HashMap::new() }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// binom(-j-1, k) = (-1)^k binom(j+k, k) for j >= 0; for j < 0 the top is nonnegative.
    fn binom_neg(&self, j: i64, k: i64) -> u64 {
        if k < 0 {
            return 0;
        }
        let top = -j - 1;
        if top >= 0 {
            if k > top {
                return 0;
            }
            return self.pascal[top as usize][k as usize];
        }
        let v = self.pascal[(j + k) as usize][k as usize];
        if k % 2 == 0 {
            v
        } else {
            (self.p - v) % self.p
        }
    }

    pub fn binom(&self, n: i64, k: i64) -> u64 {
        if k < 0 || n < k {
            return 0;
        }
        self.pascal[n as usize][k as usize]
    }

    /// (ops vac)_n applied to `s`.
    pub fn mode(&mut self, ops: &[CreationOp], n: i64, s: &Monomial) -> Rc<FpVec> {
        if ops.is_empty() {
            return Rc::new(if n == -1 { vec![(s.clone(), 1)] } else { vec![] });
        }
        let key = (ops.to_vec(), n, s.clone());
        if let Some(v) = self.cache.get(&key) {
            return v.clone();
        }
        let out = Rc::new(self.mode_uncached(ops, n, s));
        self.cache.insert(key, out.clone());
        out
    }

    fn mode_uncached(&mut self, ops: &[CreationOp], n: i64, s: &Monomial) -> FpVec {
        let p = self.p;
        let last = ops[ops.len() - 1];
        let rest = &ops[..ops.len() - 1];
        let m = last.deg2 as i64 / 2;
        let mut acc: HashMap<Monomial, u64> = HashMap::new();
        let mut js: Vec<CreationOp> = s.ops().iter().filter(|o| o.gen == last.gen).copied().collect();
        js.dedup();
        for op in js {
            let j = op.deg2 as i64 / 2;
            let (s2, count) = s.without(op).unwrap();
            let b = self.binom_neg(j, m - 1);
            if b == 0 {
                continue;
            }
            let c = mulmod(b, int_mod(count as i64 * j, p), p);
            let sub = self.mode(rest, n - j - m, &s2);
            for (mono, v) in sub.iter() {
                let e = acc.entry(mono.clone()).or_insert(0);
                *e = (*e + mulmod(*v, c, p)) % p;
            }
        }
        let creators = |j: i64, b: u64, sub: &FpVec, acc: &mut HashMap<Monomial, u64>| {
            let op = CreationOp { gen: last.gen, deg2: (-2 * j) as u16 };
            for (mono, v) in sub {
                let e = acc.entry(mono.with(op)).or_insert(0);
                *e = (*e + mulmod(*v, b, p)) % p;
            }
        };
        if rest.is_empty() {
            let j = n + 1 - m;
            if j <= -m {
                creators(j, self.binom_neg(j, m - 1), &vec![(s.clone(), 1)], &mut acc);
            }
        } else {
            let wrest: i64 = rest.iter().map(|o| o.deg2 as i64 / 2).sum();
            let lo = n - m - wrest - s.degree2() / 2 + 1;
            for j in lo..=-m {
                let sub = self.mode(rest, n - j - m, s);
                if !sub.is_empty() {
                    creators(j, self.binom_neg(j, m - 1), &sub, &mut acc);
                }
            }
        }
        acc.into_iter().filter(|(_, v)| *v != 0).collect()
    }
}

/// Incremental row echelon form modulo p over a fixed number of columns.
pub struct Echelon {
    p: u64,
    pivots: Vec<usize>,
    rows: Vec<Vec<u64>>,
}

impl Echelon {
    pub fn new(p: u64) -> Echelon {
        Echelon { p, pivots: Vec::new(), rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds the row when independent of the stored rows; returns whether it was.
    pub fn insert(&mut self, mut row: Vec<u64>) -> bool {
        let p = self.p;
        for (piv, r) in self.pivots.iter().zip(&self.rows) {
            let f = row[*piv];
            if f != 0 {
                let g = p - f;
                for (x, y) in row.iter_mut().zip(r) {
                    if *y != 0 {
                        *x = (*x + g * y) % p;
                    }
                }
            }
        }
        let Some(piv) = row.iter().position(|x| *x != 0) else { return false };
        let s = inv(row[piv], p);
        for x in row.iter_mut() {
            *x = mulmod(*x, s, p);
        }
        self.pivots.push(piv);
        self.rows.push(row);
        true
    }
}

/// Solves sum_k c_k rows[k] = target mod p for linearly independent rows.
pub fn solve(rows: &[Vec<u64>], target: &[u64], p: u64) -> Option<Vec<u64>> {
    let r = rows.len();
    let cols = target.len();
    let mut m: Vec<Vec<u64>> = (0..cols)
        .map(|c| {
            let mut line: Vec<u64> = rows.iter().map(|row| row[c]).collect();
            line.push(target[c]);
            line
        })
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..r {
        let Some(pr) = (rank..cols).find(|&i| m[i][col] != 0) else { continue };
        m.swap(rank, pr);
        let s = inv(m[rank][col], p);
        for x in m[rank].iter_mut() {
            *x = mulmod(*x, s, p);
        }
        let pivot_row = m[rank].clone();
        for (i, line) in m.iter_mut().enumerate() {
            if i != rank && line[col] != 0 {
                let g = p - line[col];
                for (x, y) in line.iter_mut().zip(&pivot_row).skip(col) {
                    if *y != 0 {
                        *x = (*x + g * y) % p;
                    }
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if m[rank..].iter().any(|line| line[r] != 0) {
        return None;
    }
    let mut sol = vec![0u64; r];
    for (k, &col) in pivots.iter().enumerate() {
        sol[col] = m[k][r];
    }
    Some(sol)
}

fn reconstruct_one(a: &BigInt, m: &BigInt) -> Option<Rat> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    Some(Rat::new(r1, t1))
}

/// Chinese remaindering followed by rational reconstruction of each coordinate.
pub fn reconstruct(residues: &[(u64, Vec<u64>)]) -> Option<Vec<Rat>> {
    let n = residues.first()?.1.len();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut a = BigInt::zero();
        let mut m = BigInt::one();
        for (p, sol) in residues {
            let am = big_mod(&a, *p);
            let minv = inv(big_mod(&m, *p), *p);
            let t = mulmod((sol[k] + p - am) % p, minv, *p);
            a += &m * BigInt::from(t);
            m *= BigInt::from(*p);
        }
        out.push(reconstruct_one(&a, &m)?);
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    #[test]
    fn reconstruction_round_trip() {
        let r = rat(-37, 91);
        let res: Vec<(u64, Vec<u64>)> = primes().take(2).map(|p| (p, vec![rat_mod(&r, p).unwrap()])).collect();
        assert_eq!(reconstruct(&res).unwrap(), vec![r]);
        let big = rat(123456789, 987654);
        let res: Vec<(u64, Vec<u64>)> = primes().take(3).map(|p| (p, vec![rat_mod(&big, p).unwrap()])).collect();
        assert_eq!(reconstruct(&res).unwrap(), vec![big]);
    }

    #[test]
    fn prime_list() {
        let ps: Vec<u64> = primes().take(3).collect();
        assert_eq!(ps, vec![2147483647, 2147483629, 2147483587]);
        assert!(!is_prime(2147483649));
    }

    #[test]
    fn solve_small_system() {
        let p = primes().next().unwrap();
        let rows = vec![vec![1, 0, 1], vec![0, 1, 1]];
        assert_eq!(solve(&rows, &[2, 3, 5], p), Some(vec![2, 3]));
        assert_eq!(solve(&rows, &[2, 3, 4], p), None);
    }
}

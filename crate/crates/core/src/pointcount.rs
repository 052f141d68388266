//! Naive point counting on `y^2 = f(x)` over small finite fields, and
//! assembly of the Frobenius polynomial from the counts.
//!
//! `F_{p^k}` uses the same lex-least modulus as the ℓ-adic code. Elements
//! are digit vectors; `f(x)` is evaluated along lines `x = b + j` with a
//! forward-difference table, so each value costs `deg f` additions.

use crate::exactpoly::{
    factor_mod_prime, is_prime_u64, lex_least_irreducible, squarefree_factorization, validate_weil,
    ExactPolyError, IntPolynomial, WeilPolynomial,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

pub const DEFAULT_MAX_ENUMERATION: u64 = 100_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PointCountError {
    #[error("curve has bad reduction at {0}")]
    BadReduction(u64),
    #[error("field of size {size} exceeds the enumeration limit {limit}")]
    EnumerationTooLarge { size: u64, limit: u64 },
    #[error("only odd primes are supported, got {0}")]
    UnsupportedPrime(u64),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("expected {expected} counts, got {got}")]
    WrongCountLength { expected: usize, got: usize },
    #[error("Frobenius polynomial failed validation: {0}")]
    WeilValidationFails(ExactPolyError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperellipticCurve {
    f: IntPolynomial,
}

impl HyperellipticCurve {
    pub fn new(f: IntPolynomial) -> Result<Self, PointCountError> {
        if f.degree() < 3 {
            return Err(PointCountError::InvalidCurve(format!("degree {} < 3", f.degree())));
        }
        let sf = squarefree_factorization(&f).map_err(|e| PointCountError::InvalidCurve(e.to_string()))?;
        if sf.iter().any(|(_, m)| *m > 1) {
            return Err(PointCountError::InvalidCurve("f is not squarefree".into()));
        }
        Ok(Self { f })
    }

    pub fn f(&self) -> &IntPolynomial {
        &self.f
    }

    pub fn genus(&self) -> usize {
        (self.f.degree() - 1) / 2
    }

    pub fn has_good_reduction(&self, p: u64) -> bool {
        if p == 2 || (self.f.leading() % p).is_zero() {
            return false;
        }
        match factor_mod_prime(&self.f, p) {
            Ok(fac) => fac.iter().all(|(_, m)| *m == 1),
            Err(_) => false,
        }
    }
}

/// Point counts over `F_{p^k}` for `k = 1..g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountVector {
    pub p: u64,
    pub counts: Vec<BigInt>,
}

/// `F_p[t]/(m)` with elements as base-`p` digit vectors.
struct SmallField {
    p: u32,
    k: usize,
    /// Non-leading modulus coefficients.
    m: Vec<u32>,
}

impl SmallField {
    fn new(p: u64, k: usize) -> Self {
        let modulus = lex_least_irreducible(p, k);
        let mut m: Vec<u32> = modulus.coeffs().iter().map(|&c| c as u32).collect();
        m.resize(k + 1, 0);
        m.pop();
        Self { p: p as u32, k, m }
    }

    fn size(&self) -> u64 {
        (self.p as u64).pow(self.k as u32)
    }

    fn from_index(&self, mut idx: u64, out: &mut [u32]) {
        for d in out.iter_mut() {
            *d = (idx % self.p as u64) as u32;
            idx /= self.p as u64;
        }
    }

    fn index(&self, a: &[u32]) -> u64 {
        a.iter().rev().fold(0u64, |acc, &d| acc * self.p as u64 + d as u64)
    }

    fn add_into(&self, a: &mut [u32], b: &[u32]) {
        for (x, y) in a.iter_mut().zip(b) {
            let s = *x + *y;
            *x = if s >= self.p { s - self.p } else { s };
        }
    }

    fn mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let k = self.k;
        let p = self.p as u64;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for top in (k..prod.len()).rev() {
            let t = prod[top];
            if t == 0 {
                continue;
            }
            for j in 0..k {
                prod[top - k + j] = (prod[top - k + j] + (p - t) * self.m[j] as u64) % p;
            }
        }
        prod.truncate(k);
        prod.into_iter().map(|c| c as u32).collect()
    }

    fn eval(&self, coeffs: &[u32], x: &[u32]) -> Vec<u32> {
        let mut acc = vec![0u32; self.k];
        for &c in coeffs.iter().rev() {
            acc = self.mul(&acc, x);
            let s = acc[0] + c;
            acc[0] = if s >= self.p { s - self.p } else { s };
        }
        acc
    }

    #[cfg(test)]
    fn pow(&self, a: &[u32], mut e: u64) -> Vec<u32> {
        let mut acc = vec![0u32; self.k];
        acc[0] = 1;
        let mut b = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    /// Calls `visit(index of g(x))` for every `x` in the field, where `g` has
    /// coefficients in the prime field. Lines `x = base + j` share the first
    /// digit; values along a line come from forward differences.
    fn for_each_value<F: Fn(u64) -> i64 + Sync>(&self, g: &[u32], visit: F) -> i64 {
        let p = self.p as u64;
        let lines = self.size() / p;
        let d = g.len().saturating_sub(1);
        (0..lines)
            .into_par_iter()
            .map(|line| {
                let mut base = vec![0u32; self.k];
                self.from_index(line * p, &mut base);
                let mut acc = 0i64;
                if (p as usize) <= d + 1 {
                    let mut x = base.clone();
                    for j in 0..p as u32 {
                        x[0] = j;
                        acc += visit(self.index(&self.eval(g, &x)));
                    }
                    return acc;
                }
                // difference table from the first d+1 values
                let mut table: Vec<Vec<u32>> = (0..=d)
                    .map(|j| {
                        let mut x = base.clone();
                        x[0] = j as u32;
                        self.eval(g, &x)
                    })
                    .collect();
                for level in 1..=d {
                    for i in (level..=d).rev() {
                        let prev = table[i - 1].clone();
                        let cur = &mut table[i];
                        for (c, pv) in cur.iter_mut().zip(prev) {
                            *c = (*c + self.p - pv) % self.p;
                        }
                    }
                }
                for _ in 0..p {
                    acc += visit(self.index(&table[0]));
                    for i in 0..d {
                        let (lo, hi) = table.split_at_mut(i + 1);
                        self.add_into(&mut lo[i], &hi[0]);
                    }
                }
                acc
            })
            .sum()
    }
}

/// Bitset of nonzero squares of the field, indexed by element index.
struct SquareTable {
    bits: Vec<u64>,
}

impl SquareTable {
    fn build(field: &SmallField) -> Self {
        let n = field.size() as usize;
        let words: Vec<std::sync::atomic::AtomicU64> =
            (0..n.div_ceil(64)).map(|_| std::sync::atomic::AtomicU64::new(0)).collect();
        field.for_each_value(&[0, 0, 1], |idx| {
            words[(idx / 64) as usize].fetch_or(1u64 << (idx % 64), std::sync::atomic::Ordering::Relaxed);
            0
        });
        let mut bits: Vec<u64> = words.into_iter().map(|w| w.into_inner()).collect();
        bits[0] &= !1;
        Self { bits }
    }

    fn chi(&self, idx: u64) -> i64 {
        if idx == 0 {
            0
        } else if self.bits[(idx / 64) as usize] >> (idx % 64) & 1 == 1 {
            1
        } else {
            -1
        }
    }
}

pub fn count_points(curve: &HyperellipticCurve, p: u64, k: u32, max_enumeration: u64) -> Result<BigInt, PointCountError> {
    if p == 2 || !is_prime_u64(p) {
        return Err(PointCountError::UnsupportedPrime(p));
    }
    if !curve.has_good_reduction(p) {
        return Err(PointCountError::BadReduction(p));
    }
    let size = (p as u128).pow(k);
    if size > max_enumeration as u128 {
        return Err(PointCountError::EnumerationTooLarge { size: size.min(u64::MAX as u128) as u64, limit: max_enumeration });
    }
    let field = SmallField::new(p, k as usize);
    let squares = SquareTable::build(&field);
    let pb = BigInt::from(p);
    let g: Vec<u32> = curve.f.coeffs().iter().map(|c| c.mod_floor(&pb).to_u32().unwrap()).collect();
    let char_sum = field.for_each_value(&g, |idx| squares.chi(idx));
    let q = field.size() as i64;
    let lc = curve.f.leading().mod_floor(&pb).to_u64().unwrap();
    let infinity = if curve.f.degree() % 2 == 1 {
        1
    } else {
        let mut e = vec![0u32; field.k];
        e[0] = lc as u32;
        1 + squares.chi(field.index(&e))
    };
    Ok(BigInt::from(q + char_sum + infinity))
}

pub fn count_vector(curve: &HyperellipticCurve, p: u64, max_enumeration: u64) -> Result<CountVector, PointCountError> {
    let counts = (1..=curve.genus() as u32)
        .map(|k| count_points(curve, p, k, max_enumeration))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CountVector { p, counts })
}

/// Newton's identities from `s_k = p^k + 1 - N_k`, completed by the
/// functional equation.
pub fn frobenius_polynomial(counts: &CountVector, g: usize) -> Result<WeilPolynomial, PointCountError> {
    if counts.counts.len() != g {
        return Err(PointCountError::WrongCountLength { expected: g, got: counts.counts.len() });
    }
    let q = BigInt::from(counts.p);
    let s: Vec<BigInt> = (1..=g)
        .map(|k| q.pow(k as u32) + 1 - &counts.counts[k - 1])
        .collect();
    let mut e = vec![BigInt::from(1)];
    for k in 1..=g {
        let mut acc = BigInt::zero();
        for i in 1..=k {
            let term = &e[k - i] * &s[i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let (quot, rem) = acc.div_rem(&BigInt::from(k));
        if !rem.is_zero() {
            return Err(PointCountError::WeilValidationFails(ExactPolyError::WeilBoundFails));
        }
        e.push(quot);
    }
    let mut c = vec![BigInt::zero(); 2 * g + 1];
    for k in 0..=g {
        c[2 * g - k] = if k % 2 == 0 { e[k].clone() } else { -&e[k] };
    }
    for k in 0..g {
        c[k] = q.pow((g - k) as u32) * &c[2 * g - k];
    }
    validate_weil(IntPolynomial::new(c), &q).map_err(PointCountError::WeilValidationFails)
}

/// Frobenius polynomial of a curve at `p` by enumeration.
pub fn frobenius_polynomial_of_curve(
    curve: &HyperellipticCurve,
    p: u64,
    max_enumeration: u64,
) -> Result<WeilPolynomial, PointCountError> {
    let cv = count_vector(curve, p, max_enumeration)?;
    frobenius_polynomial(&cv, curve.genus())
}

//! Polynomials over a prime field and their complete factorization.
//!
//! Squarefree decomposition, then distinct-degree splitting, then
//! Cantor–Zassenhaus. The random splitter is seeded so results are
//! reproducible; factors come back monic and sorted.

use super::{is_prime_u64, ExactPolyError, IntPolynomial};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolyFp {
    p: u64,
    coeffs: Vec<u64>,
}

#[inline]
fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn powmod_u64(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn invmod_u64(a: u64, p: u64) -> u64 {
    powmod_u64(a, p - 2, p)
}

impl PolyFp {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { p, coeffs }
    }

    pub fn from_int(poly: &IntPolynomial, p: u64) -> Self {
        let pb = BigInt::from(p);
        Self::new(
            p,
            poly.coeffs()
                .iter()
                .map(|c| c.mod_floor(&pb).to_u64().unwrap())
                .collect(),
        )
    }

    /// Lift with coefficients in `[0, p)`.
    pub fn to_int(&self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(p: u64) -> Self {
        Self { p, coeffs: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0;
        for &c in self.coeffs.iter().rev() {
            acc = (mulmod(acc, x, self.p) + c) % self.p;
        }
        acc
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = invmod_u64(self.leading(), self.p);
        Self::new(self.p, self.coeffs.iter().map(|&c| mulmod(c, inv, self.p)).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(
            self.p,
            (0..n)
                .map(|i| {
                    (self.coeffs.get(i).copied().unwrap_or(0) + o.coeffs.get(i).copied().unwrap_or(0))
                        % self.p
                })
                .collect(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(
            self.p,
            (0..n)
                .map(|i| {
                    (self.coeffs.get(i).copied().unwrap_or(0) + self.p
                        - o.coeffs.get(i).copied().unwrap_or(0))
                        % self.p
                })
                .collect(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.p);
        }
        let p = self.p as u128;
        let mut out = vec![0u128; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a as u128 * b as u128) % p;
            }
        }
        Self::new(self.p, out.into_iter().map(|c| c as u64).collect())
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let p = self.p;
        let dd = d.degree();
        let inv = invmod_u64(d.leading(), p);
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(p), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let t = mulmod(r[k + dd], inv, p);
            q[k] = t;
            if t == 0 {
                continue;
            }
            for (j, &c) in d.coeffs.iter().enumerate() {
                r[k + j] = (r[k + j] + p - mulmod(t, c, p)) % p;
            }
        }
        r.truncate(dd);
        (Self::new(p, q), Self::new(p, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mulmod(c, i as u64 % self.p, self.p))
                .collect(),
        )
    }

    /// `self^e mod m` for an arbitrary-size exponent.
    pub fn powmod(&self, e: &BigInt, m: &Self) -> Self {
        let mut acc = Self::one(self.p).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc).rem(m);
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
        }
        acc
    }

    /// `x^(p^k) mod m`.
    fn frobenius_power(&self, k: usize) -> Self {
        let mut acc = Self::x(self.p).rem(self);
        let pe = BigInt::from(self.p);
        for _ in 0..k {
            acc = acc.powmod(&pe, self);
        }
        acc
    }

    /// p-th root of a polynomial whose derivative vanishes.
    fn pth_root(&self) -> Self {
        let p = self.p as usize;
        Self::new(
            self.p,
            self.coeffs.iter().step_by(p).copied().collect(),
        )
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(&self) -> bool {
        let n = self.degree();
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let f = self.monic();
        let x = Self::x(self.p);
        for q in prime_divisors(n as u64) {
            let h = f.frobenius_power(n / q as usize).sub(&x.rem(&f));
            if f.gcd(&h).degree() != 0 {
                return false;
            }
        }
        f.frobenius_power(n).sub(&x.rem(&f)).rem(&f).is_zero()
    }
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl fmt::Debug for PolyFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.to_int(), self.p)
    }
}

/// Squarefree decomposition over F_p, monic input.
fn squarefree_fp(f: &PolyFp) -> Vec<(PolyFp, usize)> {
    let mut out = Vec::new();
    let p = f.p as usize;
    let d = f.derivative();
    if d.is_zero() {
        if f.degree() > 0 {
            for (g, m) in squarefree_fp(&f.pth_root()) {
                out.push((g, m * p));
            }
        }
        return out;
    }
    let mut c = f.gcd(&d);
    let mut w = f.divrem(&c).0;
    let mut i = 1;
    while w.degree() > 0 {
        let y = w.gcd(&c);
        let z = w.divrem(&y).0;
        if z.degree() > 0 {
            out.push((z.monic(), i));
        }
        i += 1;
        w = y;
        c = c.divrem(&w).0;
    }
    if c.degree() > 0 {
        for (g, m) in squarefree_fp(&c.pth_root()) {
            out.push((g, m * p));
        }
    }
    out
}

/// Distinct-degree factorization of a monic squarefree polynomial.
fn distinct_degree(f: &PolyFp) -> Vec<(PolyFp, usize)> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = PolyFp::x(f.p);
    let pe = BigInt::from(f.p);
    let mut h = x.rem(&rest);
    let mut d = 0;
    while rest.degree() >= 2 * (d + 1) {
        d += 1;
        h = h.powmod(&pe, &rest);
        let g = rest.gcd(&h.sub(&x));
        if g.degree() > 0 {
            out.push((g.clone(), d));
            rest = rest.divrem(&g).0;
            h = h.rem(&rest);
        }
    }
    if rest.degree() > 0 {
        let deg = rest.degree();
        out.push((rest.monic(), deg));
    }
    out
}

/// Splits a product of distinct irreducibles of degree `d`.
fn equal_degree(f: &PolyFp, d: usize, rng: &mut ChaCha8Rng) -> Vec<PolyFp> {
    let n = f.degree();
    if n == d {
        return vec![f.monic()];
    }
    let p = f.p;
    loop {
        let a = PolyFp::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.degree() == 0 {
            continue;
        }
        let split = if p == 2 {
            // trace map a + a^2 + ... + a^(2^(d-1))
            let mut t = a.rem(f);
            let mut acc = t.clone();
            for _ in 1..d {
                t = t.mul(&t).rem(f);
                acc = acc.add(&t);
            }
            acc
        } else {
            let e = (BigInt::from(p).pow(d as u32) - 1) / 2;
            a.powmod(&e, f).sub(&PolyFp::one(p))
        };
        let g = f.gcd(&split);
        if g.degree() > 0 && g.degree() < n {
            let h = f.divrem(&g).0;
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&h, d, rng));
            return out;
        }
    }
}

pub fn factor_mod_prime(poly: &IntPolynomial, ell: u64) -> Result<Vec<(PolyFp, usize)>, ExactPolyError> {
    if !is_prime_u64(ell) {
        return Err(ExactPolyError::NotPrime(ell));
    }
    let f = PolyFp::from_int(poly, ell);
    if f.is_zero() {
        return Err(ExactPolyError::VanishesModPrime(ell));
    }
    Ok(factor_fp(&f))
}

/// Complete factorization of a nonzero polynomial over F_p, constant
/// factor dropped.
pub(crate) fn factor_fp(f: &PolyFp) -> Vec<(PolyFp, usize)> {
    let f = f.monic();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 ^ f.p);
    let mut out = Vec::new();
    for (sq, m) in squarefree_fp(&f) {
        for (g, d) in distinct_degree(&sq) {
            for h in equal_degree(&g, d, &mut rng) {
                out.push((h, m));
            }
        }
    }
    out.sort_by(|a, b| (a.0.degree(), &a.0.coeffs, a.1).cmp(&(b.0.degree(), &b.0.coeffs, b.1)));
    out
}

/// Lexicographically least monic irreducible of degree `k` over F_p,
/// enumerating lower coefficients as the base-p digits of 0, 1, 2, ...
pub fn lex_least_irreducible(p: u64, k: usize) -> PolyFp {
    assert!(k >= 1);
    if k == 1 {
        return PolyFp::x(p);
    }
    let mut counter: Vec<u64> = vec![0; k];
    loop {
        let mut c = counter.clone();
        c.push(1);
        let f = PolyFp::new(p, c);
        if counter[0] != 0 && f.is_irreducible() {
            return f;
        }
        for digit in counter.iter_mut() {
            *digit += 1;
            if *digit < p {
                break;
            }
            *digit = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    fn degrees(v: &[(PolyFp, usize)]) -> Vec<(usize, usize)> {
        v.iter().map(|(f, m)| (f.degree(), *m)).collect()
    }

    #[test]
    fn small_factorizations() {
        let f = factor_mod_prime(&ip(&[1, 0, 1]), 5).unwrap();
        assert_eq!(f, vec![(PolyFp::new(5, vec![2, 1]), 1), (PolyFp::new(5, vec![3, 1]), 1)]);
        let f = factor_mod_prime(&ip(&[1, 0, 1]), 3).unwrap();
        assert_eq!(degrees(&f), vec![(2, 1)]);
        let f = factor_mod_prime(&ip(&[-1, 0, 0, 1]), 7).unwrap();
        assert_eq!(degrees(&f), vec![(1, 1), (1, 1), (1, 1)]);
        for (g, _) in &f {
            let r = (7 - g.coeffs()[0]) % 7;
            assert_eq!(powmod_u64(r, 3, 7), 1);
        }
    }

    #[test]
    fn vanishing_is_rejected() {
        assert_eq!(
            factor_mod_prime(&ip(&[3, 6]), 3),
            Err(ExactPolyError::VanishesModPrime(3))
        );
    }

    #[test]
    fn repeated_and_inseparable_factors() {
        // (x+1)^3 (x^2+1) over F_3: the cube is inseparable.
        let f = &ip(&[1, 1]).pow(3) * &ip(&[1, 0, 1]);
        let fac = factor_mod_prime(&f, 3).unwrap();
        assert_eq!(degrees(&fac), vec![(1, 3), (2, 1)]);
        // x^4 over F_2
        let fac = factor_mod_prime(&ip(&[0, 0, 0, 0, 1]), 2).unwrap();
        assert_eq!(degrees(&fac), vec![(1, 4)]);
    }

    #[test]
    fn characteristic_two_split() {
        // x^3 - x = x(x+1)... over F_2: x^4 + x = x(x+1)(x^2+x+1)
        let fac = factor_mod_prime(&ip(&[0, 1, 0, 0, 1]), 2).unwrap();
        assert_eq!(degrees(&fac), vec![(1, 1), (1, 1), (2, 1)]);
        // x^15 - 1 over F_2 splits into degrees 1,2,4,4,4
        let mut c = vec![0i64; 16];
        c[0] = -1;
        c[15] = 1;
        let fac = factor_mod_prime(&ip(&c), 2).unwrap();
        let d: Vec<usize> = fac.iter().map(|(f, _)| f.degree()).collect();
        assert_eq!(d, vec![1, 2, 4, 4, 4]);
    }

    #[test]
    fn lex_least() {
        assert_eq!(lex_least_irreducible(3, 2), PolyFp::new(3, vec![1, 0, 1]));
        assert_eq!(lex_least_irreducible(2, 3), PolyFp::new(2, vec![1, 1, 0, 1]));
        assert_eq!(lex_least_irreducible(5, 2), PolyFp::new(5, vec![2, 0, 1]));
        assert!(lex_least_irreducible(73, 4).is_irreducible());
    }

    #[test]
    fn irreducibility() {
        assert!(PolyFp::new(2, vec![1, 1, 1]).is_irreducible());
        assert!(!PolyFp::new(2, vec![1, 0, 1]).is_irreducible());
        assert!(!PolyFp::new(5, vec![1, 0, 1]).is_irreducible());
    }
}

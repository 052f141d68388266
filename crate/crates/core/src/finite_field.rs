//! Finite fields `F_p[t]/(m(t))` with the deterministic lex-least modulus,
//! plus the little polynomial toolkit needed to find roots in them.

use crate::exactpoly::{lex_least_irreducible, PolyFp};
use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Elem = Vec<u64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteField {
    p: u64,
    k: usize,
    /// Monic modulus coefficients, lowest first, length `k + 1`.
    modulus: Vec<u64>,
}

impl FiniteField {
    pub fn new(p: u64, k: usize) -> Self {
        Self::with_modulus(&lex_least_irreducible(p, k))
    }

    pub fn with_modulus(m: &PolyFp) -> Self {
        let m = m.monic();
        let k = m.degree();
        let mut modulus = m.coeffs().to_vec();
        modulus.resize(k + 1, 0);
        Self { p: m.modulus(), k, modulus }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn modulus(&self) -> PolyFp {
        PolyFp::new(self.p, self.modulus.clone())
    }

    pub fn order(&self) -> BigInt {
        BigInt::from(self.p).pow(self.k as u32)
    }

    pub fn zero(&self) -> Elem {
        vec![0; self.k]
    }

    pub fn one(&self) -> Elem {
        self.constant(1)
    }

    pub fn constant(&self, c: u64) -> Elem {
        let mut e = self.zero();
        e[0] = c % self.p;
        e
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        a.iter().zip(b).map(|(x, y)| (x + self.p - y) % self.p).collect()
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        a.iter().map(|x| (self.p - x) % self.p).collect()
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let p = self.p as u128;
        let k = self.k;
        let mut prod = vec![0u128; 2 * k - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u128 * y as u128) % p;
            }
        }
        for top in (k..prod.len()).rev() {
            let t = prod[top];
            if t == 0 {
                continue;
            }
            for j in 0..k {
                let s = t * self.modulus[j] as u128 % p;
                prod[top - k + j] = (prod[top - k + j] + p - s) % p;
            }
        }
        prod.truncate(k);
        prod.into_iter().map(|c| c as u64).collect()
    }

    pub fn pow(&self, a: &Elem, e: &BigInt) -> Elem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    pub fn inv(&self, a: &Elem) -> Elem {
        assert!(!self.is_zero(a), "inverse of zero");
        self.pow(a, &(self.order() - 2))
    }

    pub fn frobenius(&self, a: &Elem) -> Elem {
        self.pow(a, &BigInt::from(self.p))
    }

    /// Multiplicative order of a nonzero element, given the factored
    /// group order.
    pub fn element_order(&self, a: &Elem, group_order_factors: &[(BigInt, u32)]) -> BigInt {
        let mut n = self.order() - 1;
        for (q, e) in group_order_factors {
            for _ in 0..*e {
                let cand = &n / q;
                if self.pow(a, &cand) == self.one() {
                    n = cand;
                } else {
                    break;
                }
            }
        }
        n
    }

    pub fn random(&self, rng: &mut ChaCha8Rng) -> Elem {
        (0..self.k).map(|_| rng.gen_range(0..self.p)).collect()
    }

    fn embed(&self, c: u64) -> Elem {
        self.constant(c)
    }

    /// All roots in this field of a polynomial over the prime field.
    pub fn roots_of(&self, f: &PolyFp) -> Vec<Elem> {
        let poly: Vec<Elem> = f.coeffs().iter().map(|&c| self.embed(c)).collect();
        let mut out = self.roots(&poly);
        out.sort();
        out
    }

    /// Roots of a polynomial with coefficients in this field.
    pub fn roots(&self, f: &[Elem]) -> Vec<Elem> {
        assert!(self.p % 2 == 1, "root finding implemented for odd characteristic");
        let f = self.ptrim(f.to_vec());
        if f.len() <= 1 {
            return Vec::new();
        }
        let f = self.pmonic(&f);
        let x = vec![self.zero(), self.one()];
        let xq = self.ppowmod(&x, &self.order(), &f);
        let g = self.pgcd(&f, &self.psub(&xq, &x));
        let mut rng = ChaCha8Rng::seed_from_u64(0xf1e1d ^ self.p ^ ((self.k as u64) << 32));
        let mut out = Vec::new();
        self.split_linear(&g, &mut rng, &mut out);
        out
    }

    fn split_linear(&self, g: &[Elem], rng: &mut ChaCha8Rng, out: &mut Vec<Elem>) {
        let d = g.len() - 1;
        if d == 0 {
            return;
        }
        if d == 1 {
            let g = self.pmonic(g);
            out.push(self.neg(&g[0]));
            return;
        }
        let e = (self.order() - 1) / 2;
        loop {
            let a = self.random(rng);
            let lin = vec![a, self.one()];
            let h = self.ppowmod(&lin, &e, g);
            let h = self.psub(&h, &[self.one()]);
            let c = self.pgcd(g, &h);
            let cd = c.len() - 1;
            if cd > 0 && cd < d {
                let rest = self.pdivrem(g, &c).0;
                self.split_linear(&c, rng, out);
                self.split_linear(&rest, rng, out);
                return;
            }
        }
    }

    fn ptrim(&self, mut f: Vec<Elem>) -> Vec<Elem> {
        while f.last().is_some_and(|c| self.is_zero(c)) {
            f.pop();
        }
        f
    }

    fn pmonic(&self, f: &[Elem]) -> Vec<Elem> {
        let inv = self.inv(f.last().unwrap());
        f.iter().map(|c| self.mul(c, &inv)).collect()
    }

    fn psub(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let n = a.len().max(b.len());
        let z = self.zero();
        self.ptrim((0..n).map(|i| self.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect())
    }

    fn pmul(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = self.add(&out[i + j], &self.mul(x, y));
            }
        }
        self.ptrim(out)
    }

    fn pdivrem(&self, a: &[Elem], d: &[Elem]) -> (Vec<Elem>, Vec<Elem>) {
        let dd = d.len() - 1;
        let inv = self.inv(&d[dd]);
        let mut r = a.to_vec();
        if r.len() <= dd {
            return (Vec::new(), self.ptrim(r));
        }
        let mut q = vec![self.zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let t = self.mul(&r[k + dd], &inv);
            for (j, c) in d.iter().enumerate() {
                r[k + j] = self.sub(&r[k + j], &self.mul(&t, c));
            }
            q[k] = t;
        }
        r.truncate(dd);
        (self.ptrim(q), self.ptrim(r))
    }

    fn pgcd(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let mut a = self.ptrim(a.to_vec());
        let mut b = self.ptrim(b.to_vec());
        while !b.is_empty() {
            let r = self.pdivrem(&a, &b).1;
            a = b;
            b = r;
        }
        if a.is_empty() {
            a
        } else {
            self.pmonic(&a)
        }
    }

    fn ppowmod(&self, a: &[Elem], e: &BigInt, m: &[Elem]) -> Vec<Elem> {
        let base = self.pdivrem(a, m).1;
        let mut acc = self.pdivrem(&[self.one()], m).1;
        for i in (0..e.bits()).rev() {
            acc = self.pdivrem(&self.pmul(&acc, &acc), m).1;
            if e.bit(i) {
                acc = self.pdivrem(&self.pmul(&acc, &base), m).1;
            }
        }
        acc
    }
}

/// Factorization of a positive integer by trial division.
pub fn factor_integer(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut out = Vec::new();
    let mut n = n.clone();
    let mut d = BigInt::from(2);
    while &d * &d <= n {
        let mut e = 0;
        while (&n % &d) == BigInt::from(0) {
            n /= &d;
            e += 1;
        }
        if e > 0 {
            out.push((d.clone(), e));
        }
        d += 1;
    }
    if !n.is_one() {
        out.push((n, 1));
    }
    out
}

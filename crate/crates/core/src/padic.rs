//! Unramified extensions of the ℓ-adic integers at finite precision.
//!
//! Elements of `Z_ℓ[t]/(m(t))` are coefficient vectors reduced mod `ℓ^k`,
//! where `m` is the integer lift of the lex-least irreducible residue
//! modulus. Roots of a squarefree Weil polynomial are found in the residue
//! field, paired by `π π̄ = q`, and Hensel-lifted on demand.

use crate::exactpoly::{factor_mod_prime, is_prime_u64, IntPolynomial, PolyFp};
use crate::finite_field::{Elem, FiniteField};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PadicError {
    #[error("no auxiliary prime in [{0}, {1}] splits the polynomial acceptably")]
    NoSuitableAuxPrime(u64, u64),
    #[error("a root satisfies pi^2 = q, so roots cannot be paired")]
    PairingFails,
    #[error("derivative is not a unit at a root")]
    DerivativeNotUnit,
    #[error("polynomial has {found} roots in the residue field, expected {expected}")]
    RootsMissing { found: usize, expected: usize },
    #[error("polynomial has odd number of distinct roots {0}")]
    OddRootCount(usize),
}

/// Search window for the auxiliary prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxPrimeConfig {
    pub min: u64,
    pub max: u64,
    pub max_residue_degree: usize,
}

impl Default for AuxPrimeConfig {
    fn default() -> Self {
        Self { min: 3, max: 5000, max_residue_degree: 24 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnramifiedField {
    ell: u64,
    residue: FiniteField,
    modulus: IntPolynomial,
}

impl UnramifiedField {
    pub fn new(ell: u64, f: usize) -> Self {
        let residue = FiniteField::new(ell, f);
        let modulus = residue.modulus().to_int();
        Self { ell, residue, modulus }
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn degree(&self) -> usize {
        self.residue.degree()
    }

    pub fn residue_field(&self) -> &FiniteField {
        &self.residue
    }

    pub fn modulus(&self) -> &IntPolynomial {
        &self.modulus
    }

    pub fn ring(&self, prec: u32) -> PadicRing<'_> {
        PadicRing { field: self, prec, modulus: BigInt::from(self.ell).pow(prec) }
    }
}

/// Coefficients lowest first, each in `[0, ℓ^k)` for the ring's `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PadicElement {
    coeffs: Vec<BigInt>,
}

impl PadicElement {
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }
}

/// Arithmetic in `O_L / ℓ^k`.
pub struct PadicRing<'a> {
    field: &'a UnramifiedField,
    prec: u32,
    modulus: BigInt,
}

impl PadicRing<'_> {
    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    fn f(&self) -> usize {
        self.field.degree()
    }

    pub fn reduce(&self, mut coeffs: Vec<BigInt>) -> PadicElement {
        let f = self.f();
        let m = self.field.modulus.coeffs();
        for top in (f..coeffs.len()).rev() {
            let t = std::mem::take(&mut coeffs[top]);
            if t.is_zero() {
                continue;
            }
            for j in 0..f {
                coeffs[top - f + j] -= &t * &m[j];
            }
        }
        coeffs.resize(f, BigInt::zero());
        for c in coeffs.iter_mut() {
            *c = c.mod_floor(&self.modulus);
        }
        PadicElement { coeffs }
    }

    pub fn from_int(&self, c: &BigInt) -> PadicElement {
        self.reduce(vec![c.clone()])
    }

    pub fn zero(&self) -> PadicElement {
        self.from_int(&BigInt::zero())
    }

    pub fn one(&self) -> PadicElement {
        self.from_int(&BigInt::one())
    }

    /// Coefficientwise lift of a residue-field element.
    pub fn from_residue(&self, e: &Elem) -> PadicElement {
        self.reduce(e.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn residue(&self, a: &PadicElement) -> Elem {
        let l = BigInt::from(self.field.ell);
        a.coeffs.iter().map(|c| c.mod_floor(&l).to_u64().unwrap()).collect()
    }

    /// Re-reduce an element known to higher precision.
    pub fn truncate(&self, a: &PadicElement) -> PadicElement {
        self.reduce(a.coeffs.clone())
    }

    pub fn add(&self, a: &PadicElement, b: &PadicElement) -> PadicElement {
        self.reduce(a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, a: &PadicElement, b: &PadicElement) -> PadicElement {
        self.reduce(a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect())
    }

    pub fn scale(&self, a: &PadicElement, k: &BigInt) -> PadicElement {
        self.reduce(a.coeffs.iter().map(|x| x * k).collect())
    }

    pub fn mul(&self, a: &PadicElement, b: &PadicElement) -> PadicElement {
        let f = self.f();
        let mut out = vec![BigInt::zero(); 2 * f - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        self.reduce(out)
    }

    pub fn pow(&self, a: &PadicElement, e: &BigInt) -> PadicElement {
        assert!(!e.is_negative(), "negative exponent");
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    pub fn is_unit(&self, a: &PadicElement) -> bool {
        !self.field.residue.is_zero(&self.residue(a))
    }

    /// Inverse of a unit, by Newton iteration from the residue inverse.
    pub fn inv(&self, a: &PadicElement) -> Option<PadicElement> {
        let r = self.residue(a);
        if self.field.residue.is_zero(&r) {
            return None;
        }
        let mut y = self.from_residue(&self.field.residue.inv(&r));
        let two = self.from_int(&BigInt::from(2));
        let mut known = 1u32;
        while known < self.prec {
            known *= 2;
            y = self.mul(&y, &self.sub(&two, &self.mul(a, &y)));
        }
        Some(y)
    }

    pub fn eval(&self, p: &IntPolynomial, x: &PadicElement) -> PadicElement {
        let mut acc = self.zero();
        for c in p.coeffs().iter().rev() {
            acc = self.add(&self.mul(&acc, x), &self.from_int(c));
        }
        acc
    }

    pub fn is_zero(&self, a: &PadicElement) -> bool {
        a.coeffs.iter().all(|c| c.is_zero())
    }

    /// The rational integer represented by `a`, if it lies in `Z/ℓ^k`.
    pub fn as_integer(&self, a: &PadicElement) -> Option<BigInt> {
        a.coeffs[1..].iter().all(|c| c.is_zero()).then(|| a.coeffs[0].clone())
    }
}

/// Hensel lift of a simple root to precision `prec`.
fn newton_lift(
    field: &UnramifiedField,
    p: &IntPolynomial,
    start: &PadicElement,
    from: u32,
    prec: u32,
) -> Result<PadicElement, PadicError> {
    let dp = p.derivative();
    let mut x = start.clone();
    let mut known = from;
    {
        let r1 = field.ring(1);
        if !r1.is_unit(&r1.eval(&dp, &r1.truncate(&x))) {
            return Err(PadicError::DerivativeNotUnit);
        }
    }
    while known < prec {
        known = (known * 2).min(prec);
        let ring = field.ring(known);
        let xk = ring.truncate(&x);
        let inv = ring.inv(&ring.eval(&dp, &xk)).ok_or(PadicError::DerivativeNotUnit)?;
        x = ring.sub(&xk, &ring.mul(&ring.eval(p, &xk), &inv));
    }
    Ok(field.ring(prec).truncate(&x))
}

/// Distinct roots of a squarefree polynomial, labeled so that label
/// `i + n/2` is the partner `q / π_i` of label `i`.
#[derive(Clone, Debug)]
pub struct LabeledRoots {
    field: Arc<UnramifiedField>,
    poly: IntPolynomial,
    q: BigInt,
    prec: u32,
    roots: Vec<PadicElement>,
    residue_degree: usize,
}

impl LabeledRoots {
    pub fn field(&self) -> &Arc<UnramifiedField> {
        &self.field
    }

    pub fn poly(&self) -> &IntPolynomial {
        &self.poly
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn roots(&self) -> &[PadicElement] {
        &self.roots
    }

    pub fn ell(&self) -> u64 {
        self.field.ell
    }

    /// Degree of the field generated by these roots over `Q_ℓ`.
    pub fn residue_degree(&self) -> usize {
        self.residue_degree
    }

    pub fn partner(&self, i: usize) -> usize {
        let h = self.roots.len() / 2;
        (i + h) % self.roots.len()
    }

    pub fn ring(&self) -> PadicRing<'_> {
        self.field.ring(self.prec)
    }

    pub fn residues(&self) -> Vec<Elem> {
        let r = self.field.ring(1);
        self.roots.iter().map(|x| r.truncate(x)).map(|x| r.residue(&x)).collect()
    }

    pub fn hensel_lift_to(&self, prec: u32) -> Result<LabeledRoots, PadicError> {
        if prec <= self.prec {
            return Ok(self.clone());
        }
        let roots = self
            .roots
            .iter()
            .map(|x| newton_lift(&self.field, &self.poly, x, self.prec, prec))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LabeledRoots { roots, prec, ..self.clone() })
    }

    /// Smallest precision certifying `∏ π_i^{e_i} · q^{q_exp} = 1` by a
    /// congruence, given an upper bound on the degree of the field the
    /// roots generate over Q.
    pub fn required_precision(&self, e: &[i64], q_exp: i64, gamma_order: u64) -> u32 {
        let pos: i64 = e.iter().filter(|&&x| x > 0).sum::<i64>() + 2 * q_exp.max(0);
        let neg: i64 = -e.iter().filter(|&&x| x < 0).sum::<i64>() + 2 * (-q_exp).max(0);
        let s = pos.max(neg) as u64;
        if s == 0 {
            return 1;
        }
        // need ℓ^{2 f m} > 4^Γ q^{Γ s}
        let rhs = BigInt::from(4).pow(gamma_order as u32) * self.q.pow((gamma_order * s) as u32);
        let step = BigInt::from(self.field.ell).pow(2 * self.residue_degree as u32);
        let bits = rhs.bits();
        let per = step.bits().saturating_sub(1).max(1);
        let mut m = (bits / per).saturating_sub(1).max(1) as u32;
        while step.pow(m) <= rhs {
            m += 1;
        }
        while m > 1 && step.pow(m - 1) > rhs {
            m -= 1;
        }
        m
    }

    /// Compares both sides of the relation modulo `ℓ^prec`; requires the
    /// roots to be known at least that far.
    pub fn products_agree_at(&self, e: &[i64], q_exp: i64, prec: u32) -> bool {
        assert!(prec <= self.prec);
        let ring = self.field.ring(prec);
        let mut a = ring.one();
        let mut b = ring.one();
        for (x, &k) in self.roots.iter().zip(e) {
            let x = ring.truncate(x);
            if k > 0 {
                a = ring.mul(&a, &ring.pow(&x, &BigInt::from(k)));
            } else if k < 0 {
                b = ring.mul(&b, &ring.pow(&x, &BigInt::from(-k)));
            }
        }
        let qe = BigInt::from(q_exp.unsigned_abs());
        let qpow = ring.from_int(&self.q.pow(qe.to_u32().unwrap()));
        if q_exp > 0 {
            a = ring.mul(&a, &qpow);
        } else if q_exp < 0 {
            b = ring.mul(&b, &qpow);
        }
        a == b
    }
}

/// Certified test of `∏ π_i^{e_i} · q^{q_exp} = 1`.
pub fn certified_product_is_one(roots: &LabeledRoots, e: &[i64], q_exp: i64, gamma_order: u64) -> bool {
    assert_eq!(e.len(), roots.len());
    if e.iter().all(|&x| x == 0) && q_exp == 0 {
        return true;
    }
    let m = roots.required_precision(e, q_exp, gamma_order);
    let prec = m.max(roots.prec);
    if prec > roots.prec {
        let lifted = roots.hensel_lift_to(prec).expect("roots are simple");
        lifted.products_agree_at(e, q_exp, prec)
    } else {
        roots.products_agree_at(e, q_exp, prec)
    }
}

pub fn hensel_lift_to(roots: &LabeledRoots, prec: u32) -> Result<LabeledRoots, PadicError> {
    roots.hensel_lift_to(prec)
}

fn lcm_degrees(fac: &[(PolyFp, usize)]) -> usize {
    fac.iter().fold(1usize, |acc, (g, _)| acc.lcm(&g.degree()))
}

/// Finds and pairs the roots of a squarefree `poly` inside `field`.
pub fn label_roots(
    field: Arc<UnramifiedField>,
    poly: &IntPolynomial,
    q: &BigInt,
) -> Result<LabeledRoots, PadicError> {
    let ell = field.ell;
    let fac = factor_mod_prime(poly, ell).map_err(|_| PadicError::RootsMissing { found: 0, expected: poly.degree() })?;
    let residue_degree = lcm_degrees(&fac);
    let ff = field.residue_field();
    let mut found: Vec<Elem> = Vec::new();
    for (g, _) in &fac {
        found.extend(ff.roots_of(g));
    }
    found.sort();
    found.dedup();
    let n = poly.degree();
    if found.len() != n {
        return Err(PadicError::RootsMissing { found: found.len(), expected: n });
    }
    if n % 2 == 1 {
        return Err(PadicError::OddRootCount(n));
    }
    let qres = ff.constant((q.mod_floor(&BigInt::from(ell))).to_u64().unwrap());
    let mut used = vec![false; n];
    let mut first = Vec::new();
    let mut second = Vec::new();
    for i in 0..n {
        if used[i] {
            continue;
        }
        let partner = ff.mul(&qres, &ff.inv(&found[i]));
        let j = found.iter().position(|r| *r == partner).ok_or(PadicError::PairingFails)?;
        if j == i || used[j] {
            return Err(PadicError::PairingFails);
        }
        used[i] = true;
        used[j] = true;
        first.push(found[i].clone());
        second.push(found[j].clone());
    }
    first.extend(second);
    let ring = field.ring(1);
    let roots: Vec<PadicElement> = first.iter().map(|r| ring.from_residue(r)).collect();
    let dp = poly.derivative();
    if roots.iter().any(|x| !ring.is_unit(&ring.eval(&dp, x))) {
        return Err(PadicError::DerivativeNotUnit);
    }
    Ok(LabeledRoots { field, poly: poly.clone(), q: q.clone(), prec: 1, roots, residue_degree })
}

/// Picks the auxiliary prime for `poly` (the product of every polynomial
/// that must split in the same field).
pub fn choose_aux_prime(
    poly: &IntPolynomial,
    q: &BigInt,
    config: &AuxPrimeConfig,
) -> Result<(u64, usize), PadicError> {
    let start = config.min.max(3);
    for ell in start..=config.max {
        if !is_prime_u64(ell) || (q % ell).is_zero() {
            continue;
        }
        let Ok(fac) = factor_mod_prime(poly, ell) else { continue };
        if fac.iter().any(|(_, m)| *m > 1) {
            continue;
        }
        let deg: usize = fac.iter().map(|(g, _)| g.degree()).sum();
        if deg != poly.degree() {
            continue;
        }
        let f = lcm_degrees(&fac);
        if f <= config.max_residue_degree {
            return Ok((ell, f));
        }
    }
    Err(PadicError::NoSuitableAuxPrime(config.min, config.max))
}

pub fn build_splitting_field(
    poly: &IntPolynomial,
    q: &BigInt,
    config: &AuxPrimeConfig,
) -> Result<LabeledRoots, PadicError> {
    let (ell, f) = choose_aux_prime(poly, q, config)?;
    let field = Arc::new(UnramifiedField::new(ell, f));
    label_roots(field, poly, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    #[test]
    fn hensel_sqrt_two_mod_seven() {
        let field = Arc::new(UnramifiedField::new(7, 1));
        let ring = field.ring(1);
        let start = ring.from_int(&BigInt::from(3));
        let x = newton_lift(&field, &ip(&[-2, 0, 1]), &start, 1, 4).unwrap();
        assert_eq!(x.coeffs()[0], BigInt::from(2166));
        let sq = BigInt::from(2166).pow(2) - 2;
        assert!(Zero::is_zero(&(sq % BigInt::from(2401))));
    }

    #[test]
    fn double_root_is_rejected() {
        let field = Arc::new(UnramifiedField::new(7, 1));
        let ring = field.ring(1);
        let r = newton_lift(&field, &ip(&[0, 0, 1]), &ring.zero(), 1, 3);
        assert_eq!(r, Err(PadicError::DerivativeNotUnit));
    }

    #[test]
    fn toy_split_and_lift_is_idempotent() {
        let cfg = AuxPrimeConfig { min: 5, ..Default::default() };
        let lr = build_splitting_field(&ip(&[1, 0, 1]), &BigInt::from(1), &cfg);
        // q = 1 is not a real prime power but the pairing x * (1/x) = 1 works
        let lr = lr.unwrap();
        assert_eq!(lr.ell(), 5);
        assert_eq!(lr.residue_degree(), 1);
        let a = lr.hensel_lift_to(6).unwrap();
        let b = a.hensel_lift_to(6).unwrap();
        assert_eq!(a.roots(), b.roots());
        let c = lr.hensel_lift_to(3).unwrap().hensel_lift_to(6).unwrap();
        assert_eq!(a.roots(), c.roots());
    }

    #[test]
    fn pairing_holds() {
        let q = BigInt::from(5);
        let lr = build_splitting_field(&ip(&[5, -1, 1]), &q, &AuxPrimeConfig::default()).unwrap();
        let lr = lr.hensel_lift_to(10).unwrap();
        let ring = lr.ring();
        let prod = ring.mul(&lr.roots()[0], &lr.roots()[1]);
        assert_eq!(prod, ring.from_int(&q));
        assert!(certified_product_is_one(&lr, &[1, 1], -1, 2));
        assert!(certified_product_is_one(&lr, &[-1, -1], 1, 2));
        assert!(!certified_product_is_one(&lr, &[1, 0], 0, 2));
        assert!(!certified_product_is_one(&lr, &[2, -1], 0, 2));
    }

    #[test]
    fn skips_ramified_candidates() {
        // x^2 - x + 5 has discriminant -19; ℓ = 19 must be skipped
        let cfg = AuxPrimeConfig { min: 19, ..Default::default() };
        let (ell, _) = choose_aux_prime(&ip(&[5, -1, 1]), &BigInt::from(5), &cfg).unwrap();
        assert_ne!(ell, 19);
    }

    #[test]
    fn supersingular_pairs_fail_when_square_is_q() {
        // x^2 - 2 at q = 2: both roots satisfy π^2 = q
        let r = build_splitting_field(&ip(&[-2, 0, 1]), &BigInt::from(2), &AuxPrimeConfig::default());
        assert_eq!(r.unwrap_err(), PadicError::PairingFails);
    }
}

//! The multiplicative group generated by the Frobenius eigenvalues.
//!
//! Relations `e ∈ Z^n` with `∏ π_i^{e_i}` a root of unity are cut out by
//! valuations at one place above `p` together with the Galois action. In
//! the ordinary case the valuations are 0 or 1 and a candidate set of unit
//! roots is enumerated; otherwise every labeling compatible with the
//! Newton polygon is tried. Candidates whose lattice contains a
//! non-torsion element are discarded, and the survivors are summed.
//! Torsion is then removed exactly with residue-field discrete logs and
//! certified ℓ-adic products.

use crate::exactpoly::{is_prime_u64, prime_power_decompose, squarefree_factorization, IntPolynomial, WeilPolynomial};
use crate::finite_field::Elem;
use crate::intmat::{self, Mat};
use crate::padic::{certified_product_is_one, LabeledRoots};
use crate::perm::{Perm, PermGroup};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PhiError {
    #[error("polynomial is not ordinary")]
    NotOrdinary,
    #[error("no candidate partition passes the root-of-unity test")]
    NoValidPartition,
    #[error("no valuation labeling passes the root-of-unity test")]
    SlopeAssignmentAmbiguous,
    #[error("relation lattice is not stable under the Galois action")]
    InconsistentAction,
    #[error("a relation failed certification")]
    CertificationFailed,
}

/// Ordinary iff the middle coefficient is prime to `p`.
pub fn is_ordinary(p: &WeilPolynomial) -> bool {
    let (prime, _) = prime_power_decompose(p.q()).expect("validated prime power");
    !p.middle_coefficient().mod_floor(&prime).is_zero()
}

/// A set containing exactly one label from each pair.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrdinaryPartition {
    pub s: Vec<usize>,
}

/// `Z^n / M` together with coordinates on its free part.
#[derive(Clone, Debug)]
pub struct PhiGroup {
    pub n: usize,
    /// HNF basis of the relation lattice.
    pub relations: Mat,
    /// Smith diagonal padded with zeros to length `n`.
    pub invariant_factors: Vec<BigInt>,
    pub rank: usize,
    pub is_free: bool,
    /// Class of `q` in free coordinates.
    pub q_class: Vec<BigInt>,
    pub galois_perms: Vec<Perm>,
    gamma_order: u128,
    /// `x ↦ xV` diagonalizes the relations; the last `rank` coordinates are
    /// free.
    v: Mat,
    v_inv: Mat,
}

impl PhiGroup {
    pub fn gamma_order(&self) -> u128 {
        self.gamma_order
    }

    /// Nontrivial torsion invariants.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors.iter().filter(|d| !d.is_zero() && !d.is_one()).cloned().collect()
    }

    fn free_start(&self) -> usize {
        self.n - self.rank
    }

    /// Image of an exponent vector in the free quotient.
    pub fn free_image(&self, x: &[BigInt]) -> Vec<BigInt> {
        intmat::vec_mul(x, &self.v, self.n)[self.free_start()..].to_vec()
    }

    /// Image of `π_i`.
    pub fn weight(&self, i: usize) -> Vec<BigInt> {
        self.v[i][self.free_start()..].to_vec()
    }

    /// Matrix of a label permutation on the free quotient, acting on row
    /// vectors.
    pub fn galois_matrix(&self, sigma: &Perm) -> Mat {
        let fs = self.free_start();
        (fs..self.n)
            .map(|j| {
                // lift basis vector j, permute, project
                let lift = &self.v_inv[j];
                let mut moved = vec![BigInt::zero(); self.n];
                for (i, c) in lift.iter().enumerate() {
                    moved[sigma.apply(i)] = c.clone();
                }
                intmat::vec_mul(&moved, &self.v, self.n)[fs..].to_vec()
            })
            .collect()
    }
}

/// `lcm{u : φ(u) ≤ d}`, the exponent of any root-of-unity group in a field
/// of degree at most `d`.
pub fn root_of_unity_order_bound(d: u64) -> BigInt {
    let mut n = BigInt::one();
    for p in 2..=d + 1 {
        if !is_prime_u64(p) {
            continue;
        }
        let mut pk = p;
        let mut phi = p - 1;
        if phi > d {
            continue;
        }
        while phi * p <= d {
            phi *= p;
            pk *= p;
        }
        n *= pk;
    }
    n
}

fn small_prime_factors(n: &BigInt, limit: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut m = n.clone();
    for p in 2..=limit {
        if !is_prime_u64(p) {
            continue;
        }
        let mut e = 0;
        while (&m % p).is_zero() {
            m /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    debug_assert!(m.is_one());
    out
}

/// Residue of `∏ π_i^{e_i}`.
fn residue_product(roots: &LabeledRoots, res: &[Elem], e: &[BigInt]) -> Elem {
    let ff = roots.field().residue_field();
    let mut acc = ff.one();
    for (r, k) in res.iter().zip(e) {
        if k.is_zero() {
            continue;
        }
        let base = if k.is_negative() { ff.inv(r) } else { r.clone() };
        acc = ff.mul(&acc, &ff.pow(&base, &k.abs()));
    }
    acc
}

/// Torsion oracle for one relation candidate: `Some(u)` when
/// `∏ π_i^{e_i}` is a root of unity of exact order `u`.
struct TorsionTester<'a> {
    roots: &'a LabeledRoots,
    residues: Vec<Elem>,
    gamma_order: u64,
    /// gcd of the order bound with the residue unit group order
    exponent: BigInt,
    factors: Vec<(u64, u32)>,
}

impl<'a> TorsionTester<'a> {
    fn new(roots: &'a LabeledRoots, gamma_order: u64) -> Self {
        let ff = roots.field().residue_field();
        let bound = root_of_unity_order_bound(gamma_order);
        let exponent = bound.gcd(&(ff.order() - 1));
        let factors = small_prime_factors(&exponent, gamma_order + 1);
        Self { roots, residues: roots.residues(), gamma_order, exponent, factors }
    }

    fn order_of_residue(&self, z: &Elem) -> Option<u64> {
        let ff = self.roots.field().residue_field();
        if ff.pow(z, &self.exponent) != ff.one() {
            return None;
        }
        let mut u = self.exponent.clone();
        for &(p, _) in &self.factors {
            while (&u % p).is_zero() && ff.pow(z, &(&u / p)) == ff.one() {
                u /= p;
            }
        }
        u.to_u64()
    }

    fn torsion_order(&self, e: &[BigInt]) -> Option<u64> {
        let z = residue_product(self.roots, &self.residues, e);
        let u = self.order_of_residue(&z)?;
        let ue: Vec<i64> = e.iter().map(|x| (x * u).to_i64().expect("small relation")).collect();
        certified_product_is_one(self.roots, &ue, 0, self.gamma_order).then_some(u)
    }
}

/// Lattice `{e : Σ_i e_i v(σ(i)) = 0 ∀σ ∈ Γ}` for an integral valuation
/// vector.
fn valuation_kernel(v: &[BigInt], gamma: &[Perm]) -> Mat {
    let n = v.len();
    let rows: BTreeSet<Vec<BigInt>> =
        gamma.iter().map(|s| (0..n).map(|i| v[s.apply(i)].clone()).collect()).collect();
    let rows: Mat = rows.into_iter().collect();
    intmat::kernel(&rows, n)
}

/// The relation lattice for the ordinary candidate `s`.
pub fn valuation_constraints_ordinary(
    roots: &LabeledRoots,
    gamma: &PermGroup,
    s: &OrdinaryPartition,
) -> Mat {
    let n = roots.len();
    let mut v = vec![BigInt::zero(); n];
    for &i in &s.s {
        v[i] = BigInt::one();
    }
    valuation_kernel(&v, &gamma.elements())
}

fn passes(tester: &TorsionTester, lattice: &Mat) -> bool {
    lattice.iter().all(|e| tester.torsion_order(e).is_some())
}

fn partition_of_mask(mask: u64, h: usize) -> OrdinaryPartition {
    OrdinaryPartition { s: (0..h).map(|k| if mask >> k & 1 == 1 { k + h } else { k }).collect() }
}

fn image_partition(sigma: &Perm, s: &OrdinaryPartition) -> OrdinaryPartition {
    let mut v: Vec<usize> = s.s.iter().map(|&i| sigma.apply(i)).collect();
    v.sort_unstable();
    OrdinaryPartition { s: v }
}

/// Every candidate set of unit roots whose lattice consists of torsion
/// relations, closed under the Galois action.
pub fn find_ordinary_partition(
    roots: &LabeledRoots,
    gamma: &PermGroup,
) -> Result<Vec<OrdinaryPartition>, PhiError> {
    let n = roots.len();
    let h = n / 2;
    let elems = gamma.elements();
    let tester = TorsionTester::new(roots, gamma.order() as u64);
    let mut reps: Vec<OrdinaryPartition> = Vec::new();
    let mut seen = BTreeSet::new();
    for mask in 0..(1u64 << h) {
        let s = partition_of_mask(mask, h);
        if seen.contains(&s) {
            continue;
        }
        for g in &elems {
            seen.insert(image_partition(g, &s));
        }
        reps.push(s);
    }
    let valid: Vec<OrdinaryPartition> = reps
        .into_par_iter()
        .filter(|s| {
            let m = valuation_constraints_ordinary(roots, gamma, s);
            passes(&tester, &m)
        })
        .collect();
    if valid.is_empty() {
        return Err(PhiError::NoValidPartition);
    }
    let mut out: BTreeSet<OrdinaryPartition> = BTreeSet::new();
    for s in &valid {
        for g in &elems {
            out.insert(image_partition(g, s));
        }
    }
    Ok(out.into_iter().collect())
}

/// Root valuations of `poly` at `prime`, normalized so `v(q) = 1`, read
/// off the Newton polygon; one entry per root.
pub fn newton_slopes(poly: &IntPolynomial, prime: &BigInt, d: u32) -> Vec<BigRational> {
    let pts: Vec<(i64, i64)> = poly
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| {
            let mut c = c.abs();
            let mut v = 0;
            while (&c % prime).is_zero() {
                c /= prime;
                v += 1;
            }
            (i as i64, v)
        })
        .collect();
    // lower convex hull
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut out = Vec::new();
    for w in hull.windows(2) {
        let (i1, v1) = w[0];
        let (i2, v2) = w[1];
        let s = BigRational::new(BigInt::from(v1 - v2), BigInt::from((i2 - i1) * d as i64));
        for _ in i1..i2 {
            out.push(s.clone());
        }
    }
    out.sort();
    out
}

/// All labelings of the slope multiset compatible with `v(ī) = 1 − v(i)`.
fn slope_assignments(slopes: &[BigRational], h: usize) -> Vec<Vec<BigRational>> {
    fn rec(
        k: usize,
        h: usize,
        pool: &mut Vec<BigRational>,
        cur: &mut Vec<BigRational>,
        out: &mut Vec<Vec<BigRational>>,
    ) {
        if k == h {
            let mut v = vec![BigRational::zero(); 2 * h];
            for (i, s) in cur.iter().enumerate() {
                v[i] = s.clone();
                v[i + h] = BigRational::one() - s;
            }
            out.push(v);
            return;
        }
        let choices: BTreeSet<BigRational> = pool.iter().cloned().collect();
        for s in choices {
            let partner = BigRational::one() - &s;
            let Some(a) = pool.iter().position(|x| *x == s) else { continue };
            let sv = pool.remove(a);
            if let Some(b) = pool.iter().position(|x| *x == partner) {
                let pv = pool.remove(b);
                cur.push(sv.clone());
                rec(k + 1, h, pool, cur, out);
                cur.pop();
                pool.push(pv);
            }
            pool.push(sv);
            pool.sort();
        }
    }
    let mut pool = slopes.to_vec();
    pool.sort();
    let mut out = Vec::new();
    rec(0, h, &mut pool, &mut Vec::new(), &mut out);
    out
}

fn integral_valuations(v: &[BigRational]) -> Vec<BigInt> {
    let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    v.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect()
}

/// Structure of Φ from the root-of-unity lattice `m0`.
fn structure_from(roots: &LabeledRoots, gamma: &PermGroup, m0: Mat) -> Result<PhiGroup, PhiError> {
    let n = roots.len();
    let gamma_order = gamma.order();
    let tester = TorsionTester::new(roots, gamma_order as u64);
    let relations = torsion_free_part(&tester, &m0, n)?;
    for e in &relations {
        let ei: Vec<i64> = e.iter().map(|x| x.to_i64().expect("small relation")).collect();
        if !certified_product_is_one(roots, &ei, 0, gamma_order as u64) {
            return Err(PhiError::CertificationFailed);
        }
    }
    for g in gamma.generators() {
        let moved: Mat = relations
            .iter()
            .map(|e| {
                let mut x = vec![BigInt::zero(); n];
                for (i, c) in e.iter().enumerate() {
                    x[g.apply(i)] = c.clone();
                }
                x
            })
            .collect();
        if !intmat::same_lattice(&moved, &relations, n) {
            return Err(PhiError::InconsistentAction);
        }
    }
    let k = relations.len();
    let (diag, v) = if k == 0 {
        (Vec::new(), intmat::identity(n))
    } else {
        let s = intmat::smith(&relations, n);
        (s.diag, s.v)
    };
    let v_inv = intmat::inverse_unimodular(&v);
    let mut invariant_factors = diag.clone();
    invariant_factors.resize(n, BigInt::zero());
    let rank = n - k;
    let is_free = diag.iter().all(|d| d.is_one());
    let mut phi = PhiGroup {
        n,
        relations,
        invariant_factors,
        rank,
        is_free,
        q_class: Vec::new(),
        galois_perms: gamma.generators().to_vec(),
        gamma_order,
        v,
        v_inv,
    };
    let mut qv = vec![BigInt::zero(); n];
    if n > 0 {
        qv[0] = BigInt::one();
        qv[roots.partner(0)] += 1;
    }
    phi.q_class = phi.free_image(&qv);
    Ok(phi)
}

/// Kernel of `M0 → μ`, via discrete logs in each primary part.
fn torsion_free_part(tester: &TorsionTester, m0: &Mat, n: usize) -> Result<Mat, PhiError> {
    let k = m0.len();
    if k == 0 {
        return Ok(Vec::new());
    }
    let ff = tester.roots.field().residue_field();
    let zetas: Vec<Elem> = m0.iter().map(|e| residue_product(tester.roots, &tester.residues, e)).collect();
    let mut orders = Vec::with_capacity(k);
    for (e, z) in m0.iter().zip(&zetas) {
        let u = tester.order_of_residue(z).ok_or(PhiError::CertificationFailed)?;
        // the residue order is the true order once u·e is certified
        let ue: Vec<i64> = e.iter().map(|x| (x * u).to_i64().expect("small relation")).collect();
        if !certified_product_is_one(tester.roots, &ue, 0, tester.gamma_order) {
            return Err(PhiError::CertificationFailed);
        }
        orders.push(u);
    }
    let total = orders.iter().fold(1u64, |a, &b| a.lcm(&b));
    let mut rows: Mat = Vec::new();
    let primes: Vec<(u64, u32)> = small_prime_factors(&BigInt::from(total), total.max(2));
    let extra = primes.len();
    for (pi, &(p, a)) in primes.iter().enumerate() {
        let pa = p.pow(a);
        let cof = BigInt::from(total / pa);
        let parts: Vec<Elem> = zetas.iter().map(|z| ff.pow(z, &cof)).collect();
        // a generator of the p-part: some part of exact order p^a
        let gen = parts
            .iter()
            .find(|z| ff.pow(z, &BigInt::from(pa / p)) != ff.one())
            .expect("lcm attained")
            .clone();
        let mut table = Vec::with_capacity(pa as usize);
        let mut x = ff.one();
        for _ in 0..pa {
            table.push(x.clone());
            x = ff.mul(&x, &gen);
        }
        let mut row: Vec<BigInt> = parts
            .iter()
            .map(|z| BigInt::from(table.iter().position(|t| t == z).expect("in cyclic group")))
            .collect();
        for j in 0..extra {
            row.push(if j == pi { BigInt::from(pa) } else { BigInt::zero() });
        }
        rows.push(row);
    }
    let ker = intmat::kernel(&rows, k + extra);
    let coeffs: Mat = ker.iter().map(|r| r[..k].to_vec()).collect();
    let m = intmat::mat_mul(&coeffs, m0, n);
    Ok(intmat::hnf(&m, n))
}

/// Φ for an ordinary Weil polynomial.
pub fn phi_structure(p: &WeilPolynomial, roots: &LabeledRoots, gamma: &PermGroup) -> Result<PhiGroup, PhiError> {
    if !is_ordinary(p) {
        return Err(PhiError::NotOrdinary);
    }
    let n = roots.len();
    let parts = find_ordinary_partition(roots, gamma)?;
    let mut rows: Mat = Vec::new();
    for s in &parts {
        rows.extend(valuation_constraints_ordinary(roots, gamma, s));
    }
    let m0 = intmat::hnf(&rows, n);
    structure_from(roots, gamma, m0)
}

/// Φ from Newton-polygon valuations; works for any reduction type.
pub fn phi_structure_general(p: &WeilPolynomial, roots: &LabeledRoots, gamma: &PermGroup) -> Result<PhiGroup, PhiError> {
    let n = roots.len();
    let (prime, d) = prime_power_decompose(p.q()).expect("validated prime power");
    let slopes = newton_slopes(roots.poly(), &prime, d);
    let elems = gamma.elements();
    let tester = TorsionTester::new(roots, gamma.order() as u64);
    let mut reps: Vec<Vec<BigInt>> = Vec::new();
    let mut seen = BTreeSet::new();
    for v in slope_assignments(&slopes, n / 2) {
        let v = integral_valuations(&v);
        if seen.contains(&v) {
            continue;
        }
        for g in &elems {
            let mut w = vec![BigInt::zero(); n];
            for (i, c) in v.iter().enumerate() {
                w[g.apply(i)] = c.clone();
            }
            seen.insert(w);
        }
        reps.push(v);
    }
    let valid: Vec<Mat> = reps
        .into_par_iter()
        .filter_map(|v| {
            let m = valuation_kernel(&v, &elems);
            passes(&tester, &m).then_some(m)
        })
        .collect();
    if valid.is_empty() {
        return Err(PhiError::SlopeAssignmentAmbiguous);
    }
    // a Galois-conjugate labeling gives the conjugate lattice, and the sum
    // over one representative per class is already Galois-stable once
    // conjugates are included
    let mut rows: Mat = Vec::new();
    for m in &valid {
        for g in &elems {
            for e in m {
                let mut x = vec![BigInt::zero(); n];
                for (i, c) in e.iter().enumerate() {
                    x[g.apply(i)] = c.clone();
                }
                rows.push(x);
            }
        }
    }
    let m0 = intmat::hnf(&rows, n);
    structure_from(roots, gamma, m0)
}

/// Ordinary method when applicable, else the valuation method.
pub fn compute_phi(p: &WeilPolynomial, roots: &LabeledRoots, gamma: &PermGroup) -> Result<PhiGroup, PhiError> {
    if is_ordinary(p) {
        phi_structure(p, roots, gamma)
    } else {
        phi_structure_general(p, roots, gamma)
    }
}

/// Multiplicity in `p` of each labeled root.
pub fn root_multiplicities(p: &WeilPolynomial, roots: &LabeledRoots) -> Vec<usize> {
    let fac = squarefree_factorization(p.poly()).expect("nonzero");
    let ring = roots.field().ring(1);
    roots
        .roots()
        .iter()
        .map(|x| {
            let x = ring.truncate(x);
            fac.iter()
                .find(|(f, _)| ring.is_zero(&ring.eval(f, &x)))
                .map(|(_, m)| *m)
                .expect("every root lies on a factor")
        })
        .collect()
}

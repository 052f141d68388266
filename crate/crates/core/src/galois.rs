//! Galois groups of Weil polynomials as permutation groups on labeled
//! ℓ-adic roots.
//!
//! The group is found by descent from the pairing overgroup: at each step,
//! for every conjugacy class of maximal subgroups `H` of the current group
//! `G`, an `H`-invariant `F` with stabilizer exactly `H` is evaluated at the
//! roots on each coset. An evaluation that is a rational integer and
//! differs from every other coset value proves that the true group lies in
//! that coset's stabilizer. Rationality is certified by a norm bound, so a
//! congruence mod `ℓ^m` with a small integer can only mean equality.

use crate::exactpoly::{squarefree_part, ExactPolyError, IntPolynomial, WeilPolynomial};
use crate::padic::{
    build_splitting_field, choose_aux_prime, label_roots, AuxPrimeConfig, LabeledRoots, PadicElement, PadicError,
    UnramifiedField,
};
use crate::perm::{Perm, PermGroup};
use crate::subgroups::{Bits, SubgroupError, SubgroupLattice, DEFAULT_ELEMENT_CAP};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GaloisError {
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Subgroup(#[from] SubgroupError),
    #[error(transparent)]
    Poly(#[from] ExactPolyError),
    #[error("roots collide modulo the auxiliary prime")]
    RootsCollideModL,
    #[error("certification needs precision {0}, above the configured limit")]
    PrecisionExhausted(u32),
    #[error("resolvent values stay degenerate below a group of order {0}")]
    AmbiguousDescent(usize),
    #[error("the two polynomials share a factor")]
    PolynomialsNotCoprime,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisConfig {
    pub aux: AuxPrimeConfig,
    pub element_cap: usize,
    /// Transforms `(c, d, e)` tried as `π_i + c·π_ī + d·π_i² + e·π_i³`
    /// before giving up on a class.
    pub shifts: Vec<(i64, i64, i64)>,
    pub max_precision: u32,
}

impl Default for GaloisConfig {
    fn default() -> Self {
        Self {
            aux: AuxPrimeConfig::default(),
            element_cap: DEFAULT_ELEMENT_CAP,
            shifts: vec![(0, 0, 0), (2, 0, 0), (0, 1, 0), (2, 1, 1), (-3, 1, 1), (3, -2, 1), (5, 3, -1)],
            max_precision: 200_000,
        }
    }
}

/// Centralizer of the pairing `i ↦ i + n/2 (mod n)` in `S_n`.
pub fn pairing_overgroup_of_degree(n: usize) -> PermGroup {
    assert!(n.is_multiple_of(2), "pairing needs an even number of labels");
    let h = n / 2;
    if n == 0 {
        return PermGroup::trivial(0);
    }
    let mut gens = vec![Perm::from_cycles(n, &[&[0, h]])];
    if h > 1 {
        gens.push(Perm::from_cycles(n, &[&[0, 1], &[h, h + 1]]));
        let c1: Vec<usize> = (0..h).collect();
        let c2: Vec<usize> = (h..n).collect();
        gens.push(Perm::from_cycles(n, &[&c1, &c2]));
    }
    PermGroup::new(n, gens)
}

pub fn pairing_overgroup(roots: &LabeledRoots) -> PermGroup {
    pairing_overgroup_of_degree(roots.len())
}

/// The permutation of labels induced by `x ↦ x^ℓ` on residues.
pub fn local_frobenius(roots: &LabeledRoots) -> Result<Perm, GaloisError> {
    let res = roots.residues();
    let ff = roots.field().residue_field();
    let ell = BigInt::from(roots.ell());
    let mut img = Vec::with_capacity(res.len());
    for r in &res {
        let s = ff.pow(r, &ell);
        let j = res.iter().position(|x| *x == s).ok_or(GaloisError::RootsCollideModL)?;
        img.push(j);
    }
    let mut sorted = img.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != img.len() {
        return Err(GaloisError::RootsCollideModL);
    }
    Ok(Perm::from_images(img))
}

/// Galois group of the squarefree part of `p`, on the labels of `roots`.
pub fn galois_group(p: &WeilPolynomial, roots: &LabeledRoots, config: &GaloisConfig) -> Result<PermGroup, GaloisError> {
    let sqf = squarefree_part(p.poly())?;
    debug_assert_eq!(&sqf, roots.poly());
    let mut sys = RootSystem::new(vec![roots.clone()]);
    let start = pairing_overgroup(roots);
    let g = descend(&start, &mut sys, config)?;
    let frob = local_frobenius(roots)?;
    debug_assert!(g.contains(&frob), "Frobenius must lie in the Galois group");
    Ok(g)
}

/// Builds the splitting field for the squarefree part of `p` and computes
/// its Galois group.
pub fn galois_group_of(p: &WeilPolynomial, config: &GaloisConfig) -> Result<(LabeledRoots, PermGroup), GaloisError> {
    let sqf = squarefree_part(p.poly())?;
    let roots = build_splitting_field(&sqf, p.q(), &config.aux)?;
    let g = galois_group(p, &roots, config)?;
    Ok((roots, g))
}

/// Output of [`relative_group`]: labeled roots of both polynomials in a
/// common field and the groups acting on the first set of labels.
#[derive(Clone, Debug)]
pub struct RelativeGroups {
    pub roots_p: LabeledRoots,
    pub roots_q: LabeledRoots,
    pub gamma: PermGroup,
    pub gamma_q: PermGroup,
    /// The subgroup of `gamma` fixing every root of the second polynomial.
    pub w: PermGroup,
}

/// Galois group of the first polynomial and its subgroup over the field
/// generated by the roots of the second.
pub fn relative_group(
    p_p: &WeilPolynomial,
    p_q: &WeilPolynomial,
    config: &GaloisConfig,
) -> Result<RelativeGroups, GaloisError> {
    let sp = squarefree_part(p_p.poly())?;
    let sq = squarefree_part(p_q.poly())?;
    if sp.gcd(&sq).degree() > 0 {
        return Err(GaloisError::PolynomialsNotCoprime);
    }
    let prod = &sp * &sq;
    let qq = p_p.q() * p_q.q();
    let (ell, f) = choose_aux_prime(&prod, &qq, &config.aux)?;
    let field = Arc::new(UnramifiedField::new(ell, f));
    let roots_p = label_roots(field.clone(), &sp, p_p.q())?;
    let roots_q = label_roots(field, &sq, p_q.q())?;
    let gamma_p = descend(&pairing_overgroup(&roots_p), &mut RootSystem::new(vec![roots_p.clone()]), config)?;
    let gamma_q = descend(&pairing_overgroup(&roots_q), &mut RootSystem::new(vec![roots_q.clone()]), config)?;
    let np = roots_p.len();
    let nq = roots_q.len();
    let n = np + nq;
    let mut gens = Vec::new();
    for g in gamma_p.generators() {
        let mut img = g.images();
        img.extend(np..n);
        gens.push(Perm::from_images(img));
    }
    for g in gamma_q.generators() {
        let mut img: Vec<usize> = (0..np).collect();
        img.extend(g.images().into_iter().map(|x| x + np));
        gens.push(Perm::from_images(img));
    }
    let start = PermGroup::new(n, gens);
    let mut sys = RootSystem::new(vec![roots_p.clone(), roots_q.clone()]);
    let gamma0 = descend(&start, &mut sys, config)?;
    let restrict = |g: &Perm| Perm::from_images(g.images()[..np].to_vec());
    let gamma = PermGroup::new(np, gamma0.generators().iter().map(restrict).collect());
    let w_gens: Vec<Perm> = gamma0
        .elements()
        .into_iter()
        .filter(|g| (np..n).all(|i| g.apply(i) == i))
        .map(|g| restrict(&g))
        .collect();
    let w = PermGroup::new(np, crate::perm::reduce_generators(np, w_gens));
    debug_assert!(gamma == gamma_p);
    Ok(RelativeGroups { roots_p, roots_q, gamma, gamma_q, w })
}

/// Several labeled root sets in one field, concatenated.
struct RootSystem {
    sets: Vec<LabeledRoots>,
    /// `(set, index within set)` for each global label.
    label: Vec<(usize, usize)>,
    offsets: Vec<usize>,
}

impl RootSystem {
    fn new(sets: Vec<LabeledRoots>) -> Self {
        let mut label = Vec::new();
        let mut offsets = Vec::new();
        for (s, r) in sets.iter().enumerate() {
            offsets.push(label.len());
            label.extend((0..r.len()).map(|i| (s, i)));
        }
        Self { sets, label, offsets }
    }

    fn len(&self) -> usize {
        self.label.len()
    }

    fn field(&self) -> &Arc<UnramifiedField> {
        self.sets[0].field()
    }

    fn partner(&self, k: usize) -> usize {
        let (s, i) = self.label[k];
        self.offsets[s] + self.sets[s].partner(i)
    }

    fn q_of(&self, k: usize) -> &BigInt {
        self.sets[self.label[k].0].q()
    }

    fn ensure_precision(&mut self, m: u32) -> Result<(), GaloisError> {
        for s in self.sets.iter_mut() {
            if s.precision() < m {
                let target = m.max(s.precision() * 2);
                *s = s.hensel_lift_to(target)?;
            }
        }
        Ok(())
    }

    /// `π_k + c·π_k̄ + d·π_k² + e·π_k³` at precision `m`.
    fn shifted(&self, m: u32, (c, d, e): (i64, i64, i64)) -> Vec<PadicElement> {
        let ring = self.field().ring(m);
        (0..self.len())
            .map(|k| {
                let (s, i) = self.label[k];
                let x = ring.truncate(&self.sets[s].roots()[i]);
                let (t, j) = self.label[self.partner(k)];
                let y = ring.truncate(&self.sets[t].roots()[j]);
                let mut out = ring.add(&x, &ring.scale(&y, &BigInt::from(c)));
                let x2 = ring.mul(&x, &x);
                if d != 0 {
                    out = ring.add(&out, &ring.scale(&x2, &BigInt::from(d)));
                }
                if e != 0 {
                    out = ring.add(&out, &ring.scale(&ring.mul(&x2, &x), &BigInt::from(e)));
                }
                out
            })
            .collect()
    }
}

type Monomial = Vec<u8>;

fn act(g: &Perm, a: &[u8]) -> Monomial {
    let mut out = vec![0u8; a.len()];
    for (i, &e) in a.iter().enumerate() {
        out[g.apply(i)] = e;
    }
    out
}

fn act_set(g: &Perm, f: &[Monomial]) -> Vec<Monomial> {
    let mut v: Vec<Monomial> = f.iter().map(|a| act(g, a)).collect();
    v.sort();
    v
}

fn orbit_sum(h: &[Perm], a: &[u8]) -> Vec<Monomial> {
    let mut v: Vec<Monomial> = h.iter().map(|g| act(g, a)).collect();
    v.sort();
    v.dedup();
    v
}

fn stabilizer_order_at_most(g: &[Perm], f: &[Monomial], limit: usize) -> usize {
    let mut count = 0;
    for x in g {
        if act_set(x, f) == f {
            count += 1;
            if count > limit {
                break;
            }
        }
    }
    count
}

/// An `H`-invariant whose stabilizer in `G` is exactly `H`.
fn choose_invariant(h: &[Perm], g: &[Perm], n: usize) -> Vec<Monomial> {
    const MAX_TRIES: usize = 4000;
    let mut tried = 0;
    let mut seen = std::collections::HashSet::new();
    for k in 1..n {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let mut a = vec![0u8; n];
            for &i in &idx {
                a[i] = 1;
            }
            let f = orbit_sum(h, &a);
            if seen.insert(f.clone()) {
                tried += 1;
                if stabilizer_order_at_most(g, &f, h.len()) == h.len() {
                    return f;
                }
                if tried >= MAX_TRIES {
                    break;
                }
            }
            // next k-combination in lex order
            let mut i = k;
            while i > 0 && idx[i - 1] == n - k + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
        if tried >= MAX_TRIES {
            break;
        }
    }
    // distinct exponents have trivial stabilizer in S_n
    let a: Monomial = (1..=n as u8).collect();
    orbit_sum(h, &a)
}

/// Upper bound on `|F(y)|` at every complex embedding, where
/// `|y_k| ≤ (1+|c|)√q_k + |d|·q_k + |e|·q_k^{3/2}`.
fn archimedean_bound(sys: &RootSystem, f: &[Monomial], (c, d, e): (i64, i64, i64)) -> BigInt {
    let ceil_sqrt = |x: BigInt| {
        let r = x.sqrt();
        if &r * &r == x {
            r
        } else {
            r + 1
        }
    };
    let per: Vec<BigInt> = (0..sys.len())
        .map(|k| {
            let q = sys.q_of(k);
            let c1 = BigInt::from(1 + c.unsigned_abs());
            let e1 = BigInt::from(e.unsigned_abs());
            ceil_sqrt(&c1 * &c1 * q) + BigInt::from(d.unsigned_abs()) * q + ceil_sqrt(&e1 * &e1 * q * q * q)
        })
        .collect();
    f.iter()
        .map(|a| a.iter().enumerate().fold(BigInt::one(), |acc, (k, &e)| acc * per[k].pow(e as u32)))
        .sum()
}

/// Smallest `m` with `ℓ^m > (2B)^k`.
fn precision_for(ell: u64, bound: &BigInt, k: usize) -> u32 {
    let target = (bound * 2u32).pow(k as u32);
    let l = BigInt::from(ell);
    let est = (target.bits() as f64 / (ell as f64).log2()).floor() as u32;
    let mut m = est.saturating_sub(2).max(1);
    while l.pow(m) <= target {
        m += 1;
    }
    m
}

fn eval_invariant(sys_field: &UnramifiedField, m: u32, ys: &[PadicElement], f: &[Monomial]) -> PadicElement {
    let ring = sys_field.ring(m);
    let maxe = f.iter().flat_map(|a| a.iter().copied()).max().unwrap_or(0) as usize;
    let pows: Vec<Vec<PadicElement>> = ys
        .iter()
        .map(|y| {
            let mut v = vec![ring.one()];
            for e in 1..=maxe {
                let next = ring.mul(&v[e - 1], y);
                v.push(next);
            }
            v
        })
        .collect();
    let mut acc = ring.zero();
    for a in f {
        let mut t = ring.one();
        for (k, &e) in a.iter().enumerate() {
            if e > 0 {
                t = ring.mul(&t, &pows[k][e as usize]);
            }
        }
        acc = ring.add(&acc, &t);
    }
    acc
}

fn symmetric_integer(field: &UnramifiedField, m: u32, x: &PadicElement) -> Option<BigInt> {
    let ring = field.ring(m);
    let c = ring.as_integer(x)?;
    let md = ring.modulus();
    Some(if &c * 2 > *md { c - md } else { c })
}

enum ClassOutcome {
    Excluded,
    Descend(Bits),
}

/// Decides whether the group lies in a conjugate of `h` (inside `g`).
fn test_class(
    lat: &SubgroupLattice,
    g_idx: usize,
    h_idx: usize,
    sys: &mut RootSystem,
    config: &GaloisConfig,
) -> Result<ClassOutcome, GaloisError> {
    let table = lat.table();
    let g_elems: Vec<usize> = lat.subgroup(g_idx).bits.iter().collect();
    let g_perms: Vec<Perm> = g_elems.iter().map(|&i| table.element(i).clone()).collect();
    let h_perms: Vec<Perm> = lat.subgroup(h_idx).bits.iter().map(|i| table.element(i).clone()).collect();
    let n = sys.len();
    let generic: Monomial = (1..=n as u8).collect();
    let mut invariants = vec![choose_invariant(&h_perms, &g_perms, n)];
    let fallback = orbit_sum(&h_perms, &generic);
    if fallback != invariants[0] {
        invariants.push(fallback);
    }
    let ell = sys.field().ell();
    for f in &invariants {
        let mut orbit: BTreeMap<Vec<Monomial>, ()> = BTreeMap::new();
        for x in &g_perms {
            orbit.insert(act_set(x, f), ());
        }
        let images: Vec<Vec<Monomial>> = orbit.into_keys().collect();
        let index = images.len();
        debug_assert_eq!(index * h_perms.len(), g_perms.len());
        for &c in &config.shifts {
            let bound = archimedean_bound(sys, f, c);
            let m = precision_for(ell, &bound, index);
            if m > config.max_precision {
                return Err(GaloisError::PrecisionExhausted(m));
            }
            sys.ensure_precision(m)?;
            let ys = sys.shifted(m, c);
            let field = sys.field().clone();
            let values: Vec<PadicElement> = images.iter().map(|fi| eval_invariant(&field, m, &ys, fi)).collect();
            let rational: Vec<usize> = (0..index)
                .filter(|&j| symmetric_integer(&field, m, &values[j]).is_some_and(|v| v.abs() <= bound))
                .collect();
            if rational.is_empty() {
                return Ok(ClassOutcome::Excluded);
            }
            let unique: Vec<usize> = rational
                .iter()
                .copied()
                .filter(|&j| (0..index).all(|k| k == j || values[k] != values[j]))
                .collect();
            if unique.is_empty() {
                continue;
            }
            let mut bits: Option<Bits> = None;
            for j in unique {
                let stab = lat.bits_of_elements(
                    g_elems.iter().zip(&g_perms).filter(|(_, x)| act_set(x, &images[j]) == images[j]).map(|(&i, _)| i),
                );
                bits = Some(match bits {
                    None => stab,
                    Some(b) => b.and(&stab),
                });
            }
            return Ok(ClassOutcome::Descend(bits.unwrap()));
        }
    }
    Err(GaloisError::AmbiguousDescent(g_perms.len()))
}

fn descend(start: &PermGroup, sys: &mut RootSystem, config: &GaloisConfig) -> Result<PermGroup, GaloisError> {
    if start.is_trivial() {
        return Ok(start.clone());
    }
    let lat = SubgroupLattice::new(start, config.element_cap)?;
    let mut g = lat.top();
    'outer: loop {
        let max = lat.maximal_subgroups(g);
        let classes = lat.conjugacy_classes(&max, g);
        for class in classes {
            match test_class(&lat, g, class[0], sys, config)? {
                ClassOutcome::Excluded => {}
                ClassOutcome::Descend(bits) => {
                    g = lat.find_bits(&bits).expect("stabilizers are subgroups");
                    continue 'outer;
                }
            }
        }
        return Ok(lat.to_perm_group(g));
    }
}

/// Convenience for tests and callers holding a plain polynomial.
pub fn squarefree_labeled(
    poly: &IntPolynomial,
    q: &BigInt,
    config: &AuxPrimeConfig,
) -> Result<LabeledRoots, GaloisError> {
    let sqf = squarefree_part(poly)?;
    Ok(build_splitting_field(&sqf, q, config)?)
}

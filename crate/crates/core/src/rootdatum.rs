//! Root data from roots plus a Weyl group action, the outer Galois action,
//! and the quotient by the class of `q`.
//!
//! Coroots are pinned down by reflections. The form `B = Σ ωᵀω` over the
//! weights is Weyl invariant and positive definite, and a reflection in a
//! finite group is orthogonal for every invariant form, so the only
//! candidate for the reflection negating `α` is `x ↦ x − 2B(x,α)/B(α,α)·α`.
//! That candidate is then checked to be integral and to lie in `W`.

use crate::intmat;
use crate::matgroup::{apply, dot, identity, mat_mul, IMat, MatGroup, Vector};
use crate::perm::PermGroup;
use crate::rootfinder::{qspan, CharacterLattice, LieType, RootComponent};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// Largest group the coset enumeration will expand.
pub const MAX_ENUMERATED_ORDER: u128 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DatumError {
    #[error("no reflection in the Weyl group negates root {0:?}")]
    NoReflectionFound(Vector),
    #[error("root datum axiom fails: {0}")]
    AxiomViolation(String),
    #[error("reflections generate a group of order {generated}, expected {expected}")]
    WeylMismatch { generated: u128, expected: u128 },
    #[error("Weyl group is not a normal subgroup of the Galois group")]
    NotASubgroup,
    #[error("group of order {0} is too large to enumerate")]
    GroupTooLarge(u128),
    #[error("class of q is not primitive in the character lattice")]
    QClassNotPrimitive,
    #[error("class of q is not fixed by the Galois action")]
    QClassNotInvariant,
    #[error("quotient map is not injective on {0}")]
    NotBijective(&'static str),
}

#[derive(Clone, Debug)]
pub struct RootDatum {
    pub rank: usize,
    /// Sorted roots.
    pub roots: Vec<Vector>,
    /// `coroots[i]` pairs with `roots[i]` by the dot product.
    pub coroots: Vec<Vector>,
    pub simple_roots: Vec<Vector>,
    /// Generated by the simple reflections.
    pub weyl: MatGroup,
    pub weyl_order: u128,
    pub components: Vec<(LieType, Vec<Vector>)>,
}

impl RootDatum {
    pub fn coroot_of(&self, alpha: &[i64]) -> Option<&Vector> {
        self.roots.binary_search_by(|r| r.as_slice().cmp(alpha)).ok().map(|i| &self.coroots[i])
    }

    /// `x ↦ x − ⟨x, α∨⟩ α`.
    pub fn reflection(&self, i: usize) -> IMat {
        reflection_matrix(&self.roots[i], &self.coroots[i])
    }

    pub fn is_torus(&self) -> bool {
        self.roots.is_empty()
    }
}

pub fn reflection_matrix(alpha: &[i64], coroot: &[i64]) -> IMat {
    let n = alpha.len();
    let mut m = identity(n);
    for i in 0..n {
        for j in 0..n {
            m[i][j] -= coroot[i] * alpha[j];
        }
    }
    m
}

/// A Weyl invariant positive definite form on `X ⊗ Q`.
///
/// `S = Σ ωᵀω` satisfies `gᵀSg = S`, so it is invariant for the dual
/// action; its inverse is invariant for `x ↦ xg`.
pub fn invariant_form(weights: &[Vector], n: usize) -> Vec<Vec<BigRational>> {
    let mut s = vec![vec![BigInt::zero(); n]; n];
    for w in weights {
        for i in 0..n {
            for j in 0..n {
                s[i][j] += w[i] * w[j];
            }
        }
    }
    intmat::rational_inverse(&s).expect("weights span the lattice")
}

/// Coroots for `roots`, in order, from the Weyl action on the weights.
pub fn coroots_from_weyl(x: &CharacterLattice, roots: &[Vector]) -> Result<Vec<Vector>, DatumError> {
    let pts = x.weight_vectors();
    let b = invariant_form(&pts, x.rank);
    let wp = x.weyl.perm_rep(&pts);
    roots
        .iter()
        .map(|alpha| {
            let ba: Vec<BigRational> = b
                .iter()
                .map(|row| row.iter().zip(alpha).map(|(c, a)| c * BigInt::from(*a)).sum())
                .collect();
            let aba: BigRational = ba.iter().zip(alpha).map(|(c, a)| c * BigInt::from(*a)).sum();
            if aba.is_zero() {
                return Err(DatumError::NoReflectionFound(alpha.clone()));
            }
            let two = BigRational::from_integer(BigInt::from(2));
            let coroot: Option<Vector> = ba
                .iter()
                .map(|c| {
                    let v = &two * c / &aba;
                    if v.is_integer() { v.to_integer().to_i64() } else { None }
                })
                .collect();
            let coroot = coroot.ok_or_else(|| DatumError::NoReflectionFound(alpha.clone()))?;
            let s = reflection_matrix(alpha, &coroot);
            if !x.weyl.contains_via(&wp, &pts, &s) {
                return Err(DatumError::NoReflectionFound(alpha.clone()));
            }
            Ok(coroot)
        })
        .collect()
}

/// Roots positive for a generic functional.
pub fn positive_roots(roots: &[Vector]) -> Vec<Vector> {
    let n = roots.first().map_or(0, |r| r.len());
    // weights 1, K, K², ... with K beyond any coordinate spread
    let k = 1 + 2 * roots.iter().flatten().map(|c| c.abs()).max().unwrap_or(0) as i128 * n as i128;
    let height = |v: &Vector| -> i128 {
        let mut h = 0i128;
        let mut w = 1i128;
        for c in v {
            h += *c as i128 * w;
            w *= k;
        }
        h
    };
    roots.iter().filter(|r| height(r) > 0).cloned().collect()
}

/// Simple roots of the positive system from [`positive_roots`].
fn simple_roots(roots: &[Vector]) -> Vec<Vector> {
    let pos: BTreeSet<Vector> = positive_roots(roots).into_iter().collect();
    pos.iter()
        .filter(|a| {
            !pos.iter().any(|b| {
                let d: Vector = a.iter().zip(b.iter()).map(|(x, y)| x - y).collect();
                pos.contains(&d)
            })
        })
        .cloned()
        .collect()
}

/// Checks the axioms and rebuilds the Weyl group from reflections.
pub fn assemble_root_datum(x: &CharacterLattice, comps: &[RootComponent]) -> Result<RootDatum, DatumError> {
    let parts: Vec<(LieType, Vec<Vector>)> = comps.iter().map(|c| (c.lie_type, c.roots.clone())).collect();
    assemble_from_roots(x, &parts)
}

/// As [`assemble_root_datum`], from labeled root sets.
pub fn assemble_from_roots(x: &CharacterLattice, comps: &[(LieType, Vec<Vector>)]) -> Result<RootDatum, DatumError> {
    let mut roots: Vec<Vector> = comps.iter().flat_map(|(_, r)| r.iter().cloned()).collect();
    roots.sort();
    roots.dedup();
    let coroots = coroots_from_weyl(x, &roots)?;
    let root_set: BTreeSet<&Vector> = roots.iter().collect();
    let coroot_set: BTreeSet<&Vector> = coroots.iter().collect();
    for (a, c) in roots.iter().zip(&coroots) {
        if dot(a, c) != 2 {
            return Err(DatumError::AxiomViolation(format!("pairing of {a:?} is not 2")));
        }
        for b in &roots {
            let img: Vector = b.iter().zip(a).map(|(y, z)| y - dot(b, c) * z).collect();
            if !root_set.contains(&img) {
                return Err(DatumError::AxiomViolation(format!("reflection in {a:?} does not preserve roots")));
            }
            // proportional roots other than ±α break reducedness
            if b != a && qspan(&[a.clone(), b.clone()]).dim() == 1 && b.iter().zip(a).any(|(y, z)| *y != -z) {
                return Err(DatumError::AxiomViolation(format!("roots {a:?} and {b:?} are proportional")));
            }
        }
        for d in &coroots {
            let img: Vector = d.iter().zip(c).map(|(y, z)| y - dot(a, d) * z).collect();
            if !coroot_set.contains(&img) {
                return Err(DatumError::AxiomViolation(format!("coreflection in {c:?} does not preserve coroots")));
            }
        }
    }
    let simple = simple_roots(&roots);
    let gens: Vec<IMat> = simple
        .iter()
        .map(|a| {
            let i = roots.binary_search(a).expect("simple root is a root");
            reflection_matrix(a, &coroots[i])
        })
        .collect();
    let weyl = MatGroup::new(x.rank, gens);
    let pts = x.weight_vectors();
    let generated = weyl.perm_rep(&pts);
    let expected = x.weyl.perm_rep(&pts);
    if generated.order() != expected.order()
        || !x.weyl.generators().iter().all(|g| weyl.contains_via(&generated, &pts, g))
    {
        return Err(DatumError::WeylMismatch { generated: generated.order(), expected: expected.order() });
    }
    Ok(RootDatum {
        rank: x.rank,
        roots,
        coroots,
        simple_roots: simple,
        weyl_order: generated.order(),
        weyl,
        components: comps.to_vec(),
    })
}

/// All elements of a matrix group, sorted.
pub fn enumerate(g: &MatGroup, perm: &PermGroup) -> Result<Vec<IMat>, DatumError> {
    if perm.order() > MAX_ENUMERATED_ORDER {
        return Err(DatumError::GroupTooLarge(perm.order()));
    }
    let mut seen: BTreeSet<IMat> = BTreeSet::from([identity(g.dim())]);
    let mut frontier = vec![identity(g.dim())];
    while let Some(a) = frontier.pop() {
        for s in g.generators() {
            let b = mat_mul(&a, s);
            if seen.insert(b.clone()) {
                frontier.push(b);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// `Γ/W` with canonical representatives.
#[derive(Clone, Debug)]
pub struct OuterAction {
    /// Lexicographically least matrix of each coset; the identity coset is
    /// first.
    pub representatives: Vec<IMat>,
    /// `table[i][j]` is the coset of `representatives[i] · representatives[j]`.
    pub table: Vec<Vec<usize>>,
    /// Coset of every element of `Γ`, keyed by matrix.
    coset_of: BTreeMap<IMat, usize>,
}

impl OuterAction {
    pub fn order(&self) -> usize {
        self.representatives.len()
    }

    pub fn coset_of(&self, g: &IMat) -> Option<usize> {
        self.coset_of.get(g).copied()
    }
}

pub fn outer_action(gamma: &MatGroup, weyl: &MatGroup, points: &[Vector]) -> Result<OuterAction, DatumError> {
    let gp = gamma.perm_rep(points);
    let wp = weyl.perm_rep(points);
    if !wp.is_subgroup_of(&gp) {
        return Err(DatumError::NotASubgroup);
    }
    for g in gamma.generators() {
        let gi = inverse_of(g);
        if !weyl.generators().iter().all(|w| weyl.contains_via(&wp, points, &mat_mul(&mat_mul(&gi, w), g))) {
            return Err(DatumError::NotASubgroup);
        }
    }
    let g_elems = enumerate(gamma, &gp)?;
    let w_elems = enumerate(weyl, &wp)?;
    let mut coset_of: BTreeMap<IMat, usize> = BTreeMap::new();
    let mut reps = Vec::new();
    // identity first, then sorted order, so each new representative is the
    // least element of its coset
    let id = identity(gamma.dim());
    for g in std::iter::once(&id).chain(g_elems.iter().filter(|g| **g != id)) {
        if coset_of.contains_key(g) {
            continue;
        }
        let c = reps.len();
        for w in &w_elems {
            coset_of.insert(mat_mul(w, g), c);
        }
        reps.push(g.clone());
    }
    let table = reps
        .iter()
        .map(|a| reps.iter().map(|b| coset_of[&mat_mul(a, b)]).collect())
        .collect();
    Ok(OuterAction { representatives: reps, table, coset_of })
}

fn inverse_of(g: &IMat) -> IMat {
    let id = identity(g.len());
    let mut x = id.clone();
    loop {
        let next = mat_mul(&x, g);
        if next == id {
            return x;
        }
        x = next;
    }
}

/// The datum after dividing out the class of `q`.
#[derive(Clone, Debug)]
pub struct HodgeDatum {
    pub rank: usize,
    /// `x̄ = x · projection`.
    pub projection: IMat,
    pub roots: Vec<Vector>,
    pub weights: Vec<(Vector, usize)>,
    pub weyl: MatGroup,
    pub gamma: MatGroup,
    pub weyl_order: u128,
}

impl HodgeDatum {
    /// Weights listed with repetition, `2g` in total.
    pub fn weight_list(&self) -> Vec<Vector> {
        self.weights.iter().flat_map(|(w, m)| std::iter::repeat_n(w.clone(), *m)).collect()
    }
}

pub fn hodge_datum(datum: &RootDatum, x: &CharacterLattice) -> Result<HodgeDatum, DatumError> {
    let r = x.rank;
    let q = &x.q_class;
    let g = q.iter().fold(0i64, |a, b| a.gcd(b));
    if g != 1 {
        return Err(DatumError::QClassNotPrimitive);
    }
    for s in x.gamma.generators() {
        if apply(q, s) != *q {
            return Err(DatumError::QClassNotInvariant);
        }
    }
    // unimodular V with q·V = ±e₁
    let sm = intmat::smith(&intmat::from_i64(std::slice::from_ref(q)), r);
    let v = sm.v.clone();
    let v_inv = intmat::inverse_unimodular(&v);
    let to_i = |m: &intmat::Mat| -> IMat { intmat::to_i64(m) };
    let v64 = to_i(&v);
    let vinv64 = to_i(&v_inv);
    let projection: IMat = v64.iter().map(|row| row[1..].to_vec()).collect();
    let project = |w: &Vector| -> Vector { apply(w, &projection) };
    let transport = |a: &IMat| -> IMat {
        let m = mat_mul(&mat_mul(&vinv64, a), &v64);
        m[1..].iter().map(|row| row[1..].to_vec()).collect()
    };
    let mut roots: Vec<Vector> = datum.roots.iter().map(project).collect();
    roots.sort();
    roots.dedup();
    if roots.len() != datum.roots.len() {
        return Err(DatumError::NotBijective("roots"));
    }
    let mut weights: Vec<(Vector, usize)> = x.weights.iter().map(|(w, m)| (project(w), *m)).collect();
    weights.sort();
    let distinct: BTreeSet<&Vector> = weights.iter().map(|(w, _)| w).collect();
    if distinct.len() != weights.len() {
        return Err(DatumError::NotBijective("weights"));
    }
    let weyl = MatGroup::new(r - 1, x.weyl.generators().iter().map(transport).collect());
    let gamma = MatGroup::new(r - 1, x.gamma.generators().iter().map(transport).collect());
    Ok(HodgeDatum { rank: r - 1, projection, roots, weights, weyl, gamma, weyl_order: datum.weyl_order })
}

/// Converts a big-integer vector to machine integers.
pub fn small_vector(v: &[BigInt]) -> Option<Vector> {
    v.iter().map(|c| c.to_i64()).collect()
}

//! Dimensions of invariant spaces via constant terms of Laurent polynomials.
//!
//! `M(k, n)` is the multiplicity of the trivial representation in
//! `(Λᵏ V)^{⊗n}`, computed from Weyl's integration formula as
//! `CT[a_k^n · ∏_{α∈R} (1 − t^α)] / |W|`, with `a_k` the k-th elementary
//! symmetric function of the weight monomials.
//!
//! For Weyl invariant integrands the full root product can be replaced by
//! the product over positive roots alone, which equals the alternating sum
//! `Σ_w sgn(w) t^{ρ − wρ}` and so has exactly `|W|` terms. That replaces the
//! division by `|W|` and keeps the expansion small.

use crate::matgroup::Vector;
use crate::rootdatum::{positive_roots, HodgeDatum};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

pub const DEFAULT_MAX_N: u32 = 2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HodgeError {
    #[error("k = {k} outside 0..={max}")]
    KOutOfRange { k: usize, max: usize },
    #[error("constant term {value} not divisible by Weyl order {order}")]
    InexactDivision { value: BigInt, order: u128 },
    #[error("positive root product has {terms} terms, expected the Weyl order {order}")]
    WeylOrderMismatch { terms: usize, order: u128 },
}

/// Sparse Laurent polynomial in `m` variables.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<Vector, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(exp: Vector, c: BigInt) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, c);
        p
    }

    pub fn one(m: usize) -> Self {
        Self::monomial(vec![0; m], BigInt::one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vector, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &[i64]) -> BigInt {
        self.terms.get(exp).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, exp: Vector, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(exp.clone()).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    /// Multiplies by the monomial `c·t^exp`.
    pub fn shift(&self, exp: &[i64], c: &BigInt) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, v)| (e.iter().zip(exp).map(|(a, b)| a + b).collect(), v * c))
            .filter(|(_, v): &(Vector, BigInt)| !v.is_zero())
            .collect();
        Self { terms }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut acc: BTreeMap<Vector, BigInt> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vector = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_default() += c1 * c2;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Self { terms: acc }
    }

    pub fn constant_term(&self, m: usize) -> BigInt {
        self.coeff(&vec![0; m])
    }

    /// Constant term of `self · other` without forming the product.
    pub fn pairing(&self, other: &Self) -> BigInt {
        let mut s = BigInt::zero();
        for (e, c) in &self.terms {
            let neg: Vector = e.iter().map(|x| -x).collect();
            if let Some(d) = other.terms.get(&neg) {
                s += c * d;
            }
        }
        s
    }
}

/// `k`-th elementary symmetric polynomial of the weight monomials, by the
/// recurrence for `∏(1 + t^ω z)` truncated at `z^k`.
pub fn char_coeff(weights: &[Vector], rank: usize, k: usize) -> Result<LaurentPoly, HodgeError> {
    if k > weights.len() {
        return Err(HodgeError::KOutOfRange { k, max: weights.len() });
    }
    let mut e: Vec<LaurentPoly> = vec![LaurentPoly::zero(); k + 1];
    e[0] = LaurentPoly::one(rank);
    let one = BigInt::one();
    for (i, w) in weights.iter().enumerate() {
        for j in (1..=k.min(i + 1)).rev() {
            let add = e[j - 1].shift(w, &one);
            e[j] = e[j].add(&add);
        }
    }
    Ok(e.pop().expect("k + 1 entries"))
}

/// `∏_{α∈R} (1 − t^α)`.
pub fn root_product(roots: &[Vector], rank: usize) -> LaurentPoly {
    let mut p = LaurentPoly::one(rank);
    let minus = -BigInt::one();
    for a in roots {
        p = p.add(&p.shift(a, &minus));
    }
    p
}

/// `M(k, n)` straight from the integration formula: full root product,
/// then exact division by the Weyl order.
pub fn weyl_ct(k: usize, n: u32, weights: &[Vector], roots: &[Vector], rank: usize, weyl_order: u128) -> Result<BigInt, HodgeError> {
    let ak = char_coeff(weights, rank, k)?;
    let mut acc = root_product(roots, rank);
    let value = if n == 0 {
        acc.constant_term(rank)
    } else {
        for _ in 1..n {
            acc = acc.mul(&ak);
        }
        acc.pairing(&ak)
    };
    let (q, r) = value.div_rem(&BigInt::from(weyl_order));
    if !r.is_zero() {
        return Err(HodgeError::InexactDivision { value, order: weyl_order });
    }
    Ok(q)
}

/// Caches `a_k` and the positive root product for one datum.
pub struct HodgeCalculator {
    weights: Vec<Vector>,
    rank: usize,
    positive: Vec<(Vector, BigInt)>,
    coeffs: BTreeMap<usize, HashMap<Vector, BigInt>>,
}

impl HodgeCalculator {
    pub fn new(h: &HodgeDatum) -> Result<Self, HodgeError> {
        Self::from_parts(h.weight_list(), &h.roots, h.rank, h.weyl_order)
    }

    pub fn from_parts(weights: Vec<Vector>, roots: &[Vector], rank: usize, weyl_order: u128) -> Result<Self, HodgeError> {
        let pos = positive_roots(roots);
        let p = root_product(&pos, rank);
        if p.len() as u128 != weyl_order {
            return Err(HodgeError::WeylOrderMismatch { terms: p.len(), order: weyl_order });
        }
        let positive = p.terms().map(|(e, c)| (e.clone(), c.clone())).collect();
        Ok(Self { weights, rank, positive, coeffs: BTreeMap::new() })
    }

    pub fn weight_count(&self) -> usize {
        self.weights.len()
    }

    fn coeff(&mut self, k: usize) -> Result<&HashMap<Vector, BigInt>, HodgeError> {
        if !self.coeffs.contains_key(&k) {
            let a = char_coeff(&self.weights, self.rank, k)?;
            self.coeffs.insert(k, a.terms().map(|(e, c)| (e.clone(), c.clone())).collect());
        }
        Ok(&self.coeffs[&k])
    }

    /// Coefficient of `t^target` in `a_k^n`.
    fn power_coeff(ak: &HashMap<Vector, BigInt>, n: u32, target: &[i64]) -> BigInt {
        match n {
            0 => BigInt::from(u8::from(target.iter().all(|&c| c == 0))),
            1 => ak.get(target).cloned().unwrap_or_default(),
            _ => {
                let mut s = BigInt::zero();
                for (e, c) in ak {
                    let rest: Vector = target.iter().zip(e).map(|(t, x)| t - x).collect();
                    let r = Self::power_coeff(ak, n - 1, &rest);
                    if !r.is_zero() {
                        s += c * r;
                    }
                }
                s
            }
        }
    }

    pub fn m(&mut self, k: usize, n: u32) -> Result<BigInt, HodgeError> {
        let ak = self.coeff(k)?.clone();
        let total = self
            .positive
            .par_iter()
            .map(|(e, c)| {
                let neg: Vector = e.iter().map(|x| -x).collect();
                c * Self::power_coeff(&ak, n, &neg)
            })
            .sum();
        Ok(total)
    }

    /// Rows `k = 0..=2g`, columns `n = 0..=max_n`.
    pub fn table(&mut self, max_n: u32) -> Result<Vec<Vec<BigInt>>, HodgeError> {
        (0..=self.weights.len()).map(|k| (0..=max_n).map(|n| self.m(k, n)).collect()).collect()
    }
}

/// Dimension of the Hodge classes of codimension `p`.
pub fn hodge_dimension(p: usize, h: &HodgeDatum) -> Result<BigInt, HodgeError> {
    HodgeCalculator::new(h)?.m(2 * p, 1)
}

/// Rank of the geometric endomorphism ring.
pub fn endo_rank(h: &HodgeDatum) -> Result<BigInt, HodgeError> {
    HodgeCalculator::new(h)?.m(1, 2)
}

/// Geometric Néron–Severi rank.
pub fn ns_rank(h: &HodgeDatum) -> Result<BigInt, HodgeError> {
    HodgeCalculator::new(h)?.m(2, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn elementary_symmetric_of_t_and_inverse() {
        let w = vec![vec![1], vec![-1]];
        assert_eq!(char_coeff(&w, 1, 0).unwrap(), LaurentPoly::one(1));
        let a1 = char_coeff(&w, 1, 1).unwrap();
        assert_eq!(a1.len(), 2);
        assert_eq!(a1.coeff(&[1]), b(1));
        assert_eq!(a1.coeff(&[-1]), b(1));
        assert_eq!(char_coeff(&w, 1, 2).unwrap(), LaurentPoly::one(1));
        assert!(matches!(char_coeff(&w, 1, 3), Err(HodgeError::KOutOfRange { .. })));
    }

    #[test]
    fn elliptic_curve_without_cm() {
        // SL2 shape: weights ±1, roots ±2, Weyl order 2
        let w = vec![vec![1], vec![-1]];
        let r = vec![vec![2], vec![-2]];
        assert_eq!(weyl_ct(2, 1, &w, &r, 1, 2).unwrap(), b(1));
        assert_eq!(weyl_ct(1, 2, &w, &r, 1, 2).unwrap(), b(1));
        assert_eq!(weyl_ct(0, 1, &w, &r, 1, 2).unwrap(), b(1));
        assert_eq!(weyl_ct(1, 1, &w, &r, 1, 2).unwrap(), b(0));
    }

    #[test]
    fn elliptic_curve_with_cm() {
        let w = vec![vec![1], vec![-1]];
        assert_eq!(weyl_ct(2, 1, &w, &[], 1, 1).unwrap(), b(1));
        assert_eq!(weyl_ct(1, 2, &w, &[], 1, 1).unwrap(), b(2));
    }

    #[test]
    fn inexact_division_is_reported() {
        let w = vec![vec![1], vec![-1]];
        assert!(matches!(weyl_ct(1, 2, &w, &[], 1, 3), Err(HodgeError::InexactDivision { .. })));
    }

    #[test]
    fn torus_counts_zero_sum_subsets() {
        // weights ±e_i in rank 2: zero-sum 2-subsets are {e1,-e1}, {e2,-e2}
        let w = vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]];
        let mut c = HodgeCalculator::from_parts(w, &[], 2, 1).unwrap();
        assert_eq!(c.m(2, 1).unwrap(), b(2));
        assert_eq!(c.m(4, 1).unwrap(), b(1));
    }

    #[test]
    fn positive_root_route_matches_full_product() {
        // B2 acting on the spin weights (±1, ±1)
        let w: Vec<Vector> = vec![vec![1, 1], vec![1, -1], vec![-1, 1], vec![-1, -1]];
        let r: Vec<Vector> = vec![
            vec![2, 0], vec![-2, 0], vec![0, 2], vec![0, -2],
            vec![2, 2], vec![2, -2], vec![-2, 2], vec![-2, -2],
        ];
        let mut c = HodgeCalculator::from_parts(w.clone(), &r, 2, 8).unwrap();
        for k in 0..=4 {
            for n in 0..=3 {
                assert_eq!(c.m(k, n).unwrap(), weyl_ct(k, n, &w, &r, 2, 8).unwrap(), "k={k} n={n}");
            }
        }
        assert!(matches!(
            HodgeCalculator::from_parts(w, &r, 2, 16),
            Err(HodgeError::WeylOrderMismatch { terms: 8, order: 16 })
        ));
    }

    proptest! {
        // pairing symmetry: M(k, n) = M(2g - k, n) for weights closed under negation
        #[test]
        fn complementary_degrees_agree(raw in prop::collection::vec((-2i64..=2, -2i64..=2), 1..4), n in 1u32..=2) {
            let mut w = Vec::new();
            for (x, y) in raw {
                w.push(vec![x, y]);
                w.push(vec![-x, -y]);
            }
            let mut c = HodgeCalculator::from_parts(w.clone(), &[], 2, 1).unwrap();
            let g2 = w.len();
            for k in 0..=g2 {
                prop_assert_eq!(c.m(k, n).unwrap(), c.m(g2 - k, n).unwrap());
            }
        }
    }
}

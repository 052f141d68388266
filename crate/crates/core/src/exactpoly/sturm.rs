//! Exact certification of the Weil bound.
//!
//! With `y = x + q/x`, a palindromic-up-to-`q` polynomial of degree `2g`
//! becomes a degree-`g` polynomial `H(y)`. All roots of `P` have modulus
//! `sqrt(q)` exactly when every root of `H` is real and lies in
//! `[-2 sqrt(q), 2 sqrt(q)]`. Sturm chains over Q count those roots, and the
//! sign at `±2 sqrt(q)` is decided exactly in `Q(sqrt(q))`.

use super::{prime_power_decompose, ExactPolyError, IntPolynomial};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::cmp::Ordering;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeilPolynomial {
    poly: IntPolynomial,
    q: BigInt,
    g: usize,
}

impl WeilPolynomial {
    pub fn poly(&self) -> &IntPolynomial {
        &self.poly
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    /// Coefficient of `x^g`.
    pub fn middle_coefficient(&self) -> BigInt {
        self.poly.coeff(self.g)
    }
}

pub fn validate_weil(poly: IntPolynomial, q: &BigInt) -> Result<WeilPolynomial, ExactPolyError> {
    if prime_power_decompose(q).is_none() {
        return Err(ExactPolyError::NotPrimePower(q.clone()));
    }
    if !poly.is_monic() {
        return Err(ExactPolyError::NotMonic);
    }
    let deg = poly.degree();
    if deg == 0 || deg % 2 == 1 {
        return Err(ExactPolyError::BadDegree(deg));
    }
    let g = deg / 2;
    check_functional_equation(&poly, q, g)?;
    let h = y_transform(&poly, q, g);
    if !real_roots_in_window(&h, q) {
        return Err(ExactPolyError::WeilBoundFails);
    }
    Ok(WeilPolynomial { poly, q: q.clone(), g })
}

fn check_functional_equation(p: &IntPolynomial, q: &BigInt, g: usize) -> Result<(), ExactPolyError> {
    for j in 0..g {
        let lhs = p.coeff(j);
        let rhs = q.pow((g - j) as u32) * p.coeff(2 * g - j);
        if lhs != rhs {
            return Err(ExactPolyError::FunctionalEquationFails(j));
        }
    }
    Ok(())
}

/// `H(y) = c_g + sum_{j>=1} c_{g+j} D_j(y)` with the Dickson-type recursion
/// `D_0 = 2`, `D_1 = y`, `D_{j+1} = y D_j - q D_{j-1}` expressing
/// `x^j + (q/x)^j` in `y`.
pub(crate) fn y_transform(p: &IntPolynomial, q: &BigInt, g: usize) -> IntPolynomial {
    let y = IntPolynomial::x();
    let qp = IntPolynomial::constant(q.clone());
    let mut prev = IntPolynomial::constant(BigInt::from(2));
    let mut cur = y.clone();
    let mut h = IntPolynomial::constant(p.coeff(g));
    for j in 1..=g {
        h = &h + &cur.scale(&p.coeff(g + j));
        let next = &(&y * &cur) - &(&qp * &prev);
        prev = cur;
        cur = next;
    }
    h
}

type RatPoly = Vec<BigRational>;

fn to_rat(p: &IntPolynomial) -> RatPoly {
    p.coeffs().iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

fn trim(p: &mut RatPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn rat_rem(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let mut r = a.clone();
    let db = b.len() - 1;
    let lc = b[db].clone();
    while r.len() > db {
        let top = r.len() - 1;
        let t = &r[top] / &lc;
        for (j, c) in b.iter().enumerate() {
            r[top - db + j] -= &t * c;
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn sturm_chain(p: &IntPolynomial) -> Vec<RatPoly> {
    let p0 = to_rat(p);
    let p1 = to_rat(&p.derivative());
    let mut chain = vec![p0, p1];
    loop {
        let n = chain.len();
        if chain[n - 1].is_empty() {
            chain.pop();
            break;
        }
        let mut r = rat_rem(&chain[n - 2], &chain[n - 1]);
        if r.is_empty() {
            break;
        }
        for c in r.iter_mut() {
            *c = -c.clone();
        }
        chain.push(r);
    }
    chain
}

/// Sign of `u + v sqrt(q)` for rationals `u, v` and positive integer `q`.
fn sign_quadratic(u: &BigRational, v: &BigRational, q: &BigInt) -> Ordering {
    let su = u.cmp(&BigRational::zero());
    let sv = v.cmp(&BigRational::zero());
    if su != Ordering::Less && sv != Ordering::Less {
        return if su == Ordering::Equal && sv == Ordering::Equal {
            Ordering::Equal
        } else {
            Ordering::Greater
        };
    }
    if su != Ordering::Greater && sv != Ordering::Greater {
        return Ordering::Less;
    }
    let u2 = u * u;
    let v2q = v * v * BigRational::from_integer(q.clone());
    if su == Ordering::Greater {
        u2.cmp(&v2q)
    } else {
        v2q.cmp(&u2)
    }
}

/// Sign of `p(b sqrt(q))`, computed in `Q(sqrt(q))`.
fn sign_at_surd(p: &RatPoly, b: &BigRational, q: &BigInt) -> Ordering {
    let qr = BigRational::from_integer(q.clone());
    let mut u = BigRational::zero();
    let mut v = BigRational::zero();
    for c in p.iter().rev() {
        // (u + v s) * (b s) = b v q + b u s
        let nu = b * &v * &qr + c;
        let nv = b * &u;
        u = nu;
        v = nv;
    }
    sign_quadratic(&u, &v, q)
}

fn sign_changes(signs: impl Iterator<Item = Ordering>) -> usize {
    let mut last = Ordering::Equal;
    let mut n = 0;
    for s in signs.filter(|s| *s != Ordering::Equal) {
        if last != Ordering::Equal && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

fn lead_sign(p: &RatPoly, at_neg_inf: bool) -> Ordering {
    let s = p.last().map(|c| c.cmp(&BigRational::zero())).unwrap_or(Ordering::Equal);
    if at_neg_inf && (p.len() - 1) % 2 == 1 {
        s.reverse()
    } else {
        s
    }
}

/// Number of distinct real roots of `p` strictly greater than `2 sqrt(q)`.
fn roots_above(chain: &[RatPoly], q: &BigInt) -> usize {
    let two = BigRational::from_integer(BigInt::from(2));
    let at_bound = sign_changes(chain.iter().map(|c| sign_at_surd(c, &two, q)));
    let at_inf = sign_changes(chain.iter().map(|c| lead_sign(c, false)));
    at_bound - at_inf
}

pub(crate) fn real_roots_in_window(h: &IntPolynomial, q: &BigInt) -> bool {
    if h.degree() == 0 {
        return true;
    }
    let sf = match super::squarefree_part(h) {
        Ok(s) => s,
        Err(_) => return false,
    };
    let chain = sturm_chain(&sf);
    let total = sign_changes(chain.iter().map(|c| lead_sign(c, true)))
        - sign_changes(chain.iter().map(|c| lead_sign(c, false)));
    if total != sf.degree() {
        return false;
    }
    if roots_above(&chain, q) > 0 {
        return false;
    }
    let refl = sturm_chain(&sf.reflect());
    roots_above(&refl, q) == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    fn q(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn genus_one_examples() {
        assert!(validate_weil(p(&[5, -1, 1]), &q(5)).is_ok());
        assert!(validate_weil(p(&[5, 0, 1]), &q(5)).is_ok());
        assert_eq!(
            validate_weil(p(&[5, -6, 1]), &q(5)),
            Err(ExactPolyError::WeilBoundFails)
        );
    }

    #[test]
    fn boundary_roots_are_accepted() {
        // (x - 3)^2 at q = 9 has roots exactly on the circle; y = 6 = 2 sqrt 9.
        assert!(validate_weil(p(&[9, -6, 1]), &q(9)).is_ok());
        // x^2 - 5x + 5 has discriminant 5 > 0 and real roots off the circle.
        assert!(validate_weil(p(&[5, -5, 1]), &q(5)).is_err());
    }

    #[test]
    fn rejects_structural_failures() {
        assert_eq!(validate_weil(p(&[5, -1, 2]), &q(5)), Err(ExactPolyError::NotMonic));
        assert_eq!(
            validate_weil(p(&[4, -1, 1]), &q(5)),
            Err(ExactPolyError::FunctionalEquationFails(0))
        );
        assert_eq!(
            validate_weil(p(&[1, 0, 0, 1]), &q(5)),
            Err(ExactPolyError::BadDegree(3))
        );
        assert!(matches!(
            validate_weil(p(&[6, 0, 1]), &q(6)),
            Err(ExactPolyError::NotPrimePower(_))
        ));
    }

    #[test]
    fn y_transform_of_quadratic() {
        // x^2 - a x + q  ->  y - a
        let h = y_transform(&p(&[7, -3, 1]), &q(7), 1);
        assert_eq!(h, p(&[-3, 1]));
    }

    #[test]
    fn genus_two_product() {
        // (x^2 - x + 5)(x^2 + 3x + 5)
        let f = &p(&[5, -1, 1]) * &p(&[5, 3, 1]);
        let w = validate_weil(f, &q(5)).unwrap();
        assert_eq!(w.genus(), 2);
        // 3x would put a root above 2 sqrt 5 ~ 4.47 only for |a| > 4.47
        let bad = &p(&[5, -1, 1]) * &p(&[5, 5, 1]);
        assert!(validate_weil(bad, &q(5)).is_err());
    }
}

//! Dense integer polynomials and the exact tools built on them.
//!
//! Coefficients are stored lowest degree first and always trimmed, so the
//! zero polynomial is the empty vector.

mod modp;
mod sturm;

pub use modp::{factor_mod_prime, lex_least_irreducible, PolyFp};
pub use sturm::{validate_weil, WeilPolynomial};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactPolyError {
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial has odd or zero degree {0}")]
    BadDegree(usize),
    #[error("{0} is not a prime power")]
    NotPrimePower(BigInt),
    #[error("functional equation fails at coefficient {0}")]
    FunctionalEquationFails(usize),
    #[error("some root does not have absolute value sqrt(q)")]
    WeilBoundFails,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial vanishes modulo {0}")]
    VanishesModPrime(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::from_i64s(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.leading().is_negative() {
            c = -c;
        }
        Self::new(self.coeffs.iter().map(|x| x / &c).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Pseudo-remainder of `self` by `d`: `lc(d)^k * self mod d`.
    fn pseudo_rem(&self, d: &Self) -> Self {
        assert!(!d.is_zero());
        let dd = d.degree();
        let lc = d.leading();
        let mut r = self.coeffs.clone();
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let t = r[top].clone();
            for c in r.iter_mut() {
                *c *= &lc;
            }
            let shift = top - dd;
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[shift + j] -= &t * dc;
            }
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        Self::new(r)
    }

    /// Primitive gcd over Z with positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a.primitive_part()
    }

    /// Exact division, `None` when `d` does not divide `self` over Z.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.degree() < d.degree() {
            return None;
        }
        let dd = d.degree();
        let lc = d.leading();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); self.degree() - dd + 1];
        for k in (0..q.len()).rev() {
            let top = &r[k + dd];
            let (t, rem) = top.div_rem(&lc);
            if !rem.is_zero() {
                return None;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] -= &t * dc;
            }
            q[k] = t;
        }
        if r.iter().all(|c| c.is_zero()) {
            Some(Self::new(q))
        } else {
            None
        }
    }

    /// `p(-x)`.
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Discriminant up to sign, via the resultant of `p` and `p'`.
    pub fn discriminant_abs(&self) -> BigInt {
        resultant(self, &self.derivative()).abs()
    }
}

/// Resultant by fraction-free elimination on the Sylvester matrix.
pub fn resultant(a: &IntPolynomial, b: &IntPolynomial) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    let (m, n) = (a.degree(), b.degree());
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for j in 0..=m {
            mat[i][i + j] = a.coeffs[m - j].clone();
        }
    }
    for i in 0..m {
        for j in 0..=n {
            mat[n + i][i + j] = b.coeffs[n - j].clone();
        }
    }
    crate::intmat::bareiss_det(mat)
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !a.is_one() || i == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}x", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}x^{i}", if show_coeff { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl std::ops::$tr<&IntPolynomial> for &IntPolynomial {
            type Output = IntPolynomial;
            fn $m(self, rhs: &IntPolynomial) -> IntPolynomial {
                $body(self, rhs)
            }
        }
        impl std::ops::$tr for IntPolynomial {
            type Output = IntPolynomial;
            fn $m(self, rhs: IntPolynomial) -> IntPolynomial {
                $body(&self, &rhs)
            }
        }
    };
}

fn add_impl(a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
    let n = a.coeffs.len().max(b.coeffs.len());
    IntPolynomial::new((0..n).map(|i| a.coeff(i) + b.coeff(i)).collect())
}

fn sub_impl(a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
    let n = a.coeffs.len().max(b.coeffs.len());
    IntPolynomial::new((0..n).map(|i| a.coeff(i) - b.coeff(i)).collect())
}

fn mul_impl(a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
    if a.is_zero() || b.is_zero() {
        return IntPolynomial::zero();
    }
    let mut out = vec![BigInt::zero(); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    IntPolynomial::new(out)
}

binop!(Add, add, add_impl);
binop!(Sub, sub, sub_impl);
binop!(Mul, mul, mul_impl);

impl std::ops::Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// Yun's algorithm over Z. Factors are primitive with positive leading
/// coefficient; their product with multiplicities equals the input up to
/// sign and content.
pub fn squarefree_factorization(
    poly: &IntPolynomial,
) -> Result<Vec<(IntPolynomial, usize)>, ExactPolyError> {
    if poly.is_zero() {
        return Err(ExactPolyError::ZeroPolynomial);
    }
    let a = poly.primitive_part();
    if a.degree() == 0 {
        return Ok(Vec::new());
    }
    let b = a.derivative();
    let c = a.gcd(&b);
    let mut w = a.div_exact(&c).expect("gcd divides");
    let mut y = b.div_exact(&c).expect("gcd divides derivative");
    let mut z = &y - &w.derivative();
    let mut out = Vec::new();
    let mut i = 1;
    while w.degree() > 0 {
        let g = w.gcd(&z);
        if g.degree() > 0 {
            out.push((g.clone(), i));
        }
        w = w.div_exact(&g).expect("gcd divides");
        y = z.div_exact(&g).expect("gcd divides");
        z = &y - &w.derivative();
        i += 1;
    }
    Ok(out)
}

/// The squarefree part: product of the distinct factors.
pub fn squarefree_part(poly: &IntPolynomial) -> Result<IntPolynomial, ExactPolyError> {
    Ok(squarefree_factorization(poly)?
        .into_iter()
        .fold(IntPolynomial::one(), |acc, (f, _)| &acc * &f))
}

/// Returns `(p, d)` when `q = p^d` with `p` prime.
pub fn prime_power_decompose(q: &BigInt) -> Option<(BigInt, u32)> {
    if q < &BigInt::from(2) {
        return None;
    }
    let p = smallest_prime_factor(q);
    let mut d = 0;
    let mut r = q.clone();
    while (&r % &p).is_zero() {
        r /= &p;
        d += 1;
    }
    r.is_one().then_some((p, d))
}

fn smallest_prime_factor(n: &BigInt) -> BigInt {
    let mut d = BigInt::from(2);
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            return d;
        }
        d += 1;
    }
    n.clone()
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

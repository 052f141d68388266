//! Integer and rational linear algebra on small dense matrices.
//!
//! Matrices are `Vec<Vec<BigInt>>` in row-major order. Lattices are
//! represented by their generating rows; `hnf` gives the canonical basis.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Mat = Vec<Vec<BigInt>>;

pub fn from_i64(rows: &[Vec<i64>]) -> Mat {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn to_i64(rows: &Mat) -> Vec<Vec<i64>> {
    rows.iter()
        .map(|r| r.iter().map(|x| x.to_i64().expect("entry fits in i64")).collect())
        .collect()
}

pub fn vec_to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn transpose(a: &Mat, ncols: usize) -> Mat {
    (0..ncols).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mat_mul(a: &Mat, b: &Mat, bcols: usize) -> Mat {
    a.iter()
        .map(|row| {
            (0..bcols)
                .map(|j| {
                    row.iter()
                        .zip(b.iter())
                        .fold(BigInt::zero(), |acc, (x, brow)| acc + x * &brow[j])
                })
                .collect()
        })
        .collect()
}

/// Row vector times matrix.
pub fn vec_mul(v: &[BigInt], m: &Mat, ncols: usize) -> Vec<BigInt> {
    (0..ncols)
        .map(|j| v.iter().zip(m.iter()).fold(BigInt::zero(), |acc, (x, r)| acc + x * &r[j]))
        .collect()
}

/// Determinant by fraction-free Bareiss elimination.
pub fn bareiss_det(mut a: Mat) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn row_sub_mul(a: &mut Mat, target: usize, src: usize, k: &BigInt) {
    if k.is_zero() {
        return;
    }
    let (t, s) = if target < src {
        let (lo, hi) = a.split_at_mut(src);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = a.split_at_mut(target);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in t.iter_mut().zip(s.iter()) {
        *x -= k * y;
    }
}

/// Row-style Hermite normal form of the lattice spanned by `rows`.
/// Only the nonzero rows are returned; pivots are positive and entries
/// above a pivot lie in `[0, pivot)`.
pub fn hnf(rows: &Mat, ncols: usize) -> Mat {
    let mut a: Mat = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..ncols {
        if pivot_row >= a.len() {
            break;
        }
        loop {
            let best = (pivot_row..a.len())
                .filter(|&i| !a[i][col].is_zero())
                .min_by(|&i, &j| a[i][col].abs().cmp(&a[j][col].abs()));
            let Some(b) = best else { break };
            a.swap(pivot_row, b);
            let mut done = true;
            for i in pivot_row + 1..a.len() {
                if a[i][col].is_zero() {
                    continue;
                }
                let k = a[i][col].div_floor(&a[pivot_row][col]);
                row_sub_mul(&mut a, i, pivot_row, &k);
                if !a[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if pivot_row < a.len() && !a[pivot_row][col].is_zero() {
            if a[pivot_row][col].is_negative() {
                for x in a[pivot_row].iter_mut() {
                    *x = -x.clone();
                }
            }
            pivots.push((pivot_row, col));
            pivot_row += 1;
        }
    }
    a.truncate(pivot_row);
    for &(r, c) in &pivots {
        for i in 0..r {
            let k = a[i][c].div_floor(&a[r][c]);
            row_sub_mul(&mut a, i, r, &k);
        }
    }
    a
}

/// Basis (in HNF) of the integer kernel `{x : A x = 0}` of an `m x n` matrix.
pub fn kernel(a: &Mat, n: usize) -> Mat {
    let m = a.len();
    let mut aug: Mat = (0..n)
        .map(|j| {
            let mut row: Vec<BigInt> = (0..m).map(|i| a[i][j].clone()).collect();
            row.extend((0..n).map(|k| if k == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    // Echelonize on the first m columns; the rows that end up zero there
    // carry a unimodular basis of the kernel in the trailing block.
    let mut pivot_row = 0;
    for col in 0..m {
        loop {
            let best = (pivot_row..n)
                .filter(|&i| !aug[i][col].is_zero())
                .min_by(|&i, &j| aug[i][col].abs().cmp(&aug[j][col].abs()));
            let Some(b) = best else { break };
            aug.swap(pivot_row, b);
            let mut done = true;
            for i in pivot_row + 1..n {
                if aug[i][col].is_zero() {
                    continue;
                }
                let k = aug[i][col].div_floor(&aug[pivot_row][col]);
                row_sub_mul(&mut aug, i, pivot_row, &k);
                if !aug[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                pivot_row += 1;
                break;
            }
        }
        if pivot_row >= n {
            break;
        }
    }
    let ker: Mat = aug[pivot_row..].iter().map(|r| r[m..].to_vec()).collect();
    hnf(&ker, n)
}

/// Smith normal form `U A V = D` of a `k x n` matrix.
pub struct Smith {
    /// Diagonal entries, nonnegative and divisibility-ordered; length `min(k, n)`.
    pub diag: Vec<BigInt>,
    pub u: Mat,
    pub v: Mat,
}

pub fn smith(a: &Mat, n: usize) -> Smith {
    let k = a.len();
    let mut d = a.clone();
    let mut u = identity(k);
    let mut v = identity(n);
    let r = k.min(n);
    for t in 0..r {
        loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..k {
                for j in t..n {
                    if !d[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            d.swap(t, bi);
            u.swap(t, bi);
            for row in d.iter_mut() {
                row.swap(t, bj);
            }
            for row in v.iter_mut() {
                row.swap(t, bj);
            }
            let mut clean = true;
            for i in t + 1..k {
                if d[i][t].is_zero() {
                    continue;
                }
                let q = d[i][t].div_floor(&d[t][t]);
                row_sub_mul(&mut d, i, t, &q);
                row_sub_mul(&mut u, i, t, &q);
                if !d[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if d[t][j].is_zero() {
                    continue;
                }
                let q = d[t][j].div_floor(&d[t][t]);
                for row in d.iter_mut() {
                    let s = &q * &row[t];
                    row[j] -= s;
                }
                for row in v.iter_mut() {
                    let s = &q * &row[t];
                    row[j] -= s;
                }
                if !d[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility: fold a bad row into row t and retry
            let piv = d[t][t].clone();
            let bad = (t + 1..k).find(|&i| (t + 1..n).any(|j| !(&d[i][j] % &piv).is_zero()));
            match bad {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_sub_mul(&mut d, t, i, &minus_one);
                    row_sub_mul(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    let diag = (0..r).map(|i| d[i][i].clone()).collect();
    Smith { diag, u, v }
}

/// Inverse of a unimodular matrix (exact, via rational elimination).
pub fn inverse_unimodular(a: &Mat) -> Mat {
    let n = a.len();
    let inv = rational_inverse(a).expect("matrix is invertible");
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    assert!(inv[i][j].is_integer(), "matrix is not unimodular");
                    inv[i][j].to_integer()
                })
                .collect()
        })
        .collect()
}

pub fn rational_inverse(a: &Mat) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<BigRational> = r.iter().map(|x| BigRational::from_integer(x.clone())).collect();
            row.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let inv = BigRational::one() / &m[c][c];
        for x in m[c].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..2 * n {
                    let s = &f * &m[c][j];
                    m[i][j] -= s;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Incrementally maintained rational row space in reduced echelon form.
#[derive(Clone, Debug, Default)]
pub struct QSpan {
    rows: Vec<(usize, Vec<BigRational>)>,
}

impl QSpan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_rows<'a>(rows: impl IntoIterator<Item = &'a Vec<BigInt>>) -> Self {
        let mut s = Self::new();
        for r in rows {
            s.insert(r);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[BigInt]) -> Vec<BigRational> {
        let mut w: Vec<BigRational> = v.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        for (p, row) in &self.rows {
            if !w[*p].is_zero() {
                let f = w[*p].clone();
                for (x, y) in w.iter_mut().zip(row.iter()) {
                    *x -= &f * y;
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[BigInt]) -> bool {
        let mut w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = BigRational::one() / &w[p];
        for x in w.iter_mut() {
            *x *= &inv;
        }
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (x, y) in row.iter_mut().zip(w.iter()) {
                    *x -= &f * y;
                }
            }
        }
        self.rows.push((p, w));
        true
    }
}

pub fn rank(rows: &Mat) -> usize {
    QSpan::from_rows(rows.iter()).dim()
}

/// Solves `x A = v` over Q for a row vector `x`, when possible.
pub fn solve_left(a: &Mat, v: &[BigInt]) -> Option<Vec<BigRational>> {
    let k = a.len();
    let n = v.len();
    // columns of the augmented system: A^T x^T = v^T
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|j| {
            let mut row: Vec<BigRational> =
                (0..k).map(|i| BigRational::from_integer(a[i][j].clone())).collect();
            row.push(BigRational::from_integer(v[j].clone()));
            row
        })
        .collect();
    let mut piv_cols = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..n).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = BigRational::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..=k {
                    let s = &f * &m[r][j];
                    m[i][j] -= s;
                }
            }
        }
        piv_cols.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); k];
    for (i, &c) in piv_cols.iter().enumerate() {
        x[c] = m[i][k].clone();
    }
    Some(x)
}

/// Solves `x A = v` over Z when `A` has independent rows.
pub fn solve_left_integral(a: &Mat, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let x = solve_left(a, v)?;
    x.iter().all(|c| c.is_integer()).then(|| x.iter().map(|c| c.to_integer()).collect())
}

pub fn same_lattice(a: &Mat, b: &Mat, n: usize) -> bool {
    hnf(a, n) == hnf(b, n)
}

/// Clears denominators of a rational vector and makes it primitive.
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

//! Integer matrix groups acting on row vectors, `x ↦ xA`.

use crate::perm::{Perm, PermGroup};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

pub type Vector = Vec<i64>;
pub type IMat = Vec<Vec<i64>>;

pub fn apply(v: &[i64], a: &IMat) -> Vector {
    let n = a.first().map_or(0, |r| r.len());
    let mut out = vec![0i64; n];
    for (x, row) in v.iter().zip(a) {
        if *x == 0 {
            continue;
        }
        for (o, y) in out.iter_mut().zip(row) {
            *o += x * y;
        }
    }
    out
}

pub fn mat_mul(a: &IMat, b: &IMat) -> IMat {
    a.iter().map(|r| apply(r, b)).collect()
}

pub fn identity(n: usize) -> IMat {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn sub(a: &[i64], b: &[i64]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn neg(a: &[i64]) -> Vector {
    a.iter().map(|x| -x).collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A finitely generated group of invertible integer matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatGroup {
    dim: usize,
    gens: Vec<IMat>,
}

impl MatGroup {
    pub fn new(dim: usize, gens: Vec<IMat>) -> Self {
        let id = identity(dim);
        let gens = gens.into_iter().filter(|g| *g != id).collect();
        Self { dim, gens }
    }

    pub fn trivial(dim: usize) -> Self {
        Self { dim, gens: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[IMat] {
        &self.gens
    }

    pub fn orbit(&self, v: &[i64]) -> Vec<Vector> {
        let mut seen: BTreeSet<Vector> = BTreeSet::from([v.to_vec()]);
        let mut queue = VecDeque::from([v.to_vec()]);
        while let Some(x) = queue.pop_front() {
            for g in &self.gens {
                let y = apply(&x, g);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Orbits of a stable set, each sorted, ordered by least element.
    pub fn orbits(&self, set: &[Vector]) -> Vec<Vec<Vector>> {
        let mut rest: BTreeSet<Vector> = set.iter().cloned().collect();
        let mut out = Vec::new();
        while let Some(v) = rest.iter().next().cloned() {
            let o = self.orbit(&v);
            for x in &o {
                rest.remove(x);
            }
            out.push(o);
        }
        out
    }

    /// Permutation action on a stable finite point set.
    pub fn perm_rep(&self, points: &[Vector]) -> PermGroup {
        let index: BTreeMap<&Vector, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let gens = self
            .gens
            .iter()
            .map(|g| {
                Perm::from_images(points.iter().map(|p| index[&apply(p, g)]).collect())
            })
            .collect();
        PermGroup::new(points.len(), gens)
    }

    /// Matrix of a permutation element, recovered from its action on
    /// spanning points.
    pub fn contains_via(&self, perm_group: &PermGroup, points: &[Vector], a: &IMat) -> bool {
        let index: BTreeMap<&Vector, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut img = Vec::with_capacity(points.len());
        for p in points {
            match index.get(&apply(p, a)) {
                Some(&j) => img.push(j),
                None => return false,
            }
        }
        perm_group.contains(&Perm::from_images(img))
    }
}

/// The integral matrix sending `points[i]` to `points[perm(i)]`, if any.
pub fn matrix_from_action(points: &[Vector], perm: &Perm) -> Option<IMat> {
    let n = points.first()?.len();
    // pick a spanning subset
    let mut span = crate::intmat::QSpan::new();
    let mut basis = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if span.insert(&crate::intmat::vec_to_big(p)) {
            basis.push(i);
        }
    }
    if basis.len() != n {
        return None;
    }
    let b: crate::intmat::Mat = basis.iter().map(|&i| crate::intmat::vec_to_big(&points[i])).collect();
    let inv = crate::intmat::rational_inverse(&b)?;
    let mut a = vec![vec![0i64; n]; n];
    for (r, row) in a.iter_mut().enumerate() {
        for (c, entry) in row.iter_mut().enumerate() {
            let mut s = num_rational::BigRational::from_integer(0.into());
            for (k, &i) in basis.iter().enumerate() {
                let img = &points[perm.apply(i)];
                s += &inv[r][k] * num_rational::BigRational::from_integer(img[c].into());
            }
            if !s.is_integer() {
                return None;
            }
            *entry = num_traits::ToPrimitive::to_i64(&s.to_integer())?;
        }
    }
    let index: BTreeMap<&Vector, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let ok = points.iter().enumerate().all(|(i, p)| index.get(&apply(p, &a)) == Some(&perm.apply(i)));
    ok.then_some(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signed_permutations_of_two() {
        let swap = vec![vec![0, 1], vec![1, 0]];
        let flip = vec![vec![-1, 0], vec![0, 1]];
        let g = MatGroup::new(2, vec![swap, flip]);
        let o = g.orbit(&[1, 0]);
        assert_eq!(o.len(), 4);
        assert_eq!(g.perm_rep(&o).order(), 8);
        assert_eq!(g.orbits(&[vec![1, 0], vec![0, 1], vec![1, 1], vec![-1, 1]]).len(), 2);
        let p = g.perm_rep(&o);
        for s in p.generators() {
            let a = matrix_from_action(&o, s).unwrap();
            assert!(g.generators().contains(&a));
        }
    }
}

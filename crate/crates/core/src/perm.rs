//! Permutations and permutation groups with a Schreier–Sims stabilizer
//! chain.
//!
//! Points are `0..n`. Products act left to right: `a.then(b)` applies `a`
//! first, so `i^(ab) = (i^a)^b`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Self {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            assert!(x < n && !seen[x], "not a permutation: {images:?}");
            seen[x] = true;
        }
        Perm(images.into_iter().map(|x| x as u32).collect())
    }

    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Self {
        let mut img: Vec<usize> = (0..n).collect();
        for c in cycles {
            for (k, &a) in c.iter().enumerate() {
                img[a] = c[(k + 1) % c.len()];
            }
        }
        Self::from_images(img)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.0.iter().map(|&x| x as usize).collect()
    }

    /// Apply `self`, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn pow(&self, k: usize) -> Perm {
        let mut acc = Perm::identity(self.degree());
        for _ in 0..k {
            acc = acc.then(self);
        }
        acc
    }

    pub fn order(&self) -> usize {
        self.cycle_type().into_iter().fold(1, num_integer::lcm)
    }

    /// Cycle lengths in increasing order, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.apply(x);
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable();
        out
    }

    pub fn first_moved(&self) -> Option<usize> {
        self.0.iter().enumerate().position(|(i, &x)| i as u32 != x)
    }

    /// Image of a set of points, returned sorted.
    pub fn image_of_set(&self, s: &[usize]) -> Vec<usize> {
        let mut v: Vec<usize> = s.iter().map(|&i| self.apply(i)).collect();
        v.sort_unstable();
        v
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut any = false;
        for s in 0..n {
            if seen[s] || self.apply(s) == s {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut x = s;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
                first = false;
                x = self.apply(x);
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
struct Level {
    base: usize,
    gens: Vec<Perm>,
    orbit: Vec<usize>,
    /// `transversal[b]` maps the base point to `b`.
    transversal: Vec<Option<Perm>>,
}

impl Level {
    fn new(base: usize, n: usize) -> Self {
        let mut l = Level { base, gens: Vec::new(), orbit: Vec::new(), transversal: vec![None; n] };
        l.rebuild(n);
        l
    }

    fn rebuild(&mut self, n: usize) {
        self.transversal = vec![None; n];
        self.transversal[self.base] = Some(Perm::identity(n));
        self.orbit = vec![self.base];
        let mut k = 0;
        while k < self.orbit.len() {
            let b = self.orbit[k];
            let ub = self.transversal[b].clone().unwrap();
            for g in &self.gens {
                let c = g.apply(b);
                if self.transversal[c].is_none() {
                    self.transversal[c] = Some(ub.then(g));
                    self.orbit.push(c);
                }
            }
            k += 1;
        }
    }
}

/// A permutation group given by generators, with its stabilizer chain.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    gens: Vec<Perm>,
    levels: Vec<Level>,
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PermGroup(deg {}, order {}, gens {:?})", self.degree, self.order(), self.gens)
    }
}

impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.order() == other.order() && self.is_subgroup_of(other)
    }
}

impl Eq for PermGroup {}

impl PermGroup {
    pub fn trivial(n: usize) -> Self {
        Self::new(n, Vec::new())
    }

    pub fn new(degree: usize, gens: Vec<Perm>) -> Self {
        for g in &gens {
            assert_eq!(g.degree(), degree, "generator degree mismatch");
        }
        let gens: Vec<Perm> = gens.into_iter().filter(|g| !g.is_identity()).collect();
        let mut grp = PermGroup { degree, gens: gens.clone(), levels: Vec::new() };
        grp.schreier_sims();
        grp
    }

    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Perm::from_cycles(n, &[&[0, 1]]));
            let cyc: Vec<usize> = (0..n).collect();
            gens.push(Perm::from_cycles(n, &[&cyc]));
        }
        Self::new(n, gens)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    pub fn identity(&self) -> Perm {
        Perm::identity(self.degree)
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.levels.is_empty()
    }

    fn strip(&self, g: &Perm, start: usize) -> (Perm, usize) {
        let mut h = g.clone();
        for (i, lvl) in self.levels.iter().enumerate().skip(start) {
            let b = h.apply(lvl.base);
            match &lvl.transversal[b] {
                Some(u) => h = h.then(&u.inverse()),
                None => return (h, i),
            }
        }
        (h, self.levels.len())
    }

    fn schreier_sims(&mut self) {
        let n = self.degree;
        let mut base: Vec<usize> = Vec::new();
        for g in &self.gens {
            if base.iter().all(|&b| g.apply(b) == b) {
                base.push(g.first_moved().unwrap());
            }
        }
        self.levels = base.iter().map(|&b| Level::new(b, n)).collect();
        for (i, lvl) in self.levels.iter_mut().enumerate() {
            lvl.gens = self
                .gens
                .iter()
                .filter(|g| base[..i].iter().all(|&b| g.apply(b) == b))
                .cloned()
                .collect();
            lvl.rebuild(n);
        }
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            let iu = i as usize;
            let mut jumped = false;
            let orbit = self.levels[iu].orbit.clone();
            let gens = self.levels[iu].gens.clone();
            'search: for &gamma in &orbit {
                for s in &gens {
                    let g1 = s.apply(gamma);
                    let ug = self.levels[iu].transversal[gamma].as_ref().unwrap();
                    let ug1 = self.levels[iu].transversal[g1].as_ref().unwrap();
                    let sch = ug.then(s).then(&ug1.inverse());
                    let (h, j) = self.strip(&sch, iu + 1);
                    if j < self.levels.len() || !h.is_identity() {
                        if j == self.levels.len() {
                            let b = h.first_moved().unwrap();
                            self.levels.push(Level::new(b, n));
                        }
                        for l in iu + 1..=j {
                            self.levels[l].gens.push(h.clone());
                            self.levels[l].rebuild(n);
                        }
                        i = j as isize;
                        jumped = true;
                        break 'search;
                    }
                }
            }
            if !jumped {
                i -= 1;
            }
        }
    }

    pub fn contains(&self, g: &Perm) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (h, j) = self.strip(g, 0);
        j == self.levels.len() && h.is_identity()
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.gens.iter().all(|g| other.contains(g))
    }

    /// Every element, in a deterministic order. Intended for small groups.
    pub fn elements(&self) -> Vec<Perm> {
        let mut out = vec![self.identity()];
        for lvl in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * lvl.orbit.len());
            for &b in &lvl.orbit {
                let u = lvl.transversal[b].as_ref().unwrap();
                for x in &out {
                    next.push(x.then(u));
                }
            }
            out = next;
        }
        out.sort();
        out
    }

    pub fn orbit(&self, point: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        seen[point] = true;
        let mut out = vec![point];
        let mut queue = VecDeque::from([point]);
        while let Some(x) = queue.pop_front() {
            for g in &self.gens {
                let y = g.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Orbits as sorted point lists, ordered by least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for p in 0..self.degree {
            if seen[p] {
                continue;
            }
            let o = self.orbit(p);
            for &x in &o {
                seen[x] = true;
            }
            out.push(o);
        }
        out
    }

    /// Subgroup of elements satisfying `pred`, by filtering all elements.
    pub fn filter_subgroup(&self, pred: impl Fn(&Perm) -> bool) -> PermGroup {
        let gens: Vec<Perm> = self.elements().into_iter().filter(|g| pred(g)).collect();
        PermGroup::new(self.degree, reduce_generators(self.degree, gens))
    }

    /// Stabilizer of a set of points (as a set).
    pub fn set_stabilizer(&self, set: &[usize]) -> PermGroup {
        let s: BTreeSet<usize> = set.iter().copied().collect();
        self.filter_subgroup(|g| s.iter().all(|&x| s.contains(&g.apply(x))))
    }

    /// Image under a point map onto `0..m`, for groups preserving the
    /// fibres of `map`.
    pub fn induced_action(&self, m: usize, act: impl Fn(&Perm) -> Perm) -> PermGroup {
        PermGroup::new(m, self.gens.iter().map(act).collect())
    }
}

/// Drops generators already generated by earlier ones.
pub fn reduce_generators(degree: usize, gens: Vec<Perm>) -> Vec<Perm> {
    let mut kept: Vec<Perm> = Vec::new();
    let mut grp = PermGroup::trivial(degree);
    for g in gens {
        if !grp.contains(&g) {
            kept.push(g);
            grp = PermGroup::new(degree, kept.clone());
        }
    }
    kept
}

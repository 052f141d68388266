//! Full subgroup lattice of a small permutation group.
//!
//! Elements are tabulated once; subgroups are bitsets over element
//! indices. The lattice is built by joining cyclic subgroups of prime-power
//! order ("zuppos") onto known subgroups, starting from the trivial group,
//! which reaches every subgroup since each is generated by its zuppos.

use crate::perm::{Perm, PermGroup};
use std::collections::{HashMap, VecDeque};
use thiserror::Error;

pub const DEFAULT_ELEMENT_CAP: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubgroupError {
    #[error("group of order {order} exceeds the tabulation cap {cap}")]
    GroupTooLarge { order: u128, cap: usize },
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.0[i >> 6] >> (i & 63) & 1 == 1
    }

    #[inline]
    fn set(&mut self, i: usize) {
        self.0[i >> 6] |= 1 << (i & 63);
    }

    pub fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_subset(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    pub fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &bits)| {
            (0..64).filter(move |b| bits >> b & 1 == 1).map(move |b| w * 64 + b)
        })
    }
}

/// Multiplication table of a finite permutation group.
pub struct GroupTable {
    degree: usize,
    elems: Vec<Perm>,
    index: HashMap<Perm, u16>,
    mul: Vec<u16>,
    inv: Vec<u16>,
}

impl GroupTable {
    pub fn new(g: &PermGroup, cap: usize) -> Result<Self, SubgroupError> {
        if g.order() > cap as u128 || cap > u16::MAX as usize {
            return Err(SubgroupError::GroupTooLarge { order: g.order(), cap });
        }
        // identity first (sorted order puts it first already)
        let elems = g.elements();
        debug_assert!(elems[0].is_identity());
        let index: HashMap<Perm, u16> = elems.iter().cloned().enumerate().map(|(i, p)| (p, i as u16)).collect();
        let n = elems.len();
        let mut mul = vec![0u16; n * n];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                mul[i * n + j] = index[&a.then(b)];
            }
        }
        let inv = elems.iter().map(|a| index[&a.inverse()]).collect();
        Ok(Self { degree: g.degree(), elems, index, mul, inv })
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elems[i]
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).map(|&i| i as usize)
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.elems.len() + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    fn closure(&self, start: &Bits, gens: &[usize]) -> Bits {
        let mut set = start.clone();
        let mut queue: VecDeque<usize> = start.iter().collect();
        if queue.is_empty() {
            set.set(0);
            queue.push_back(0);
        }
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = self.mul(x, s);
                if !set.get(y) {
                    set.set(y);
                    queue.push_back(y);
                }
            }
        }
        set
    }

    fn cyclic(&self, g: usize) -> Bits {
        let mut b = Bits::new(self.len());
        let mut x = 0;
        loop {
            b.set(x);
            x = self.mul(x, g);
            if x == 0 {
                break;
            }
        }
        b
    }

    /// `g⁻¹ H g`.
    pub fn conjugate(&self, h: &Bits, g: usize) -> Bits {
        let gi = self.inv(g);
        let mut out = Bits::new(self.len());
        for x in h.iter() {
            out.set(self.mul(self.mul(gi, x), g));
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct Subgroup {
    pub bits: Bits,
    pub gens: Vec<usize>,
    pub order: usize,
}

pub struct SubgroupLattice {
    table: GroupTable,
    subgroups: Vec<Subgroup>,
    lookup: HashMap<Bits, usize>,
}

impl SubgroupLattice {
    pub fn new(g: &PermGroup, cap: usize) -> Result<Self, SubgroupError> {
        let table = GroupTable::new(g, cap)?;
        let n = table.len();
        // zuppos: one generator per cyclic subgroup of prime-power order
        let mut zuppos: Vec<(Bits, usize)> = Vec::new();
        let mut seen: HashMap<Bits, ()> = HashMap::new();
        for e in 1..n {
            let c = table.cyclic(e);
            let ord = c.count();
            if !is_prime_power(ord) {
                continue;
            }
            if seen.insert(c.clone(), ()).is_none() {
                zuppos.push((c, e));
            }
        }
        let mut trivial = Bits::new(n);
        trivial.set(0);
        let mut subgroups = vec![Subgroup { bits: trivial.clone(), gens: Vec::new(), order: 1 }];
        let mut lookup = HashMap::from([(trivial, 0usize)]);
        let mut k = 0;
        while k < subgroups.len() {
            let h = subgroups[k].clone();
            for (z, gen) in &zuppos {
                if z.is_subset(&h.bits) {
                    continue;
                }
                let mut gens = h.gens.clone();
                gens.push(*gen);
                let j = table.closure(&h.bits, &gens);
                if lookup.contains_key(&j) {
                    continue;
                }
                let order = j.count();
                lookup.insert(j.clone(), subgroups.len());
                subgroups.push(Subgroup { bits: j, gens, order });
            }
            k += 1;
        }
        Ok(Self { table, subgroups, lookup })
    }

    pub fn table(&self) -> &GroupTable {
        &self.table
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn subgroup(&self, i: usize) -> &Subgroup {
        &self.subgroups[i]
    }

    pub fn find_bits(&self, b: &Bits) -> Option<usize> {
        self.lookup.get(b).copied()
    }

    /// Index of the whole group.
    pub fn top(&self) -> usize {
        let n = self.table.len();
        self.subgroups.iter().position(|s| s.order == n).expect("whole group present")
    }

    pub fn find(&self, g: &PermGroup) -> Option<usize> {
        let mut b = Bits::new(self.table.len());
        for e in g.elements() {
            b.set(self.table.index_of(&e)?);
        }
        self.find_bits(&b)
    }

    pub fn bits_of_elements(&self, elems: impl IntoIterator<Item = usize>) -> Bits {
        let mut b = Bits::new(self.table.len());
        for e in elems {
            b.set(e);
        }
        b
    }

    pub fn to_perm_group(&self, i: usize) -> PermGroup {
        let s = &self.subgroups[i];
        let gens = s.gens.iter().map(|&g| self.table.element(g).clone()).collect();
        PermGroup::new(self.table.degree(), gens)
    }

    pub fn intersection(&self, a: usize, b: usize) -> usize {
        let bits = self.subgroups[a].bits.and(&self.subgroups[b].bits);
        self.lookup[&bits]
    }

    /// Maximal proper subgroups of subgroup `g`, by decreasing order then
    /// index.
    pub fn maximal_subgroups(&self, g: usize) -> Vec<usize> {
        let gb = &self.subgroups[g].bits;
        let proper: Vec<usize> = (0..self.len())
            .filter(|&i| i != g && self.subgroups[i].bits.is_subset(gb))
            .collect();
        let mut out: Vec<usize> = proper
            .iter()
            .copied()
            .filter(|&h| {
                let hb = &self.subgroups[h].bits;
                !proper.iter().any(|&k| {
                    k != h && self.subgroups[k].order > self.subgroups[h].order && hb.is_subset(&self.subgroups[k].bits)
                })
            })
            .collect();
        out.sort_by_key(|&h| (std::cmp::Reverse(self.subgroups[h].order), h));
        out
    }

    /// Groups `subs` into classes under conjugation by elements of `g`.
    pub fn conjugacy_classes(&self, subs: &[usize], g: usize) -> Vec<Vec<usize>> {
        let mut class_of: HashMap<usize, usize> = HashMap::new();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &h in subs {
            if class_of.contains_key(&h) {
                continue;
            }
            let c = classes.len();
            let mut members = Vec::new();
            for x in self.subgroups[g].bits.iter() {
                let conj = self.table.conjugate(&self.subgroups[h].bits, x);
                let idx = self.lookup[&conj];
                if let std::collections::hash_map::Entry::Vacant(e) = class_of.entry(idx) {
                    e.insert(c);
                    members.push(idx);
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        classes
    }

    /// Indices of all subgroups of subgroup `g` (including `g`).
    pub fn subgroups_of(&self, g: usize) -> Vec<usize> {
        let gb = &self.subgroups[g].bits;
        (0..self.len()).filter(|&i| self.subgroups[i].bits.is_subset(gb)).collect()
    }
}

fn is_prime_power(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let p = (2..=n).find(|d| n.is_multiple_of(*d)).unwrap();
    let mut m = n;
    while m.is_multiple_of(p) {
        m /= p;
    }
    m == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dihedral4() -> PermGroup {
        // symmetries of a square on 4 points
        PermGroup::new(4, vec![Perm::from_cycles(4, &[&[0, 1, 2, 3]]), Perm::from_cycles(4, &[&[0, 2]])])
    }

    #[test]
    fn subgroup_counts() {
        // D4 has 10 subgroups, S4 has 30, A4 has 10, S3 has 6
        assert_eq!(SubgroupLattice::new(&dihedral4(), 4096).unwrap().len(), 10);
        assert_eq!(SubgroupLattice::new(&PermGroup::symmetric(4), 4096).unwrap().len(), 30);
        assert_eq!(SubgroupLattice::new(&PermGroup::symmetric(3), 4096).unwrap().len(), 6);
        let a4 = PermGroup::new(4, vec![Perm::from_cycles(4, &[&[0, 1, 2]]), Perm::from_cycles(4, &[&[1, 2, 3]])]);
        assert_eq!(SubgroupLattice::new(&a4, 4096).unwrap().len(), 10);
    }

    #[test]
    fn maximal_subgroups_of_s4() {
        let lat = SubgroupLattice::new(&PermGroup::symmetric(4), 4096).unwrap();
        let top = lat.top();
        let max = lat.maximal_subgroups(top);
        let mut orders: Vec<usize> = max.iter().map(|&h| lat.subgroup(h).order).collect();
        orders.sort_unstable();
        // A4, three D4, four S3
        assert_eq!(orders, vec![6, 6, 6, 6, 8, 8, 8, 12]);
        let classes = lat.conjugacy_classes(&max, top);
        assert_eq!(classes.len(), 3);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            SubgroupLattice::new(&PermGroup::symmetric(6), 100),
            Err(SubgroupError::GroupTooLarge { .. })
        ));
    }
}

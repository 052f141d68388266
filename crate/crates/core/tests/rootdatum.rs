mod common;

use common::*;
use mtroot::matgroup::{MatGroup, Vector};
use mtroot::rootdatum::{
    assemble_from_roots, assemble_root_datum, hodge_datum, outer_action, positive_roots, DatumError,
};
use mtroot::rootfinder::{find_roots, CharacterLattice, LieType};
use std::collections::BTreeSet;

#[test]
fn textbook_coroots() {
    for m in coroot_suite() {
        let d = assemble_from_roots(&m.lattice, &[(m.lie_type, m.roots.clone())]).unwrap();
        for (a, c) in m.roots.iter().zip(&m.coroots) {
            assert_eq!(d.coroot_of(a), Some(c), "{}: {a:?}", m.name);
        }
        assert_eq!(d.simple_roots.len(), m.lie_type.rank(), "{}", m.name);
        assert_eq!(d.weyl_order, m.lie_type.weyl_order(), "{}", m.name);
    }
}

#[test]
fn positive_roots_are_half() {
    for m in coroot_suite() {
        let pos = positive_roots(&m.roots);
        assert_eq!(pos.len() * 2, m.roots.len());
        let mut all: Vec<Vector> = pos.iter().cloned().chain(pos.iter().map(|v| v.iter().map(|x| -x).collect())).collect();
        all.sort();
        assert_eq!(all, m.roots);
    }
}

#[test]
fn wrong_roots_do_not_assemble() {
    // D4 roots with the full signed permutation group: the reflections
    // generate too small a group
    let m = type_c(4);
    let d4 = pm_pairs(4, 1);
    let err = assemble_from_roots(&m.lattice, &[(LieType::D(4), sorted(d4))]).unwrap_err();
    assert!(matches!(err, DatumError::WeylMismatch { .. }), "{err:?}");
}

#[test]
fn genus10_datum() {
    let x = genus10();
    let comps = find_roots(&x).unwrap();
    let d = assemble_root_datum(&x, &comps).unwrap();
    assert_eq!(d.weyl_order, 1920);
    assert_eq!(d.simple_roots.len(), 5);
    // each coroot pairs to 2 with its root and integrally with every weight
    for (a, c) in d.roots.iter().zip(&d.coroots) {
        assert_eq!(a.iter().zip(c).map(|(x, y)| x * y).sum::<i64>(), 2);
    }
    let outer = outer_action(&x.gamma, &x.weyl, &x.weight_vectors()).unwrap();
    assert_eq!(outer.order(), 2);
    assert!(outer.representatives[0] == eye(6));
    let hd = hodge_datum(&d, &x).unwrap();
    assert_eq!(hd.rank, 5);
    assert_eq!(hd.roots.len(), 40);
    assert_eq!(hd.weight_list().len(), 20);
    assert_eq!(hd.weyl_order, 1920);
}

#[test]
fn outer_table_is_a_group() {
    let x = genus10();
    let outer = outer_action(&x.gamma, &x.weyl, &x.weight_vectors()).unwrap();
    let n = outer.order();
    for row in &outer.table {
        let seen: BTreeSet<usize> = row.iter().copied().collect();
        assert_eq!(seen.len(), n);
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                assert_eq!(outer.table[outer.table[a][b]][c], outer.table[a][outer.table[b][c]]);
            }
        }
    }
}

#[test]
fn weyl_must_be_normal() {
    // W generated by one transposition inside S3 is not normal
    let s3 = MatGroup::new(3, symmetric_gens(3, 3));
    let w = MatGroup::new(3, vec![swap(3, 0, 1)]);
    let pts: Vec<Vector> = (0..3).map(|i| unit(3, i)).collect();
    assert_eq!(outer_action(&s3, &w, &pts).unwrap_err(), DatumError::NotASubgroup);
}

#[test]
fn q_class_checks() {
    let sw = MatGroup::new(2, vec![swap(2, 0, 1)]);
    let ws = vec![(vec![1, 0], 1), (vec![0, 1], 1)];
    let x = CharacterLattice::new(2, ws, vec![1, 0], MatGroup::trivial(2), sw).unwrap();
    let d = assemble_from_roots(&x, &[]).unwrap();
    assert_eq!(hodge_datum(&d, &x).unwrap_err(), DatumError::QClassNotInvariant);
}

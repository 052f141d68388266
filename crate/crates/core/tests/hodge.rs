mod common;

use common::*;
use mtroot::hodge::{endo_rank, hodge_dimension, ns_rank, weyl_ct, HodgeCalculator};
use mtroot::matgroup::{MatGroup, Vector};
use mtroot::rootdatum::{assemble_from_roots, assemble_root_datum, hodge_datum, HodgeDatum};
use mtroot::rootfinder::{find_roots, CharacterLattice};
use num_bigint::BigInt;
use proptest::prelude::*;

fn datum_of(x: &CharacterLattice) -> HodgeDatum {
    let comps = find_roots(x).unwrap();
    let d = assemble_root_datum(x, &comps).unwrap();
    hodge_datum(&d, x).unwrap()
}

/// Torus on `{a, b, c, d, p}` with weights `a..d` and `p − a..p − d`.
fn rank_five_torus() -> CharacterLattice {
    let mut weights: Vec<(Vector, usize)> = (0..4).map(|i| (unit(5, i), 1)).collect();
    for i in 0..4 {
        let mut v = unit(5, 4);
        v[i] = -1;
        weights.push((v, 1));
    }
    CharacterLattice::new(5, weights, unit(5, 4), MatGroup::trivial(5), MatGroup::trivial(5)).unwrap()
}

fn as_f64(v: &BigInt) -> f64 {
    v.to_string().parse().unwrap()
}

#[test]
fn torus_hodge_classes() {
    let hd = datum_of(&rank_five_torus());
    assert_eq!(hd.rank, 4);
    // zero-sum k-subsets of {±f_1..±f_4}
    let expected = [1, 4, 6, 4, 1];
    for (p, want) in expected.iter().enumerate() {
        assert_eq!(hodge_dimension(p, &hd).unwrap(), BigInt::from(*want), "codimension {p}");
    }
    assert_eq!(endo_rank(&hd).unwrap(), BigInt::from(8));
    assert_eq!(ns_rank(&hd).unwrap(), BigInt::from(4));
}

#[test]
fn genus10_table() {
    let hd = datum_of(&genus10());
    let mut calc = HodgeCalculator::new(&hd).unwrap();
    let table = calc.table(1).unwrap();
    assert_eq!(table.len(), 21);
    for k in 0..=20 {
        assert_eq!(table[k][1], table[20 - k][1], "k = {k}");
        assert_eq!(table[k][0], BigInt::from(1));
    }
    // odd degrees pair weights to a nonzero class of q
    for k in (1..20).step_by(2) {
        assert_eq!(table[k][1], BigInt::from(0));
    }
    assert_eq!(endo_rank(&hd).unwrap(), BigInt::from(4));
    assert_eq!(ns_rank(&hd).unwrap(), BigInt::from(1));
}

#[test]
fn exact_values_match_monte_carlo() {
    let torus = datum_of(&rank_five_torus());
    let mut cases = vec![("rank-five torus".to_string(), torus.weight_list(), torus.roots.clone(), torus.rank, 1u128)];
    for m in [type_c(2), type_a(2, 1), type_b_vector(2)] {
        let d = assemble_from_roots(&m.lattice, &[(m.lie_type, m.roots.clone())]).unwrap();
        cases.push((m.name.clone(), m.lattice.weight_vectors(), d.roots, m.lattice.rank, d.weyl_order));
    }
    for (name, wl, roots, rank, order) in cases {
        let mut calc = HodgeCalculator::from_parts(wl.clone(), &roots, rank, order).unwrap();
        for k in 0..=wl.len() {
            // second powers of large coefficients have too much variance for the tolerance
            let max_n = if k <= 2 { 2 } else { 1 };
            for n in 1..=max_n {
                let exact = as_f64(&calc.m(k, n).unwrap());
                let est = quadrature::estimate(&wl, &roots, rank, order as f64, k, n, 100_000, 7 + k as u64);
                assert!((est - exact).abs() <= 0.2, "{name}: M({k},{n}) = {exact}, estimate {est}");
            }
        }
    }
}

#[test]
fn positive_route_matches_full_product_on_small_data() {
    for m in [type_c(2), type_a(2, 1), type_b_vector(2)] {
        let x = &m.lattice;
        let d = assemble_from_roots(x, &[(m.lie_type, m.roots.clone())]).unwrap();
        let wl = x.weight_vectors();
        let mut calc = HodgeCalculator::from_parts(wl.clone(), &d.roots, x.rank, d.weyl_order).unwrap();
        for k in 0..=wl.len() {
            for n in 0..=2 {
                let full = weyl_ct(k, n, &wl, &d.roots, x.rank, d.weyl_order).unwrap();
                assert_eq!(calc.m(k, n).unwrap(), full, "{}: M({k},{n})", m.name);
            }
        }
    }
}

#[test]
fn wrong_weyl_order_is_reported() {
    let m = type_c(2);
    let wl = m.lattice.weight_vectors();
    assert!(HodgeCalculator::from_parts(wl, &m.roots, 2, 4).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn galois_images_do_not_change_integrals(pick in 0usize..64, k in 0usize..=4) {
        // apply an element of the outer group to the genus-10 weights and roots
        let hd = datum_of(&genus10());
        let gens = hd.gamma.generators();
        let mut g = eye(hd.rank);
        let mut s = pick;
        for _ in 0..4 {
            let a = &gens[s % gens.len()];
            g = g.iter().map(|r| act(r, a)).collect();
            s /= gens.len().max(2);
        }
        let moved_w: Vec<Vector> = hd.weight_list().iter().map(|w| act(w, &g)).collect();
        let moved_r: Vec<Vector> = hd.roots.iter().map(|r| act(r, &g)).collect();
        let mut a = HodgeCalculator::new(&hd).unwrap();
        let mut b = HodgeCalculator::from_parts(moved_w, &moved_r, hd.rank, hd.weyl_order).unwrap();
        prop_assert_eq!(a.m(2 * k, 1).unwrap(), b.m(2 * k, 1).unwrap());
    }

    #[test]
    fn torus_integrals_count_zero_sum_subsets(signs in prop::collection::vec(0usize..3, 3), k in 0usize..=6) {
        // weights ±f_i, some doubled; compare with a direct subset count
        let mut wl: Vec<Vector> = Vec::new();
        for (i, &extra) in signs.iter().enumerate() {
            for _ in 0..=extra.min(1) {
                wl.push(unit(3, i));
                wl.push(unit(3, i).iter().map(|x| -x).collect());
            }
        }
        prop_assume!(k <= wl.len());
        let mut count = 0u64;
        for mask in 0u32..(1 << wl.len()) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let mut s = [0i64; 3];
            for (j, w) in wl.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    for t in 0..3 {
                        s[t] += w[t];
                    }
                }
            }
            if s == [0, 0, 0] {
                count += 1;
            }
        }
        let mut calc = HodgeCalculator::from_parts(wl, &[], 3, 1).unwrap();
        prop_assert_eq!(calc.m(k, 1).unwrap(), BigInt::from(count));
    }
}

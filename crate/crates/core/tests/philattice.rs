mod common;

use common::*;
use mtroot::galois::GaloisConfig;
use mtroot::pipeline::prime_data;
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Row vector times matrix.
fn apply(v: &[BigInt], m: &[Vec<BigInt>]) -> Vec<BigInt> {
    (0..m[0].len()).map(|j| v.iter().zip(m).map(|(x, r)| x * &r[j]).sum()).collect()
}

#[test]
fn ordinary_elliptic_curves_are_free_of_rank_two() {
    for (c, q) in [([5i64, -1, 1], 5), ([7, 2, 1], 7), ([11, 3, 1], 11), ([13, -5, 1], 13)] {
        let d = prime_data(q as u64, &weil(&c, q), &GaloisConfig::default()).unwrap();
        assert!(d.phi.is_free);
        assert_eq!(d.phi.rank, 2);
    }
}

#[test]
fn product_of_two_curves_has_rank_three() {
    // (x² − x + 5)(x² + 3x + 5)
    let w = weil(&[25, 10, 8, 2, 1], 5);
    let d = prime_data(5, &w, &GaloisConfig::default()).unwrap();
    assert!(d.phi.is_free);
    assert_eq!(d.phi.rank, 3);
}

#[test]
fn supersingular_curve_has_torsion() {
    // x² + 5: π² = −5 = −q, so (π/π̄)² = 1
    let d = prime_data(5, &weil(&[5, 0, 1], 5), &GaloisConfig::default()).unwrap();
    assert!(!d.phi.is_free);
    assert_eq!(d.phi.torsion(), vec![BigInt::from(2)]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn structure_invariants_on_genus_two(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_genus2(&mut rng, 1).pop().unwrap();
        let p: u64 = w.q().try_into().unwrap();
        let d = prime_data(p, &w, &GaloisConfig::default()).unwrap();
        let phi = &d.phi;
        prop_assert!(phi.rank <= 3 && phi.rank >= 2);
        // π_i · π_ī = q in the quotient
        for i in 0..phi.n {
            let j = d.roots.partner(i);
            prop_assert_eq!(add(&phi.weight(i), &phi.weight(j)), phi.q_class.clone());
        }
        // the class of q is Galois invariant and primitive
        for s in d.gamma.generators() {
            let m = phi.galois_matrix(s);
            prop_assert_eq!(apply(&phi.q_class, &m), phi.q_class.clone());
        }
        let g = phi.q_class.iter().fold(BigInt::zero(), |a, b| num_integer::Integer::gcd(&a, b));
        prop_assert_eq!(g, BigInt::from(1));
    }
}

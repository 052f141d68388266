//! Endomorphism algebra invariants from the orbit structure of the weights.
//!
//! Each Galois orbit of weights gives one simple factor. The center of that
//! factor has degree equal to the index of the stabilizer of a Weyl orbit
//! inside it, and the matrix degree is the weight multiplicity there.

use crate::matgroup::{matrix_from_action, MatGroup, Vector};
use crate::rootfinder::CharacterLattice;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EndoError {
    #[error("multiplicity varies along the Galois orbit of {0:?}")]
    MultiplicityNotOrbitConstant(Vector),
    #[error("Weyl group does not stabilize its own orbit of {0:?}")]
    WeylNotInStabilizer(Vector),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndoFactor {
    /// Position of the Galois orbit, ordered by least element.
    pub orbit_index: usize,
    pub orbit_size: usize,
    /// The chosen Weyl orbit inside the Galois orbit.
    pub weyl_orbit: Vec<Vector>,
    /// Degree of the center over the rationals.
    pub center_degree: u128,
    /// Matrix degree over the center.
    pub m: usize,
    pub stabilizer_order: u128,
    /// Stabilizer generators, as matrices acting on the lattice.
    pub stabilizer: MatGroup,
}

impl EndoFactor {
    /// Contribution `[L:Q]·m²` to the rank of the endomorphism ring.
    pub fn rank_contribution(&self) -> u128 {
        self.center_degree * (self.m * self.m) as u128
    }
}

pub fn endo_invariants(x: &CharacterLattice) -> Result<Vec<EndoFactor>, EndoError> {
    let pts = x.weight_vectors();
    let gp = x.gamma.perm_rep(&pts);
    let wp = x.weyl.perm_rep(&pts);
    let gamma_order = gp.order();
    let mut out = Vec::new();
    for (i, orbit) in x.gamma.orbits(&pts).into_iter().enumerate() {
        let m = x.multiplicity(&orbit[0]).expect("weight present");
        if let Some(bad) = orbit.iter().find(|w| x.multiplicity(w) != Some(m)) {
            return Err(EndoError::MultiplicityNotOrbitConstant(bad.clone()));
        }
        // least representative, so the least Weyl orbit
        let wo = x.weyl.orbit(&orbit[0]);
        let idx: Vec<usize> = wo.iter().map(|w| pts.binary_search(w).expect("weight present")).collect();
        let h = gp.set_stabilizer(&idx);
        if !wp.is_subgroup_of(&h) {
            return Err(EndoError::WeylNotInStabilizer(orbit[0].clone()));
        }
        let gens = h
            .generators()
            .iter()
            .map(|s| matrix_from_action(&pts, s).expect("permutation comes from a matrix"))
            .collect();
        let stabilizer = MatGroup::new(x.rank, gens);
        out.push(EndoFactor {
            orbit_index: i,
            orbit_size: orbit.len(),
            weyl_orbit: wo,
            center_degree: gamma_order / h.order(),
            m,
            stabilizer_order: h.order(),
            stabilizer,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elliptic_curve_without_cm_is_one_factor() {
        let swap = vec![vec![0, 1], vec![1, 0]];
        let w = MatGroup::new(2, vec![swap]);
        let x = CharacterLattice::new(2, vec![(vec![0, 1], 1), (vec![1, 0], 1)], vec![1, 1], w.clone(), w).unwrap();
        let f = endo_invariants(&x).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!((f[0].center_degree, f[0].m), (1, 1));
    }

    #[test]
    fn cm_elliptic_curve_has_quadratic_center() {
        let swap = vec![vec![0, 1], vec![1, 0]];
        let g = MatGroup::new(2, vec![swap]);
        let x = CharacterLattice::new(2, vec![(vec![0, 1], 1), (vec![1, 0], 1)], vec![1, 1], MatGroup::trivial(2), g).unwrap();
        let f = endo_invariants(&x).unwrap();
        assert_eq!((f[0].center_degree, f[0].m), (2, 1));
        assert!(f[0].stabilizer.generators().is_empty());
    }
}

//! Exact computation of Mumford–Tate root data from Frobenius polynomials.

pub mod exactpoly;
pub mod intmat;
pub mod finite_field;
pub mod padic;
pub mod pointcount;
pub mod perm;
pub mod subgroups;
pub mod galois;
pub mod philattice;
pub mod matgroup;
pub mod rootfinder;
pub mod rootdatum;
pub mod hodge;
pub mod endo;
pub mod pipeline;

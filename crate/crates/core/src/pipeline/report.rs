//! Serializable report types. Big integers are written as decimal strings.

use crate::endo::EndoFactor;
use crate::matgroup::{IMat, Vector};
use crate::perm::PermGroup;
use crate::philattice::PhiGroup;
use crate::rootdatum::{HodgeDatum, OuterAction, RootDatum};
use crate::rootfinder::CharacterLattice;
use num_bigint::BigInt;
use serde::Serialize;

fn strs(v: &[BigInt]) -> Vec<String> {
    v.iter().map(|c| c.to_string()).collect()
}

fn perm_images(g: &PermGroup) -> Vec<Vec<usize>> {
    g.generators().iter().map(|p| p.images()).collect()
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PhiSummary {
    pub p: u64,
    pub ordinary: bool,
    pub distinct_roots: usize,
    pub gamma_order: String,
    pub rank: usize,
    pub free: bool,
    pub torsion: Vec<String>,
    pub q_class: Vec<String>,
}

impl PhiSummary {
    pub fn new(p: u64, ordinary: bool, phi: &PhiGroup) -> Self {
        Self {
            p,
            ordinary,
            distinct_roots: phi.n,
            gamma_order: phi.gamma_order().to_string(),
            rank: phi.rank,
            free: phi.is_free,
            torsion: strs(&phi.torsion()),
            q_class: strs(&phi.q_class),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PredictionDto {
    pub rank: usize,
    pub weyl_order: String,
    pub q: u64,
    pub p: u64,
    pub scanned: Vec<PhiSummary>,
    /// `(p, [L(W_p):L])` for each candidate.
    pub relative_degrees: Vec<(u64, String)>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct WeightDto {
    pub vector: Vector,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LatticeDto {
    pub rank: usize,
    pub weights: Vec<WeightDto>,
    pub q_class: Vector,
    pub weyl_generators: Vec<IMat>,
    pub gamma_generators: Vec<IMat>,
}

impl LatticeDto {
    pub fn new(x: &CharacterLattice) -> Self {
        Self {
            rank: x.rank,
            weights: x.weights.iter().map(|(v, m)| WeightDto { vector: v.clone(), multiplicity: *m }).collect(),
            q_class: x.q_class.clone(),
            weyl_generators: x.weyl.generators().to_vec(),
            gamma_generators: x.gamma.generators().to_vec(),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ComponentDto {
    pub lie_type: String,
    pub roots: Vec<Vector>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RootDatumDto {
    pub rank: usize,
    pub components: Vec<ComponentDto>,
    pub roots: Vec<Vector>,
    pub coroots: Vec<Vector>,
    pub simple_roots: Vec<Vector>,
    pub weyl_order: String,
}

impl RootDatumDto {
    pub fn new(d: &RootDatum) -> Self {
        Self {
            rank: d.rank,
            components: d.components.iter().map(|(t, r)| ComponentDto { lie_type: t.to_string(), roots: r.clone() }).collect(),
            roots: d.roots.clone(),
            coroots: d.coroots.clone(),
            simple_roots: d.simple_roots.clone(),
            weyl_order: d.weyl_order.to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct OuterDto {
    pub order: usize,
    pub representatives: Vec<IMat>,
    pub table: Vec<Vec<usize>>,
}

impl OuterDto {
    pub fn new(o: &OuterAction) -> Self {
        Self { order: o.order(), representatives: o.representatives.clone(), table: o.table.clone() }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct HodgeDto {
    pub rank: usize,
    pub roots: Vec<Vector>,
    pub weights: Vec<WeightDto>,
    /// `table[k][n]` is `M(k, n)`.
    pub table: Vec<Vec<String>>,
    /// Dimension of Hodge classes by codimension.
    pub hodge_classes: Vec<String>,
    pub endo_rank: String,
    pub ns_rank: String,
}

impl HodgeDto {
    pub fn new(h: &HodgeDatum, table: &[Vec<BigInt>]) -> Self {
        let g = (table.len() - 1) / 2;
        let at = |k: usize, n: usize| table.get(k).and_then(|r| r.get(n)).map_or_else(String::new, |v| v.to_string());
        Self {
            rank: h.rank,
            roots: h.roots.clone(),
            weights: h.weights.iter().map(|(v, m)| WeightDto { vector: v.clone(), multiplicity: *m }).collect(),
            table: table.iter().map(|r| strs(r)).collect(),
            hodge_classes: (0..=g).map(|p| at(2 * p, 1)).collect(),
            endo_rank: at(1, 2),
            ns_rank: at(2, 1),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct EndoDto {
    pub orbit_size: usize,
    pub weyl_orbit_size: usize,
    pub center_degree: String,
    pub m: usize,
    pub stabilizer_order: String,
    pub stabilizer_generators: Vec<IMat>,
}

impl EndoDto {
    pub fn new(f: &EndoFactor) -> Self {
        Self {
            orbit_size: f.orbit_size,
            weyl_orbit_size: f.weyl_orbit.len(),
            center_degree: f.center_degree.to_string(),
            m: f.m,
            stabilizer_order: f.stabilizer_order.to_string(),
            stabilizer_generators: f.stabilizer.generators().to_vec(),
        }
    }
}

/// Everything downstream of the character lattice.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LatticeReport {
    pub lattice: LatticeDto,
    pub gamma_order: String,
    pub weyl_order: String,
    pub root_datum: RootDatumDto,
    pub outer_action: OuterDto,
    pub hodge: HodgeDto,
    pub endo: Vec<EndoDto>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ProvenanceDto {
    pub q_poly_sha256: String,
    pub p_poly_sha256: String,
    pub aux_prime_min: u64,
    pub aux_prime_max: u64,
    pub max_n: u32,
    pub version: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AnalysisReport {
    pub q: String,
    pub p: String,
    pub genus: usize,
    /// Both chosen primes have ordinary reduction.
    pub ordinary: bool,
    pub phi_q: PhiSummary,
    pub phi_p: PhiSummary,
    pub gamma_labels: Vec<Vec<usize>>,
    pub weyl_labels: Vec<Vec<usize>>,
    pub result: LatticeReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prediction: Option<PredictionDto>,
    pub provenance: ProvenanceDto,
}

impl AnalysisReport {
    pub(crate) fn labels(g: &PermGroup) -> Vec<Vec<usize>> {
        perm_images(g)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

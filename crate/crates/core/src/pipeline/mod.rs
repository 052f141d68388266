//! End-to-end driver: prime scanning, choice of the prime pair, and the
//! chain from Frobenius polynomials to root datum, Hodge numbers and
//! endomorphism invariants.

pub mod io;
pub mod report;

use crate::endo::{endo_invariants, EndoError};
use crate::exactpoly::{ExactPolyError, WeilPolynomial};
use crate::galois::{galois_group_of, relative_group, GaloisConfig, GaloisError};
use crate::hodge::{HodgeCalculator, HodgeError, DEFAULT_MAX_N};
use crate::intmat;
use crate::matgroup::{IMat, MatGroup, Vector};
use crate::padic::LabeledRoots;
use crate::perm::PermGroup;
use crate::philattice::{compute_phi, is_ordinary, root_multiplicities, PhiError, PhiGroup};
use crate::pointcount::{frobenius_polynomial_of_curve, HyperellipticCurve, PointCountError, DEFAULT_MAX_ENUMERATION};
use crate::rootdatum::{assemble_root_datum, hodge_datum, outer_action, small_vector, DatumError};
use crate::rootfinder::{find_roots, CharacterLattice, RootError};
use rayon::prelude::*;
use report::*;
use std::collections::BTreeMap;
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("malformed input: {0}")]
    Format(String),
    #[error("no scanned prime has a torsion-free eigenvalue group")]
    NoTorsionFreePrime,
    #[error("no second prime with a torsion-free group of rank {0}")]
    NoPrimePair(usize),
    #[error("eigenvalue group at the {0} prime has torsion")]
    TorsionInPhi(&'static str),
    #[error("ranks differ: {q} at the auxiliary prime, {p} at the main prime")]
    RankMismatch { q: usize, p: usize },
    #[error("lattice coordinates exceed machine integers")]
    CoordinateOverflow,
    #[error(transparent)]
    Poly(#[from] ExactPolyError),
    #[error(transparent)]
    PointCount(#[from] PointCountError),
    #[error(transparent)]
    Galois(#[from] GaloisError),
    #[error(transparent)]
    Phi(#[from] PhiError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Datum(#[from] DatumError),
    #[error(transparent)]
    Hodge(#[from] HodgeError),
    #[error(transparent)]
    Endo(#[from] EndoError),
}

#[derive(Clone, Debug)]
pub struct AnalysisConfig {
    /// Inclusive range of primes to scan.
    pub primes: (u64, u64),
    pub galois: GaloisConfig,
    pub max_enumeration: u64,
    pub max_n: u32,
    pub report_path: Option<PathBuf>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            primes: (3, 100),
            galois: GaloisConfig::default(),
            max_enumeration: DEFAULT_MAX_ENUMERATION,
            max_n: DEFAULT_MAX_N,
            report_path: None,
        }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<(), PipelineError> {
        let bad = |m: &str| Err(PipelineError::Config(m.to_string()));
        if self.primes.0 == 0 || self.primes.0 > self.primes.1 {
            return bad("prime range must be nonempty and positive");
        }
        let aux = &self.galois.aux;
        if aux.min == 0 || aux.min > aux.max {
            return bad("auxiliary prime range must be nonempty and positive");
        }
        if self.max_enumeration == 0 {
            return bad("enumeration limit must be positive");
        }
        Ok(())
    }
}

/// Frobenius polynomials at every good prime of the range, in order.
pub fn scan_curve(curve: &HyperellipticCurve, cfg: &AnalysisConfig) -> Result<Vec<(u64, WeilPolynomial)>, PipelineError> {
    cfg.validate()?;
    let primes: Vec<u64> = (cfg.primes.0.max(3)..=cfg.primes.1)
        .filter(|&p| crate::exactpoly::is_prime_u64(p) && curve.has_good_reduction(p))
        .collect();
    primes
        .into_par_iter()
        .map(|p| Ok((p, frobenius_polynomial_of_curve(curve, p, cfg.max_enumeration)?)))
        .collect()
}

/// Φ at one prime, with the roots and group it was computed from.
pub struct PrimeData {
    pub p: u64,
    pub poly: WeilPolynomial,
    pub roots: LabeledRoots,
    pub gamma: PermGroup,
    pub phi: PhiGroup,
}

impl PrimeData {
    pub fn summary(&self) -> PhiSummary {
        PhiSummary::new(self.p, is_ordinary(&self.poly), &self.phi)
    }
}

pub fn prime_data(p: u64, poly: &WeilPolynomial, cfg: &GaloisConfig) -> Result<PrimeData, PipelineError> {
    let (roots, gamma) = galois_group_of(poly, cfg)?;
    let phi = compute_phi(poly, &roots, &gamma)?;
    Ok(PrimeData { p, poly: poly.clone(), roots, gamma, phi })
}

#[derive(Clone, Debug)]
pub struct Prediction {
    /// Largest rank of a torsion-free Φ.
    pub rank: usize,
    /// Largest relative degree over the field of the chosen `q` prime.
    pub weyl_order: u128,
    pub q_prime: u64,
    pub p_prime: u64,
    pub scanned: Vec<PhiSummary>,
    pub relative_degrees: Vec<(u64, u128)>,
}

impl Prediction {
    pub fn dto(&self) -> PredictionDto {
        PredictionDto {
            rank: self.rank,
            weyl_order: self.weyl_order.to_string(),
            q: self.q_prime,
            p: self.p_prime,
            scanned: self.scanned.clone(),
            relative_degrees: self.relative_degrees.iter().map(|(p, d)| (*p, d.to_string())).collect(),
        }
    }
}

/// Chooses the prime pair from scanned Frobenius polynomials.
pub fn predict_invariants(polys: &[(u64, WeilPolynomial)], cfg: &AnalysisConfig) -> Result<Prediction, PipelineError> {
    let data: Vec<PrimeData> = polys
        .par_iter()
        .map(|(p, w)| prime_data(*p, w, &cfg.galois))
        .collect::<Result<_, _>>()?;
    let scanned: Vec<PhiSummary> = data.iter().map(PrimeData::summary).collect();
    let rank = data.iter().filter(|d| d.phi.is_free).map(|d| d.phi.rank).max().ok_or(PipelineError::NoTorsionFreePrime)?;
    let good: Vec<&PrimeData> = data.iter().filter(|d| d.phi.is_free && d.phi.rank == rank).collect();
    let q = good[0];
    let relative: Vec<(u64, u128)> = good[1..]
        .par_iter()
        .map(|d| Ok((d.p, relative_group(&d.poly, &q.poly, &cfg.galois)?.w.order())))
        .collect::<Result<_, PipelineError>>()?;
    let best = relative.iter().map(|(_, w)| *w).max().ok_or(PipelineError::NoPrimePair(rank))?;
    let p = relative.iter().find(|(_, w)| *w == best).expect("maximum attained").0;
    Ok(Prediction { rank, weyl_order: best, q_prime: q.p, p_prime: p, scanned, relative_degrees: relative })
}

fn small_matrix(m: &intmat::Mat) -> Result<IMat, PipelineError> {
    m.iter().map(|r| small_vector(r).ok_or(PipelineError::CoordinateOverflow)).collect()
}

/// The character lattice `Φ` with its weights and the two group actions.
pub fn character_lattice(
    phi: &PhiGroup,
    poly: &WeilPolynomial,
    roots: &LabeledRoots,
    gamma: &PermGroup,
    weyl: &PermGroup,
) -> Result<CharacterLattice, PipelineError> {
    if !phi.is_free {
        return Err(PipelineError::TorsionInPhi("main"));
    }
    let mult = root_multiplicities(poly, roots);
    let mut weights: BTreeMap<Vector, usize> = BTreeMap::new();
    for (i, m) in mult.iter().enumerate() {
        let w = small_vector(&phi.weight(i)).ok_or(PipelineError::CoordinateOverflow)?;
        *weights.entry(w).or_default() += m;
    }
    let mats = |g: &PermGroup| -> Result<Vec<IMat>, PipelineError> {
        g.generators().iter().map(|s| small_matrix(&phi.galois_matrix(s))).collect()
    };
    let q_class = small_vector(&phi.q_class).ok_or(PipelineError::CoordinateOverflow)?;
    Ok(CharacterLattice::new(
        phi.rank,
        weights.into_iter().collect(),
        q_class,
        MatGroup::new(phi.rank, mats(weyl)?),
        MatGroup::new(phi.rank, mats(gamma)?),
    )?)
}

/// Root datum, outer action, Hodge table and endomorphism factors.
pub fn analyze_lattice(x: &CharacterLattice, max_n: u32) -> Result<LatticeReport, PipelineError> {
    let comps = find_roots(x)?;
    let datum = assemble_root_datum(x, &comps)?;
    let outer = outer_action(&x.gamma, &x.weyl, &x.weight_vectors())?;
    let hd = hodge_datum(&datum, x)?;
    let table = HodgeCalculator::new(&hd)?.table(max_n)?;
    let endo = endo_invariants(x)?;
    Ok(LatticeReport {
        lattice: LatticeDto::new(x),
        gamma_order: x.gamma_order().to_string(),
        weyl_order: datum.weyl_order.to_string(),
        root_datum: RootDatumDto::new(&datum),
        outer_action: OuterDto::new(&outer),
        hodge: HodgeDto::new(&hd, &table),
        endo: endo.iter().map(EndoDto::new).collect(),
    })
}

/// Full analysis for the pair: `p_q` supplies the base field, `p_p` the
/// torus.
pub fn analyze(p_q: &WeilPolynomial, p_p: &WeilPolynomial, cfg: &AnalysisConfig) -> Result<AnalysisReport, PipelineError> {
    cfg.validate()?;
    let rel = relative_group(p_p, p_q, &cfg.galois)?;
    let phi_p = compute_phi(p_p, &rel.roots_p, &rel.gamma)?;
    let phi_q = compute_phi(p_q, &rel.roots_q, &rel.gamma_q)?;
    if !phi_q.is_free {
        return Err(PipelineError::TorsionInPhi("auxiliary"));
    }
    if phi_q.rank != phi_p.rank {
        return Err(PipelineError::RankMismatch { q: phi_q.rank, p: phi_p.rank });
    }
    let x = character_lattice(&phi_p, p_p, &rel.roots_p, &rel.gamma, &rel.w)?;
    let result = analyze_lattice(&x, cfg.max_n)?;
    let prime_of = |w: &WeilPolynomial| -> u64 {
        crate::exactpoly::prime_power_decompose(w.q()).and_then(|(p, _)| p.try_into().ok()).unwrap_or(0)
    };
    Ok(AnalysisReport {
        q: p_q.q().to_string(),
        p: p_p.q().to_string(),
        genus: p_p.genus(),
        ordinary: is_ordinary(p_q) && is_ordinary(p_p),
        phi_q: PhiSummary::new(prime_of(p_q), is_ordinary(p_q), &phi_q),
        phi_p: PhiSummary::new(prime_of(p_p), is_ordinary(p_p), &phi_p),
        gamma_labels: AnalysisReport::labels(&rel.gamma),
        weyl_labels: AnalysisReport::labels(&rel.w),
        result,
        prediction: None,
        provenance: ProvenanceDto {
            q_poly_sha256: io::poly_digest(p_q),
            p_poly_sha256: io::poly_digest(p_p),
            aux_prime_min: cfg.galois.aux.min,
            aux_prime_max: cfg.galois.aux.max,
            max_n: cfg.max_n,
            version: env!("CARGO_PKG_VERSION").to_string(),
        },
    })
}

/// Scan, choose the pair, analyze it.
pub fn analyze_curve(curve: &HyperellipticCurve, cfg: &AnalysisConfig) -> Result<AnalysisReport, PipelineError> {
    let polys = scan_curve(curve, cfg)?;
    let pred = predict_invariants(&polys, cfg)?;
    let get = |p: u64| polys.iter().find(|(r, _)| *r == p).map(|(_, w)| w).expect("scanned prime");
    let mut rep = analyze(get(pred.q_prime), get(pred.p_prime), cfg)?;
    rep.prediction = Some(pred.dto());
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{validate_weil, IntPolynomial};
    use num_bigint::BigInt;

    fn weil(c: &[i64], q: i64) -> WeilPolynomial {
        validate_weil(IntPolynomial::from_i64s(c), &BigInt::from(q)).unwrap()
    }

    #[test]
    fn elliptic_curve_pair_gives_sl2() {
        // x² − x + 5 and x² + 2x + 7 (traces 1 and −2, ordinary, non-CM pair)
        let cfg = AnalysisConfig::default();
        let rep = analyze(&weil(&[5, -1, 1], 5), &weil(&[7, 2, 1], 7), &cfg).unwrap();
        assert_eq!(rep.result.lattice.rank, 2);
        assert_eq!(rep.result.weyl_order, "2");
        assert_eq!(rep.result.root_datum.components[0].lie_type, "A1");
        assert_eq!(rep.result.hodge.endo_rank, "1");
        assert_eq!(rep.result.hodge.ns_rank, "1");
        assert!(rep.ordinary);
    }

    #[test]
    fn config_validation() {
        let cfg = AnalysisConfig { primes: (10, 5), ..Default::default() };
        assert!(matches!(cfg.validate(), Err(PipelineError::Config(_))));
    }
}

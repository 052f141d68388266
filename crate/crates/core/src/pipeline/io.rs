//! Curve files, the Frobenius polynomial cache, and lattice fixtures.

use super::PipelineError;
use crate::exactpoly::{validate_weil, IntPolynomial, WeilPolynomial};
use crate::matgroup::{IMat, MatGroup, Vector};
use crate::pointcount::HyperellipticCurve;
use crate::rootfinder::CharacterLattice;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::str::FromStr;

/// An integer written either as a JSON number or a decimal string.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum JsonInt {
    Num(i64),
    Str(String),
}

impl JsonInt {
    pub fn to_big(&self) -> Result<BigInt, PipelineError> {
        match self {
            JsonInt::Num(n) => Ok(BigInt::from(*n)),
            JsonInt::Str(s) => BigInt::from_str(s.trim()).map_err(|_| PipelineError::Format(format!("not an integer: {s}"))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurveFile {
    pub model: String,
    /// Coefficients of `f`, constant term first.
    pub f: Vec<JsonInt>,
}

impl CurveFile {
    pub fn curve(&self) -> Result<HyperellipticCurve, PipelineError> {
        if self.model != "hyperelliptic" {
            return Err(PipelineError::Format(format!("unsupported model {}", self.model)));
        }
        let f = self.f.iter().map(JsonInt::to_big).collect::<Result<Vec<_>, _>>()?;
        Ok(HyperellipticCurve::new(IntPolynomial::new(f))?)
    }
}

pub fn parse_curve(text: &str) -> Result<HyperellipticCurve, PipelineError> {
    let file: CurveFile = serde_json::from_str(text).map_err(|e| PipelineError::Format(e.to_string()))?;
    file.curve()
}

/// One line of the Frobenius cache.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CacheEntry {
    pub p: u64,
    pub q: u64,
    pub g: usize,
    /// Coefficients as decimal strings, constant term first.
    pub coeffs: Vec<String>,
}

impl CacheEntry {
    pub fn from_poly(p: u64, w: &WeilPolynomial) -> Self {
        Self {
            p,
            q: w.q().try_into().expect("q fits a machine word"),
            g: w.genus(),
            coeffs: w.poly().coeffs().iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn to_poly(&self) -> Result<WeilPolynomial, PipelineError> {
        let c = self
            .coeffs
            .iter()
            .map(|s| BigInt::from_str(s).map_err(|_| PipelineError::Format(format!("bad coefficient {s}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let w = validate_weil(IntPolynomial::new(c), &BigInt::from(self.q))?;
        if w.genus() != self.g {
            return Err(PipelineError::Format(format!("genus {} does not match degree", self.g)));
        }
        Ok(w)
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

/// Reads JSON lines, skipping blanks.
pub fn read_cache(text: &str) -> Result<Vec<CacheEntry>, PipelineError> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(|e| PipelineError::Format(e.to_string())))
        .collect()
}

/// Weights, `q` class and group generators of a synthetic lattice.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeFixture {
    pub rank: usize,
    pub weights: Vec<WeightEntry>,
    pub q_class: Vector,
    pub weyl: Vec<IMat>,
    pub gamma: Vec<IMat>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeightEntry {
    pub vector: Vector,
    pub multiplicity: usize,
}

impl LatticeFixture {
    pub fn lattice(&self) -> Result<CharacterLattice, PipelineError> {
        let w = self.weights.iter().map(|e| (e.vector.clone(), e.multiplicity)).collect();
        Ok(CharacterLattice::new(
            self.rank,
            w,
            self.q_class.clone(),
            MatGroup::new(self.rank, self.weyl.clone()),
            MatGroup::new(self.rank, self.gamma.clone()),
        )?)
    }
}

pub fn parse_fixture(text: &str) -> Result<LatticeFixture, PipelineError> {
    serde_json::from_str(text).map_err(|e| PipelineError::Format(e.to_string()))
}

/// Hex SHA-256 of a polynomial's canonical coefficient list.
pub fn poly_digest(w: &WeilPolynomial) -> String {
    let mut h = Sha256::new();
    h.update(w.q().to_string());
    for c in w.poly().coeffs() {
        h.update(b",");
        h.update(c.to_string());
    }
    format!("{:x}", h.finalize())
}

//! Recovering the roots of a reductive group from the weights of a
//! minuscule representation and the Weyl group action on characters.
//!
//! Differences of weights in one Weyl orbit contain the roots. The smallest
//! orbit of differences picks out one simple factor at a time; the factor's
//! type follows from the Weyl group order, the span dimension and the
//! number of orbits, and the roots are then a specific orbit (or union of
//! orbits) of known size.

use crate::intmat::QSpan;
use crate::matgroup::{apply, sub, IMat, MatGroup, Vector};
use num_bigint::BigInt;
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootError {
    #[error("weight set is not stable under the group action")]
    WeightsNotStable,
    #[error("weights do not span the character space")]
    WeightsDoNotSpan,
    #[error("a group generator is not an integral automorphism")]
    NotUnimodular,
    #[error("the Weyl group is not contained in the Galois group")]
    WeylNotInGamma,
    #[error("no weight orbit has the needed differences; input is not minuscule")]
    MinusculeViolated,
    #[error("component of rank {rank} with Weyl order {order} and {orbits} orbits matches no type")]
    UnclassifiableComponent { rank: usize, order: u128, orbits: usize },
    #[error("expected a unique orbit of size {0}")]
    OrbitSizeCollision(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LieType {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    E6,
    E7,
}

impl LieType {
    pub fn rank(&self) -> usize {
        match *self {
            LieType::A(r) | LieType::B(r) | LieType::C(r) | LieType::D(r) => r,
            LieType::E6 => 6,
            LieType::E7 => 7,
        }
    }

    pub fn weyl_order(&self) -> u128 {
        let fact = |n: usize| (1..=n as u128).product::<u128>();
        match *self {
            LieType::A(r) => fact(r + 1),
            LieType::B(r) | LieType::C(r) => (1u128 << r) * fact(r),
            LieType::D(r) => (1u128 << (r - 1)) * fact(r),
            LieType::E6 => 51840,
            LieType::E7 => 2903040,
        }
    }

    pub fn root_count(&self) -> usize {
        match *self {
            LieType::A(r) => r * (r + 1),
            LieType::B(r) | LieType::C(r) => 2 * r * r,
            LieType::D(r) => 2 * r * (r - 1),
            LieType::E6 => 72,
            LieType::E7 => 126,
        }
    }

    /// Notes on low-rank coincidences resolved to this label.
    pub fn identification(&self) -> Option<&'static str> {
        match *self {
            LieType::A(1) => Some("A1 = B1 = C1"),
            LieType::C(2) => Some("C2 = B2"),
            LieType::A(3) => Some("A3 = D3"),
            _ => None,
        }
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LieType::A(r) => write!(f, "A{r}"),
            LieType::B(r) => write!(f, "B{r}"),
            LieType::C(r) => write!(f, "C{r}"),
            LieType::D(r) => write!(f, "D{r}"),
            LieType::E6 => write!(f, "E6"),
            LieType::E7 => write!(f, "E7"),
        }
    }
}

impl std::str::FromStr for LieType {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (head, tail) = s.split_at(1);
        let r: usize = tail.parse().map_err(|_| format!("bad type {s}"))?;
        match (head, r) {
            ("A", r) => Ok(LieType::A(r)),
            ("B", r) => Ok(LieType::B(r)),
            ("C", r) => Ok(LieType::C(r)),
            ("D", r) => Ok(LieType::D(r)),
            ("E", 6) => Ok(LieType::E6),
            ("E", 7) => Ok(LieType::E7),
            _ => Err(format!("bad type {s}")),
        }
    }
}

/// Character lattice `Z^r` with weights, the class of `q`, and the Weyl
/// and Galois actions.
#[derive(Clone, Debug)]
pub struct CharacterLattice {
    pub rank: usize,
    /// Distinct weights with multiplicities, sorted by weight.
    pub weights: Vec<(Vector, usize)>,
    pub q_class: Vector,
    pub weyl: MatGroup,
    pub gamma: MatGroup,
}

fn det_i64(m: &IMat) -> BigInt {
    crate::intmat::bareiss_det(m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
}

pub(crate) fn qspan(vs: &[Vector]) -> QSpan {
    let rows: Vec<Vec<BigInt>> = vs.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
    QSpan::from_rows(rows.iter())
}

pub(crate) fn in_span(span: &QSpan, v: &[i64]) -> bool {
    let b: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
    span.contains(&b)
}

impl CharacterLattice {
    pub fn new(
        rank: usize,
        weights: Vec<(Vector, usize)>,
        q_class: Vector,
        weyl: MatGroup,
        gamma: MatGroup,
    ) -> Result<Self, RootError> {
        let mut weights = weights;
        weights.sort();
        let x = Self { rank, weights, q_class, weyl, gamma };
        x.validate()?;
        Ok(x)
    }

    pub fn weight_vectors(&self) -> Vec<Vector> {
        self.weights.iter().map(|(v, _)| v.clone()).collect()
    }

    pub fn multiplicity(&self, v: &[i64]) -> Option<usize> {
        self.weights.iter().find(|(w, _)| w == v).map(|(_, m)| *m)
    }

    fn validate(&self) -> Result<(), RootError> {
        for g in self.weyl.generators().iter().chain(self.gamma.generators()) {
            let d = det_i64(g);
            if d != BigInt::from(1) && d != BigInt::from(-1) {
                return Err(RootError::NotUnimodular);
            }
            for (w, m) in &self.weights {
                if self.multiplicity(&apply(w, g)) != Some(*m) {
                    return Err(RootError::WeightsNotStable);
                }
            }
        }
        let pts = self.weight_vectors();
        if qspan(&pts).dim() != self.rank {
            return Err(RootError::WeightsDoNotSpan);
        }
        let gp = self.gamma.perm_rep(&pts);
        for w in self.weyl.generators() {
            if !self.gamma.contains_via(&gp, &pts, w) {
                return Err(RootError::WeylNotInGamma);
            }
        }
        Ok(())
    }

    pub fn weyl_order(&self) -> u128 {
        self.weyl.perm_rep(&self.weight_vectors()).order()
    }

    pub fn gamma_order(&self) -> u128 {
        self.gamma.perm_rep(&self.weight_vectors()).order()
    }
}

/// One output set of the algorithm, with its Weyl data.
#[derive(Clone, Debug)]
pub struct Component {
    /// Sorted vectors of the set.
    pub vectors: Vec<Vector>,
    pub span_rank: usize,
    /// Order of the Weyl group acting on the span.
    pub weyl_order: u128,
    /// Weyl orbits of the set, sorted by (size, least element).
    pub orbits: Vec<Vec<Vector>>,
}

/// Pairwise differences of distinct elements.
pub fn orbit_differences(orbit: &[Vector]) -> Vec<Vector> {
    let mut out = BTreeSet::new();
    for a in orbit {
        for b in orbit {
            if a != b {
                out.insert(sub(a, b));
            }
        }
    }
    out.into_iter().collect()
}

fn sorted_orbits(w: &MatGroup, set: &[Vector]) -> Vec<Vec<Vector>> {
    let mut o = w.orbits(set);
    o.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a[0].cmp(&b[0])));
    o
}

/// Order of the image of `w` acting on the span of `set`.
fn weyl_order_on(w: &MatGroup, orbits: &[Vec<Vector>], rank: usize) -> u128 {
    // a stable spanning subset gives a faithful permutation action
    let mut pts: Vec<Vector> = Vec::new();
    for o in orbits {
        pts.extend(o.iter().cloned());
        if qspan(&pts).dim() == rank {
            break;
        }
    }
    pts.sort();
    w.perm_rep(&pts).order()
}

/// Splits the roots' candidate set into simple factors.
pub fn algorithm1(x: &CharacterLattice) -> Result<Vec<Component>, RootError> {
    let w = &x.weyl;
    let weight_orbits = w.orbits(&x.weight_vectors());
    let diffs: Vec<Vec<Vector>> = weight_orbits.iter().map(|o| orbit_differences(o)).collect();
    let mut u: BTreeSet<Vector> = diffs.iter().flatten().cloned().collect();
    let mut used: Vec<Vector> = Vec::new();
    let mut out = Vec::new();
    while !u.is_empty() {
        let uv: Vec<Vector> = u.iter().cloned().collect();
        let orbits = sorted_orbits(w, &uv);
        let smallest = &orbits[0];
        let omega = diffs
            .iter()
            .find(|c| smallest.iter().all(|v| c.binary_search(v).is_ok()))
            .ok_or(RootError::MinusculeViolated)?;
        let span = qspan(smallest);
        let s: Vec<Vector> = omega.iter().filter(|v| in_span(&span, v)).cloned().collect();
        let s_orbits = sorted_orbits(w, &s);
        let span_rank = span.dim();
        let weyl_order = weyl_order_on(w, &s_orbits, span_rank);
        used.extend(s.iter().cloned());
        let all = qspan(&used);
        u.retain(|v| !in_span(&all, v));
        out.push(Component { vectors: s, span_rank, weyl_order, orbits: s_orbits });
    }
    Ok(out)
}

/// Type of a component from its Weyl order, rank and orbit count.
pub fn lie_type(c: &Component) -> Result<LieType, RootError> {
    let r = c.span_rank;
    let ord = c.weyl_order;
    let k = c.orbits.len();
    let fact = |n: usize| (1..=n as u128).product::<u128>();
    let bad = RootError::UnclassifiableComponent { rank: r, order: ord, orbits: k };
    if r == 0 {
        return Err(bad);
    }
    if ord == fact(r + 1) {
        return Ok(LieType::A(r));
    }
    if ord == (1u128 << r) * fact(r) {
        if r >= 3 && k >= 3 {
            return Ok(LieType::B(r));
        }
        if r >= 2 && k == 2 {
            return Ok(LieType::C(r));
        }
    }
    if r >= 4 && ord == (1u128 << (r - 1)) * fact(r) {
        return Ok(LieType::D(r));
    }
    if r == 6 && ord == 51840 {
        return Ok(LieType::E6);
    }
    if r == 7 && ord == 2903040 {
        return Ok(LieType::E7);
    }
    Err(bad)
}

fn unique_orbit(c: &Component, size: usize) -> Result<Vec<Vector>, RootError> {
    let hits: Vec<&Vec<Vector>> = c.orbits.iter().filter(|o| o.len() == size).collect();
    match hits.as_slice() {
        [one] => Ok((*one).clone()),
        _ => Err(RootError::OrbitSizeCollision(size)),
    }
}

/// The roots inside a classified component.
pub fn extract_roots(c: &Component, t: LieType) -> Result<Vec<Vector>, RootError> {
    let mut r = match t {
        LieType::A(r) => unique_orbit(c, r * (r + 1))?,
        LieType::B(r) => {
            let mut v = unique_orbit(c, 2 * r)?;
            v.extend(unique_orbit(c, 2 * r * (r - 1))?);
            v
        }
        LieType::C(_) => c.vectors.clone(),
        LieType::D(r) => unique_orbit(c, 2 * r * (r - 1))?,
        LieType::E6 => unique_orbit(c, 72)?,
        LieType::E7 => unique_orbit(c, 126)?,
    };
    r.sort();
    Ok(r)
}

/// A classified simple factor and its roots.
#[derive(Clone, Debug)]
pub struct RootComponent {
    pub lie_type: LieType,
    pub roots: Vec<Vector>,
    pub component: Component,
}

/// Runs the whole chain: components, types, roots.
pub fn find_roots(x: &CharacterLattice) -> Result<Vec<RootComponent>, RootError> {
    algorithm1(x)?
        .into_iter()
        .map(|c| {
            let t = lie_type(&c)?;
            let roots = extract_roots(&c, t)?;
            Ok(RootComponent { lie_type: t, roots, component: c })
        })
        .collect()
}

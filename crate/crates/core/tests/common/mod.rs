//! Standard models and independent oracles shared by the integration tests.
//!
//! Everything here is built from textbook descriptions (signed permutations,
//! Cartan matrices, cyclotomic polynomials) without going through the
//! library's own classification code.

#![allow(dead_code)]

use mtroot::exactpoly::{validate_weil, IntPolynomial, WeilPolynomial};
use mtroot::matgroup::{IMat, MatGroup, Vector};
use mtroot::pipeline::io::parse_fixture;
use mtroot::rootfinder::{CharacterLattice, LieType};
use num_bigint::BigInt;
use std::collections::{BTreeSet, VecDeque};

pub fn weil(c: &[i64], q: i64) -> WeilPolynomial {
    validate_weil(IntPolynomial::from_i64s(c), &BigInt::from(q)).expect("valid Weil polynomial")
}

pub fn unit(n: usize, i: usize) -> Vector {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

pub fn eye(n: usize) -> IMat {
    (0..n).map(|i| unit(n, i)).collect()
}

/// Row-vector action `x ↦ xA`.
pub fn act(x: &[i64], a: &IMat) -> Vector {
    (0..a[0].len()).map(|j| x.iter().zip(a).map(|(xi, row)| xi * row[j]).sum()).collect()
}

pub fn swap(n: usize, i: usize, j: usize) -> IMat {
    let mut m = eye(n);
    m.swap(i, j);
    m
}

pub fn flip(n: usize, idx: &[usize]) -> IMat {
    let mut m = eye(n);
    for &i in idx {
        m[i][i] = -1;
    }
    m
}

/// Adjacent transpositions on the first `k` coordinates of `Z^n`.
pub fn symmetric_gens(n: usize, k: usize) -> Vec<IMat> {
    (0..k.saturating_sub(1)).map(|i| swap(n, i, i + 1)).collect()
}

/// Signed permutations of `Z^r`, or the even-sign subgroup.
pub fn signed_gens(r: usize, even: bool) -> Vec<IMat> {
    let mut g = symmetric_gens(r, r);
    if even {
        if r >= 2 {
            g.push(flip(r, &[r - 2, r - 1]));
        }
    } else {
        g.push(flip(r, &[r - 1]));
    }
    g
}

/// Breadth-first orbit, written independently of the library.
pub fn orbit(gens: &[IMat], v: &[i64]) -> BTreeSet<Vector> {
    let mut seen = BTreeSet::from([v.to_vec()]);
    let mut queue = VecDeque::from([v.to_vec()]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = act(&x, g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

pub fn orbit_sizes(gens: &[IMat], set: &BTreeSet<Vector>) -> Vec<usize> {
    let mut rest = set.clone();
    let mut sizes = Vec::new();
    while let Some(v) = rest.iter().next().cloned() {
        let o = orbit(gens, &v);
        for x in &o {
            rest.remove(x);
        }
        sizes.push(o.len());
    }
    sizes.sort_unstable();
    sizes
}

pub fn differences(set: &BTreeSet<Vector>) -> BTreeSet<Vector> {
    let mut out = BTreeSet::new();
    for a in set {
        for b in set {
            if a != b {
                out.insert(a.iter().zip(b).map(|(x, y)| x - y).collect());
            }
        }
    }
    out
}

fn scaled(v: Vector, k: i64) -> Vector {
    v.into_iter().map(|x| x * k).collect()
}

/// `{±e_i ± e_j : i < j}` in `Z^r`, times `k`.
pub fn pm_pairs(r: usize, k: i64) -> Vec<Vector> {
    let mut out = Vec::new();
    for i in 0..r {
        for j in i + 1..r {
            for (a, b) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let mut v = vec![0; r];
                v[i] = a;
                v[j] = b;
                out.push(scaled(v, k));
            }
        }
    }
    out
}

/// `{±e_i}` in `Z^r`, times `k`.
pub fn pm_units(r: usize, k: i64) -> Vec<Vector> {
    (0..r).flat_map(|i| [scaled(unit(r, i), k), scaled(unit(r, i), -k)]).collect()
}

pub fn sorted(mut v: Vec<Vector>) -> Vec<Vector> {
    v.sort();
    v.dedup();
    v
}

/// A lattice together with the root system a correct implementation must
/// find, in the same coordinates.
pub struct Model {
    pub name: String,
    pub lattice: CharacterLattice,
    pub lie_type: LieType,
    pub roots: Vec<Vector>,
    /// Coroots in the dual basis, paired with `roots` by index.
    pub coroots: Vec<Vector>,
}

fn lattice(rank: usize, weights: BTreeSet<Vector>, weyl: Vec<IMat>) -> CharacterLattice {
    let q: Vector = vec![0; rank];
    let w = MatGroup::new(rank, weyl);
    CharacterLattice::new(rank, weights.into_iter().map(|v| (v, 1)).collect(), q, w.clone(), w)
        .expect("standard model is a valid lattice")
}

fn same_coroots(roots: &[Vector]) -> Vec<Vector> {
    roots.to_vec()
}

/// `A_r` with the `s`-th fundamental weight, realized on `Z^{r+1}` as the
/// 0/1 vectors with `s` ones.
pub fn type_a(r: usize, s: usize) -> Model {
    let n = r + 1;
    let mut start = vec![0; n];
    for x in start.iter_mut().take(s) {
        *x = 1;
    }
    let gens = symmetric_gens(n, n);
    let weights = orbit(&gens, &start);
    let mut roots = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut v = vec![0; n];
                v[i] = 1;
                v[j] = -1;
                roots.push(v);
            }
        }
    }
    let roots = sorted(roots);
    Model {
        name: format!("A{r} fundamental weight {s}"),
        lattice: lattice(n, weights, gens),
        lie_type: LieType::A(r),
        coroots: same_coroots(&roots),
        roots,
    }
}

/// Canonical label for the type with Weyl group of order `2^r r!`.
fn bc_label(r: usize, long_short: bool) -> LieType {
    match r {
        1 => LieType::A(1),
        2 => LieType::C(2),
        _ if long_short => LieType::B(r),
        _ => LieType::C(r),
    }
}

/// `B_r` with the spin weight, in doubled coordinates: weights `(±1,…,±1)`
/// and roots `2(±e_i)`, `2(±e_i ± e_j)`.
pub fn type_b_spin(r: usize) -> Model {
    let gens = signed_gens(r, false);
    let weights = orbit(&gens, &vec![1; r]);
    let roots = sorted([pm_units(r, 2), pm_pairs(r, 2)].concat());
    // coroots of the doubled lattice are halved: (2e_i)∨ = e_i*, (2(e_i±e_j))∨ = (e_i*±e_j*)/2
    // which is not integral; only the roots are compared for this model
    Model { name: format!("B{r} spin weight"), lattice: lattice(r, weights, gens), lie_type: bc_label(r, true), roots, coroots: vec![] }
}

/// `B_r` on the vector weights `±e_i`: roots `±e_i`, `±e_i ± e_j`.
pub fn type_b_vector(r: usize) -> Model {
    let gens = signed_gens(r, false);
    let weights: BTreeSet<Vector> = pm_units(r, 1).into_iter().collect();
    let mut pairs: Vec<(Vector, Vector)> = pm_units(r, 1).into_iter().map(|v| (v.clone(), scaled(v, 2))).collect();
    pairs.extend(pm_pairs(r, 1).into_iter().map(|v| (v.clone(), v)));
    pairs.sort();
    Model {
        name: format!("B{r} vector weights"),
        lattice: lattice(r, weights, gens),
        lie_type: bc_label(r, true),
        roots: pairs.iter().map(|p| p.0.clone()).collect(),
        coroots: pairs.into_iter().map(|p| p.1).collect(),
    }
}

/// `C_r` with the first fundamental weight: weights `±e_i`, roots `±2e_i`
/// and `±e_i ± e_j`.
pub fn type_c(r: usize) -> Model {
    let gens = signed_gens(r, false);
    let weights: BTreeSet<Vector> = pm_units(r, 1).into_iter().collect();
    let mut pairs: Vec<(Vector, Vector)> = pm_units(r, 1).into_iter().map(|v| (scaled(v.clone(), 2), v)).collect();
    pairs.extend(pm_pairs(r, 1).into_iter().map(|v| (v.clone(), v)));
    pairs.sort();
    Model {
        name: format!("C{r} fundamental weight 1"),
        lattice: lattice(r, weights, gens),
        lie_type: bc_label(r, false),
        roots: pairs.iter().map(|p| p.0.clone()).collect(),
        coroots: pairs.into_iter().map(|p| p.1).collect(),
    }
}

/// `D_r` with the vector weight `ϖ_1`.
pub fn type_d_vector(r: usize) -> Model {
    let gens = signed_gens(r, true);
    let weights: BTreeSet<Vector> = pm_units(r, 1).into_iter().collect();
    let roots = sorted(pm_pairs(r, 1));
    Model {
        name: format!("D{r} vector weight"),
        lattice: lattice(r, weights, gens),
        lie_type: if r == 3 { LieType::A(3) } else { LieType::D(r) },
        coroots: same_coroots(&roots),
        roots,
    }
}

/// `D_r` with a half-spin weight in doubled coordinates. `odd` selects
/// the weights with an odd number of minus signs.
pub fn type_d_half_spin(r: usize, odd: bool) -> Model {
    let gens = signed_gens(r, true);
    let mut start = vec![1; r];
    if odd {
        start[0] = -1;
    }
    let weights = orbit(&gens, &start);
    let roots = sorted(pm_pairs(r, 2));
    Model {
        name: format!("D{r} half-spin weight ({})", if odd { "odd" } else { "even" }),
        lattice: lattice(r, weights, gens),
        lie_type: if r == 3 { LieType::A(3) } else { LieType::D(r) },
        roots,
        coroots: vec![],
    }
}

/// Every minuscule (type, weight) pair of rank at most 6.
pub fn minuscule_suite() -> Vec<Model> {
    let mut out = Vec::new();
    for r in 1..=6 {
        for s in 1..=r {
            out.push(type_a(r, s));
        }
    }
    for r in 2..=6 {
        out.push(type_b_spin(r));
        out.push(type_c(r));
    }
    for r in 4..=6 {
        out.push(type_d_vector(r));
        out.push(type_d_half_spin(r, true));
        out.push(type_d_half_spin(r, false));
    }
    out
}

/// Classical data with integral coroots, for the coroot round trip.
pub fn coroot_suite() -> Vec<Model> {
    let mut out = Vec::new();
    for r in 1..=6 {
        out.push(type_a(r, 1));
    }
    for r in 2..=6 {
        out.push(type_b_vector(r));
        out.push(type_c(r));
    }
    for r in 4..=6 {
        out.push(type_d_vector(r));
    }
    out
}

/// Cartan matrix of `E_6` or `E_7` in Bourbaki numbering: a chain
/// 1-3-4-5-…-r with node 2 attached to node 4.
pub fn cartan_e(r: usize) -> IMat {
    let mut c = vec![vec![0i64; r]; r];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut edges = vec![(0, 2), (1, 3)];
    for i in 2..r - 1 {
        edges.push((i, i + 1));
    }
    for (a, b) in edges {
        c[a][b] = -1;
        c[b][a] = -1;
    }
    c
}

/// Simple reflections in the fundamental-weight basis: row `i` of `s_i`
/// is `e_i − α_i`, where `α_i` is row `i` of the Cartan matrix.
pub fn simple_reflections(cartan: &IMat) -> Vec<IMat> {
    let r = cartan.len();
    (0..r)
        .map(|i| {
            let mut m = eye(r);
            for j in 0..r {
                m[i][j] -= cartan[i][j];
            }
            m
        })
        .collect()
}

pub struct ExceptionalModel {
    pub name: &'static str,
    pub lattice: CharacterLattice,
    pub lie_type: LieType,
    /// W-orbit of the first simple root.
    pub roots: BTreeSet<Vector>,
    pub weights: BTreeSet<Vector>,
    pub reflections: Vec<IMat>,
}

/// `E_6` with `ϖ_1` or `ϖ_6`, or `E_7` with `ϖ_7`.
pub fn exceptional(r: usize, weight_index: usize) -> ExceptionalModel {
    let cartan = cartan_e(r);
    let refl = simple_reflections(&cartan);
    let weights = orbit(&refl, &unit(r, weight_index));
    let roots = orbit(&refl, &cartan[0]);
    let name = match (r, weight_index) {
        (6, 0) => "E6 fundamental weight 1",
        (6, 5) => "E6 fundamental weight 6",
        (7, 6) => "E7 fundamental weight 7",
        _ => "exceptional",
    };
    ExceptionalModel {
        name,
        lattice: lattice(r, weights.clone(), refl.clone()),
        lie_type: if r == 6 { LieType::E6 } else { LieType::E7 },
        roots,
        weights,
        reflections: refl,
    }
}

/// The bundled genus-10 lattice.
pub fn genus10() -> CharacterLattice {
    let text = include_str!("../../../../fixtures/genus10.json");
    parse_fixture(text).expect("fixture parses").lattice().expect("fixture is a valid lattice")
}

/// Fixture coordinates use `f_i = e_i + e_6/2` for `i < 5` and `f_5 = e_6`.
/// Returns twice the vector in `e` coordinates, so everything stays
/// integral.
pub fn genus10_to_e_doubled(x: &[i64]) -> Vector {
    let mut out: Vector = x[..5].iter().map(|v| 2 * v).collect();
    out.push(x[..5].iter().sum::<i64>() + 2 * x[5]);
    out
}

/// Monte Carlo quadrature over the torus, a numerical check on the exact
/// Hodge integrals.
pub mod quadrature {
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::TAU;

    fn character(v: &[i64], theta: &[f64]) -> Complex64 {
        let phase: f64 = v.iter().zip(theta).map(|(&a, t)| a as f64 * t).sum();
        Complex64::from_polar(1.0, TAU * phase)
    }

    /// Degree-`k` elementary symmetric function of the weight characters.
    fn elementary(weights: &[Vec<i64>], theta: &[f64], k: usize) -> Complex64 {
        let mut e = vec![Complex64::new(0.0, 0.0); k + 1];
        e[0] = Complex64::new(1.0, 0.0);
        for w in weights {
            let c = character(w, theta);
            for j in (1..=k).rev() {
                let prev = e[j - 1];
                e[j] += prev * c;
            }
        }
        e[k]
    }

    /// Monte Carlo estimate of `(1/|W|) ∫_T a_k^n ∏_α (1 − t^α) dt`.
    pub fn estimate(
        weights: &[Vec<i64>],
        roots: &[Vec<i64>],
        rank: usize,
        weyl_order: f64,
        k: usize,
        n: u32,
        samples: usize,
        seed: u64,
    ) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut acc = 0.0;
        let mut theta = vec![0.0; rank];
        for _ in 0..samples {
            for t in theta.iter_mut() {
                *t = rng.gen::<f64>();
            }
            let mut val = elementary(weights, &theta, k).powu(n);
            for a in roots {
                val *= Complex64::new(1.0, 0.0) - character(a, &theta);
            }
            acc += val.re;
        }
        acc / samples as f64 / weyl_order
    }
}

/// Cyclotomic polynomial by exact division of `x^n − 1`.
pub fn cyclotomic(n: usize) -> IntPolynomial {
    let mut c = vec![0i64; n + 1];
    c[0] = -1;
    c[n] = 1;
    let mut p = IntPolynomial::from_i64s(&c);
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = p.div_exact(&cyclotomic(d)).expect("cyclotomic divides");
        }
    }
    p
}

/// `p^{deg} Φ_n(x/p)`, whose roots are `p·ζ` for primitive `n`-th roots of
/// unity `ζ`. It is a Weil polynomial for `q = p²`.
pub fn scaled_cyclotomic(n: usize, p: i64) -> WeilPolynomial {
    let phi = cyclotomic(n);
    let d = phi.degree();
    let coeffs: Vec<BigInt> = phi
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| c * BigInt::from(p).pow((d - i) as u32))
        .collect();
    validate_weil(IntPolynomial::new(coeffs), &BigInt::from(p * p)).expect("scaled cyclotomic is Weil")
}

/// Ordinary genus-2 polynomials with a mix of Galois groups: generic
/// quartics, products of two elliptic factors, and even quartics.
pub fn random_genus2(rng: &mut rand_chacha::ChaCha8Rng, count: usize) -> Vec<WeilPolynomial> {
    use rand::Rng;
    let primes = [5i64, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43];
    let mut out = Vec::new();
    while out.len() < count {
        let p = primes[rng.gen_range(0..primes.len())];
        let bound = (4.0 * (p as f64).sqrt()) as i64;
        let (a, b) = match out.len() % 3 {
            0 => (rng.gen_range(-bound..=bound), rng.gen_range(-2 * p..=6 * p)),
            1 => {
                let t = 2 * (p as f64).sqrt() as i64;
                let (a1, a2) = (rng.gen_range(-t..=t), rng.gen_range(-t..=t));
                if a1 == a2 {
                    continue;
                }
                (-(a1 + a2), 2 * p + a1 * a2)
            }
            _ => (0, rng.gen_range(-2 * p..=6 * p)),
        };
        let poly = IntPolynomial::from_i64s(&[p * p, p * a, b, a, 1]);
        let Ok(w) = validate_weil(poly, &BigInt::from(p)) else { continue };
        let sqf_ok = mtroot::exactpoly::squarefree_part(w.poly()).map(|s| s.degree() == 4).unwrap_or(false);
        if sqf_ok && mtroot::philattice::is_ordinary(&w) {
            out.push(w);
        }
    }
    out
}

/// Exhaustive, certified Galois group of a labeled root set whose pairing
/// overgroup is small.
pub mod galois_oracle {
    use mtroot::padic::{LabeledRoots, PadicElement, PadicRing};
    use num_bigint::BigInt;
    use num_integer::Roots;
    use num_traits::Signed;
    use std::collections::BTreeSet;

    pub type Images = Vec<usize>;

    fn permutations(n: usize) -> Vec<Images> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for pos in 0..n {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    fn compose(a: &Images, b: &Images) -> Images {
        // (a ∘ b)(i) = a(b(i))
        b.iter().map(|&i| a[i]).collect()
    }

    /// Permutations commuting with `i ↦ i + n/2 (mod n)`, found by filtering
    /// the full symmetric group.
    pub fn pairing_centralizer(n: usize) -> Vec<Images> {
        let h = n / 2;
        permutations(n).into_iter().filter(|s| (0..n).all(|i| s[(i + h) % n] == (s[i] + h) % n)).collect()
    }

    /// Every subgroup, by testing closure of every subset.
    pub fn subgroups(g: &[Images]) -> Vec<Vec<Images>> {
        assert!(g.len() <= 16, "subset search is exponential");
        let id: Images = (0..g[0].len()).collect();
        let mut out = Vec::new();
        for mask in 0u32..(1 << g.len()) {
            let h: Vec<Images> = (0..g.len()).filter(|i| mask >> i & 1 == 1).map(|i| g[i].clone()).collect();
            let set: BTreeSet<&Images> = h.iter().collect();
            if set.contains(&id) && h.iter().all(|a| h.iter().all(|b| set.contains(&compose(a, b)))) {
                out.push(h);
            }
        }
        out
    }

    fn symmetric(ring: &PadicRing<'_>, a: &PadicElement) -> Option<BigInt> {
        let c = ring.as_integer(a)?;
        let m = ring.modulus();
        Some(if &c * 2 > *m { c - m } else { c })
    }

    /// `Γ` as the intersection of all `H` whose invariant
    /// `θ_H = Σ_{h∈H} ∏ y_{h(i)}^i` is a rational integer, with
    /// `y_i = π_i + c·π_i²`. Values are compared at a precision where an
    /// integer congruence forces equality, so every decision is certified.
    pub fn galois_group(roots: &LabeledRoots) -> BTreeSet<Images> {
        let n = roots.len();
        let g = pairing_centralizer(n);
        let subs = subgroups(&g);
        let q = roots.q().clone();
        'shift: for c in 1i64..=8 {
            // |y_i| ≤ B, |θ_H| ≤ |G|·B^{n(n-1)/2}, conjugates of θ − N bounded by 2|θ|
            let b: BigInt = Roots::sqrt(&q) + 1 + &q * c;
            let theta_bound: BigInt = BigInt::from(g.len()) * b.pow((n * (n - 1) / 2) as u32);
            let norm_bound: BigInt = (&theta_bound * 2u32).pow(g.len() as u32);
            let ell = BigInt::from(roots.ell());
            let mut prec = 1u32;
            while ell.pow(prec) <= norm_bound {
                prec += 1;
            }
            let lifted = roots.hensel_lift_to(prec.max(roots.precision())).expect("simple roots lift");
            let ring = lifted.ring();
            let cc = ring.from_int(&BigInt::from(c));
            let y: Vec<PadicElement> = lifted
                .roots()
                .iter()
                .map(|p| ring.add(p, &ring.mul(&cc, &ring.mul(p, p))))
                .collect();
            let theta = |h_set: &[Images], sigma: &Images| -> PadicElement {
                let mut acc = ring.zero();
                for h in h_set {
                    let moved = compose(sigma, h);
                    let mut term = ring.one();
                    for (i, &j) in moved.iter().enumerate() {
                        term = ring.mul(&term, &ring.pow(&y[j], &BigInt::from(i)));
                    }
                    acc = ring.add(&acc, &term);
                }
                acc
            };
            let mut gamma: BTreeSet<Images> = g.iter().cloned().collect();
            for h in &subs {
                // conjugate values must separate the left cosets of H
                let mut by_coset: Vec<(BTreeSet<Images>, PadicElement)> = Vec::new();
                for s in &g {
                    let coset: BTreeSet<Images> = h.iter().map(|x| compose(s, x)).collect();
                    if by_coset.iter().any(|(c, _)| *c == coset) {
                        continue;
                    }
                    let v = theta(h, s);
                    if by_coset.iter().any(|(_, w)| *w == v) {
                        continue 'shift;
                    }
                    by_coset.push((coset, v));
                }
                let id: Images = (0..n).collect();
                let v = theta(h, &id);
                let rational = symmetric(&ring, &v).is_some_and(|x| x.abs() <= theta_bound);
                if rational {
                    gamma.retain(|s| h.contains(s));
                }
            }
            return gamma;
        }
        panic!("no separating transform found");
    }
}

/// Roots `p·ζ^{j_i}` of a scaled cyclotomic polynomial, with the exponent
/// `j_i` of each label read off against `ζ = π_0 / p`.
pub fn cyclotomic_exponents(roots: &mtroot::padic::LabeledRoots, n: usize, p: i64) -> Vec<usize> {
    let ring = roots.ring();
    let pinv = ring.inv(&ring.from_int(&BigInt::from(p))).expect("p is a unit");
    let u: Vec<_> = roots.roots().iter().map(|r| ring.mul(r, &pinv)).collect();
    let zeta = &u[0];
    let powers: Vec<_> = (0..n).map(|j| ring.pow(zeta, &BigInt::from(j))).collect();
    u.iter().map(|x| powers.iter().position(|z| z == x).expect("root is a power of ζ")).collect()
}

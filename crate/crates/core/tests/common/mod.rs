#![allow(dead_code)]

use std::sync::Arc;

use qtorus::module::{induce_cyclic, CFiniteModule};
use qtorus::{AlgebraSpec, Coefficient, GammaElement, Rat, Sublattice};

pub fn t(k: i64) -> GammaElement {
    GammaElement::new(1, 0, vec![k])
}

pub fn zeta(order: u64, k: i64) -> GammaElement {
    GammaElement::new(order, k, vec![])
}

pub fn lat(n: usize, rows: &[Vec<i64>]) -> Sublattice {
    Sublattice::from_i64_rows(n, rows).unwrap()
}

/// `u_1 u_2 = t u_2 u_1`.
pub fn plane() -> Arc<AlgebraSpec> {
    Arc::new(AlgebraSpec::from_upper(2, 1, 1, &[(0, 1, t(1))]).unwrap())
}

/// `u_1 u_2 = ζ_3 u_2 u_1`.
pub fn clock() -> Arc<AlgebraSpec> {
    Arc::new(AlgebraSpec::from_upper(2, 3, 0, &[(0, 1, zeta(3, 1))]).unwrap())
}

pub fn one(spec: &AlgebraSpec) -> Coefficient {
    spec.ring().one()
}

/// `F∗A ⊗_{F∗E} 1` with `C = span{e_1}` and `E = span{e_2}` on a rank-2 spec.
pub fn weight_module(spec: &Arc<AlgebraSpec>) -> CFiniteModule<Rat> {
    induce_cyclic(spec, &lat(2, &[vec![1, 0]]), &lat(2, &[vec![0, 1]]), &[one(spec)]).unwrap()
}

/// The three-dimensional clock-and-shift module of [`clock`].
pub fn clock_shift_module() -> CFiniteModule<Rat> {
    let spec = clock();
    let e = lat(2, &[vec![3, 0], vec![0, 1]]);
    induce_cyclic(&spec, &Sublattice::zero(2), &e, &[one(&spec), one(&spec)]).unwrap()
}

// ---- seeded random generators -------------------------------------------

use qtorus::TorusElement;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seed from `QTORUS_SEED`, or a fixed default.
pub fn seeded_rng(salt: u64) -> ChaCha8Rng {
    let seed = std::env::var("QTORUS_SEED")
        .ok()
        .and_then(|s| s.trim().parse::<u64>().ok())
        .unwrap_or(20_240_611);
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Coefficient-ring shapes covering cyclotomic, generic and mixed modes.
pub const MODES: [(u64, usize); 7] = [(1, 1), (1, 2), (2, 0), (3, 0), (4, 0), (6, 1), (3, 1)];

pub fn random_gamma(rng: &mut ChaCha8Rng, order: u64, params: usize, bound: i64) -> GammaElement {
    GammaElement::new(
        order,
        rng.gen_range(-bound..=bound),
        (0..params).map(|_| rng.gen_range(-bound..=bound)).collect(),
    )
}

pub fn random_spec(rng: &mut ChaCha8Rng, n: usize, order: u64, params: usize, bound: i64) -> Arc<AlgebraSpec> {
    let mut entries = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            entries.push((i, j, random_gamma(rng, order, params, bound)));
        }
    }
    Arc::new(AlgebraSpec::from_upper(n, order, params, &entries).unwrap())
}

pub fn random_exponent(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Vec<i64> {
    (0..n).map(|_| rng.gen_range(-bound..=bound)).collect()
}

pub fn random_coefficient(rng: &mut ChaCha8Rng, spec: &AlgebraSpec) -> Coefficient {
    let ring = spec.ring();
    let mut c = ring.zero();
    for _ in 0..rng.gen_range(1..=2) {
        let g = random_gamma(rng, spec.torsion_order(), spec.free_params(), 2);
        let q = Rat::new(rng.gen_range(1..=6i64).into(), rng.gen_range(1..=4i64).into());
        let q = if rng.gen_bool(0.5) { -q } else { q };
        c = &c + &ring.embed_unit::<Rat>(&g).scale_rational(&q);
    }
    c
}

/// A nonzero element with at most `max_support` terms.
pub fn random_element(rng: &mut ChaCha8Rng, spec: &Arc<AlgebraSpec>, max_support: usize) -> TorusElement {
    loop {
        let k = rng.gen_range(1..=max_support);
        let terms: Vec<_> = (0..k)
            .map(|_| (random_exponent(rng, spec.rank(), 2), random_coefficient(rng, spec)))
            .collect();
        let x = TorusElement::from_terms(spec, terms).unwrap();
        if !x.is_zero() {
            return x;
        }
    }
}

// ---- independent integer oracles ------------------------------------------

/// Determinant by cofactor expansion in `i128`.
pub fn det_i128(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det_i128(&minor)
            })
            .sum(),
    }
}

pub fn gcd_i128(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd_i128(b, a % b)
    }
}

/// Gcd of all maximal minors of an `r × k` matrix with `r ≤ k`; equals the
/// product of its invariant factors.
pub fn maximal_minor_gcd(m: &[Vec<i128>]) -> i128 {
    let r = m.len();
    let k = m.first().map_or(0, Vec::len);
    let mut g = 0;
    let mut cols: Vec<usize> = (0..r).collect();
    if r == 0 {
        return 1;
    }
    loop {
        let sub: Vec<Vec<i128>> = m.iter().map(|row| cols.iter().map(|&c| row[c]).collect()).collect();
        g = gcd_i128(g, det_i128(&sub));
        // next r-combination of 0..k
        let mut i = r;
        loop {
            if i == 0 {
                return g;
            }
            i -= 1;
            if cols[i] < k - r + i {
                cols[i] += 1;
                for t in i + 1..r {
                    cols[t] = cols[t - 1] + 1;
                }
                break;
            }
        }
    }
}

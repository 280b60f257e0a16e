mod common;

use std::sync::Arc;

use common::*;
use proptest::prelude::*;
use qtorus::commutative::{
    complement_solver, holonomic_certificate, max_commutative_rank, units_commute, verify_virtual_complement,
};
use qtorus::{AlgebraSpec, Error, GammaElement, Sublattice};

fn spec_strategy(max_n: usize) -> impl Strategy<Value = Arc<AlgebraSpec>> {
    (2..=max_n, 0..MODES.len()).prop_flat_map(|(n, mode)| {
        let (order, params) = MODES[mode];
        let pairs = n * (n - 1) / 2;
        prop::collection::vec((-2i64..=2, prop::collection::vec(-2i64..=2, params)), pairs).prop_map(move |gs| {
            let mut entries = Vec::new();
            let mut it = gs.into_iter();
            for i in 0..n {
                for j in i + 1..n {
                    let (tors, free) = it.next().unwrap();
                    entries.push((i, j, GammaElement::new(order, tors, free)));
                }
            }
            Arc::new(AlgebraSpec::from_upper(n, order, params, &entries).unwrap())
        })
    })
}

fn box_vectors(n: usize, k: i64) -> Vec<Vec<i64>> {
    let mut pts = vec![vec![]];
    for _ in 0..n {
        pts = pts
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (-k..=k).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    pts.retain(|v| v.iter().any(|&x| x != 0));
    pts
}

/// Largest number of independent, pairwise commuting vectors in a box.
fn brute_force_rank(spec: &AlgebraSpec, k: i64) -> usize {
    let n = spec.rank();
    let vs = box_vectors(n, k);
    let commute = |a: &[i64], b: &[i64]| spec.beta(a, b).is_zero();
    let mut best = 0;
    fn extend(
        spec_n: usize,
        vs: &[Vec<i64>],
        chosen: &mut Vec<Vec<i64>>,
        start: usize,
        best: &mut usize,
        commute: &dyn Fn(&[i64], &[i64]) -> bool,
    ) {
        *best = (*best).max(chosen.len());
        if *best == spec_n {
            return;
        }
        for i in start..vs.len() {
            let v = &vs[i];
            if !chosen.iter().all(|c| commute(c, v)) {
                continue;
            }
            chosen.push(v.clone());
            let independent = lat(spec_n, chosen).rank() == chosen.len();
            if independent {
                extend(spec_n, vs, chosen, i + 1, best, commute);
            }
            chosen.pop();
        }
    }
    extend(n, &vs, &mut Vec::new(), 0, &mut best, &commute);
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn max_commutative_against_brute_force(spec in spec_strategy(3)) {
        let mc = max_commutative_rank(&spec, 2).unwrap();
        prop_assert!(spec.is_commutative_sublattice(&mc.witness).unwrap());
        prop_assert_eq!(mc.witness.rank(), mc.rank);
        prop_assert!(mc.rank <= mc.upper_bound);
        let k = if spec.rank() == 2 { 3 } else { 1 };
        let brute = brute_force_rank(&spec, k);
        prop_assert!(brute <= mc.upper_bound);
        prop_assert!(mc.rank >= brute, "search found {} but box has {}", mc.rank, brute);
        if mc.exact {
            prop_assert!(mc.rank >= brute);
        }
        if brute == mc.upper_bound {
            prop_assert!(mc.exact);
        }
    }

    #[test]
    fn complement_closed_loop(spec in spec_strategy(4), v in prop::collection::vec(-2i64..=2, 4)) {
        let n = spec.rank();
        let v = v[..n].to_vec();
        prop_assume!(v.iter().any(|&x| x != 0));
        let c = lat(n, &[v]).saturation();
        match complement_solver(&spec, &c, 8) {
            Ok(sol) => {
                let e = sol.e_lattice(n).unwrap();
                prop_assert!(verify_virtual_complement(&spec, &c, &e).unwrap().passed());
                prop_assert!(units_commute(&spec, &sol).unwrap());
                prop_assert!(sol.s >= 1 && sol.s <= 8);
            }
            Err(Error::NoSolution { bound }) => prop_assert_eq!(bound, 8),
            Err(e) => prop_assert!(false, "unexpected error {:?}", e),
        }
    }
}

#[test]
fn solver_preconditions() {
    let spec = plane();
    assert!(matches!(complement_solver(&spec, &Sublattice::full(2), 5), Err(Error::Precondition(_))));
    assert!(matches!(complement_solver(&spec, &lat(2, &[vec![2, 0]]), 5), Err(Error::NotSaturated)));
}

#[test]
fn torsion_parameters_need_larger_exponent() {
    let spec = Arc::new(AlgebraSpec::from_upper(3, 3, 0, &[(1, 2, zeta(3, 1))]).unwrap());
    let c = lat(3, &[vec![1, 0, 0]]);
    let sol = complement_solver(&spec, &c, 10).unwrap();
    assert_eq!(sol.s, 3);
    assert!(units_commute(&spec, &sol).unwrap());
    assert!(matches!(complement_solver(&spec, &c, 2), Err(Error::NoSolution { bound: 2 })));
}

#[test]
fn holonomic_certificates() {
    let cert = holonomic_certificate(&plane(), 1, 2).unwrap();
    assert!(cert.certified);
    assert_eq!(cert.verdict(), "finite length");
    let cert = holonomic_certificate(&plane(), 2, 2).unwrap();
    assert!(!cert.certified);
    assert_eq!(cert.verdict(), "inconclusive");
}

mod common;

use std::sync::Arc;

use common::*;
use proptest::prelude::*;
use qtorus::algebra::Rebasing;
use qtorus::{AlgebraSpec, Coefficient, GammaElement, IntMatrix, Rat, TorusElement};

fn spec_strategy(max_n: usize) -> impl Strategy<Value = Arc<AlgebraSpec>> {
    (1..=max_n, 0..MODES.len()).prop_flat_map(|(n, mode)| {
        let (order, params) = MODES[mode];
        let pairs = n * (n - 1) / 2;
        prop::collection::vec((-3i64..=3, prop::collection::vec(-3i64..=3, params)), pairs).prop_map(move |gs| {
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

fn coefficient(spec: &AlgebraSpec, tors: i64, free: &[i64], num: i64, den: i64) -> Coefficient {
    let g = GammaElement::new(spec.torsion_order(), tors, free.iter().take(spec.free_params()).cloned().collect());
    spec.ring()
        .embed_unit::<Rat>(&g)
        .scale_rational(&Rat::new(num.into(), den.into()))
}

type RawTerm = (Vec<i64>, i64, Vec<i64>, i64, i64);

fn raw_terms() -> impl Strategy<Value = Vec<RawTerm>> {
    prop::collection::vec(
        (
            prop::collection::vec(-2i64..=2, 4),
            0i64..6,
            prop::collection::vec(-2i64..=2, 2),
            prop_oneof![-4i64..=-1, 1i64..=4],
            1i64..=3,
        ),
        1..=4,
    )
}

fn element(spec: &Arc<AlgebraSpec>, raw: &[RawTerm]) -> TorusElement {
    let n = spec.rank();
    TorusElement::from_terms(
        spec,
        raw.iter()
            .map(|(a, tors, free, num, den)| (a[..n].to_vec(), coefficient(spec, *tors, free, *num, *den))),
    )
    .unwrap()
}

fn exponent() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-5i64..=5, 4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn multiplication_is_associative(spec in spec_strategy(4), x in raw_terms(), y in raw_terms(), z in raw_terms()) {
        let (x, y, z) = (element(&spec, &x), element(&spec, &y), element(&spec, &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
    }

    #[test]
    fn multiplication_distributes(spec in spec_strategy(3), x in raw_terms(), y in raw_terms(), z in raw_terms()) {
        let (x, y, z) = (element(&spec, &x), element(&spec, &y), element(&spec, &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&(&y + &z) * &x, &(&y * &x) + &(&z * &x));
    }

    #[test]
    fn cocycle_identity(spec in spec_strategy(4), a in exponent(), b in exponent(), c in exponent()) {
        let n = spec.rank();
        let (a, b, c) = (&a[..n], &b[..n], &c[..n]);
        let ab: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        let bc: Vec<i64> = b.iter().zip(c).map(|(x, y)| x + y).collect();
        prop_assert_eq!(
            &spec.cocycle(a, b) + &spec.cocycle(&ab, c),
            &spec.cocycle(b, c) + &spec.cocycle(a, &bc)
        );
    }

    #[test]
    fn commutator_is_alternating_and_biadditive(spec in spec_strategy(4), a in exponent(), b in exponent(), c in exponent()) {
        let n = spec.rank();
        let (a, b, c) = (&a[..n], &b[..n], &c[..n]);
        prop_assert!(spec.beta(a, a).is_zero());
        prop_assert_eq!(spec.beta(a, b), -&spec.beta(b, a));
        let bc: Vec<i64> = b.iter().zip(c).map(|(x, y)| x + y).collect();
        prop_assert_eq!(spec.beta(a, &bc), &spec.beta(a, b) + &spec.beta(a, c));
    }

    #[test]
    fn monomials_are_units(spec in spec_strategy(4), a in exponent(), tors in 0i64..6, free in prop::collection::vec(-2i64..=2, 2)) {
        let n = spec.rank();
        let x = TorusElement::monomial(&spec, &a[..n], coefficient(&spec, tors, &free, 3, 2));
        let inv = x.unit_inverse().unwrap();
        prop_assert_eq!(&x * &inv, TorusElement::one(&spec));
        prop_assert_eq!(&inv * &x, TorusElement::one(&spec));
    }

    #[test]
    fn center_lattice_is_central(spec in spec_strategy(4)) {
        let n = spec.rank();
        for row in spec.center_lattice().to_i64_rows().unwrap() {
            let z = TorusElement::basis(&spec, &row);
            for i in 0..n {
                let mut e = vec![0; n];
                e[i] = 1;
                let x = TorusElement::basis(&spec, &e);
                prop_assert_eq!(&z * &x, &x * &z);
            }
        }
    }

    #[test]
    fn rebasing_is_an_isomorphism(spec in spec_strategy(3), x in raw_terms(), y in raw_terms(), shear in -3i64..=3, swap in any::<bool>()) {
        let n = spec.rank();
        let mut rows: Vec<Vec<i64>> = (0..n).map(|i| { let mut e = vec![0; n]; e[i] = 1; e }).collect();
        if n >= 2 {
            rows[0][1] = shear;
            if swap {
                rows.swap(0, n - 1);
            }
        }
        let u = IntMatrix::from_i64_rows(n, &rows).unwrap();
        let r = Rebasing::new(&spec, &u).unwrap();
        let (x, y) = (element(&spec, &x), element(&spec, &y));
        let fx = r.forward(&x).unwrap();
        let fy = r.forward(&y).unwrap();
        prop_assert_eq!(r.backward(&fx).unwrap(), x.clone());
        prop_assert_eq!(r.forward(&(&x * &y)).unwrap(), &fx * &fy);
    }
}

#[test]
fn plane_relation_and_commutator() {
    let spec = plane();
    let u1 = TorusElement::basis(&spec, &[1, 0]);
    let u2 = TorusElement::basis(&spec, &[0, 1]);
    let q = spec.ring().embed_unit(&t(1));
    assert_eq!(&u1 * &u2, (&u2 * &u1).scale(&q));
    let comm = u1.group_commutator(&u2).unwrap();
    assert_eq!(comm, TorusElement::monomial(&spec, &[0, 0], q));
}

#[test]
fn mismatched_specs_are_rejected() {
    let a = TorusElement::one(&plane());
    let b = TorusElement::one(&clock());
    assert!(a.try_mul(&b).is_err());
    assert!(a.try_add(&b).is_err());
}

mod common;


use common::*;
use proptest::prelude::*;
use qtorus::format::*;
use qtorus::module::ModuleAction;
use qtorus::nilpotent::{CentralCharacter, Class2Datum};
use qtorus::{Bounds, Error, GammaElement, Rat};

fn parse_path(result: Result<impl std::fmt::Debug, Error>) -> String {
    match result {
        Err(Error::Parse { path, .. }) => path,
        other => panic!("expected a parse error, got {other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn specs_round_trip(salt in any::<u64>(), n in 1usize..5, mode in 0..MODES.len()) {
        let mut rng = seeded_rng(salt);
        let (order, params) = MODES[mode];
        let spec = random_spec(&mut rng, n, order, params, 3);
        let text = to_canonical_string(&spec_to_json(&spec));
        let back = spec_from_json(&parse_json(&text).unwrap()).unwrap();
        prop_assert_eq!(&back, &*spec);
        prop_assert_eq!(to_canonical_string(&spec_to_json(&back)), text);
    }

    #[test]
    fn elements_round_trip(salt in any::<u64>(), mode in 0..MODES.len()) {
        let mut rng = seeded_rng(salt);
        let (order, params) = MODES[mode];
        let spec = random_spec(&mut rng, 3, order, params, 2);
        let x = random_element(&mut rng, &spec, 4);
        let text = to_canonical_string(&element_to_json(&x));
        let back: qtorus::TorusElement = element_from_json(&spec, &parse_json(&text).unwrap(), "x").unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn data_and_characters_round_trip(
        comm in prop::collection::vec(prop::collection::vec(-3i64..=3, 2), 3),
        imgs in prop::collection::vec((0i64..5, -3i64..=3), 2),
    ) {
        let mut d = Class2Datum::new(3, 2).unwrap();
        for ((i, j), c) in [(0, 1), (0, 2), (1, 2)].into_iter().zip(comm) {
            d.set_comm(i, j, c).unwrap();
        }
        let text = to_canonical_string(&datum_to_json(&d));
        prop_assert_eq!(datum_from_json(&parse_json(&text).unwrap()).unwrap(), d);

        let images = imgs.into_iter().map(|(z, t)| GammaElement::new(5, z, vec![t])).collect();
        let chi = CentralCharacter::new(5, 1, images).unwrap();
        let text = to_canonical_string(&character_to_json(&chi));
        prop_assert_eq!(character_from_json(&parse_json(&text).unwrap()).unwrap(), chi);
    }

    #[test]
    fn bounds_round_trip(k_max in 1usize..20, deg_bound in 0u32..10, s_max in 1u64..50, search_bound in 0u32..6) {
        let b = Bounds { k_max, deg_bound, s_max, search_bound };
        prop_assert_eq!(bounds_from_json(&bounds_to_json(&b), "bounds").unwrap(), b);
    }
}

#[test]
fn modules_round_trip() {
    let modules = [weight_module(&plane()), clock_shift_module()];
    for m in modules {
        let text = to_canonical_string(&module_to_json(&m));
        let back = module_from_json::<Rat>(m.spec(), &parse_json(&text).unwrap()).unwrap();
        assert_eq!(to_canonical_string(&module_to_json(&back)), text);
    }
}

#[test]
fn canonical_output_sorts_keys() {
    let text = to_canonical_string(&spec_to_json(&plane()));
    let keys: Vec<_> = ["\"free_params\"", "\"q\"", "\"rank\"", "\"torsion_order\""]
        .iter()
        .map(|k| text.find(k).unwrap())
        .collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
    assert!(text.ends_with("}\n"));
}

#[test]
fn parse_errors_name_the_offending_field() {
    let bad_index = r#"{"rank": 2, "torsion_order": 1, "free_params": 1, "q": [{"i": 1, "j": 3, "tors": 0, "free": [1]}]}"#;
    assert_eq!(parse_path(spec_from_json(&parse_json(bad_index).unwrap())), "q[0].j");

    let missing = r#"{"rank": 2, "free_params": 1, "q": []}"#;
    assert!(parse_path(spec_from_json(&parse_json(missing).unwrap())).contains("torsion_order"));

    let spec = plane();
    let bad_coeff = r#"{"terms": [{"exponent": [1, 0], "coeff": 5}]}"#;
    let r: Result<qtorus::TorusElement, _> = element_from_json(&spec, &parse_json(bad_coeff).unwrap(), "x");
    assert!(parse_path(r).starts_with("x.terms[0]"));

    let wrong_len = r#"{"terms": [{"exponent": [1], "coeff": []}]}"#;
    let r: Result<qtorus::TorusElement, _> = element_from_json(&spec, &parse_json(wrong_len).unwrap(), "x");
    assert_eq!(parse_path(r), "x.terms[0].exponent");

    let unknown = parse_json(r#"{"k_max": 3, "depth": 2}"#).unwrap();
    assert_eq!(parse_path(bounds_from_json(&unknown, "bounds")), "bounds.depth");

    assert!(matches!(parse_json("{"), Err(Error::Parse { .. })));
}

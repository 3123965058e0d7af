use proptest::prelude::*;

use fanforge::io::{document_to_json, parse_document, ComplexDocument};
use fanforge::resolve::resolve;
use fanforge::{fixtures, ResolveOptions};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn resolved_documents_round_trip(seed in 0u64..10_000) {
        let k = fixtures::random_simplicial_cones(1, 3, 4, seed).remove(0);
        let r = resolve(&k, ResolveOptions::sequential()).unwrap();
        let doc = ComplexDocument { complex: Some(r.complex), marking: Some(r.marking), omega: None, map: None };
        let text = document_to_json(&doc);
        let back = parse_document(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(document_to_json(&back), text);
    }
}

use std::collections::BTreeSet;

use proptest::prelude::*;

use fanforge::fixtures;
use fanforge::relative::{resolve_relative, RelativeComplex};
use fanforge::resolve::resolve;
use fanforge::{CellId, Marking, ResolveOptions};

/// A random cone with one of its rays as Ω.
fn with_random_ray(seed: u64) -> RelativeComplex {
    let k = fixtures::random_simplicial_cones(1, 3, 4, seed).remove(0);
    let rays = k.rays();
    let r = rays[seed as usize % rays.len()];
    RelativeComplex::new(
        k,
        [r].into_iter().collect(),
        &Marking::from_ranks([(r, 0)].into_iter().collect()),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn omega_is_never_subdivided(seed in 0u64..10_000) {
        let rk = with_random_ray(seed);
        let out = resolve_relative(&rk, ResolveOptions::sequential()).unwrap();
        let omega: BTreeSet<CellId> = rk.omega().clone();
        for step in &out.resolution.trace.steps {
            for c in &step.centers {
                prop_assert!(!omega.contains(&c.cell), "center {:?} in Ω", c.ambient_vector);
            }
        }
        for id in &omega {
            prop_assert!(out.relative.complex.contains(*id));
        }
        for s in out.relative.complex.maximal_cells() {
            prop_assert!(out.relative.pair_status(s).regular_pair);
        }
    }

    #[test]
    fn trivial_omega_is_absolute(seed in 0u64..10_000) {
        let k = fixtures::random_simplicial_cones(1, 3, 4, seed).remove(0);
        let abs = resolve(&k, ResolveOptions::sequential()).unwrap();
        let rel = resolve_relative(&fixtures::trivial_relative(&k), ResolveOptions::sequential()).unwrap();
        prop_assert_eq!(abs.trace.to_json_lines(), rel.resolution.trace.to_json_lines());
    }
}

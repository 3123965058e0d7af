use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fanforge::complex::StarCenter;
use fanforge::fixtures;
use fanforge::marking::MarkingError;
use fanforge::resolve::barycentric_phase;
use fanforge::{CellId, ConicalComplex, Marking, ResolveOptions};

fn interior(k: &ConicalComplex, cell: CellId, rng: &mut ChaCha8Rng) -> StarCenter {
    let v = k
        .cone(cell)
        .vertices()
        .iter()
        .map(|u| u.scale(&rng.gen_range(1..=2).into()))
        .reduce(|a, b| &a + &b)
        .unwrap()
        .primitive_part();
    StarCenter {
        carrier: cell,
        vector: v,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Batches of centers in distinct maximal cells: each batch gets one rank,
    /// and no cell ever holds two vertices of the same batch.
    #[test]
    fn batches_keep_the_order_total(seed in 0u64..10_000, rounds in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut k = fixtures::random_simplicial_cones(1, 3, 4, seed).remove(0);
        let mut marking = Marking::new();
        for _ in 0..rounds {
            let mut maximal = k.maximal_cells();
            maximal.shuffle(&mut rng);
            let take = rng.gen_range(1..=maximal.len().min(3));
            let centers: Vec<StarCenter> = maximal[..take].iter().map(|&c| interior(&k, c, &mut rng)).collect();
            let sub = k.star_subdivide(&centers).unwrap();
            marking = marking.restrict_to(&sub.complex).extend_with_batch(&sub.new_rays);
            k = sub.complex;
            prop_assert_eq!(marking.validate(&k), Ok(()));
        }
    }

    /// After the barycentric phase every singular cell has a unique
    /// order-minimal small vector.
    #[test]
    fn minimal_small_vector_is_unique(seed in 0u64..10_000) {
        let k = fixtures::random_simplicial_cones(1, 3, 4, seed).remove(0);
        let r = barycentric_phase(&k, ResolveOptions::sequential()).unwrap();
        prop_assert!(r.marking.is_regularly_marked(&r.complex));
        for s in r.complex.ids() {
            let cone = r.complex.cone(s);
            if cone.dim() >= 2 && !cone.is_regular() {
                match r.marking.minimal_small_vector(&r.complex, s) {
                    Ok(v) => prop_assert!(cone.small_vectors().unwrap().contains(&v)),
                    Err(MarkingError::UniquenessViolated(c)) => prop_assert!(false, "tie in cell {}", c),
                    Err(e) => prop_assert!(false, "{}", e),
                }
            }
        }
    }

    /// Comparisons survive a unimodular relabeling that carries the ranks along.
    #[test]
    fn comparison_is_equivariant(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = fixtures::unimodular_conjugations(3, seed).remove(seed as usize % 3);
        let mut rays = m.source.rays();
        rays.shuffle(&mut rng);
        let ranks: BTreeMap<CellId, u64> = rays.iter().enumerate().map(|(i, &r)| (r, i as u64)).collect();
        let moved: BTreeMap<CellId, u64> = ranks.iter().map(|(r, &q)| (m.map.assignments[r].0, q)).collect();
        let (src, dst) = (Marking::from_ranks(ranks), Marking::from_ranks(moved));
        for s in m.source.maximal_cells() {
            let small = m.source.cone(s).small_vectors().unwrap();
            for v in &small {
                for w in &small {
                    let (t, fv) = m.map.apply(s, v).unwrap();
                    let (_, fw) = m.map.apply(s, w).unwrap();
                    prop_assert_eq!(src.compare(&m.source, s, v, w).unwrap(), dst.compare(&m.target, t, &fv, &fw).unwrap());
                }
            }
        }
    }
}

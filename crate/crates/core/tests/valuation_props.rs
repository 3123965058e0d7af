use std::collections::BTreeMap;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fanforge::complex::StarCenter;
use fanforge::fixtures;
use fanforge::resolve::barycentric_phase;
use fanforge::valuation::{
    exceptional_coefficients, ideal_slice, pl_from_divisor, pl_function, val,
};
use fanforge::{ConicalComplex, IntVector, ResolveOptions};

fn small_vec(dim: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-6i64..=6, dim)
}

/// A random simplicial complex with several cells.
fn subdivided(seed: u64) -> ConicalComplex {
    let k = fixtures::random_simplicial_cones(1, 3, 3, seed).remove(0);
    barycentric_phase(&k, ResolveOptions::sequential())
        .unwrap()
        .complex
}

/// The singular top cone of a random fixture and its barycentric center.
fn centered(seed: u64) -> Option<(ConicalComplex, StarCenter)> {
    let k = fixtures::random_simplicial_cones(1, 3, 3, seed).remove(0);
    let top = k.maximal_cells()[0];
    let cone = k.cone(top);
    if cone.is_regular() {
        return None;
    }
    let v = cone.minimal_vectors().ok()?.into_iter().next()?;
    let (carrier, vector) = k.carrier(top, &v)?;
    Some((k, StarCenter { carrier, vector }))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn val_is_additive_on_monomials(v in small_vec(3), a in small_vec(3), b in small_vec(3)) {
        let (v, a, b) = (IntVector::from_i64s(&v), IntVector::from_i64s(&a), IntVector::from_i64s(&b));
        let sum = &a + &b;
        prop_assert_eq!(
            val(&v, std::slice::from_ref(&sum)).unwrap(),
            val(&v, std::slice::from_ref(&a)).unwrap() + val(&v, std::slice::from_ref(&b)).unwrap()
        );
    }

    #[test]
    fn divisor_round_trip(seed in 0u64..10_000) {
        let k = subdivided(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // values on rays extend linearly over each simplicial cell; when the
        // extension is integral it must read back the same values
        let coeffs: BTreeMap<_, BigInt> = k.rays().into_iter().map(|r| (r, BigInt::from(rng.gen_range(-4..=4)))).collect();
        if let Some(f) = pl_from_divisor(&coeffs, &k) {
            let back = exceptional_coefficients(&f);
            for (r, x) in &coeffs {
                prop_assert_eq!(&back[r], &num_rational::BigRational::from_integer(x.clone()));
            }
            prop_assert!(f.face_compatible());
        }
    }

    #[test]
    fn blowup_function_round_trips(seed in 0u64..10_000) {
        let Some((k, c)) = centered(seed) else { return Ok(()) };
        let unit = pl_function(&c, 1, &k).unwrap();
        let a = u64::try_from(&unit.min_integral_a).unwrap();
        let b = pl_function(&c, a, &k).unwrap();
        let f = b.function;
        // the divisor sits on the new ray only, whatever the orientation of the cell bases
        let unit_a = num_rational::BigRational::from_integer(BigInt::from(a));
        for (r, x) in exceptional_coefficients(&f) {
            if r == b.new_ray {
                prop_assert_eq!(&x, &unit_a);
            } else {
                prop_assert!(num_traits::Zero::is_zero(&x), "ray {} has {}", r, x);
            }
        }
        let coeffs: BTreeMap<_, BigInt> =
            exceptional_coefficients(&f).into_iter().map(|(r, x)| (r, x.to_integer())).collect();
        let g = pl_from_divisor(&coeffs, &f.complex).unwrap();
        prop_assert_eq!(g.functionals, f.functionals);
    }

    #[test]
    fn slices_shrink_as_a_grows(seed in 0u64..10_000, a in 1u64..3) {
        let Some((k, c)) = centered(seed) else { return Ok(()) };
        let bound = 6;
        let lo = ideal_slice(&c, a, &k, bound).unwrap();
        let hi = ideal_slice(&c, a + 1, &k, bound).unwrap();
        let double = ideal_slice(&c, 2 * a, &k, bound).unwrap();
        for (cell, s_hi) in &hi.cones {
            let s_lo = &lo.cones[cell];
            for g in &s_hi.generators {
                prop_assert!(s_lo.contains(g));
            }
            // sums of two elements of slice(a) lie in slice(2a)
            for g in &s_lo.generators {
                for h in &s_lo.generators {
                    let sum = g + h;
                    let heights_ok = s_lo.vertices.iter().all(|u| sum.dot(u) <= BigInt::from(bound));
                    if heights_ok {
                        prop_assert!(double.cones[cell].contains(&sum));
                    }
                }
            }
        }
    }
}

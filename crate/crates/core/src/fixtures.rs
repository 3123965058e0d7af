//! The fixture corpus used by the tests, the bench and the shipped JSON files.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{Cell, CellId, ComplexMap, ConicalComplex};
use crate::cone::Cone;
use crate::exactlin::{IntMatrix, IntVector};
use crate::marking::Marking;
use crate::relative::RelativeComplex;

fn v(x: &[i64]) -> IntVector {
    IntVector::from_i64s(x)
}

/// A fan in the standard lattice from ambient generator lists.
pub fn standard_fan(cones: &[Vec<IntVector>]) -> ConicalComplex {
    let n = cones[0][0].dim();
    ConicalComplex::from_fan(&IntMatrix::identity(n), cones).expect("fixture fans are valid")
}

/// `A_n`: the cone ⟨(1,0),(1,n)⟩, determinant n.
pub fn an_cone(n: i64) -> ConicalComplex {
    standard_fan(&[vec![v(&[1, 0]), v(&[1, n])]])
}

/// The quotient `1/r(1,a)`: the positive quadrant in the lattice
/// `ℤ² + ℤ·(1,a)/r`, scaled by r so that everything stays integral.
pub fn quotient_cone(r: i64, a: i64) -> ConicalComplex {
    let lattice = IntMatrix::from_i64_rows(&[vec![1, 0], vec![a, r]]);
    ConicalComplex::from_fan(&lattice, &[vec![v(&[1, 0]), v(&[0, 1])]]).expect("quotient cone")
}

/// All `(r, a)` with `2 ≤ r ≤ max_r`, `0 < a < r` and `gcd(a, r) = 1`.
pub fn quotient_parameters(max_r: i64) -> Vec<(i64, i64)> {
    (2..=max_r)
        .flat_map(|r| (1..r).filter(move |a| a.gcd(&r) == 1).map(move |a| (r, a)))
        .collect()
}

/// The positive octant in the lattice of even-sum vectors.
pub fn abramovich() -> ConicalComplex {
    let lattice = IntMatrix::from_i64_rows(&[vec![1, 1, 1], vec![1, -1, 0], vec![0, 0, 1]]);
    ConicalComplex::from_fan(
        &lattice,
        &[vec![v(&[2, 0, 0]), v(&[0, 2, 0]), v(&[0, 0, 2])]],
    )
    .expect("abramovich")
}

fn ray_with(k: &ConicalComplex, dir: &[i64]) -> CellId {
    k.rays()
        .into_iter()
        .find(|&r| k.cone(r).ambient_vertices()[0] == v(dir))
        .expect("ray present")
}

/// The Abramovich cone with Ω the face ⟨(2,0,0),(0,2,0)⟩, ordered
/// (2,0,0) < (0,2,0).
pub fn obstruction() -> RelativeComplex {
    let k = abramovich();
    let (a, b) = (ray_with(&k, &[2, 0, 0]), ray_with(&k, &[0, 2, 0]));
    let face = k
        .cells_of_dim(2)
        .into_iter()
        .find(|&f| k.is_face(a, f) && k.is_face(b, f))
        .expect("face");
    let order = Marking::from_ranks([(a, 0), (b, 1)].into_iter().collect());
    RelativeComplex::new(k, [a, b, face].into_iter().collect(), &order)
        .expect("obstruction is a valid pair")
}

/// Three planar cones glued in a cycle along their rays. It does not embed
/// as a fan in one lattice; each cell carries its own ℤ².
pub fn glued_complex() -> ConicalComplex {
    let zero = CellId(0);
    let rays = [CellId(1), CellId(2), CellId(3)];
    let tops = [
        (CellId(4), [1, 3]),
        (CellId(5), [1, 2]),
        (CellId(6), [0, 1]),
    ];
    let mut cells = BTreeMap::new();
    cells.insert(
        zero,
        Cell {
            cone: Cone::zero(0),
            faces: BTreeMap::new(),
        },
    );
    for r in rays {
        let cone = Cone::new(IntMatrix::identity(1), vec![v(&[1])]).expect("ray");
        cells.insert(
            r,
            Cell {
                cone,
                faces: [(zero, IntMatrix::zeros(1, 0))].into_iter().collect(),
            },
        );
    }
    for (i, (id, second)) in tops.iter().enumerate() {
        let (first_ray, second_ray) = (rays[i], rays[(i + 1) % 3]);
        let cone =
            Cone::new(IntMatrix::identity(2), vec![v(&[1, 0]), v(second)]).expect("planar cone");
        let faces = [
            (zero, IntMatrix::zeros(2, 0)),
            (first_ray, IntMatrix::from_i64_rows(&[vec![1], vec![0]])),
            (
                second_ray,
                IntMatrix::from_i64_rows(&[vec![second[0]], vec![second[1]]]),
            ),
        ];
        cells.insert(
            *id,
            Cell {
                cone,
                faces: faces.into_iter().collect(),
            },
        );
    }
    ConicalComplex::from_cells(cells)
}

/// The complete fan of the projective plane and the 3D positive octant.
pub fn regular_fans() -> Vec<ConicalComplex> {
    vec![
        standard_fan(&[
            vec![v(&[1, 0]), v(&[0, 1])],
            vec![v(&[0, 1]), v(&[-1, -1])],
            vec![v(&[-1, -1]), v(&[1, 0])],
        ]),
        standard_fan(&[vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])]]),
    ]
}

/// A 3-cone whose 2-face ⟨e₁, e₁+2e₂⟩ is glued through the index-2
/// sublattice its vertices generate: one saturation violation.
pub fn non_saturated() -> ConicalComplex {
    let k = standard_fan(&[vec![v(&[1, 0, 0]), v(&[1, 2, 0]), v(&[0, 0, 1])]]);
    let top = k.maximal_cells()[0];
    let tau = k
        .cells_of_dim(2)
        .into_iter()
        .find(|&t| k.cone(t).ambient_vertices() == vec![v(&[1, 0, 0]), v(&[1, 2, 0])])
        .expect("face");
    let mut cells = k.to_cells();
    let basis = IntMatrix::from_i64_rows(&[vec![1, 1], vec![0, 2], vec![0, 0]]);
    let cone = Cone::new(basis.clone(), vec![v(&[1, 0]), v(&[0, 1])]).expect("face cone");
    let mut faces = BTreeMap::new();
    for f in cells[&tau].faces.keys() {
        let m = match k
            .cone(*f)
            .ambient_vertices()
            .first()
            .map(|x| x.to_i64s().expect("small"))
        {
            None => IntMatrix::zeros(2, 0),
            Some(x) if x == vec![1, 0, 0] => IntMatrix::from_i64_rows(&[vec![1], vec![0]]),
            Some(_) => IntMatrix::from_i64_rows(&[vec![0], vec![1]]),
        };
        faces.insert(*f, m);
    }
    cells.insert(tau, Cell { cone, faces });
    cells.get_mut(&top).expect("top").faces.insert(tau, basis);
    ConicalComplex::from_cells(cells)
}

/// Three linearly independent vectors with entries in `[0, max_entry]`.
pub fn random_simplicial_generators<R: Rng>(
    rng: &mut R,
    dim: usize,
    max_entry: i64,
) -> Vec<IntVector> {
    loop {
        let gens: Vec<IntVector> = (0..dim)
            .map(|_| {
                IntVector::new(
                    (0..dim)
                        .map(|_| rng.gen_range(0..=max_entry).into())
                        .collect(),
                )
            })
            .collect();
        if IntMatrix::from_columns(&gens, dim).rank() == dim {
            return gens;
        }
    }
}

/// `count` random full-dimensional simplicial cones, reproducible from `seed`.
pub fn random_simplicial_cones(
    count: usize,
    dim: usize,
    max_entry: i64,
    seed: u64,
) -> Vec<ConicalComplex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| standard_fan(&[random_simplicial_generators(&mut rng, dim, max_entry)]))
        .collect()
}

/// The complexes that must resolve to regular output, with names.
pub fn corpus() -> Vec<(String, ConicalComplex)> {
    let mut out: Vec<(String, ConicalComplex)> = (2..=10)
        .map(|n| (format!("an_cone_{n}"), an_cone(n)))
        .collect();
    out.extend(
        quotient_parameters(7)
            .into_iter()
            .map(|(r, a)| (format!("quotient_{r}_{a}"), quotient_cone(r, a))),
    );
    out.push(("abramovich".into(), abramovich()));
    out.extend(
        random_simplicial_cones(100, 3, 5, 7)
            .into_iter()
            .enumerate()
            .map(|(i, k)| (format!("random_{i}"), k)),
    );
    out
}

/// A source complex, its image, and the map between them.
#[derive(Clone, Debug)]
pub struct MapFixture {
    pub source: ConicalComplex,
    pub target: ConicalComplex,
    pub map: ComplexMap,
}

fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    for _ in 0..6 {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            continue;
        }
        let c: i64 = rng.gen_range(-2..=2);
        for col in 0..n {
            let x = u.get(i, col) + u.get(j, col) * c;
            u.set(i, col, x);
        }
    }
    if rng.gen_bool(0.5) {
        for col in 0..n {
            let x = -u.get(0, col);
            u.set(0, col, x);
        }
    }
    u
}

/// Rebuilds a fan (in the standard lattice) after an ambient unimodular change of coordinates.
fn conjugate(k: &ConicalComplex, u: &IntMatrix) -> MapFixture {
    let n = u.rows();
    let cones: Vec<Vec<IntVector>> = k
        .maximal_cells()
        .iter()
        .map(|&s| {
            k.cone(s)
                .ambient_vertices()
                .iter()
                .map(|x| u.mul_vec(x))
                .collect()
        })
        .collect();
    let target =
        ConicalComplex::from_fan(&IntMatrix::identity(n), &cones).expect("unimodular image");
    let map = ComplexMap::from_ambient_map(k, &target, u).expect("cells correspond");
    MapFixture {
        source: k.clone(),
        target,
        map,
    }
}

/// Random unimodular relabelings of corpus cones and small fans.
pub fn unimodular_conjugations(count: usize, seed: u64) -> Vec<MapFixture> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let two_cone = standard_fan(&[vec![v(&[1, 0]), v(&[1, 5])], vec![v(&[1, 0]), v(&[2, -3])]]);
    (0..count)
        .map(|i| {
            let base = match i % 3 {
                0 => two_cone.clone(),
                1 => an_cone(rng.gen_range(2..=10)),
                _ => standard_fan(&[random_simplicial_generators(&mut rng, 3, 5)]),
            };
            let u = random_unimodular(&mut rng, base.cone(base.maximal_cells()[0]).ambient_dim());
            conjugate(&base, &u)
        })
        .collect()
}

/// `σ × ⟨e⟩ → σ` by forgetting the last coordinate.
pub fn product_projection(gens: &[IntVector]) -> MapFixture {
    let n = gens[0].dim();
    let lifted: Vec<IntVector> = gens
        .iter()
        .map(|g| g.concat(&IntVector::zeros(1)))
        .chain([IntVector::unit(n + 1, n)])
        .collect();
    let source = standard_fan(&[lifted]);
    let target = standard_fan(&[gens.to_vec()]);
    let mut rows = vec![vec![0i64; n + 1]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = 1;
    }
    let p = IntMatrix::from_i64_rows(&rows);
    let map = ComplexMap::from_ambient_map(&source, &target, &p).expect("faces project onto faces");
    MapFixture {
        source,
        target,
        map,
    }
}

/// Products of random planar and spatial cones with a regular ray.
pub fn product_projections(count: usize, seed: u64) -> Vec<MapFixture> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let dim = if i % 2 == 0 { 2 } else { 3 };
            product_projection(&random_simplicial_generators(&mut rng, dim, 5))
        })
        .collect()
}

/// A single ray as Ω, ordered trivially.
pub fn with_omega_ray(k: ConicalComplex, dir: &[i64]) -> RelativeComplex {
    let r = ray_with(&k, dir);
    RelativeComplex::new(
        k,
        [r].into_iter().collect(),
        &Marking::from_ranks([(r, 0)].into_iter().collect()),
    )
    .expect("a ray is a valid Ω")
}

/// Relative complexes with nontrivial Ω.
pub fn relative_corpus() -> Vec<(String, RelativeComplex)> {
    let mut out = vec![("obstruction".to_string(), obstruction())];
    out.extend((2..=10).map(|n| {
        (
            format!("an_cone_{n}_omega"),
            with_omega_ray(an_cone(n), &[1, 0]),
        )
    }));
    out.extend(quotient_parameters(7).into_iter().map(|(r, a)| {
        (
            format!("quotient_{r}_{a}_omega"),
            with_omega_ray(quotient_cone(r, a), &[r, 0]),
        )
    }));
    out
}

/// Ω = the zero cells only; used to compare with absolute resolution.
pub fn trivial_relative(k: &ConicalComplex) -> RelativeComplex {
    RelativeComplex::trivial(k.clone())
}

/// Cells of a complex whose cone is regular.
pub fn regular_cells(k: &ConicalComplex) -> BTreeSet<CellId> {
    k.ids().filter(|&id| k.cone(id).is_regular()).collect()
}

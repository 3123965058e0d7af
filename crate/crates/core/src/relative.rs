//! Resolution relative to a subcomplex Ω that must be left untouched.
//!
//! Cells of Ω are simplicial and carry a total vertex order. A pair (σ, ω)
//! pairs a cell with its largest face in Ω; all relative notions only look
//! at the part of σ that sticks out of Ω.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::complex::{CellId, ConicalComplex};
use crate::exactlin::{saturation_index, IntMatrix, IntVector};
use crate::marking::Marking;
use crate::resolve::{
    det_polynomial, Engine, Invariant, MuPolynomial, Policy, Resolution, ResolveError,
    ResolveOptions,
};

/// A conical complex with a marked subcomplex Ω and a total order on Ω's rays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeComplex {
    pub complex: ConicalComplex,
    omega: BTreeSet<CellId>,
    order: Marking,
}

/// Everything the relative algorithm needs to know about one cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairStatus {
    /// σ ∩ |Ω| is a single face of σ.
    pub balanced: bool,
    /// The largest face of σ lying in Ω (the zero cell when none).
    pub omega_face: CellId,
    pub simplicial_pair: bool,
    /// The relative singular face lies in Ω.
    pub regular_pair: bool,
    /// Smallest face holding the singular part of σ and its Ω-rays.
    pub sing_omega_face: CellId,
    /// `(dim ω, det(σ, ω))` for simplicial pairs.
    pub mu: Option<(usize, BigInt)>,
}

impl RelativeComplex {
    /// Checks that Ω is a subcomplex of simplicial cells and that `order`
    /// ranks the rays of every cell of Ω distinctly. Zero cells are added to Ω.
    pub fn new(
        complex: ConicalComplex,
        omega: BTreeSet<CellId>,
        order: &Marking,
    ) -> Result<RelativeComplex, ResolveError> {
        let mut omega = omega;
        for id in &omega {
            complex.cell(*id)?;
        }
        omega.extend(complex.cells_of_dim(0));
        complex.subcomplex(&omega)?;
        for &id in &omega {
            if !complex.cone(id).is_simplicial() {
                return Err(ResolveError::NonSimplicialOmega(id));
            }
        }
        let ranks: BTreeMap<CellId, u64> = order
            .ranks()
            .iter()
            .filter(|(r, _)| omega.contains(r))
            .map(|(r, q)| (*r, *q))
            .collect();
        for &id in &omega {
            let rays = complex.vertex_rays(id);
            let got: BTreeSet<u64> = rays.iter().filter_map(|r| ranks.get(r).copied()).collect();
            if got.len() != rays.len() {
                return Err(ResolveError::OrderNotTotal(id));
            }
        }
        Ok(RelativeComplex {
            complex,
            omega,
            order: Marking::from_ranks(ranks),
        })
    }

    /// Ω consisting of the zero cells only.
    pub fn trivial(complex: ConicalComplex) -> RelativeComplex {
        let omega = complex.cells_of_dim(0).into_iter().collect();
        RelativeComplex {
            complex,
            omega,
            order: Marking::new(),
        }
    }

    pub fn omega(&self) -> &BTreeSet<CellId> {
        &self.omega
    }

    pub fn order(&self) -> &Marking {
        &self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.omega
            .iter()
            .all(|&id| self.complex.cone(id).dim() == 0)
    }

    /// Every cell of Ω is a saturated face of the cells containing it.
    /// Reported only; the algorithm does not need it.
    pub fn is_saturated(&self) -> bool {
        self.omega.iter().all(|&w| {
            let faces = &self.complex.cells()[&w].faces;
            faces.keys().all(|f| self.omega.contains(f))
                && self.complex.cofaces(w).iter().all(|&s| {
                    let inc = self.complex.inclusion(w, s).expect("coface");
                    saturation_index(&inc.columns(), inc.rows()).is_one()
                })
        })
    }

    pub fn pair_status(&self, sigma: CellId) -> PairStatus {
        pair_status(&self.complex, &self.omega, sigma)
    }

    pub fn relative_minimal_vectors(&self, sigma: CellId) -> Result<Vec<IntVector>, ResolveError> {
        relative_minimal_vectors(&self.complex, &self.omega, sigma)
    }

    pub fn pair_small_vectors(&self, sigma: CellId) -> Result<Vec<IntVector>, ResolveError> {
        pair_small_vectors(&self.complex, &self.omega, sigma)
    }

    pub fn relative_barycenter(&self, sigma: CellId) -> Result<IntVector, ResolveError> {
        relative_barycenter(&self.complex, &self.omega, sigma)
    }

    pub fn mu_polynomial(&self) -> Result<MuPolynomial, ResolveError> {
        mu_polynomial(&self.complex, &self.omega)
    }
}

/// Vertex indices of σ whose rays lie in Ω.
fn omega_vertex_ids(k: &ConicalComplex, omega: &BTreeSet<CellId>, sigma: CellId) -> Vec<usize> {
    k.vertex_rays(sigma)
        .iter()
        .enumerate()
        .filter(|(_, r)| omega.contains(r))
        .map(|(i, _)| i)
        .collect()
}

fn omega_faces(k: &ConicalComplex, omega: &BTreeSet<CellId>, sigma: CellId) -> Vec<CellId> {
    let mut out: Vec<CellId> = k.cells()[&sigma]
        .faces
        .keys()
        .copied()
        .filter(|f| omega.contains(f))
        .collect();
    if omega.contains(&sigma) {
        out.push(sigma);
    }
    out
}

pub(crate) fn pair_status(
    k: &ConicalComplex,
    omega: &BTreeSet<CellId>,
    sigma: CellId,
) -> PairStatus {
    let cone = k.cone(sigma);
    let faces = omega_faces(k, omega, sigma);
    let maximal: Vec<CellId> = faces
        .iter()
        .copied()
        .filter(|&f| !faces.iter().any(|&g| g != f && k.is_face(f, g)))
        .collect();
    let balanced = maximal.len() == 1;
    let omega_face = *maximal
        .iter()
        .max_by_key(|&&f| k.cone(f).dim())
        .expect("zero cell lies in omega");

    let mut want: BTreeSet<usize> = cone.sing_reg_split().sing_vertex_ids.into_iter().collect();
    want.extend(omega_vertex_ids(k, omega, sigma));
    let sing_ids = cone
        .faces()
        .into_iter()
        .filter(|f| want.iter().all(|i| f.contains(i)))
        .min_by_key(|f| f.len())
        .expect("σ itself qualifies");
    let sing_omega_face = k.face_with_vertices(sigma, &sing_ids).expect("face exists");

    let simplicial_pair = balanced && cone.is_simplicial();
    let mu = simplicial_pair.then(|| (k.cone(omega_face).dim(), det_pair(k, sigma, omega_face)));
    PairStatus {
        balanced,
        omega_face,
        simplicial_pair,
        regular_pair: omega.contains(&sing_omega_face),
        sing_omega_face,
        mu,
    }
}

/// `|det|` of the vertices of σ outside ω together with a basis of ω's lattice.
fn det_pair(k: &ConicalComplex, sigma: CellId, omega_face: CellId) -> BigInt {
    let cone = k.cone(sigma);
    let inside = k.face_index_set(omega_face, sigma).unwrap_or_default();
    let mut cols: Vec<IntVector> = (0..cone.vertices().len())
        .filter(|i| !inside.contains(i))
        .map(|i| cone.vertices()[i].clone())
        .collect();
    if let Some(inc) = k.inclusion(omega_face, sigma) {
        cols.extend(inc.columns());
    }
    IntMatrix::from_columns(&cols, cone.dim())
        .determinant()
        .abs()
}

/// The vertex indices of σ that lie in its Ω-face.
fn omega_face_ids(
    k: &ConicalComplex,
    omega: &BTreeSet<CellId>,
    sigma: CellId,
) -> Result<Vec<usize>, ResolveError> {
    let st = pair_status(k, omega, sigma);
    if !st.balanced {
        return Err(ResolveError::NotBalanced(sigma));
    }
    if !st.simplicial_pair {
        return Err(ResolveError::NotSimplicialPair(sigma));
    }
    Ok(k.face_index_set(st.omega_face, sigma).unwrap_or_default())
}

/// Minimal vectors of σ with a nonzero coefficient outside ω.
pub(crate) fn relative_minimal_vectors(
    k: &ConicalComplex,
    omega: &BTreeSet<CellId>,
    sigma: CellId,
) -> Result<Vec<IntVector>, ResolveError> {
    let inside = omega_face_ids(k, omega, sigma)?;
    let cone = k.cone(sigma);
    let mut out = Vec::new();
    for v in cone.minimal_vectors()? {
        let x = cone.coefficients(&v)?;
        if (0..x.dim()).any(|i| !inside.contains(&i) && !x[i].is_zero()) {
            out.push(v);
        }
    }
    Ok(out)
}

/// Small vectors of σ with a nonzero coefficient outside ω.
pub(crate) fn pair_small_vectors(
    k: &ConicalComplex,
    omega: &BTreeSet<CellId>,
    sigma: CellId,
) -> Result<Vec<IntVector>, ResolveError> {
    let inside = omega_face_ids(k, omega, sigma)?;
    let mut out: Vec<IntVector> = k
        .cone(sigma)
        .parallelepiped()?
        .into_iter()
        .filter(|(_, num)| {
            num.iter()
                .enumerate()
                .any(|(i, r)| !inside.contains(&i) && !r.is_zero())
        })
        .map(|(p, _)| p)
        .collect();
    out.sort();
    Ok(out)
}

/// Primitive part of the Ω-rays of σ plus its minimal internal vectors.
pub(crate) fn relative_barycenter(
    k: &ConicalComplex,
    omega: &BTreeSet<CellId>,
    sigma: CellId,
) -> Result<IntVector, ResolveError> {
    if omega.contains(&sigma) {
        return Err(ResolveError::InOmega(sigma));
    }
    let st = pair_status(k, omega, sigma);
    if st.sing_omega_face != sigma || k.cone(sigma).dim() < 2 {
        return Err(ResolveError::NotRelativelyIrreducible(sigma));
    }
    let cone = k.cone(sigma);
    let mut sum = IntVector::zeros(cone.dim());
    for i in omega_vertex_ids(k, omega, sigma) {
        sum = &sum + &cone.vertices()[i];
    }
    for z in cone.minimal_internal_vectors() {
        sum = &sum + &z;
    }
    Ok(sum.primitive_part())
}

/// Histogram of `(dim ω, det(σ,ω))` over maximal cells that are not regular pairs.
pub(crate) fn mu_polynomial(
    k: &ConicalComplex,
    omega: &BTreeSet<CellId>,
) -> Result<MuPolynomial, ResolveError> {
    let mut out = BTreeMap::new();
    for sigma in k.maximal_cells() {
        let st = pair_status(k, omega, sigma);
        if st.regular_pair {
            continue;
        }
        let mu = st.mu.ok_or(ResolveError::NotSimplicialPair(sigma))?;
        *out.entry(mu).or_insert(0) += 1;
    }
    Ok(MuPolynomial(out))
}

struct Relative {
    omega: BTreeSet<CellId>,
    trivial: bool,
    bound: usize,
}

impl Policy for Relative {
    fn is_target(&self, k: &ConicalComplex, id: CellId) -> bool {
        id.0 < self.bound
            && !self.omega.contains(&id)
            && k.cone(id).dim() >= 2
            && pair_status(k, &self.omega, id).sing_omega_face == id
    }

    fn barycenter(&self, k: &ConicalComplex, id: CellId) -> Result<IntVector, ResolveError> {
        relative_barycenter(k, &self.omega, id)
    }

    fn candidates(
        &self,
        k: &ConicalComplex,
        id: CellId,
    ) -> Result<Option<Vec<IntVector>>, ResolveError> {
        let st = pair_status(k, &self.omega, id);
        if st.regular_pair {
            return Ok(None);
        }
        if !st.balanced {
            return Err(ResolveError::NotBalanced(id));
        }
        if !st.simplicial_pair {
            return Err(ResolveError::NotSimplicialPair(id));
        }
        pair_small_vectors(k, &self.omega, id).map(Some)
    }

    fn invariant(&self, k: &ConicalComplex) -> Invariant {
        if self.trivial {
            Invariant::Pdet(det_polynomial(k).ok())
        } else {
            Invariant::Pmu(mu_polynomial(k, &self.omega).ok())
        }
    }

    fn guard(&self, k: &ConicalComplex) -> u64 {
        let weight = if self.trivial {
            det_polynomial(k).map(|p| p.weight()).unwrap_or_default()
        } else {
            mu_polynomial(k, &self.omega)
                .map(|p| p.weight())
                .unwrap_or_default()
        };
        weight.to_u64().unwrap_or(u64::MAX)
    }
}

/// Output of a relative resolution; Ω keeps its cell ids.
#[derive(Clone, Debug)]
pub struct RelativeResolution {
    pub relative: RelativeComplex,
    pub resolution: Resolution,
}

/// Resolves `rk` without subdividing any cell of Ω.
pub fn resolve_relative(
    rk: &RelativeComplex,
    opts: ResolveOptions,
) -> Result<RelativeResolution, ResolveError> {
    let policy = Relative {
        omega: rk.omega.clone(),
        trivial: rk.is_trivial(),
        bound: rk.complex.next_id(),
    };
    let mut engine = Engine::new(&policy, &rk.complex, rk.order.clone(), opts);
    engine.barycentric_phase()?;
    engine.minimal_phase()?;
    let resolution = engine.state;
    let relative = RelativeComplex {
        complex: resolution.complex.clone(),
        omega: rk.omega.clone(),
        order: rk.order.clone(),
    };
    Ok(RelativeResolution {
        relative,
        resolution,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::ComplexError;
    use crate::resolve::resolve;

    fn v(x: &[i64]) -> IntVector {
        IntVector::from_i64s(x)
    }

    fn fan(gens: &[&[&[i64]]]) -> ConicalComplex {
        let n = gens[0][0].len();
        let cones: Vec<Vec<IntVector>> = gens
            .iter()
            .map(|c| c.iter().map(|g| v(g)).collect())
            .collect();
        ConicalComplex::from_fan(&IntMatrix::identity(n), &cones).unwrap()
    }

    fn ray(k: &ConicalComplex, dir: &[i64]) -> CellId {
        k.rays()
            .into_iter()
            .find(|&r| k.cone(r).ambient_vertices()[0] == v(dir))
            .unwrap()
    }

    fn with_omega(k: ConicalComplex, rays: &[&[i64]]) -> RelativeComplex {
        let ids: Vec<CellId> = rays.iter().map(|d| ray(&k, d)).collect();
        let order = Marking::from_ranks(
            ids.iter()
                .enumerate()
                .map(|(i, &r)| (r, i as u64))
                .collect(),
        );
        RelativeComplex::new(k, ids.into_iter().collect(), &order).unwrap()
    }

    fn top(k: &ConicalComplex) -> CellId {
        k.maximal_cells()[0]
    }

    #[test]
    fn a1_with_omega_ray() {
        let rk = with_omega(fan(&[&[&[1, 0], &[1, 2]]]), &[&[1, 0]]);
        let s = top(&rk.complex);
        let st = rk.pair_status(s);
        assert!(st.balanced && st.simplicial_pair && !st.regular_pair);
        assert_eq!(st.mu, Some((1, BigInt::from(2))));
        let b = rk.relative_barycenter(s).unwrap();
        assert_eq!(rk.complex.cone(s).to_ambient(&b), v(&[2, 1]));
    }

    #[test]
    fn relative_resolution_keeps_omega() {
        let rk = with_omega(fan(&[&[&[1, 0], &[1, 5]]]), &[&[1, 0]]);
        let out = resolve_relative(&rk, ResolveOptions::default()).unwrap();
        let k = &out.relative.complex;
        for &w in rk.omega() {
            assert_eq!(k.cone(w), rk.complex.cone(w));
        }
        assert!(out.relative.mu_polynomial().unwrap().is_zero());
        assert!(k.validate().is_empty());
    }

    #[test]
    fn trivial_omega_matches_absolute() {
        let k = fan(&[&[&[1, 0], &[1, 5]], &[&[1, 0], &[2, -3]]]);
        let rel = resolve_relative(
            &RelativeComplex::trivial(k.clone()),
            ResolveOptions::default(),
        )
        .unwrap();
        let abs = resolve(&k, ResolveOptions::default()).unwrap();
        assert_eq!(rel.resolution.trace, abs.trace);
        assert_eq!(rel.relative.complex, abs.complex);
    }

    #[test]
    fn obstruction_barycenter() {
        let lattice = IntMatrix::from_i64_rows(&[vec![1, 1, 1], vec![1, -1, 0], vec![0, 0, 1]]);
        let k = ConicalComplex::from_fan(
            &lattice,
            &[vec![v(&[2, 0, 0]), v(&[0, 2, 0]), v(&[0, 0, 2])]],
        )
        .unwrap();
        let (a, b) = (ray(&k, &[2, 0, 0]), ray(&k, &[0, 2, 0]));
        let face = k
            .cells_of_dim(2)
            .into_iter()
            .find(|&f| k.is_face(a, f) && k.is_face(b, f))
            .unwrap();
        let order = Marking::from_ranks([(a, 0), (b, 1)].into_iter().collect());
        let rk = RelativeComplex::new(k, [a, b, face].into_iter().collect(), &order).unwrap();
        let s = top(&rk.complex);
        let st = rk.pair_status(s);
        assert_eq!(st.omega_face, face);
        assert!(!st.regular_pair);
        assert_eq!(
            rk.complex
                .cone(s)
                .to_ambient(&rk.relative_barycenter(s).unwrap()),
            v(&[3, 3, 2])
        );
    }

    #[test]
    fn rejects_bad_omega() {
        let k = fan(&[&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, -1]]]);
        let s = top(&k);
        let r = RelativeComplex::new(k.clone(), [s].into_iter().collect(), &Marking::new());
        assert!(matches!(
            r.unwrap_err(),
            ResolveError::Complex(ComplexError::NotFaceClosed(_))
        ));
        let q = fan(&[&[&[1, 0], &[0, 1]]]);
        let a = ray(&q, &[1, 0]);
        let r = RelativeComplex::new(q, [a].into_iter().collect(), &Marking::new());
        assert_eq!(r.unwrap_err(), ResolveError::OrderNotTotal(a));
    }
}

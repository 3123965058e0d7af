//! Strictly convex rational cones in their own lattices.
//!
//! A cone stores its lattice `N_σ` as a basis matrix (columns in ambient
//! coordinates) and everything else in coordinates of that basis. Cones are
//! always full-dimensional in their lattice; faces get their own saturated
//! lattice together with the inclusion matrix into the parent.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactlin::{
    adjugate, hnf, integer_kernel, saturated_basis, solve_integral, solve_rational, IntMatrix,
    IntVector, LinError, RatVector,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConeError {
    #[error("cone is not strictly convex")]
    NotStrictlyConvex,
    #[error("generators do not span the cone lattice")]
    NotFullDimensional,
    #[error("cone is not simplicial")]
    NotSimplicial,
    #[error("lattice basis is degenerate")]
    DegenerateBasis,
    #[error("cone has no interior lattice points")]
    EmptyInterior,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Lin(#[from] LinError),
}

/// A strictly convex cone, full-dimensional in its lattice.
#[derive(Clone, PartialEq, Eq)]
pub struct Cone {
    basis: IntMatrix,
    vertices: Vec<IntVector>,
    normals: Vec<IntVector>,
    facet_sets: Vec<Vec<usize>>,
    det: Option<BigInt>,
}

/// Vertex partition `σ = sing(σ) × reg(σ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingRegSplit {
    pub sing_vertex_ids: Vec<usize>,
    pub reg_vertex_ids: Vec<usize>,
}

impl std::fmt::Debug for Cone {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Cone")
            .field("dim", &self.dim())
            .field("vertices", &self.ambient_vertices())
            .finish()
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Inward primitive facet normals of the full-dimensional cone spanned by `gens`.
fn facet_normals(gens: &[IntVector], d: usize) -> Result<Vec<IntVector>, ConeError> {
    match d {
        0 => return Ok(Vec::new()),
        1 => {
            let pos = gens.iter().any(|g| g[0].is_positive());
            let neg = gens.iter().any(|g| g[0].is_negative());
            return match (pos, neg) {
                (true, false) => Ok(vec![IntVector::from_i64s(&[1])]),
                (false, true) => Ok(vec![IntVector::from_i64s(&[-1])]),
                _ => Err(ConeError::NotStrictlyConvex),
            };
        }
        _ => {}
    }
    let mut normals = BTreeSet::new();
    if gens.len() == d {
        let (adj, det) = adjugate(&IntMatrix::from_columns(gens, d));
        if det.is_zero() {
            return Err(ConeError::NotFullDimensional);
        }
        // Row i of adj pairs to det on gen i and to 0 on the others.
        for i in 0..d {
            let row = adj.row(i);
            let n = if det.is_negative() { -&row } else { row };
            normals.insert(n.primitive_part());
        }
        return Ok(normals.into_iter().collect());
    }
    for subset in combinations(gens.len(), d - 1) {
        let rows: Vec<IntVector> = subset.iter().map(|&i| gens[i].clone()).collect();
        let kernel = integer_kernel(&IntMatrix::from_rows(&rows, d));
        if kernel.len() != 1 {
            continue;
        }
        let n = kernel[0].primitive_part();
        let values: Vec<BigInt> = gens.iter().map(|g| n.dot(g)).collect();
        if values.iter().all(|x| !x.is_negative()) {
            normals.insert(n);
        } else if values.iter().all(|x| !x.is_positive()) {
            normals.insert(-&n);
        }
    }
    let normals: Vec<IntVector> = normals.into_iter().collect();
    if IntMatrix::from_rows(&normals, d).rank() < d {
        return Err(ConeError::NotStrictlyConvex);
    }
    Ok(normals)
}

impl Cone {
    /// Builds the cone spanned by `generators`, given in coordinates of the
    /// lattice whose basis vectors are the columns of `basis`.
    pub fn new(basis: IntMatrix, generators: Vec<IntVector>) -> Result<Cone, ConeError> {
        let d = basis.cols();
        if basis.rank() != d {
            return Err(ConeError::DegenerateBasis);
        }
        for g in &generators {
            if g.dim() != d {
                return Err(ConeError::DimensionMismatch {
                    expected: d,
                    found: g.dim(),
                });
            }
        }
        let gens: Vec<IntVector> = generators
            .iter()
            .filter(|g| !g.is_zero())
            .map(IntVector::primitive_part)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if IntMatrix::from_rows(&gens, d).rank() != d {
            return Err(ConeError::NotFullDimensional);
        }
        let normals = facet_normals(&gens, d)?;
        let mut vertices: Vec<IntVector> = if gens.len() == d {
            gens
        } else {
            gens.into_iter()
                .filter(|g| {
                    let tight: Vec<IntVector> = normals
                        .iter()
                        .filter(|n| n.dot(g).is_zero())
                        .cloned()
                        .collect();
                    IntMatrix::from_rows(&tight, d).rank() == d - 1
                })
                .collect()
        };
        vertices.sort_by_cached_key(|v| basis.mul_vec(v));
        let facet_sets = normals
            .iter()
            .map(|n| {
                (0..vertices.len())
                    .filter(|&i| n.dot(&vertices[i]).is_zero())
                    .collect()
            })
            .collect();
        let det = (vertices.len() == d)
            .then(|| IntMatrix::from_columns(&vertices, d).determinant().abs());
        Ok(Cone {
            basis,
            vertices,
            normals,
            facet_sets,
            det,
        })
    }

    /// Builds a cone from ambient direction vectors. Each direction must lie in
    /// the rational span of the lattice; it is scaled onto the lattice.
    pub fn from_ambient(basis: IntMatrix, directions: &[IntVector]) -> Result<Cone, ConeError> {
        let gens = directions
            .iter()
            .enumerate()
            .map(|(i, g)| {
                solve_rational(&basis, g)
                    .map(|x| x.clear_denominators().1)
                    .ok_or(LinError::SpanViolation { index: i })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Cone::new(basis, gens)
    }

    /// The zero cone in an ambient space of the given dimension.
    pub fn zero(ambient_dim: usize) -> Cone {
        Cone::new(IntMatrix::zeros(ambient_dim, 0), Vec::new()).expect("zero cone")
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn lattice_basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// Vertices in lattice coordinates, ordered lexicographically by their
    /// ambient images.
    pub fn vertices(&self) -> &[IntVector] {
        &self.vertices
    }

    pub fn ambient_vertices(&self) -> Vec<IntVector> {
        self.vertices.iter().map(|v| self.to_ambient(v)).collect()
    }

    pub fn to_ambient(&self, v: &IntVector) -> IntVector {
        self.basis.mul_vec(v)
    }

    /// Lattice coordinates of an ambient vector, when it is a lattice point.
    pub fn from_ambient_point(&self, v: &IntVector) -> Option<IntVector> {
        solve_integral(&self.basis, v).filter(|x| &self.basis.mul_vec(x) == v)
    }

    /// Inward primitive facet normals in dual lattice coordinates.
    pub fn facet_normals(&self) -> &[IntVector] {
        &self.normals
    }

    pub fn is_simplicial(&self) -> bool {
        self.det.is_some()
    }

    /// `[N_σ : N_{Vert(σ)}]` for a simplicial cone.
    pub fn det(&self) -> Result<BigInt, ConeError> {
        self.det.clone().ok_or(ConeError::NotSimplicial)
    }

    pub fn is_regular(&self) -> bool {
        self.det.as_ref().is_some_and(One::is_one)
    }

    pub fn contains(&self, v: &IntVector) -> bool {
        if self.dim() == 0 {
            return v.is_zero();
        }
        self.normals.iter().all(|n| !n.dot(v).is_negative())
    }

    pub fn contains_rat(&self, v: &RatVector) -> bool {
        if self.dim() == 0 {
            return v.entries().iter().all(Zero::is_zero);
        }
        self.normals.iter().all(|n| !v.dot_int(n).is_negative())
    }

    pub fn in_relative_interior(&self, v: &IntVector) -> bool {
        if self.dim() == 0 {
            return v.is_zero();
        }
        self.normals.iter().all(|n| n.dot(v).is_positive())
    }

    /// Barycentric coordinates of `v` with respect to the vertices.
    pub fn coefficients(&self, v: &IntVector) -> Result<RatVector, ConeError> {
        if !self.is_simplicial() {
            return Err(ConeError::NotSimplicial);
        }
        let m = IntMatrix::from_columns(&self.vertices, self.dim());
        Ok(solve_rational(&m, v).expect("simplicial cone spans its lattice"))
    }

    /// All faces as sorted vertex index sets, including the zero face and the
    /// cone itself, ordered by dimension and then by index set.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let full: Vec<usize> = (0..self.vertices.len()).collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut stack = vec![full];
        while let Some(f) = stack.pop() {
            if !seen.insert(f.clone()) {
                continue;
            }
            for s in &self.facet_sets {
                let g: Vec<usize> = f.iter().copied().filter(|i| s.contains(i)).collect();
                if !seen.contains(&g) {
                    stack.push(g);
                }
            }
        }
        let mut faces: Vec<Vec<usize>> = seen.into_iter().collect();
        faces.sort_by_key(|f| (self.face_dim(f), f.clone()));
        faces
    }

    pub fn face_dim(&self, face: &[usize]) -> usize {
        let rows: Vec<IntVector> = face.iter().map(|&i| self.vertices[i].clone()).collect();
        IntMatrix::from_rows(&rows, self.dim()).rank()
    }

    /// The smallest face containing `v`, as a vertex index set.
    pub fn carrier_face(&self, v: &IntVector) -> Vec<usize> {
        let tight: Vec<usize> = (0..self.normals.len())
            .filter(|&i| self.normals[i].dot(v).is_zero())
            .collect();
        (0..self.vertices.len())
            .filter(|&j| tight.iter().all(|&i| self.facet_sets[i].contains(&j)))
            .collect()
    }

    /// The face spanned by the given vertices, with its saturated lattice and
    /// the inclusion matrix (`dim σ × dim τ`) into this cone's lattice.
    pub fn face_cone(&self, face: &[usize]) -> (Cone, IntMatrix) {
        let d = self.dim();
        let verts: Vec<IntVector> = face.iter().map(|&i| self.vertices[i].clone()).collect();
        let sat = saturated_basis(&verts, d);
        let inclusion = IntMatrix::from_columns(&sat, d);
        let coords = verts
            .iter()
            .map(|v| solve_integral(&inclusion, v).expect("face vertex lies in face lattice"))
            .collect();
        let cone = Cone::new(self.basis.mul(&inclusion), coords).expect("faces of cones are cones");
        (cone, inclusion)
    }

    /// Decomposition into the maximal irreducible face and a regular factor.
    ///
    /// A vertex `r` splits off when the remaining vertices span a hyperplane
    /// whose primitive normal takes the value 1 on `r`; then `N_σ` is the
    /// direct sum of `ℤ·r` and the lattice of the opposite facet.
    pub fn sing_reg_split(&self) -> SingRegSplit {
        let d = self.dim();
        let mut sing = Vec::new();
        let mut reg = Vec::new();
        for r in 0..self.vertices.len() {
            let rest: Vec<IntVector> = (0..self.vertices.len())
                .filter(|&j| j != r)
                .map(|j| self.vertices[j].clone())
                .collect();
            let splits = IntMatrix::from_rows(&rest, d).rank() == d - 1 && {
                let kernel = integer_kernel(&IntMatrix::from_rows(&rest, d));
                kernel.len() == 1
                    && kernel[0]
                        .primitive_part()
                        .dot(&self.vertices[r])
                        .abs()
                        .is_one()
            };
            if splits {
                reg.push(r);
            } else {
                sing.push(r);
            }
        }
        SingRegSplit {
            sing_vertex_ids: sing,
            reg_vertex_ids: reg,
        }
    }

    /// Irreducible (no regular factor) and of dimension at least 2, hence singular.
    pub fn is_irreducible_singular(&self) -> bool {
        self.dim() >= 2 && self.sing_reg_split().reg_vertex_ids.is_empty()
    }

    /// Lattice points `∑ a_i v_i` with `0 ≤ a_i < 1`, including 0, together
    /// with the coefficient numerators over `det`.
    pub fn parallelepiped(&self) -> Result<Vec<(IntVector, Vec<BigInt>)>, ConeError> {
        let det = self.det()?;
        let d = self.dim();
        let v = IntMatrix::from_columns(&self.vertices, d);
        let (adj, signed_det) = adjugate(&v);
        let sign = if signed_det.is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        let (h, _) = hnf(&v.transpose());
        let pivots: Vec<BigInt> = (0..d).map(|i| h.get(i, i).clone()).collect();
        let mut out = Vec::new();
        let mut x = vec![BigInt::zero(); d];
        loop {
            let xv = IntVector::new(x.clone());
            let num: Vec<BigInt> = adj
                .mul_vec(&xv)
                .entries()
                .iter()
                .map(|a| (a * &sign).mod_floor(&det))
                .collect();
            let point = v.mul_vec(&IntVector::new(num.clone()));
            let point = IntVector::new(point.entries().iter().map(|c| c / &det).collect());
            out.push((point, num));
            // odometer over the box of HNF pivots
            let mut i = 0;
            loop {
                if i == d {
                    out.sort_by_cached_key(|(p, _)| self.to_ambient(p));
                    return Ok(out);
                }
                x[i] += 1;
                if x[i] < pivots[i] {
                    break;
                }
                x[i] = BigInt::zero();
                i += 1;
            }
        }
    }

    /// Nonzero lattice points of the half-open fundamental parallelepiped.
    pub fn small_vectors(&self) -> Result<Vec<IntVector>, ConeError> {
        Ok(self
            .parallelepiped()?
            .into_iter()
            .map(|(p, _)| p)
            .filter(|p| !p.is_zero())
            .collect())
    }

    /// Small vectors that are not a sum of two nonzero lattice points of the
    /// cone. Any such summands are themselves small, so a pairwise check over
    /// the small set is exhaustive.
    pub fn minimal_vectors(&self) -> Result<Vec<IntVector>, ConeError> {
        let small = self.small_vectors()?;
        let set: HashSet<&IntVector> = small.iter().collect();
        Ok(small
            .iter()
            .filter(|v| !small.iter().any(|x| x != *v && set.contains(&(*v - x))))
            .cloned()
            .collect())
    }

    fn height(&self, v: &IntVector) -> BigInt {
        self.normals.iter().map(|n| n.dot(v)).sum()
    }

    /// Interior lattice points admitting no decomposition `x + y` into nonzero
    /// lattice points of the cone with `x` interior.
    ///
    /// Every such point has all coefficients at most 1 over the simplex of a
    /// vertex triangulation carrying it, otherwise subtracting a vertex leaves
    /// an interior point. For simplicial cones the candidates are the
    /// parallelepiped points with zero coefficients raised to 1; otherwise the
    /// bounding box of the vertex zonotope is scanned.
    pub fn minimal_internal_vectors(&self) -> Vec<IntVector> {
        if self.dim() == 0 {
            return Vec::new();
        }
        let mut candidates: Vec<IntVector> = match self.parallelepiped() {
            Ok(points) => points
                .into_iter()
                .map(|(p, num)| {
                    num.iter()
                        .enumerate()
                        .filter(|(_, a)| a.is_zero())
                        .fold(p, |acc, (i, _)| &acc + &self.vertices[i])
                })
                .collect(),
            Err(_) => self
                .zonotope_box_points()
                .into_iter()
                .filter(|p| self.in_relative_interior(p))
                .collect(),
        };
        candidates.sort_by_cached_key(|c| (self.height(c), self.to_ambient(c)));
        let mut minimal: Vec<IntVector> = Vec::new();
        for c in candidates {
            if !minimal.iter().any(|m| self.contains(&(&c - m))) {
                minimal.push(c);
            }
        }
        minimal.sort_by_cached_key(|m| self.to_ambient(m));
        minimal
    }

    fn zonotope_box_points(&self) -> Vec<IntVector> {
        let d = self.dim();
        let mut lo = vec![BigInt::zero(); d];
        let mut hi = vec![BigInt::zero(); d];
        for v in &self.vertices {
            for j in 0..d {
                if v[j].is_negative() {
                    lo[j] += &v[j];
                } else {
                    hi[j] += &v[j];
                }
            }
        }
        let mut out = Vec::new();
        let mut x = lo.clone();
        loop {
            out.push(IntVector::new(x.clone()));
            let mut i = 0;
            loop {
                if i == d {
                    return out;
                }
                x[i] += 1;
                if x[i] <= hi[i] {
                    break;
                }
                x[i] = lo[i].clone();
                i += 1;
            }
        }
    }

    /// Primitive vector on the ray through the sum of the minimal internal
    /// vectors.
    pub fn canonical_barycenter(&self) -> Result<IntVector, ConeError> {
        let internal = self.minimal_internal_vectors();
        if internal.is_empty() {
            return Err(ConeError::EmptyInterior);
        }
        let sum = internal
            .iter()
            .skip(1)
            .fold(internal[0].clone(), |acc, v| &acc + v);
        Ok(sum.primitive_part())
    }

    /// Image of this cone under a unimodular ambient change of coordinates.
    pub fn transform(&self, u: &IntMatrix) -> Cone {
        Cone::new(u.mul(&self.basis), self.vertices.clone()).expect("unimodular image of a cone")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> IntVector {
        IntVector::from_i64s(x)
    }

    fn std_cone(gens: &[&[i64]]) -> Cone {
        let d = gens[0].len();
        Cone::new(IntMatrix::identity(d), gens.iter().map(|g| v(g)).collect()).unwrap()
    }

    fn abramovich() -> Cone {
        let basis = IntMatrix::from_i64_rows(&[vec![1, 1, 1], vec![1, -1, 0], vec![0, 0, 1]]);
        let gens: Vec<IntVector> = [
            [1, 1, 0],
            [1, 0, 1],
            [0, 1, 1],
            [2, 0, 0],
            [0, 2, 0],
            [0, 0, 2],
        ]
        .iter()
        .map(|g| v(g))
        .collect();
        Cone::from_ambient(basis, &gens).unwrap()
    }

    fn ambient(c: &Cone, vs: Vec<IntVector>) -> Vec<IntVector> {
        vs.iter().map(|x| c.to_ambient(x)).collect()
    }

    #[test]
    fn vertices_drop_redundant_generators() {
        let c = std_cone(&[&[1, 0], &[1, 1], &[0, 1]]);
        assert_eq!(c.vertices(), &[v(&[0, 1]), v(&[1, 0])]);
        let a = abramovich();
        assert_eq!(
            a.ambient_vertices(),
            vec![v(&[0, 0, 2]), v(&[0, 2, 0]), v(&[2, 0, 0])]
        );
        assert!(Cone::zero(3).vertices().is_empty());
    }

    #[test]
    fn non_convex_rejected() {
        let r = Cone::new(IntMatrix::identity(1), vec![v(&[1]), v(&[-2])]);
        assert_eq!(r.unwrap_err(), ConeError::NotStrictlyConvex);
        let half = Cone::new(
            IntMatrix::identity(2),
            vec![v(&[1, 0]), v(&[-1, 0]), v(&[0, 1])],
        );
        assert_eq!(half.unwrap_err(), ConeError::NotStrictlyConvex);
    }

    #[test]
    fn face_counts() {
        assert_eq!(std_cone(&[&[1, 0], &[0, 1]]).faces().len(), 4);
        assert_eq!(abramovich().faces().len(), 8);
        let ray = Cone::from_ambient(IntMatrix::from_i64_rows(&[vec![1], vec![2]]), &[v(&[1, 2])])
            .unwrap();
        assert_eq!(ray.faces().len(), 2);
        let square = std_cone(&[&[1, 0, 1], &[0, 1, 1], &[-1, 0, 1], &[0, -1, 1]]);
        assert_eq!(square.faces().len(), 10);
    }

    #[test]
    fn determinants_and_regularity() {
        assert!(std_cone(&[&[1, 0], &[1, 1]]).is_regular());
        assert!(!std_cone(&[&[1, 0], &[1, 2]]).is_regular());
        assert_eq!(
            std_cone(&[&[1, 0], &[1, 3]]).det().unwrap(),
            BigInt::from(3)
        );
        assert_eq!(abramovich().det().unwrap(), BigInt::from(4));
        assert!(!abramovich().is_regular());
    }

    #[test]
    fn sing_reg_examples() {
        let c = std_cone(&[&[1, 0, 0], &[1, 2, 0], &[0, 0, 1]]);
        let s = c.sing_reg_split();
        assert_eq!(
            ambient(
                &c,
                s.sing_vertex_ids
                    .iter()
                    .map(|&i| c.vertices()[i].clone())
                    .collect()
            ),
            vec![v(&[1, 0, 0]), v(&[1, 2, 0])]
        );
        assert_eq!(s.reg_vertex_ids.len(), 1);
        let r = std_cone(&[&[1, 0], &[1, 1]]).sing_reg_split();
        assert!(r.sing_vertex_ids.is_empty());
        let a = abramovich().sing_reg_split();
        assert_eq!(a.sing_vertex_ids.len(), 3);
        assert!(abramovich().is_irreducible_singular());
    }

    #[test]
    fn small_and_minimal_examples() {
        let a3 = std_cone(&[&[1, 0], &[1, 3]]);
        assert_eq!(a3.small_vectors().unwrap(), vec![v(&[1, 1]), v(&[1, 2])]);
        assert_eq!(a3.minimal_vectors().unwrap(), vec![v(&[1, 1]), v(&[1, 2])]);
        let b = std_cone(&[&[1, 0], &[2, 3]]);
        assert_eq!(b.small_vectors().unwrap(), vec![v(&[1, 1]), v(&[2, 2])]);
        assert_eq!(b.minimal_vectors().unwrap(), vec![v(&[1, 1])]);
        assert!(std_cone(&[&[1, 0], &[0, 1]])
            .small_vectors()
            .unwrap()
            .is_empty());
        let a = abramovich();
        let m = ambient(&a, a.minimal_vectors().unwrap());
        assert_eq!(m, vec![v(&[0, 1, 1]), v(&[1, 0, 1]), v(&[1, 1, 0])]);
    }

    #[test]
    fn minimal_internal_examples() {
        let a3 = std_cone(&[&[1, 0], &[1, 3]]);
        assert_eq!(a3.minimal_internal_vectors(), vec![v(&[1, 1]), v(&[1, 2])]);
        let a = abramovich();
        assert_eq!(
            ambient(&a, a.minimal_internal_vectors()),
            vec![v(&[1, 1, 2]), v(&[1, 2, 1]), v(&[2, 1, 1])]
        );
        assert_eq!(std_cone(&[&[1]]).minimal_internal_vectors(), vec![v(&[1])]);
    }

    #[test]
    fn barycenter_examples() {
        assert_eq!(
            std_cone(&[&[1, 0], &[1, 3]])
                .canonical_barycenter()
                .unwrap(),
            v(&[2, 3])
        );
        assert_eq!(
            std_cone(&[&[1, 0], &[1, 2]])
                .canonical_barycenter()
                .unwrap(),
            v(&[1, 1])
        );
        let a = abramovich();
        assert_eq!(
            a.to_ambient(&a.canonical_barycenter().unwrap()),
            v(&[2, 2, 2])
        );
    }

    #[test]
    fn non_simplicial_internal_vectors() {
        // cone over a unit square: interior points minimal are the
        // center (0,0,1) alone
        let square = std_cone(&[&[1, 0, 1], &[0, 1, 1], &[-1, 0, 1], &[0, -1, 1]]);
        assert!(square.small_vectors().is_err());
        assert_eq!(square.minimal_internal_vectors(), vec![v(&[0, 0, 1])]);
    }
}

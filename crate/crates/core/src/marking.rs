//! Markings: ordered vertex subsets that make center choice canonical.
//!
//! The order on marked vertices is stored as a rank per ray cell. Vertices
//! added in the same batch share a rank; they never share a cone, so the
//! order is still total on every face.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::complex::{CellId, ConicalComplex};
use crate::cone::ConeError;
use crate::exactlin::{solve_rational, IntMatrix, IntVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MarkingError {
    #[error("vector is not in cell {0}")]
    NotInCone(CellId),
    #[error("cell {0} is regular and has no small vectors")]
    NoSmallVectors(CellId),
    #[error("cell {0} has no unique order-minimal small vector")]
    UniquenessViolated(CellId),
    #[error("marking order is not total on cell {0}")]
    OrderNotTotal(CellId),
    #[error("marked vertices of cell {0} are not independent of the unmarked ones")]
    InvariantViolated(CellId),
    #[error(transparent)]
    Cone(#[from] ConeError),
}

/// Outcome of comparing two vectors of a common face.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderOutcome {
    Lt,
    Gt,
    Incomparable,
    EqProj,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Marking {
    ranks: BTreeMap<CellId, u64>,
}

impl Marking {
    pub fn new() -> Marking {
        Marking::default()
    }

    pub fn from_ranks(ranks: BTreeMap<CellId, u64>) -> Marking {
        Marking { ranks }
    }

    pub fn ranks(&self) -> &BTreeMap<CellId, u64> {
        &self.ranks
    }

    pub fn rank(&self, ray: CellId) -> Option<u64> {
        self.ranks.get(&ray).copied()
    }

    pub fn is_marked(&self, ray: CellId) -> bool {
        self.ranks.contains_key(&ray)
    }

    pub fn max_rank(&self) -> Option<u64> {
        self.ranks.values().max().copied()
    }

    /// Adds a batch of new vertices above everything already marked. Empty
    /// batches leave the marking unchanged.
    pub fn extend_with_batch(&self, rays: &[CellId]) -> Marking {
        let mut out = self.clone();
        if rays.is_empty() {
            return out;
        }
        let r = self.max_rank().map_or(0, |m| m + 1);
        for &ray in rays {
            out.ranks.insert(ray, r);
        }
        out
    }

    /// Applies the batches in order, each above the previous ones.
    pub fn extend_after_subdivision(&self, batches: &[Vec<CellId>]) -> Marking {
        batches
            .iter()
            .fold(self.clone(), |m, b| m.extend_with_batch(b))
    }

    /// Drops ranks of rays that are no longer cells of `k`.
    pub fn restrict_to(&self, k: &ConicalComplex) -> Marking {
        Marking {
            ranks: self
                .ranks
                .iter()
                .filter(|(id, _)| k.cells().contains_key(id))
                .map(|(&a, &b)| (a, b))
                .collect(),
        }
    }

    fn marked_indices(&self, k: &ConicalComplex, sigma: CellId) -> Vec<usize> {
        k.vertex_rays(sigma)
            .iter()
            .enumerate()
            .filter(|(_, r)| self.is_marked(**r))
            .map(|(i, _)| i)
            .collect()
    }

    /// Checks that the order is total on each cell and that marked vertices
    /// are independent of the unmarked ones.
    pub fn validate(&self, k: &ConicalComplex) -> Result<(), MarkingError> {
        for sigma in k.ids() {
            let rays = k.vertex_rays(sigma);
            let marked = self.marked_indices(k, sigma);
            let mut ranks: Vec<u64> = marked.iter().map(|&i| self.ranks[&rays[i]]).collect();
            ranks.sort_unstable();
            if ranks.windows(2).any(|w| w[0] == w[1]) {
                return Err(MarkingError::OrderNotTotal(sigma));
            }
            let cone = k.cone(sigma);
            let d = cone.dim();
            let verts = cone.vertices();
            let m: Vec<IntVector> = marked.iter().map(|&i| verts[i].clone()).collect();
            let u: Vec<IntVector> = (0..verts.len())
                .filter(|i| !marked.contains(i))
                .map(|i| verts[i].clone())
                .collect();
            let rm = IntMatrix::from_rows(&m, d).rank();
            let ru = IntMatrix::from_rows(&u, d).rank();
            if rm != m.len() || IntMatrix::from_rows(verts, d).rank() != rm + ru {
                return Err(MarkingError::InvariantViolated(sigma));
            }
        }
        Ok(())
    }

    /// Every face without marked vertices is regular.
    pub fn is_regularly_marked(&self, k: &ConicalComplex) -> bool {
        k.ids().all(|s| {
            let c = k.cone(s);
            c.dim() == 0 || !self.marked_indices(k, s).is_empty() || c.is_regular()
        })
    }

    /// Coefficients of `v ∈ σ` on the marked vertices of σ.
    pub fn project(
        &self,
        k: &ConicalComplex,
        sigma: CellId,
        v: &IntVector,
    ) -> Result<BTreeMap<CellId, BigRational>, MarkingError> {
        let cone = k.cone(sigma);
        if !cone.contains(v) {
            return Err(MarkingError::NotInCone(sigma));
        }
        let rays = k.vertex_rays(sigma);
        let marked = self.marked_indices(k, sigma);
        if marked.is_empty() {
            return Ok(BTreeMap::new());
        }
        let verts = cone.vertices();
        let order: Vec<usize> = marked
            .iter()
            .copied()
            .chain((0..verts.len()).filter(|i| !marked.contains(i)))
            .collect();
        let cols: Vec<IntVector> = order.iter().map(|&i| verts[i].clone()).collect();
        let x = solve_rational(&IntMatrix::from_columns(&cols, cone.dim()), v)
            .ok_or(MarkingError::NotInCone(sigma))?;
        Ok(marked
            .iter()
            .enumerate()
            .map(|(j, &i)| (rays[i], x[j].clone()))
            .collect())
    }

    /// `π(v) > π(w)` iff every vertex with a negative coefficient in the
    /// difference is dominated by a greater vertex with a positive one.
    pub fn compare(
        &self,
        k: &ConicalComplex,
        sigma: CellId,
        v: &IntVector,
        w: &IntVector,
    ) -> Result<OrderOutcome, MarkingError> {
        Ok(self.compare_projections(&self.project(k, sigma, v)?, &self.project(k, sigma, w)?))
    }

    fn compare_projections(
        &self,
        pv: &BTreeMap<CellId, BigRational>,
        pw: &BTreeMap<CellId, BigRational>,
    ) -> OrderOutcome {
        let diff: Vec<(u64, BigRational)> = pv
            .iter()
            .map(|(r, a)| (self.ranks[r], a - &pw[r]))
            .filter(|(_, d)| !d.is_zero())
            .collect();
        if diff.is_empty() {
            return OrderOutcome::EqProj;
        }
        let dominated = |neg: bool| {
            diff.iter()
                .filter(|(_, d)| d.is_negative() == neg)
                .all(|(r, _)| diff.iter().any(|(q, d)| d.is_negative() != neg && q > r))
        };
        match (dominated(true), dominated(false)) {
            (true, false) => OrderOutcome::Gt,
            (false, true) => OrderOutcome::Lt,
            _ => OrderOutcome::Incomparable,
        }
    }

    /// The unique order-minimal element of `candidates` (vectors of σ).
    pub fn minimal_among(
        &self,
        k: &ConicalComplex,
        sigma: CellId,
        candidates: &[IntVector],
    ) -> Result<IntVector, MarkingError> {
        if candidates.is_empty() {
            return Err(MarkingError::NoSmallVectors(sigma));
        }
        let proj = candidates
            .iter()
            .map(|c| self.project(k, sigma, c))
            .collect::<Result<Vec<_>, _>>()?;
        let found: Vec<usize> = (0..candidates.len())
            .filter(|&i| {
                (0..candidates.len()).all(|j| {
                    i == j || self.compare_projections(&proj[i], &proj[j]) == OrderOutcome::Lt
                })
            })
            .collect();
        match found.as_slice() {
            [i] => Ok(candidates[*i].clone()),
            _ => Err(MarkingError::UniquenessViolated(sigma)),
        }
    }

    /// The unique order-minimal small vector of a regularly marked singular cell.
    pub fn minimal_small_vector(
        &self,
        k: &ConicalComplex,
        sigma: CellId,
    ) -> Result<IntVector, MarkingError> {
        let small = k.cone(sigma).small_vectors()?;
        self.minimal_among(k, sigma, &small)
    }

    /// Sort key consistent with the order on every face: coefficients by
    /// descending rank.
    pub fn key(
        &self,
        k: &ConicalComplex,
        sigma: CellId,
        v: &IntVector,
    ) -> Result<Vec<(u64, BigRational)>, MarkingError> {
        let mut key: Vec<(u64, BigRational)> = self
            .project(k, sigma, v)?
            .into_iter()
            .map(|(r, a)| (self.ranks[&r], a))
            .collect();
        key.sort_by_key(|e| std::cmp::Reverse(e.0));
        Ok(key)
    }
}

/// Lexicographic comparison of two rank-keyed coefficient lists.
pub fn compare_keys(a: &[(u64, BigRational)], b: &[(u64, BigRational)]) -> Ordering {
    let mut ranks: Vec<u64> = a.iter().chain(b).map(|x| x.0).collect();
    ranks.sort_unstable_by(|x, y| y.cmp(x));
    ranks.dedup();
    let get = |s: &[(u64, BigRational)], r| {
        s.iter()
            .find(|x| x.0 == r)
            .map(|x| x.1.clone())
            .unwrap_or_default()
    };
    for r in ranks {
        match get(a, r).cmp(&get(b, r)) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::IntMatrix;

    fn v(x: &[i64]) -> IntVector {
        IntVector::from_i64s(x)
    }

    fn fan(gens: &[&[i64]]) -> ConicalComplex {
        let n = gens[0].len();
        ConicalComplex::from_fan(
            &IntMatrix::identity(n),
            &[gens.iter().map(|g| v(g)).collect()],
        )
        .unwrap()
    }

    fn ray_of(k: &ConicalComplex, x: &[i64]) -> CellId {
        k.rays()
            .into_iter()
            .find(|&r| k.cone(r).ambient_vertices() == vec![v(x)])
            .unwrap()
    }

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn projection_examples() {
        let k = fan(&[&[1, 0], &[0, 1]]);
        let top = k.maximal_cells()[0];
        assert!(Marking::new()
            .project(&k, top, &v(&[2, 3]))
            .unwrap()
            .is_empty());
        let (w1, w2) = (ray_of(&k, &[1, 0]), ray_of(&k, &[0, 1]));
        let full = Marking::from_ranks([(w1, 0), (w2, 1)].into_iter().collect());
        let p = full.project(&k, top, &v(&[2, 3])).unwrap();
        assert_eq!(p[&w1], rat(2));
        assert_eq!(p[&w2], rat(3));
        let half = Marking::from_ranks([(w2, 0)].into_iter().collect());
        let p = half.project(&k, top, &v(&[1, 2])).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p[&w2], rat(2));
        assert_eq!(
            half.project(&k, top, &v(&[-1, 2])),
            Err(MarkingError::NotInCone(top))
        );
    }

    #[test]
    fn compare_examples() {
        let k = fan(&[&[1, 0], &[0, 1]]);
        let top = k.maximal_cells()[0];
        let (w1, w2) = (ray_of(&k, &[1, 0]), ray_of(&k, &[0, 1]));
        let mk = Marking::from_ranks([(w1, 0), (w2, 1)].into_iter().collect());
        assert_eq!(
            mk.compare(&k, top, &v(&[2, 3]), &v(&[3, 2])).unwrap(),
            OrderOutcome::Gt
        );
        assert_eq!(
            mk.compare(&k, top, &v(&[0, 1]), &v(&[1, 0])).unwrap(),
            OrderOutcome::Gt
        );
        let half = Marking::from_ranks([(w2, 0)].into_iter().collect());
        assert_eq!(
            half.compare(&k, top, &v(&[1, 2]), &v(&[5, 2])).unwrap(),
            OrderOutcome::EqProj
        );
    }

    #[test]
    fn minimal_small_vector_examples() {
        let k = fan(&[&[1, 0], &[2, 3]]);
        let top = k.maximal_cells()[0];
        let mk = Marking::from_ranks([(ray_of(&k, &[2, 3]), 0)].into_iter().collect());
        assert_eq!(mk.minimal_small_vector(&k, top).unwrap(), v(&[1, 1]));
        let k = fan(&[&[1, 0], &[1, 3]]);
        let top = k.maximal_cells()[0];
        let mk = Marking::from_ranks([(ray_of(&k, &[1, 3]), 0)].into_iter().collect());
        assert_eq!(mk.minimal_small_vector(&k, top).unwrap(), v(&[1, 1]));
        let k = fan(&[&[1, 0], &[0, 1]]);
        let top = k.maximal_cells()[0];
        assert_eq!(
            Marking::new().minimal_small_vector(&k, top),
            Err(MarkingError::NoSmallVectors(top))
        );
    }

    #[test]
    fn batches_rank_above() {
        let m = Marking::new().extend_after_subdivision(&[
            vec![CellId(5)],
            vec![],
            vec![CellId(7), CellId(8)],
        ]);
        assert_eq!(m.rank(CellId(5)), Some(0));
        assert_eq!(m.rank(CellId(7)), Some(1));
        assert_eq!(m.rank(CellId(8)), Some(1));
        let base = Marking::from_ranks([(CellId(1), 0), (CellId(2), 1)].into_iter().collect());
        let ext = base.extend_with_batch(&[CellId(9)]);
        assert!(ext.rank(CellId(9)) > ext.rank(CellId(2)));
    }

    #[test]
    fn validate_detects_ties() {
        let k = fan(&[&[1, 0], &[0, 1]]);
        let (w1, w2) = (ray_of(&k, &[1, 0]), ray_of(&k, &[0, 1]));
        let tie = Marking::from_ranks([(w1, 3), (w2, 3)].into_iter().collect());
        assert!(matches!(
            tie.validate(&k),
            Err(MarkingError::OrderNotTotal(_))
        ));
        let ok = Marking::from_ranks([(w1, 0), (w2, 1)].into_iter().collect());
        assert_eq!(ok.validate(&k), Ok(()));
        assert!(ok.is_regularly_marked(&k));
    }
}

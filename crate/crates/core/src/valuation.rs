//! Toric valuations and the blow-up view of a star subdivision.
//!
//! A center `v` gives the monomial valuation `val(v)`. The PL function
//! `F_{v,a}` takes the value `a` on `v` and 0 on every other ray of `v·Σ`;
//! its monoid ideals are the valuation ideals `I_{val(v),a}`. Dual-cone work
//! stays on simplicial cones and bounded height boxes.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::complex::{CellId, ComplexError, ConicalComplex, StarCenter};
use crate::exactlin::{adjugate, solve_rational, IntMatrix, IntVector, RatVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValuationError {
    #[error("empty support")]
    EmptySupport,
    #[error("degree bound {bound} is below a = {a}")]
    BoundTooSmall { bound: u64, a: u64 },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// `val(v)(f) = min ⟨v, w⟩` over the exponents `w` of `f`.
pub fn val(v: &IntVector, support: &[IntVector]) -> Result<BigInt, ValuationError> {
    support
        .iter()
        .map(|w| v.dot(w))
        .min()
        .ok_or(ValuationError::EmptySupport)
}

/// A piecewise linear function: one linear functional per maximal cell, in
/// the dual of the cell's lattice. Only nonzero functionals are stored; a
/// maximal cell missing from `functionals` carries the zero functional.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLFunction {
    pub complex: ConicalComplex,
    pub functionals: BTreeMap<CellId, RatVector>,
}

impl PLFunction {
    pub fn zero(k: &ConicalComplex) -> PLFunction {
        PLFunction {
            complex: k.clone(),
            functionals: BTreeMap::new(),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.functionals.values().all(RatVector::is_integral)
    }

    /// Value at a point of σ given in σ's lattice coordinates, where σ is any cell.
    pub fn eval(&self, sigma: CellId, x: &IntVector) -> BigRational {
        let k = &self.complex;
        let top = std::iter::once(sigma)
            .chain(k.cofaces(sigma).iter().copied())
            .find(|s| self.functionals.contains_key(s));
        match top {
            Some(top) => {
                self.functionals[&top].dot_int(&k.inclusion(sigma, top).expect("face").mul_vec(x))
            }
            None => BigRational::zero(),
        }
    }

    /// Coefficientwise sum; both must live on the same complex.
    pub fn add(&self, other: &PLFunction) -> PLFunction {
        let mut functionals = self.functionals.clone();
        for (id, m) in &other.functionals {
            let sum = match functionals.get(id) {
                Some(x) => x + m,
                None => m.clone(),
            };
            functionals.insert(*id, sum);
        }
        functionals.retain(|_, m| !m.is_zero());
        PLFunction {
            complex: self.complex.clone(),
            functionals,
        }
    }

    pub fn scale(&self, c: &BigInt) -> PLFunction {
        let c = BigRational::from_integer(c.clone());
        let functionals = if c.is_zero() {
            BTreeMap::new()
        } else {
            self.functionals
                .iter()
                .map(|(id, m)| (*id, m.scale(&c)))
                .collect()
        };
        PLFunction {
            complex: self.complex.clone(),
            functionals,
        }
    }

    /// Cells of the complex meeting the support of the function.
    fn support_cells(&self) -> BTreeSet<CellId> {
        let k = &self.complex;
        let mut out = BTreeSet::new();
        for &s in self.functionals.keys() {
            out.insert(s);
            out.extend(k.cells()[&s].faces.keys().copied());
        }
        out
    }

    /// The functionals of any two maximal cells agree on their common faces.
    /// A face is spanned by its vertices, so it is enough that every ray
    /// gets one value from all the maximal cells containing it.
    pub fn face_compatible(&self) -> bool {
        let k = &self.complex;
        self.support_cells()
            .into_iter()
            .filter(|&r| k.cone(r).dim() == 1)
            .all(|r| {
                let generator = &k.cone(r).vertices()[0];
                let mut values = std::iter::once(r)
                    .chain(k.cofaces(r).iter().copied())
                    .filter(|&s| k.cofaces(s).is_empty())
                    .map(|s| match self.functionals.get(&s) {
                        Some(m) => m.dot_int(&k.inclusion(r, s).expect("face").mul_vec(generator)),
                        None => BigRational::zero(),
                    });
                let first = values.next();
                values.all(|x| Some(x) == first)
            })
    }
}

/// `F_{v,a}` on the subdivided complex, with the subdivision data needed to
/// inspect it.
#[derive(Clone, Debug)]
pub struct PLBlowup {
    pub function: PLFunction,
    pub new_ray: CellId,
    /// Smallest `a` making `F_{v,a}` integral.
    pub min_integral_a: BigInt,
    /// New cell ↦ (old cell containing it, matrix to its lattice).
    pub parent: BTreeMap<CellId, (CellId, IntMatrix)>,
}

/// Linear extension of vertex values over a cell, if one exists.
fn extend_linearly(k: &ConicalComplex, sigma: CellId, values: &[BigInt]) -> Option<RatVector> {
    let cone = k.cone(sigma);
    let vt = IntMatrix::from_rows(cone.vertices(), cone.dim());
    let m = solve_rational(&vt, &IntVector::new(values.to_vec()))?;
    // free variables were set to zero; check the remaining equations
    let ok = cone
        .vertices()
        .iter()
        .zip(values)
        .all(|(u, x)| m.dot_int(u) == BigRational::from_integer(x.clone()));
    ok.then_some(m)
}

/// Linear extensions over `cells`, skipping those where every value is 0.
fn function_from_ray_values(
    k: &ConicalComplex,
    cells: impl IntoIterator<Item = CellId>,
    values: &BTreeMap<CellId, BigInt>,
) -> Option<BTreeMap<CellId, RatVector>> {
    let mut functionals = BTreeMap::new();
    for sigma in cells {
        let vals: Vec<BigInt> = k
            .vertex_rays(sigma)
            .iter()
            .map(|r| values.get(r).cloned().unwrap_or_default())
            .collect();
        if vals.iter().all(Zero::is_zero) {
            continue;
        }
        functionals.insert(sigma, extend_linearly(k, sigma, &vals)?);
    }
    Some(functionals)
}

/// Subdivides at `center` and builds `F_{v,a}`: `a` on the new ray, 0 on
/// all others, linear on each cone.
pub fn pl_function(
    center: &StarCenter,
    a: u64,
    k: &ConicalComplex,
) -> Result<PLBlowup, ValuationError> {
    let mut complex = k.clone();
    let (parent, new_rays) = complex.star_subdivide_in_place(std::slice::from_ref(center))?;
    let new_ray = new_rays[0];
    // only the new cells contain the new ray
    let tops: Vec<CellId> = parent
        .keys()
        .copied()
        .filter(|&s| complex.cofaces(s).is_empty())
        .collect();
    let unit_values: BTreeMap<CellId, BigInt> = [(new_ray, BigInt::one())].into_iter().collect();
    let unit = function_from_ray_values(&complex, tops, &unit_values)
        .expect("cells of a star subdivision are cones over the new ray");
    let min_integral_a = unit
        .values()
        .fold(BigInt::one(), |acc, m| acc.lcm(&m.denominator_lcm()));
    let a = BigRational::from_integer(BigInt::from(a));
    let functionals = unit.into_iter().map(|(id, m)| (id, m.scale(&a))).collect();
    let function = PLFunction {
        complex,
        functionals,
    };
    Ok(PLBlowup {
        function,
        new_ray,
        min_integral_a,
        parent,
    })
}

/// A wall between two new full-dimensional cells inside the same old cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub wall: CellId,
    pub left: CellId,
    pub right: CellId,
    pub host: CellId,
}

impl PLBlowup {
    pub fn walls(&self) -> Vec<Wall> {
        let k = &self.function.complex;
        let mut out = Vec::new();
        for w in self.function.support_cells() {
            let tops: Vec<CellId> = k
                .cofaces(w)
                .iter()
                .copied()
                .filter(|&s| k.cofaces(s).is_empty())
                .collect();
            let [left, right] = tops[..] else { continue };
            let d = k.cone(left).dim();
            if k.cone(w).dim() + 1 != d || k.cone(right).dim() != d {
                continue;
            }
            if !k.is_face(self.new_ray, left) || !k.is_face(self.new_ray, right) {
                continue;
            }
            let (hl, bl) = &self.parent[&left];
            let (hr, _) = &self.parent[&right];
            if hl == hr && bl.rows() == bl.cols() {
                out.push(Wall {
                    wall: w,
                    left,
                    right,
                    host: *hl,
                });
            }
        }
        out
    }

    /// On each side of every wall, the other side's functional is strictly
    /// larger off the wall, so `F` is the minimum of the two.
    pub fn convex_across_walls(&self) -> bool {
        self.walls().iter().all(|w| {
            self.strict_at(w.left, w.right, w.wall) && self.strict_at(w.right, w.left, w.wall)
        })
    }

    fn strict_at(&self, this: CellId, other: CellId, wall: CellId) -> bool {
        let k = &self.function.complex;
        let on_wall = k.face_index_set(wall, this).expect("wall is a face");
        let (_, b_this) = &self.parent[&this];
        let (_, b_other) = &self.parent[&other];
        let cone = k.cone(this);
        (0..cone.vertices().len())
            .filter(|i| !on_wall.contains(i))
            .all(|i| {
                let u = &cone.vertices()[i];
                let y = b_this.mul_vec(u);
                let Some(x) = solve_rational(b_other, &y) else {
                    return false;
                };
                let m_other = &self.function.functionals[&other];
                let lhs: BigRational = m_other
                    .entries()
                    .iter()
                    .zip(x.entries())
                    .map(|(p, q)| p * q)
                    .sum();
                lhs > self.function.functionals[&this].dot_int(u)
            })
    }
}

/// Value of `F` on the rays of the cells where it is nonzero. Every ray
/// missing from the map has value 0.
pub fn exceptional_coefficients(f: &PLFunction) -> BTreeMap<CellId, BigRational> {
    let k = &f.complex;
    f.support_cells()
        .into_iter()
        .filter(|&r| k.cone(r).dim() == 1)
        .map(|r| (r, f.eval(r, &k.cone(r).vertices()[0])))
        .collect()
}

/// The PL function with the given ray values, when each maximal cell admits
/// an integral linear extension. Missing rays count as 0.
pub fn pl_from_divisor(
    coeffs: &BTreeMap<CellId, BigInt>,
    k: &ConicalComplex,
) -> Option<PLFunction> {
    let functionals = function_from_ray_values(k, k.maximal_cells(), coeffs)?;
    let f = PLFunction {
        complex: k.clone(),
        functionals,
    };
    f.is_integral().then_some(f)
}

/// The part of a valuation ideal living on one simplicial cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeSlice {
    /// The center in this cell's lattice coordinates.
    pub v: IntVector,
    pub vertices: Vec<IntVector>,
    /// Generators `m` in dual coordinates, sorted by height sum.
    pub generators: Vec<IntVector>,
}

impl ConeSlice {
    fn heights(&self, m: &IntVector) -> Vec<BigInt> {
        self.vertices.iter().map(|u| m.dot(u)).collect()
    }

    /// Whether `m` is a generator plus an element of the dual monoid.
    pub fn contains(&self, m: &IntVector) -> bool {
        let h = self.heights(m);
        if h.iter().any(Signed::is_negative) {
            return false;
        }
        self.generators
            .iter()
            .any(|g| self.heights(g).iter().zip(&h).all(|(x, y)| x <= y))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuationIdealSlice {
    pub center: StarCenter,
    pub a: u64,
    pub degree_bound: u64,
    pub cones: BTreeMap<CellId, ConeSlice>,
    /// Maximal cells over the center that are not simplicial.
    pub skipped: Vec<CellId>,
}

fn height_box(d: usize, bound: u64) -> impl Iterator<Item = Vec<u64>> {
    let total = (bound + 1).pow(d as u32);
    (0..total).map(move |mut n| {
        (0..d)
            .map(|_| {
                let x = n % (bound + 1);
                n /= bound + 1;
                x
            })
            .collect()
    })
}

/// Height vectors `h` in the box whose dual point `m = adjᵀh / det` is
/// integral with `⟨v, m⟩ ≥ a`, in machine integers. `None` when the entries
/// are too large for that.
#[allow(clippy::type_complexity)]
fn slice_members_small(
    adj_t: &IntMatrix,
    det: &BigInt,
    v: &IntVector,
    a: u64,
    bound: u64,
) -> Option<Vec<(u64, Vec<u64>, IntVector)>> {
    const LIMIT: i128 = 1 << 40;
    let small = |x: &BigInt| x.to_i128().filter(|y| y.abs() < LIMIT);
    let d = v.dim();
    let rows: Vec<Vec<i128>> = (0..d)
        .map(|i| (0..d).map(|j| small(adj_t.get(i, j))).collect())
        .collect::<Option<_>>()?;
    let det = small(det)?;
    let v: Vec<i128> = v.entries().iter().map(small).collect::<Option<_>>()?;
    if bound >= 1 << 16 || a >= 1 << 16 {
        return None;
    }
    // ⟨v, m⟩·det = ⟨adj v, h⟩ with adj v = adjᵀᵀ v
    let w: Vec<i128> = (0..d)
        .map(|j| (0..d).map(|i| rows[i][j] * v[i]).sum())
        .collect();
    let target = a as i128 * det;
    let mut out = Vec::new();
    for h in height_box(d, bound) {
        let pairing: i128 = w.iter().zip(&h).map(|(x, &t)| x * t as i128).sum();
        if (det > 0 && pairing < target) || (det < 0 && pairing > target) {
            continue;
        }
        let scaled: Vec<i128> = rows
            .iter()
            .map(|r| r.iter().zip(&h).map(|(x, &t)| x * t as i128).sum())
            .collect();
        if scaled.iter().any(|e| e % det != 0) {
            continue;
        }
        let m = IntVector::new(scaled.iter().map(|e| BigInt::from(e / det)).collect());
        out.push((h.iter().sum(), h, m));
    }
    Some(out)
}

fn cone_slice(vertices: &[IntVector], v: &IntVector, a: u64, bound: u64) -> ConeSlice {
    let d = v.dim();
    let vmat = IntMatrix::from_columns(vertices, d);
    let (adj, det) = adjugate(&vmat);
    let adj_t = adj.transpose();
    let mut members = slice_members_small(&adj_t, &det, v, a, bound).unwrap_or_else(|| {
        let x = solve_rational(&vmat, v).expect("vertices form a basis");
        let target = BigRational::from_integer(BigInt::from(a));
        let mut members = Vec::new();
        for h in height_box(d, bound) {
            let hv = IntVector::new(h.iter().map(|&t| BigInt::from(t)).collect());
            let scaled = adj_t.mul_vec(&hv);
            if scaled.entries().iter().any(|e| !e.is_multiple_of(&det)) {
                continue;
            }
            let m = IntVector::new(scaled.entries().iter().map(|e| e / &det).collect());
            let pairing: BigRational = x
                .entries()
                .iter()
                .zip(&h)
                .map(|(c, &t)| c * BigInt::from(t))
                .sum();
            if pairing >= target {
                members.push((h.iter().sum(), h, m));
            }
        }
        members
    });
    members.sort();
    let mut generators: Vec<(Vec<u64>, IntVector)> = Vec::new();
    if a == 0 {
        let set: HashSet<Vec<u64>> = members.iter().map(|(_, h, _)| h.clone()).collect();
        for (s, h, m) in &members {
            if *s == 0 {
                continue;
            }
            let decomposable = generators.iter().any(|(g, _)| {
                g.iter().zip(h).all(|(x, y)| x <= y) && {
                    let rest: Vec<u64> = h.iter().zip(g).map(|(y, x)| y - x).collect();
                    rest.iter().any(|&t| t > 0) && set.contains(&rest)
                }
            });
            if !decomposable {
                generators.push((h.clone(), m.clone()));
            }
        }
    } else {
        for (_, h, m) in &members {
            if !generators
                .iter()
                .any(|(g, _)| g.iter().zip(h).all(|(x, y)| x <= y))
            {
                generators.push((h.clone(), m.clone()));
            }
        }
    }
    ConeSlice {
        v: v.clone(),
        vertices: vertices.to_vec(),
        generators: generators.into_iter().map(|(_, m)| m).collect(),
    }
}

/// Generators of `I_{val(v),a}` on each simplicial maximal cell over the
/// center, among dual vectors whose vertex heights are at most `bound`.
/// With `a = 0` the generators are the Hilbert basis of the dual monoid.
pub fn ideal_slice(
    center: &StarCenter,
    a: u64,
    k: &ConicalComplex,
    bound: u64,
) -> Result<ValuationIdealSlice, ValuationError> {
    if bound < a {
        return Err(ValuationError::BoundTooSmall { bound, a });
    }
    let tau = center.carrier;
    let star = k.star(tau)?;
    let mut cones = BTreeMap::new();
    let mut skipped = Vec::new();
    for sigma in star.into_iter().filter(|s| k.cofaces(*s).is_empty()) {
        let cone = k.cone(sigma);
        if !cone.is_simplicial() {
            skipped.push(sigma);
            continue;
        }
        let v = k
            .inclusion(tau, sigma)
            .expect("star")
            .mul_vec(&center.vector);
        cones.insert(sigma, cone_slice(cone.vertices(), &v, a, bound));
    }
    Ok(ValuationIdealSlice {
        center: center.clone(),
        a,
        degree_bound: bound,
        cones,
        skipped,
    })
}

/// The slices for `a = 1..=max_a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredCenter {
    pub slices: Vec<ValuationIdealSlice>,
}

pub fn filtered_center(
    center: &StarCenter,
    max_a: u64,
    k: &ConicalComplex,
    bound: u64,
) -> Result<FilteredCenter, ValuationError> {
    let slices = (1..=max_a)
        .map(|a| ideal_slice(center, a, k, bound))
        .collect::<Result<_, _>>()?;
    Ok(FilteredCenter { slices })
}

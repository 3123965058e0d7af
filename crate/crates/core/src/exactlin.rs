//! Exact integer and rational linear algebra.
//!
//! Everything here works over arbitrary-precision integers. Lattices are
//! carried as explicit basis matrices whose columns are the basis vectors in
//! ambient coordinates, so index and saturation questions reduce to Hermite
//! normal forms of small matrices.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinError {
    #[error("generator {index} is not in the rational span of the ambient lattice")]
    SpanViolation { index: usize },
    #[error("vector is not a point of the lattice")]
    NotInLattice,
    #[error("zero vector has no primitive representative")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Integer vector with arbitrary-precision entries.
///
/// The derived ordering is lexicographic on the coordinate tuple, which is the
/// order used everywhere a deterministic listing is required.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IntVector(Vec<BigInt>);

impl IntVector {
    pub fn new(entries: Vec<BigInt>) -> Self {
        IntVector(entries)
    }

    pub fn from_i64s(entries: &[i64]) -> Self {
        IntVector(entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        IntVector(vec![BigInt::zero(); dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = BigInt::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Nonnegative gcd of the entries (zero for the zero vector).
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    /// Divides out the content. The zero vector is returned unchanged.
    pub fn primitive_part(&self) -> IntVector {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        IntVector(self.0.iter().map(|x| x / &g).collect())
    }

    pub fn dot(&self, other: &IntVector) -> BigInt {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, k: &BigInt) -> IntVector {
        IntVector(self.0.iter().map(|x| x * k).collect())
    }

    pub fn to_rational(&self) -> RatVector {
        RatVector(
            self.0
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect(),
        )
    }

    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.0.iter().map(ToPrimitive::to_i64).collect()
    }

    /// Concatenation of two vectors.
    pub fn concat(&self, other: &IntVector) -> IntVector {
        let mut entries = self.0.clone();
        entries.extend(other.0.iter().cloned());
        IntVector(entries)
    }
}

impl Index<usize> for IntVector {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl IndexMut<usize> for IntVector {
    fn index_mut(&mut self, i: usize) -> &mut BigInt {
        &mut self.0[i]
    }
}

impl Add for &IntVector {
    type Output = IntVector;
    fn add(self, rhs: &IntVector) -> IntVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        IntVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &IntVector {
    type Output = IntVector;
    fn sub(self, rhs: &IntVector) -> IntVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        IntVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &IntVector {
    type Output = IntVector;
    fn neg(self) -> IntVector {
        IntVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Debug for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Rational vector; entries are kept in lowest terms by `BigRational`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RatVector(Vec<BigRational>);

impl RatVector {
    pub fn new(entries: Vec<BigRational>) -> Self {
        RatVector(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        RatVector(vec![BigRational::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(BigRational::is_integer)
    }

    /// Least common multiple of the denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.0.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()))
    }

    /// Returns the integer vector when every entry is integral.
    pub fn to_integral(&self) -> Option<IntVector> {
        if !self.is_integral() {
            return None;
        }
        Some(IntVector(self.0.iter().map(|x| x.to_integer()).collect()))
    }

    /// Clears denominators: returns `(d, w)` with `self = w / d`, `d > 0` minimal.
    pub fn clear_denominators(&self) -> (BigInt, IntVector) {
        let d = self.denominator_lcm();
        let w = self
            .0
            .iter()
            .map(|x| (x * BigRational::from_integer(d.clone())).to_integer())
            .collect();
        (d, IntVector(w))
    }

    pub fn dot_int(&self, other: &IntVector) -> BigRational {
        self.0
            .iter()
            .zip(other.entries())
            .map(|(a, b)| a * BigRational::from_integer(b.clone()))
            .sum()
    }

    pub fn scale(&self, k: &BigRational) -> RatVector {
        RatVector(self.0.iter().map(|x| x * k).collect())
    }
}

impl Index<usize> for RatVector {
    type Output = BigRational;
    fn index(&self, i: usize) -> &BigRational {
        &self.0[i]
    }
}

impl Add for &RatVector {
    type Output = RatVector;
    fn add(self, rhs: &RatVector) -> RatVector {
        RatVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RatVector {
    type Output = RatVector;
    fn sub(self, rhs: &RatVector) -> RatVector {
        RatVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Debug for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Self {
        assert_eq!(rows * cols, data.len(), "matrix entry count");
        IntMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let data = rows
            .iter()
            .flat_map(|row| {
                assert_eq!(row.len(), c, "ragged rows");
                row.iter().map(|&x| BigInt::from(x))
            })
            .collect();
        IntMatrix::new(r, c, data)
    }

    pub fn from_rows(rows: &[IntVector], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            assert_eq!(row.dim(), cols, "row length");
            data.extend(row.entries().iter().cloned());
        }
        IntMatrix::new(rows.len(), cols, data)
    }

    /// Builds a `rows × columns.len()` matrix from column vectors.
    pub fn from_columns(columns: &[IntVector], rows: usize) -> Self {
        let cols = columns.len();
        let mut m = Self::zeros(rows, cols);
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.dim(), rows, "column length");
            for i in 0..rows {
                m.data[i * cols + j] = col[i].clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> IntVector {
        IntVector(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn column(&self, j: usize) -> IntVector {
        IntVector((0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn row_vectors(&self) -> Vec<IntVector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn columns(&self) -> Vec<IntVector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &IntVector) -> IntVector {
        assert_eq!(self.cols, v.dim(), "matrix-vector shape");
        IntVector(
            (0..self.rows)
                .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
                .collect(),
        )
    }

    pub fn mul_rat_vec(&self, v: &RatVector) -> RatVector {
        assert_eq!(self.cols, v.dim(), "matrix-vector shape");
        RatVector(
            (0..self.rows)
                .map(|i| {
                    (0..self.cols)
                        .map(|j| BigRational::from_integer(self.get(i, j).clone()) * &v[j])
                        .sum()
                })
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// row[target] -= q * row[source]
    fn sub_row_multiple(&mut self, target: usize, source: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = &self.data[source * self.cols + j] * q;
            self.data[target * self.cols + j] -= s;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = &mut self.data[i * self.cols + j];
            *x = -std::mem::take(x);
        }
    }

    /// Determinant of a square matrix by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a.get(i, k).is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(k, k) * a.get(i, j) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1)
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
                continue;
            };
            a.swap_rows(r, p);
            let pivot = a.get(r, c).clone();
            for i in r + 1..a.rows {
                let f = a.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..a.cols {
                    let v = &pivot * a.get(i, j) - &f * a.get(r, j);
                    a.set(i, j, v);
                }
            }
            r += 1;
        }
        r
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Hermite normal form by unimodular row operations.
///
/// Returns `(h, u)` with `h = u·m`, `u` unimodular and `h` in row echelon form:
/// pivots positive, entries above each pivot reduced into `[0, pivot)`, zero
/// rows last. Pivot rows are chosen as the row of smallest nonzero absolute
/// value in the current column (lowest index on ties), so the result is fully
/// deterministic.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let rows = h.rows();
    let mut r = 0;
    for c in 0..h.cols() {
        if r == rows {
            break;
        }
        loop {
            let pivot = (r..rows)
                .filter(|&i| !h.get(i, c).is_zero())
                .min_by(|&a, &b| h.get(a, c).abs().cmp(&h.get(b, c).abs()).then(a.cmp(&b)));
            let Some(p) = pivot else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut clean = true;
            for i in r + 1..rows {
                if h.get(i, c).is_zero() {
                    continue;
                }
                let q = h.get(i, c).div_floor(h.get(r, c));
                h.sub_row_multiple(i, r, &q);
                u.sub_row_multiple(i, r, &q);
                if !h.get(i, c).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        if h.get(r, c).is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = h.get(i, c).div_floor(h.get(r, c));
            h.sub_row_multiple(i, r, &q);
            u.sub_row_multiple(i, r, &q);
        }
        r += 1;
    }
    (h, u)
}

/// Basis (in Hermite form) of the lattice spanned by the given vectors.
pub fn lattice_basis(gens: &[IntVector], dim: usize) -> Vec<IntVector> {
    if gens.is_empty() {
        return Vec::new();
    }
    let (h, _) = hnf(&IntMatrix::from_rows(gens, dim));
    h.row_vectors()
        .into_iter()
        .filter(|r| !r.is_zero())
        .collect()
}

/// Basis of the integer kernel `{x ∈ ℤ^cols : m·x = 0}`.
pub fn integer_kernel(m: &IntMatrix) -> Vec<IntVector> {
    if m.rows() == 0 {
        return (0..m.cols())
            .map(|i| IntVector::unit(m.cols(), i))
            .collect();
    }
    let (h, u) = hnf(&m.transpose());
    (0..h.rows())
        .filter(|&i| h.row(i).is_zero())
        .map(|i| u.row(i))
        .collect()
}

/// Hermite basis of `span_ℚ(gens) ∩ ℤ^dim`.
pub fn saturated_basis(gens: &[IntVector], dim: usize) -> Vec<IntVector> {
    if gens.iter().all(IntVector::is_zero) {
        return Vec::new();
    }
    let annihilator = integer_kernel(&IntMatrix::from_rows(gens, dim));
    let sat = integer_kernel(&IntMatrix::from_rows(&annihilator, dim));
    lattice_basis(&sat, dim)
}

/// Index of the lattice spanned by the vectors in its saturation: the gcd of
/// the maximal minors. Zero vectors are ignored; the empty lattice has index 1.
pub fn saturation_index(gens: &[IntVector], dim: usize) -> BigInt {
    let basis = lattice_basis(gens, dim);
    if basis.is_empty() {
        return BigInt::one();
    }
    // Column operations on the basis rows leave the gcd of maximal minors
    // unchanged; after them only one maximal minor survives.
    let (h, _) = hnf(&IntMatrix::from_rows(&basis, dim).transpose());
    let k = basis.len();
    (0..k).map(|i| h.get(i, i).abs()).product()
}

/// Solves `m·x = v` over the rationals. Free variables are set to zero.
pub fn solve_rational(m: &IntMatrix, v: &IntVector) -> Option<RatVector> {
    solve_rational_many(m, std::slice::from_ref(v))
        .pop()
        .flatten()
}

/// Solves `m·x = v` for each right-hand side with a single elimination.
pub fn solve_rational_many(m: &IntMatrix, rhs: &[IntVector]) -> Vec<Option<RatVector>> {
    for v in rhs {
        assert_eq!(m.rows(), v.dim(), "right-hand side length");
    }
    let augmented = |i: usize| {
        (0..m.cols())
            .map(move |j| m.get(i, j))
            .chain(rhs.iter().map(move |v| &v[i]))
    };
    let small: Option<Vec<Vec<i128>>> = (0..m.rows())
        .map(|i| {
            augmented(i)
                .map(|x| x.to_i128().filter(|y| y.abs() < 1 << 62))
                .collect()
        })
        .collect();
    let to_rat = |x: Vec<(BigInt, BigInt)>| {
        RatVector(x.into_iter().map(|(n, d)| BigRational::new(n, d)).collect())
    };
    if let Some(rows) = small {
        if let Some(solved) = gauss_jordan(rows, m.cols(), rhs.len()) {
            return solved
                .into_iter()
                .map(|x| {
                    x.map(|x| to_rat(x.into_iter().map(|(n, d)| (n.into(), d.into())).collect()))
                })
                .collect();
        }
    }
    let rows = (0..m.rows())
        .map(|i| augmented(i).cloned().collect())
        .collect();
    let solved = gauss_jordan(rows, m.cols(), rhs.len()).expect("big integers do not overflow");
    solved.into_iter().map(|x| x.map(to_rat)).collect()
}

/// Integer entries for fraction-free elimination; `None` means overflow.
trait Entry: Clone + Sized {
    fn origin() -> Self;
    fn unit() -> Self;
    fn vanishes(&self) -> bool;
    fn negative(&self) -> bool;
    /// `a·p − b·q`
    fn cross(a: &Self, p: &Self, b: &Self, q: &Self) -> Option<Self>;
    fn common(&self, other: &Self) -> Self;
    fn exact_div(&self, d: &Self) -> Self;
}

impl Entry for i128 {
    fn origin() -> Self {
        0
    }
    fn unit() -> Self {
        1
    }
    fn vanishes(&self) -> bool {
        *self == 0
    }
    fn negative(&self) -> bool {
        *self < 0
    }
    fn cross(a: &Self, p: &Self, b: &Self, q: &Self) -> Option<Self> {
        a.checked_mul(*p)?.checked_sub(b.checked_mul(*q)?)
    }
    fn common(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn exact_div(&self, d: &Self) -> Self {
        self / d
    }
}

impl Entry for BigInt {
    fn origin() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn cross(a: &Self, p: &Self, b: &Self, q: &Self) -> Option<Self> {
        Some(a * p - b * q)
    }
    fn common(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn exact_div(&self, d: &Self) -> Self {
        self / d
    }
}

/// Fraction-free Gauss-Jordan on a matrix augmented by `nrhs` columns.
/// Outer `None` is overflow; per right-hand side, `None` is an inconsistent
/// system and a solution comes as (numerator, positive denominator) pairs
/// with free variables at zero.
#[allow(clippy::type_complexity)]
fn gauss_jordan<T: Entry>(
    mut a: Vec<Vec<T>>,
    cols: usize,
    nrhs: usize,
) -> Option<Vec<Option<Vec<(T, T)>>>> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].vanishes()) else {
            continue;
        };
        a.swap(r, p);
        for i in 0..rows {
            if i == r || a[i][c].vanishes() {
                continue;
            }
            let (p, f) = (a[r][c].clone(), a[i][c].clone());
            let mut g = T::origin();
            let (pivot_row, row) = if r < i {
                let (lo, hi) = a.split_at_mut(i);
                (&lo[r], &mut hi[0])
            } else {
                let (lo, hi) = a.split_at_mut(r);
                (&hi[0], &mut lo[i])
            };
            for (x, y) in row.iter_mut().zip(pivot_row) {
                *x = T::cross(x, &p, y, &f)?;
                g = g.common(x);
            }
            if !g.vanishes() {
                for x in a[i].iter_mut() {
                    *x = x.exact_div(&g);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let zero = T::origin();
    let mut out = Vec::with_capacity(nrhs);
    for t in cols..cols + nrhs {
        if a[r..].iter().any(|row| !row[t].vanishes()) {
            out.push(None);
            continue;
        }
        let mut x = vec![(T::origin(), T::unit()); cols];
        for (i, &c) in pivots.iter().enumerate() {
            let (n, d) = (&a[i][t], &a[i][c]);
            let g = n.common(d);
            let (mut n, mut d) = (n.exact_div(&g), d.exact_div(&g));
            if d.negative() {
                n = T::cross(&zero, &zero, &n, &T::unit())?;
                d = T::cross(&zero, &zero, &d, &T::unit())?;
            }
            x[c] = (n, d);
        }
        out.push(Some(x));
    }
    Some(out)
}

/// Result of a lattice index computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeIndex {
    Finite(BigInt),
    Infinite,
}

/// Coordinates of `gens` (columns) with respect to a basis of the lattice
/// spanned by the columns of `ambient`. Fails when a generator leaves the
/// rational span.
fn coordinates_in(
    gens: &IntMatrix,
    ambient: &IntMatrix,
) -> Result<(Vec<RatVector>, usize), LinError> {
    if gens.rows() != ambient.rows() {
        return Err(LinError::DimensionMismatch {
            expected: ambient.rows(),
            found: gens.rows(),
        });
    }
    let basis = lattice_basis(&ambient.columns(), ambient.rows());
    let bmat = IntMatrix::from_columns(&basis, ambient.rows());
    let coords = gens
        .columns()
        .iter()
        .enumerate()
        .map(|(i, g)| solve_rational(&bmat, g).ok_or(LinError::SpanViolation { index: i }))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((coords, basis.len()))
}

/// Index `[ambient : sub]` of the lattice spanned by the columns of `gens` in
/// the lattice spanned by the columns of `ambient`.
///
/// When the generators are not all lattice points of `ambient` the value is
/// the generalized index `|det|` of their coordinate matrix, which may be a
/// proper fraction; such inputs are rejected with `NotInLattice`.
pub fn sublattice_index(gens: &IntMatrix, ambient: &IntMatrix) -> Result<LatticeIndex, LinError> {
    let (coords, r) = coordinates_in(gens, ambient)?;
    let int_coords = coords
        .iter()
        .map(|c| c.to_integral().ok_or(LinError::NotInLattice))
        .collect::<Result<Vec<_>, _>>()?;
    let sub = lattice_basis(&int_coords, r);
    if sub.len() < r {
        return Ok(LatticeIndex::Infinite);
    }
    Ok(LatticeIndex::Finite(
        (0..r).map(|i| sub[i][i].clone()).product::<BigInt>().abs(),
    ))
}

/// True iff the lattice spanned by the columns of `sub` equals its rational
/// span intersected with the lattice spanned by the columns of `ambient`.
pub fn is_saturated(sub: &IntMatrix, ambient: &IntMatrix) -> bool {
    let Ok((coords, r)) = coordinates_in(sub, ambient) else {
        return false;
    };
    let Some(int_coords) = coords
        .iter()
        .map(RatVector::to_integral)
        .collect::<Option<Vec<_>>>()
    else {
        return false;
    };
    saturation_index(&int_coords, r).is_one()
}

/// Primitive lattice vector on the ray through `v`.
///
/// `v` is given in ambient coordinates and must be a point of the lattice
/// whose basis vectors are the columns of `lattice_basis`.
pub fn primitivize(v: &IntVector, lattice_basis: &IntMatrix) -> Result<IntVector, LinError> {
    if v.is_zero() {
        return Err(LinError::ZeroVector);
    }
    let coords = solve_rational(lattice_basis, v)
        .ok_or(LinError::SpanViolation { index: 0 })?
        .to_integral()
        .ok_or(LinError::NotInLattice)?;
    Ok(lattice_basis.mul_vec(&coords.primitive_part()))
}

/// Solves `m·x = v` for a matrix with linearly independent columns and returns
/// the unique solution when it is integral.
pub fn solve_integral(m: &IntMatrix, v: &IntVector) -> Option<IntVector> {
    solve_rational(m, v)?.to_integral()
}

/// Adjugate and determinant of a square matrix: `adj·m = det·I`.
pub fn adjugate(m: &IntMatrix) -> (IntMatrix, BigInt) {
    let n = m.rows();
    assert_eq!(n, m.cols(), "adjugate of non-square matrix");
    let det = m.determinant();
    if n == 1 {
        return (IntMatrix::identity(1), det);
    }
    let mut adj = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let minor_rows: Vec<IntVector> = (0..n)
                .filter(|&r| r != j)
                .map(|r| {
                    IntVector(
                        (0..n)
                            .filter(|&c| c != i)
                            .map(|c| m.get(r, c).clone())
                            .collect(),
                    )
                })
                .collect();
            let minor = IntMatrix::from_rows(&minor_rows, n - 1).determinant();
            let v = if (i + j) % 2 == 0 { minor } else { -minor };
            adj.set(i, j, v);
        }
    }
    (adj, det)
}

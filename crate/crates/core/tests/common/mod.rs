//! Brute-force oracles shared by the integration tests. They work on plain
//! integer rows and do their own rational elimination.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(x: i64) -> Q {
    Q::from_integer(BigInt::from(x))
}

/// Solves `A·x = b` for square invertible `A` given by columns.
pub fn solve_columns(cols: &[Vec<i64>], b: &[Q]) -> Option<Vec<Q>> {
    let n = b.len();
    assert_eq!(cols.len(), n);
    let mut a: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| q(cols[j][i]))
                .chain([b[i].clone()])
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for j in c..=n {
                    let s = &f * &a[c][j];
                    a[r][j] -= s;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n].clone()).collect())
}

pub fn to_q(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}

/// Every integer point of the box `lo..=hi`.
pub fn box_points(lo: &[i64], hi: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for (l, h) in lo.iter().zip(hi) {
        out = out
            .into_iter()
            .flat_map(|p| (*l..=*h).map(move |x| [p.clone(), vec![x]].concat()))
            .collect();
    }
    out
}

/// Bounding box of `{∑ c_i u_i : 0 ≤ c_i ≤ scale}`.
pub fn parallelepiped_box(verts: &[Vec<i64>], scale: i64) -> (Vec<i64>, Vec<i64>) {
    let d = verts[0].len();
    let lo = (0..d)
        .map(|j| verts.iter().map(|u| (u[j] * scale).min(0)).sum())
        .collect();
    let hi = (0..d)
        .map(|j| verts.iter().map(|u| (u[j] * scale).max(0)).sum())
        .collect();
    (lo, hi)
}

/// Lattice points of a simplicial cone, given by its vertices in lattice
/// coordinates, with every coefficient in `[0, scale]`, together with the
/// coefficients.
pub fn cone_points(verts: &[Vec<i64>], scale: i64) -> Vec<(Vec<i64>, Vec<Q>)> {
    let (lo, hi) = parallelepiped_box(verts, scale);
    box_points(&lo, &hi)
        .into_iter()
        .filter_map(|p| {
            let c = solve_columns(verts, &to_q(&p))?;
            c.iter()
                .all(|x| !x.is_negative() && *x <= q(scale))
                .then_some((p, c))
        })
        .collect()
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Nonzero points with all coefficients in `[0, 1)`.
pub fn small_vectors(verts: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = cone_points(verts, 1)
        .into_iter()
        .filter(|(p, c)| p.iter().any(|x| *x != 0) && c.iter().all(|x| *x < Q::one()))
        .map(|(p, _)| p)
        .collect();
    out.sort();
    out
}

/// Hilbert basis elements other than the vertices.
pub fn minimal_vectors(verts: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let pts: Vec<Vec<i64>> = cone_points(verts, 1)
        .into_iter()
        .map(|(p, _)| p)
        .filter(|p| p.iter().any(|x| *x != 0))
        .collect();
    let set: std::collections::HashSet<Vec<i64>> = pts.iter().cloned().collect();
    let mut out: Vec<Vec<i64>> = pts
        .iter()
        .filter(|p| !verts.contains(p))
        .filter(|p| !pts.iter().any(|q| q != *p && set.contains(&sub(p, q))))
        .cloned()
        .collect();
    out.sort();
    out
}

/// Interior points that are not an interior point plus a nonzero cone point.
/// Scans coefficients up to 2 although every such point has them at most 1.
pub fn minimal_internal_vectors(verts: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let pts = cone_points(verts, 2);
    let interior: Vec<&Vec<i64>> = pts
        .iter()
        .filter(|(_, c)| c.iter().all(|x| x.is_positive()))
        .map(|(p, _)| p)
        .collect();
    let all: std::collections::HashSet<&Vec<i64>> = pts.iter().map(|(p, _)| p).collect();
    let mut out: Vec<Vec<i64>> = interior
        .iter()
        .filter(|p| !interior.iter().any(|q| q != *p && all.contains(&sub(p, q))))
        .map(|p| (*p).clone())
        .collect();
    out.sort();
    out
}

/// `|det|` of integer columns via the rational solver's pivots.
pub fn abs_det(cols: &[Vec<i64>]) -> BigInt {
    let n = cols.len();
    let mut a: Vec<Vec<Q>> = (0..n)
        .map(|i| (0..n).map(|j| q(cols[j][i])).collect())
        .collect();
    let mut det = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return BigInt::zero();
        };
        a.swap(c, p);
        det *= &a[c][c];
        for r in c + 1..n {
            let f = &a[r][c] / &a[c][c];
            for j in c..n {
                let s = &f * &a[c][j];
                a[r][j] -= s;
            }
        }
    }
    det.abs().to_integer()
}

/// Whether a rational point lies in the union of the given simplicial
/// full-dimensional cones (ambient generators).
pub fn in_support(cones: &[Vec<Vec<i64>>], x: &[Q]) -> bool {
    cones
        .iter()
        .any(|gens| solve_columns(gens, x).is_some_and(|c| c.iter().all(|t| !t.is_negative())))
}

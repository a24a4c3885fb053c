//! Exact helpers shared by the integration tests, independent of the crate's linalg.

#![allow(dead_code)]

use std::collections::BTreeSet;

use toric::polytope::DelzantPolytope;
use toric::{Point, Rational};

/// Unique solution of a square system, or `None` if it is singular.
pub fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = &a[r][col] / &a[col][col];
                for c in col..n {
                    let d = &f * &a[col][c];
                    a[r][c] = &a[r][c] - &d;
                }
                let d = &f * &b[col];
                b[r] = &b[r] - &d;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

pub fn slack(normal: &[i64], offset: &Rational, x: &[Rational]) -> Rational {
    normal.iter().zip(x).map(|(&c, xi)| Rational::from(c) * xi).sum::<Rational>() + offset
}

/// Vertices of `poly ∩ {M x = c}` by trying every choice of tight facets.
pub fn slice_vertices(poly: &DelzantPolytope, m: &[Vec<i64>], c: &[Rational]) -> BTreeSet<Point> {
    let n = poly.dim();
    let k = m.len();
    let facets = poly.facets();
    let mut out = BTreeSet::new();
    for idx in combinations(facets.len(), n - k) {
        let mut a: Vec<Vec<Rational>> = Vec::new();
        let mut b: Vec<Rational> = Vec::new();
        for (row, ci) in m.iter().zip(c) {
            a.push(row.iter().map(|&x| Rational::from(x)).collect());
            b.push(ci.clone());
        }
        for &j in &idx {
            a.push(facets[j].normal.iter().map(|&x| Rational::from(x)).collect());
            b.push(-facets[j].offset.clone());
        }
        if let Some(x) = solve(a, b) {
            if facets.iter().all(|f| !slack(&f.normal, &f.offset, &x).is_negative()) {
                out.insert(x);
            }
        }
    }
    out
}

pub fn mat_vec(a: &[Vec<i64>], x: &[Rational]) -> Point {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(&c, xi)| Rational::from(c) * xi).sum())
        .collect()
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    a.iter()
        .map(|row| (0..b[0].len()).map(|j| row.iter().zip(b).map(|(x, r)| x * r[j]).sum()).collect())
        .collect()
}

/// Product of elementary row operations; its inverse is the reversed product of inverses.
pub fn unimodular_pair(n: usize, ops: &[(usize, usize, i64)]) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let id: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let mut a = id.clone();
    let mut ainv = id;
    for &(i, j, s) in ops {
        if i == j {
            continue;
        }
        // E = I + s e_ij, E^{-1} = I - s e_ij
        let mut e: Vec<Vec<i64>> = (0..n).map(|r| (0..n).map(|c| i64::from(r == c)).collect()).collect();
        e[i][j] = s;
        let mut einv = e.clone();
        einv[i][j] = -s;
        a = mat_mul(&e, &a);
        ainv = mat_mul(&ainv, &einv);
    }
    (a, ainv)
}

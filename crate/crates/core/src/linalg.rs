//! Exact linear algebra over `Q` and `Z`.
//!
//! Matrices are row-major `Vec<Vec<_>>`. The rational routines are plain
//! Gaussian elimination; the integer routines use unimodular column operations
//! (an echelon form in the Hermite style) which is all the lattice work in this
//! crate needs: integer kernels, unimodular completion and surjectivity tests.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::{Point, Rational};

pub type QMatrix = Vec<Vec<Rational>>;
pub type ZMatrix = Vec<Vec<i64>>;

pub fn to_q(row: &[i64]) -> Vec<Rational> {
    row.iter().map(|&v| Rational::from_integer(v)).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `<x, xi>` for an integer vector `xi`.
pub fn dot_int(x: &[Rational], xi: &[i64]) -> Rational {
    let mut acc = Rational::zero();
    for (c, &k) in x.iter().zip(xi) {
        if k != 0 {
            acc += c * Rational::from_integer(k);
        }
    }
    acc
}

pub fn mat_vec_int(m: &[Vec<i64>], x: &[Rational]) -> Vec<Rational> {
    m.iter().map(|row| dot_int(x, row)).collect()
}

pub fn mat_mul_int(a: &[Vec<i64>], b: &[Vec<i64>]) -> ZMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn transpose<T: Clone>(a: &[Vec<T>]) -> Vec<Vec<T>> {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len())
        .map(|j| a.iter().map(|r| r[j].clone()).collect())
        .collect()
}

pub fn identity_int(n: usize) -> ZMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

/// Reduced row echelon form; returns the reduced rows and the pivot columns.
pub fn rref(rows: &[Vec<Rational>], ncols: usize) -> (QMatrix, Vec<usize>) {
    let mut a: QMatrix = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..ncols {
                    let d = &f * &a[r][j];
                    a[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

pub fn rank_int(rows: &[Vec<i64>], ncols: usize) -> usize {
    let q: QMatrix = rows.iter().map(|r| to_q(r)).collect();
    rank(&q, ncols)
}

pub fn determinant(a: &[Vec<Rational>]) -> Rational {
    let n = a.len();
    let mut m: QMatrix = a.to_vec();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        let inv = m[c][c].recip();
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            for j in c..n {
                let d = &f * &m[c][j];
                m[i][j] -= d;
            }
        }
    }
    det
}

pub fn determinant_int(a: &[Vec<i64>]) -> BigInt {
    let q: QMatrix = a.iter().map(|r| to_q(r)).collect();
    determinant(&q).numer().clone()
}

/// Unique solution of the square system `a x = b`, if `a` is nonsingular.
pub fn solve_square(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let aug: QMatrix = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let (red, piv) = rref(&aug, n + 1);
    if piv.len() != n || piv.iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(red.iter().map(|r| r[n].clone()).collect())
}

pub fn inverse(a: &[Vec<Rational>]) -> Option<QMatrix> {
    let n = a.len();
    let aug: QMatrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            r
        })
        .collect();
    let (red, piv) = rref(&aug, 2 * n);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(red.iter().map(|r| r[n..].to_vec()).collect())
}

/// Inverse of a unimodular integer matrix; `None` if `|det| != 1`.
pub fn inverse_unimodular(a: &[Vec<i64>]) -> Option<ZMatrix> {
    if determinant_int(a).abs() != BigInt::one() {
        return None;
    }
    let q: QMatrix = a.iter().map(|r| to_q(r)).collect();
    let inv = inverse(&q)?;
    inv.iter()
        .map(|r| r.iter().map(|v| v.to_i64()).collect())
        .collect()
}

/// General solution of `a x = b`: a particular solution plus a basis of the
/// homogeneous solutions. `None` if inconsistent.
pub fn affine_solve(a: &[Vec<Rational>], b: &[Rational], ncols: usize) -> Option<(Point, QMatrix)> {
    let aug: QMatrix = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let (red, piv) = rref(&aug, ncols + 1);
    if piv.contains(&ncols) {
        return None;
    }
    let mut x0 = vec![Rational::zero(); ncols];
    for (i, &c) in piv.iter().enumerate() {
        x0[c] = red[i][ncols].clone();
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !piv.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (i, &c) in piv.iter().enumerate() {
                v[c] = -red[i][f].clone();
            }
            v
        })
        .collect();
    Some((x0, basis))
}

/// Visits every `k`-subset of `0..n` in lexicographic order.
pub fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// An affine inequality `<normal, u> + offset >= 0` with rational data.
#[derive(Clone, Debug)]
pub struct Halfspace {
    pub normal: Vec<Rational>,
    pub offset: Rational,
}

impl Halfspace {
    pub fn slack(&self, u: &[Rational]) -> Rational {
        dot(&self.normal, u) + &self.offset
    }
}

/// All vertices of `{u in Q^dim : h.slack(u) >= 0 for all h}` by solving every
/// `dim`-subset of the inequalities as equalities. Sorted and deduplicated.
///
/// Only meaningful for pointed polyhedra (rank `dim` constraint matrix).
pub fn enumerate_vertices(hs: &[Halfspace], dim: usize) -> Vec<Point> {
    if dim == 0 {
        return if hs.iter().all(|h| !h.offset.is_negative()) {
            vec![Vec::new()]
        } else {
            Vec::new()
        };
    }
    let mut out: Vec<Point> = Vec::new();
    for_each_combination(hs.len(), dim, |idx| {
        let a: QMatrix = idx.iter().map(|&i| hs[i].normal.clone()).collect();
        let b: Vec<Rational> = idx.iter().map(|&i| -hs[i].offset.clone()).collect();
        if let Some(x) = solve_square(&a, &b) {
            if hs.iter().all(|h| !h.slack(&x).is_negative()) {
                out.push(x);
            }
        }
    });
    out.sort();
    out.dedup();
    out
}

fn big_cols(a: &[Vec<i64>], ncols: usize) -> Vec<Vec<BigInt>> {
    (0..ncols)
        .map(|j| a.iter().map(|r| BigInt::from(r[j])).collect())
        .collect()
}

/// Result of unimodular column reduction `a * v = e`.
struct ColumnEchelon {
    /// Columns of the echelon form.
    echelon_cols: Vec<Vec<BigInt>>,
    /// Columns of the unimodular transform `v`.
    transform_cols: Vec<Vec<BigInt>>,
    rank: usize,
}

/// Column-style echelon form via integer column operations. The first `rank`
/// columns of the result are nonzero with strictly increasing pivot rows and
/// positive pivots; the remaining columns vanish.
fn column_echelon(a: &[Vec<i64>], ncols: usize) -> ColumnEchelon {
    let m = a.len();
    let mut cols = big_cols(a, ncols);
    let mut trans: Vec<Vec<BigInt>> = (0..ncols)
        .map(|j| {
            (0..ncols)
                .map(|i| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut p = 0;
    for row in 0..m {
        if p == ncols {
            break;
        }
        loop {
            // smallest nonzero |entry| among columns p.. in this row
            let best = (p..ncols)
                .filter(|&j| !cols[j][row].is_zero())
                .min_by(|&x, &y| cols[x][row].abs().cmp(&cols[y][row].abs()));
            let Some(b) = best else { break };
            cols.swap(p, b);
            trans.swap(p, b);
            let mut done = true;
            for j in p + 1..ncols {
                if cols[j][row].is_zero() {
                    continue;
                }
                let q = cols[j][row].div_floor(&cols[p][row]);
                for i in 0..m {
                    let d = &q * &cols[p][i];
                    cols[j][i] -= d;
                }
                for i in 0..ncols {
                    let d = &q * &trans[p][i];
                    trans[j][i] -= d;
                }
                if !cols[j][row].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if cols[p][row].is_zero() {
            continue;
        }
        if cols[p][row].is_negative() {
            for v in cols[p].iter_mut() {
                *v = -v.clone();
            }
            for v in trans[p].iter_mut() {
                *v = -v.clone();
            }
        }
        p += 1;
    }
    ColumnEchelon {
        echelon_cols: cols,
        transform_cols: trans,
        rank: p,
    }
}

fn to_i64_vec(v: &[BigInt]) -> Vec<i64> {
    v.iter()
        .map(|x| x.to_i64().expect("lattice entry exceeds i64"))
        .collect()
}

/// A basis of the integer lattice `{v in Z^ncols : a v = 0}`.
pub fn integer_kernel(a: &[Vec<i64>], ncols: usize) -> ZMatrix {
    let ech = column_echelon(a, ncols);
    let mut basis: ZMatrix = ech.transform_cols[ech.rank..]
        .iter()
        .map(|c| to_i64_vec(c))
        .collect();
    for v in basis.iter_mut() {
        size_reduce(v);
    }
    basis.sort();
    basis
}

// Normalise sign so the first nonzero entry is positive.
fn size_reduce(v: &mut [i64]) {
    if let Some(first) = v.iter().find(|x| **x != 0) {
        if *first < 0 {
            for x in v.iter_mut() {
                *x = -*x;
            }
        }
    }
}

/// How the lattice image `a * L` sits inside `Z^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImageLattice {
    /// `a * L = Z^k`.
    Full,
    /// `a * L` has rank below `k`.
    RankDeficient,
    /// Full rank but finite index greater than one.
    FiniteIndex,
}

/// Classifies the image of the lattice spanned by `basis` (vectors in `Z^n`)
/// under the integer matrix `a` (`k x n`).
pub fn image_lattice(a: &[Vec<i64>], basis: &[Vec<i64>]) -> ImageLattice {
    let k = a.len();
    if k == 0 {
        return ImageLattice::Full;
    }
    // columns of a*B
    let img: ZMatrix = a
        .iter()
        .map(|row| {
            basis
                .iter()
                .map(|b| row.iter().zip(b).map(|(x, y)| x * y).sum())
                .collect()
        })
        .collect();
    let ech = column_echelon(&img, basis.len());
    if ech.rank < k {
        return ImageLattice::RankDeficient;
    }
    // pivots of a rank-k echelon in k rows sit on the diagonal of the first k columns
    let mut index = BigInt::one();
    for j in 0..k {
        let piv = ech.echelon_cols[j]
            .iter()
            .find(|v| !v.is_zero())
            .cloned()
            .unwrap_or_default();
        index *= piv.abs();
    }
    if index.is_one() {
        ImageLattice::Full
    } else {
        ImageLattice::FiniteIndex
    }
}

/// Rows `p` such that `[m; p]` is unimodular, obtained deterministically from the
/// column echelon form of `m`. `None` if the rows of `m` do not extend to a
/// basis of `Z^n` (dependent or spanning a non-saturated lattice).
pub fn unimodular_completion(m: &[Vec<i64>], n: usize) -> Option<ZMatrix> {
    let k = m.len();
    let ech = column_echelon(m, n);
    if ech.rank != k {
        return None;
    }
    for j in 0..k {
        if !ech.echelon_cols[j][j].is_one() {
            return None;
        }
    }
    // v has columns transform_cols; p = rows k.. of v^{-1}
    let v: ZMatrix = transpose(
        &ech.transform_cols
            .iter()
            .map(|c| to_i64_vec(c))
            .collect::<Vec<_>>(),
    );
    let vinv = inverse_unimodular(&v)?;
    let p: ZMatrix = vinv[k..].to_vec();
    let mut full = m.to_vec();
    full.extend(p.iter().cloned());
    debug_assert_eq!(determinant_int(&full).abs(), BigInt::one());
    Some(p)
}

pub fn primitive_part(v: &[i64]) -> (Vec<i64>, i64) {
    let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
    if g == 0 {
        return (v.to_vec(), 0);
    }
    (v.iter().map(|x| x / g).collect(), g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn combinations_are_complete() {
        let mut seen = Vec::new();
        for_each_combination(5, 3, |c| seen.push(c.to_vec()));
        assert_eq!(seen.len(), 10);
        assert_eq!(seen[0], vec![0, 1, 2]);
        assert_eq!(seen[9], vec![2, 3, 4]);
        let mut count = 0;
        for_each_combination(4, 0, |_| count += 1);
        assert_eq!(count, 1);
        for_each_combination(2, 3, |_| panic!("no subsets"));
    }

    #[test]
    fn determinant_and_inverse() {
        let a = vec![vec![rat(2, 1), rat(1, 1)], vec![rat(1, 1), rat(1, 1)]];
        assert_eq!(determinant(&a), rat(1, 1));
        let inv = inverse(&a).unwrap();
        assert_eq!(
            inv,
            vec![vec![rat(1, 1), rat(-1, 1)], vec![rat(-1, 1), rat(2, 1)]]
        );
        assert!(inverse(&[vec![rat(1, 1), rat(2, 1)], vec![rat(2, 1), rat(4, 1)]]).is_none());
    }

    #[test]
    fn affine_solution_space() {
        let a = vec![vec![rat(1, 1), rat(1, 1), rat(0, 1)]];
        let (x0, basis) = affine_solve(&a, &[rat(1, 1)], 3).unwrap();
        assert_eq!(dot(&a[0], &x0), rat(1, 1));
        assert_eq!(basis.len(), 2);
        for b in &basis {
            assert!(dot(&a[0], b).is_zero());
        }
        assert!(affine_solve(&[vec![rat(0, 1)]], &[rat(1, 1)], 1).is_none());
    }

    #[test]
    fn integer_kernel_is_saturated() {
        // x + 2y + 3z = 0
        let k = integer_kernel(&[vec![1, 2, 3]], 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(v[0] + 2 * v[1] + 3 * v[2], 0);
        }
        // the kernel basis together with any vector w with <w,(1,2,3)> = 1 is unimodular
        let mut m = k.clone();
        m.push(vec![1, 0, 0]);
        assert_eq!(determinant_int(&m).abs(), BigInt::one());
    }

    #[test]
    fn image_lattice_classification() {
        let basis = identity_int(2);
        assert_eq!(image_lattice(&[vec![1, 1]], &basis), ImageLattice::Full);
        assert_eq!(
            image_lattice(&[vec![2, 4]], &basis),
            ImageLattice::FiniteIndex
        );
        assert_eq!(
            image_lattice(&[vec![0, 1]], &[vec![1, 0]]),
            ImageLattice::RankDeficient
        );
        assert_eq!(
            image_lattice(&[vec![1, 0], vec![0, 1]], &[vec![1, 1]]),
            ImageLattice::RankDeficient
        );
    }

    #[test]
    fn completion_is_unimodular() {
        let m = vec![vec![0, 1, -1, 0], vec![1, 1, 0, -1]];
        let p = unimodular_completion(&m, 4).unwrap();
        assert_eq!(p.len(), 2);
        let mut full = m.clone();
        full.extend(p);
        assert_eq!(determinant_int(&full).abs(), BigInt::one());
        assert!(unimodular_completion(&[vec![2, 0]], 2).is_none());
        assert!(unimodular_completion(&[vec![1, 1], vec![2, 2]], 2).is_none());
    }

    #[test]
    fn vertices_of_unit_square() {
        let hs: Vec<Halfspace> = [
            (vec![1, 0], 0),
            (vec![0, 1], 0),
            (vec![-1, 0], 1),
            (vec![0, -1], 1),
        ]
        .iter()
        .map(|(n, a)| Halfspace {
            normal: to_q(n),
            offset: Rational::from_integer(*a),
        })
        .collect();
        let v = enumerate_vertices(&hs, 2);
        assert_eq!(v.len(), 4);
        assert_eq!(v[0], vec![rat(0, 1), rat(0, 1)]);
        assert_eq!(v[3], vec![rat(1, 1), rat(1, 1)]);
    }
}

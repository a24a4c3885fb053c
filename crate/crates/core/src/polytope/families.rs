//! The polytope families used throughout the crate.

use super::{DelzantPolytope, Facet};
use crate::error::{Error, Result};
use crate::rational::Rational;

fn unit(n: usize, i: usize, value: i64) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = value;
    v
}

fn require(cond: bool, param: &str, constraint: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::out_of_range(param, constraint))
    }
}

fn require_dim(n: usize) -> Result<()> {
    require(n >= 1, "n", "n >= 1")
}

/// `{x_i >= 0, -sum x_i + scale >= 0}`: the moment simplex of CP^n.
pub fn simplex_cpn(n: usize, scale: Rational) -> Result<DelzantPolytope> {
    require_dim(n)?;
    require(scale.is_positive(), "scale", "scale > 0")?;
    let mut facets: Vec<Facet> = (0..n)
        .map(|i| Facet::new(unit(n, i, 1), Rational::zero()))
        .collect();
    facets.push(Facet::new(vec![-1; n], scale.clone()));
    DelzantPolytope::new(n, facets, format!("CP^{n}(scale {scale})"))
}

/// The blowup of the simplex along the face `{x_{k+1} = ... = x_n = 0}`:
/// adds `sum_{i>k} x_i - lambda >= 0`.
pub fn blowup_face(n: usize, k: usize, lambda: Rational) -> Result<DelzantPolytope> {
    require(n >= 2, "n", "n >= 2")?;
    require(k + 2 <= n, "k", "0 <= k <= n-2")?;
    require(lambda.is_positive(), "lambda", "0 < lambda")?;
    require(lambda < Rational::one(), "lambda", "lambda < 1")?;
    let mut facets: Vec<Facet> = (0..n)
        .map(|i| Facet::new(unit(n, i, 1), Rational::zero()))
        .collect();
    facets.push(Facet::new(vec![-1; n], Rational::one()));
    let blow: Vec<i64> = (0..n).map(|i| i64::from(i >= k)).collect();
    facets.push(Facet::new(blow, -lambda.clone()));
    DelzantPolytope::new(n, facets, format!("X^{n}_{k}(lambda {lambda})"))
}

/// The simplex with a small blowup at the origin (size `(n-1) alpha`) and a
/// large blowup along `{x_1 = 0, x_2 + ... + x_n = 1}` (cut at `n alpha`).
pub fn double_blowup(n: usize, alpha: Rational) -> Result<DelzantPolytope> {
    require(n >= 2, "n", "n >= 2")?;
    require(alpha.is_positive(), "alpha", "0 < alpha")?;
    require(
        alpha < Rational::new(1, n as i64 + 1),
        "alpha",
        "alpha < 1/(n+1)",
    )?;
    let nn = n as i64;
    let mut facets: Vec<Facet> = (0..n)
        .map(|i| Facet::new(unit(n, i, 1), Rational::zero()))
        .collect();
    facets.push(Facet::new(vec![-1; n], Rational::one()));
    facets.push(Facet::new(
        vec![1; n],
        -(Rational::from_integer(nn - 1) * &alpha),
    ));
    let mut big = vec![-1; n];
    big[0] = 0;
    facets.push(Facet::new(big, Rational::from_integer(nn) * &alpha));
    DelzantPolytope::new(n, facets, format!("Y^{n}(alpha {alpha})"))
}

/// The Hirzebruch polygon `H_k`: `x_1 >= 0, 0 <= x_2 <= height,
/// -x_1 - k x_2 + base >= 0`.
pub fn hirzebruch(k: u32, height: Rational, base: Rational) -> Result<DelzantPolytope> {
    require(height.is_positive(), "height", "height > 0")?;
    let kk = Rational::from_integer(k as i64);
    require(base > &kk * &height, "base", "base > k * height")?;
    let facets = vec![
        Facet::new(vec![1, 0], Rational::zero()),
        Facet::new(vec![0, 1], Rational::zero()),
        Facet::new(vec![0, -1], height.clone()),
        Facet::new(vec![-1, -(k as i64)], base.clone()),
    ];
    DelzantPolytope::new(2, facets, format!("H_{k}(height {height}, base {base})"))
}

/// `H_k` with height 1 and base `k + 1`, so the top edge has length 1.
pub fn hirzebruch_standard(k: u32) -> Result<DelzantPolytope> {
    hirzebruch(k, Rational::one(), Rational::from_integer(k as i64 + 1))
}

/// Checked version of [`shifted_x0_blowup_unchecked`]:
/// requires `0 < alpha < 1/(n+1)`, `0 < lambda < (1-(n+1)alpha)/2` and `c >= 1`.
pub fn shifted_x0_blowup(
    n: usize,
    alpha: Rational,
    lambda: Rational,
    c: Rational,
) -> Result<DelzantPolytope> {
    require(n >= 2, "n", "n >= 2")?;
    require(alpha.is_positive(), "alpha", "0 < alpha")?;
    let n1 = Rational::from_integer(n as i64 + 1);
    require(alpha < n1.recip(), "alpha", "alpha < 1/(n+1)")?;
    require(lambda.is_positive(), "lambda", "0 < lambda")?;
    let bound = (Rational::one() - &n1 * &alpha) / Rational::from_integer(2);
    require(lambda < bound, "lambda", "lambda < (1-(n+1)alpha)/2")?;
    require(c >= Rational::one(), "C", "C >= 1")?;
    shifted_x0_blowup_unchecked(n, alpha, lambda, c)
}

/// The small blowup of a large simplex with `x_2..x_n` shifted down by
/// `lambda`: `x_1 >= 0, x_j + lambda >= 0 (j >= 2), -sum x + C >= 0,
/// sum x - (n-1) alpha >= 0`. Only validity as a polytope is checked.
pub fn shifted_x0_blowup_unchecked(
    n: usize,
    alpha: Rational,
    lambda: Rational,
    c: Rational,
) -> Result<DelzantPolytope> {
    require(n >= 2, "n", "n >= 2")?;
    let mut facets = vec![Facet::new(unit(n, 0, 1), Rational::zero())];
    for j in 1..n {
        facets.push(Facet::new(unit(n, j, 1), lambda.clone()));
    }
    facets.push(Facet::new(vec![-1; n], c.clone()));
    facets.push(Facet::new(
        vec![1; n],
        -(Rational::from_integer(n as i64 - 1) * &alpha),
    ));
    DelzantPolytope::new(
        n,
        facets,
        format!("X^{n}_0 shifted(alpha {alpha}, lambda {lambda}, C {c})"),
    )
}

/// The segment `[lo, hi]`, i.e. CP^1 of length `hi - lo`.
pub fn interval(lo: Rational, hi: Rational) -> Result<DelzantPolytope> {
    require(lo < hi, "interval", "lo < hi")?;
    let facets = vec![
        Facet::new(vec![1], -lo.clone()),
        Facet::new(vec![-1], hi.clone()),
    ];
    DelzantPolytope::new(1, facets, format!("[{lo}, {hi}]"))
}

/// Cartesian product; coordinates of `a` come first.
pub fn product(a: &DelzantPolytope, b: &DelzantPolytope) -> DelzantPolytope {
    let (n1, n2) = (a.dim(), b.dim());
    let mut facets = Vec::with_capacity(a.facets().len() + b.facets().len());
    for f in a.facets() {
        let mut normal = f.normal.clone();
        normal.extend(std::iter::repeat_n(0, n2));
        facets.push(Facet::new(normal, f.offset.clone()));
    }
    for f in b.facets() {
        let mut normal = vec![0; n1];
        normal.extend(f.normal.iter().copied());
        facets.push(Facet::new(normal, f.offset.clone()));
    }
    DelzantPolytope::new(n1 + n2, facets, format!("{} x {}", a.label(), b.label()))
        .expect("product of valid polytopes is valid")
}

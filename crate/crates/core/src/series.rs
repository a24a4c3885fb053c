//! Finite-support generalized Laurent series in `s`, polynomials over them, and
//! the Newton-polygon solver for the leading exponents of roots.
//!
//! Sign convention: hull slopes are stored as computed from the points
//! `(i, min exponent of coeff_i)`; a root class reports `v = -slope`, which is
//! the smallest exponent of the root's expansion, i.e. `v = -ν(root)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// `ν(x) = -min support`; the zero series has valuation `-∞`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    NegInfinity,
    Finite(Rational),
}

impl Valuation {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Valuation::NegInfinity => None,
            Valuation::Finite(r) => Some(r),
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::NegInfinity,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::NegInfinity => write!(f, "-inf"),
            Valuation::Finite(r) => write!(f, "{r}"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::NegInfinity => serializer.serialize_str("-inf"),
            Valuation::Finite(r) => r.serialize(serializer),
        }
    }
}

/// `Σ c_λ s^λ` over a finite set of rational exponents; no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SPoly {
    terms: BTreeMap<Rational, Rational>,
}

impl SPoly {
    pub fn zero() -> Self {
        SPoly::default()
    }

    pub fn one() -> Self {
        SPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        SPoly::monomial(Rational::zero(), c)
    }

    /// `c s^exp`.
    pub fn monomial(exp: Rational, coeff: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        SPoly { terms }
    }

    /// `s^exp`.
    pub fn s_pow(exp: Rational) -> Self {
        SPoly::monomial(exp, Rational::one())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Rational, Rational)>) -> Self {
        let mut out = SPoly::zero();
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    fn add_term(&mut self, exp: Rational, coeff: Rational) {
        let entry = self.terms.entry(exp).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exponent(&self) -> Option<&Rational> {
        self.terms.keys().next()
    }

    pub fn valuation(&self) -> Valuation {
        match self.min_exponent() {
            None => Valuation::NegInfinity,
            Some(m) => Valuation::Finite(-m),
        }
    }

    pub fn scale(&self, c: &Rational) -> SPoly {
        SPoly::from_terms(self.terms.iter().map(|(e, x)| (e.clone(), x * c)))
    }

    /// Multiplies by `s^exp`.
    pub fn shift(&self, exp: &Rational) -> SPoly {
        SPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e + exp, c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> SPoly {
        let mut out = SPoly::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Value at the positive real `s = exp(ln_s)`.
    pub fn eval_ln(&self, ln_s: f64) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c.to_f64() * (e.to_f64() * ln_s).exp())
            .sum()
    }

    /// Least common denominator of the exponents.
    pub fn exponent_denominator(&self) -> num_bigint::BigInt {
        self.terms
            .keys()
            .fold(num_bigint::BigInt::from(1), |acc, e| {
                crate::rational::lcm_big(&acc, e.denom())
            })
    }
}

impl Add<&SPoly> for &SPoly {
    type Output = SPoly;

    fn add(self, rhs: &SPoly) -> SPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub<&SPoly> for &SPoly {
    type Output = SPoly;

    fn sub(self, rhs: &SPoly) -> SPoly {
        self + &(-rhs)
    }
}

impl Mul<&SPoly> for &SPoly {
    type Output = SPoly;

    fn mul(self, rhs: &SPoly) -> SPoly {
        let mut out = SPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &SPoly {
    type Output = SPoly;

    fn neg(self) -> SPoly {
        SPoly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                &self + &rhs
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                &self - &rhs
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                &self * &rhs
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}

owned_ops!(SPoly);

impl fmt::Display for SPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let (sign, mag) = if c.is_negative() {
                ("-", c.abs())
            } else {
                ("+", c.clone())
            };
            if i > 0 {
                write!(f, " {sign} ")?;
            } else if sign == "-" {
                write!(f, "-")?;
            }
            match (mag == Rational::one(), e.is_zero()) {
                (_, true) => write!(f, "{mag}")?,
                (true, false) => write!(f, "s^({e})")?,
                (false, false) => write!(f, "{mag}*s^({e})")?,
            }
        }
        Ok(())
    }
}

impl Serialize for SPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.terms.iter())
    }
}

impl<'de> Deserialize<'de> for SPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs: Vec<(Rational, Rational)> = Vec::deserialize(deserializer)?;
        Ok(SPoly::from_terms(pairs))
    }
}

/// Laurent polynomial in `z` with [`SPoly`] coefficients; no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct ZPoly {
    coeffs: BTreeMap<i64, SPoly>,
}

impl<'de> Deserialize<'de> for ZPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let map: BTreeMap<i64, SPoly> = BTreeMap::deserialize(deserializer)?;
        Ok(ZPoly::from_terms(map))
    }
}

impl ZPoly {
    pub fn zero() -> Self {
        ZPoly::default()
    }

    /// `c z^deg`.
    pub fn term(deg: i64, c: SPoly) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(deg, c);
        }
        ZPoly { coeffs }
    }

    pub fn constant(c: SPoly) -> Self {
        ZPoly::term(0, c)
    }

    pub fn z() -> Self {
        ZPoly::term(1, SPoly::one())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, SPoly)>) -> Self {
        let mut out = ZPoly::zero();
        for (d, c) in terms {
            out.add_term(d, &c);
        }
        out
    }

    fn add_term(&mut self, deg: i64, c: &SPoly) {
        let sum = self
            .coeffs
            .get(&deg)
            .map(|x| x + c)
            .unwrap_or_else(|| c.clone());
        if sum.is_zero() {
            self.coeffs.remove(&deg);
        } else {
            self.coeffs.insert(deg, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, deg: i64) -> Option<&SPoly> {
        self.coeffs.get(&deg)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i64, &SPoly)> {
        self.coeffs.iter().map(|(d, c)| (*d, c))
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// `z^{-min degree} P`, so the lowest term is a nonzero constant.
    pub fn normalize(&self) -> ZPoly {
        let m = self.min_degree().unwrap_or(0);
        ZPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|(d, c)| (d - m, c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> ZPoly {
        let mut out = ZPoly::constant(SPoly::one());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn scale(&self, c: &SPoly) -> ZPoly {
        ZPoly::from_terms(self.coeffs.iter().map(|(d, x)| (*d, x * c)))
    }

    /// Least common denominator of all exponents of `s`.
    pub fn exponent_denominator(&self) -> num_bigint::BigInt {
        self.coeffs
            .values()
            .fold(num_bigint::BigInt::from(1), |acc, c| {
                crate::rational::lcm_big(&acc, &c.exponent_denominator())
            })
    }

    /// Substitutes `z -> s^γ z`; every root class moves from `v` to `v - γ`.
    pub fn substitute_scaled(&self, gamma: &Rational) -> ZPoly {
        ZPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|(d, c)| (*d, c.shift(&(gamma * Rational::from_integer(*d)))))
                .collect(),
        }
    }

    /// Coefficients of the normalized polynomial at `s = exp(ln_s)`, indexed by degree.
    pub fn eval_coeffs_ln(&self, ln_s: f64) -> Vec<f64> {
        let p = self.normalize();
        let deg = p.degree().unwrap_or(0) as usize;
        let mut out = vec![0.0; deg + 1];
        for (d, c) in &p.coeffs {
            out[*d as usize] = c.eval_ln(ln_s);
        }
        out
    }
}

impl Add<&ZPoly> for &ZPoly {
    type Output = ZPoly;

    fn add(self, rhs: &ZPoly) -> ZPoly {
        let mut out = self.clone();
        for (d, c) in &rhs.coeffs {
            out.add_term(*d, c);
        }
        out
    }
}

impl Sub<&ZPoly> for &ZPoly {
    type Output = ZPoly;

    fn sub(self, rhs: &ZPoly) -> ZPoly {
        self + &(-rhs)
    }
}

impl Mul<&ZPoly> for &ZPoly {
    type Output = ZPoly;

    fn mul(self, rhs: &ZPoly) -> ZPoly {
        let mut out = ZPoly::zero();
        for (d1, c1) in &self.coeffs {
            for (d2, c2) in &rhs.coeffs {
                out.add_term(d1 + d2, &(c1 * c2));
            }
        }
        out
    }
}

impl Neg for &ZPoly {
    type Output = ZPoly;

    fn neg(self) -> ZPoly {
        ZPoly {
            coeffs: self.coeffs.iter().map(|(d, c)| (*d, -c)).collect(),
        }
    }
}

owned_ops!(ZPoly);

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(d, c)| match d {
                0 => format!("({c})"),
                1 => format!("({c})*z"),
                _ => format!("({c})*z^{d}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HullEdge {
    pub from: (i64, Rational),
    pub to: (i64, Rational),
    pub length: i64,
    pub slope: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NewtonPolygon {
    /// `(degree, min exponent)` for every nonzero coefficient of the normalized polynomial.
    pub points: Vec<(i64, Rational)>,
    pub hull: Vec<HullEdge>,
}

impl NewtonPolygon {
    pub fn degree_span(&self) -> i64 {
        self.hull.iter().map(|e| e.length).sum()
    }
}

fn slope(a: &(i64, Rational), b: &(i64, Rational)) -> Rational {
    (&b.1 - &a.1) / Rational::from_integer(b.0 - a.0)
}

/// Lower convex hull of `{(i, min exponent of coeff_i)}`; slopes strictly increase.
pub fn newton_polygon(p: &ZPoly) -> Result<NewtonPolygon> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let q = p.normalize();
    let points: Vec<(i64, Rational)> = q
        .coeffs
        .iter()
        .map(|(d, c)| (*d, c.min_exponent().expect("nonzero").clone()))
        .collect();
    let mut hull: Vec<(i64, Rational)> = Vec::new();
    for pt in &points {
        while hull.len() >= 2
            && slope(&hull[hull.len() - 2], &hull[hull.len() - 1])
                >= slope(&hull[hull.len() - 1], pt)
        {
            hull.pop();
        }
        hull.push(pt.clone());
    }
    let edges = hull
        .windows(2)
        .map(|w| HullEdge {
            from: w[0].clone(),
            to: w[1].clone(),
            length: w[1].0 - w[0].0,
            slope: slope(&w[0], &w[1]),
        })
        .collect();
    Ok(NewtonPolygon {
        points,
        hull: edges,
    })
}

/// Leading exponent `v` of a class of nonzero roots and the number of roots in it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct RootClass {
    pub value: Rational,
    pub multiplicity: usize,
}

/// Root classes in hull order (decreasing `v`).
pub fn root_valuations(p: &ZPoly) -> Result<Vec<RootClass>> {
    let np = newton_polygon(p)?;
    Ok(np
        .hull
        .iter()
        .map(|e| RootClass {
            value: -&e.slope,
            multiplicity: e.length as usize,
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NumericClass {
    pub value: f64,
    pub rational: Rational,
    pub multiplicity: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleOptions {
    pub tolerance: f64,
    pub max_denominator: i64,
    pub max_iterations: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            tolerance: 1e-3,
            max_denominator: 100,
            max_iterations: 2000,
        }
    }
}

fn horner(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Starting circles from the upper hull of `(i, ln|a_i|)`.
fn initial_guesses(coeffs: &[f64]) -> Vec<Complex64> {
    let pts: Vec<(f64, f64)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0.0)
        .map(|(i, c)| (i as f64, c.abs().ln()))
        .collect();
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let left = (b.1 - a.1) / (b.0 - a.0);
            let right = (pt.1 - b.1) / (pt.0 - b.0);
            if left <= right {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut out = Vec::new();
    for (e, w) in hull.windows(2).enumerate() {
        let m = (w[1].0 - w[0].0) as usize;
        let radius = ((w[0].1 - w[1].1) / (w[1].0 - w[0].0)).exp();
        for j in 0..m {
            let theta = std::f64::consts::TAU * j as f64 / m as f64 + 0.4 + 0.7 * e as f64;
            out.push(Complex64::from_polar(radius, theta));
        }
    }
    out
}

/// All complex roots by simultaneous Aberth iteration.
pub(crate) fn aberth_roots(coeffs: &[f64], max_iterations: usize) -> Option<Vec<Complex64>> {
    let mut z = initial_guesses(coeffs);
    let n = z.len();
    for _ in 0..max_iterations {
        let mut converged = true;
        for k in 0..n {
            let (p, dp) = horner(coeffs, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let sum: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            z[k] -= w;
            if !(w.norm() <= 1e-14 * z[k].norm()) {
                converged = false;
            }
        }
        if converged {
            return Some(z);
        }
    }
    None
}

/// Smallest-denominator rational within `tol` of `x`.
fn simplest_rational(x: f64, tol: f64, max_denom: i64) -> Option<Rational> {
    (1..=max_denom).find_map(|q| {
        let p = (x * q as f64).round();
        ((p / q as f64 - x).abs() <= tol).then(|| Rational::new(p as i64, q))
    })
}

/// Estimates root classes numerically. With `d` the common denominator of the
/// exponents, `s` is specialised to `eps1^d` and `eps2^d`, and
/// `v ≈ (ln|r(s1)| - ln|r(s2)|) / (ln s1 - ln s2)`, pairing roots by magnitude.
pub fn numeric_valuation_oracle(
    p: &ZPoly,
    eps1: f64,
    eps2: f64,
    opts: OracleOptions,
) -> Result<Vec<NumericClass>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !(eps1 > 0.0 && eps2 > 0.0 && eps1 < 1.0 && eps2 < 1.0 && eps1 != eps2) {
        return Err(Error::IllConditioned(
            "sample points must be distinct and in (0, 1)".into(),
        ));
    }
    let d = p
        .exponent_denominator()
        .to_string()
        .parse::<f64>()
        .unwrap_or(f64::INFINITY);
    let (ln1, ln2) = (d * eps1.ln(), d * eps2.ln());
    let roots_at = |ln_s: f64| -> Result<Vec<f64>> {
        let coeffs = p.eval_coeffs_ln(ln_s);
        let degenerate = |c: f64| !c.is_normal();
        if coeffs.iter().any(|c| !c.is_finite())
            || degenerate(coeffs[0])
            || degenerate(*coeffs.last().unwrap())
        {
            return Err(Error::IllConditioned(format!(
                "coefficients not representable at ln s = {ln_s}"
            )));
        }
        let roots = aberth_roots(&coeffs, opts.max_iterations).ok_or_else(|| {
            Error::IllConditioned(format!("root iteration did not converge at ln s = {ln_s}"))
        })?;
        let mut mags: Vec<f64> = roots.iter().map(|r| r.norm().ln()).collect();
        if mags.iter().any(|m| !m.is_finite()) {
            return Err(Error::IllConditioned("root magnitude underflow".into()));
        }
        mags.sort_by(f64::total_cmp);
        Ok(mags)
    };
    let (a, b) = (roots_at(ln1)?, roots_at(ln2)?);
    let denom = ln1 - ln2;
    let mut est: Vec<f64> = a.iter().zip(&b).map(|(x, y)| (x - y) / denom).collect();
    est.sort_by(f64::total_cmp);
    let tol = opts.tolerance;
    let mut clusters: Vec<Vec<f64>> = Vec::new();
    for v in est {
        match clusters.last_mut() {
            Some(c) if v - c.last().unwrap() <= tol => c.push(v),
            _ => clusters.push(vec![v]),
        }
    }
    let mut out: Vec<NumericClass> = Vec::new();
    for c in clusters.into_iter().rev() {
        let spread = c.last().unwrap() - c[0];
        if spread > tol {
            return Err(Error::IllConditioned(format!(
                "cluster spread {spread:e} exceeds tolerance"
            )));
        }
        let mean = c.iter().sum::<f64>() / c.len() as f64;
        let r = simplest_rational(mean, tol, opts.max_denominator)
            .ok_or_else(|| Error::IllConditioned(format!("no small rational near {mean}")))?;
        if out.iter().any(|o| o.rational == r) {
            return Err(Error::IllConditioned(format!("two clusters round to {r}")));
        }
        out.push(NumericClass {
            value: mean,
            rational: r,
            multiplicity: c.len(),
        });
    }
    Ok(out)
}

//! Landau–Ginzburg superpotentials and the leading exponents of their critical points.
//!
//! Only the symmetric reductions that collapse the critical system to a single
//! univariate polynomial are solved: the blowup family `X_k` and projective
//! spaces. Products are handled by concatenation.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::polytope::DelzantPolytope;
use crate::rational::{Point, Rational};
use crate::series::{root_valuations, SPoly, ZPoly};

/// The monomial `s^offset y^exponent`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Monomial {
    pub offset: Rational,
    pub exponent: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Superpotential {
    pub terms: Vec<Monomial>,
}

/// One term per facet, in facet order.
pub fn superpotential(poly: &DelzantPolytope) -> Superpotential {
    Superpotential {
        terms: poly
            .facets()
            .iter()
            .map(|f| Monomial {
                offset: f.offset.clone(),
                exponent: f.normal.clone(),
            })
            .collect(),
    }
}

impl Superpotential {
    pub fn nvars(&self) -> usize {
        self.terms.first().map_or(0, |t| t.exponent.len())
    }

    /// `W_1 + W_2` with the variables of `other` placed after those of `self`.
    pub fn disjoint_sum(&self, other: &Superpotential) -> Superpotential {
        let (n1, n2) = (self.nvars(), other.nvars());
        let mut terms: Vec<Monomial> = self
            .terms
            .iter()
            .map(|t| Monomial {
                offset: t.offset.clone(),
                exponent: [t.exponent.clone(), vec![0; n2]].concat(),
            })
            .collect();
        terms.extend(other.terms.iter().map(|t| Monomial {
            offset: t.offset.clone(),
            exponent: [vec![0; n1], t.exponent.clone()].concat(),
        }));
        Superpotential { terms }
    }
}

fn write_monomial(
    f: &mut fmt::Formatter<'_>,
    coeff: i64,
    offset: &Rational,
    exponent: &[i64],
    var: &str,
) -> fmt::Result {
    let mut factors = Vec::new();
    if coeff != 1 {
        factors.push(coeff.to_string());
    }
    if !offset.is_zero() {
        factors.push(if *offset == Rational::one() {
            "s".to_string()
        } else {
            format!("s^({offset})")
        });
    }
    for (i, &e) in exponent.iter().enumerate() {
        match e {
            0 => {}
            1 => factors.push(format!("{var}{}", i + 1)),
            _ => factors.push(format!("{var}{}^{e}", i + 1)),
        }
    }
    if factors.is_empty() {
        factors.push("1".into());
    }
    write!(f, "{}", factors.join("*"))
}

impl fmt::Display for Superpotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write_monomial(f, 1, &t.offset, &t.exponent, "y")?;
        }
        Ok(())
    }
}

/// `coeff * s^offset * y^exponent`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LaurentTerm {
    pub coeff: i64,
    pub offset: Rational,
    pub exponent: Vec<i64>,
}

/// The relation `y_i ∂W/∂y_i = 0` as a sum of Laurent terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalEquation {
    pub variable: usize,
    pub terms: Vec<LaurentTerm>,
}

impl fmt::Display for CriticalEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            let (sign, c) = if t.coeff < 0 {
                ("-", -t.coeff)
            } else {
                ("+", t.coeff)
            };
            match (i, sign) {
                (0, "-") => write!(f, "-")?,
                (0, _) => {}
                _ => write!(f, " {sign} ")?,
            }
            write_monomial(f, c, &t.offset, &t.exponent, "y")?;
        }
        write!(f, " = 0")
    }
}

pub fn critical_system(w: &Superpotential) -> Vec<CriticalEquation> {
    (0..w.nvars())
        .map(|i| CriticalEquation {
            variable: i,
            terms: w
                .terms
                .iter()
                .filter(|t| t.exponent[i] != 0)
                .map(|t| LaurentTerm {
                    coeff: t.exponent[i],
                    offset: t.offset.clone(),
                    exponent: t.exponent.clone(),
                })
                .collect(),
        })
        .collect()
}

/// Substitutes `y_i = u_{block[i]}`, collecting terms; keys are exponents in the block variables.
pub fn substitute_blocks(eq: &CriticalEquation, block: &[usize]) -> BTreeMap<Vec<i64>, SPoly> {
    let nblocks = block.iter().max().map_or(0, |m| m + 1);
    let mut out: BTreeMap<Vec<i64>, SPoly> = BTreeMap::new();
    for t in &eq.terms {
        let mut e = vec![0; nblocks];
        for (i, &x) in t.exponent.iter().enumerate() {
            e[block[i]] += x;
        }
        let c = SPoly::monomial(t.offset.clone(), Rational::from_integer(t.coeff));
        let sum = out.get(&e).map(|x| x + &c).unwrap_or(c);
        if sum.is_zero() {
            out.remove(&e);
        } else {
            out.insert(e, sum);
        }
    }
    out
}

/// Leading exponents `-ν(p_i)` of one class of critical points.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ValuationVector {
    #[serde(rename = "vector")]
    pub values: Vec<Rational>,
    pub multiplicity: usize,
    #[serde(rename = "degenerate")]
    pub degenerate_flag: bool,
}

impl ValuationVector {
    pub fn point(&self) -> Point {
        self.values.clone()
    }

    /// The class for the polytope `scale * P + shift`.
    pub fn placed(&self, scale: &Rational, shift: &[Rational]) -> ValuationVector {
        ValuationVector {
            values: self
                .values
                .iter()
                .zip(shift)
                .map(|(v, t)| v * scale + t)
                .collect(),
            multiplicity: self.multiplicity,
            degenerate_flag: self.degenerate_flag,
        }
    }
}

/// `(n - k - 1) / (n + 1)`, where the two classes of `X_k` merge.
pub fn monotone_threshold(n: usize, k: usize) -> Rational {
    Rational::new((n - k - 1) as i64, (n + 1) as i64)
}

fn check_xk(n: usize, k: usize, lambda: &Rational) -> Result<()> {
    if n < 2 {
        return Err(Error::out_of_range("n", "n >= 2"));
    }
    if k > n - 2 {
        return Err(Error::out_of_range("k", format!("0 <= k <= {}", n - 2)));
    }
    if !lambda.is_positive() || *lambda >= Rational::one() {
        return Err(Error::out_of_range("lambda", "0 < lambda < 1"));
    }
    Ok(())
}

/// `z^{n-k} (z + s^{-λ} z^{n-k})^{k+1} - s`.
pub fn xk_symmetric_poly(n: usize, k: usize, lambda: &Rational) -> Result<ZPoly> {
    check_xk(n, k, lambda)?;
    let m = (n - k) as i64;
    let inner = ZPoly::z() + ZPoly::term(m, SPoly::s_pow(-lambda));
    let p = ZPoly::term(m, SPoly::one()) * inner.pow((k + 1) as u32)
        - ZPoly::constant(SPoly::s_pow(Rational::one()));
    Ok(p.normalize())
}

/// Classes `(v(y) ×k, v(z) ×(n-k))` with `(k+1) v(y) + (n-k) v(z) = 1`.
pub fn critical_valuations_xk(
    n: usize,
    k: usize,
    lambda: &Rational,
) -> Result<Vec<ValuationVector>> {
    let p = xk_symmetric_poly(n, k, lambda)?;
    let at_threshold = *lambda == monotone_threshold(n, k);
    let nk = Rational::from_integer((n - k) as i64);
    let k1 = Rational::from_integer((k + 1) as i64);
    Ok(root_valuations(&p)?
        .into_iter()
        .map(|rc| {
            let vy = (Rational::one() - &nk * &rc.value) / &k1;
            let mut values = vec![vy; k];
            values.extend(std::iter::repeat_n(rc.value, n - k));
            ValuationVector {
                values,
                multiplicity: rc.multiplicity,
                degenerate_flag: at_threshold,
            }
        })
        .collect())
}

/// The single class of `CP^m` scaled by `scale`: every coordinate `scale / (m + 1)`.
pub fn critical_valuations_simplex(m: usize, scale: &Rational) -> Result<Vec<ValuationVector>> {
    if m == 0 {
        return Err(Error::out_of_range("n", "n >= 1"));
    }
    if !scale.is_positive() {
        return Err(Error::out_of_range("scale", "scale > 0"));
    }
    // symmetric point y_i = z: z^{m+1} = s^scale
    let p =
        ZPoly::term((m + 1) as i64, SPoly::one()) - ZPoly::constant(SPoly::s_pow(scale.clone()));
    Ok(root_valuations(&p)?
        .into_iter()
        .map(|rc| ValuationVector {
            values: vec![rc.value; m],
            multiplicity: rc.multiplicity,
            degenerate_flag: false,
        })
        .collect())
}

/// The class of the interval `[lo, hi]`: its midpoint, with multiplicity 2.
pub fn critical_valuations_interval(lo: &Rational, hi: &Rational) -> Result<Vec<ValuationVector>> {
    if lo >= hi {
        return Err(Error::out_of_range("hi", "lo < hi"));
    }
    let classes = critical_valuations_simplex(1, &(hi - lo))?;
    Ok(classes
        .iter()
        .map(|c| c.placed(&Rational::one(), std::slice::from_ref(lo)))
        .collect())
}

/// All concatenations, multiplicities multiplied, degeneracy or-ed.
pub fn product_valuations(a: &[ValuationVector], b: &[ValuationVector]) -> Vec<ValuationVector> {
    a.iter()
        .flat_map(|x| {
            b.iter().map(move |y| ValuationVector {
                values: [x.values.clone(), y.values.clone()].concat(),
                multiplicity: x.multiplicity * y.multiplicity,
                degenerate_flag: x.degenerate_flag || y.degenerate_flag,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PotentialReport {
    pub polytope: String,
    pub superpotential: String,
    pub classes: Vec<ValuationVector>,
}

impl PotentialReport {
    pub fn new(poly: &DelzantPolytope, classes: Vec<ValuationVector>) -> Self {
        PotentialReport {
            polytope: poly.label().to_string(),
            superpotential: superpotential(poly).to_string(),
            classes,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{blowup_face, interval, simplex_cpn};
    use crate::rational::rat;

    #[test]
    fn simplex_superpotential() {
        let w = superpotential(&simplex_cpn(2, Rational::one()).unwrap());
        let mut got: Vec<String> = w
            .terms
            .iter()
            .map(|t| format!("{} {:?}", t.offset, t.exponent))
            .collect();
        got.sort();
        assert_eq!(got, vec!["0 [0, 1]", "0 [1, 0]", "1 [-1, -1]"]);
    }

    #[test]
    fn blowup_has_extra_term() {
        let w = superpotential(&blowup_face(3, 1, rat(1, 8)).unwrap());
        assert!(w.terms.contains(&Monomial {
            offset: rat(-1, 8),
            exponent: vec![0, 1, 1]
        }));
        assert_eq!(w.terms.len(), 5);
    }

    #[test]
    fn interval_system() {
        let w = superpotential(&interval(rat(0, 1), rat(1, 1)).unwrap());
        let sys = critical_system(&w);
        assert_eq!(sys.len(), 1);
        assert_eq!(sys[0].to_string(), "-s*y1^-1 + y1 = 0");
    }

    #[test]
    fn xk_poly_small_case() {
        let p = xk_symmetric_poly(2, 0, &rat(1, 8)).unwrap();
        let expected = ZPoly::from_terms([
            (3, SPoly::one()),
            (4, SPoly::s_pow(rat(-1, 8))),
            (0, -SPoly::s_pow(rat(1, 1))),
        ]);
        assert_eq!(p, expected);
        assert!(matches!(
            xk_symmetric_poly(2, 1, &rat(1, 8)),
            Err(Error::ParameterOutOfRange { .. })
        ));
        assert!(matches!(
            xk_symmetric_poly(2, 0, &rat(1, 1)),
            Err(Error::ParameterOutOfRange { .. })
        ));
    }

    #[test]
    fn xk_classes_below_threshold() {
        let c = critical_valuations_xk(2, 0, &rat(1, 8)).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(
            (c[0].values.clone(), c[0].multiplicity),
            (vec![rat(1, 3), rat(1, 3)], 3)
        );
        assert_eq!(
            (c[1].values.clone(), c[1].multiplicity),
            (vec![rat(1, 8), rat(1, 8)], 1)
        );
        let c = critical_valuations_xk(3, 1, &rat(1, 8)).unwrap();
        assert_eq!(c[1].values, vec![rat(3, 8), rat(1, 8), rat(1, 8)]);
    }

    #[test]
    fn xk_single_class_above_threshold() {
        let c = critical_valuations_xk(2, 0, &rat(1, 2)).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].values, vec![rat(3, 8), rat(3, 8)]);
        assert_eq!(c[0].multiplicity, 4);
        assert!(!c[0].degenerate_flag);
        let at = critical_valuations_xk(2, 0, &rat(1, 3)).unwrap();
        assert_eq!(at.len(), 1);
        assert!(at[0].degenerate_flag);
    }

    #[test]
    fn thresholds() {
        assert_eq!(monotone_threshold(2, 0), rat(1, 3));
        assert_eq!(monotone_threshold(3, 1), rat(1, 4));
        assert_eq!(monotone_threshold(5, 2), rat(1, 3));
    }

    #[test]
    fn simplex_and_interval_classes() {
        let c = critical_valuations_simplex(2, &rat(1, 3)).unwrap();
        assert_eq!(
            c,
            vec![ValuationVector {
                values: vec![rat(1, 9), rat(1, 9)],
                multiplicity: 3,
                degenerate_flag: false
            }]
        );
        let c = critical_valuations_interval(&rat(-1, 2), &rat(1, 1)).unwrap();
        assert_eq!(c[0].values, vec![rat(1, 4)]);
    }

    #[test]
    fn products_concatenate() {
        let a = critical_valuations_simplex(2, &Rational::one()).unwrap();
        let b = critical_valuations_interval(&rat(0, 1), &rat(1, 1)).unwrap();
        let p = product_valuations(&a, &b);
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].values, vec![rat(1, 3), rat(1, 3), rat(1, 2)]);
        assert_eq!(p[0].multiplicity, 6);
    }

    #[test]
    fn report_json() {
        let d = blowup_face(2, 0, rat(1, 8)).unwrap();
        let r = PotentialReport::new(&d, critical_valuations_xk(2, 0, &rat(1, 8)).unwrap());
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["classes"][1]["vector"][0], "1/8");
        assert_eq!(v["classes"][0]["multiplicity"], 3);
        assert_eq!(v["classes"][0]["degenerate"], false);
    }
}
